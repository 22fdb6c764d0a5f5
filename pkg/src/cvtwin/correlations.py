"""Transport of the field second moments and the inseparability measure.

The 4x4 Hermitian matrix ``corr = <a a^dag>`` in the component ordering
``a = (a_s, a_s^dag, a_c, a_c^dag)`` starts from vacuum at the entrance and
obeys

    d corr / d xi = C(xi) corr + corr C(xi)^dag + Z(xi).

Two evaluation modes exist: ``"full"`` rebuilds C and Z from the
position-dependent mean fields, ``"stable"`` freezes them at the loss-free
plateau fields, which makes the transport a constant-coefficient Lyapunov
equation with a matrix-exponential closed form.

Entanglement of the two output modes is quantified by the joint quadrature
variance V; values below 4 certify inseparability in this normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import IntegrationFailure, NonPhysical
from .fluctuations import AssemblyOptions, DEFAULT_OPTIONS, assemble_fluctuations
from .integrator import solve_matrix_ode
from .mean_field import propagate_mean_field, stable_state
from .params import ModelParams

MODES = ("full", "stable")

_V_FLOOR = -1e-8


@dataclass(frozen=True)
class CorrelationState:
    """Second-moment matrix at one position, plus sanity diagnostics."""

    xi: float
    corr: np.ndarray

    @property
    def n_s(self) -> float:
        """Generated-mode excitation <a_s^dag a_s>."""
        return float(self.corr[1, 1].real)

    @property
    def n_c(self) -> float:
        """Control-mode excitation <a_c^dag a_c>."""
        return float(self.corr[3, 3].real)

    @property
    def cross(self) -> complex:
        """Anomalous cross moment <a_s a_c>."""
        return complex(self.corr[0, 3])

    @property
    def commutator_s(self) -> float:
        """<[a_s, a_s^dag]> diagnostic; 1 when the transport is canonical."""
        return float(self.corr[0, 0].real - self.corr[1, 1].real)

    @property
    def commutator_c(self) -> float:
        return float(self.corr[2, 2].real - self.corr[3, 3].real)

    @property
    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.corr - self.corr.conj().T)))


@dataclass(frozen=True)
class EntanglementResult:
    """Minimum joint quadrature variance and the moments behind it."""

    v: float
    n_s: float
    n_c: float
    cross: complex
    theta_opt: float


def vacuum_initial_correlations() -> CorrelationState:
    """Vacuum input at the medium entrance: <a a^dag> = diag(1, 0, 1, 0)."""
    return CorrelationState(xi=0.0, corr=np.diag([1.0, 0.0, 1.0, 0.0]).astype(complex))


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def integrate_correlations(
    drift_of_xi,
    noise_of_xi,
    xi_end: float,
    corr0: np.ndarray,
    xi_eval=None,
    rtol: float = 1e-9,
    atol: float = 1e-12,
) -> list[CorrelationState]:
    """Integrate the transport equation for caller-supplied C(xi), Z(xi).

    The drift/noise arguments may be constant 4x4 arrays or callables of
    xi; this is the hook used by the closed-form squeeze-law checks.
    """
    c_fn = drift_of_xi if callable(drift_of_xi) else (lambda _x, _c=drift_of_xi: _c)
    z_fn = noise_of_xi if callable(noise_of_xi) else (lambda _x, _z=noise_of_xi: _z)

    def rhs(xi, corr):
        c = c_fn(xi)
        return c @ corr + corr @ c.conj().T + z_fn(xi)

    pts = solve_matrix_ode(
        rhs,
        (0.0, xi_end),
        np.asarray(corr0, dtype=complex),
        t_eval=xi_eval,
        rtol=rtol,
        atol=atol,
        postprocess=_hermitize,
    )
    return [CorrelationState(xi=t, corr=y) for t, y in pts]


def lyapunov_closed_form(
    drift: np.ndarray, noise: np.ndarray, xi: float, corr0: np.ndarray
) -> np.ndarray:
    """Matrix-exponential solution of the constant-coefficient transport.

    The block-triangular exponential

        exp([[C, Z], [0, -C^dag]] h) = [[E, F_h], [0, E^-dag]]

    yields the exact one-step map corr -> E corr E^dag + F_h E^dag.  The
    block matrix mixes the growing and decaying directions of C, so it is
    evaluated only for a substep h with ||C|| h <= 1 and the exact map is
    iterated; this keeps every intermediate quantity at the scale of the
    solution itself.  Raises IntegrationFailure when the solution grows
    beyond the precision budget (strong-gain parameter regions).
    """
    from .integrator import MAGNITUDE_LIMIT

    n = drift.shape[0]
    xi = float(xi)
    n_steps = max(1, int(np.ceil(np.linalg.norm(drift, 2) * xi)))
    h = xi / n_steps
    block = np.zeros((2 * n, 2 * n), dtype=complex)
    block[:n, :n] = drift
    block[:n, n:] = noise
    block[n:, n:] = -drift.conj().T
    g = expm(block * h)
    e = g[:n, :n]
    e_dag = e.conj().T
    f = g[:n, n:] @ e_dag  # accumulated noise over one substep

    corr = np.asarray(corr0, dtype=complex)
    for _ in range(n_steps):
        corr = e @ corr @ e_dag + f
        if not np.all(np.isfinite(corr)) or np.max(np.abs(corr)) > MAGNITUDE_LIMIT:
            raise IntegrationFailure(
                "closed-form transport exceeded the precision budget"
            )
    return _hermitize(corr)


def propagate_correlations(
    params: ModelParams,
    xi_end: float = 1.0,
    mode: str = "full",
    *,
    initial: np.ndarray | None = None,
    xi_eval=None,
    options: AssemblyOptions = DEFAULT_OPTIONS,
    rtol: float = 1e-9,
    atol: float = 1e-12,
) -> CorrelationState | list[CorrelationState]:
    """Second moments at ``xi_end`` starting from vacuum (or ``initial``).

    With ``xi_eval`` given, returns the trajectory at those positions
    instead of the single end state.  Raises IntegrationFailure when the
    transport diverges beyond double precision (strong-gain parameter
    regions) and SingularSystem from degenerate assembly points.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not 0.0 < xi_end <= 1.0:
        raise ValueError(f"xi_end must lie in (0, 1], got {xi_end}")
    corr0 = vacuum_initial_correlations().corr if initial is None else initial

    if mode == "stable":
        fl = assemble_fluctuations(params, stable_state(params), options=options)
        states = integrate_correlations(
            fl.drift, fl.noise, xi_end, corr0, xi_eval=xi_eval, rtol=rtol, atol=atol
        )
    else:

        def rhs(xi, corr):
            fields = propagate_mean_field(params, xi)
            fl = assemble_fluctuations(params, fields, options=options)
            return fl.drift @ corr + corr @ fl.drift.conj().T + fl.noise

        pts = solve_matrix_ode(
            rhs,
            (0.0, xi_end),
            np.asarray(corr0, dtype=complex),
            t_eval=xi_eval,
            rtol=rtol,
            atol=atol,
            postprocess=_hermitize,
        )
        states = [CorrelationState(xi=t, corr=y) for t, y in pts]

    return states if xi_eval is not None else states[-1]


def dgcz_theta(corr: CorrelationState | np.ndarray, theta: float) -> float:
    """Joint quadrature variance at quadrature angle ``theta``.

    V(theta) = 4 [1 + n_s + n_c + 2 Re(<a_s a_c> e^{-2 i theta})];
    the beat moments <a_s^dag a_c> cancel identically between the two
    variance terms, so only the anomalous cross moment enters.
    """
    m = corr.corr if isinstance(corr, CorrelationState) else np.asarray(corr)
    n_s = m[1, 1].real
    n_c = m[3, 3].real
    cross = m[0, 3]
    return float(4.0 * (1.0 + n_s + n_c + 2.0 * (cross * np.exp(-2j * theta)).real))


def dgcz_value(corr: CorrelationState | np.ndarray) -> EntanglementResult:
    """Minimum of V(theta) over the quadrature angle.

    V = 4 (1 + <a_s^dag a_s> + <a_c^dag a_c> - 2 |<a_s a_c>|), attained at
    theta_opt = arg(<a_s a_c>)/2 + pi/2.  Values below 4 certify
    entanglement of the two output modes; raises NonPhysical when V drops
    below -1e-8, which indicates a corrupted second-moment matrix.
    """
    m = corr.corr if isinstance(corr, CorrelationState) else np.asarray(corr)
    n_s = float(m[1, 1].real)
    n_c = float(m[3, 3].real)
    cross = complex(m[0, 3])
    v = 4.0 * (1.0 + n_s + n_c - 2.0 * abs(cross))
    if not np.isfinite(v):
        raise NonPhysical("inseparability value is not finite")
    if v < _V_FLOOR:
        raise NonPhysical(f"inseparability value {v} below the physical floor")
    theta_opt = float(np.angle(cross) / 2.0 + np.pi / 2.0)
    return EntanglementResult(v=v, n_s=n_s, n_c=n_c, cross=cross, theta_opt=theta_opt)
