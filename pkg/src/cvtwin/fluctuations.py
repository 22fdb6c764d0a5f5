"""Assembly of the linearized quantum-fluctuation system at one position.

The nine atomic fluctuation operators, ordered as

    y = (s_eg1, s_eg2, s_g2g1, s_g1g1, s_g2g2, s_ee, s_g1g2, s_g2e, s_g1e),

obey a linear steady-state system ``M1 y + M2 a + r = 0`` driven by the four
field fluctuation operators ``a = (a_s, a_s^dag, a_c, a_c^dag)`` and by
Langevin noises ``r``.  Eliminating the atoms yields the 4x4 drift matrix C
of the spatial Langevin equation for ``a`` and the 4x4 noise correlation
matrix Z that enters the second-moment transport equation.

All entries are evaluated with the weak-field atomic state: populations
pinned to the prepared superposition, optical coherences following the local
mean fields.  The sixth row of the system is the population-conservation
constraint, which replaces the (redundant) excited-population equation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSystem
from .mean_field import FieldState, MeanFieldCoherences, mean_field_coherences
from .params import ModelParams

#: Row index (0-based) of s_g1e in the atomic fluctuation vector.
IDX_G1E = 8
#: Row index of s_g2e.
IDX_G2E = 7
#: Row indices of the adjoint coherences s_eg1, s_eg2.
IDX_EG1 = 0
IDX_EG2 = 1

GROUND_DETUNING_CHOICES = ("two_photon", "single_photon")


@dataclass(frozen=True)
class AssemblyOptions:
    """Knobs of the fluctuation assembly.

    ground_detuning:
        Which detuning appears in the ground-coherence decay constant.
        ``"two_photon"`` (default) uses the two-photon detuning, matching
        the dynamical equation of the ground-state coherence;
        ``"single_photon"`` keeps the control-field detuning instead, for
        compatibility with the alternative printed convention.
    g:
        Single-photon coupling strength.  It cancels between the atomic
        source terms and the drift prefactor, so any positive value gives
        identical C and Z; exposed to make that invariance testable.
    cond_limit:
        Condition-number guard for the 9x9 inversion.
    """

    ground_detuning: str = "two_photon"
    g: float = 1.0
    cond_limit: float = 1e12

    def __post_init__(self) -> None:
        if self.ground_detuning not in GROUND_DETUNING_CHOICES:
            raise ValueError(
                f"ground_detuning must be one of {GROUND_DETUNING_CHOICES}"
            )
        if self.g <= 0:
            raise ValueError("g must be positive")


DEFAULT_OPTIONS = AssemblyOptions()


@dataclass(frozen=True)
class FluctuationMatrices:
    """All matrices of the eliminated fluctuation system at one position."""

    m1: np.ndarray          # 9x9 atomic system matrix
    m2: np.ndarray          # 9x4 field coupling matrix
    t: np.ndarray | None    # 9x9, -inv(m1); None on the zero-field branch
    drift: np.ndarray       # 4x4 drift matrix C
    noise: np.ndarray       # 4x4 noise correlation matrix Z
    gamma_t13: complex
    gamma_t23: complex
    gamma_t12: complex

    @property
    def coupling_rows(self) -> tuple[np.ndarray, np.ndarray]:
        """The two independent drift rows (generated-field and control-field)."""
        return self.drift[0].copy(), self.drift[2].copy()


def effective_rates(params: ModelParams, options: AssemblyOptions = DEFAULT_OPTIONS):
    """Complex decay constants of the three coherence sectors."""
    g = params.gamma
    gt13 = g / 2 - 1j * params.delta_s
    gt23 = (g + params.gamma12) / 2 - 1j * params.delta_c
    ground_detuning = (
        params.delta if options.ground_detuning == "two_photon" else params.delta_c
    )
    gt12 = (params.gamma12 / 2 + params.gamma_phi) - 1j * ground_detuning
    return complex(gt13), complex(gt23), complex(gt12)


def build_m1(
    params: ModelParams,
    fields: FieldState,
    options: AssemblyOptions = DEFAULT_OPTIONS,
) -> np.ndarray:
    """9x9 coefficient matrix of the atomic fluctuation system.

    Row 6 (0-based row 5) is the population-conservation constraint
    (0,0,0,1,1,1,0,0,0).
    """
    gt13, gt23, gt12 = effective_rates(params, options)
    g1, g2, g12 = params.gamma1, params.gamma2, params.gamma12
    oc, os_ = fields.omega_c, fields.omega_s
    ocs, oss = np.conj(oc), np.conj(os_)

    m = np.zeros((9, 9), dtype=complex)
    m[0, 0] = -np.conj(gt13)
    m[0, 2] = -0.5j * ocs
    m[0, 3] = -0.5j * oss
    m[0, 5] = 0.5j * oss

    m[1, 1] = -np.conj(gt23)
    m[1, 4] = -0.5j * ocs
    m[1, 5] = 0.5j * ocs
    m[1, 6] = -0.5j * oss

    m[2, 0] = -0.5j * oc
    m[2, 2] = -np.conj(gt12)
    m[2, 7] = 0.5j * oss

    m[3, 0] = -0.5j * os_
    m[3, 4] = g12
    m[3, 5] = g1
    m[3, 8] = 0.5j * oss

    m[4, 1] = -0.5j * oc
    m[4, 4] = -g12
    m[4, 5] = g2
    m[4, 7] = 0.5j * ocs

    m[5, 3] = 1.0
    m[5, 4] = 1.0
    m[5, 5] = 1.0

    m[6, 1] = -0.5j * os_
    m[6, 6] = -gt12
    m[6, 8] = 0.5j * ocs

    m[7, 2] = 0.5j * os_
    m[7, 4] = 0.5j * oc
    m[7, 5] = -0.5j * oc
    m[7, 7] = -gt23

    m[8, 3] = 0.5j * os_
    m[8, 5] = -0.5j * os_
    m[8, 6] = 0.5j * oc
    m[8, 8] = -gt13
    return m


def build_m2(
    params: ModelParams,
    coh: MeanFieldCoherences,
    options: AssemblyOptions = DEFAULT_OPTIONS,
) -> np.ndarray:
    """9x4 coupling of the atomic fluctuations to the field fluctuations.

    Column order (a_s, a_s^dag, a_c, a_c^dag); overall factor g/2.
    """
    c1, c2 = params.c1, params.c2
    p1 = coh.sigma_g1g1 - coh.sigma_ee
    p2 = coh.sigma_g2g2 - coh.sigma_ee
    s12, s21 = coh.sigma_g1g2, coh.sigma_g2g1
    e1, e2 = coh.sigma_eg1, coh.sigma_eg2
    d1, d2 = coh.sigma_g1e, coh.sigma_g2e

    m = np.zeros((9, 4), dtype=complex)
    m[0, 1] = -1j * p1
    m[0, 3] = -1j * s21
    m[1, 1] = -1j * s12
    m[1, 3] = -1j * p2
    m[2, 1] = 1j * d2
    m[2, 2] = -1j * e1
    m[3, 0] = -1j * e1
    m[3, 1] = 1j * d1
    m[4, 2] = -1j * e2
    m[4, 3] = 1j * d2
    m[6, 0] = -1j * e2
    m[6, 3] = 1j * d1
    m[7, 0] = 1j * s21
    m[7, 2] = 1j * p2
    m[8, 0] = 1j * p1
    m[8, 2] = 1j * s12
    return (options.g / 2.0) * m


def diffusion_matrix(params: ModelParams) -> np.ndarray:
    """9x9 Langevin diffusion matrix in the noise-vector ordering.

    Entries are the second moments of the atomic noise operators fixed by
    the damping structure of the model (generalized Einstein relations),
    evaluated with the weak-field atomic state: populations |c1|^2, |c2|^2,
    zero excited population, ground-state coherence c1* c2.  Optical
    coherences are zero at this order, which removes every entry coupling
    an optical noise to a population noise and leaves a Hermitian,
    positive-semidefinite matrix for any superposition.
    """
    g = params.gamma
    g12, gphi = params.gamma12, params.gamma_phi
    p1 = abs(params.c1) ** 2
    p2 = abs(params.c2) ** 2
    s12 = np.conj(params.c1) * params.c2
    s21 = np.conj(s12)

    d = np.zeros((9, 9), dtype=complex)
    d[2, 2] = 2.0 * gphi * p2
    d[3, 3] = g12 * p2
    d[3, 4] = -g12 * p2
    d[3, 6] = -g12 * s21
    d[4, 3] = -g12 * p2
    d[4, 4] = g12 * p2
    d[4, 6] = g12 * s21
    d[6, 3] = -g12 * s12
    d[6, 4] = g12 * s12
    d[6, 6] = g12 * p2 + (g12 + 2.0 * gphi) * p1
    d[7, 7] = g * p2
    d[7, 8] = (g - gphi) * s21
    d[8, 7] = (g - gphi) * s12
    d[8, 8] = g12 * p2 + g * p1
    return d


def _cond_estimate_1norm(m: np.ndarray, m_inv: np.ndarray) -> float:
    return float(
        np.linalg.norm(m, 1) * np.linalg.norm(m_inv, 1)
    )


def _zero_field_branch(params: ModelParams, options: AssemblyOptions):
    """Closed-form coupling rows and noise projector for zero fields.

    With no fields the optical-coherence equations decouple from the
    (possibly singular) population sector, so the elimination can be done
    per row even though the full 9x9 matrix may not be invertible.
    """
    gt13, gt23, _ = effective_rates(params, options)
    c1, c2 = params.c1, params.c2
    half_g = 0.5j * options.g
    row1 = np.array(
        [half_g * abs(c1) ** 2 / gt13, 0.0, half_g * np.conj(c1) * c2 / gt13, 0.0]
    )
    row2 = np.array(
        [half_g * c1 * np.conj(c2) / gt23, 0.0, half_g * abs(c2) ** 2 / gt23, 0.0]
    )
    v = np.zeros((4, 9), dtype=complex)
    v[0, IDX_G1E] = 1.0 / gt13
    v[1, IDX_EG1] = -1.0 / np.conj(gt13)
    v[2, IDX_G2E] = 1.0 / gt23
    v[3, IDX_EG2] = -1.0 / np.conj(gt23)
    return row1, row2, v


def _conjugate_row(row: np.ndarray) -> np.ndarray:
    """Drift row of an adjoint field component: (p,q,r,s) -> (q*,p*,s*,r*)."""
    return np.conj(row)[[1, 0, 3, 2]]


def assemble_fluctuations(
    params: ModelParams,
    fields: FieldState,
    coh: MeanFieldCoherences | None = None,
    options: AssemblyOptions = DEFAULT_OPTIONS,
) -> FluctuationMatrices:
    """Drift and noise matrices of the field-fluctuation transport at one point."""
    if coh is None:
        coh = mean_field_coherences(params, fields)
    gt13, gt23, gt12 = effective_rates(params, options)
    m1 = build_m1(params, fields, options)
    m2 = build_m2(params, coh, options)

    if fields.omega_c == 0 and fields.omega_s == 0:
        row1, row2, v = _zero_field_branch(params, options)
        t = None
    else:
        try:
            m1_inv = np.linalg.inv(m1)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"atomic system singular at xi={fields.xi}") from exc
        cond = _cond_estimate_1norm(m1, m1_inv)
        if cond > options.cond_limit:
            raise SingularSystem(
                f"atomic system ill-conditioned at xi={fields.xi}: cond ~ {cond:.3e}"
            )
        t = -m1_inv
        tm2 = t @ m2
        row1 = tm2[IDX_G1E]
        row2 = tm2[IDX_G2E]
        v = np.vstack([t[IDX_G1E], -t[IDX_EG1], t[IDX_G2E], -t[IDX_EG2]])

    pref = 1j * params.gamma * params.alpha / (2.0 * options.g)
    drift = np.empty((4, 4), dtype=complex)
    drift[0] = pref * row1
    drift[1] = _conjugate_row(drift[0])
    drift[2] = pref * row2
    drift[3] = _conjugate_row(drift[2])

    d = diffusion_matrix(params)
    noise = (params.gamma * params.alpha / 4.0) * (v @ d @ v.conj().T)

    return FluctuationMatrices(
        m1=m1,
        m2=m2,
        t=t,
        drift=drift,
        noise=noise,
        gamma_t13=gt13,
        gamma_t23=gt23,
        gamma_t12=gt12,
    )


def drift_matrix(
    params: ModelParams,
    fields: FieldState,
    coh: MeanFieldCoherences | None = None,
    options: AssemblyOptions = DEFAULT_OPTIONS,
) -> np.ndarray:
    """4x4 drift matrix C of the field-fluctuation transport equation."""
    return assemble_fluctuations(params, fields, coh, options).drift


def noise_matrix(
    params: ModelParams,
    fields: FieldState,
    coh: MeanFieldCoherences | None = None,
    options: AssemblyOptions = DEFAULT_OPTIONS,
) -> np.ndarray:
    """4x4 Langevin noise correlation matrix Z."""
    return assemble_fluctuations(params, fields, coh, options).noise
