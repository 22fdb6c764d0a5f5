"""Classical (mean-field) propagation of the two beams through the medium.

The control field enters at ``xi = 0`` with amplitude ``omega_in`` while the
generated field starts from zero; the prepared ground-state coherence then
transfers amplitude between them as they co-propagate.  Because the coupled
propagation equations are linear with constant coefficients, the profile has
a closed form governed by two complex absorption coefficients ``beta1``,
``beta2`` and their population-weighted sum ``W``.  After a boundary layer of
thickness ``~1/alpha`` the fields lock to a loss-free configuration in which
both atomic coherences vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ModelParams


@dataclass(frozen=True)
class FieldState:
    """Mean fields and propagation constants at one position.

    ``xi`` is the dimensionless position z/L in [0, 1]; ``omega_c`` and
    ``omega_s`` are the complex Rabi amplitudes of the control and
    generated fields; ``beta1``, ``beta2`` and ``w_const`` are the complex
    propagation coefficients (length unit L = 1).
    """

    xi: float
    omega_c: complex
    omega_s: complex
    beta1: complex
    beta2: complex
    w_const: complex


@dataclass(frozen=True)
class MeanFieldCoherences:
    """Weak-field atomic expectation values at one position.

    Populations stay pinned to the prepared superposition at this order;
    only the two optical coherences respond to the local fields.
    """

    sigma_g1e: complex
    sigma_g2e: complex
    sigma_g1g1: float
    sigma_g2g2: float
    sigma_ee: float
    sigma_g1g2: complex

    @property
    def sigma_eg1(self) -> complex:
        return np.conj(self.sigma_g1e)

    @property
    def sigma_eg2(self) -> complex:
        return np.conj(self.sigma_g2e)

    @property
    def sigma_g2g1(self) -> complex:
        return np.conj(self.sigma_g1g2)


def beta_coefficients(params: ModelParams) -> tuple[complex, complex, complex]:
    """Complex propagation coefficients (beta1, beta2, W).

    beta1 = Gamma*alpha / (2L(2*Delta_s + i*Gamma))
    beta2 = Gamma*alpha / (2L(2*Delta_c + i*(Gamma + Gamma12)))
    W     = beta1|c1|^2 + beta2|c2|^2

    with L = 1.  Both denominators are bounded away from zero for any
    positive total decay rate, and Im(beta) < 0 always, so the transient
    factor exp(-i W xi) decays with depth.
    """
    g = params.gamma
    b1 = g * params.alpha / (2.0 * (2.0 * params.delta_s + 1j * g))
    b2 = g * params.alpha / (2.0 * (2.0 * params.delta_c + 1j * (g + params.gamma12)))
    w = b1 * abs(params.c1) ** 2 + b2 * abs(params.c2) ** 2
    return b1, b2, w


def propagate_mean_field(params: ModelParams, xi: float, method: str = "closed") -> FieldState:
    """Mean fields at position ``xi``.

    ``method="closed"`` evaluates the closed-form solution; ``method="numeric"``
    integrates the coupled first-order propagation equations with a
    fixed-order Runge-Kutta scheme and exists as an independent
    cross-check of the closed form.
    """
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"xi must lie in [0, 1], got {xi}")
    b1, b2, w = beta_coefficients(params)
    if method == "closed":
        oc, os_ = _closed_form(params, xi, b1, b2, w)
    elif method == "numeric":
        oc, os_ = _integrate_fields(params, xi, b1, b2)
    else:
        raise ValueError(f"unknown method {method!r}")
    return FieldState(xi=xi, omega_c=oc, omega_s=os_, beta1=b1, beta2=b2, w_const=w)


def _closed_form(params: ModelParams, xi, b1, b2, w):
    c1, c2 = params.c1, params.c2
    omega = params.omega_in
    ph = np.exp(-1j * w * xi)
    oc = (omega / w) * (b2 * abs(c2) ** 2 * ph + b1 * abs(c1) ** 2)
    os_ = (omega / w) * np.conj(c1) * c2 * b1 * (ph - 1.0)
    return complex(oc), complex(os_)


def _field_derivative(y, b1, b2, c1, c2):
    os_, oc = y
    dos = -1j * b1 * (abs(c1) ** 2 * os_ + np.conj(c1) * c2 * oc)
    doc = -1j * b2 * (c1 * np.conj(c2) * os_ + abs(c2) ** 2 * oc)
    return np.array([dos, doc])


def _integrate_fields(params: ModelParams, xi, b1, b2, n_steps_per_unit_absorption=8):
    # Classic RK4 with steps resolving the absorption boundary layer.
    c1, c2 = params.c1, params.c2
    n = max(64, int(n_steps_per_unit_absorption * params.alpha * xi), 1)
    h = xi / n
    y = np.array([0.0 + 0.0j, params.omega_in])
    for _ in range(n):
        k1 = _field_derivative(y, b1, b2, c1, c2)
        k2 = _field_derivative(y + 0.5 * h * k1, b1, b2, c1, c2)
        k3 = _field_derivative(y + 0.5 * h * k2, b1, b2, c1, c2)
        k4 = _field_derivative(y + h * k3, b1, b2, c1, c2)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return complex(y[1]), complex(y[0])


def stable_state(params: ModelParams) -> FieldState:
    """Loss-free plateau fields reached after the entrance boundary layer.

    These are the large-depth limits of the closed form and the exact
    fixed point of the propagation equations: both optical coherences
    vanish identically for these amplitudes, whatever the detunings and
    relaxation rates.
    """
    b1, b2, w = beta_coefficients(params)
    oc = (params.omega_in / w) * b1 * abs(params.c1) ** 2
    os_ = -(params.omega_in / w) * b1 * np.conj(params.c1) * params.c2
    return FieldState(xi=1.0, omega_c=complex(oc), omega_s=complex(os_), beta1=b1, beta2=b2, w_const=w)


def mean_field_coherences(params: ModelParams, fields: FieldState) -> MeanFieldCoherences:
    """Steady-state atomic expectation values for the given local fields.

    The optical coherences follow the fields adiabatically; populations and
    the ground-state coherence keep their prepared weak-field values.
    """
    g = params.gamma
    c1, c2 = params.c1, params.c2
    oc, os_ = fields.omega_c, fields.omega_s
    s_g1e = -(abs(c1) ** 2 * os_ + np.conj(c1) * c2 * oc) / (1j * g + 2.0 * params.delta_s)
    s_g2e = -(c1 * np.conj(c2) * os_ + abs(c2) ** 2 * oc) / (
        1j * (g + params.gamma12) + 2.0 * params.delta_c
    )
    return MeanFieldCoherences(
        sigma_g1e=complex(s_g1e),
        sigma_g2e=complex(s_g2e),
        sigma_g1g1=abs(c1) ** 2,
        sigma_g2g2=abs(c2) ** 2,
        sigma_ee=0.0,
        sigma_g1g2=complex(np.conj(c1) * c2),
    )
