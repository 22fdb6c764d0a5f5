"""Closed-form approximations for the drift coefficients and entanglement.

Valid in the two-photon-detuning regime (no ground-state relaxation) with
the fields locked to the loss-free plateau.  The closed forms trade
accuracy for speed: they capture how the entanglement minimum moves with
the detuning, optical density and drive strength, and serve as a fast
cross-check of the numerical transport.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import ModelParams

_RADICAND_WARN = -1e-12


@dataclass(frozen=True)
class AnalyticApprox:
    """Closed-form summary at one parameter point."""

    lam: float
    zeta: float
    eta: float
    nu: float
    p1: complex
    s1: complex
    r2: complex
    q2: complex


def _require_regime(params: ModelParams, who: str) -> None:
    if params.omega_in == 0:
        raise DomainError(f"{who} requires a nonzero drive amplitude")
    if params.gamma12 != 0:
        raise DomainError(f"{who} is valid only without ground-state relaxation")


def approx_coefficients(params: ModelParams) -> tuple[complex, complex, complex, complex]:
    """Leading closed-form drift coefficients (P1, S1, R2, Q2).

    P1/R2 are the self-phase terms and S1/Q2 the two-mode squeeze terms;
    S1 = -P1 identically.  All four scale as delta^2 and vanish at
    two-photon resonance.
    """
    _require_regime(params, "approx_coefficients")
    g = params.gamma
    d = params.delta
    alpha = params.alpha
    om4 = abs(params.omega_in) ** 4
    base = (-1j + d) ** 3 * om4
    p1 = -2j * alpha * g**2 * d**2 / base
    s1 = -p1
    r2 = 2j * alpha * g**2 * d**2 * (1j + d) / ((-1j + d) ** 4 * om4)
    q2 = 2.0 * alpha * g**2 * d**2 * (1.0 - 1j * d) / ((-1j + d) ** 4 * om4)
    return complex(p1), complex(s1), complex(r2), complex(q2)


def _shape_factors(delta: float) -> tuple[float, float]:
    zeta = delta * (-1.0 + delta**2)
    eta = 1.0 - 6.0 * delta**2 + delta**4
    return zeta, eta


def growth_parameter(params: ModelParams) -> float:
    """Dimensionless squeeze accumulation over the medium length."""
    g, d = params.gamma, params.delta
    _, eta = _shape_factors(d)
    return 4.0 * params.alpha * d**2 * g**2 * eta / (
        (1.0 + d**2) ** 4 * abs(params.omega_in) ** 4
    )


def _nu_terms(params: ModelParams) -> tuple[float, float]:
    """The two correction terms of the closed-form variance.

    The first (nonnegative) term degrades entanglement, the second
    (nonpositive) one generates it; their competition sets the optimum.
    """
    d = params.delta
    lam = growth_parameter(params)
    zeta, eta = _shape_factors(d)

    eml = np.exp(-lam)
    e2ml = np.exp(-2.0 * lam)
    # e^{-lam} (cosh lam - cos(d lam)), exact and overflow-free
    cosh_diff = 0.5 * np.expm1(-lam) ** 2 + 2.0 * eml * np.sin(0.5 * d * lam) ** 2
    # e^{-lam} [ (eta^2-16 zeta^2) cos(d lam) + (16 zeta^2+eta^2) cosh lam
    #            + 8 zeta eta sin(d lam) ]
    bracket = (
        (eta**2 - 16.0 * zeta**2) * eml * np.cos(d * lam)
        + (16.0 * zeta**2 + eta**2) * 0.5 * (1.0 + e2ml)
        + 8.0 * zeta * eta * eml * np.sin(d * lam)
    )
    radicand = (16.0 * zeta**2 + eta**2) * cosh_diff * bracket
    if radicand < 0.0:
        if radicand < _RADICAND_WARN:
            warnings.warn(
                f"negative radicand {radicand:.3e} clamped to zero", stacklevel=2
            )
        radicand = 0.0

    term2 = 4.0 * (1.0 + d**2) ** 4 * cosh_diff / eta**2
    term3 = -4.0 * np.sqrt(radicand) / eta**2
    return float(term2), float(term3)


def analytic_v(params: ModelParams) -> float:
    """Closed-form joint quadrature variance at the medium exit.

    Evaluated with exponential-scaled identities so the expression stays
    finite for arbitrarily large squeeze accumulation: every occurrence of
    cosh is folded into exp(-lam)-weighted combinations, and
    exp(-lam)(cosh lam - cos(delta lam)) is computed as
    (1 - exp(-lam))^2 / 2 + 2 exp(-lam) sin^2(delta lam / 2), which has no
    cancellation at small lam.
    """
    _require_regime(params, "analytic_v")
    term2, term3 = _nu_terms(params)
    return float(4.0 + term2 + term3)


def analytic_summary(params: ModelParams) -> AnalyticApprox:
    """All closed-form quantities bundled together."""
    p1, s1, r2, q2 = approx_coefficients(params)
    zeta, eta = _shape_factors(params.delta)
    return AnalyticApprox(
        lam=growth_parameter(params),
        zeta=zeta,
        eta=eta,
        nu=analytic_v(params),
        p1=p1,
        s1=s1,
        r2=r2,
        q2=q2,
    )


def coefficient_scaling_estimates(params: ModelParams, xi: float) -> tuple[float, float]:
    """Order-of-magnitude estimates of the two-mode squeeze coefficient.

    Returns the detuning-scheme and relaxation-scheme magnitudes

        (alpha G |delta| / (2 Omega^2)) exp(G^2 alpha xi / (G^2 + delta^2)),
        (alpha G12 / (4 Omega^2)) exp(alpha (2G + G12) xi / (G + G12)).

    These are growth estimates, not bounded physical values; they overflow
    to inf for large exponents by design.
    """
    if params.omega_in == 0:
        raise DomainError("scaling estimates require a nonzero drive amplitude")
    g = params.gamma
    om2 = abs(params.omega_in) ** 2
    with np.errstate(over="ignore"):
        two_photon = (params.alpha * g * abs(params.delta) / (2.0 * om2)) * np.exp(
            g**2 * params.alpha * xi / (g**2 + params.delta**2)
        )
        relaxation = (params.alpha * params.gamma12 / (4.0 * om2)) * np.exp(
            params.alpha * (2.0 * g + params.gamma12) * xi / (g + params.gamma12)
        )
    return float(two_photon), float(relaxation)
