import numpy as np
import pytest

from cvtwin import (
    DomainError,
    ModelParams,
    analytic_summary,
    analytic_v,
    approx_coefficients,
    coefficient_scaling_estimates,
    growth_parameter,
)
from cvtwin.analytic import _nu_terms


def sympy_reference_coefficients(delta, alpha, omega):
    """Independent symbolic evaluation of the closed-form coefficients."""
    import sympy as sp

    d, a, om = map(sp.nsimplify, (delta, alpha, omega))
    base3 = (-sp.I + d) ** 3 * om**4
    base4 = (-sp.I + d) ** 4 * om**4
    p1 = -2 * sp.I * a * d**2 / base3
    s1 = -p1
    r2 = 2 * sp.I * a * d**2 * (sp.I + d) / base4
    q2 = 2 * a * d**2 * (1 - sp.I * d) / base4
    return [complex(sp.N(x, 30)) for x in (p1, s1, r2, q2)]


class TestCoefficients:
    def test_sign_relation(self):
        p = ModelParams(delta=0.07, alpha=80.0, omega_in=0.3)
        p1, s1, _, _ = approx_coefficients(p)
        assert s1 == -p1

    def test_vanish_at_resonance_limit(self):
        p = ModelParams(delta=1e-6, alpha=50.0, omega_in=0.1)
        assert max(abs(c) for c in approx_coefficients(p)) < 2e-6
        # quadratic scaling in delta
        c_small = approx_coefficients(ModelParams(delta=1e-4, omega_in=0.1))
        c_big = approx_coefficients(ModelParams(delta=2e-4, omega_in=0.1))
        assert abs(c_big[0]) / abs(c_small[0]) == pytest.approx(4.0, rel=1e-3)

    def test_symbolic_substitution_oracle(self):
        d, a, om = 0.1, 50.0, 0.1
        p = ModelParams(delta=d, alpha=a, omega_in=om)
        got = approx_coefficients(p)
        want = sympy_reference_coefficients(d, a, om)
        for g, w in zip(got, want):
            assert abs(g - w) <= 1e-12 * abs(w)

    def test_domain_guards(self):
        with pytest.raises(DomainError):
            approx_coefficients(ModelParams(omega_in=0j))
        with pytest.raises(DomainError):
            approx_coefficients(ModelParams(gamma12=0.1))


class TestClosedFormVariance:
    def test_resonance_limit(self):
        # lam must be << tolerance for the limit to be visible: at
        # omega=0.5 the growth parameter at delta=1e-6 is 3.2e-9
        p = ModelParams(delta=1e-6, alpha=50.0, omega_in=0.5)
        assert analytic_v(p) == pytest.approx(4.0, abs=1e-6)

    def test_interior_minimum_exists(self):
        deltas = np.geomspace(1e-5, 0.2, 400)
        nus = [analytic_v(ModelParams(delta=d, alpha=50.0, omega_in=0.1)) for d in deltas]
        i = int(np.argmin(nus))
        assert 0 < i < len(deltas) - 1
        assert nus[i] < 4.0

    def test_term_monotonicity_small_delta_branch(self):
        # degradation term grows with delta, generation term falls
        deltas = np.geomspace(1e-5, 3e-4, 30)
        t2s, t3s = [], []
        for d in deltas:
            t2, t3 = _nu_terms(ModelParams(delta=d, alpha=50.0, omega_in=0.1))
            t2s.append(t2)
            t3s.append(t3)
        assert all(b > a for a, b in zip(t2s, t2s[1:]))
        assert all(b < a for a, b in zip(t3s, t3s[1:]))

    def test_overflow_free_at_huge_growth(self):
        # growth parameter ~ 7e4: naive cosh would overflow
        p = ModelParams(delta=0.1, alpha=200.0, omega_in=0.1)
        lam = growth_parameter(p)
        assert lam > 1e4
        nu = analytic_v(p)
        assert np.isfinite(nu)

    def test_summary_bundles_consistently(self):
        p = ModelParams(delta=0.02, alpha=50.0, omega_in=0.2)
        s = analytic_summary(p)
        assert s.nu == pytest.approx(analytic_v(p))
        assert s.lam == pytest.approx(growth_parameter(p))
        assert s.zeta == pytest.approx(p.delta * (-1 + p.delta**2))
        assert s.eta == pytest.approx(1 - 6 * p.delta**2 + p.delta**4)


class TestScalingEstimates:
    def test_zero_knobs_give_zero(self):
        p = ModelParams(delta=0.0, gamma12=0.0, omega_in=0.1)
        tp, rel = coefficient_scaling_estimates(p, 1.0)
        assert tp == 0.0
        assert rel == 0.0

    def test_hand_value(self):
        # alpha G delta / (2 Omega^2) = 50*0.01/0.02 = 25, exponent 50/1.0001
        p = ModelParams(delta=0.01, alpha=50.0, omega_in=0.1)
        tp, _ = coefficient_scaling_estimates(p, 1.0)
        assert tp == pytest.approx(25.0 * np.exp(50.0 / 1.0001), rel=1e-12)

    def test_nonnegative_and_monotone_in_alpha(self):
        p = ModelParams(delta=0.01, gamma12=0.005, omega_in=0.3)
        prev = (-1.0, -1.0)
        for alpha in (10.0, 20.0, 40.0, 80.0):
            vals = coefficient_scaling_estimates(p.replace(alpha=alpha), 0.1)
            assert vals[0] >= 0 and vals[1] >= 0
            assert vals[0] > prev[0] and vals[1] > prev[1]
            prev = vals

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            coefficient_scaling_estimates(ModelParams(omega_in=0j), 1.0)
