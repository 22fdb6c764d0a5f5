import numpy as np
import pytest
from hypothesis import given, settings

from cvtwin import (
    IntegrationFailure,
    ModelParams,
    NonPhysical,
    assemble_fluctuations,
    dgcz_theta,
    dgcz_value,
    integrate_correlations,
    lyapunov_closed_form,
    propagate_correlations,
    stable_state,
    vacuum_initial_correlations,
)
from conftest import model_params

Z4 = np.zeros((4, 4), dtype=complex)


def squeeze_drift(kind: str, s: float) -> np.ndarray:
    """Pure squeeze test doubles in the (P,Q,R,S) drift layout."""
    c = np.zeros((4, 4), dtype=complex)
    if kind == "two_mode":  # cross terms only
        c[0, 3] = s  # a_s <- a_c^dag
        c[2, 1] = s  # a_c <- a_s^dag
    elif kind == "single_mode":  # self terms only
        c[0, 1] = s  # a_s <- a_s^dag
        c[2, 3] = s  # a_c <- a_c^dag
    c[1] = np.conj(c[0])[[1, 0, 3, 2]]
    c[3] = np.conj(c[2])[[1, 0, 3, 2]]
    return c


def two_mode_squeezed_corr(s: float) -> np.ndarray:
    """Second moments of an ideal two-mode squeezed vacuum."""
    n = np.sinh(s) ** 2
    m = np.cosh(s) * np.sinh(s)
    corr = np.diag([n + 1, n, n + 1, n]).astype(complex)
    corr[0, 3] = corr[3, 0] = m
    corr[1, 2] = corr[2, 1] = m
    return corr


def random_physical_corr(rng) -> np.ndarray:
    """Random Hermitian PSD second-moment matrix with real diagonal."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return g @ g.conj().T / 4.0


class TestVacuum:
    def test_entries(self):
        corr = vacuum_initial_correlations().corr
        assert corr[0, 0] == 1.0  # <a_s a_s^dag> from the commutator
        assert corr[1, 1] == 0.0  # no excitation
        assert corr[2, 2] == 1.0
        assert corr[3, 3] == 0.0
        off = corr - np.diag(np.diag(corr))
        assert np.all(off == 0)


class TestTransportOracles:
    def test_identity_dynamics(self):
        corr0 = vacuum_initial_correlations().corr
        out = integrate_correlations(Z4, Z4, 1.0, corr0)[-1]
        assert np.allclose(out.corr, corr0, atol=1e-12)

    @pytest.mark.parametrize("s", [0.1, 0.5, 1.0])
    def test_two_mode_squeeze_law(self, s):
        # V(xi) = 4 exp(-2 s xi) for a pure cross-squeeze drift
        xi_grid = np.linspace(0.1, 1.0, 10)
        states = integrate_correlations(
            squeeze_drift("two_mode", s), Z4, 1.0,
            vacuum_initial_correlations().corr, xi_eval=xi_grid,
        )
        for xi, state in zip(xi_grid, states):
            assert dgcz_value(state).v == pytest.approx(4 * np.exp(-2 * s * xi), abs=1e-8)
            assert state.commutator_s == pytest.approx(1.0, abs=1e-9)
            assert state.commutator_c == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("s", [0.1, 0.5, 1.0])
    def test_single_mode_squeeze_law(self, s):
        # V(xi) = 4 cosh(2 s xi): squeezed but never entangled
        xi_grid = np.linspace(0.1, 1.0, 10)
        states = integrate_correlations(
            squeeze_drift("single_mode", s), Z4, 1.0,
            vacuum_initial_correlations().corr, xi_eval=xi_grid,
        )
        for xi, state in zip(xi_grid, states):
            assert dgcz_value(state).v == pytest.approx(4 * np.cosh(2 * s * xi), abs=1e-8)
            assert state.commutator_s == pytest.approx(1.0, abs=1e-9)

    def test_two_mode_squeeze_matches_exact_state(self):
        s = 0.7
        out = integrate_correlations(
            squeeze_drift("two_mode", s), Z4, 1.0, vacuum_initial_correlations().corr
        )[-1]
        assert np.allclose(out.corr, two_mode_squeezed_corr(s), atol=1e-8)


class TestLyapunovOracle:
    @given(model_params())
    @settings(max_examples=50, deadline=None)
    def test_ode_matches_matrix_exponential(self, p):
        fl = assemble_fluctuations(p, stable_state(p))
        corr0 = vacuum_initial_correlations().corr
        try:
            ode = propagate_correlations(p, 1.0, "stable")
        except IntegrationFailure:
            return  # strong-gain corner: closed form overflows as well
        closed = lyapunov_closed_form(fl.drift, fl.noise, 1.0, corr0)
        scale = max(1.0, np.max(np.abs(closed)))
        assert np.max(np.abs(ode.corr - closed)) < 1e-8 * scale

    def test_zero_drift_accumulates_noise_linearly(self):
        z = np.diag([0.3, 0.2, 0.1, 0.4]).astype(complex)
        corr0 = vacuum_initial_correlations().corr
        closed = lyapunov_closed_form(Z4, z, 0.8, corr0)
        assert np.allclose(closed, corr0 + 0.8 * z, atol=1e-12)


class TestModelPropagation:
    def test_null_point_stays_vacuum_stable_mode(self):
        p = ModelParams(delta=0.0, gamma12=0.0, gamma_phi=0.0)
        state = propagate_correlations(p, 1.0, "stable")
        assert dgcz_value(state).v == pytest.approx(4.0, abs=1e-6)

    @given(model_params())
    @settings(max_examples=25, deadline=None)
    def test_null_point_randomized(self, p):
        p = p.replace(delta=0.0, gamma12=0.0, gamma_phi=0.0)
        state = propagate_correlations(p, 1.0, "stable")
        assert dgcz_value(state).v == pytest.approx(4.0, abs=1e-6)

    def test_hermiticity_preserved_along_trajectory(self):
        p = ModelParams(delta=2e-4, alpha=50.0)
        states = propagate_correlations(
            p, 1.0, "full", xi_eval=np.linspace(0.0, 1.0, 21)
        )
        for state in states:
            assert state.hermiticity_defect < 1e-9

    def test_full_mode_runs_and_reports_diagnostics(self):
        # entrance region adds excess noise in full mode; commutator
        # diagnostics quantify how far the approximated transport is from
        # canonical (reported, not asserted)
        p = ModelParams(delta=0.0, gamma12=0.0, alpha=50.0)
        state = propagate_correlations(p, 1.0, "full")
        v = dgcz_value(state).v
        assert np.isfinite(v) and v >= 4.0 - 1e-9
        assert np.isfinite(state.commutator_s)

    def test_initial_matrix_configurable(self):
        p = ModelParams(delta=0.0, gamma12=0.0)
        seeded = np.diag([2.0, 1.0, 1.0, 0.0]).astype(complex)
        state = propagate_correlations(p, 1.0, "stable", initial=seeded)
        # dark-point transport is the identity map
        assert np.allclose(state.corr, seeded, atol=1e-9)

    def test_divergence_guard(self):
        # a strongly amplifying drift exceeds the magnitude budget in both
        # the ODE and the closed-form paths (the physical stable-mode drift
        # is passive, so this is exercised with a synthetic drift)
        runaway = squeeze_drift("two_mode", 30.0)
        corr0 = vacuum_initial_correlations().corr
        with pytest.raises(IntegrationFailure):
            integrate_correlations(runaway, Z4, 1.0, corr0)
        with pytest.raises(IntegrationFailure):
            lyapunov_closed_form(runaway, Z4, 1.0, corr0)

    def test_invalid_arguments(self):
        p = ModelParams()
        with pytest.raises(ValueError):
            propagate_correlations(p, 0.0)
        with pytest.raises(ValueError):
            propagate_correlations(p, 1.0, mode="bogus")


class TestInseparabilityMeasure:
    def test_vacuum_value(self):
        assert dgcz_value(vacuum_initial_correlations()).v == pytest.approx(4.0)

    def test_vacuum_isotropic_in_theta(self):
        state = vacuum_initial_correlations()
        for theta in np.linspace(0, np.pi, 7):
            assert dgcz_theta(state, theta) == pytest.approx(4.0)

    @pytest.mark.parametrize("s", [0.2, 0.5, 1.3])
    def test_two_mode_squeezed_hyperbolic_identity(self, s):
        # 4 (1 + 2 sinh^2 s - 2 cosh s sinh s) = 4 e^{-2s}
        res = dgcz_value(two_mode_squeezed_corr(s))
        assert res.v == pytest.approx(4 * np.exp(-2 * s), rel=1e-12)

    def test_no_cross_correlation_never_entangled(self):
        corr = np.diag([1.7, 0.7, 1.2, 0.2]).astype(complex)
        res = dgcz_value(corr)
        assert res.v == pytest.approx(4 * (1 + 0.7 + 0.2))
        assert res.v > 4

    def test_theta_scan_oracle(self, rng):
        # min over a dense angle scan reproduces the closed-form minimum
        thetas = np.linspace(0, np.pi, 20001)
        for _ in range(100):
            corr = random_physical_corr(rng)
            scan = min(dgcz_theta(corr, t) for t in thetas)
            res = dgcz_value(corr)
            assert res.v == pytest.approx(scan, abs=1e-6)
            # optimal angle attains the closed-form minimum to 1e-10
            assert dgcz_theta(corr, res.theta_opt) == pytest.approx(res.v, abs=1e-10)

    def test_squeezed_state_angle_dependence(self, rng):
        s = 0.5
        corr = two_mode_squeezed_corr(s)
        thetas = np.linspace(0, np.pi, 20001)
        scan = np.array([dgcz_theta(corr, t) for t in thetas])
        assert scan.min() == pytest.approx(4 * np.exp(-2 * s), abs=1e-6)
        # cross moment is real positive: optimum sits at theta = pi/2
        assert thetas[scan.argmin()] == pytest.approx(np.pi / 2, abs=1e-3)

    def test_nonphysical_guard(self):
        corr = np.diag([1.0, 0.0, 1.0, 0.0]).astype(complex)
        corr[0, 3] = corr[3, 0] = 10.0  # violates Cauchy-Schwarz wildly
        with pytest.raises(NonPhysical):
            dgcz_value(corr)
