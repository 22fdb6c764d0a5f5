import numpy as np
import pytest

from cvtwin import IntegrationFailure
from cvtwin.integrator import solve_matrix_ode


def test_scalar_linear_decay():
    out = solve_matrix_ode(lambda t, y: -2.0 * y, (0.0, 1.0), np.array([[1.0 + 0j]]))
    assert out[-1][1][0, 0] == pytest.approx(np.exp(-2.0), abs=1e-10)


def test_matrix_rotation_preserves_norm():
    w = 5.0
    f = lambda t, y: 1j * w * y
    out = solve_matrix_ode(f, (0.0, 1.0), np.eye(2, dtype=complex))
    got = out[-1][1]
    assert np.allclose(got, np.exp(1j * w) * np.eye(2), atol=1e-9)


def test_requested_output_points_hit_exactly():
    pts = np.array([0.0, 0.25, 0.5, 1.0])
    out = solve_matrix_ode(
        lambda t, y: -y, (0.0, 1.0), np.array([[2.0 + 0j]]), t_eval=pts
    )
    assert [t for t, _ in out] == pts.tolist()
    for t, y in out:
        assert y[0, 0] == pytest.approx(2.0 * np.exp(-t), abs=1e-10)


def test_postprocess_applied_each_step():
    calls = []

    def keep_real(y):
        calls.append(1)
        return y.real.astype(complex)

    solve_matrix_ode(
        lambda t, y: -y, (0.0, 1.0), np.array([[1.0 + 0j]]), postprocess=keep_real
    )
    assert calls


def test_magnitude_guard():
    with pytest.raises(IntegrationFailure):
        solve_matrix_ode(lambda t, y: 40.0 * y, (0.0, 1.0), np.array([[1.0 + 0j]]))


def test_rejects_bad_spans():
    y0 = np.array([[1.0 + 0j]])
    with pytest.raises(ValueError):
        solve_matrix_ode(lambda t, y: y, (1.0, 0.0), y0)
    with pytest.raises(ValueError):
        solve_matrix_ode(lambda t, y: y, (0.0, 1.0), y0, t_eval=[2.0])
    with pytest.raises(ValueError):
        solve_matrix_ode(lambda t, y: y, (0.0, 1.0), y0, t_eval=[0.5, 0.2])


def test_stiff_boundary_layer_accuracy():
    # fast transient onto a slow manifold, like the entrance layer
    lam = 500.0

    def f(t, y):
        return np.array([[-lam * (y[0, 0] - np.cos(t)) - np.sin(t)]])

    out = solve_matrix_ode(f, (0.0, 1.0), np.array([[0.0 + 0j]]), rtol=1e-10, atol=1e-13)
    exact = np.cos(1.0) - np.exp(-lam)  # particular + decayed homogeneous
    assert out[-1][1][0, 0] == pytest.approx(exact, abs=1e-8)
