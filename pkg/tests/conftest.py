import numpy as np
import pytest
from hypothesis import strategies as st

from cvtwin import ModelParams


def superposition(theta: float, phase: float = 0.0) -> tuple[complex, complex]:
    """Normalized superposition amplitudes from mixing angle and phase."""
    return complex(np.cos(theta)), complex(np.sin(theta) * np.exp(1j * phase))


@st.composite
def model_params(
    draw,
    delta=st.floats(0.0, 1.0),
    gamma12=st.floats(0.0, 1.0),
    alpha=st.floats(10.0, 200.0),
    omega=st.floats(0.01, 0.5),
    gamma_phi=st.just(0.0),
    vary_superposition=True,
):
    """Valid parameter points spanning the scanned regime."""
    if vary_superposition:
        theta = draw(st.floats(0.1, np.pi / 2 - 0.1))
        phase = draw(st.floats(0.0, 2 * np.pi))
    else:
        theta, phase = np.pi / 4, 0.0
    c1, c2 = superposition(theta, phase)
    return ModelParams(
        delta=draw(delta),
        gamma12=draw(gamma12),
        gamma_phi=draw(gamma_phi),
        alpha=draw(alpha),
        omega_in=complex(draw(omega)),
        c1=c1,
        c2=c2,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # One visible pass/fail line per acceptance criterion.
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.module.__name__.endswith("test_acceptance"):
        status = "PASS" if rep.passed else "FAIL"
        print(f"\n[acceptance] {item.name}: {status}")
