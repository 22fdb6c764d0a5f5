"""Embedded Dormand-Prince 5(4) integrator for small complex matrix ODEs.

Written for the 4x4 second-moment transport equation: the state is a complex
ndarray of fixed shape, the right-hand side may be stiff inside the entrance
boundary layer (width ~ 1/alpha), and each accepted step can be post-processed
(re-hermitization).  Step-size control follows the standard PI-free embedded
scheme with a safety factor and bounded growth.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import IntegrationFailure

# Dormand-Prince RK5(4)7M tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_MAX_STEPS = 1_000_000
#: Beyond this magnitude the difference structure of the second moments has
#: exhausted double precision; treat the trajectory as diverged.
MAGNITUDE_LIMIT = 1e12


def _error_norm(err: np.ndarray, y_old: np.ndarray, y_new: np.ndarray, rtol, atol) -> float:
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def _initial_step(f, t0, y0, f0, t_end, rtol, atol) -> float:
    # Hairer-Norsett-Wanner starting-step heuristic, trimmed to the span.
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, t_end - t0)
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    d2 = np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, t_end - t0)


def solve_matrix_ode(
    f: Callable[[float, np.ndarray], np.ndarray],
    t_span: tuple[float, float],
    y0: np.ndarray,
    t_eval: np.ndarray | None = None,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    postprocess: Callable[[np.ndarray], np.ndarray] | None = None,
) -> list[tuple[float, np.ndarray]]:
    """Integrate dy/dt = f(t, y) for a complex array-valued state.

    Returns the state at every requested output point (or only at the end
    point when ``t_eval`` is None).  Output points are hit exactly by
    clamping the step size.  Raises :class:`IntegrationFailure` when the
    step size underflows, the step budget is exhausted, or the solution
    magnitude exceeds the precision-budget guard.
    """
    t0, t_end = float(t_span[0]), float(t_span[1])
    if t_end <= t0:
        raise ValueError("t_span must be increasing")
    if t_eval is None:
        targets = [t_end]
    else:
        targets = [float(t) for t in t_eval]
        if any(t < t0 or t > t_end for t in targets):
            raise ValueError("t_eval points must lie inside t_span")
        if sorted(targets) != targets:
            raise ValueError("t_eval must be sorted")

    y = np.array(y0, dtype=complex)
    t = t0
    f_cur = f(t, y)
    h = _initial_step(f, t0, y, f_cur, t_end, rtol, atol)
    h_floor = 1e-14 * (t_end - t0)

    out: list[tuple[float, np.ndarray]] = []
    targets_iter = iter(targets)
    next_target = next(targets_iter)
    while next_target <= t0:  # t=0 requested explicitly
        out.append((next_target, y.copy()))
        try:
            next_target = next(targets_iter)
        except StopIteration:
            return out

    k = [np.empty_like(y) for _ in range(7)]
    for _ in range(_MAX_STEPS):
        h = min(h, t_end - t, next_target - t)
        if h < h_floor:
            raise IntegrationFailure(f"step size underflow at t={t:.6g}")

        k[0] = f_cur
        for i in range(1, 7):
            yi = y + h * sum(a * k[j] for j, a in enumerate(_A[i]))
            k[i] = f(t + _C[i] * h, yi)
        y5 = y + h * sum(b * ki for b, ki in zip(_B5, k) if b != 0.0)
        y4 = y + h * sum(b * ki for b, ki in zip(_B4, k) if b != 0.0)
        err = _error_norm(y5 - y4, y, y5, rtol, atol)

        if err <= 1.0:
            t = t + h
            y = y5
            if postprocess is not None:
                y = postprocess(y)
            if np.max(np.abs(y)) > MAGNITUDE_LIMIT or not np.all(np.isfinite(y)):
                raise IntegrationFailure(
                    f"solution magnitude exceeded precision budget at t={t:.6g}"
                )
            # FSAL property of the tableau: k7 is f at the new point.
            f_cur = k[6] if postprocess is None else f(t, y)
            while abs(t - next_target) <= 1e-14 * max(1.0, abs(next_target)):
                out.append((next_target, y.copy()))
                try:
                    next_target = next(targets_iter)
                except StopIteration:
                    return out
            factor = _SAFETY * err ** -0.2 if err > 0 else _MAX_FACTOR
        else:
            factor = max(_MIN_FACTOR, _SAFETY * err ** -0.2)
        h = h * min(_MAX_FACTOR, max(_MIN_FACTOR, factor))

    raise IntegrationFailure("step budget exhausted")
