"""Parameter-grid evaluation of the entanglement measure and optimum search.

Grids are swept point-by-point through the full transport pipeline; each
point is independent, so evaluation order never affects the result and the
table can be filled concurrently.  Points where the transport diverges or
the assembly degenerates are recorded as NaN with a failure log instead of
aborting the sweep — strong-gain corners of parameter space overflow double
precision by design.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .correlations import dgcz_value, propagate_correlations
from .errors import CvTwinError, NoImprovement
from .fluctuations import AssemblyOptions, DEFAULT_OPTIONS
from .params import ModelParams

AXIS_NAMES = ("delta", "gamma12", "omega", "alpha")
#: Lexicographic priority used to break exact ties in the grid minimum.
_TIE_ORDER = {"delta": 0, "gamma12": 1, "omega": 2, "alpha": 3}

_SPACINGS = ("linear", "log")


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: name, ordered sample values, spacing tag."""

    name: str
    values: tuple[float, ...]
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise ValueError(f"axis name must be one of {AXIS_NAMES}")
        if self.spacing not in _SPACINGS:
            raise ValueError(f"spacing must be one of {_SPACINGS}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) == 0:
            raise ValueError("axis needs at least one value")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("axis values must be strictly increasing")
        if self.spacing == "log" and vals[0] <= 0:
            raise ValueError("log spacing requires positive values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def linear(cls, name: str, start: float, stop: float, num: int) -> "SweepAxis":
        return cls(name, tuple(np.linspace(start, stop, num)), "linear")

    @classmethod
    def log(cls, name: str, start: float, stop: float, num: int) -> "SweepAxis":
        return cls(name, tuple(np.geomspace(start, stop, num)), "log")


@dataclass(frozen=True)
class GridPoint:
    indices: tuple[int, ...]
    coords: dict[str, float]
    value: float


@dataclass
class SweepResult:
    """Dense table of V over the grid plus the located optimum."""

    axes: tuple[SweepAxis, ...]
    v_table: np.ndarray
    argmin: GridPoint | None
    refined_min: GridPoint | None
    failures: list[dict] = field(default_factory=list)

    @property
    def n_failed(self) -> int:
        return len(self.failures)


def apply_point(params: ModelParams, coords: dict[str, float]) -> ModelParams:
    """Fixed parameters with the swept coordinates substituted in."""
    changes: dict = {}
    for name, value in coords.items():
        if name == "omega":
            changes["omega_in"] = complex(value)
        elif name in ("delta", "gamma12", "alpha"):
            changes[name] = float(value)
        else:
            raise ValueError(f"unknown sweep coordinate {name!r}")
    return params.replace(**changes)


def evaluate_v(
    params: ModelParams,
    mode: str = "stable",
    options: AssemblyOptions = DEFAULT_OPTIONS,
) -> float:
    """V at the medium exit for one parameter point."""
    state = propagate_correlations(params, 1.0, mode, options=options)
    return dgcz_value(state).v


def _default_objective(fixed, mode, options):
    def objective(coords: dict[str, float]) -> float:
        return evaluate_v(apply_point(fixed, coords), mode, options)

    return objective


def grid_sweep(
    axes: Sequence[SweepAxis],
    fixed: ModelParams,
    mode: str = "stable",
    *,
    workers: int = 1,
    refine: bool = True,
    options: AssemblyOptions = DEFAULT_OPTIONS,
) -> SweepResult:
    """Evaluate V on the cartesian grid of up to three axes.

    Tiny negative values within the physical floor are clamped to zero in
    the table; failed points become NaN and are excluded from the argmin.
    The sweep itself fails only when more than half of the points fail.
    The refinement step polishes the grid argmin with the simplex search
    restricted to the swept axes' ranges.
    """
    axes = tuple(axes)
    if not 1 <= len(axes) <= 3:
        raise ValueError("grid_sweep takes between one and three axes")
    names = [ax.name for ax in axes]
    if len(set(names)) != len(names):
        raise ValueError("axis names must be distinct")

    shape = tuple(len(ax.values) for ax in axes)
    table = np.full(shape, np.nan)
    failures: list[dict] = []
    objective = _default_objective(fixed, mode, options)

    index_list = list(np.ndindex(shape))

    def run_point(idx):
        coords = {ax.name: ax.values[i] for ax, i in zip(axes, idx)}
        try:
            return idx, max(objective(coords), 0.0), None
        except CvTwinError as exc:
            return idx, np.nan, f"{type(exc).__name__}: {exc}"

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_point, index_list))
    else:
        results = [run_point(idx) for idx in index_list]

    for idx, value, err in results:
        table[idx] = value
        if err is not None:
            coords = {ax.name: ax.values[i] for ax, i in zip(axes, idx)}
            failures.append({"indices": idx, "coords": coords, "error": err})

    if len(failures) > len(index_list) / 2:
        raise CvTwinError(
            f"{len(failures)} of {len(index_list)} grid points failed"
        )

    argmin = _grid_argmin(axes, table)
    refined = argmin
    if refine and argmin is not None:
        refined = _refine_minimum(axes, fixed, mode, options, argmin)
    return SweepResult(
        axes=axes, v_table=table, argmin=argmin, refined_min=refined, failures=failures
    )


def _grid_argmin(axes, table) -> GridPoint | None:
    if np.all(np.isnan(table)):
        return None
    vmin = np.nanmin(table)
    candidates = np.argwhere(table == vmin)
    # deterministic tie break: smallest delta, then gamma12, then omega
    order = sorted(range(len(axes)), key=lambda i: _TIE_ORDER[axes[i].name])

    def key(idx):
        return tuple(axes[i].values[idx[i]] for i in order)

    best = min((tuple(c) for c in candidates), key=key)
    coords = {ax.name: ax.values[i] for ax, i in zip(axes, best)}
    return GridPoint(indices=best, coords=coords, value=float(vmin))


def _log_bounds_ok(values) -> bool:
    return values[0] > 0


def _refine_minimum(axes, fixed, mode, options, seed: GridPoint) -> GridPoint:
    """Simplex polish of the grid argmin inside the axis ranges."""
    objective = _default_objective(fixed, mode, options)
    names = [ax.name for ax in axes]
    use_log = [(_log_bounds_ok(ax.values)) for ax in axes]

    def encode(coords):
        return np.array(
            [
                math.log10(coords[n]) if lg else coords[n]
                for n, lg in zip(names, use_log)
            ]
        )

    def decode(x):
        return {
            n: (10.0 ** xi if lg else xi) for n, xi, lg in zip(names, x, use_log)
        }

    lo = encode({ax.name: ax.values[0] for ax in axes})
    hi = encode({ax.name: ax.values[-1] for ax in axes})

    def fun(x):
        x = np.clip(x, lo, hi)
        try:
            return objective(decode(x))
        except CvTwinError:
            return np.inf

    x0 = encode(seed.coords)
    res = minimize(
        fun,
        x0,
        method="Nelder-Mead",
        options={"xatol": 4.4e-7, "fatol": 1e-12, "maxiter": 500},
    )
    value = float(res.fun)
    if not np.isfinite(value) or value > seed.value:
        return seed
    coords = decode(np.clip(res.x, lo, hi))
    return GridPoint(indices=seed.indices, coords=coords, value=max(value, 0.0))


def optimize_v(
    bounds: dict[str, tuple[float, float]],
    fixed: ModelParams,
    mode: str = "stable",
    *,
    seeds_per_axis: int = 5,
    maxiter: int = 500,
    options: AssemblyOptions = DEFAULT_OPTIONS,
    objective: Callable[[dict[str, float]], float] | None = None,
) -> tuple[ModelParams, float]:
    """Locate the entanglement optimum inside a bounded parameter box.

    Coarse log-grid seeding over every bounded axis, then derivative-free
    simplex refinement from the best seed in log coordinates (a relative
    simplex tolerance of 1e-6 maps to an absolute log10 tolerance).  The
    returned value never exceeds the best seed value.  ``objective`` can
    replace the physical V evaluation, which is how the optimizer plumbing
    is tested on a known function.
    """
    if not bounds:
        raise ValueError("bounds must name at least one parameter")
    for name, (lo, hi) in bounds.items():
        if name not in ("delta", "gamma12", "omega"):
            raise ValueError(f"cannot optimize over {name!r}")
        if not (0 < lo < hi):
            raise ValueError(f"bounds for {name!r} must satisfy 0 < lo < hi")

    names = sorted(bounds, key=_TIE_ORDER.__getitem__)
    fun_coords = objective if objective is not None else _default_objective(
        fixed, mode, options
    )

    def decode(x):
        return {n: 10.0 ** xi for n, xi in zip(names, x)}

    lo = np.array([math.log10(bounds[n][0]) for n in names])
    hi = np.array([math.log10(bounds[n][1]) for n in names])

    def fun(x):
        x = np.clip(x, lo, hi)
        try:
            v = fun_coords(decode(x))
        except CvTwinError:
            return np.inf
        return v if np.isfinite(v) else np.inf

    grids = [np.linspace(l, h, seeds_per_axis) for l, h in zip(lo, hi)]
    seed_values = []
    for idx in np.ndindex(*(len(g) for g in grids)):
        x = np.array([g[i] for g, i in zip(grids, idx)])
        seed_values.append((fun(x), tuple(x)))
    best_fun, best_x = min(seed_values, key=lambda t: t[0])
    if not np.isfinite(best_fun):
        raise NoImprovement("every seed evaluation failed")

    res = minimize(
        fun,
        np.array(best_x),
        method="Nelder-Mead",
        options={"xatol": 4.4e-7, "fatol": 1e-12, "maxiter": maxiter},
    )
    if np.isfinite(res.fun) and res.fun <= best_fun:
        x_star, v_star = np.clip(res.x, lo, hi), float(res.fun)
    else:
        x_star, v_star = np.array(best_x), float(best_fun)
    params_star = apply_point(fixed, decode(x_star))
    return params_star, v_star
