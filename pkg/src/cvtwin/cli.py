"""Command-line front end: scenario configs, dispatch, and serialization.

Scenarios are described by a JSON config (any part of which can be
overridden with repeatable ``--set key=value`` flags; command-line values
win).  Every run writes one data file (CSV or JSON) plus a sidecar
``<out>.meta.json`` holding the tool version and the fully resolved
configuration — including the resolved detuning split and branch rates —
so a result file is never ambiguous about conventions and can be re-run
verbatim from its own sidecar.

CSV output is RFC-4180-style, UTF-8, ``.`` decimal separator, 17
significant digits; complex quantities become paired ``_re``/``_im``
columns, and in JSON they become ``{"re": .., "im": ..}`` objects.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import analytic_summary, coefficient_scaling_estimates
from .correlations import dgcz_value, propagate_correlations
from .errors import ConfigError, CvTwinError
from .mean_field import propagate_mean_field
from .params import ModelParams
from .sweeps import SweepAxis, grid_sweep, optimize_v
from .vortex import VortexProfile, lg_amplitude, radial_entanglement_map

COMMANDS = ("propagate", "sweep", "optimize", "vortexmap", "analytic")
FORMATS = ("csv", "json")
MODES = ("full", "stable")

_EXIT_OK = 0
_EXIT_RUNTIME = 1
_EXIT_CONFIG = 2
_EXIT_IO = 3


# ---------------------------------------------------------------------------
# configuration schema


@dataclass
class ScenarioConfig:
    """Validated, fully resolved description of one run."""

    command: str
    params: ModelParams
    mode: str = "stable"
    out: str = "out.csv"
    format: str = "csv"
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    propagate: dict = field(default_factory=dict)
    axes: list = field(default_factory=list)
    optimize: dict = field(default_factory=dict)
    vortex: dict = field(default_factory=dict)
    analytic: dict = field(default_factory=dict)

    def resolved_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params.as_dict(),
            "mode": self.mode,
            "out": self.out,
            "format": self.format,
            "workers": self.workers,
            "propagate": self.propagate,
            "axes": self.axes,
            "optimize": self.optimize,
            "vortex": self.vortex,
            "analytic": self.analytic,
        }


_TOP_KEYS = {
    "command",
    "params",
    "mode",
    "out",
    "format",
    "workers",
    "propagate",
    "axes",
    "optimize",
    "vortex",
    "analytic",
}
_AXIS_KEYS = {"name", "values", "start", "stop", "num", "spacing"}
_PROPAGATE_KEYS = {"n_points"}
_OPTIMIZE_KEYS = {"bounds", "seeds_per_axis", "maxiter"}
_VORTEX_KEYS = {"epsilon", "waist", "charge", "radii", "r_max", "n_radii", "phi"}
_ANALYTIC_KEYS = {"start", "stop", "num", "spacing", "xi"}


def _reject_unknown(block: dict, allowed: set, where: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def _parse_params(block: dict) -> ModelParams:
    try:
        return ModelParams.from_dict(block)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid params: {exc}") from exc


def build_config(raw: dict) -> ScenarioConfig:
    """Validate a raw config dictionary against the schema."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    _reject_unknown(raw, _TOP_KEYS, "config root")
    command = raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {command!r}")
    mode = raw.get("mode", "stable")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    fmt = raw.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {fmt!r}")
    workers = raw.get("workers", os.cpu_count() or 1)
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers must be a positive integer")

    params_block = raw.get("params", {})
    if not isinstance(params_block, dict):
        raise ConfigError("params block must be an object")
    if "alpha" not in params_block:
        raise ConfigError("missing required key: params.alpha")
    params = _parse_params(params_block)
    for name, keys in (
        ("propagate", _PROPAGATE_KEYS),
        ("optimize", _OPTIMIZE_KEYS),
        ("vortex", _VORTEX_KEYS),
        ("analytic", _ANALYTIC_KEYS),
    ):
        block = raw.get(name, {})
        if not isinstance(block, dict):
            raise ConfigError(f"{name} block must be an object")
        _reject_unknown(block, keys, f"{name} block")

    axes = raw.get("axes", [])
    if not isinstance(axes, list):
        raise ConfigError("axes must be a list")
    for ax in axes:
        if not isinstance(ax, dict):
            raise ConfigError("each axis must be an object")
        _reject_unknown(ax, _AXIS_KEYS, "axis")

    if command == "sweep" and not axes:
        raise ConfigError("sweep requires at least one axis")
    if command == "optimize" and not raw.get("optimize", {}).get("bounds"):
        raise ConfigError("optimize requires optimize.bounds")
    if command == "vortexmap":
        missing = {"epsilon", "waist", "charge"} - set(raw.get("vortex", {}))
        if missing:
            raise ConfigError(f"vortexmap requires vortex.{sorted(missing)}")

    return ScenarioConfig(
        command=command,
        params=params,
        mode=mode,
        out=raw.get("out", "out." + fmt),
        format=fmt,
        workers=workers,
        propagate=raw.get("propagate", {}),
        axes=axes,
        optimize=raw.get("optimize", {}),
        vortex=raw.get("vortex", {}),
        analytic=raw.get("analytic", {}),
    )


def _build_axis(ax: dict) -> SweepAxis:
    name = ax.get("name")
    spacing = ax.get("spacing", "log")
    try:
        if "values" in ax:
            return SweepAxis(name, tuple(ax["values"]), spacing)
        if spacing == "log":
            return SweepAxis.log(name, ax["start"], ax["stop"], ax["num"])
        return SweepAxis.linear(name, ax["start"], ax["stop"], ax["num"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"invalid axis {ax!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# value coercion for --set overrides


def _coerce_scalar(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        try:
            return complex(text.replace(" ", ""))
        except ValueError:
            return text


def apply_override(raw: dict, dotted: str, text: str) -> None:
    """Apply one ``--set path.to.key=value`` override in place."""
    keys = dotted.split(".")
    node = raw
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot descend into {key!r} in override {dotted!r}")
    value = _coerce_scalar(text)
    if isinstance(value, complex):
        value = {"re": value.real, "im": value.imag}
    node[keys[-1]] = value


# ---------------------------------------------------------------------------
# serialization helpers


def _fmt(x) -> str:
    return f"{x:.17g}"


def _flatten_value(name: str, value):
    """(column names, formatted fields) for one possibly-complex value."""
    if isinstance(value, complex):
        return [f"{name}_re", f"{name}_im"], [_fmt(value.real), _fmt(value.imag)]
    return [name], [_fmt(value)]


def write_table(path: Path, fmt: str, columns: list[str], rows: list[list]) -> None:
    """Write a rectangular table of numbers (complex values pre-split)."""
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(x) for x in row])
    else:
        payload = {"columns": columns, "rows": [[float(x) for x in row] for row in rows]}
        path.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj)}")


def write_json_payload(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, indent=1, default=_json_default) + "\n", encoding="utf-8"
    )


def write_sidecar(config: ScenarioConfig, extra: dict | None = None) -> Path:
    meta = {
        "tool": "cvtwin",
        "version": __version__,
        "config": config.resolved_dict(),
    }
    if extra:
        meta.update(extra)
    side = Path(str(config.out) + ".meta.json")
    write_json_payload(side, meta)
    return side


# ---------------------------------------------------------------------------
# command implementations


def _run_propagate(config: ScenarioConfig) -> dict:
    params = config.params
    n = int(config.propagate.get("n_points", 201))
    if n < 2:
        raise ConfigError("propagate.n_points must be at least 2")
    xi_grid = np.linspace(0.0, 1.0, n)
    norm = abs(params.omega_in) ** 2 or 1.0

    states = propagate_correlations(
        params, 1.0, config.mode, xi_eval=xi_grid
    )
    columns = [
        "xi",
        "Ic_norm",
        "Is_norm",
        "V",
        "n_s",
        "n_c",
        "cross_re",
        "cross_im",
        "theta_opt",
        "comm_defect_s",
        "comm_defect_c",
    ]
    rows = []
    for xi, state in zip(xi_grid, states):
        fields = propagate_mean_field(params, float(xi))
        ent = dgcz_value(state)
        rows.append(
            [
                xi,
                abs(fields.omega_c) ** 2 / norm,
                abs(fields.omega_s) ** 2 / norm,
                max(ent.v, 0.0),
                ent.n_s,
                ent.n_c,
                ent.cross.real,
                ent.cross.imag,
                ent.theta_opt,
                state.commutator_s - 1.0,
                state.commutator_c - 1.0,
            ]
        )
    return {"columns": columns, "rows": rows, "extra": {}}


def _run_sweep(config: ScenarioConfig) -> dict:
    axes = [_build_axis(ax) for ax in config.axes]
    result = grid_sweep(
        axes, config.params, config.mode, workers=config.workers
    )
    columns = [f"{ax.name}_over_Gamma" if ax.name != "alpha" else "alpha" for ax in axes]
    columns.append("V")
    rows = []
    for idx in np.ndindex(result.v_table.shape):
        coords = [ax.values[i] for ax, i in zip(axes, idx)]
        rows.append(coords + [result.v_table[idx]])
    extra = {
        "argmin": None
        if result.argmin is None
        else {"coords": result.argmin.coords, "value": result.argmin.value},
        "refined_min": None
        if result.refined_min is None
        else {"coords": result.refined_min.coords, "value": result.refined_min.value},
        "failures": result.failures,
    }
    return {"columns": columns, "rows": rows, "extra": extra, "sweep": result}


def _run_optimize(config: ScenarioConfig) -> dict:
    block = config.optimize
    bounds = {k: tuple(v) for k, v in block["bounds"].items()}
    params_star, v_star = optimize_v(
        bounds,
        config.params,
        config.mode,
        seeds_per_axis=int(block.get("seeds_per_axis", 5)),
        maxiter=int(block.get("maxiter", 500)),
    )
    columns = [
        "delta_over_Gamma",
        "gamma12_over_Gamma",
        "omega_over_Gamma",
        "alpha",
        "V_opt",
    ]
    rows = [
        [
            params_star.delta,
            params_star.gamma12,
            abs(params_star.omega_in),
            params_star.alpha,
            v_star,
        ]
    ]
    extra = {"optimum": {"params": params_star.as_dict(), "V_opt": v_star}}
    return {"columns": columns, "rows": rows, "extra": extra}


def _run_vortexmap(config: ScenarioConfig) -> dict:
    block = config.vortex
    profile = VortexProfile(
        epsilon=float(block["epsilon"]),
        waist=float(block["waist"]),
        charge=float(block["charge"]),
    )
    if "radii" in block:
        radii = [float(r) for r in block["radii"]]
    else:
        r_max = float(block.get("r_max", 3.0 * profile.waist))
        n_radii = int(block.get("n_radii", 61))
        radii = np.linspace(0.0, r_max, n_radii)
    result = radial_entanglement_map(
        profile,
        config.params,
        radii,
        phi=float(block.get("phi", 0.0)),
        mode=config.mode,
        workers=config.workers,
    )
    columns = ["r", "intensity_c_exit", "intensity_s_exit", "V"]
    rows = [
        [r, ic, is_, v]
        for r, ic, is_, v in zip(
            result.radii, result.intensity_c, result.intensity_s, result.v
        )
    ]
    extra = {
        "failures": result.failures,
        "ring_radius": profile.waist * np.sqrt(abs(profile.charge) / 2.0),
        "common_phase_factor": f"exp(i*{profile.charge:g}*phi)",
    }
    return {"columns": columns, "rows": rows, "extra": extra}


def _run_analytic(config: ScenarioConfig) -> dict:
    block = dict(config.analytic)
    xi = float(block.get("xi", 1.0))
    start = float(block.get("start", 1e-4))
    stop = float(block.get("stop", 1e-1))
    num = int(block.get("num", 60))
    spacing = block.get("spacing", "log")
    grid = np.geomspace(start, stop, num) if spacing == "log" else np.linspace(start, stop, num)

    columns = [
        "delta_over_Gamma",
        "nu",
        "lambda",
        "p1_re",
        "p1_im",
        "s1_re",
        "s1_im",
        "r2_re",
        "r2_im",
        "q2_re",
        "q2_im",
        "two_photon_estimate",
        "relaxation_estimate",
    ]
    rows = []
    for d in grid:
        local = config.params.replace(delta=float(d))
        summary = analytic_summary(local)
        est_tp, est_rel = coefficient_scaling_estimates(local, xi)
        rows.append(
            [
                d,
                summary.nu,
                summary.lam,
                summary.p1.real,
                summary.p1.imag,
                summary.s1.real,
                summary.s1.imag,
                summary.r2.real,
                summary.r2.imag,
                summary.q2.real,
                summary.q2.imag,
                est_tp,
                est_rel,
            ]
        )
    return {"columns": columns, "rows": rows, "extra": {}}


_RUNNERS = {
    "propagate": _run_propagate,
    "sweep": _run_sweep,
    "optimize": _run_optimize,
    "vortexmap": _run_vortexmap,
    "analytic": _run_analytic,
}


def run_scenario(config: ScenarioConfig) -> int:
    """Execute one scenario and write its output and sidecar files."""
    result = _RUNNERS[config.command](config)
    out = Path(config.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    if config.format == "csv":
        write_table(out, "csv", result["columns"], result["rows"])
    else:
        payload = {
            "meta": {"tool": "cvtwin", "version": __version__},
            "columns": result["columns"],
            "rows": [[float(x) for x in row] for row in result["rows"]],
        }
        payload.update(result["extra"])
        write_json_payload(out, payload)
    write_sidecar(config, {"result_summary": result["extra"]})
    return _EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvtwin",
        description="steady-state twin-beam entanglement simulator",
    )
    parser.add_argument("--version", action="version", version=f"cvtwin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} scenario")
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config entry (dotted path, repeatable)",
        )
        p.add_argument("--mode", choices=MODES, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=FORMATS, default=None)
    return parser


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        raw: dict = {}
        if args.config:
            try:
                raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return _EXIT_IO
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
        raw["command"] = args.command
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set needs KEY=VALUE, got {item!r}")
            key, text = item.split("=", 1)
            apply_override(raw, key, text)
        # explicit flags win over file and --set values
        if args.mode is not None:
            raw["mode"] = args.mode
        if args.workers is not None:
            raw["workers"] = args.workers
        if args.out is not None:
            raw["out"] = args.out
        if args.format is not None:
            raw["format"] = args.format
        if "out" not in raw:
            raw["out"] = f"{args.command}." + raw.get("format", "csv")
        config = build_config(raw)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    try:
        return run_scenario(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return _EXIT_IO
    except CvTwinError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
