"""Model parameters for the three-level medium.

Unit conventions used throughout the package: the total upper-level decay
rate sets the rate unit (gamma = 1), the medium length sets the length
unit (L = 1), and the single-photon coupling is absorbed (g = 1, it
cancels in all observables).  Every rate, detuning and Rabi amplitude is
therefore a pure number, and the optical density ``alpha`` is the only
knob describing the medium's opacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

_TOL = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ModelParams:
    """All atomic and optical parameters of one simulation point.

    Attributes
    ----------
    gamma:
        Total upper-level decay rate (the rate unit; keep at 1).
    gamma1, gamma2:
        Branch decay rates to the two ground states.  Default to
        ``gamma / 2`` each; they must sum to ``gamma``.
    gamma12:
        Ground-state relaxation rate (population transfer between the
        ground states).
    gamma_phi:
        Pure dephasing rate of the ground-state coherence (default 0).
    delta:
        Two-photon detuning, the difference of the two single-photon
        detunings.
    delta_s, delta_c:
        Single-photon detunings of the generated and control fields.
        When omitted they default to the symmetric split
        ``delta_s = -delta_c = delta / 2``.
    alpha:
        Optical density of the medium (dimensionless, > 0).
    c1, c2:
        Complex amplitudes of the prepared ground-state superposition,
        normalized to ``|c1|^2 + |c2|^2 = 1``.
    omega_in:
        Complex Rabi amplitude of the control field at the entrance.
    """

    gamma: float = 1.0
    gamma1: float | None = None
    gamma2: float | None = None
    gamma12: float = 0.0
    gamma_phi: float = 0.0
    delta: float = 0.0
    delta_s: float | None = None
    delta_c: float | None = None
    alpha: float = 50.0
    c1: complex = complex(_SQRT_HALF)
    c2: complex = complex(_SQRT_HALF)
    omega_in: complex = 0.1 + 0.0j

    def __post_init__(self) -> None:
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.gamma12 < 0:
            raise ValueError(f"gamma12 must be nonnegative, got {self.gamma12}")
        if self.gamma_phi < 0:
            raise ValueError(f"gamma_phi must be nonnegative, got {self.gamma_phi}")

        g1, g2 = self.gamma1, self.gamma2
        if g1 is None and g2 is None:
            g1 = g2 = self.gamma / 2
        elif g1 is None:
            g1 = self.gamma - g2
        elif g2 is None:
            g2 = self.gamma - g1
        if g1 < 0 or g2 < 0:
            raise ValueError("branch decay rates must be nonnegative")
        if abs(g1 + g2 - self.gamma) > _TOL:
            raise ValueError(
                f"gamma1 + gamma2 = {g1 + g2} must equal gamma = {self.gamma}"
            )
        object.__setattr__(self, "gamma1", float(g1))
        object.__setattr__(self, "gamma2", float(g2))

        # Resolve the detuning split.  The two-photon detuning is always
        # delta = delta_s - delta_c; the symmetric split is the default.
        ds, dc = self.delta_s, self.delta_c
        if ds is None and dc is None:
            ds = self.delta / 2
            dc = ds - self.delta
        elif ds is None:
            ds = self.delta + dc
        elif dc is None:
            dc = ds - self.delta
        if abs(self.delta - (ds - dc)) > 1e-9:
            raise ValueError(
                f"delta = {self.delta} inconsistent with delta_s - delta_c = {ds - dc}"
            )
        object.__setattr__(self, "delta_s", float(ds))
        object.__setattr__(self, "delta_c", float(dc))

        c1, c2 = complex(self.c1), complex(self.c2)
        norm = abs(c1) ** 2 + abs(c2) ** 2
        if abs(norm - 1.0) > _TOL:
            raise ValueError(f"|c1|^2 + |c2|^2 = {norm} must equal 1")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        object.__setattr__(self, "omega_in", complex(self.omega_in))

    def replace(self, **changes) -> "ModelParams":
        """Return a copy with the given fields replaced.

        Unless they are overridden explicitly in the same call, the
        detuning split and branch rates are re-derived from the new
        values rather than carried over, so ``replace(delta=...)``
        behaves like constructing fresh parameters.
        """
        if "delta" in changes:
            changes.setdefault("delta_s", None)
            changes.setdefault("delta_c", None)
        if "gamma" in changes:
            changes.setdefault("gamma1", None)
            changes.setdefault("gamma2", None)
        return replace(self, **changes)

    def as_dict(self) -> dict:
        """Fully resolved parameter set (every field explicit)."""
        out = {}
        for f in fields(self):
            val = getattr(self, f.name)
            if isinstance(val, complex):
                out[f.name] = {"re": val.real, "im": val.imag}
            else:
                out[f.name] = val
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        kwargs = {}
        valid = {f.name for f in fields(cls)}
        for key, val in data.items():
            if key not in valid:
                raise ValueError(f"unknown parameter {key!r}")
            if isinstance(val, dict):
                if set(val) != {"re", "im"}:
                    raise ValueError(f"complex parameter {key!r} needs re/im keys")
                val = complex(val["re"], val["im"])
            kwargs[key] = val
        return cls(**kwargs)
