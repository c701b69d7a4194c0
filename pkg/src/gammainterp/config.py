"""Numerical tolerances and search grids, collected in one place.

Every threshold used by the library lives on :class:`Tolerances` or
:class:`Grids`. Functions accept an optional record so that a problem file
can override any value without touching module globals.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    leading_zero: float = 1e-12  # relative, for trimming polynomial coefficients
    root_merge: float = 1e-10  # relative derivative test for multiple roots
    coprime: float = 1e-9  # root matching when cancelling num/den
    cancel_match: float = 1e-6  # looser matching for analytically expected cancellations
    on_circle: float = 1e-8
    unimodular: float = 1e-8
    node_separation: float = 1e-10
    eig: float = 1e-9  # scaled by (trace/n + 1)
    extremal: float = 1e-6
    membership: float = 1e-9
    phi_singular: float = 1e-12
    boundary_value: float = 1e-9  # |w| counted as 1 for Schur steps
    np_residual: float = 1e-8
    diamond_interior: float = 1e-8
    diamond_boundary: float = 1e-7
    cancellation: float = 1e-5
    s_bound: float = 1e-7
    interpolation: float = 1e-7
    pole_margin: float = 1e-9
    active_step: float = 1e-4
    active_radius: float = 0.995

    def to_dict(self) -> dict:
        return asdict(self)

    def updated(self, overrides: dict | None) -> "Tolerances":
        return _apply(self, overrides)


@dataclass(frozen=True)
class Grids:
    constant_samples: int = 720
    radial: int = 24
    angular: int = 96
    refine_starts: int = 5
    membership_samples: int = 2048
    boundary_samples: int = 4096
    inner_samples: int = 1024
    diamond_starts: int = 32

    def to_dict(self) -> dict:
        return asdict(self)

    def updated(self, overrides: dict | None) -> "Grids":
        return _apply(self, overrides)


def _apply(record, overrides):
    if not overrides:
        return record
    known = {f.name for f in fields(record)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"unknown override keys: {sorted(unknown)}")
    kind = {f.name: type(getattr(record, f.name)) for f in fields(record)}
    return replace(record, **{k: kind[k](v) for k, v in overrides.items()})


DEFAULT_TOL = Tolerances()
DEFAULT_GRIDS = Grids()
