"""Interpolation problems and their JSON representation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULT_GRIDS, DEFAULT_TOL, Grids, Tolerances
from .errors import DegenerateDataError
from .rational import BlaschkeProduct

FORMAT_VERSION = "gamma-interp/1"


def cpair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def from_pair(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if len(v) != 2:
        raise DegenerateDataError(f"expected [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


@dataclass
class InterpProblem:
    """Nodes in the disc and targets ``(s_j, p_j)`` in the closed symmetrised bidisc."""

    nodes: np.ndarray
    s: np.ndarray
    p: np.ndarray
    tol: Tolerances = DEFAULT_TOL
    grids: Grids = DEFAULT_GRIDS
    fixed_m: BlaschkeProduct | None = None
    fixed_q: BlaschkeProduct | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.nodes = np.atleast_1d(np.asarray(self.nodes, dtype=complex))
        self.s = np.atleast_1d(np.asarray(self.s, dtype=complex))
        self.p = np.atleast_1d(np.asarray(self.p, dtype=complex))
        n = self.nodes.size
        if n == 0 or self.s.size != n or self.p.size != n:
            raise DegenerateDataError("nodes and targets must have equal, non-zero length")
        if np.any(np.abs(self.nodes) >= 1):
            raise DegenerateDataError("nodes must lie in the open disc")
        sep = np.abs(self.nodes[:, None] - self.nodes[None, :]) + np.eye(n)
        if np.any(sep <= self.tol.node_separation):
            raise DegenerateDataError("nodes must be distinct")

    def __len__(self) -> int:
        return self.nodes.size

    @classmethod
    def from_map(cls, h, nodes, **kw) -> "InterpProblem":
        s, p = h(np.asarray(nodes, dtype=complex))
        return cls(nodes, s, p, **kw)

    def permuted(self, order) -> "InterpProblem":
        order = list(order)
        return InterpProblem(self.nodes[order], self.s[order], self.p[order], self.tol,
                             self.grids, self.fixed_m, self.fixed_q, dict(self.extra))

    def to_dict(self) -> dict:
        out = {
            "version": FORMAT_VERSION,
            "nodes": [cpair(z) for z in self.nodes],
            "targets": [{"s": cpair(a), "p": cpair(b)} for a, b in zip(self.s, self.p)],
        }
        tol = {k: v for k, v in self.tol.to_dict().items() if v != getattr(DEFAULT_TOL, k)}
        grids = {k: v for k, v in self.grids.to_dict().items() if v != getattr(DEFAULT_GRIDS, k)}
        overrides = {}
        if tol:
            overrides["tolerances"] = tol
        if grids:
            overrides["grids"] = grids
        if self.fixed_m is not None:
            overrides["m"] = self.fixed_m.to_dict()
        if self.fixed_q is not None:
            overrides["q"] = self.fixed_q.to_dict()
        if overrides:
            out["overrides"] = overrides
        out.update(self.extra)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "InterpProblem":
        if d.get("version") != FORMAT_VERSION:
            raise DegenerateDataError(f"unsupported problem version {d.get('version')!r}")
        try:
            nodes = [from_pair(z) for z in d["nodes"]]
            s = [from_pair(t["s"]) for t in d["targets"]]
            p = [from_pair(t["p"]) for t in d["targets"]]
        except (KeyError, TypeError) as exc:
            raise DegenerateDataError(f"malformed problem file: {exc}") from exc
        ov = d.get("overrides", {})
        tol = DEFAULT_TOL.updated(ov.get("tolerances"))
        grids = DEFAULT_GRIDS.updated(ov.get("grids"))
        m = BlaschkeProduct.from_dict(ov["m"]) if "m" in ov else None
        q = BlaschkeProduct.from_dict(ov["q"]) if "q" in ov else None
        extra = {k: v for k, v in d.items() if k not in {"version", "nodes", "targets", "overrides"}}
        return cls(nodes, s, p, tol, grids, m, q, extra)

    def dumps(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def load(cls, path) -> "InterpProblem":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise DegenerateDataError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


class _Encoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, (complex, np.complexfloating)):
            return cpair(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if hasattr(o, "to_dict"):
            return o.to_dict()
        return super().default(o)


def dumps(obj, indent: int = 2) -> str:
    # Python floats serialise with repr, which round-trips exactly (17 significant digits suffice)
    return json.dumps(obj, cls=_Encoder, indent=indent)
