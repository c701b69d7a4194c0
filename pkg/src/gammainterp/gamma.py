"""Geometry of the symmetrised bidisc.

Points are pairs ``(s, p)``; the open domain ``G`` is the image of the open
bidisc under ``(z, w) -> (z + w, z w)`` and ``Gamma`` is its closure.
Membership is decided through the family of linear fractional functions
``phi(z; s, p) = (2 z p - s) / (2 - z s)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .config import DEFAULT_GRIDS, DEFAULT_TOL, Tolerances
from .errors import (DegenerateDataError, GammaInterpError, NotAnalyticError,
                     RoyalMapError, UnsolvableError)
from .nevpick import NPData, np_solvable, np_solve
from .problem import InterpProblem
from .rational import ComplexPoly, RationalFn, as_rational, circle_grid, poly_roots


def phi(z, s, p, tol: Tolerances = DEFAULT_TOL):
    """``(2 z p - s) / (2 - z s)``; vectorised over all arguments."""
    z, s, p = (np.asarray(a, dtype=complex) for a in (z, s, p))
    den = 2 - z * s
    if np.any(np.abs(den) < tol.phi_singular):
        raise GammaInterpError("Φ singular")
    out = (2 * z * p - s) / den
    return out if out.ndim else complex(out)


def _sup_phi_on_circle(s: complex, p: complex, samples: int, tol: Tolerances) -> float:
    theta = 2 * np.pi * np.arange(samples) / samples
    w = np.exp(1j * theta)
    den = 2 - w * s
    ok = np.abs(den) > tol.phi_singular
    vals = np.full(samples, -np.inf)
    vals[ok] = np.abs((2 * w[ok] * p - s) / den[ok])
    k = int(np.argmax(vals))
    best = vals[k]
    if not np.isfinite(best):
        return best
    h = 2 * np.pi / samples

    def neg(t):
        d = 2 - np.exp(1j * t) * s
        if abs(d) <= tol.phi_singular:
            return -best
        return -abs((2 * np.exp(1j * t) * p - s) / d)

    res = minimize_scalar(neg, bounds=(theta[k] - h, theta[k] + h), method="bounded",
                          options={"xatol": 1e-12})
    return max(best, -float(res.fun))


def in_open_gamma(s: complex, p: complex, samples: int = DEFAULT_GRIDS.membership_samples,
                  tol: Tolerances = DEFAULT_TOL) -> bool:
    s, p = complex(s), complex(p)
    if abs(s) >= 2:
        return False
    return bool(_sup_phi_on_circle(s, p, samples, tol) < 1 - tol.membership)


def in_closed_gamma(s: complex, p: complex, samples: int = DEFAULT_GRIDS.membership_samples,
                    tol: Tolerances = DEFAULT_TOL) -> bool:
    s, p = complex(s), complex(p)
    if abs(s) > 2 + tol.membership or abs(p) > 1 + tol.membership:
        return False
    return bool(_sup_phi_on_circle(s, p, samples, tol) <= 1 + tol.membership)


def in_distinguished_boundary(s: complex, p: complex, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``|p| = 1``, ``s = conj(s) p`` and ``|s| <= 2``: the image of the torus."""
    s, p = complex(s), complex(p)
    eps = tol.on_circle
    return abs(abs(p) - 1) <= eps and abs(s - np.conj(s) * p) <= eps and abs(s) <= 2 + eps


def in_topological_boundary(s: complex, p: complex, samples: int = DEFAULT_GRIDS.membership_samples,
                            tol: Tolerances = DEFAULT_TOL) -> bool:
    return in_closed_gamma(s, p, samples, tol) and not in_open_gamma(s, p, samples, tol)


class GammaMap:
    """A rational map ``lam -> (s(lam), p(lam))``."""

    def __init__(self, s, p):
        self.s = as_rational(s).reduced()
        self.p = as_rational(p).reduced()

    def __call__(self, lam):
        return self.s(lam), self.p(lam)

    def __repr__(self) -> str:
        return f"GammaMap(s={self.s!r}, p={self.p!r})"

    @property
    def degree(self) -> int:
        return self.p.degree

    def common_form(self) -> tuple[ComplexPoly, ComplexPoly, ComplexPoly]:
        """``(Ns, Np, D)`` with ``s = Ns / D`` and ``p = Np / D``, ``D`` monic of least degree."""
        ds, dp = self.s.den, self.p.den
        rs = poly_roots(ds) if ds.degree > 0 else []
        rp = poly_roots(dp) if dp.degree > 0 else []
        merged: list[list] = [[r.value, r.multiplicity, 0] for r in rs]
        for r in rp:
            for entry in merged:
                if abs(entry[0] - r.value) <= 1e-8 * (1 + abs(r.value)):
                    entry[2] = r.multiplicity
                    break
            else:
                merged.append([r.value, 0, r.multiplicity])
        d = ComplexPoly([1.0])
        extra_s = ComplexPoly([1.0])
        extra_p = ComplexPoly([1.0])
        for value, ms, mp in merged:
            top = max(ms, mp)
            lin = ComplexPoly([-value, 1.0])
            d = d * lin ** top
            extra_s = extra_s * lin ** (top - ms)
            extra_p = extra_p * lin ** (top - mp)
        ns = self.s.num * extra_s * (1 / ds.leading)
        np_ = self.p.num * extra_p * (1 / dp.leading)
        return ns, np_, d

    def to_dict(self) -> dict:
        from .rational import rational_to_dict
        return {"s": rational_to_dict(self.s), "p": rational_to_dict(self.p)}

    @classmethod
    def from_dict(cls, d: dict) -> "GammaMap":
        from .rational import rational_from_dict
        return cls(rational_from_dict(d["s"]), rational_from_dict(d["p"]))


@dataclass(frozen=True)
class RoyalNode:
    value: complex | None  # None is the point at infinity
    multiplicity: int
    on_circle: bool

    def to_dict(self) -> dict:
        v = None if self.value is None else [self.value.real, self.value.imag]
        return {"value": v, "multiplicity": self.multiplicity, "on_circle": self.on_circle}


def royal_numerator(h: GammaMap) -> ComplexPoly:
    """Numerator of ``s**2 - 4 p`` over the common denominator ``D**2``."""
    ns, np_, d = h.common_form()
    a = (ns * ns).coeffs
    b = (4 * (np_ * d)).coeffs
    n = max(len(a), len(b))
    raw = np.zeros(n, dtype=complex)
    raw[: len(a)] += a
    raw[: len(b)] -= b
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    if np.max(np.abs(raw)) <= 1e-12 * scale:
        raise RoyalMapError("royal map")
    return ComplexPoly(raw)


def is_royal_map(h: GammaMap) -> bool:
    try:
        royal_numerator(h)
    except RoyalMapError:
        return True
    return False


def royal_nodes(h: GammaMap, tol: Tolerances = DEFAULT_TOL) -> list[RoyalNode]:
    """Zeros of ``s**2 - 4 p`` with multiplicity, padded with infinity to ``2 deg p``."""
    num = royal_numerator(h)
    nodes = [RoyalNode(r.value, r.multiplicity, abs(abs(r.value) - 1) <= tol.on_circle)
             for r in poly_roots(num, tol)]
    missing = 2 * h.degree - num.degree
    if missing > 0:
        nodes.append(RoyalNode(None, missing, False))
    return nodes


def circle_royal_nodes(h: GammaMap, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    nodes = [n.value / abs(n.value) for n in royal_nodes(h, tol) if n.on_circle]
    return np.asarray(nodes, dtype=complex)


@dataclass(frozen=True)
class InnerReport:
    is_inner: bool
    max_abs_p_defect: float
    max_symmetry_defect: float
    max_abs_s: float


def check_analytic(f: RationalFn, tol: Tolerances = DEFAULT_TOL) -> None:
    f = f.reduced()
    if f.den.degree <= 0:
        return
    for r in f.poles(tol):
        if abs(r.value) < 1 - tol.on_circle:
            raise NotAnalyticError("not analytic")


def gamma_inner_check(h: GammaMap, samples: int = DEFAULT_GRIDS.inner_samples,
                      tol: Tolerances = DEFAULT_TOL) -> InnerReport:
    """Whether ``h`` maps the circle into the distinguished boundary."""
    check_analytic(h.s, tol)
    check_analytic(h.p, tol)
    lam = circle_grid(samples)
    s, p = h(lam)
    dp = float(np.max(np.abs(np.abs(p) - 1)))
    dsym = float(np.max(np.abs(s - np.conj(s) * p)))
    smax = float(np.max(np.abs(s)))
    eps = tol.on_circle
    return InnerReport(dp <= eps and dsym <= eps and smax <= 2 + eps, dp, dsym, smax)


def d_omega_membership(s: complex, p: complex, tol: Tolerances = DEFAULT_TOL) -> complex:
    """The unimodular ``omega`` with ``(s, p) = (omega p + conj(omega), p)``.

    Only defined off the distinguished boundary, where it is unique.
    """
    s, p = complex(s), complex(p)
    if in_distinguished_boundary(s, p, tol):
        raise GammaInterpError("point lies in the distinguished boundary; omega is not unique")
    if not in_topological_boundary(s, p, tol=tol):
        raise GammaInterpError("point is not in the topological boundary")
    wbar = (s - np.conj(s) * p) / (1 - abs(p) ** 2)
    return complex(np.conj(wbar / abs(wbar)))


@dataclass
class BoundarySolution:
    omega: complex | None
    f: RationalFn
    h: GammaMap


def boundary_interp_solve(prob: InterpProblem) -> BoundarySolution:
    """Interpolate targets that all lie in the topological boundary.

    Such a solution maps the whole disc into one analytic disc
    ``{(omega z + conj(omega), z)}``, or is constant when a target is in the
    distinguished boundary.
    """
    tol = prob.tol
    for s, p in zip(prob.s, prob.p):
        if not in_topological_boundary(s, p, tol=tol):
            raise DegenerateDataError("targets not co-located: expected all targets in the boundary")
    dist = [in_distinguished_boundary(s, p, tol) for s, p in zip(prob.s, prob.p)]
    if any(dist):
        if np.ptp(prob.s) > tol.interpolation or np.ptp(prob.p) > tol.interpolation or not all(dist):
            raise UnsolvableError("unsolvable: a distinguished-boundary target forces a constant map")
        f = RationalFn.constant(prob.p[0])
        return BoundarySolution(None, f, GammaMap(RationalFn.constant(prob.s[0]), f))
    omegas = np.array([d_omega_membership(s, p, tol) for s, p in zip(prob.s, prob.p)])
    if np.max(np.abs(omegas - omegas[0])) > 1e-8:
        raise UnsolvableError("unsolvable: targets lie in different boundary discs")
    omega = complex(np.mean(omegas))
    omega /= abs(omega)
    data = NPData(prob.nodes, prob.p, tol)
    if np_solvable(data, tol) == "unsolvable":
        raise UnsolvableError("unsolvable")
    # a unimodular Schur parameter keeps f inner, so the solution is inner as well
    f = np_solve(data, 1.0, tol)
    s = f * omega + np.conj(omega)
    return BoundarySolution(omega, f, GammaMap(s, f))


def scaling_identity_check(z: complex, s: complex, p: complex, r: float) -> float:
    """Residual of the radial scaling identity for ``|2 - z r s|**2 - |2 z r p - r s|**2``."""
    lhs = abs(2 - z * r * s) ** 2 - abs(2 * z * r * p - r * s) ** 2
    rhs = r ** 2 * (abs(2 - z * s) ** 2 - abs(2 * z * p - s) ** 2) \
        + 4 * (1 - r) * (1 + r - r * (z * s).real)
    return float(abs(lhs - rhs))
