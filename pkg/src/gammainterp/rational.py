"""Polynomials, rational functions, Blaschke products and Moebius maps.

Polynomials store coefficients in ascending order, ``c[k]`` multiplying
``z**k``. All evaluation is vectorised over numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .config import DEFAULT_TOL, Tolerances
from .errors import DegenerateDataError, GammaInterpError, NotAnalyticError


class Root(NamedTuple):
    value: complex
    multiplicity: int


class ComplexPoly:
    """Polynomial with complex coefficients, ascending order.

    Leading coefficients below ``leading_zero * max|c|`` are trimmed, so the
    reported degree is the numerical degree. The zero polynomial has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim: bool = True, tol: float = DEFAULT_TOL.leading_zero):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if trim:
            scale = np.max(np.abs(c))
            if scale == 0:
                c = np.zeros(1, dtype=complex)
            else:
                keep = np.nonzero(np.abs(c) > tol * scale)[0]
                c = c[: keep[-1] + 1]
        self.coeffs = c

    @classmethod
    def from_roots(cls, roots: Iterable[complex], leading: complex = 1.0) -> "ComplexPoly":
        roots = list(roots)
        if not roots:
            return cls([leading])
        return cls(leading * npoly.polyfromroots(np.asarray(roots, dtype=complex)))

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "ComplexPoly":
        out = np.zeros(k + 1, dtype=complex)
        out[k] = c
        return cls(out)

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def __repr__(self) -> str:
        return f"ComplexPoly({np.array2string(self.coeffs, precision=6)})"

    def _coerce(self, other) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return other
        return ComplexPoly([complex(other)])

    def __add__(self, other):
        return ComplexPoly(npoly.polyadd(self.coeffs, self._coerce(other).coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        return ComplexPoly(npoly.polysub(self.coeffs, self._coerce(other).coeffs))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            return ComplexPoly(npoly.polymul(self.coeffs, other.coeffs))
        return ComplexPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __neg__(self):
        return ComplexPoly(-self.coeffs)

    def __pow__(self, k: int):
        out = ComplexPoly([1.0])
        for _ in range(k):
            out = out * self
        return out

    def deriv(self, k: int = 1) -> "ComplexPoly":
        if self.degree < k:
            return ComplexPoly([0.0])
        return ComplexPoly(npoly.polyder(self.coeffs, k))

    def deflate(self, root: complex) -> tuple["ComplexPoly", complex]:
        """Synthetic division by ``(z - root)``; returns quotient and remainder."""
        c = self.coeffs
        n = len(c) - 1
        if n < 1:
            return ComplexPoly([0.0]), complex(c[0])
        q = np.zeros(n, dtype=complex)
        acc = c[n]
        for k in range(n - 1, -1, -1):
            q[k] = acc
            acc = c[k] + acc * root
        return ComplexPoly(q, trim=False), complex(acc)

    def sharp(self, n: int | None = None) -> "ComplexPoly":
        """``z**n * conj(P(1/conj(z)))``, the reflection used for inner functions."""
        n = self.degree if n is None else n
        c = np.zeros(n + 1, dtype=complex)
        c[: len(self.coeffs)] = self.coeffs
        return ComplexPoly(np.conj(c[::-1]))

    def roots(self, tol: Tolerances = DEFAULT_TOL) -> list[Root]:
        return poly_roots(self, tol)

    def root_values(self, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        """Roots repeated according to multiplicity."""
        out = [r.value for r in self.roots(tol) for _ in range(r.multiplicity)]
        return np.asarray(out, dtype=complex)

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))


def _as_poly(p) -> ComplexPoly:
    return p if isinstance(p, ComplexPoly) else ComplexPoly(p)


def _taylor_scale(coeffs: np.ndarray, z: complex, j: int) -> float:
    # size of the j-th Taylor coefficient at z if all terms added up in modulus
    k = np.arange(j, len(coeffs))
    binom = np.array([math.comb(int(i), j) for i in k], dtype=float)
    return float(np.sum(np.abs(coeffs[j:]) * binom * abs(z) ** (k - j)))


def _is_multiple_root(coeffs: np.ndarray, z: complex, k: int, tol: float) -> bool:
    floor = float(np.max(np.abs(coeffs)))
    for j in range(k):
        d = npoly.polyder(coeffs, j) if j else coeffs
        val = abs(npoly.polyval(z, d)) / math.factorial(j)
        if val > tol * (_taylor_scale(coeffs, z, j) + floor):
            return False
    return True


def _components(points: np.ndarray, radius: float) -> list[list[int]]:
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= radius * (1 + max(abs(points[i]), abs(points[j]))):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _newton_polish(coeffs: np.ndarray, z: complex, steps: int = 4) -> complex:
    d = npoly.polyder(coeffs)
    best, best_res = z, abs(npoly.polyval(z, coeffs))
    for _ in range(steps):
        dz = npoly.polyval(best, d)
        if dz == 0:
            break
        cand = best - npoly.polyval(best, coeffs) / dz
        res = abs(npoly.polyval(cand, coeffs))
        if not res < best_res:
            break
        best, best_res = cand, res
    return complex(best)


def poly_roots(p, tol: Tolerances = DEFAULT_TOL) -> list[Root]:
    """Roots of ``p`` with multiplicities.

    Companion-matrix eigenvalues are grouped into candidate clusters at a
    coarse radius. A cluster of size ``k`` is accepted as one root of
    multiplicity ``k`` only if the first ``k`` Taylor coefficients vanish at
    its centroid; otherwise it is split at a finer radius. Simple roots are
    polished by Newton's method.
    """
    p = _as_poly(p)
    if p.is_zero:
        raise GammaInterpError("roots undefined")
    if p.degree == 0:
        return []
    coeffs = p.coeffs
    raw = npoly.polyroots(coeffs)

    def group(idx: list[int], radius: float) -> list[list[int]]:
        out = []
        for comp in _components(raw[idx], radius):
            members = [idx[i] for i in comp]
            if len(members) == 1:
                out.append(members)
                continue
            centre = complex(np.mean(raw[members]))
            if _is_multiple_root(coeffs, centre, len(members), tol.root_merge):
                out.append(members)
            elif radius > 1e-13:
                out.extend(group(members, radius / 10))
            else:
                out.extend([[m] for m in members])
        return out

    roots = []
    for members in group(list(range(len(raw))), 1e-2):
        if len(members) == 1:
            roots.append(Root(_newton_polish(coeffs, complex(raw[members[0]])), 1))
        else:
            roots.append(Root(complex(np.mean(raw[members])), len(members)))
    roots.sort(key=lambda r: (np.angle(r.value), abs(r.value)))
    return roots


class RationalFn:
    """Quotient of two :class:`ComplexPoly`; degree is the larger of the two."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = _as_poly(num)
        self.den = ComplexPoly([1.0]) if den is None else _as_poly(den)
        if self.den.is_zero:
            raise GammaInterpError("zero denominator")

    @classmethod
    def constant(cls, c: complex) -> "RationalFn":
        return cls([c])

    @classmethod
    def identity(cls) -> "RationalFn":
        return cls([0.0, 1.0])

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __repr__(self) -> str:
        return f"RationalFn(num={self.num!r}, den={self.den!r})"

    def _coerce(self, other) -> "RationalFn":
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, BlaschkeProduct):
            return other.to_rational()
        if isinstance(other, ComplexPoly):
            return RationalFn(other)
        return RationalFn.constant(complex(other))

    def _same_den(self, other: "RationalFn") -> bool:
        a, b = self.den.coeffs, other.den.coeffs
        return a.shape == b.shape and np.allclose(a, b, rtol=0, atol=1e-15 * max(1.0, np.max(np.abs(a))))

    def __add__(self, other):
        o = self._coerce(other)
        if self._same_den(o):
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero:
            raise ZeroDivisionError("division by the zero function")
        return RationalFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def derivative(self) -> "RationalFn":
        return RationalFn(self.num.deriv() * self.den - self.num * self.den.deriv(), self.den * self.den)

    def zeros(self, tol: Tolerances = DEFAULT_TOL) -> list[Root]:
        return [] if self.num.is_zero else poly_roots(self.num, tol)

    def poles(self, tol: Tolerances = DEFAULT_TOL) -> list[Root]:
        return poly_roots(self.den, tol)

    def reduced(self, match: float | None = None, tol: Tolerances = DEFAULT_TOL) -> "RationalFn":
        """Cancel roots shared by numerator and denominator.

        Roots are matched when within ``match * (1 + |r|)``; the shared factor
        is divided out of both polynomials and the remainders discarded.
        Leading coefficients are normalised so the denominator is monic.
        """
        match = tol.coprime if match is None else match
        num, den = self.num, self.den
        if num.is_zero:
            return RationalFn([0.0])
        if num.degree > 0 and den.degree > 0:
            nroots = poly_roots(num, tol)
            droots = poly_roots(den, tol)
            used = [0] * len(nroots)
            for dr in droots:
                best, best_i = None, -1
                for i, nr in enumerate(nroots):
                    avail = nr.multiplicity - used[i]
                    if avail <= 0:
                        continue
                    dist = abs(nr.value - dr.value)
                    if dist <= match * (1 + abs(dr.value)) and (best is None or dist < best):
                        best, best_i = dist, i
                if best_i < 0:
                    continue
                k = min(dr.multiplicity, nroots[best_i].multiplicity - used[best_i])
                used[best_i] += k
                r = 0.5 * (dr.value + nroots[best_i].value)
                for _ in range(k):
                    num, _ = num.deflate(r)
                    den, _ = den.deflate(r)
        lead = den.leading
        return RationalFn(num * (1 / lead), den * (1 / lead))

    def is_analytic_on_closed_disc(self, margin: float = DEFAULT_TOL.pole_margin) -> bool:
        return all(abs(r.value) >= 1 + margin for r in self.reduced().poles())


def as_rational(f) -> RationalFn:
    if isinstance(f, RationalFn):
        return f
    if isinstance(f, BlaschkeProduct):
        return f.to_rational()
    if isinstance(f, MobiusFn):
        return f.to_rational()
    if isinstance(f, ComplexPoly):
        return RationalFn(f)
    return RationalFn.constant(complex(f))


def blaschke_factor(alpha: complex, z):
    """The disc automorphism ``(z - alpha) / (1 - conj(alpha) z)``."""
    z = np.asarray(z, dtype=complex)
    return (z - alpha) / (1 - np.conj(alpha) * z)


def blaschke_eval(alpha: complex, z):
    if abs(alpha) >= 1:
        raise GammaInterpError("Blaschke factor needs |alpha| < 1")
    return blaschke_factor(alpha, z)


@dataclass(frozen=True)
class BlaschkeProduct:
    """``constant * prod_k B_{zeros[k]}``; the constant has modulus one."""

    constant: complex = 1.0
    zeros: tuple = ()

    def __post_init__(self):
        c = complex(self.constant)
        if abs(abs(c) - 1) > 1e-8:
            raise GammaInterpError(f"Blaschke constant must be unimodular, got |c|={abs(c)}")
        zs = tuple(complex(a) for a in self.zeros)
        if any(abs(a) > 1 - 1e-12 for a in zs):
            raise GammaInterpError("Blaschke zeros must lie in the open disc")
        object.__setattr__(self, "constant", c / abs(c))
        object.__setattr__(self, "zeros", zs)

    @classmethod
    def mobius(cls, alpha: complex, c: complex = 1.0) -> "BlaschkeProduct":
        return cls(c, (alpha,))

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.constant, dtype=complex)
        for a in self.zeros:
            out = out * blaschke_factor(a, z)
        return out if out.ndim else complex(out)

    def to_rational(self) -> RationalFn:
        num = ComplexPoly.from_roots(self.zeros, self.constant)
        den = ComplexPoly([1.0])
        for a in self.zeros:
            den = den * ComplexPoly([1.0, -np.conj(a)])
        return RationalFn(num, den)

    def phasar(self, z):
        """``z f'(z) / f(z)``; on the circle this is the real positive phasar derivative."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for a in self.zeros:
            out = out + z * (1 - abs(a) ** 2) / ((z - a) * (1 - np.conj(a) * z))
        return out

    @classmethod
    def from_rational(cls, f: RationalFn, tol: Tolerances = DEFAULT_TOL) -> "BlaschkeProduct":
        f = f.reduced()
        zeros = f.num.root_values(tol) if f.num.degree > 0 else np.zeros(0, dtype=complex)
        if np.any(np.abs(zeros) >= 1):
            raise GammaInterpError("rational function has zeros outside the disc")
        probe = np.exp(0.3j)
        base = cls(1.0, tuple(zeros))(probe)
        c = f(probe) / base
        return cls(c / abs(c), tuple(zeros))

    def to_dict(self) -> dict:
        return {"constant": [self.constant.real, self.constant.imag],
                "zeros": [[a.real, a.imag] for a in self.zeros]}

    @classmethod
    def from_dict(cls, d: dict) -> "BlaschkeProduct":
        c = complex(*d.get("constant", [1.0, 0.0]))
        return cls(c, tuple(complex(*a) for a in d.get("zeros", [])))


def _is_inf(z) -> bool:
    return z is None or (isinstance(z, (complex, float, int, np.number)) and np.isinf(z))


class MobiusFn:
    """``(a z + b) / (c z + d)`` on the Riemann sphere."""

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (complex(x) for x in (a, b, c, d))
        if abs(self.a * self.d - self.b * self.c) < 1e-300:
            raise DegenerateDataError("degenerate cross-ratio data")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.a * z + self.b) / (self.c * z + self.d)

    def compose(self, other: "MobiusFn") -> "MobiusFn":
        m = self.matrix @ other.matrix
        return MobiusFn(*m.ravel())

    def inverse(self) -> "MobiusFn":
        return MobiusFn(self.d, -self.b, -self.c, self.a)

    @property
    def is_disc_automorphism(self) -> bool:
        if abs(self.c) > 0 and abs(-self.d / self.c) <= 1 + 1e-12:
            return False
        circle = np.exp(2j * np.pi * np.arange(8) / 8)
        if np.max(np.abs(np.abs(self(circle)) - 1)) > 1e-9:
            return False
        return abs(self(0.0)) < 1

    def to_blaschke(self) -> BlaschkeProduct:
        if not self.is_disc_automorphism:
            raise GammaInterpError("Moebius map is not a disc automorphism")
        # an automorphism has its zero inside the disc, so a != 0
        alpha = -self.b / self.a
        probe = np.exp(0.7j)
        c = self(probe) / blaschke_factor(alpha, probe)
        return BlaschkeProduct(c / abs(c), (alpha,))

    def to_rational(self) -> RationalFn:
        return RationalFn([self.b, self.a], [self.d, self.c])


def _to_01inf(z1, z2, z3) -> np.ndarray:
    if _is_inf(z1):
        return np.array([[0, z2 - z3], [1, -z3]], dtype=complex)
    if _is_inf(z2):
        return np.array([[1, -z1], [1, -z3]], dtype=complex)
    if _is_inf(z3):
        return np.array([[1, -z1], [0, z2 - z1]], dtype=complex)
    return np.array([[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]], dtype=complex)


def _distinct(points) -> bool:
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = points[i], points[j]
            if _is_inf(a) and _is_inf(b):
                return False
            if not _is_inf(a) and not _is_inf(b) and abs(a - b) <= 1e-12 * (1 + abs(a)):
                return False
    return True


def mobius_from_cross_ratio(sources: Sequence, targets: Sequence) -> MobiusFn:
    """The unique Moebius map sending three distinct sources to three distinct targets."""
    if len(sources) != 3 or len(targets) != 3:
        raise DegenerateDataError("degenerate cross-ratio data")
    if not _distinct(sources) or not _distinct(targets):
        raise DegenerateDataError("degenerate cross-ratio data")
    tz = _to_01inf(*sources)
    tw = _to_01inf(*targets)
    m = np.linalg.inv(tw) @ tz
    m = m / np.max(np.abs(m))
    return MobiusFn(*m.ravel())


def phasar_derivative(f, lam: complex) -> float:
    """``Re(lam f'(lam) / f(lam))`` for a rational function unimodular on the circle."""
    f = as_rational(f)
    lam = complex(lam)
    n, d = complex(f.num(lam)), complex(f.den(lam))
    scale = max(f.num.scale(), f.den.scale())
    if abs(n) <= 1e-14 * scale or abs(d) <= 1e-14 * scale:
        raise GammaInterpError("phasar derivative undefined: zero or pole at the point")
    val = lam * (f.num.deriv()(lam) / n - f.den.deriv()(lam) / d)
    if abs(val.imag) > 1e-9 * max(1.0, abs(val)):
        raise GammaInterpError("phasar derivative has an imaginary part; f is not unimodular here")
    return float(val.real)


def circle_grid(samples: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(samples) / samples)


def is_unimodular_on_circle(f, samples: int = 1024, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when ``|f| = 1`` on the unit circle to within ``tol.unimodular``.

    Shared numerator/denominator roots are cancelled first, so removable
    singularities on the circle are allowed; a genuine pole there raises.
    """
    f = as_rational(f).reduced(match=tol.cancel_match)
    for r in (f.poles(tol) if f.den.degree > 0 else []):
        if abs(abs(r.value) - 1) <= tol.on_circle:
            raise NotAnalyticError("pole on the unit circle")
    vals = f(circle_grid(samples))
    return bool(np.max(np.abs(np.abs(vals) - 1)) <= tol.unimodular)


def poly_to_list(p: ComplexPoly) -> list:
    return [[float(c.real), float(c.imag)] for c in p.coeffs]


def poly_from_list(data) -> ComplexPoly:
    return ComplexPoly([complex(*c) for c in data])


def rational_to_dict(f: RationalFn) -> dict:
    return {"num": poly_to_list(f.num), "den": poly_to_list(f.den)}


def rational_from_dict(d: dict) -> RationalFn:
    return RationalFn(poly_from_list(d["num"]), poly_from_list(d["den"]))
