"""Closed-form rational maps into the symmetrised bidisc used as test fixtures."""
from __future__ import annotations

import numpy as np

from .gamma import GammaMap
from .rational import BlaschkeProduct, ComplexPoly, RationalFn

DEFAULT_NODES = (0.3, -0.2, 0.4j)


def _bl(alpha: complex) -> RationalFn:
    return BlaschkeProduct(1.0, (alpha,)).to_rational()


def _z(k: int = 1) -> RationalFn:
    return RationalFn(ComplexPoly.monomial(k))


def symmetrize(f, g) -> GammaMap:
    """``(f + g, f g)`` for two analytic self-maps of the disc."""
    f, g = (x.to_rational() if isinstance(x, BlaschkeProduct) else x for x in (f, g))
    return GammaMap(f + g, f * g)


def royal_lift(f) -> GammaMap:
    """``(2 f, f**2)``, a map into the royal variety."""
    f = f.to_rational() if isinstance(f, BlaschkeProduct) else f
    return GammaMap(f * 2, f * f)


def ex52_1(r: float = 0.9) -> GammaMap:
    """``(2 r lam, lam**2)``: constant auxiliary extremals only."""
    return GammaMap(RationalFn([0, 2 * r]), _z(2))


def ex52_2(r: float = 0.5) -> GammaMap:
    den = ComplexPoly([1, 0, 0, r])
    s = RationalFn(ComplexPoly([0, 0, 2 * (1 - r)]), den)
    p = RationalFn(ComplexPoly([0, r, 0, 0, 1]), den)
    return GammaMap(s, p)


def ex52_3(zeros=(0.3,), constant: complex = 1.0) -> GammaMap:
    return royal_lift(BlaschkeProduct(constant, tuple(zeros)))


def excaddy2(alpha: float = 0.5) -> GammaMap:
    return symmetrize(_z(2), BlaschkeProduct(1.0, (alpha, -alpha)))


def excaddy3(alpha: complex = -1 / np.sqrt(3)) -> GammaMap:
    return symmetrize(_z(3), _bl(alpha))


def excaddy4(alpha: complex = 1 / 3) -> GammaMap:
    return symmetrize(_z(2), _bl(alpha))


def surprise(a: complex = 0.5, c: complex = 1.0) -> GammaMap:
    den = ComplexPoly([1, -np.conj(a)])
    return GammaMap(RationalFn(ComplexPoly([0, c]), den), RationalFn(ComplexPoly([0, -a, 1]), den))


CATALOGUE = {
    "ex52_1": (ex52_1, {"r": 0.9}),
    "ex52_2": (ex52_2, {"r": 0.5}),
    "ex52_3": (ex52_3, {"zeros": [0.3]}),
    "excaddy2": (excaddy2, {"alpha": 0.5}),
    "excaddy3": (excaddy3, {"alpha": -1 / np.sqrt(3)}),
    "excaddy4": (excaddy4, {"alpha": 1 / 3}),
    "surprise": (surprise, {"a": 0.5, "c": 1.0}),
}


def build(name: str, **params) -> GammaMap:
    if name not in CATALOGUE:
        raise KeyError(name)
    fn, defaults = CATALOGUE[name]
    kw = dict(defaults)
    kw.update({k: v for k, v in params.items() if v is not None})
    return fn(**kw)
