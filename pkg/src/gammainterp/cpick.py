"""Necessary conditions of Pick type for interpolation into the symmetrised bidisc.

For every Blaschke product ``u`` of degree at most ``nu``, the classical data
``lam_j -> phi(u(lam_j); s_j, p_j)`` must be solvable. Solvability is tested
through a Hermitian pencil that is congruent to the Pick matrix of those data,
and the infimum of its smallest eigenvalue over ``u`` is located by a grid
search followed by Nelder-Mead refinement.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .config import DEFAULT_TOL, Tolerances
from .errors import GammaInterpError
from .gamma import (GammaMap, circle_royal_nodes, gamma_inner_check, is_royal_map, phi)
from .nevpick import NPData, eig_threshold, np_solve_extremal, pick_matrix
from .problem import InterpProblem
from .rational import (BlaschkeProduct, RationalFn, blaschke_factor, is_unimodular_on_circle,
                       mobius_from_cross_ratio)

__all__ = [
    "InterpProblem", "PencilReport", "c_pencil_matrix", "check_c_nu", "compute_q",
    "e_class_membership", "EClassReport", "gamma_pick_matrix",
]


def _values_at_nodes(u, nodes) -> np.ndarray:
    if callable(u):
        return np.asarray(u(nodes), dtype=complex)
    u = np.asarray(u, dtype=complex)
    return np.broadcast_to(u, nodes.shape).astype(complex) if u.ndim == 0 else u


def _pencil_batch(lam, s, p, u) -> np.ndarray:
    """Pencil for a batch of value vectors ``u[..., i] = upsilon(lam_i)``."""
    ui = u[..., :, None]
    uj = np.conj(u[..., None, :])
    si, sj = s[:, None], np.conj(s[None, :])
    pi_, pj = p[:, None], np.conj(p[None, :])
    num = (1 - ui * uj * pi_ * pj
           - 0.5 * ui * (si - pi_ * sj)
           - 0.5 * uj * (sj - pj * si)
           - 0.25 * (1 - ui * uj) * si * sj)
    return num / (1 - lam[:, None] * np.conj(lam[None, :]))


def c_pencil_matrix(prob: InterpProblem, upsilon) -> np.ndarray:
    """The pencil at ``upsilon``; it is PSD exactly when the phi-data are solvable."""
    u = _values_at_nodes(upsilon, prob.nodes)
    return _pencil_batch(prob.nodes, prob.s, prob.p, u)


def gamma_pick_matrix(prob: InterpProblem) -> np.ndarray:
    """Pick matrix of the data ``lam_j -> p_j``; it is the circle average of the constant pencils."""
    return pick_matrix(NPData(prob.nodes, prob.p, prob.tol))


def _lmin3(m: np.ndarray) -> np.ndarray:
    # closed-form smallest eigenvalue of a batch of 3x3 Hermitian matrices
    a, b, c = m[..., 0, 0].real, m[..., 1, 1].real, m[..., 2, 2].real
    d, e, f = m[..., 0, 1], m[..., 1, 2], m[..., 0, 2]
    q = (a + b + c) / 3
    ad, bd, cd = a - q, b - q, c - q
    off = np.abs(d) ** 2 + np.abs(e) ** 2 + np.abs(f) ** 2
    p2 = ad ** 2 + bd ** 2 + cd ** 2 + 2 * off
    pp = np.sqrt(p2 / 6)
    det = ad * bd * cd + 2 * (d * e * np.conj(f)).real - ad * np.abs(e) ** 2 \
        - bd * np.abs(f) ** 2 - cd * np.abs(d) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(pp > 0, det / (2 * pp ** 3), 0.0)
    ang = np.arccos(np.clip(r, -1, 1)) / 3
    return q + 2 * pp * np.cos(ang + 2 * np.pi / 3)


def _lmin_batch(m: np.ndarray) -> np.ndarray:
    if m.shape[-1] == 3:
        return _lmin3(m)
    return np.linalg.eigvalsh(m)[..., 0]


def _lmin(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


def _alpha_from(u: float, v: float) -> complex:
    w = complex(u, v)
    a = w / np.sqrt(1 + abs(w) ** 2)
    # keep strictly inside the disc so the factor stays a valid Blaschke factor
    return a if abs(a) <= 1 - 1e-9 else a / abs(a) * (1 - 1e-9)


def _uv_from(alpha: complex) -> tuple[float, float]:
    w = alpha / np.sqrt(max(1 - abs(alpha) ** 2, 1e-300))
    return float(w.real), float(w.imag)


def _radii(k: int) -> np.ndarray:
    # hyperbolically even spacing from 0 out to pseudo-radius 0.98
    return np.tanh(np.arange(k) * np.arctanh(0.98) / max(k - 1, 1))


@dataclass
class _Candidate:
    value: float
    degree: int
    c: complex
    alpha: complex | None = None

    def blaschke(self) -> BlaschkeProduct:
        if self.degree == 0:
            return BlaschkeProduct(self.c, ())
        return BlaschkeProduct(self.c, (self.alpha,))


@dataclass
class PencilReport:
    status: str  # holds | holds_extremally | holds_extremally_active | fails
    min_eigenvalue: float
    minimizer: dict
    eig_threshold: float
    degree0_min: float
    degree1_min: float | None
    auxiliary_extremal: BlaschkeProduct | None = None
    q: BlaschkeProduct | None = None
    notes: list = field(default_factory=list)
    # other extremal candidates, best first, for callers that need a fallback
    alternatives: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.status != "fails"

    @property
    def extremal(self) -> bool:
        return self.status in ("holds_extremally", "holds_extremally_active")

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "min_eigenvalue": self.min_eigenvalue,
            "minimizer": {k: ([v.real, v.imag] if isinstance(v, complex) else v)
                          for k, v in self.minimizer.items()},
            "eig_threshold": self.eig_threshold,
            "degree0_min": self.degree0_min,
            "degree1_min": self.degree1_min,
            "auxiliary_extremal": None if self.auxiliary_extremal is None
            else self.auxiliary_extremal.to_dict(),
            "q": None if self.q is None else self.q.to_dict(),
            "alternatives": [m.to_dict() for m in self.alternatives],
            "notes": list(self.notes),
        }


class _Search:
    """Grid search and refinement of the pencil's smallest eigenvalue."""

    def __init__(self, prob: InterpProblem):
        self.prob = prob
        self.lam, self.s, self.p = prob.nodes, prob.s, prob.p
        n = len(prob)
        si, sj = self.s[:, None], np.conj(self.s[None, :])
        pi_, pj = self.p[:, None], np.conj(self.p[None, :])
        self.kernel = 1 / (1 - self.lam[:, None] * np.conj(self.lam[None, :]))
        # pencil = K * (A0 - BB*(pp - ss/4) + c B_i X_ij + conj(c B_j) X_ji^*) with |c| = 1
        self.quad = pi_ * pj - 0.25 * si * sj
        self.lin = -0.5 * (si - pi_ * sj)
        self.base = (1 - 0.25 * si * sj)
        self.n = n

    def value(self, u: np.ndarray) -> float:
        uu = u[:, None] * np.conj(u[None, :])
        lin = u[:, None] * self.lin
        m = self.kernel * (self.base - uu * self.quad + lin + lin.conj().T)
        return float(np.linalg.eigvalsh(m)[0])

    def grid_constant(self, samples: int):
        c = np.exp(2j * np.pi * np.arange(samples) / samples)
        u = np.repeat(c[:, None], self.n, axis=1)
        vals = _lmin_batch(_pencil_batch(self.lam, self.s, self.p, u))
        return c, vals

    def grid_degree_one(self, csamples: int, radial: int, angular: int):
        radii = _radii(radial)
        angles = 2 * np.pi * np.arange(angular) / angular
        alphas = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
        cs = np.exp(2j * np.pi * np.arange(csamples) / csamples)
        best_vals = np.empty((alphas.size, csamples))
        chunk = max(1, 40000 // csamples)
        for start in range(0, alphas.size, chunk):
            al = alphas[start:start + chunk]
            b = blaschke_factor(al[:, None], self.lam[None, :])  # (A, n)
            bb = b[:, :, None] * np.conj(b[:, None, :])
            p0 = self.kernel * (self.base - bb * self.quad)
            p1 = self.kernel * (b[:, :, None] * self.lin)
            mats = (p0[:, None] + cs[None, :, None, None] * p1[:, None]
                    + np.conj(cs)[None, :, None, None] * np.conj(np.swapaxes(p1, -1, -2))[:, None])
            best_vals[start:start + chunk] = _lmin_batch(mats)
        return alphas, cs, best_vals

    def refine_constant(self, theta0: float, h: float) -> _Candidate:
        f = lambda t: self.value(np.full(self.n, np.exp(1j * t)))
        res = minimize_scalar(f, bounds=(theta0 - h, theta0 + h), method="bounded",
                              options={"xatol": 1e-13})
        t = float(res.x) % (2 * np.pi)
        return _Candidate(float(res.fun), 0, complex(np.exp(1j * t)))

    def refine_degree_one(self, c0: complex, alpha0: complex) -> _Candidate:
        def f(x):
            a = _alpha_from(x[1], x[2])
            return self.value(np.exp(1j * x[0]) * blaschke_factor(a, self.lam))

        u, v = _uv_from(alpha0)
        x0 = np.array([np.angle(c0), u, v])
        simplex = np.array([x0, x0 + [0.02, 0, 0], x0 + [0, 0.02, 0], x0 + [0, 0, 0.02]])
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-17, "maxiter": 6000,
                                "maxfev": 4000, "initial_simplex": simplex})
        a = _alpha_from(res.x[1], res.x[2])
        return _Candidate(float(res.fun), 1, complex(np.exp(1j * (res.x[0] % (2 * np.pi)))), a)


def _phi_pick_singular(prob: InterpProblem, u: np.ndarray, tol: Tolerances) -> bool:
    w = phi(u, prob.s, prob.p, tol)
    if np.any(np.abs(w) > 1 + 1e-9):
        return False
    data = NPData(prob.nodes, w, tol)
    lmin = _lmin(pick_matrix(data))
    scale = float(np.min(np.abs(1 - 0.5 * u * prob.s)) ** 2)
    return lmin <= tol.extremal / max(scale, 1e-300)


def _best_cells(vals: np.ndarray, k: int) -> np.ndarray:
    flat = np.argsort(vals, axis=None)[:k]
    return np.array(np.unravel_index(flat, vals.shape)).T


def _tie_key(c: _Candidate):
    a = 0.0 if c.alpha is None else abs(c.alpha)
    return (round(a, 6), round(float(np.angle(c.c) % (2 * np.pi)), 6))


def _pick(cands: list[_Candidate], eps: float) -> _Candidate:
    # an isolated minimum has a quadratic well, so only round-off ties count as a flat family
    floor = min(c.value for c in cands)
    ties = [c for c in cands if c.value <= floor + 1e-3 * eps]
    return min(ties, key=_tie_key)


def _alternatives(ext0: list[_Candidate], ext1: list[_Candidate], chosen: _Candidate,
                  eps: float, limit: int = 2) -> list[BlaschkeProduct]:
    out: list[BlaschkeProduct] = []
    probe = np.exp(1j * np.linspace(0, 2 * np.pi, 7)[:-1])
    seen = [chosen.blaschke()(probe)]
    for group in (ext0, ext1):
        if not group:
            continue
        b = _pick(group, eps).blaschke()
        vals = b(probe)
        if all(np.max(np.abs(vals - v)) > 1e-6 for v in seen):
            out.append(b)
            seen.append(vals)
    return out[:limit]


def check_c_nu(prob: InterpProblem, nu: int = 1, compute_aux: bool = True) -> PencilReport:
    """Decide whether the data satisfy the degree-``nu`` Pick condition.

    ``nu`` is 0 or 1. The reported minimum is the smallest eigenvalue of the
    pencil over all sampled and refined ``upsilon``.
    """
    if nu not in (0, 1):
        raise GammaInterpError("only degrees 0 and 1 are supported")
    tol, grids = prob.tol, prob.grids
    search = _Search(prob)

    cs, vals0 = search.grid_constant(grids.constant_samples)
    h = 2 * np.pi / grids.constant_samples
    cands0 = []
    for idx in np.argsort(vals0)[: grids.refine_starts]:
        cands0.append(search.refine_constant(float(np.angle(cs[idx])), h))
    cands0.sort(key=lambda c: c.value)
    best0 = cands0[0]

    cands1: list[_Candidate] = []
    if nu == 1:
        alphas, cgrid, vals1 = search.grid_degree_one(grids.constant_samples, grids.radial, grids.angular)
        starts = [tuple(x) for x in _best_cells(vals1, grids.refine_starts)]
        flat = np.argwhere(vals1 <= tol.extremal)
        if flat.size:
            # flat families of extremals: also start from the tie-break cell
            mod = np.round(np.abs(alphas[flat[:, 0]]), 9)
            arg = np.round(np.angle(cgrid[flat[:, 1]]) % (2 * np.pi), 9)
            ia, ic = flat[np.lexsort((arg, mod))[0]]
            starts.append((ia, ic))
            u = cgrid[ic] * blaschke_factor(alphas[ia], prob.nodes)
            cands1.append(_Candidate(search.value(u), 1, complex(cgrid[ic]), complex(alphas[ia])))
        for ia, ic in starts:
            cands1.append(search.refine_degree_one(cgrid[ic], alphas[ia]))
        cands1.sort(key=lambda c: c.value)

    allc = cands0 + cands1
    best = min(allc, key=lambda c: c.value)
    u_best = best.blaschke()(prob.nodes)
    eps = eig_threshold(c_pencil_matrix(prob, u_best), tol)
    minimizer = {"degree": best.degree, "c": best.c,
                 "alpha": None if best.alpha is None else best.alpha}
    report = PencilReport("holds", best.value, minimizer, eps, best0.value,
                          cands1[0].value if cands1 else None)
    if best.value < -eps:
        report.status = "fails"
        return report

    def extremal(c: _Candidate) -> bool:
        return c.value <= tol.extremal and _phi_pick_singular(prob, c.blaschke()(prob.nodes), tol)

    ext0 = [c for c in cands0 if extremal(c)]
    ext1 = [c for c in cands1 if extremal(c)]
    active = [c for c in ext1 if _is_active(search, c, tol)]
    chosen = None
    if nu == 0 and ext0:
        report.status = "holds_extremally_active"
        chosen = _pick(ext0, eps)
    elif active:
        report.status = "holds_extremally_active"
        chosen = _pick(active, eps)
    elif ext0 or ext1:
        report.status = "holds_extremally"
        chosen = _pick(ext0, eps) if ext0 else _pick(ext1, eps)
        if not ext0:
            report.notes.append("degree-one minimiser approaches the boundary of the parameter disc")
    if chosen is not None:
        report.auxiliary_extremal = chosen.blaschke()
        report.alternatives = _alternatives(ext0, ext1, chosen, eps)
        report.minimizer = {"degree": chosen.degree, "c": chosen.c, "alpha": chosen.alpha}
        if compute_aux:
            try:
                report.q = compute_q(prob, report.auxiliary_extremal)
            except GammaInterpError as exc:
                report.notes.append(f"q not computed: {exc}")
    return report


def _is_active(search: _Search, c: _Candidate, tol: Tolerances) -> bool:
    if c.alpha is None or abs(c.alpha) > tol.active_radius:
        return False
    step = tol.active_step
    vals = []
    for d in (step, -step, 1j * step, -1j * step):
        a = c.alpha + d
        vals.append(search.value(c.c * blaschke_factor(a, search.lam)))
    vals = np.array(vals)
    # strictly increasing, or the minimiser sits in a flat family of extremals
    return bool(np.all(vals > c.value) or np.all(vals <= tol.extremal))


def compute_q(prob: InterpProblem, m: BlaschkeProduct) -> BlaschkeProduct:
    """The Blaschke product interpolating the phi-data of an auxiliary extremal ``m``."""
    tol = prob.tol
    u = np.asarray(m(prob.nodes), dtype=complex)
    w = phi(u, prob.s, prob.p, tol)
    if np.any(np.abs(w) > 1 + 1e-8):
        raise GammaInterpError("m is not an auxiliary extremal")
    big = np.abs(w) > 1
    w[big] = w[big] / np.abs(w[big])
    data = NPData(prob.nodes, w, tol)
    pm = pick_matrix(data)
    eig = np.linalg.eigvalsh(0.5 * (pm + pm.conj().T))
    scale = float(np.min(np.abs(1 - 0.5 * u * prob.s)) ** 2)
    thresh = max(tol.extremal / max(scale, 1e-300), eig_threshold(pm, tol))
    if eig[0] > thresh:
        raise GammaInterpError("m is not an auxiliary extremal")
    rank = int(np.sum(eig > thresh))
    return np_solve_extremal(data, tol, rank=rank)


@dataclass
class EClassReport:
    member: bool
    m: BlaschkeProduct | None = None
    q: RationalFn | None = None
    degree: int | None = None
    route: str = ""


def phi_composite(h: GammaMap, m) -> RationalFn:
    """``(2 m p - s) / (2 - m s)`` as a single quotient, before cancellation."""
    from .rational import as_rational
    mr = as_rational(m)
    ns, np_, d = h.common_form()
    num = 2 * (mr.num * np_) - ns * mr.den
    den = 2 * (mr.den * d) - mr.num * ns
    return RationalFn(num, den)


def _candidate_ms(h: GammaMap, nu: int, exact: bool, tol: Tolerances):
    nodes = circle_royal_nodes(h, tol)
    targets = 0.5 * np.conj(h.s(nodes)) if nodes.size else np.zeros(0, complex)
    out: list[tuple[BlaschkeProduct, str]] = []
    if nu == 0 or not exact:
        for t in targets:
            out.append((BlaschkeProduct(t / abs(t), ()), "royal node constant"))
        out.append((BlaschkeProduct(1.0, ()), "generic constant"))
    if nu == 1:
        for i, j, k in itertools.combinations(range(nodes.size), 3):
            try:
                mob = mobius_from_cross_ratio(nodes[[i, j, k]], targets[[i, j, k]])
            except GammaInterpError:
                continue
            if mob.is_disc_automorphism:
                out.append((mob.to_blaschke(), "cross-ratio through three royal nodes"))
        for i, j in itertools.combinations(range(nodes.size), 2):
            if abs(targets[i] - targets[j]) < 1e-9:
                continue
            a0, a1 = np.angle(nodes[i]), np.angle(nodes[j]) % (2 * np.pi)
            b0, b1 = np.angle(targets[i]), np.angle(targets[j])
            da = (a1 - a0) % (2 * np.pi)
            db = (b1 - b0) % (2 * np.pi)
            mob = mobius_from_cross_ratio(
                [nodes[i], nodes[j], np.exp(1j * (a0 + da / 2))],
                [targets[i], targets[j], np.exp(1j * (b0 + db / 2))])
            if mob.is_disc_automorphism:
                out.append((mob.to_blaschke(), "automorphism through two royal nodes"))
        for t in (targets if targets.size else [1.0]):
            if nodes.size:
                # rotation-free automorphism fixing one node target
                c = t / nodes[0]
                out.append((BlaschkeProduct(c / abs(c), (0.0,)), "rotation through one royal node"))
        out.append((BlaschkeProduct(1.0, (0.0,)), "identity"))
    return out


def e_class_membership(h: GammaMap, nu: int, n: int, exact_degree: bool = False) -> EClassReport:
    """Whether some ``m`` of degree at most ``nu`` makes ``(2mp - s)/(2 - ms)`` inner of degree < ``n``.

    Cancellation can only happen at royal nodes on the circle where
    ``m = conj(s)/2``, so the candidates for ``m`` are built from those nodes.
    With ``exact_degree`` the witness must have degree exactly ``nu``.
    """
    tol = DEFAULT_TOL
    if not gamma_inner_check(h, tol=tol).is_inner:
        raise GammaInterpError("map is not inner")
    if is_royal_map(h):
        f = h.s * 0.5
        deg = f.reduced().degree
        m = BlaschkeProduct(1.0, (0.0,) if nu == 1 else ())
        return EClassReport(deg <= n - 1, m, -f, deg, "royal map: the composite is -s/2 for every m")
    for m, route in _candidate_ms(h, nu, exact_degree, tol):
        if exact_degree and m.degree != nu:
            continue
        f = phi_composite(h, m).reduced(match=tol.cancel_match)
        if f.degree > n - 1:
            continue
        if not f.is_analytic_on_closed_disc():
            continue
        try:
            if not is_unimodular_on_circle(f, tol=tol):
                continue
        except GammaInterpError:
            continue
        return EClassReport(True, m, f, f.degree, route)
    return EClassReport(False, route="no candidate produced enough cancellations")
