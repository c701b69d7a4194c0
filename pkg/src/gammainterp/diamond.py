"""Mixed interior/boundary Blaschke interpolation for the second coordinate.

Given an auxiliary extremal ``m`` and the inner function ``q`` it produces,
the product ``p`` must interpolate the interior data and take the values
``conj(m(tau))**2`` at the points ``tau`` of the circle where ``m q = 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .config import DEFAULT_GRIDS, DEFAULT_TOL, Grids, Tolerances
from .errors import ConstructionError, DegenerateDataError, GammaInterpError
from .nevpick import NPData, np_solve, psd_status
from .problem import cpair, dumps, from_pair
from .rational import BlaschkeProduct, ComplexPoly, poly_roots


@dataclass
class DiamondProblem:
    nodes: np.ndarray
    targets: np.ndarray
    tau: np.ndarray
    tau_targets: np.ndarray
    m: BlaschkeProduct
    q: BlaschkeProduct

    def __post_init__(self):
        for name in ("nodes", "targets", "tau", "tau_targets"):
            setattr(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=complex)))

    @property
    def all_nodes(self) -> np.ndarray:
        return np.concatenate([self.nodes, self.tau])

    @property
    def all_values(self) -> np.ndarray:
        return np.concatenate([self.targets, self.tau_targets])

    def to_dict(self) -> dict:
        return {
            "version": "gamma-diamond/1",
            "nodes": [cpair(z) for z in self.nodes],
            "targets": [cpair(z) for z in self.targets],
            "tau": [cpair(z) for z in self.tau],
            "tau_targets": [cpair(z) for z in self.tau_targets],
            "m": self.m.to_dict(),
            "q": self.q.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DiamondProblem":
        if d.get("version") != "gamma-diamond/1":
            raise DegenerateDataError(f"unsupported diamond version {d.get('version')!r}")
        conv = lambda key: [from_pair(v) for v in d[key]]
        return cls(conv("nodes"), conv("targets"), conv("tau"), conv("tau_targets"),
                   BlaschkeProduct.from_dict(d["m"]), BlaschkeProduct.from_dict(d["q"]))

    def dumps(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "DiamondProblem":
        return cls.from_dict(json.loads(text))


def tau_points(m: BlaschkeProduct, q: BlaschkeProduct, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solutions of ``m q = 1``; for inner ``m q`` they lie on the circle."""
    mr, qr = m.to_rational(), q.to_rational()
    poly = mr.den * qr.den - mr.num * qr.num
    if poly.is_zero:
        raise GammaInterpError("m q is identically 1")
    if poly.degree <= 0:
        return np.zeros(0, dtype=complex)
    roots = poly_roots(poly, tol)
    if any(r.multiplicity > 1 for r in roots):
        raise GammaInterpError("non-simple τ root")
    vals = np.array([r.value for r in roots], dtype=complex)
    if np.any(np.abs(np.abs(vals) - 1) > 1e-6):
        raise GammaInterpError("m q = 1 has a solution off the circle")
    return vals / np.abs(vals)


def make_diamond(nodes, p_targets, m: BlaschkeProduct, q: BlaschkeProduct,
                 tol: Tolerances = DEFAULT_TOL) -> DiamondProblem:
    tau = tau_points(m, q, tol)
    mt = np.asarray(m(tau), dtype=complex)
    return DiamondProblem(nodes, p_targets, tau, np.conj(mt) ** 2, m, q)


def diamond_matrix(dp: DiamondProblem, rho) -> np.ndarray:
    """Pick matrix of the mixed problem; ``rho`` fills the boundary diagonal."""
    z, w = dp.all_nodes, dp.all_values
    n = dp.nodes.size
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        m = (1 - np.conj(w)[:, None] * w[None, :]) / (1 - np.conj(z)[:, None] * z[None, :])
    for k in range(dp.tau.size):
        m[n + k, n + k] = rho[k] if rho.size > 1 else rho[0]
    return m


@dataclass
class Feasibility:
    feasible: bool
    rho: np.ndarray
    rank: int
    min_eigenvalue: float
    note: str = ""
    eigenvalues: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict:
        return {"feasible": self.feasible, "rho": self.rho.tolist(), "rank": self.rank,
                "min_eigenvalue": self.min_eigenvalue, "note": self.note}


def _schur_parts(dp: DiamondProblem, tol: Tolerances):
    n = dp.nodes.size
    full = diamond_matrix(dp, np.zeros(max(dp.tau.size, 1)))
    a = full[:n, :n]
    b = full[:n, n:]
    c = full[n:, n:].copy()
    np.fill_diagonal(c, 0)
    st = psd_status(a, tol)
    if st.kind == "indefinite":
        return st, None
    inv = np.linalg.pinv(a, rcond=1e-12, hermitian=True)
    if st.kind == "singular_psd":
        resid = b - a @ (inv @ b)
        if np.max(np.abs(resid), initial=0.0) > 1e-7 * (1 + np.max(np.abs(b), initial=0.0)):
            return st, None
    k = c - b.conj().T @ inv @ b
    return st, 0.5 * (k + k.conj().T)


def _rank_one_diagonal(k: np.ndarray) -> np.ndarray | None:
    """Diagonal ``t`` with ``K - diag(K) + diag(t)`` of rank one, or None."""
    size = k.shape[0]
    t = np.zeros(size)
    scale = np.max(np.abs(k))
    for i in range(size):
        others = [j for j in range(size) if j != i]
        a, b = others[0], others[1]
        if abs(k[b, a]) <= 1e-12 * scale:
            return None
        val = k[i, a] * k[b, i] / k[b, a]
        if abs(val.imag) > 1e-6 * max(abs(val), 1e-300) or val.real <= 0:
            return None
        t[i] = val.real
    return t


def _feasible_rho(k: np.ndarray, allowed: int) -> tuple[np.ndarray | None, str]:
    size = k.shape[0]
    kd = np.real(np.diag(k))
    off = k - np.diag(np.diag(k))
    if size <= allowed:
        # any PSD completion works; diagonal dominance keeps rho positive
        rho = -kd + np.sum(np.abs(off), axis=1)
        if size == 1:
            rho = -kd
        return np.where(rho > 0, rho, np.abs(kd) + 1e-6), "boundary block unconstrained"
    if np.max(np.abs(off)) <= 1e-9 * (1 + np.max(np.abs(kd))):
        # interior data already pin the boundary columns down: a rank-zero completion
        if np.all(-kd > 0):
            return -kd, "boundary block vanishes off the diagonal"
        return None, "boundary block vanishes but rho would not be positive"
    if allowed == 1 and size == 2:
        lo = np.maximum(kd, 0.0)
        prod = abs(k[0, 1]) ** 2
        if prod == 0 or lo[0] * lo[1] >= prod:
            return None, "no rank-one completion with positive rho"
        if lo[0] > 0 and lo[1] > 0:
            t0 = np.sqrt(lo[0] * prod / lo[1])
        elif lo[0] > 0:
            t0 = max(2 * lo[0], np.sqrt(prod))
        elif lo[1] > 0:
            t0 = min(prod / (2 * lo[1]), np.sqrt(prod))
        else:
            t0 = np.sqrt(prod)
        t = np.array([t0, prod / t0])
        return t - kd, "rank-one completion, balanced point"
    if allowed == 1:
        t = _rank_one_diagonal(k)
        if t is None:
            rho, note = _numeric_rho(k, allowed)
            if rho is None:
                return None, "off-diagonal entries admit no rank-one completion"
            return rho, note
        return t - kd, "rank-one completion"
    if allowed <= 0:
        return None, "interior block already uses the full rank budget"
    return _numeric_rho(k, allowed)


def _numeric_rho(k: np.ndarray, allowed: int):
    from scipy.optimize import minimize
    size = k.shape[0]
    kd = np.real(np.diag(k))

    def objective(x):
        ev = np.linalg.eigvalsh(k + np.diag(np.exp(x)))
        return float(np.sum(np.abs(ev[: size - allowed])) + 10 * np.sum(np.maximum(-ev, 0)))

    x0 = np.log(np.maximum(np.abs(kd) + np.sum(np.abs(k), axis=1), 1e-3))
    res = minimize(objective, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15,
                                                                 "maxiter": 20000})
    rho = np.exp(res.x)
    if res.fun > 1e-8:
        return None, "numeric search found no low-rank completion"
    return rho, "numeric low-rank completion"


def diamond_feasible(dp: DiamondProblem, tol: Tolerances = DEFAULT_TOL) -> Feasibility:
    """Decide whether some positive ``rho`` makes the mixed Pick matrix PSD of rank at most 4.

    The interior block is eliminated by a Schur complement; the remaining
    boundary block must then be completed, through its free diagonal, to a
    PSD matrix whose rank fits the remaining budget.
    """
    st, k = _schur_parts(dp, tol)
    if k is None:
        return Feasibility(False, np.zeros(dp.tau.size), st.rank, st.min_eigenvalue,
                           "interior block indefinite or boundary columns outside its range")
    allowed = 4 - st.rank
    if dp.tau.size == 0:
        ok = allowed >= 0
        return Feasibility(ok, np.zeros(0), st.rank, st.min_eigenvalue, "no boundary points",
                           st.eigenvalues)
    rho, note = _feasible_rho(k, allowed)
    if rho is None or np.any(rho <= 0):
        return Feasibility(False, np.zeros(dp.tau.size) if rho is None else rho, st.rank,
                           st.min_eigenvalue, note or "rho not positive")
    full = diamond_matrix(dp, rho)
    fs = psd_status(full, tol, threshold=1e-7 * (np.trace(full).real / full.shape[0] + 1))
    ok = fs.kind != "indefinite" and fs.rank <= 4
    return Feasibility(ok, rho, fs.rank, fs.min_eigenvalue, note, fs.eigenvalues)


def _unpack(x: np.ndarray, degree: int) -> BlaschkeProduct:
    w = x[1::2][:degree] + 1j * x[2::2][:degree]
    alphas = w / np.sqrt(1 + np.abs(w) ** 2)
    alphas = np.where(np.abs(alphas) > 1 - 1e-12, alphas / np.abs(alphas) * (1 - 1e-12), alphas)
    return BlaschkeProduct(np.exp(1j * x[0]), tuple(alphas))


def _pack(p: BlaschkeProduct) -> np.ndarray:
    a = np.asarray(p.zeros, dtype=complex)
    w = a / np.sqrt(np.maximum(1 - np.abs(a) ** 2, 1e-24))
    x = np.empty(1 + 2 * a.size)
    x[0] = np.angle(p.constant)
    x[1::2], x[2::2] = w.real, w.imag
    return x


def _linear_seeds(dp: DiamondProblem, degree: int, rng, count: int) -> list[BlaschkeProduct]:
    # p = N / N# is linear in the coefficients of N once the targets are fixed
    z, w = dp.all_nodes, dp.all_values
    nvar = 2 * (degree + 1)

    def apply(x):
        a = x[: degree + 1] + 1j * x[degree + 1:]
        nz = ComplexPoly(a, trim=False)
        ns = ComplexPoly(np.conj(a[::-1]), trim=False)
        r = nz(z) - w * ns(z)
        return np.concatenate([r.real, r.imag])

    mat = np.column_stack([apply(e) for e in np.eye(nvar)])
    _, sv, vt = np.linalg.svd(mat)
    sv = np.concatenate([sv, np.zeros(nvar - sv.size)])
    null = vt[sv <= 1e-8 * max(sv[0], 1e-300)]
    if null.shape[0] == 0:
        null = vt[-1:]
    seeds = []
    for i in range(count):
        coef = null[0] if i == 0 else rng.standard_normal(null.shape[0]) @ null
        a = coef[: degree + 1] + 1j * coef[degree + 1:]
        if abs(a[-1]) < 1e-12 * np.max(np.abs(a)):
            continue
        roots = np.polynomial.polynomial.polyroots(a)
        roots = np.where(np.abs(roots) >= 0.999, roots / np.abs(roots) * 0.95, roots)
        base = BlaschkeProduct(1.0, tuple(roots))
        probe = z[0]
        c = complex(w[0] / base(probe)) if abs(base(probe)) > 1e-8 else 1.0
        seeds.append(BlaschkeProduct(c / abs(c) if c != 0 else 1.0, tuple(roots)))
    return seeds


def _residuals(dp: DiamondProblem, degree: int, rho: np.ndarray | None, use_rho: bool):
    def fun(x):
        p = _unpack(x, degree)
        ri = p(dp.nodes) - dp.targets
        rb = p(dp.tau) - dp.tau_targets if dp.tau.size else np.zeros(0, complex)
        parts = [ri.real, ri.imag, rb.real, rb.imag]
        if use_rho and rho is not None and dp.tau.size:
            parts.append(1e-2 * (np.real(p.phasar(dp.tau)) - rho))
        return np.concatenate(parts)

    return fun


def _errors(p: BlaschkeProduct, dp: DiamondProblem) -> tuple[float, float]:
    ei = float(np.max(np.abs(p(dp.nodes) - dp.targets)))
    eb = float(np.max(np.abs(p(dp.tau) - dp.tau_targets))) if dp.tau.size else 0.0
    return ei, eb


def diamond_solve(dp: DiamondProblem, feas: Feasibility | None = None, seed: int = 0,
                  tol: Tolerances = DEFAULT_TOL, grids: Grids = DEFAULT_GRIDS) -> BlaschkeProduct:
    """A Blaschke product of degree at most 4 solving the mixed problem.

    Least-squares refinement from seeds given by the linearised problem
    ``N(z) = w N#(z)`` and from random starts; degrees from the Pick rank up
    to 4 are tried in turn.
    """
    feas = diamond_feasible(dp, tol) if feas is None else feas
    if not feas.feasible:
        raise ConstructionError("solution construction failed: problem infeasible")
    rng = np.random.default_rng(seed)
    first = max(1, min(feas.rank, 4))
    best_err = np.inf
    for degree in range(first, 5):
        nres = 2 * dp.nodes.size + dp.tau.size
        use_rho = nres < 2 * degree + 1
        fun = _residuals(dp, degree, feas.rho, use_rho)
        seeds = _linear_seeds(dp, degree, rng, 8)
        informed = len(seeds)
        if degree == dp.nodes.size:
            try:
                f = np_solve(NPData(dp.nodes, dp.targets, tol), 1.0, tol)
                seeds.insert(0, BlaschkeProduct.from_rational(f, tol))
                informed += 1
            except GammaInterpError:
                pass
        for _ in range(grids.diamond_starts):
            r = 0.9 * np.sqrt(rng.uniform(size=degree))
            seeds.append(BlaschkeProduct(np.exp(2j * np.pi * rng.uniform()),
                                         tuple(r * np.exp(2j * np.pi * rng.uniform(size=degree)))))
        for i, s0 in enumerate(seeds):
            if s0.degree != degree:
                continue
            x0 = _pack(s0)
            nres_total = fun(x0).size
            method = "lm" if nres_total >= x0.size else "trf"
            try:
                res = least_squares(fun, x0, method=method, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                    max_nfev=4000 if i < informed else 400)
            except ValueError:
                continue
            p = _unpack(res.x, degree)
            ei, eb = _errors(p, dp)
            err = max(ei / tol.diamond_interior, eb / tol.diamond_boundary)
            best_err = min(best_err, err)
            if err <= 1:
                return p
    raise ConstructionError(f"solution construction failed (best scaled residual {best_err:.3g})")
