"""End-to-end three-point interpolation into the symmetrised bidisc.

The solver checks the degree-one Pick condition, extracts an auxiliary
extremal ``m`` and the inner function ``q = phi(m, h)``, solves the mixed
problem for ``p`` and builds ``s = 2 (m p - q) / (1 - m q)``. Everything it
returns is verified independently before being reported as solved.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .config import DEFAULT_GRIDS, DEFAULT_TOL, Tolerances
from .cpick import PencilReport, c_pencil_matrix, check_c_nu, compute_q, gamma_pick_matrix
from .diamond import Feasibility, diamond_feasible, diamond_solve, make_diamond, tau_points
from .errors import (CancellationError, DegenerateDataError, GammaInterpError,
                     SuperficialMapError, UnsolvableError)
from .gamma import (GammaMap, InnerReport, boundary_interp_solve, circle_royal_nodes,
                    gamma_inner_check, in_closed_gamma, in_open_gamma, is_royal_map, royal_nodes)
from .nevpick import NPData, eig_threshold, np_solve, np_solve_extremal, psd_status
from .problem import InterpProblem
from .rational import (BlaschkeProduct, ComplexPoly, RationalFn, _is_multiple_root, as_rational,
                       mobius_from_cross_ratio)


def _orientation(x: complex, y: complex, z: complex) -> int:
    # +1 when x -> y -> z runs counterclockwise
    return int(np.sign(-((y - x) * np.conj(z - x)).imag))


def _has_repeat(pts, eps: float = 1e-9) -> bool:
    return any(abs(a - b) <= eps for a, b in itertools.combinations(pts, 2))


def cyclic_order_same(a, b) -> bool:
    """Whether two triples on the circle are in the same cyclic order.

    A repeated point in ``b`` means the order cannot be the same.
    """
    a, b = [complex(x) for x in a], [complex(x) for x in b]
    if len(a) != 3 or len(b) != 3:
        raise DegenerateDataError("cyclic order needs two triples")
    if _has_repeat(a):
        raise DegenerateDataError("first triple must be distinct")
    if _has_repeat(b):
        return False
    return _orientation(*a) == _orientation(*b)


@dataclass
class Classification:
    kind: str  # aligned | caddywhompus | neither | royal_map
    degree: int
    nodes: np.ndarray
    targets: np.ndarray
    witness: tuple | None = None
    m: BlaschkeProduct | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "nodes": [[z.real, z.imag] for z in self.nodes],
            "targets": [[z.real, z.imag] for z in self.targets],
            "witness": None if self.witness is None else list(self.witness),
            "m": None if self.m is None else self.m.to_dict(),
        }


def _distinct_points(pts: np.ndarray, eps: float = 1e-7) -> np.ndarray:
    out: list[complex] = []
    for z in pts:
        if all(abs(z - w) > eps for w in out):
            out.append(complex(z))
    return np.asarray(out, dtype=complex)


def classify(h: GammaMap, tol: Tolerances = DEFAULT_TOL) -> Classification:
    """Aligned, caddywhompus or neither, from the royal nodes on the circle.

    The targets are ``conj(s(w))/2`` at the circle royal nodes ``w``. An
    aligned map of degree 4 has some triple of nodes whose targets keep the
    cyclic order; a caddywhompus map has at least three nodes and no such
    triple.
    """
    if not gamma_inner_check(h, tol=tol).is_inner:
        raise GammaInterpError("map is not inner")
    s0, p0 = h(0.0)
    if not in_open_gamma(s0, p0, tol=tol):
        raise SuperficialMapError("superficial map")
    d = h.degree
    if is_royal_map(h):
        return Classification("royal_map", d, np.zeros(0, complex), np.zeros(0, complex))
    nodes = _distinct_points(circle_royal_nodes(h, tol))
    targets = 0.5 * np.conj(h.s(nodes)) if nodes.size else np.zeros(0, complex)
    same = None
    for tri in itertools.combinations(range(nodes.size), 3):
        idx = list(tri)
        if cyclic_order_same(nodes[idx], targets[idx]):
            same = tri
            break
    kind = "neither"
    m = None
    if d <= 4 and nodes.size >= d - 1 and (d < 4 or same is not None):
        kind = "aligned"
        if same is not None:
            mob = mobius_from_cross_ratio(nodes[list(same)], targets[list(same)])
            if mob.is_disc_automorphism:
                m = mob.to_blaschke()
    elif d == 4 and nodes.size >= 3 and same is None:
        kind = "caddywhompus"
    return Classification(kind, d, nodes, targets, same, m)



def _s_parts(m, q, p):
    mr, qr, pr = as_rational(m), as_rational(q), as_rational(p)
    num = 2 * (mr.num * pr.num * qr.den - qr.num * mr.den * pr.den)
    tail = mr.den * qr.den - mr.num * qr.num
    return num, tail, pr.den


def construct_s(m, q, p, tol: Tolerances = DEFAULT_TOL) -> RationalFn:
    """``s = 2 (m p - q) / (1 - m q)`` with the factors at ``m q = 1`` cancelled.

    The cancellation is exact only when ``p(tau) = conj(m(tau))**2`` at each
    such point; a remainder above ``tol.cancellation`` raises.
    """
    num, tail, dp_ = _s_parts(m, q, p)
    taus = tau_points(as_blaschke(m), as_blaschke(q), tol)
    scale = float(np.sum(np.abs(num.coeffs)))
    for t in taus:
        num, rem = num.deflate(t)
        if abs(rem) > tol.cancellation * scale:
            raise CancellationError(f"cancellation failed at tau={t:.6g} (remainder {abs(rem):.3g})")
        tail, _ = tail.deflate(t)
    return RationalFn(num, dp_ * tail)


def as_blaschke(f) -> BlaschkeProduct:
    if isinstance(f, BlaschkeProduct):
        return f
    return BlaschkeProduct.from_rational(as_rational(f))


@dataclass
class VerifyReport:
    passed: bool
    poles_ok: bool
    max_abs_s: float
    interpolation_residual: float
    inner: InnerReport | None
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "poles_ok": self.poles_ok, "max_abs_s": self.max_abs_s,
                "interpolation_residual": self.interpolation_residual,
                "inner": None if self.inner is None else vars(self.inner),
                "failures": list(self.failures)}


def max_abs_on_circle(f: RationalFn, samples: int = DEFAULT_GRIDS.boundary_samples) -> float:
    theta = 2 * np.pi * np.arange(samples) / samples
    vals = np.abs(f(np.exp(1j * theta)))
    k = int(np.argmax(vals))
    h = 2 * np.pi / samples
    res = minimize_scalar(lambda t: -abs(f(np.exp(1j * t))), bounds=(theta[k] - h, theta[k] + h),
                          method="bounded", options={"xatol": 1e-12})
    return float(max(vals[k], -res.fun))


def verify_interpolant(h: GammaMap, prob: InterpProblem) -> VerifyReport:
    """Independent checks: analyticity, ``|s| <= 2`` on the circle, interpolation, innerness."""
    tol = prob.tol
    failures = []
    poles_ok = True
    for f in (h.s, h.p):
        red = f.reduced()
        if red.den.degree > 0 and any(abs(r.value) < 1 + tol.pole_margin for r in red.poles(tol)):
            poles_ok = False
    if not poles_ok:
        failures.append("poles")
    smax = max_abs_on_circle(h.s, prob.grids.boundary_samples) if poles_ok else np.inf
    if smax > 2 + tol.s_bound:
        failures.append("s_bound")
    s, p = h(prob.nodes)
    resid = float(max(np.max(np.abs(s - prob.s)), np.max(np.abs(p - prob.p))))
    if resid > tol.interpolation:
        failures.append("interpolation")
    inner = None
    if poles_ok:
        inner = gamma_inner_check(h, tol=tol)
        if not inner.is_inner:
            failures.append("inner")
    else:
        failures.append("inner")
    return VerifyReport(not failures, poles_ok, smax, resid, inner, failures)


def _order_at(poly: ComplexPoly, z: complex, eps: float = 1e-7) -> int:
    if poly.is_zero:
        return 10 ** 6
    k = 0
    while k <= poly.degree and _is_multiple_root(poly.coeffs, z, k + 1, eps):
        k += 1
    return k


@dataclass
class CancellationPoint:
    point: complex
    case: str
    predicted: int
    observed: int

    def to_dict(self) -> dict:
        return {"point": [self.point.real, self.point.imag], "case": self.case,
                "predicted": self.predicted, "observed": self.observed}


@dataclass
class CancellationReport:
    points: list
    unreduced_degree: int
    total_cancellations: int
    degree: int
    reduced_degree: int
    formula_degree: int

    def to_dict(self) -> dict:
        return {"points": [pt.to_dict() for pt in self.points],
                "unreduced_degree": self.unreduced_degree,
                "total_cancellations": self.total_cancellations, "degree": self.degree,
                "reduced_degree": self.reduced_degree, "formula_degree": self.formula_degree}


def cancellation_analysis(m, q, p, upsilon, tol: Tolerances = DEFAULT_TOL) -> CancellationReport:
    """Where ``(2 u p - s) / (2 - u s)`` loses degree through common zeros.

    Candidate points are the zeros of ``m**2 p - 1`` and ``p - q**2``. Each is
    labelled by which of ``m**2 p = 1``, ``p = q**2`` and ``m q = 1`` hold
    there, the expected number of cancellations is derived from the values
    and derivatives of ``u``, ``m``, ``p`` and ``q``, and the observed number
    is the common order of vanishing of numerator and denominator.
    """
    mr, qr, pr, ur = (as_rational(f) for f in (m, q, p, upsilon))
    s = construct_s(m, q, p, tol)
    snum, sden = s.num, s.den
    # s = snum / (Dp * c) after the tau cancellations; divide the common Dp out of phi
    c = sden.leading / pr.den.leading
    num = 2 * (ur.num * pr.num) * c - snum * ur.den
    den = 2 * (ur.den * pr.den) * c - ur.num * snum
    unreduced = max(num.degree, den.degree)

    sigma_poly = mr.num * mr.num * pr.num - mr.den * mr.den * pr.den
    beta_poly = pr.num * qr.den * qr.den - qr.num * qr.num * pr.den
    cands: list[complex] = []
    for poly in (sigma_poly, beta_poly):
        if poly.degree > 0:
            for r in poly.roots(tol):
                if all(abs(r.value - z) > 1e-6 for z in cands):
                    cands.append(r.value)

    def close(a, b):
        return abs(a - b) <= 1e-6 * (1 + abs(b))

    d = lambda f, z: complex(f.derivative()(z))
    points = []
    for z in cands:
        mz, pz, qz, uz = (complex(f(z)) for f in (mr, pr, qr, ur))
        on_sigma = close(mz * mz * pz, 1)
        on_beta = close(pz, qz * qz)
        on_tau = close(mz * qz, 1)
        if on_tau:
            case = "tau"
            predicted = int(_order_at(beta_poly, z) >= 2 and close(uz, -mz))
        elif on_sigma and on_beta:
            case = "beta-sigma"
            predicted = 0
            if close(uz, mz):
                predicted = 1
                if close(d(ur, z), -0.5 * mz ** 3 * d(pr, z)):
                    predicted = 2
        elif on_sigma:
            case = "sigma"
            predicted = 0
            if close(uz, mz):
                diff = ur - mr
                predicted = min(_order_at(sigma_poly, z), _order_at(diff.num, z))
        elif on_beta and abs(qz) > 1e-9:
            case = "beta"
            predicted = 0
            if close(uz, -1 / qz):
                predicted = 1
                if close(d(ur, z), d(qr, z) / qz ** 2):
                    predicted = 2
        else:
            continue
        observed = min(_order_at(num, z), _order_at(den, z))
        points.append(CancellationPoint(complex(z), case, predicted, observed))
    total = sum(pt.observed for pt in points)
    reduced = RationalFn(num, den).reduced(match=tol.cancel_match).degree
    formula = 1 + ur.degree + pr.degree - total
    return CancellationReport(points, unreduced, total, unreduced - total, reduced, formula)


@dataclass
class SolveReport:
    status: str  # solved | unsolvable_c1 | diamond_infeasible | verification_failed | inconclusive
    h: GammaMap | None = None
    m: BlaschkeProduct | None = None
    q: BlaschkeProduct | None = None
    p: BlaschkeProduct | None = None
    classification: str | None = None
    pencil: PencilReport | None = None
    diamond: Feasibility | None = None
    verification: VerifyReport | None = None
    royal_nodes: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "h": None if self.h is None else self.h.to_dict(),
            "m": None if self.m is None else self.m.to_dict(),
            "q": None if self.q is None else self.q.to_dict(),
            "p": None if self.p is None else self.p.to_dict(),
            "classification": self.classification,
            "pencil": None if self.pencil is None else self.pencil.to_dict(),
            "diamond": None if self.diamond is None else self.diamond.to_dict(),
            "verification": None if self.verification is None else self.verification.to_dict(),
            "royal_nodes": [n.to_dict() for n in self.royal_nodes],
            "notes": list(self.notes),
        }


def _is_royal_data(prob: InterpProblem) -> bool:
    return bool(np.all(np.abs(prob.s ** 2 - 4 * prob.p) <= 1e-10 * (1 + np.abs(prob.s) ** 2)))


def _finish(report: SolveReport, h: GammaMap, prob: InterpProblem, label: str | None = None) -> SolveReport:
    report.h = h
    if report.verification is None:
        report.verification = verify_interpolant(h, prob)
    if not report.verification.passed:
        report.status = "verification_failed"
        report.notes.append("failed checks: " + ", ".join(report.verification.failures))
        return report
    report.status = "solved"
    if not is_royal_map(h):
        report.royal_nodes = royal_nodes(h, prob.tol)
    if label is not None:
        report.classification = label
        return report
    try:
        kind = classify(h, prob.tol).kind
    except GammaInterpError as exc:
        kind = "superficial" if isinstance(exc, SuperficialMapError) else "unclassified"
    if kind != "aligned" and h.degree <= 3:
        # too few distinct circle royal nodes for the aligned definition to apply
        kind = "degenerate_low_degree"
    elif kind != "aligned":
        report.notes.append(f"verified solution classifies as {kind}")
    report.classification = kind
    return report


def _fixed_pencil(prob: InterpProblem) -> PencilReport:
    m = prob.fixed_m
    mat = c_pencil_matrix(prob, m)
    lmin = float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0])
    q = prob.fixed_q if prob.fixed_q is not None else compute_q(prob, m)
    alpha = m.zeros[0] if m.degree else None
    return PencilReport("holds_extremally_active" if m.degree == 1 else "holds_extremally", lmin,
                        {"degree": m.degree, "c": m.constant, "alpha": alpha},
                        eig_threshold(mat, prob.tol), float("nan"), None, m, q,
                        ["auxiliary extremal supplied by the problem file"])


def solve_3pt(prob: InterpProblem, seed: int = 0) -> SolveReport:
    """Solve, refute or give up on a three-point problem, in that order of preference."""
    tol = prob.tol
    if len(prob) != 3:
        raise DegenerateDataError("three interpolation nodes are required")
    closed = [in_closed_gamma(s, p, tol=tol) for s, p in zip(prob.s, prob.p)]
    if not all(closed):
        raise DegenerateDataError("targets must lie in the closed symmetrised bidisc")
    inside = [in_open_gamma(s, p, tol=tol) for s, p in zip(prob.s, prob.p)]
    if not any(inside):
        try:
            sol = boundary_interp_solve(prob)
        except UnsolvableError as exc:
            return SolveReport("unsolvable_c1", notes=[f"boundary targets: {exc}"])
        return _finish(SolveReport("solved", notes=["all targets on the boundary"]), sol.h, prob,
                       "boundary")
    if not all(inside):
        raise DegenerateDataError("targets not co-located: some in the open domain, some on its boundary")

    if _is_royal_data(prob):
        data = NPData(prob.nodes, prob.s / 2, tol)
        report = SolveReport("inconclusive", notes=["royal data: solved through (2f, f^2)"])
        try:
            f = np_solve(data, 1.0, tol)
        except UnsolvableError:
            report.status = "unsolvable_c1"
            report.notes.append("classical data for s/2 unsolvable, so the constant-upsilon condition fails")
            return report
        return _finish(report, GammaMap(f * 2, f * f), prob, "royal_variety_case")

    pencil = _fixed_pencil(prob) if prob.fixed_m is not None else check_c_nu(prob, 1)
    report = SolveReport("inconclusive", pencil=pencil)
    if pencil.status == "fails":
        report.status = "unsolvable_c1"
        return report
    if not pencil.extremal or pencil.auxiliary_extremal is None or pencil.q is None:
        report.notes.append("degree-one condition holds but not extremally; no auxiliary extremal to build from")
        return report
    interior = psd_status(gamma_pick_matrix(prob), tol)
    if interior.kind == "indefinite":
        report.status = "unsolvable_c1"
        report.notes.append("classical data for p unsolvable")
        return report
    if interior.kind == "singular_psd":
        report.notes.append("classical data for p extremal: p is their unique Blaschke interpolant")

    candidates = [(pencil.auxiliary_extremal, pencil.q)] + [(alt, None) for alt in pencil.alternatives]
    first = None
    for k, (m, q) in enumerate(candidates):
        if k:
            report.notes.append(f"retrying with alternative auxiliary extremal {k} (degree {m.degree})")
        try:
            q = compute_q(prob, m) if q is None else q
        except GammaInterpError as exc:
            report.notes.append(str(exc))
            continue
        attempt = _attempt(prob, m, q, interior.kind, seed)
        if m.degree == 0:
            attempt.notes.insert(0, "auxiliary extremal has degree 0 (condition not active)")
        report.notes.extend(attempt.notes)
        if attempt.status == "solved":
            attempt.pencil, attempt.notes = pencil, report.notes
            return _finish(attempt, attempt.h, prob)
        first = first or attempt
    if first is not None:
        first.pencil, first.notes = pencil, report.notes
        return first
    return report


def _attempt(prob: InterpProblem, m: BlaschkeProduct, q: BlaschkeProduct, interior: str,
             seed: int) -> SolveReport:
    """Build ``p`` and ``s`` from one auxiliary extremal; ``solved`` here means verified."""
    tol = prob.tol
    out = SolveReport("inconclusive", m=m, q=q)
    try:
        if interior == "singular_psd":
            p = np_solve_extremal(NPData(prob.nodes, prob.p, tol), tol)
        else:
            dp = make_diamond(prob.nodes, prob.p, m, q, tol)
            out.diamond = diamond_feasible(dp, tol)
            if not out.diamond.feasible:
                out.status = "diamond_infeasible"
                out.notes.append(out.diamond.note)
                return out
            p = diamond_solve(dp, out.diamond, seed=seed, tol=tol, grids=prob.grids)
        out.p = p
        s = construct_s(m, q, p, tol)
    except GammaInterpError as exc:
        out.notes.append(str(exc))
        return out
    out.h = GammaMap(s, p.to_rational())
    out.verification = verify_interpolant(out.h, prob)
    if out.verification.passed:
        out.status = "solved"
    else:
        out.status = "verification_failed"
        out.notes.append("failed checks: " + ", ".join(out.verification.failures))
    return out
