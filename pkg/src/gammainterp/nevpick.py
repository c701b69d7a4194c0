"""Classical Nevanlinna-Pick interpolation on the disc.

Pick matrices, their definiteness, Schur reduction and the construction of
the unique Blaschke interpolant for extremal data.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DegenerateDataError, GammaInterpError, NotExtremalError, UnsolvableError
from .rational import BlaschkeProduct, ComplexPoly, RationalFn, blaschke_factor


@dataclass(frozen=True)
class NPData:
    """Interpolation data ``nodes[j] -> values[j]`` with nodes in the open disc."""

    nodes: np.ndarray
    values: np.ndarray

    def __init__(self, nodes, values, tol: Tolerances = DEFAULT_TOL):
        lam = np.atleast_1d(np.asarray(nodes, dtype=complex))
        w = np.atleast_1d(np.asarray(values, dtype=complex))
        if lam.shape != w.shape or lam.ndim != 1 or lam.size == 0:
            raise DegenerateDataError("nodes and values must be equal-length, non-empty")
        if np.any(np.abs(lam) >= 1):
            raise DegenerateDataError("nodes must lie in the open disc")
        diff = np.abs(lam[:, None] - lam[None, :]) + np.eye(lam.size)
        if np.any(diff <= tol.node_separation):
            raise DegenerateDataError("nodes must be distinct")
        object.__setattr__(self, "nodes", lam)
        object.__setattr__(self, "values", w)

    def __len__(self) -> int:
        return self.nodes.size


@dataclass(frozen=True)
class PSDStatus:
    kind: str  # positive_definite | singular_psd | indefinite
    rank: int
    eigenvalues: np.ndarray

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])


def pick_matrix(data: NPData) -> np.ndarray:
    lam, w = data.nodes, data.values
    return (1 - w[:, None] * np.conj(w[None, :])) / (1 - lam[:, None] * np.conj(lam[None, :]))


def eig_threshold(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    n = m.shape[0]
    return tol.eig * (abs(np.trace(m).real) / n + 1)


def psd_status(m: np.ndarray, tol: Tolerances = DEFAULT_TOL, threshold: float | None = None) -> PSDStatus:
    """Classify a Hermitian matrix using the scaled eigenvalue threshold."""
    m = np.asarray(m, dtype=complex)
    m = 0.5 * (m + m.conj().T)
    eig = np.linalg.eigvalsh(m)
    eps = eig_threshold(m, tol) if threshold is None else threshold
    if eig[0] < -eps:
        return PSDStatus("indefinite", int(np.sum(eig > eps)), eig)
    rank = int(np.sum(eig > eps))
    kind = "positive_definite" if rank == m.shape[0] else "singular_psd"
    return PSDStatus(kind, rank, eig)


def schur_reduce(data: NPData, index: int = 0, tol: Tolerances = DEFAULT_TOL) -> NPData:
    """Remove node ``index`` by one Schur step.

    The reduced values are ``B_{w1}(w_i) / B_{lam1}(lam_i)``.
    """
    lam1, w1 = data.nodes[index], data.values[index]
    if abs(w1) >= 1 - tol.boundary_value:
        raise GammaInterpError("boundary value: reduction undefined")
    rest = np.arange(len(data)) != index
    lam, w = data.nodes[rest], data.values[rest]
    return NPData(lam, blaschke_factor(w1, w) / blaschke_factor(lam1, lam), tol)


def _lift(f_num: ComplexPoly, f_den: ComplexPoly, lam1: complex, w1: complex):
    # f = B_{-w1}(B_{lam1} g) with g = f_num / f_den
    zl = ComplexPoly([-lam1, 1.0])
    dl = ComplexPoly([1.0, -np.conj(lam1)])
    num = zl * f_num + w1 * (dl * f_den)
    den = dl * f_den + np.conj(w1) * (zl * f_num)
    return num, den


def _back_substitute(steps, terminal: complex) -> RationalFn:
    num, den = ComplexPoly([terminal]), ComplexPoly([1.0])
    for lam1, w1 in reversed(steps):
        num, den = _lift(num, den, lam1, w1)
    return RationalFn(num, den)


def _pick_index(values: np.ndarray) -> int:
    # reduce at the most interior value for conditioning
    return int(np.argmin(np.abs(values)))


def np_solvable(data: NPData, tol: Tolerances = DEFAULT_TOL) -> str:
    status = psd_status(pick_matrix(data), tol)
    return {"positive_definite": "solvable", "singular_psd": "extremally_solvable",
            "indefinite": "unsolvable"}[status.kind]


def np_solve_extremal(data: NPData, tol: Tolerances = DEFAULT_TOL,
                      rank: int | None = None) -> BlaschkeProduct:
    """Unique Blaschke interpolant of extremal data; its degree equals the Pick rank.

    ``rank`` may be supplied when the caller has already decided the Pick
    rank with a looser threshold (near-extremal data from a numerical search).
    """
    status = psd_status(pick_matrix(data), tol)
    if rank is None:
        if status.kind == "indefinite":
            raise UnsolvableError("unsolvable")
        if status.kind == "positive_definite":
            raise NotExtremalError("not extremal: solution not unique")
        rank = status.rank
    steps = []
    cur = data
    for _ in range(rank):
        i = _pick_index(cur.values)
        if abs(cur.values[i]) >= 1 - tol.boundary_value:
            break
        steps.append((cur.nodes[i], cur.values[i]))
        cur = schur_reduce(cur, i, tol)
    w = cur.values
    if np.any(np.abs(np.abs(w) - 1) > 1e-4):
        raise UnsolvableError("unsolvable: reduced data are not unimodular")
    phase = np.mean(w / np.abs(w))
    f = _back_substitute(steps, phase / abs(phase))
    return BlaschkeProduct.from_rational(f, tol)


def np_solve(data: NPData, terminal: complex = 0.0, tol: Tolerances = DEFAULT_TOL) -> RationalFn:
    """A solution of solvable data.

    Extremal data give the unique Blaschke interpolant. Otherwise the data
    are reduced to nothing and ``terminal`` (``|terminal| <= 1``) is used as
    the free Schur parameter; a unimodular choice gives a Blaschke product of
    degree ``len(data)``.
    """
    status = psd_status(pick_matrix(data), tol)
    if status.kind == "indefinite":
        raise UnsolvableError("unsolvable")
    if status.kind == "singular_psd":
        return np_solve_extremal(data, tol).to_rational()
    steps = []
    cur = data
    while True:
        i = _pick_index(cur.values)
        steps.append((cur.nodes[i], cur.values[i]))
        if len(cur) == 1:
            break
        cur = schur_reduce(cur, i, tol)
    return _back_substitute(steps, terminal)


def interpolation_residual(f, data: NPData) -> float:
    return float(np.max(np.abs(f(data.nodes) - data.values)))
