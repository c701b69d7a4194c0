import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gammainterp.config import DEFAULT_TOL
from gammainterp.corpus import ex52_2
from gammainterp.errors import DegenerateDataError, GammaInterpError, NotExtremalError, UnsolvableError
from gammainterp.gamma import phi
from gammainterp.nevpick import (NPData, interpolation_residual, np_solvable, np_solve, np_solve_extremal,
                                 pick_matrix, psd_status, schur_reduce)

from oracles import random_np_instance, schur_oracle


def test_pick_single_point():
    assert np.allclose(pick_matrix(NPData([0], [0])), [[1]])


def test_pick_identity_data_is_singular():
    m = pick_matrix(NPData([0, 0.5], [0, 0.5]))
    assert np.allclose(m, [[1, 1], [1, 1]])
    assert psd_status(m).kind == "singular_psd"


def test_pick_definite_case():
    m = pick_matrix(NPData([0, 0.5], [0, 0.25]))
    assert np.allclose(m, [[1, 1], [1, 1.25]])
    assert abs(np.linalg.det(m) - 0.25) < 1e-12
    assert psd_status(m).kind == "positive_definite"


@pytest.mark.parametrize("mat,kind,rank", [
    (np.eye(3), "positive_definite", 3),
    (np.array([[1.0, 1], [1, 1]]), "singular_psd", 1),
    (np.array([[1.0, 2], [2, 1]]), "indefinite", None),
])
def test_psd_status(mat, kind, rank):
    st_ = psd_status(mat)
    assert st_.kind == kind
    if rank is not None:
        assert st_.rank == rank


def test_indefinite_eigenvalues():
    st_ = psd_status(np.array([[1.0, 2], [2, 1]]))
    assert np.allclose(st_.eigenvalues, [-1, 3])


def test_schur_reduce_to_boundary_value():
    red = schur_reduce(NPData([0, 0.5], [0, 0.5]))
    assert np.allclose(red.nodes, [0.5]) and np.allclose(red.values, [1])


def test_schur_reduce_by_hand():
    red = schur_reduce(NPData([0, 0.5], [0, 0.25]))
    assert np.allclose(red.values, [0.5])


def test_schur_reduce_square_data_stays_consistent():
    lam = np.array([0, 0.5, -0.5])
    red = schur_reduce(NPData(lam, lam ** 2))
    # lambda^2 reduces to lambda, which reduces to the constant 1
    assert np.allclose(red.values, red.nodes)
    assert np.allclose(schur_reduce(red).values, [1])


def test_schur_reduce_rejects_boundary_pivot():
    with pytest.raises(GammaInterpError):
        schur_reduce(NPData([0, 0.5], [1, 1]))


def test_extremal_identity():
    b = np_solve_extremal(NPData([0, 0.5], [0, 0.5]))
    assert b.degree == 1
    assert abs(b(0.3) - 0.3) < 1e-12


def test_extremal_square():
    b = np_solve_extremal(NPData([0, 0.5, -0.5], [0, 0.25, 0.25]))
    assert b.degree == 2
    z = np.array([0.1, 0.2j, -0.7])
    assert np.max(np.abs(b(z) - z ** 2)) < 1e-10


def test_extremal_phi_data_of_aligned_example():
    h = ex52_2(0.5)
    lam = np.array([0.3, -0.2, 0.4j])
    s, p = h(lam)
    q = np_solve_extremal(NPData(lam, phi(-lam, s, p)))
    z = 0.8 * np.exp(1j * np.linspace(0, 6, 50))
    assert np.max(np.abs(q(z) + z ** 2)) < 1e-8


def test_extremal_rejects_definite_and_indefinite():
    with pytest.raises(NotExtremalError):
        np_solve_extremal(NPData([0, 0.5], [0, 0.25]))
    with pytest.raises(UnsolvableError):
        np_solve_extremal(NPData([0, 0.1], [0, 0.9]))


def test_np_solve_free_parameter():
    lam = np.array([0, 0.5, 0.3j])
    data = NPData(lam, 0.1 + 0.5 * lam)
    for terminal in (0.0, 1.0, 0.5j):
        f = np_solve(data, terminal)
        assert interpolation_residual(f, data) < 1e-10
    # a unimodular parameter gives an inner solution of full degree
    f = np_solve(data, 1.0)
    circle = np.exp(1j * np.linspace(0, 6, 40))
    assert np.max(np.abs(np.abs(f(circle)) - 1)) < 1e-9


def test_npdata_validation():
    with pytest.raises(DegenerateDataError):
        NPData([0, 0], [0, 0])
    with pytest.raises(DegenerateDataError):
        NPData([1.0], [0])
    with pytest.raises(DegenerateDataError):
        NPData([0, 0.1], [0])


def test_agrees_with_nested_reduction_oracle():
    rng = np.random.default_rng(11)
    for _ in range(60):
        nodes, values = random_np_instance(rng)
        assert np_solvable(NPData(nodes, values)) == schur_oracle(nodes, values)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_reduction_preserves_status(seed):
    rng = np.random.default_rng(seed)
    nodes, values = random_np_instance(rng)
    data = NPData(nodes, values)
    before = np_solvable(data)
    if np.max(np.abs(values)) >= 1 - DEFAULT_TOL.boundary_value:
        return
    i = int(np.argmin(np.abs(values)))
    after = np_solvable(schur_reduce(data, i))
    assert before == after


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_extremal_solution_is_blaschke_of_pick_rank(seed):
    rng = np.random.default_rng(seed)
    nodes, values = random_np_instance(rng)
    data = NPData(nodes, values)
    status = psd_status(pick_matrix(data))
    if status.kind != "singular_psd":
        return
    b = np_solve_extremal(data)
    assert b.degree == status.rank
    assert all(abs(a) < 1 for a in b.zeros)
    assert interpolation_residual(b, data) <= 1e-8
