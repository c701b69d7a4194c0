import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gammainterp import corpus
from gammainterp.errors import (DegenerateDataError, GammaInterpError, NotAnalyticError,
                                RoyalMapError, UnsolvableError)
from gammainterp.gamma import (GammaMap, boundary_interp_solve, circle_royal_nodes, d_omega_membership,
                               gamma_inner_check, in_closed_gamma, in_distinguished_boundary, in_open_gamma,
                               in_topological_boundary, is_royal_map, phi, royal_nodes,
                               scaling_identity_check)
from gammainterp.problem import InterpProblem
from gammainterp.rational import BlaschkeProduct, ComplexPoly, RationalFn

from oracles import gamma_region, random_blaschke

disc = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 0.97), st.floats(0, 2 * np.pi))
circle = st.builds(lambda t: cmath.exp(1j * t), st.floats(0, 2 * np.pi))
LAM = RationalFn(ComplexPoly([0, 1]))


class TestPhi:
    def test_at_zero(self):
        assert abs(phi(0, 1, 0.2) + 0.5) < 1e-15

    def test_royal_point(self):
        for z in (0.1, -0.5j, 0.9):
            assert abs(phi(z, 0.8, 0.16) + 0.4) < 1e-14

    def test_aligned_example(self):
        lam = 0.3
        s, p = corpus.ex52_2(0.5)(lam)
        assert abs(phi(-lam, s, p) + 0.09) < 1e-14

    def test_singular(self):
        with pytest.raises(GammaInterpError):
            phi(0.5, 4, 1)


class TestMembership:
    def test_origin(self):
        assert in_open_gamma(0, 0)

    def test_corner(self):
        assert in_closed_gamma(2, 1) and not in_open_gamma(2, 1)
        assert in_distinguished_boundary(2, 1)

    def test_surprise_value(self):
        s, p = corpus.surprise(0.5, 1.0)(0.3)
        assert in_closed_gamma(s, p)

    def test_outside(self):
        assert not in_closed_gamma(2.5, 1)
        assert not in_closed_gamma(0, 1.2)

    @settings(max_examples=100, deadline=None)
    @given(disc, disc)
    def test_bidisc_image_is_open(self, z, w):
        assert in_open_gamma(z + w, z * w)

    @settings(max_examples=100, deadline=None)
    @given(circle, disc)
    def test_torus_edge_is_boundary(self, z, w):
        assert in_closed_gamma(z + w, z * w)
        assert not in_open_gamma(z + w, z * w)
        assert in_topological_boundary(z + w, z * w)

    @settings(max_examples=100, deadline=None)
    @given(st.complex_numbers(max_magnitude=2.5), st.complex_numbers(max_magnitude=1.3))
    def test_agrees_with_root_oracle(self, s, p):
        region = gamma_region(s, p)
        # skip points within a whisker of the boundary, where the two tests may disagree by round-off
        t = np.roots([1, -s, p])
        if abs(np.max(np.abs(t)) - 1) < 1e-6:
            return
        assert in_open_gamma(s, p) == (region == "open")
        assert in_closed_gamma(s, p) == (region != "outside")


class TestRoyalNodes:
    def test_royal_map(self):
        h = GammaMap(2 * LAM, LAM * LAM)
        assert is_royal_map(h)
        with pytest.raises(RoyalMapError):
            royal_nodes(h)

    def test_aligned_example(self):
        nodes = royal_nodes(corpus.ex52_2(0.5))
        total = sum(n.multiplicity for n in nodes)
        assert total == 8
        inf = [n for n in nodes if n.value is None]
        assert len(inf) == 1 and inf[0].multiplicity == 1
        zero = [n for n in nodes if n.value is not None and abs(n.value) < 1e-8]
        assert zero[0].multiplicity == 1
        circ = [n for n in nodes if n.on_circle]
        assert len(circ) == 3 and all(n.multiplicity == 2 for n in circ)
        for n in circ:
            assert abs(n.value ** 3 + 1) < 1e-8

    def test_caddy_two(self):
        got = circle_royal_nodes(corpus.excaddy2(0.5))
        for target in (1, 1j, -1, -1j):
            assert np.min(np.abs(got - target)) < 1e-8
        assert got.size == 4

    def test_caddy_four_coalesce(self):
        nodes = royal_nodes(corpus.excaddy4(1 / 3))
        circ = [n for n in nodes if n.on_circle]
        assert len(circ) == 1 and circ[0].multiplicity == 6
        assert abs(circ[0].value - 1) < 1e-8

    @pytest.mark.parametrize("name", ["ex52_2", "excaddy2", "excaddy3", "excaddy4"])
    def test_circle_nodes_are_where_s_has_modulus_two(self, name):
        h = corpus.build(name)
        nodes = circle_royal_nodes(h)
        assert np.allclose(np.abs(h.s(nodes)), 2, atol=1e-8)
        theta = np.linspace(0, 2 * np.pi, 20000, endpoint=False)
        z = np.exp(1j * theta)
        near = z[np.abs(h.s(z)) > 2 - 1e-9]
        # a node of multiplicity 2k leaves |s| within 1e-9 of 2 on an arc of width ~ 1e-9**(1/2k)
        for w in near:
            assert np.min(np.abs(nodes - w)) < 5e-2


class TestInner:
    def test_royal_map_is_inner(self):
        assert gamma_inner_check(GammaMap(2 * LAM, LAM * LAM)).is_inner

    def test_zero_product_is_not_inner(self):
        assert not gamma_inner_check(GammaMap(LAM, RationalFn.constant(0))).is_inner

    def test_surprise_is_inner(self):
        h = corpus.surprise(0.5, 1.0)
        z = 1j
        s, p = h(z)
        # direct evaluation at theta = pi/2: |p| = 1, conj(s) p = s, |s| <= 2
        assert abs(abs(p) - 1) < 1e-12
        assert abs(np.conj(s) * p - s) < 1e-12
        assert gamma_inner_check(h).is_inner

    def test_pole_in_disc(self):
        bad = RationalFn(ComplexPoly([1]), ComplexPoly([-0.5, 1]))
        with pytest.raises(NotAnalyticError):
            gamma_inner_check(GammaMap(bad, LAM))

    @pytest.mark.parametrize("name", list(corpus.CATALOGUE))
    def test_corpus_maps_are_inner(self, name):
        assert gamma_inner_check(corpus.build(name)).is_inner


class TestBoundaryDiscs:
    def test_constructed_member(self):
        w = 1j
        assert abs(d_omega_membership(np.conj(w) + w * 0.3, 0.3) - w) < 1e-12

    def test_distinguished_point(self):
        with pytest.raises(GammaInterpError):
            d_omega_membership(2, 1)

    def test_real_point(self):
        assert abs(d_omega_membership(1.5, 0.5) - 1) < 1e-12

    @settings(max_examples=100, deadline=None)
    @given(circle, st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 0.95), st.floats(0, 2 * np.pi)))
    def test_recovers_omega(self, w, p):
        assert abs(d_omega_membership(w * p + np.conj(w), p) - w) < 1e-9

    def test_constant_corner_targets(self):
        prob = InterpProblem([0, 0.5, 0.2j], [2, 2, 2], [1, 1, 1])
        sol = boundary_interp_solve(prob)
        assert sol.omega is None
        assert np.allclose(sol.h(0.7), (2, 1))

    def test_identity_disc(self):
        lam = np.array([0, 0.5])
        prob = InterpProblem(lam, lam + 1, lam)
        sol = boundary_interp_solve(prob)
        z = np.array([0.1, -0.3j, 0.8])
        s, p = sol.h(z)
        assert np.allclose(p, z) and np.allclose(s, z + 1)

    def test_unequal_corner_targets(self):
        with pytest.raises(UnsolvableError):
            boundary_interp_solve(InterpProblem([0, 0.5], [2, 0], [1, -1]))

    def test_different_discs(self):
        a, b = 1, 1j
        prob = InterpProblem([0, 0.5], [a * 0.2 + np.conj(a), b * 0.3 + np.conj(b)], [0.2, 0.3])
        with pytest.raises(UnsolvableError):
            boundary_interp_solve(prob)

    def test_mixed_targets(self):
        with pytest.raises(DegenerateDataError):
            boundary_interp_solve(InterpProblem([0, 0.5], [0, 1.5], [0, 0.5]))


class TestScalingIdentity:
    def test_zero_point(self):
        assert scaling_identity_check(1, 0, 0, 0.5) == 0

    def test_by_hand(self):
        assert scaling_identity_check(1j, 1, 0.2j, 0.7) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(circle, st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=1),
           st.floats(0.01, 0.99))
    def test_fuzz(self, z, s, p, r):
        assert scaling_identity_check(z, s, p, r) <= 1e-10


def test_royal_identity_for_random_data():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = BlaschkeProduct(*random_blaschke(rng, 1))
        q = BlaschkeProduct(*random_blaschke(rng, 2))
        p = BlaschkeProduct(*random_blaschke(rng, int(rng.integers(1, 5))))
        z = 0.9 * np.sqrt(rng.uniform(size=50)) * np.exp(2j * np.pi * rng.uniform(size=50))
        mz, qz, pz = m(z), q(z), p(z)
        s = 2 * (mz * pz - qz) / (1 - mz * qz)
        lhs = s ** 2 - 4 * pz
        rhs = 4 * (mz ** 2 * pz - 1) * (pz - qz ** 2) / (1 - mz * qz) ** 2
        assert np.max(np.abs(lhs - rhs) / (1 + np.abs(rhs))) <= 1e-9
