from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    harmonic_dimension,
    partition_of,
    sphere_harmonic_closed_form,
    sphere_laplace_eigenvalue,
    ssyt_count,
    su_casimir_standard,
)
from sbheat import casimir, dimension, enumerate_weights, group_su, sphere, weight
from sbheat.lattice import as_weight, dimension_polynomial_degree, is_spherical
from sbheat.models import generic

MODELS = [sphere(2), sphere(3), sphere(5), group_su(2), group_su(3), group_su(4)]


class TestEnumerate:
    def test_s2_cutoff_12(self, s2):
        ws = enumerate_weights(s2, 12)
        assert [w.xi_coords for w in ws] == [(0,), (1,), (2,), (3,)]
        assert [w.casimir for w in ws] == [0, 2, 6, 12]

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_cutoff_zero(self, m):
        ws = enumerate_weights(m, 0)
        assert len(ws) == 1 and ws[0].is_zero

    def test_su2_cutoff_8(self, su2):
        ws = enumerate_weights(su2, 8)
        assert [(w.xi_coords[0], w.casimir) for w in ws] == [(0, 0), (1, 3), (2, 8)]

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_sorted_and_complete(self, m):
        cutoff = Fraction(40)
        ws = enumerate_weights(m, cutoff)
        keys = [(w.casimir, w.xi_coords) for w in ws]
        assert keys == sorted(keys)
        # brute force box: casimir grows at least linearly along each ray
        box = 12
        import itertools

        brute = {c for c in itertools.product(range(box + 1), repeat=m.rank) if weight(m, c).casimir <= cutoff}
        assert {w.xi_coords for w in ws} == brute

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_prefix_property(self, m):
        small, big = enumerate_weights(m, 15), enumerate_weights(m, 45)
        assert big[: len(small)] == small

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_membership_and_zero_casimir(self, m):
        for w in enumerate_weights(m, 50):
            assert is_spherical(m, w.vec)
            assert (w.casimir == 0) == w.is_zero
            assert w.dim >= 1


class TestDimension:
    def test_s2_k3(self, s2):
        assert dimension(s2, 3) == 7 == harmonic_dimension(3, 3)

    def test_s3_k2(self, s3):
        assert dimension(s3, 2) == 9 == harmonic_dimension(2, 4)

    def test_su2_k2(self, su2, s3):
        assert dimension(su2, 2) == 9 == dimension(s3, 2)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    @pytest.mark.parametrize("k", range(0, 5))
    def test_sphere_harmonic_count(self, d, k):
        assert dimension(sphere(d), k) == harmonic_dimension(k, d + 1)

    @pytest.mark.parametrize("d", range(2, 9))
    def test_sphere_closed_form_large_k(self, d):
        for k in range(30):
            assert dimension(sphere(d), k) == sphere_harmonic_closed_form(k, d)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_group_dimension_is_squared_tableau_count(self, n):
        for w in enumerate_weights(group_su(n), 30):
            assert w.dim == ssyt_count(partition_of(w.xi_coords), n) ** 2

    def test_not_spherical_rejected(self, su3):
        with pytest.raises(ValueError):
            weight(su3, (1,))
        with pytest.raises(ValueError):
            weight(su3, (-1, 0))

    def test_zero_weight(self):
        for m in MODELS:
            assert dimension(m, (0,) * m.rank) == 1

    def test_generic_polynomial(self):
        m = generic([((1,), 1)], [[1]], "2*k1 + 1")
        assert [dimension(m, k) for k in range(4)] == [1, 3, 5, 7]
        assert dimension_polynomial_degree(m) == 1


class TestCasimir:
    def test_s2_k3(self, s2):
        assert casimir(s2, 3) == 12 == sphere_laplace_eigenvalue(3, 2)

    def test_zero(self):
        for m in MODELS:
            assert casimir(m, (0,) * m.rank) == 0

    def test_s5_k1(self):
        assert casimir(sphere(5), 1) == 5 == sphere_laplace_eigenvalue(1, 5)

    @pytest.mark.parametrize("d", [2, 3, 4, 6])
    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_sphere_matches_laplacian(self, d, k):
        assert casimir(sphere(d), k) == sphere_laplace_eigenvalue(k, d)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_group_matches_partition_formula(self, n):
        for w in enumerate_weights(group_su(n), 40):
            assert w.casimir == 2 * su_casimir_standard(w.xi_coords, n)

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_monotone_along_rays(self, m):
        for j in range(m.rank):
            values = []
            for k in range(12):
                c = [0] * m.rank
                c[j] = k
                values.append(casimir(m, tuple(c)))
            assert all(a < b for a, b in zip(values, values[1:]))


class TestCrossModel:
    @given(st.integers(0, 20))
    @settings(max_examples=25, deadline=None)
    def test_s3_su2(self, k):
        a, b = as_weight(sphere(3), k), as_weight(group_su(2), k)
        assert a.dim == b.dim == (k + 1) ** 2
        assert a.casimir == b.casimir == k * (k + 2)
