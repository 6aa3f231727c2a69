from fractions import Fraction

import pytest

from oracles import complex_group_restricted_roots, sphere_restricted_roots
from sbheat import ConfigurationError, Family, RestrictedRoot, build_model, check_propagation, group_su, inner, product, sphere
from sbheat.lattice import weight
from sbheat.models import (
    cartan_matrix,
    dynkin_type,
    generic,
    half_sum,
    model_descriptor,
    model_from_descriptor,
)

SPHERES = [sphere(d) for d in range(2, 8)]
GROUPS = [group_su(n) for n in range(2, 6)]
ALL = SPHERES + GROUPS


class TestBuildModel:
    def test_s2_root_data(self):
        m = build_model("sphere", d=2)
        assert m.rank == 1
        assert [r.multiplicity for r in m.positive_roots] == [1]
        assert m.rho == (Fraction(1, 2),)

    def test_s5_root_data(self):
        m = build_model(Family.SPHERE, d=5)
        assert [r.multiplicity for r in m.positive_roots] == [4]
        assert m.rho == (Fraction(2),)

    def test_su2_root_data(self):
        m = build_model("group_su", n=2)
        assert m.rank == 1
        assert [r.multiplicity for r in m.positive_roots] == [2]
        assert m.rho == m.root(0)

    @pytest.mark.parametrize("d", range(2, 8))
    def test_sphere_multiplicity_matches_matrix_model(self, d):
        # so(d+1): ad(X) has eigenvalue i·1 with multiplicity d-1
        assert sphere_restricted_roots(d) == {1.0: d - 1}
        assert sphere(d).positive_roots[0].multiplicity == d - 1

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_group_roots_match_complex_group(self, n):
        spectrum = complex_group_restricted_roots(n)
        model = group_su(n)
        assert len(spectrum) == len(model.positive_roots) == n * (n - 1) // 2
        assert set(spectrum.values()) == {2}
        assert {r.multiplicity for r in model.positive_roots} == {2}

    @pytest.mark.parametrize("bad", [{"family": "sphere", "d": 1}, {"family": "group_su", "n": 1},
                                     {"family": "sphere", "d": 2.5}, {"family": "grassmann", "n": 3},
                                     {"family": "sphere"}])
    def test_invalid_params(self, bad):
        with pytest.raises(ConfigurationError, match=str(bad["family"])):
            model_from_descriptor(bad)

    def test_root_validation(self):
        with pytest.raises(ConfigurationError):
            RestrictedRoot((0,), 1)
        with pytest.raises(ConfigurationError):
            RestrictedRoot((1,), 0)

    def test_generic_rejects_indefinite_gram(self):
        with pytest.raises(ConfigurationError, match="positive definite"):
            generic([((1,), 1)], [[-1]], "2*k1 + 1")


class TestInvariants:
    @pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
    def test_rho_is_half_sum(self, m):
        assert half_sum(m.positive_roots, m.rank) == m.rho

    @pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
    def test_fundamental_weight_duality(self, m):
        for j, xi in enumerate(m.fundamental_weights):
            for i, idx in enumerate(m.simple_roots):
                a = m.root(idx)
                assert inner(m, xi, a) / inner(m, a, a) == (1 if i == j else 0)

    @pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
    def test_sigma_subsystems(self, m):
        coords = {r.coords for r in m.positive_roots}
        for i in m.sigma_half:
            assert tuple(c / 2 for c in m.root(i)) not in coords
        for i in m.sigma_two:
            assert tuple(2 * c for c in m.root(i)) not in coords

    @pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
    def test_gram_symmetric(self, m):
        assert all(m.gram[i][j] == m.gram[j][i] for i in range(m.rank) for j in range(m.rank))

    def test_models_are_hashable_values(self):
        assert sphere(3) == sphere(3)
        assert hash(group_su(3)) == hash(group_su(3))
        assert sphere(3) != group_su(2)

    def test_group_gram_ratios_match_standard_roots(self):
        # in ε-coordinates, <e_i - e_j, e_k - e_l> gives the Cartan pattern up to scale
        m = group_su(4)
        for i in range(3):
            for j in range(3):
                assert m.gram[i][j] == Fraction([2, -1, 0][min(abs(i - j), 2)], 2)


class TestInner:
    def test_s2_alpha(self, s2):
        assert inner(s2, (1,), (1,)) == 1

    def test_zero(self, su3):
        assert inner(su3, (0, 0), (Fraction(3, 7), 2)) == 0

    def test_s5_rho(self):
        m = sphere(5)
        assert inner(m, m.rho, m.rho) == 4

    def test_dimension_mismatch(self, su3):
        with pytest.raises(ValueError):
            inner(su3, (1,), (1, 0))


class TestPropagation:
    def test_sphere_pair(self, s2, s3):
        rep = check_propagation(s2, s3)
        assert rep.accepted and rep.matching == (0,)

    def test_group_pair_extends_left(self, su2, su3):
        rep = check_propagation(su2, su3)
        assert rep.accepted and rep.matching == (0,)
        assert dynkin_type(cartan_matrix(su3), range(2)) == "A2"

    def test_sphere_into_group_rejected(self, s2, su3):
        rep = check_propagation(s2, su3)
        assert not rep.accepted
        assert rep.matching == ()

    def test_shrinking_sphere_rejected(self):
        rep = check_propagation(sphere(4), sphere(3))
        assert not rep.accepted and "multiplicity" in rep.reason

    def test_rank_drop_rejected(self, su3, s3):
        assert not check_propagation(su3, s3).accepted

    @pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
    def test_reflexive(self, m):
        rep = check_propagation(m, m)
        assert rep.accepted and rep.matching == tuple(range(m.rank))

    def test_transitive_sphere_chain(self):
        for d in range(2, 6):
            a, b, c = sphere(d), sphere(d + 1), sphere(d + 2)
            assert check_propagation(a, b).accepted and check_propagation(b, c).accepted
            assert check_propagation(a, c).accepted

    def test_transitive_group_chain(self):
        for n in range(2, 5):
            a, b, c = group_su(n), group_su(n + 1), group_su(n + 2)
            ab, bc, ac = check_propagation(a, b), check_propagation(b, c), check_propagation(a, c)
            assert ab.accepted and bc.accepted and ac.accepted
            assert ac.matching == tuple(bc.matching[j] for j in ab.matching)

    def test_products_match_factorwise(self):
        low = product(sphere(2), group_su(3))
        high = product(sphere(3), group_su(4))
        rep = check_propagation(low, high)
        assert rep.accepted
        assert rep.matching == (0, 1, 2)
        assert not check_propagation(low, product(group_su(4), group_su(2))).accepted

    def test_weights_restrict(self, su2, su3):
        # the padded weight restricts back to the lower one
        assert weight(su3, 3, 0).xi_coords[:1] == weight(su2, 3).xi_coords


class TestDescriptors:
    @pytest.mark.parametrize("m", [sphere(4), group_su(3), product(sphere(2), group_su(2))], ids=lambda m: m.name)
    def test_round_trip(self, m):
        assert model_from_descriptor(model_descriptor(m)) == m

    def test_generic_descriptor(self):
        desc = {"family": "generic", "positive_roots": [{"coords": ["1"], "multiplicity": 2}],
                "gram": [["1"]], "dimension": "(k1+1)**2", "label": "S3-like"}
        m = model_from_descriptor(desc)
        assert m.name == "S3-like"
        assert weight(m, 2).dim == 9
        assert weight(m, 2).casimir == 8
