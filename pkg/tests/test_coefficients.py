import math

import numpy as np
import pytest

from sbheat import (
    CoefficientVector,
    HeatOverflowError,
    Mode,
    embed_heat_factor,
    fock_inner,
    fock_norm,
    group_su,
    l2_inner,
    l2_norm,
    random_vector,
    sphere,
    to_full,
)
from sbheat.coefficients import from_json, scale_blocks, to_json

MODELS = [sphere(2), sphere(3), group_su(3)]


def scalar(model, k, value):
    return CoefficientVector(model, Mode.KINVARIANT, {k: value})


class TestConstruction:
    def test_full_block_length_checked(self, s2):
        with pytest.raises(ValueError, match="d\\(μ\\) = 3"):
            CoefficientVector(s2, Mode.FULL, {1: [1, 2]})

    def test_kinvariant_must_be_scalar(self, s2):
        with pytest.raises(ValueError):
            CoefficientVector(s2, "kinvariant", {1: [1, 2]})

    def test_non_spherical_key(self, su3):
        with pytest.raises(ValueError):
            CoefficientVector(su3, Mode.KINVARIANT, {(1,): 1})

    def test_json_round_trip(self, su3, rng):
        a = random_vector(su3, Mode.FULL, rng)
        b = from_json(su3, Mode.FULL, to_json(a))
        assert b.entries.keys() == a.entries.keys()
        for k in a.entries:
            np.testing.assert_array_equal(a.entries[k], b.entries[k])

    def test_json_shape(self, s2):
        rows = to_json(CoefficientVector(s2, Mode.KINVARIANT, {2: 1 - 2j}))
        assert rows == [{"weight": [2], "block": [[1.0, -2.0]]}]

    def test_malformed_json(self, s2):
        with pytest.raises(ValueError, match="malformed"):
            from_json(s2, "kinvariant", [{"weight": [1]}])


class TestL2:
    def test_unit_scalar_at_k1(self, s2):
        a = scalar(s2, 1, 1.0)
        assert l2_inner(s2, a, a) == 3

    def test_disjoint_support(self, s2):
        assert l2_inner(s2, scalar(s2, 1, 1.0), scalar(s2, 2, 5.0)) == 0

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_normalized(self, m):
        w = (2,) + (0,) * (m.rank - 1)
        from sbheat import dimension

        a = scalar(m, w, 1 / math.sqrt(dimension(m, w)))
        assert l2_inner(m, a, a) == pytest.approx(1, abs=1e-15)

    def test_mode_mismatch(self, s2):
        with pytest.raises(ValueError, match="mode"):
            l2_inner(s2, scalar(s2, 1, 1), to_full(scalar(s2, 1, 1)))

    def test_model_mismatch(self, s2, s3):
        with pytest.raises(ValueError):
            l2_inner(s2, scalar(s2, 1, 1), scalar(s3, 1, 1))

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_hermitian_and_cauchy_schwarz(self, m, rng):
        for mode in Mode:
            for _ in range(50):
                a, b = random_vector(m, mode, rng), random_vector(m, mode, rng)
                ab, ba = l2_inner(m, a, b), l2_inner(m, b, a)
                assert abs(ab - ba.conjugate()) <= 1e-12 * max(1, abs(ab))
                assert abs(ab) <= l2_norm(m, a) * l2_norm(m, b) * (1 + 1e-12)

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_polarization(self, m, rng):
        def add(x, y, c=1):
            out = x.copy()
            for k, v in y.entries.items():
                out.entries[k] = out.entries.get(k, 0 * v) + c * v
            return out

        for _ in range(30):
            a, b = random_vector(m, Mode.FULL, rng), random_vector(m, Mode.FULL, rng)
            pol = sum(c * l2_norm(m, add(a, b, c)) ** 2 for c in (1, -1, 1j, -1j)) / 4
            ref = l2_inner(m, a, b)
            assert abs(pol - ref) <= 1e-12 * max(1.0, l2_norm(m, a) * l2_norm(m, b))


class TestFock:
    def test_orthonormal_basis_element(self, s2):
        t = 0.3
        for k in range(5):
            from sbheat import weight

            w = weight(s2, k)
            a = scalar(s2, k, math.exp(-t * float(w.casimir)) / math.sqrt(w.dim))
            assert fock_inner(s2, t, a, a).real == pytest.approx(1, rel=1e-14)

    def test_zero_weight_has_no_t_dependence(self, s3):
        a = scalar(s3, 0, 0.5 + 0.5j)
        assert fock_inner(s3, 0.1, a, a) == fock_inner(s3, 7.0, a, a) == pytest.approx(0.5)

    def test_s2_k2(self, s2):
        a = scalar(s2, 2, 1.0)
        assert fock_inner(s2, 0.1, a, a).real == pytest.approx(5 * math.exp(1.2), rel=1e-15)

    def test_t_must_be_positive(self, s2):
        a = scalar(s2, 0, 1)
        with pytest.raises(ValueError):
            fock_inner(s2, 0.0, a, a)

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_equals_scaled_l2(self, m, rng):
        t = 0.07
        for mode in Mode:
            for _ in range(40):
                a, b = random_vector(m, mode, rng), random_vector(m, mode, rng)
                da = scale_blocks(a, lambda w: math.exp(t * float(w.casimir)))
                db = scale_blocks(b, lambda w: math.exp(t * float(w.casimir)))
                lhs, rhs = fock_inner(m, t, a, b), l2_inner(m, da, db)
                assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))

    def test_log_space_branch(self, s2):
        # exponent 2·t·casimir = 2·3·110 = 660 > 600, still representable
        a = scalar(s2, 10, 1e-150)
        expected = 21 * math.exp(660 - 2 * 150 * math.log(10))
        assert fock_inner(s2, 3.0, a, a).real == pytest.approx(expected, rel=1e-12)

    def test_overflow_raises(self, s2):
        a = scalar(s2, 10, 1.0)
        with pytest.raises(HeatOverflowError):
            fock_inner(s2, 5.0, a, a)


class TestKInvariantEmbedding:
    @pytest.mark.parametrize("m", MODELS, ids=lambda m: m.name)
    def test_isometric(self, m, rng):
        for _ in range(30):
            a, b = random_vector(m, Mode.KINVARIANT, rng), random_vector(m, Mode.KINVARIANT, rng)
            fa, fb = to_full(a), to_full(b)
            assert l2_inner(m, fa, fb) == pytest.approx(l2_inner(m, a, b), rel=1e-14, abs=1e-14)
            assert fock_inner(m, 0.2, fa, fb) == pytest.approx(fock_inner(m, 0.2, a, b), rel=1e-14, abs=1e-14)


class TestHeatFactor:
    def test_t_zero(self, s2):
        assert all(embed_heat_factor(s2, 0.0, k) == 1 for k in range(6))

    def test_s2_k3(self, s2):
        assert embed_heat_factor(s2, 0.1, 3) == pytest.approx(math.exp(1.2), rel=1e-15)

    def test_zero_weight(self, su3):
        assert embed_heat_factor(su3, 123.0, (0, 0)) == 1

    def test_negative_t(self, s2):
        assert embed_heat_factor(s2, -0.5, 1) == pytest.approx(math.exp(-1), rel=1e-15)

    def test_guard(self, s2):
        with pytest.raises(HeatOverflowError):
            embed_heat_factor(s2, 10.0, 10)


class TestRandom:
    def test_seeded(self, su3):
        a = random_vector(su3, Mode.FULL, np.random.default_rng(5))
        b = random_vector(su3, Mode.FULL, np.random.default_rng(5))
        assert a.entries.keys() == b.entries.keys()
        assert all(np.array_equal(a.entries[k], b.entries[k]) for k in a.entries)

    def test_unit_disc(self, s3, rng):
        for _ in range(50):
            a = random_vector(s3, Mode.FULL, rng)
            assert all(np.all(np.abs(v) <= 1) for v in a.entries.values())
