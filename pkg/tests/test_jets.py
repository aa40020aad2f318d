"""Jet arithmetic, functional calculus, and the radial derivative."""

from __future__ import annotations

import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radialjet.jets import (
    EXACT,
    FLOAT,
    ConstantTermError,
    Jet,
    JetShapeError,
    MultiIndex,
    exp_series,
    int_pow,
    log_series,
    monomial_indices,
    mul,
    radial_power,
    random_jet,
    random_pair,
    real_pow,
)


def jet1(coeffs, D=4, n=1, regime=EXACT):
    return Jet.from_coeffs(n, D, coeffs, regime)


class TestMultiIndex:
    def test_weight(self):
        assert MultiIndex((1, 2, 0)).weight == 3

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            MultiIndex((1, -1))

    def test_graded_lex_enumeration(self):
        idx = monomial_indices(2, 2)
        assert [tuple(a) for a in idx] == [
            (0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0),
        ]


class TestRadial:
    def test_eigenvalue_on_variable(self):
        z1 = Jet.variable(2, 3, 1)
        assert radial_power(z1, 1) == z1

    def test_square_on_mixed_monomial(self):
        j = jet1({(1, 2): 1}, D=4, n=2)
        assert radial_power(j, 2) == j.scale(9)

    def test_kills_constants(self):
        c = Jet.constant(3, 2, F(7, 3))
        for m in (1, 2, 5):
            assert radial_power(c, m).is_zero

    def test_m_zero_is_identity(self):
        f = random_jet(2, 4, seed=5)
        assert radial_power(f, 0) == f

    def test_diagonality_coefficientwise(self):
        f = random_jet(2, 5, seed=9)
        rf = radial_power(f, 3)
        for alpha, c in f.coefficients().items():
            assert rf.coefficient(alpha) == c * alpha.weight ** 3


class TestMul:
    def test_difference_of_squares(self):
        one = Jet.constant(1, 3, 1)
        z = Jet.variable(1, 3, 1)
        assert (one + z) * (one - z) == one - z * z

    def test_truncation_drops_top_degree(self):
        f = jet1({(0,): 1, (1,): 1}, D=1)
        assert (f * f).coefficients() == {MultiIndex((0,)): F(1), MultiIndex((1,)): F(2)}

    def test_unit(self):
        f = random_jet(3, 4, seed=2)
        assert f * Jet.constant(3, 4, 1) == f

    def test_shape_mismatch(self):
        with pytest.raises(JetShapeError):
            mul(random_jet(2, 3, 0), random_jet(2, 4, 0))
        with pytest.raises(JetShapeError):
            mul(random_jet(2, 3, 0), random_jet(2, 3, 0, regime=FLOAT))

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_commutative_and_distributive(self, seed):
        a = random_jet(2, 4, seed)
        b = random_jet(2, 4, seed + 1)
        c = random_jet(2, 4, seed + 2)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


class TestIntPow:
    def test_geometric_series(self):
        f = Jet.constant(1, 3, 1) + Jet.variable(1, 3, 1)
        inv = int_pow(f, -1)
        assert inv.coefficients() == {
            MultiIndex((0,)): F(1),
            MultiIndex((1,)): F(-1),
            MultiIndex((2,)): F(1),
            MultiIndex((3,)): F(-1),
        }

    def test_power_zero(self):
        f = random_jet(2, 3, seed=1)
        assert int_pow(f, 0) == Jet.constant(2, 3, 1)

    def test_inverse_law(self):
        f = random_jet(2, 5, seed=3)
        if not f.constant_term:
            f = f + 1
        assert int_pow(f, -2) * int_pow(f, 2) == Jet.constant(2, 5, 1)

    def test_rejects_vanishing_constant(self):
        z = Jet.variable(1, 3, 1)
        with pytest.raises(ConstantTermError):
            int_pow(z, -1)

    def test_nonunit_constant_ok(self):
        f = Jet.constant(1, 4, 2) + Jet.variable(1, 4, 1)
        assert int_pow(f, -1) * f == Jet.constant(1, 4, 1)


class TestLogExp:
    def test_mercator_series(self):
        f = Jet.constant(1, 3, 1) + Jet.variable(1, 3, 1)
        assert log_series(f).coefficients() == {
            MultiIndex((1,)): F(1),
            MultiIndex((2,)): F(-1, 2),
            MultiIndex((3,)): F(1, 3),
        }

    def test_log_of_one(self):
        assert log_series(Jet.constant(2, 4, 1)).is_zero

    def test_exact_log_requires_unit_constant(self):
        with pytest.raises(ConstantTermError):
            log_series(Jet.constant(1, 3, 2))

    def test_exact_exp_requires_zero_constant(self):
        with pytest.raises(ConstantTermError):
            exp_series(Jet.constant(1, 3, 1))

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_exp_log_roundtrip(self, seed):
        f = random_jet(2, 5, seed, constraint="unit-constant")
        assert exp_series(log_series(f)) == f

    def test_float_log_uses_principal_branch(self):
        f = Jet.constant(1, 3, 2.0, FLOAT) + Jet.variable(1, 3, 1, FLOAT)
        g = log_series(f)
        import cmath

        assert abs(g.constant_term - cmath.log(2.0)) < 1e-15


class TestRealPow:
    def test_binomial_series(self):
        f = Jet.constant(1, 2, 1) + Jet.variable(1, 2, 1)
        assert real_pow(f, F(1, 2)).coefficients() == {
            MultiIndex((0,)): F(1),
            MultiIndex((1,)): F(1, 2),
            MultiIndex((2,)): F(-1, 8),
        }

    def test_exponent_one(self):
        f = random_jet(2, 4, seed=17, constraint="unit-constant")
        assert real_pow(f, 1) == f

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_int_pow_at_minus_one(self, seed):
        f = random_jet(2, 5, seed, constraint="unit-constant")
        assert real_pow(f, -1) == int_pow(f, -1)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=15, deadline=None)
    def test_rational_power_coherence(self, seed):
        f = random_jet(2, 4, seed, constraint="unit-constant")
        assert int_pow(real_pow(f, F(2, 3)), 3) == int_pow(f, 2)

    def test_exact_requires_unit_constant(self):
        f = Jet.constant(1, 3, 2) + Jet.variable(1, 3, 1)
        with pytest.raises(ConstantTermError):
            real_pow(f, F(1, 2))

    def test_float_regime_any_nonzero_constant(self):
        f = Jet.constant(1, 3, 2.0, FLOAT) + Jet.variable(1, 3, 1, FLOAT)
        g = real_pow(f, 0.5)
        assert abs(g.constant_term - 2.0 ** 0.5) < 1e-14


class TestLeibniz:
    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_derivation_law(self, seed):
        f, h = random_pair(2, 5, seed)
        lhs = radial_power(f * h, 1)
        rhs = radial_power(f, 1) * h + f * radial_power(h, 1)
        assert lhs == rhs

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_m_fold_product_rule(self, m):
        import math

        f, h = random_pair(2, 5, seed=100 + m)
        lhs = radial_power(f * h, m)
        rhs = Jet.zero(2, 5)
        for nu in range(m + 1):
            rhs = rhs + (radial_power(f, nu) * radial_power(h, m - nu)).scale(
                math.comb(m, nu)
            )
        assert lhs == rhs


class TestTruncationExactness:
    """Computing at a larger cap then truncating equals computing at the cap."""

    @pytest.mark.parametrize("seed", range(4))
    def test_all_operations(self, seed):
        big, small = 7, 4
        fb = random_jet(2, big, seed, constraint="unit-constant")
        hb = random_jet(2, big, seed + 50)
        f, h = fb.truncate(small), hb.truncate(small)
        assert (fb * hb).truncate(small) == f * h
        assert radial_power(fb, 3).truncate(small) == radial_power(f, 3)
        assert int_pow(fb, -2).truncate(small) == int_pow(f, -2)
        assert log_series(fb).truncate(small) == log_series(f)
        assert real_pow(fb, F(5, 3)).truncate(small) == real_pow(f, F(5, 3))

    def test_extend_roundtrip(self):
        f = random_jet(2, 3, seed=0)
        assert f.extend(6).truncate(3) == f


class TestRandomJet:
    def test_deterministic(self):
        assert random_jet(2, 4, seed=42) == random_jet(2, 4, seed=42)

    def test_unit_constant(self):
        f = random_jet(3, 3, seed=7, constraint="unit-constant")
        assert f.constant_term == 1

    def test_distinct_seeds_differ(self):
        pairs = [(s, s + 10_000) for s in range(100)]
        for a, b in pairs:
            assert random_jet(2, 3, a) != random_jet(2, 3, b)

    def test_small_rational_draws(self):
        f = random_jet(2, 4, seed=11)
        for c in f.coefficients().values():
            assert abs(c.numerator) <= 9
            assert 1 <= c.denominator <= 9

    def test_float_regime_matches_exact_draw(self):
        fe = random_jet(2, 4, seed=5)
        ff = random_jet(2, 4, seed=5, regime=FLOAT)
        for alpha, c in fe.coefficients().items():
            assert complex(c) == ff.coefficient(alpha)


class TestSerialization:
    def test_roundtrip_exact(self):
        f = random_jet(2, 4, seed=13)
        data = json.loads(json.dumps(f.to_json_dict()))
        assert Jet.from_json_dict(data) == f

    def test_roundtrip_float(self):
        f = random_jet(2, 4, seed=13, regime=FLOAT)
        g = Jet.from_json_dict(f.to_json_dict())
        assert f.max_abs_diff(g) == 0

    def test_exact_entries_are_pq_strings(self):
        f = jet1({(1,): F(-3, 6)}, D=2)
        entry = f.to_json_dict()["coeffs"][0]
        assert entry["re"] == "-1/2"
        assert entry["im"] == "0/1"

    def test_exact_rejects_imaginary(self):
        data = {
            "n": 1,
            "D": 1,
            "regime": "exact",
            "coeffs": [{"alpha": [1], "re": "1/2", "im": "1/3"}],
        }
        with pytest.raises(ValueError):
            Jet.from_json_dict(data)
