"""Residual verification of the commutator identities on random jets."""

from __future__ import annotations

import json
import math
from fractions import Fraction as F

import pytest

from radialjet.coefficients import ConsistencyError
from radialjet.identities import (
    LOG_MODE,
    POWER_MODE,
    commutator_defect,
    norm_bound_demo,
    power_reconstruction,
    reciprocal_expansion,
    stratum_operator,
    verify_fdb_power,
    verify_log_expansion,
    verify_log_identity,
    verify_power_expansion,
    verify_power_identity,
    verify_reciprocal_identity,
    verify_stratum_reduction,
)
from radialjet.jets import (
    EXACT,
    FLOAT,
    ConstantTermError,
    Jet,
    JetShapeError,
    int_pow,
    radial_power,
    random_jet,
    random_pair,
)


def one_plus(var_jet):
    return Jet.constant(var_jet.n, var_jet.D, 1, var_jet.regime) + var_jet


class TestCommutatorDefect:
    def test_constant_g_vanishes(self):
        g = Jet.constant(2, 4, F(5, 2))
        h = random_jet(2, 4, seed=1)
        assert commutator_defect(g, h, 3).is_zero

    def test_unit_h_first_order(self):
        g = random_jet(2, 4, seed=2)
        h = Jet.constant(2, 4, 1)
        assert commutator_defect(g, h, 1) == radial_power(g, 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_direct_equals_leibniz_sum(self, seed):
        # the cross-check is built in; a silent pass means both routes agree
        f, h = random_pair(2, 5, seed)
        commutator_defect(f, h, 3)

    def test_shape_mismatch(self):
        with pytest.raises(JetShapeError):
            commutator_defect(random_jet(1, 4, 0), random_jet(2, 4, 0), 2)


class TestPowerIdentity:
    def test_m1_reduces_to_chain_rule(self):
        f, h = random_pair(2, 4, seed=3)
        report = verify_power_identity(f, h, 1, F(1, 2))
        assert report.passed and report.residual == 0

    def test_product_of_affine_factors(self):
        f = one_plus(Jet.variable(2, 4, 1))
        h = one_plus(Jet.variable(2, 4, 2))
        report = verify_power_identity(f, h, 2, F(1, 2))
        assert report.residual == 0

    @pytest.mark.parametrize("t", [F(1, 2), F(-1, 2), F(3), F(-2), F(5, 3)])
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_zero_residual_small_grid(self, m, t):
        f, h = random_pair(2, 5, seed=10 * m)
        assert verify_power_identity(f, h, m, t).residual == 0

    def test_requires_unit_constant_exact(self):
        f = Jet.constant(1, 3, 2) + Jet.variable(1, 3, 1)
        with pytest.raises(ConstantTermError):
            verify_power_identity(f, Jet.constant(1, 3, 1), 1, F(1, 2))

    def test_float_regime_irrational_exponent(self):
        f = (
            Jet.constant(2, 5, 1.0, FLOAT)
            + Jet.variable(2, 5, 1, FLOAT).scale(0.3)
            + (Jet.variable(2, 5, 2, FLOAT) * Jet.variable(2, 5, 2, FLOAT)).scale(0.1)
        )
        h = random_jet(2, 5, seed=8, regime=FLOAT)
        report = verify_power_identity(f, h, 2, math.sqrt(2))
        assert not report.exact
        assert report.passed
        assert report.residual <= 1e-10

    def test_report_json_shape(self):
        f, h = random_pair(2, 4, seed=7)
        line = verify_power_identity(f, h, 2, F(1, 2), seed=7).to_json_line()
        data = json.loads(line)
        assert data == {
            "id": "eq1.3",
            "n": 2,
            "m": 2,
            "D": 4,
            "t": "1/2",
            "seed": 7,
            "residual": "0",
            "pass": True,
        }


class TestLogIdentity:
    def test_m1_reduces_to_log_derivative(self):
        f, h = random_pair(2, 4, seed=4)
        assert verify_log_identity(f, h, 1).residual == 0

    def test_concrete_example(self):
        f = one_plus(Jet.variable(2, 6, 1) * Jet.variable(2, 6, 2))
        h = Jet.variable(2, 6, 1)
        assert verify_log_identity(f, h, 3).residual == 0

    def test_zero_h(self):
        f = random_jet(2, 4, seed=5, constraint="unit-constant")
        assert verify_log_identity(f, Jet.zero(2, 4), 3).residual == 0

    def test_requires_unit_constant_exact(self):
        f = Jet.constant(1, 3, 3) + Jet.variable(1, 3, 1)
        with pytest.raises(ConstantTermError):
            verify_log_identity(f, Jet.constant(1, 3, 1), 2)


class TestReciprocalIdentity:
    def test_quotient_rule_instance(self):
        f, h = random_pair(1, 4, seed=6)
        assert verify_reciprocal_identity(f, h, 1).residual == 0

    def test_shifted_constant(self):
        f = Jet.constant(1, 5, 2) + Jet.variable(1, 5, 1)
        h = Jet.constant(1, 5, 1)
        assert verify_reciprocal_identity(f, h, 2).residual == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_agrees_with_power_identity_at_minus_one(self, seed):
        f, h = random_pair(2, 5, seed)
        direct = radial_power(int_pow(f, -1) * h, 2)
        via_power = power_reconstruction(f, h, 2, F(-1))
        via_recip = reciprocal_expansion(f, h, 2)
        assert direct == via_power
        assert direct == via_recip
        assert via_power == via_recip

    def test_rejects_vanishing_constant(self):
        z = Jet.variable(1, 4, 1)
        with pytest.raises(ConstantTermError):
            verify_reciprocal_identity(z, z, 1)


class TestStratumOperator:
    def test_top_depth_single_stratum(self):
        f, h = random_pair(2, 5, seed=9)
        m = 3
        rf = radial_power(f, 1)
        expected = int_pow(f, -m) * int_pow(rf, m) * h
        assert stratum_operator(f, h, m, m) == expected

    def test_constant_f_vanishes(self):
        f = Jet.constant(2, 4, F(3, 2))
        h = random_jet(2, 4, seed=10)
        for i in (1, 2, 3):
            assert stratum_operator(f, h, 3, i).is_zero

    def test_concrete_hand_expansion(self):
        # m=2, i=1, f=1+z1, h=1: only the second-derivative stratum survives,
        # giving f^(-1) R^2 f = z1/(1+z1) truncated.
        f = one_plus(Jet.variable(1, 5, 1))
        h = Jet.constant(1, 5, 1)
        expected = Jet.variable(1, 5, 1) * int_pow(f, -1)
        assert stratum_operator(f, h, 2, 1) == expected

    def test_depth_range_checked(self):
        f, h = random_pair(1, 3, seed=0)
        with pytest.raises(ValueError):
            stratum_operator(f, h, 2, 3)
        with pytest.raises(ValueError):
            stratum_operator(f, h, 2, 0)


class TestStratumReduction:
    def test_m_r_one_is_log_derivative_term(self):
        f, h = random_pair(2, 4, seed=11)
        assert verify_stratum_reduction(f, h, 1, 1).residual == 0

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_random_jets_m3(self, r):
        f, h = random_pair(2, 5, seed=12)
        assert verify_stratum_reduction(f, h, 3, r).residual == 0

    def test_zero_h(self):
        f = random_jet(2, 4, seed=13, constraint="unit-constant")
        assert verify_stratum_reduction(f, Jet.zero(2, 4), 2, 1).residual == 0


class TestFdBPower:
    def test_first_derivative(self):
        f = random_jet(2, 5, seed=14, constraint="unit-constant")
        assert verify_fdb_power(f, 4, 1).residual == 0

    def test_k_one_pure_derivatives(self):
        f = random_jet(2, 5, seed=15, constraint="unit-constant")
        assert verify_fdb_power(f, 1, 3).residual == 0

    def test_concrete_cubic(self):
        f = (
            Jet.constant(2, 6, 1)
            + Jet.variable(2, 6, 1)
            + Jet.variable(2, 6, 2) * Jet.variable(2, 6, 2)
        )
        assert verify_fdb_power(f, 3, 3).residual == 0

    def test_range_violation(self):
        f = random_jet(1, 3, seed=0)
        with pytest.raises(ValueError):
            verify_fdb_power(f, 0, 1)


class TestExpandedIdentities:
    @pytest.mark.parametrize("t", [F(1, 2), F(-2)])
    def test_power_expansion(self, t):
        f, h = random_pair(2, 5, seed=16)
        assert verify_power_expansion(f, h, 3, t).residual == 0

    def test_log_expansion(self):
        f, h = random_pair(2, 5, seed=17)
        assert verify_log_expansion(f, h, 3).residual == 0


class TestNormBoundDemo:
    @staticmethod
    def affine(n, D, coeffs):
        out = Jet.constant(n, D, coeffs.pop("const", 1.0), FLOAT)
        for j, c in coeffs.items():
            out = out + Jet.variable(n, D, j, FLOAT).scale(c)
        return out

    def test_constant_multiplier_equality_pattern(self):
        f = Jet.constant(2, 4, 1.0, FLOAT)
        h = Jet.variable(2, 4, 2, FLOAT)
        report = norm_bound_demo(f, h, 1, 0, POWER_MODE, t=1.0)
        assert report.passed
        assert report.lhs == pytest.approx(report.rhs, rel=1e-12)

    def test_power_mode_positive_slack(self):
        f = self.affine(2, 4, {1: 0.3})
        h = Jet.variable(2, 4, 2, FLOAT)
        report = norm_bound_demo(f, h, 1, 0, POWER_MODE, t=0.5)
        assert report.passed
        assert report.slack > 0
        assert report.rhs <= report.rhs_chain_end * (1 + 1e-12)

    def test_log_mode_same_data(self):
        f = self.affine(2, 4, {1: 0.3})
        h = Jet.variable(2, 4, 2, FLOAT)
        report = norm_bound_demo(f, h, 1, 0, LOG_MODE)
        assert report.passed
        assert report.slack > 0

    def test_refuses_small_modulus(self):
        f = self.affine(1, 4, {1: 1.0})  # 1 + z1 vanishes near the boundary
        h = Jet.constant(1, 4, 1.0, FLOAT)
        with pytest.raises(ValueError):
            norm_bound_demo(f, h, 1, 0, POWER_MODE, t=-1.0, min_modulus=0.05)

    def test_rejects_exact_regime(self):
        f = random_jet(1, 3, seed=0, constraint="unit-constant")
        with pytest.raises(ValueError):
            norm_bound_demo(f, f, 1, 0, POWER_MODE, t=1.0)
