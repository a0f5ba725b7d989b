import cmath
import math
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

from conetheta.errors import BadCharacteristic, NonPositiveRestriction, RadiusOverflow
from conetheta.lattice import ConeSpec, SplitBasis, enumerate_cone
from conetheta.rng import SplitMix64
from conetheta.theta import (
    Characteristic,
    ConeSum,
    Evaluator,
    cone_sum,
    kahan_sum,
    lambda_action,
    reduced_characteristics,
    sample_points,
    tail_bound,
    theta_char,
    theta_term,
    verify_cocycle,
    wedge_function,
)

OM1 = np.array([[1j]])
Z0 = np.array([0j])
FULL1 = ConeSpec.full_lattice(1)


def brute_theta1(z, tau, N=40):
    return sum(cmath.exp(1j * math.pi * tau * m * m + 2j * math.pi * m * z) for m in range(-N, N + 1))


def test_theta_term_zero_vector():
    assert theta_term(np.zeros(2), np.array([0.3 + 0.1j, -0.2j]), np.diag([1j, 2j])) == 1.0


def test_theta_term_gaussian():
    got = theta_term(np.array([1.0]), Z0, OM1)
    assert abs(got - math.exp(-math.pi)) < 1e-15
    assert abs(got - 0.04321391826377224) < 1e-11


def test_theta_term_with_argument():
    got = theta_term(np.array([2.0]), np.array([0.5 + 0j]), OM1)
    assert abs(got - math.exp(-4 * math.pi)) < 1e-18
    assert abs(got - 3.4873e-6) < 1e-9


def test_cone_sum_classical_value():
    tv = cone_sum(Z0, OM1, FULL1, 1e-10)
    # oracle: direct summation over |K| <= 10
    oracle = sum(math.exp(-math.pi * m * m) for m in range(-10, 11))
    assert abs(tv.value - oracle) <= 1e-10
    assert abs(tv.value - math.pi**0.25 / math.gamma(0.75)) < 1e-9
    assert tv.tail <= 1e-10


def test_cone_sum_point_cone():
    tv = cone_sum(Z0, np.array([[-1j]]), ConeSpec(np.zeros((1, 0), dtype=np.int64), (0,), 0.0))
    assert tv.value == 1.0 and tv.tail == 0.0


def test_cone_sum_reduces_to_one_dimension():
    om = np.diag([-1j, 1j])
    tv = cone_sum(np.zeros(2, complex), om, ConeSpec(np.array([[0], [1]]), (0, 0), 0.0))
    assert abs(tv.value - math.pi**0.25 / math.gamma(0.75)) < 1e-9


def test_cone_sum_rejects_negative_span():
    with pytest.raises(NonPositiveRestriction):
        cone_sum(Z0, np.array([[-1j]]), FULL1)


def test_cone_sum_radius_overflow():
    fam = ConeSum(FULL1, 1e-30, max_radius=4.0)
    with pytest.raises(RadiusOverflow):
        fam.evaluate(OM1, Z0)


def test_cone_sum_matches_brute_at_random_points():
    for Z in sample_points(1, 5):
        tv = cone_sum(Z, OM1, FULL1, 1e-12)
        assert abs(tv.value - brute_theta1(complex(Z[0]), 1j)) < 1e-11


def test_tail_bound_rank_zero():
    assert tail_bound(ConeSpec(np.zeros((1, 0), dtype=np.int64), (0,), 0.0), OM1, Z0, 3.0) == 0.0


def test_tail_bound_dominates_remainder():
    bound = tail_bound(FULL1, OM1, Z0, 10.0)
    remainder = 2 * sum(math.exp(-math.pi * m * m) for m in range(11, 80))
    assert remainder <= bound <= 1e-40


def test_tail_bound_monotone():
    b5 = tail_bound(FULL1, OM1, Z0, 5.0)
    b6 = tail_bound(FULL1, OM1, Z0, 6.0)
    assert b6 <= b5


def test_tail_is_true_bound():
    # |reference at radius 2r - truncated at r| <= tail(r)
    for om, cone, Z in [
        (OM1, FULL1, np.array([0.2 + 0.1j])),
        (np.diag([-1j, 1j]), ConeSpec(np.array([[0], [1]]), (0, 0), 0.0), np.array([0.1, 0.2 - 0.2j])),
    ]:
        Q = om.imag
        for r in (4.0, 6.0):
            pts_r = enumerate_cone(cone.with_radius(r), Q)
            pts_2r = enumerate_cone(cone.with_radius(2 * r), Q)
            v_r = kahan_sum(theta_term(K, Z, om) for K in pts_r)
            v_2r = kahan_sum(theta_term(K, Z, om) for K in pts_2r)
            assert abs(v_2r - v_r) <= tail_bound(cone, om, Z, r)


def test_evaluation_deterministic():
    ev = Evaluator(ConeSum(FULL1, 1e-12), OM1)
    Z = np.array([0.3 + 0.2j])
    first = ev(Z)
    second = ev(Z)
    assert first.value == second.value and first.tail == second.tail


def test_theta_char_zero_shift_matches_cone_sum():
    char = Characteristic((0,), (1,))
    a = theta_char(char, Z0, OM1, FULL1)
    b = cone_sum(Z0, OM1, FULL1)
    assert a.value == b.value


def test_theta_char_half_shift():
    char = Characteristic((Fraction(1, 2),), (2,))
    tv = theta_char(char, Z0, OM1, FULL1, 1e-10)
    oracle = sum(math.exp(-math.pi * (m + 0.5) ** 2) for m in range(-10, 11))
    assert abs(tv.value - oracle) <= 1e-10


def test_theta_char_integral_shift_absorbed():
    char = Characteristic((1,), (1,))  # reduces to 0 mod 1
    a = theta_char(char, Z0, OM1, FULL1)
    b = cone_sum(Z0, OM1, FULL1)
    assert abs(a.value - b.value) < 1e-10


def test_characteristic_validation():
    with pytest.raises(BadCharacteristic):
        Characteristic((Fraction(1, 3),), (2,))
    with pytest.raises(BadCharacteristic):
        Characteristic((0, 0), (2, 3))  # 2 does not divide 3


def test_reduced_characteristics_count():
    assert len(reduced_characteristics((1, 2))) == 2
    assert len(reduced_characteristics((2, 2))) == 4
    assert len(reduced_characteristics((1, 1))) == 1


def test_lambda_action_identity_pair():
    ev = Evaluator(ConeSum(FULL1, 1e-12), OM1)
    acted = lambda_action((0,), (0,), ev, OM1)
    for Z in sample_points(1, 3):
        assert abs(acted(Z).value - ev(Z).value) == 0.0


def test_lambda_action_translation_only():
    ev = Evaluator(ConeSum(FULL1, 1e-12), OM1)
    acted = lambda_action((1,), (0,), ev, OM1)
    for Z in sample_points(1, 3):
        assert abs(acted(Z).value - ev(Z + 1.0).value) < 1e-14


def test_lambda_action_shifts_cone():
    # acting by a lattice direction re-indexes the sum over the shifted
    # cone; verify against the directly shifted enumeration, both for the
    # direction inside the positive cone (shift absorbed) and for the
    # negative-cone direction (a genuinely different point set)
    om = np.diag([-1j, 1j])
    cone = ConeSpec(np.array([[0], [1]]), (0, 0), 0.0)
    ev = Evaluator(ConeSum(cone, 1e-12), om)
    for direction in ((0, 1), (1, 0)):
        shifted = ConeSpec(np.array([[0], [1]]), direction, 0.0)
        ev_shift = Evaluator(ConeSum(shifted, 1e-12), om)
        acted = lambda_action((0, 0), direction, ev, om)
        for Z in sample_points(2, 5):
            assert abs(acted(Z).value - ev_shift(Z).value) < 1e-9


def test_lambda_action_composition():
    om = np.diag([-1j, 1j])
    cone = ConeSpec(np.array([[0], [1]]), (0, 0), 0.0)
    ev = Evaluator(ConeSum(cone, 1e-12), om)
    rng = SplitMix64(55)
    for _ in range(10):
        M1 = (rng.next_int(-1, 1), rng.next_int(-1, 1))
        N1 = (rng.next_int(-1, 1), rng.next_int(-1, 1))
        M2 = (rng.next_int(-1, 1), rng.next_int(-1, 1))
        N2 = (rng.next_int(-1, 1), rng.next_int(-1, 1))
        two_step = lambda_action(M1, N1, lambda_action(M2, N2, ev, om), om)
        one_step = lambda_action(
            (M1[0] + M2[0], M1[1] + M2[1]), (N1[0] + N2[0], N1[1] + N2[1]), ev, om
        )
        for Z in sample_points(2, 2, rng.next_int(0, 10**6)):
            assert abs(two_step(Z).value - one_step(Z).value) < 1e-10


# ---------------------------------------------------------------------------
# wedge function

WOM = np.diag([-1j, 2j])
WBASIS = SplitBasis.identity(2, 1)


def _wedge_oracle(Z, R=16):
    """Independent double enumeration over the two shell families with
    cancellation (bounded shells, then sum the surviving signed points)."""
    cnt = defaultdict(int)
    for r in range(0, 2 * R + 1):
        for s in range(-R, R + 1):
            cnt[(r - s, s)] += 1
            cnt[(r, s)] -= 1
    vals = []
    for (a, s), c in sorted(cnt.items()):
        if c and max(abs(a), abs(s)) <= R:
            vals.append(c * theta_term(np.array([a, s], dtype=float), Z, WOM))
    return kahan_sum(vals)


def test_wedge_equal_cones_zero():
    from conetheta.lattice import enumerate_wedge

    pts = enumerate_wedge(WBASIS, 1, WOM.imag, 10, transformed_gens=WBASIS.N[:, 1:])
    assert pts == []


def test_wedge_function_matches_oracle():
    f = wedge_function(WBASIS, WOM, tol=1e-12)
    for Z in sample_points(2, 5):
        assert abs(f(Z).value - _wedge_oracle(Z)) < 1e-10


def test_wedge_shear_identity():
    # (shear-direction action - 1) f = plain cone sum - sheared cone sum
    f = wedge_function(WBASIS, WOM, tol=1e-12)
    plain = Evaluator(ConeSum(ConeSpec(np.array([[0], [1]]), (0, 0), 0.0), 1e-12), WOM)
    sheared = Evaluator(ConeSum(ConeSpec(np.array([[-1], [1]]), (0, 0), 0.0), 1e-12), WOM)
    for Z in sample_points(2, 5):
        lhs = lambda_action((0, 0), (1, 0), f, WOM)(Z).value - f(Z).value
        rhs = plain(Z).value - sheared(Z).value
        assert abs(lhs - rhs) < 1e-8


def test_wedge_next_identity():
    f = wedge_function(WBASIS, WOM, tol=1e-12)
    sheared = Evaluator(ConeSum(ConeSpec(np.array([[-1], [1]]), (0, 0), 0.0), 1e-12), WOM)
    for Z in sample_points(2, 5):
        lhs = lambda_action((0, 0), (0, 1), f, WOM)(Z).value - f(Z).value
        assert abs(lhs + sheared(Z).value) < 1e-8


# ---------------------------------------------------------------------------
# cocycle verification

def test_verify_cocycle_classical():
    ev = Evaluator(ConeSum(FULL1, 1e-12), OM1)
    res = verify_cocycle(ev, SplitBasis.identity(1, 0), OM1)
    assert set(res) == {"N_1", "M_1"}
    assert all(r < 1e-9 for r in res.values())


def test_verify_cocycle_point_cone_exact():
    om = np.array([[-1j]])
    ev = Evaluator(ConeSum(ConeSpec(np.zeros((1, 0), dtype=np.int64), (0,), 0.0), 1e-12), om)
    res = verify_cocycle(ev, SplitBasis.identity(1, 1), om)
    assert set(res) == {"M_1"}
    assert res["M_1"] < 1e-12


def test_verify_cocycle_indefinite():
    om = np.diag([-1j, 1j])
    ev = Evaluator(ConeSum(ConeSpec(np.array([[0], [1]]), (0, 0), 0.0), 1e-12), om)
    res = verify_cocycle(ev, SplitBasis.identity(2, 1), om)
    assert set(res) == {"N_2", "M_1", "M_2"}
    assert all(r < 1e-8 for r in res.values())


def test_verify_cocycle_twisted_characteristic():
    om = np.diag([-1j, 1j])
    char = Characteristic((0, Fraction(1, 2)), (1, 2))
    cone = ConeSpec(np.array([[0], [1]]), (0, 0), 0.0).with_extra_shift(char.a)
    ev = Evaluator(ConeSum(cone, 1e-12), om)
    res = verify_cocycle(ev, SplitBasis.identity(2, 1), om, delta=char.delta)
    assert all(r < 1e-8 for r in res.values())


def test_sample_points_deterministic_and_bounded():
    a = sample_points(2, 5)
    b = sample_points(2, 5)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    for Z in a:
        assert np.all(np.abs(Z.real) <= 0.5) and np.all(np.abs(Z.imag) <= 0.3)
