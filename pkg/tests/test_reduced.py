import pytest

from conetheta.errors import WindowOverflow, WindowTooSmall
from conetheta.reduced import (
    CoefficientArray,
    cohomology_ranks,
    partial_sum_preimage,
    shift_delta,
    shift_injectivity_deficit,
)
from conetheta.rng import SplitMix64


def arr(k, w, values):
    return CoefficientArray(k, w, values)


def test_shift_delta_zero():
    assert shift_delta(arr(1, 5, {}), 1).is_zero()


def test_shift_delta_indicator():
    out = shift_delta(arr(1, 5, {(0,): 1}), 1)
    assert out.values == {(1,): 1, (0,): -1}


def test_shift_delta_second_difference():
    a = arr(1, 6, {(0,): 2, (1,): -1})
    twice = shift_delta(shift_delta(a, 1), 1)
    expected = {}
    for pt in range(-1, 5):
        val = a((pt - 2,)) - 2 * a((pt - 1,)) + a((pt,))
        if val:
            expected[(pt,)] = val
    assert twice.values == expected


def test_shift_delta_top_edge_rejected():
    with pytest.raises(WindowOverflow):
        shift_delta(arr(1, 3, {(3,): 1}), 1)


def test_preimage_zero():
    assert partial_sum_preimage(arr(1, 5, {}), 1).is_zero()


def test_preimage_indicator():
    b = partial_sum_preimage(arr(1, 5, {(0,): 1}), 1)
    assert b.values == {(t,): -1 for t in range(0, 6)}
    # delta of b reproduces the indicator inside the window: for K >= -4 the
    # needed inputs are stored (or provably zero), so check directly
    for K in range(-5, 6):
        left = b((K - 1,)) if K - 1 >= -5 else 0
        assert left - b((K,)) == (1 if K == 0 else 0)


def test_preimage_linearity():
    rng = SplitMix64(4)
    for _ in range(50):
        v1 = {(rng.next_int(-3, 3), rng.next_int(-3, 3)): rng.next_int(-2, 2) for _ in range(4)}
        v2 = {(rng.next_int(-3, 3), rng.next_int(-3, 3)): rng.next_int(-2, 2) for _ in range(4)}
        a1, a2 = arr(2, 5, v1), arr(2, 5, v2)
        q = rng.next_int(1, 2)
        lhs = partial_sum_preimage(a1 + a2, q)
        rhs = partial_sum_preimage(a1, q) + partial_sum_preimage(a2, q)
        assert lhs.values == rhs.values


def test_preimage_inverts_delta_on_line_sum_zero_arrays():
    rng = SplitMix64(1717)
    for _ in range(100):
        k = rng.next_int(1, 2)
        q = rng.next_int(1, k)
        seed = {
            tuple(rng.next_int(0, 2) for _ in range(k)): rng.next_int(-3, 3)
            for _ in range(5)
        }
        a = shift_delta(arr(k, 5, seed), q)
        b = partial_sum_preimage(a, q)
        assert shift_delta(b, q).values == a.values


def test_cohomology_ranks_k1():
    assert cohomology_ranks(1, 5) == [0, 1]


def test_cohomology_ranks_k2():
    assert cohomology_ranks(2, 5) == [0, 0, 1]


def test_cohomology_ranks_stability():
    assert cohomology_ranks(1, 6) == [0, 1]
    assert cohomology_ranks(2, 6) == [0, 0, 1]


def test_cohomology_ranks_window_guard():
    with pytest.raises(WindowTooSmall):
        cohomology_ranks(2, 3)


def test_shift_injectivity():
    assert shift_injectivity_deficit(1, 5, 1) == 0
    assert shift_injectivity_deficit(2, 5, 1) == 0
    assert shift_injectivity_deficit(2, 5, 2) == 0


def test_assembled_differentials_compose_to_zero():
    # multiply consecutive sparse differential matrices exactly
    from conetheta.reduced import _differential_rows, component_dimension

    k, w = 2, 5
    d0 = _differential_rows(k, w, 0)
    d1 = _differential_rows(k, w, 1)
    assert len(d0) == component_dimension(k, w, 1)
    # column views: column index -> {row: val}
    d0_cols = [dict() for _ in range(component_dimension(k, w, 0))]
    for r, row in enumerate(d0):
        for c, v in row.items():
            d0_cols[c][r] = v
    d1_cols = [dict() for _ in range(component_dimension(k, w, 1))]
    for r, row in enumerate(d1):
        for c, v in row.items():
            d1_cols[c][r] = v
    for c, col in enumerate(d0_cols):
        acc = {}
        for mid, v in col.items():
            for r2, v2 in d1_cols[mid].items():
                acc[r2] = acc.get(r2, 0) + v * v2
        assert all(val == 0 for val in acc.values()), "d o d != 0 at column %d" % c
