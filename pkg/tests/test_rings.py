import pytest
from hypothesis import given, strategies as st

from oracles import brute_force_unit
from quadsurd.errors import NotRegular
from quadsurd.rings import (
    QuadUnit,
    UnitClass,
    classify_unit,
    fundamental_unit,
    lift_to_D1,
    ring_context,
    rewrite_in_D2,
    unit_mul,
    unit_pow,
    unit_powers,
)

EPS = QuadUnit(785, 28, 1, -1)


@pytest.mark.parametrize(
    "D, Q, q, D1, D2",
    [(157, 45, 15, 785, 7065), (13, 1, 1, 13, 13), (7, 3, 3, 21, 21), (5, 4, 2, 5, 20), (11, 8, 4, 22, 88)],
)
def test_ring_context(D, Q, q, D1, D2):
    ctx = ring_context(D, Q)
    assert (ctx.q, ctx.D1, ctx.D2) == (q, D1, D2)
    assert ctx.D2 == ctx.D1 * (ctx.Q // ctx.q) ** 2


def test_ring_context_propagates_validation():
    from quadsurd.errors import PerfectSquare

    with pytest.raises(PerfectSquare):
        ring_context(4, 1)


@pytest.mark.parametrize(
    "N, r, s, norm",
    [(785, 28, 1, -1), (7065, 4923521, 58576, 1), (6, 5, 2, 1), (21, 55, 12, 1), (2, 1, 1, -1)],
)
def test_fundamental_unit(N, r, s, norm):
    assert fundamental_unit(N) == QuadUnit(N, r, s, norm)


def test_fundamental_unit_brute_force_small():
    assert brute_force_unit(6, 100) == (5, 2, 1)
    assert brute_force_unit(21, 100) == (55, 12, 1)


def test_fundamental_unit_square():
    with pytest.raises(ValueError):
        fundamental_unit(49)


def test_quadunit_validates():
    with pytest.raises(ValueError):
        QuadUnit(785, 28, 2, -1)
    with pytest.raises(ValueError):
        QuadUnit(785, 1, 0, 1)


def test_unit_powers_worked_example():
    e2 = unit_mul(EPS, EPS)
    e3 = unit_mul(e2, EPS)
    e4 = unit_mul(e3, EPS)
    assert (e2.r, e2.s) == (1569, 56)
    assert (e3.r, e3.s) == (87892, 3137)
    assert (e4.r, e4.s, e4.norm) == (4923521, 175728, 1)
    assert unit_pow(EPS, 4) == e4 == unit_powers(EPS, 4)[-1]


def test_unit_mul_mismatch():
    with pytest.raises(ValueError):
        unit_mul(EPS, fundamental_unit(6))


@given(st.integers(2, 300).filter(lambda n: int(n**0.5) ** 2 != n), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_unit_mul_associative_and_multiplicative(N, a, b, c):
    eps = fundamental_unit(N)
    x, y, z = unit_pow(eps, a), unit_pow(eps, b), unit_pow(eps, c)
    assert unit_mul(unit_mul(x, y), z) == unit_mul(x, unit_mul(y, z))
    assert unit_mul(x, y).norm == x.norm * y.norm
    assert unit_mul(x, y) == unit_pow(eps, a + b)


def test_classify_worked_example():
    ctx = ring_context(157, 45)
    assert classify_unit(ctx, EPS) is UnitClass.IRREGULAR
    assert classify_unit(ctx, unit_pow(EPS, 4)) is UnitClass.REGULAR
    assert classify_unit(ctx, unit_pow(EPS, 2)) is UnitClass.IRREGULAR


def test_classify_Q_one_always_regular():
    ctx = ring_context(13, 1)
    for u in unit_powers(fundamental_unit(13), 5):
        assert classify_unit(ctx, u) is UnitClass.REGULAR


def test_classify_wrong_ring():
    with pytest.raises(ValueError):
        classify_unit(ring_context(157, 45), fundamental_unit(6))


def test_rewrite_in_D2():
    ctx = ring_context(157, 45)
    v = rewrite_in_D2(ctx, unit_pow(EPS, 4))
    assert v == QuadUnit(7065, 4923521, 58576, 1)
    assert lift_to_D1(ctx, v) == unit_pow(EPS, 4)
    # same real number: s*sqrt(D1) == s'*sqrt(D2)  <=>  s*q == s'*Q
    assert 175728 * 15 == v.s * 45 == 2635920
    with pytest.raises(NotRegular):
        rewrite_in_D2(ctx, EPS)


def test_rewrite_identity_cases():
    ctx = ring_context(13, 1)
    u = fundamental_unit(13)
    assert rewrite_in_D2(ctx, u) == u
    ctx = ring_context(7, 3)
    u = fundamental_unit(21)
    assert u == QuadUnit(21, 55, 12, 1)
    assert rewrite_in_D2(ctx, u) == u
