import json
from collections import Counter

import pytest

from quadsurd.cfrac import ConvergentStream, PeriodicCF, expand, surd_new
from quadsurd.errors import BadDivisor, NotRegularIndex, TheoremViolation
from quadsurd.rings import QuadUnit, UnitClass, fundamental_unit, ring_context, unit_pow
from quadsurd.theorems import (
    SweepRow,
    admissible_pairs,
    check_pair,
    eta_exponent,
    link_unit,
    sweep,
    unit_ladder,
    valuation_exponents,
    verify_corollary1,
    verify_theorem1_shift,
    verify_theorem2,
    verify_theorem3,
)

CTX = ring_context(157, 45)
EPS = fundamental_unit(785)


@pytest.mark.parametrize("power, t, k", [(1, 1, 4), (2, 3, 7), (3, 1, 10), (4, 1, 15)])
def test_link_worked_example(power, t, k):
    link = link_unit(CTX, unit_pow(EPS, power))
    assert (link.t, link.k) == (t, k)
    assert link.Qk1 * t * t == 45


def test_link_eps2_convergent_values():
    conv = ConvergentStream(CTX.surd)
    link = link_unit(CTX, unit_pow(EPS, 2), conv)
    assert (conv[link.k].r, conv[link.k].s) == (523, 280)
    assert (conv[10].r, conv[10].s) == (87892, 47055)


def test_link_rejects_non_matching_horizon():
    with pytest.raises(TheoremViolation):
        link_unit(CTX, unit_pow(EPS, 4), horizon=10)


@pytest.mark.parametrize("power, k_after", [(1, 20), (2, 23), (3, 26), (4, 31)])
def test_theorem1_shift_worked_example(power, k_after):
    link = link_unit(CTX, unit_pow(EPS, power))
    shifted = verify_theorem1_shift(CTX, link)
    assert shifted.k == k_after and shifted.t == link.t
    assert shifted.unit == unit_pow(EPS, power + 4)


def test_theorem1_shift_hand_case():
    ctx = ring_context(3, 2)
    link = link_unit(ctx, fundamental_unit(6))
    assert (link.k, link.t) == (1, 1)
    assert verify_theorem1_shift(ctx, link).k == 3


def test_theorem2_worked_example():
    res = verify_theorem2(CTX, 2)
    assert res[0] == (15, QuadUnit(7065, 4923521, 58576, 1))
    assert res[1][0] == 31


def test_theorem2_hand_and_classical():
    assert verify_theorem2(ring_context(3, 2), 1) == [(1, QuadUnit(6, 5, 2, 1))]
    ctx = ring_context(13, 1)
    m = expand(surd_new(13, 1)).m
    assert verify_theorem2(ctx, 1) == [(m, fundamental_unit(13))]


def test_theorem2_converse_in_worked_example():
    # k=4 and k=10 have Q_(k+1) = Q yet are not units of Z[sqrt(D2)]
    conv = ConvergentStream(CTX.surd)
    verify_theorem2(CTX, 1, conv)
    assert conv.Qnext[4] == conv.Qnext[10] == 45
    assert conv.s[4] % 45 and conv.s[10] % 45


def test_corollary1_worked_example():
    res = verify_corollary1(CTX, 1)
    assert (res["period"], res["period_D2"]) == (16, 8)
    assert res["pairs"] == [(15, 7, 4923521, 58576)]
    assert 58576 * 45 == 2635920


def test_corollary1_hand_case():
    res = verify_corollary1(ring_context(3, 2), 1)
    assert res["pairs"] == [(1, 1, 5, 2)]


def test_unit_ladder_worked_example():
    rungs = unit_ladder(CTX, 4)
    assert [r.link.k for r in rungs] == [4, 7, 10, 15]
    assert [r.cls for r in rungs] == [UnitClass.IRREGULAR] * 3 + [UnitClass.REGULAR]
    assert eta_exponent(CTX) == 4


def test_unit_ladder_two_periods():
    rungs = unit_ladder(CTX, 8)
    assert [r.link.k for r in rungs] == [4, 7, 10, 15, 20, 23, 26, 31]
    assert [r.link.t for r in rungs] == [1, 3, 1, 1, 1, 3, 1, 1]


def test_unit_ladder_hand_case():
    rungs = unit_ladder(ring_context(3, 2), 2)
    assert [r.link.k for r in rungs] == [1, 3]
    assert all(r.cls is UnitClass.REGULAR for r in rungs)


def test_irregular_units_with_square_Q():
    # q^2 = Q does not rule out irregular units: 2 + sqrt 5 is not in Z[2 sqrt 5]
    ctx = ring_context(5, 4)
    assert ctx.q**2 == ctx.Q
    rungs = unit_ladder(ctx, 2)
    assert [r.cls for r in rungs] == [UnitClass.IRREGULAR, UnitClass.REGULAR]


def test_theorem3_worked_example():
    res = verify_theorem3(CTX, 1, 1008)
    assert res.k == 15
    assert res.rational_terms.terms == (4884, 2, 4, 12, 4, 2)
    assert res.predicted == PeriodicCF(4884, (2, 4, 12, 4, 2, 9768), minimal=True)
    assert res.computed.period == (2, 4, 12, 4, 2, 9768)
    # (s_15/t) sqrt(157/45) = 523 sqrt(785) / 3  =>  D'/Q' = 523^2 * 785 / 9
    assert (res.Dprime, res.Qprime, res.a) == (523**2 * 785, 9, 112)


def test_theorem3_t_equals_s():
    res = verify_theorem3(CTX, 1, 2635920)
    assert res.computed == expand(CTX.surd)
    assert (res.Dprime, res.Qprime) == (157, 45)


def test_theorem3_hand_case():
    res = verify_theorem3(ring_context(3, 2), 1, 1)
    assert res.rational_terms.terms == (4, 1)
    assert res.predicted.b0 == 4 and res.predicted.period == (1, 8)
    assert (res.Dprime, res.Qprime) == (24, 1)
    assert res.computed == expand(surd_new(24, 1))


def test_theorem3_non_minimal_prediction_accepted():
    # r_31/t with t=1: predicted period may be a repetition of the minimal one
    for t in (1, 3, 5, 45):
        res = verify_theorem3(CTX, 2, t)
        assert len(res.predicted.period) % len(res.computed.period) == 0


def test_theorem3_errors():
    with pytest.raises(BadDivisor):
        verify_theorem3(CTX, 1, 11)
    with pytest.raises(NotRegularIndex):
        verify_theorem3(CTX, None, 1, k=7)
    assert verify_theorem3(CTX, None, 1008, k=15).k == 15


def test_valuation_exponents_worked_example():
    # Q = 45, t = 1008 = 2^4 3^2 7, s/t = 2615 = 5 * 523
    exps = valuation_exponents(45, 1008, 2615, 523**2 * 785, 9)
    assert exps == {3: 0, 5: 0}
    exps = valuation_exponents(45, 45, 2635920 // 45, *_reduced(2635920 // 45))
    assert all(v >= 0 and v % 2 == 0 for v in exps.values())


def _reduced(s_over_t):
    from fractions import Fraction

    f = Fraction(s_over_t**2 * 157, 45)
    return f.numerator, f.denominator


def test_admissible_pairs():
    assert list(admissible_pairs(2)) == [(2, 1)]
    pairs = list(admissible_pairs(10, "one"))
    assert pairs == [(D, 1) for D in (2, 3, 5, 6, 7, 8, 10)]
    assert (157, 45) in set(admissible_pairs(157))
    assert all(Q == 3 for _, Q in admissible_pairs(20, [3]))


def test_check_pair_worked_example():
    rows, stats = check_pair(157, 45)
    assert {r.check for r in rows} == {"expansion", "ladder", "invariants", "t1", "t2", "c1", "t3"}
    assert all(r.status == "pass" for r in rows)
    assert stats["irregular_units"] == 3 and stats["units"] == 4


def test_sweep_small_classical():
    report = sweep(10, "one")
    assert report.ok and report.stats["surds"] == 7


def test_sweep_dmax_2():
    report = sweep(2)
    assert report.ok and report.stats["surds"] == 1


def test_sweep_sink_and_jsonl():
    seen = []
    report = sweep(12, report_sink=seen.append)
    assert report.ok
    assert len(seen) == len(report.rows)
    lines = report.to_jsonl().splitlines()
    assert len(lines) == len(report.rows)
    first = json.loads(lines[0])
    assert set(first) >= {"D", "Q", "check", "status"}
    assert int(first["D"]) == 2


def test_sweep_reports_violations():
    report = sweep(5)
    report.rows.append(SweepRow(5, 1, "t1", "fail", "injected"))
    assert not report.ok and len(report.violations) == 1
    assert "violations:           1" in report.summary()


def test_sweep_parallel_matches_serial():
    a = sweep(25)
    b = sweep(25, jobs=2)
    assert a.sorted_rows() == b.sorted_rows()
    assert a.stats == b.stats


def test_sweep_through_157_includes_worked_example():
    report = sweep(157, D_min=157)
    assert report.ok
    assert any(r.D == 157 and r.Q == 45 for r in report.rows)
    assert report.stats["irregular_units"] >= 3
