"""Executable checks linking units of Z[sqrt(D1)], Z[sqrt(D2)] and convergents of sqrt(D/Q).

Every ``verify_*`` function recomputes its claim with exact integers and
raises :class:`TheoremViolation` carrying (D, Q, k, t) on any mismatch.
:func:`sweep` runs all of them over every admissible (D, Q) up to a bound.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable

from .arith import factorize, is_square, isqrt, small_divisors, valuation
from .cfrac import (
    ConvergentStream,
    PeriodicCF,
    RationalCF,
    Surd,
    check_expansion,
    expand,
    rational_cf,
    surd_new,
)
from .errors import (
    BadDivisor,
    InternalInvariantViolation,
    NotRegularIndex,
    SurdError,
    TheoremViolation,
)
from .rings import (
    QuadUnit,
    RingContext,
    UnitClass,
    classify_unit,
    fundamental_unit,
    lift_to_D1,
    ring_context,
    unit_mul,
    unit_powers,
)


@lru_cache(maxsize=8192)
def minimal_expansion(surd: Surd) -> PeriodicCF:
    return expand(surd)


def _stream(ctx: RingContext, conv: ConvergentStream | None) -> ConvergentStream:
    if conv is None:
        return ConvergentStream(ctx.surd)
    if conv.surd != ctx.surd:
        raise ValueError(f"stream is for {conv.surd}, context is {ctx.surd}")
    return conv


def _fail(ctx: RingContext, msg: str, k=None, t=None):
    where = f"D={ctx.D} Q={ctx.Q}"
    if k is not None:
        where += f" k={k}"
    if t is not None:
        where += f" t={t}"
    raise TheoremViolation(f"[{where}] {msg}")


# --- units <-> convergents -------------------------------------------------


@dataclass(frozen=True)
class UnitConvergentLink:
    """A unit r + s*sqrt(D1) matched to the convergent (r/t, s*q/t) at index k."""

    unit: QuadUnit
    t: int
    k: int
    Qk1: int


def link_unit(
    ctx: RingContext,
    u: QuadUnit,
    conv: ConvergentStream | None = None,
    horizon: int | None = None,
) -> UnitConvergentLink:
    if u.N != ctx.D1:
        raise ValueError(f"{u} is not a unit of Z[sqrt({ctx.D1})]")
    conv = _stream(ctx, conv)
    t = gcd(u.r, ctx.q)
    r, s = u.r // t, u.s * ctx.q
    if s % t:
        _fail(ctx, f"t={t} does not divide s*q for unit {u}", t=t)
    s //= t
    k = conv.index_of_numerator(r, horizon)
    if k is None:
        _fail(ctx, f"no convergent with numerator {r} (unit {u})", t=t)
    c = conv[k]
    if c.s != s:
        _fail(ctx, f"denominator {c.s} != s*q/t = {s} for unit {u}", k=k, t=t)
    if ctx.Q % (t * t) or c.Qnext * t * t != ctx.Q:
        _fail(ctx, f"Q_(k+1)={c.Qnext} but Q/t^2 = {Fraction(ctx.Q, t * t)}", k=k, t=t)
    return UnitConvergentLink(u, t, k, c.Qnext)


def verify_theorem1_shift(
    ctx: RingContext, link: UnitConvergentLink, conv: ConvergentStream | None = None
) -> UnitConvergentLink:
    """Shift a link by one period and check it lands on another unit with the same t."""
    conv = _stream(ctx, conv)
    L = len(minimal_expansion(ctx.surd).period)
    k2 = link.k + L
    c = conv[k2]
    t = link.t
    r2, st = c.r * t, c.s * t
    if st % ctx.q:
        _fail(ctx, f"q={ctx.q} does not divide s_(k+m+1)*t={st}", k=k2, t=t)
    s2 = st // ctx.q
    norm = r2 * r2 - s2 * s2 * ctx.D1
    if norm not in (1, -1):
        _fail(ctx, f"shifted element {r2}+{s2}*sqrt({ctx.D1}) has norm {norm}", k=k2, t=t)
    if gcd(r2, ctx.q) != t:
        _fail(ctx, f"gcd(r', q) = {gcd(r2, ctx.q)} != t", k=k2, t=t)
    return UnitConvergentLink(QuadUnit(ctx.D1, r2, s2, norm), t, k2, c.Qnext)


def _end_of_period(k: int, L: int) -> bool:
    return (k + 1) % L == 0


def verify_theorem2(
    ctx: RingContext, l_max: int = 2, conv: ConvergentStream | None = None
) -> list[tuple[int, QuadUnit]]:
    """Units of Z[sqrt(D2)] sit exactly at the end-of-period convergents of sqrt(D/Q)."""
    conv = _stream(ctx, conv)
    L = len(minimal_expansion(ctx.surd).period)
    Q = ctx.Q
    eta = fundamental_unit(ctx.D2)
    power, j = eta, 1
    out = []
    for l in range(1, l_max + 1):
        k = l * L - 1
        c = conv[k]
        if c.s % Q:
            _fail(ctx, f"Q does not divide s_k={c.s}", k=k)
        if c.Qnext != Q or conv.Pnext[k] % Q:
            _fail(ctx, f"x_(k+1) != x_0 + C: P={conv.Pnext[k]}, Q_(k+1)={c.Qnext}", k=k)
        norm = Q * c.r * c.r - ctx.D * c.s * c.s
        if norm not in (Q, -Q):
            _fail(ctx, f"Q*r^2 - D*s^2 = {norm}, expected +-Q", k=k)
        unit = QuadUnit(ctx.D2, c.r, c.s // Q, norm // Q)
        while power.r < unit.r:
            power, j = unit_mul(power, eta), j + 1
        if power != unit:
            _fail(ctx, f"{unit} is not a power of the fundamental unit {eta}", k=k)
        if j != l:
            _fail(ctx, f"{unit} is eta^{j}, expected eta^{l}", k=k)
        out.append((k, unit))
    for k in range(l_max * L):
        if _end_of_period(k, L):
            continue
        if conv.Qnext[k] == Q and conv.Pnext[k] % Q == 0:
            _fail(ctx, "x_(k+1) = x_0 + C inside a period", k=k)
        if conv.Qnext[k] == Q and conv.s[k] % Q == 0:
            _fail(ctx, "a unit of Z[sqrt(D2)] away from the end of a period", k=k)
    return out


def verify_corollary1(
    ctx: RingContext, l_max: int = 2, conv: ConvergentStream | None = None
) -> dict:
    """End-of-period convergents of sqrt(D/Q) and of sqrt(D2) agree (denominators up to a factor Q)."""
    conv = _stream(ctx, conv)
    L = len(minimal_expansion(ctx.surd).period)
    surd2 = Surd(ctx.D2, 1)
    L2 = len(minimal_expansion(surd2).period)
    conv2 = ConvergentStream(surd2)
    pairs = []
    for l in range(1, l_max + 1):
        k, k2 = l * L - 1, l * L2 - 1
        a, b = conv[k], conv2[k2]
        if a.r != b.r or a.s != b.s * ctx.Q:
            _fail(ctx, f"r_{k}/s_{k}={a.r}/{a.s} vs r'_{k2}/s'_{k2}={b.r}/{b.s}", k=k)
        pairs.append((k, k2, b.r, b.s))
    return {"period": L, "period_D2": L2, "pairs": pairs}


@dataclass(frozen=True)
class LadderRung:
    power: int
    link: UnitConvergentLink
    cls: UnitClass


def eta_exponent(ctx: RingContext) -> int:
    """j with eps**j = eta, eps and eta the fundamental units of Z[sqrt(D1)] and Z[sqrt(D2)]."""
    eps = fundamental_unit(ctx.D1)
    eta = lift_to_D1(ctx, fundamental_unit(ctx.D2))
    power, j = eps, 1
    while power.r < eta.r:
        power, j = unit_mul(power, eps), j + 1
    if power != eta:
        _fail(ctx, f"eta={eta} is not a power of eps={eps}")
    return j


def unit_ladder(
    ctx: RingContext, levels: int = 4, conv: ConvergentStream | None = None
) -> list[LadderRung]:
    """Link eps, eps^2, ..., eps^levels to convergents and classify them.

    Checks that the linked indices increase, that eps^i is regular exactly
    when j | i (eps^j = eta), that eta^l sits at index l(m+1)-1 with t = 1,
    and that the irregular units below eta link to indices below m.
    """
    conv = _stream(ctx, conv)
    L = len(minimal_expansion(ctx.surd).period)
    j = eta_exponent(ctx)
    if ctx.q == ctx.Q and j != 1:
        _fail(ctx, f"q = Q (so D1 = D2) but eps^{j} = eta")
    rungs = []
    last_k = -1
    for i, u in enumerate(unit_powers(fundamental_unit(ctx.D1), levels), start=1):
        link = link_unit(ctx, u, conv)
        cls = classify_unit(ctx, u)
        if link.k <= last_k:
            _fail(ctx, f"eps^{i} links to index {link.k} <= previous {last_k}", k=link.k)
        last_k = link.k
        if (cls is UnitClass.REGULAR) != (i % j == 0):
            _fail(ctx, f"eps^{i} classified {cls} but eta = eps^{j}", k=link.k)
        if cls is UnitClass.REGULAR:
            if link.k != (i // j) * L - 1 or link.t != 1:
                _fail(ctx, f"regular eps^{i} at index {link.k}, t={link.t}", k=link.k)
        elif i < j and link.k >= L - 1:
            _fail(ctx, f"irregular eps^{i} below eta links past m", k=link.k)
        rungs.append(LadderRung(i, link, cls))
    return rungs


# --- reading expansions off rationals ---------------------------------------


@dataclass(frozen=True)
class Theorem3Result:
    k: int
    t: int
    rational_terms: RationalCF
    predicted: PeriodicCF
    computed: PeriodicCF
    Dprime: int
    Qprime: int
    a: int


@lru_cache(maxsize=4096)
def _factor_Q(Q: int):
    return factorize(Q)


def valuation_exponents(Q: int, t: int, s_over_t: int, Dprime: int, Qprime: int) -> dict[int, int]:
    """Per prime p | Q, the exponent of p in (t^2 D'/Q') / (D'Q').

    The case formulas in terms of e = v_p(Q), f = v_p(t), g = v_p(s_k/t) are
    checked against the actual valuations of D' and Q'.
    """
    out = {}
    for p, e in _factor_Q(Q):
        f = valuation(t, p)
        g = valuation(s_over_t, p)
        if f + g < e:
            raise InternalInvariantViolation(f"p={p}: f+g={f + g} < e={e}")
        if e <= 2 * g:
            vD, vQ = 2 * g - e, 0
            expected = 2 * f
        else:
            vD, vQ = 0, e - 2 * g
            expected = 2 * f + 4 * g - 2 * e
        if valuation(Dprime, p) != vD or valuation(Qprime, p) != vQ:
            raise InternalInvariantViolation(f"p={p}: valuations of D', Q' disagree with the case formula")
        if valuation(Dprime * Qprime, p) != abs(2 * g - e):
            raise InternalInvariantViolation(f"p={p}: v_p(D'Q') != |2g - e|")
        got = 2 * f - 2 * vQ  # v_p(t^2 / Q'^2)
        if got != expected:
            raise InternalInvariantViolation(f"p={p}: exponent {got} != case value {expected}")
        out[p] = got
    return out


def verify_theorem3(
    ctx: RingContext,
    l: int | None = 1,
    t: int = 1,
    conv: ConvergentStream | None = None,
    k: int | None = None,
) -> Theorem3Result:
    """Read the expansion of (s_k/t)*sqrt(D/Q) from the rational r_k/t and check it.

    Pass either the period count ``l`` or an explicit index ``k``.
    """
    conv = _stream(ctx, conv)
    L = len(minimal_expansion(ctx.surd).period)
    if k is None:
        if l is None or l < 1:
            raise ValueError("need l >= 1 or an explicit k")
        k = l * L - 1
    elif not _end_of_period(k, L):
        raise NotRegularIndex(f"k={k} is not of the form l*{L}-1")
    c = conv[k]
    if t < 1 or c.s % t:
        raise BadDivisor(f"t={t} does not divide s_{k}={c.s}")
    D, Q = ctx.D, ctx.Q

    sign = Q * c.r * c.r - D * c.s * c.s
    if sign != (Q if k % 2 else -Q):
        _fail(ctx, f"sign of Q r_k^2 - D s_k^2 = {sign} does not match parity of k", k=k, t=t)

    rcf = rational_cf(c.r, t, "odd" if k % 2 else "even")
    value = rcf.value()
    if value.numerator * t != value.denominator * c.r or rcf.n % 2 != k % 2:
        _fail(ctx, f"rational expansion {rcf} of r_k/t is wrong", k=k, t=t)
    cs = rcf.terms
    predicted = PeriodicCF(cs[0], tuple(cs[1:]) + (2 * cs[0],), minimal=False)

    s_over_t = c.s // t
    g = gcd(s_over_t, Q)
    g = gcd(g * g, Q)  # gcd(D, Q) = 1, so this is gcd((s/t)^2 D, Q)
    Dp, Qp = s_over_t * s_over_t * D // g, Q // g
    if Qp * c.r * c.r - t * t * Dp != (Qp if k % 2 else -Qp):
        _fail(ctx, "r_k^2 - t^2 D'/Q' is not (-1)^(k+1)", k=k, t=t)
    if t % Qp:
        _fail(ctx, f"Q'={Qp} does not divide t", k=k, t=t)
    a = t // Qp
    exps = valuation_exponents(Q, t, s_over_t, Dp, Qp)
    if any(v < 0 or v % 2 for v in exps.values()):
        _fail(ctx, f"valuation exponents {exps} not all even and nonnegative", k=k, t=t)
    # t*sqrt(D'/Q') = a*sqrt(D'Q')  <=>  t^2 D' / Q' = a^2 D' Q'
    if t * t * Dp != a * a * Dp * Qp * Qp:
        _fail(ctx, "t*sqrt(D'/Q') != a*sqrt(D'Q')", k=k, t=t)

    computed = expand(surd_new(Dp, Qp))
    reps, rem = divmod(len(predicted.period), len(computed.period))
    if computed.b0 != predicted.b0 or rem or computed.period * reps != predicted.period:
        _fail(ctx, f"predicted {predicted} but sqrt({Dp}/{Qp}) = {computed}", k=k, t=t)
    predicted = PeriodicCF(predicted.b0, predicted.period, minimal=reps == 1)
    return Theorem3Result(k, t, rcf, predicted, computed, Dp, Qp, a)


# --- exhaustive sweep -------------------------------------------------------


CHECKS = ("expansion", "ladder", "invariants", "t1", "t2", "c1", "t3")


@dataclass(frozen=True)
class SweepRow:
    D: int
    Q: int
    check: str
    status: str
    detail: str = ""

    def to_json(self) -> str:
        obj = {"D": str(self.D), "Q": str(self.Q), "check": self.check, "status": self.status}
        if self.detail:
            obj["detail"] = self.detail
        return json.dumps(obj)


@dataclass
class SweepReport:
    rows: list[SweepRow] = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)
    elapsed: float = 0.0

    @property
    def violations(self) -> list[SweepRow]:
        return [r for r in self.rows if r.status != "pass"]

    @property
    def ok(self) -> bool:
        return not self.violations

    def sorted_rows(self) -> list[SweepRow]:
        order = {c: i for i, c in enumerate(CHECKS)}
        return sorted(self.rows, key=lambda r: (r.D, r.Q, order.get(r.check, 99)))

    def to_jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.sorted_rows())

    def summary(self) -> str:
        s = self.stats
        lines = [
            f"surds checked:        {s['surds']}",
            f"units checked:        {s['units']}",
            f"irregular units:      {s['irregular_units']}",
            f"theorem-3 instances:  {s['t3_instances']}",
            f"max period length:    {s['max_period']}",
            f"eps norm -1:          {s['eps_norm_minus']}",
            f"eta norm -1:          {s['eta_norm_minus']}",
            f"eps norm -1, eta +1:  {s['eps_minus_eta_plus']}",
            f"Q_(k+1)=Q/t^2 (k<m):  {s['t1_converse_candidates']} "
            f"({s['t1_converse_nonunits']} not from a unit)",
            f"irregular with q^2=Q: {s['irregular_q2_eq_Q']}",
            f"violations:           {len(self.violations)}",
        ]
        return "\n".join(lines)


def admissible_pairs(D_max: int, Q_policy="all", D_min: int = 2) -> Iterable[tuple[int, int]]:
    """(D, Q) with D <= D_max, Q < D, gcd(D, Q) = 1 and D*Q not a square.

    ``Q_policy`` is "all", "one" (Q = 1 only) or an iterable of allowed Q.
    """
    allowed = None
    if Q_policy == "one":
        allowed = {1}
    elif Q_policy != "all":
        allowed = set(Q_policy)
    for D in range(max(D_min, 2), D_max + 1):
        qs = range(1, D) if allowed is None else sorted(q for q in allowed if 1 <= q < D)
        for Q in qs:
            if gcd(D, Q) == 1 and not is_square(D * Q):
                yield D, Q


def _t1_converse(ctx: RingContext, conv: ConvergentStream, L: int, stats: Counter) -> None:
    # Indices inside the first period with Q_(k+1) * t^2 = Q; record how many come from units.
    for k in range(L - 1):
        Qn = conv.Qnext[k]
        if ctx.Q % Qn or not is_square(ctx.Q // Qn):
            continue
        stats["t1_converse_candidates"] += 1
        t = isqrt(ctx.Q // Qn)
        r, st = conv.r[k] * t, conv.s[k] * t
        if st % ctx.q or r * r - (st // ctx.q) ** 2 * ctx.D1 not in (1, -1):
            stats["t1_converse_nonunits"] += 1


def check_pair(
    D: int, Q: int, l_max: int = 2, levels: int = 4, divisor_cap: int = 64
) -> tuple[list[SweepRow], Counter]:
    """Run every verifier on one (D, Q); never raises for theorem or invariant failures."""
    rows: list[SweepRow] = []
    stats: Counter = Counter()
    try:
        ctx = ring_context(D, Q)
    except SurdError as exc:
        return [SweepRow(D, Q, "input", "error", str(exc))], stats
    conv = ConvergentStream(ctx.surd)
    stats["surds"] += 1

    def run(name, fn):
        try:
            result = fn()
        except (TheoremViolation, InternalInvariantViolation, ValueError) as exc:
            rows.append(SweepRow(D, Q, name, "fail", f"{type(exc).__name__}: {exc}"))
            return None
        rows.append(SweepRow(D, Q, name, "pass"))
        return result

    cf = run("expansion", lambda: minimal_expansion(ctx.surd))
    if cf is None:
        return rows, stats
    L = len(cf.period)
    stats["max_period"] = L

    rungs = run("ladder", lambda: unit_ladder(ctx, levels, conv))
    horizon = (rungs[-1].link.k if rungs else levels * L) + L
    run("invariants", lambda: check_expansion(ctx.surd, cf, conv, max(horizon, l_max * L)))
    if rungs:
        stats["units"] += len(rungs)
        irregular = sum(r.cls is UnitClass.IRREGULAR for r in rungs)
        stats["irregular_units"] += irregular
        # surds where irregular units exist although q^2 = Q (so q != Q)
        stats["irregular_q2_eq_Q"] += bool(irregular) and ctx.q * ctx.q == ctx.Q

        def t1():
            for rung in rungs:
                verify_theorem1_shift(ctx, rung.link, conv)

        run("t1", t1)
    run("t2", lambda: verify_theorem2(ctx, l_max, conv))
    run("c1", lambda: verify_corollary1(ctx, l_max, conv))

    def t3():
        sk = conv[L - 1].s
        for t in small_divisors(sk, divisor_cap):
            verify_theorem3(ctx, 1, t, conv)
            stats["t3_instances"] += 1

    run("t3", t3)
    _t1_converse(ctx, conv, L, stats)
    eps, eta = fundamental_unit(ctx.D1), fundamental_unit(ctx.D2)
    stats["eps_norm_minus"] += eps.norm == -1
    stats["eta_norm_minus"] += eta.norm == -1
    stats["eps_minus_eta_plus"] += eps.norm == -1 and eta.norm == 1
    return rows, stats


def _check_many(args) -> tuple[list[SweepRow], Counter]:
    pairs, l_max, levels, divisor_cap = args
    rows, stats = [], Counter()
    for D, Q in pairs:
        r, s = check_pair(D, Q, l_max, levels, divisor_cap)
        rows.extend(r)
        _merge(stats, s)
    return rows, stats


def _merge(into: Counter, other: Counter) -> None:
    for key, val in other.items():
        if key == "max_period":
            into[key] = max(into[key], val)
        else:
            into[key] += val


def sweep(
    D_max: int = 500,
    Q_policy="all",
    l_max: int = 2,
    report_sink: Callable[[SweepRow], None] | None = None,
    jobs: int = 1,
    levels: int = 4,
    divisor_cap: int = 64,
    D_min: int = 2,
) -> SweepReport:
    """Verify every check on all admissible (D, Q) with D_min <= D <= D_max.

    With ``jobs > 1`` pairs are grouped by D and checked in worker processes;
    rows reach ``report_sink`` in completion order.
    """
    start = time.perf_counter()
    report = SweepReport()

    def absorb(rows, stats):
        report.rows.extend(rows)
        _merge(report.stats, stats)
        if report_sink is not None:
            for row in rows:
                report_sink(row)

    pairs = list(admissible_pairs(D_max, Q_policy, D_min))
    if jobs <= 1:
        for D, Q in pairs:
            absorb(*check_pair(D, Q, l_max, levels, divisor_cap))
    else:
        chunks: dict[int, list] = {}
        for D, Q in pairs:
            chunks.setdefault(D, []).append((D, Q))
        tasks = [(c, l_max, levels, divisor_cap) for c in chunks.values()]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rows, stats in pool.map(_check_many, tasks):
                absorb(rows, stats)
    report.elapsed = time.perf_counter() - start
    return report
