"""Continued fractions of sqrt(D/Q) and of rationals.

The complete quotients of x0 = sqrt(D/Q) are written x_k = (sqrt(D2) + P_k) / Q_k
with D2 = D*Q, P_0 = 0 and Q_0 = Q.  Each step of the expansion is

    b_k     = floor((P_k + isqrt(D2)) / Q_k)
    P_{k+1} = b_k * Q_k - P_k
    Q_{k+1} = (D2 - P_{k+1}**2) / Q_k

and the convergents r_k/s_k satisfy Q*r_k**2 - D*s_k**2 = (-1)**(k+1) * Q_{k+1}.
"""

from __future__ import annotations

import os
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .arith import is_square, isqrt
from .errors import (
    InternalInvariantViolation,
    NotCoprime,
    NotGreaterThanOne,
    PerfectSquare,
    PeriodNotFound,
)

MAX_ITER_ENV = "SURD_MAX_ITER"


@dataclass(frozen=True)
class Surd:
    """The quadratic irrational sqrt(D/Q). Build it with :func:`surd_new`."""

    D: int
    Q: int

    @property
    def D2(self) -> int:
        return self.D * self.Q

    def __str__(self) -> str:
        return f"sqrt({self.D}/{self.Q})" if self.Q != 1 else f"sqrt({self.D})"


def surd_new(D: int, Q: int) -> Surd:
    if D < 1 or Q < 1:
        raise ValueError(f"D and Q must be positive, got D={D}, Q={Q}")
    if gcd(D, Q) != 1:
        raise NotCoprime(f"gcd({D}, {Q}) = {gcd(D, Q)} != 1")
    if Q >= D:
        raise NotGreaterThanOne(f"D/Q = {D}/{Q} is not > 1")
    if is_square(D * Q):
        raise PerfectSquare(f"D/Q = {D}/{Q} is a square")
    return Surd(D, Q)


@dataclass(frozen=True)
class QuotientState:
    P: int
    Qk: int
    k: int = 0


def initial_state(surd: Surd) -> QuotientState:
    return QuotientState(0, surd.Q, 0)


def _advance(P: int, Qk: int, D2: int, root: int) -> tuple[int, int, int]:
    b = (P + root) // Qk
    P1 = b * Qk - P
    Q1, rem = divmod(D2 - P1 * P1, Qk)
    if rem or Q1 <= 0:
        raise InternalInvariantViolation(
            f"bad complete quotient after P={P}, Q={Qk} (D2={D2}): "
            f"next Q = ({D2} - {P1}^2)/{Qk}"
        )
    return b, P1, Q1


def step(state: QuotientState, surd: Surd) -> tuple[int, QuotientState]:
    """One step of the complete-quotient recurrence; returns (b_k, state_{k+1})."""
    if state.Qk <= 0 or (surd.D2 - state.P * state.P) % state.Qk:
        raise InternalInvariantViolation(f"invalid state {state} for {surd}")
    b, P1, Q1 = _advance(state.P, state.Qk, surd.D2, isqrt(surd.D2))
    return b, QuotientState(P1, Q1, state.k + 1)


def iter_quotients(surd: Surd) -> Iterator[tuple[int, int, int]]:
    """Yield (b_k, P_{k+1}, Q_{k+1}) for k = 0, 1, 2, ..."""
    D2 = surd.D2
    root = isqrt(D2)
    P, Qk = 0, surd.Q
    while True:
        b, P, Qk = _advance(P, Qk, D2, root)
        yield b, P, Qk


@dataclass(frozen=True)
class PeriodicCF:
    """[b0, {period}] where the period word ends in 2*b0 and has length m + 1."""

    b0: int
    period: tuple[int, ...]
    minimal: bool = True

    @property
    def m(self) -> int:
        return len(self.period) - 1

    def term(self, k: int) -> int:
        if k == 0:
            return self.b0
        return self.period[(k - 1) % len(self.period)]

    def terms(self, count: int) -> list[int]:
        return [self.term(k) for k in range(count)]

    def __str__(self) -> str:
        return f"[{self.b0},{{{','.join(map(str, self.period))}}}]"


def default_max_iter(D2: int) -> int:
    env = os.environ.get(MAX_ITER_ENV)
    if env:
        return int(env)
    return 10 * (isqrt(D2) + 1)


def expand(surd: Surd, minimal: bool = True, max_iter: int | None = None) -> PeriodicCF:
    """Periodic expansion of sqrt(D/Q).

    The period is found as the first return of the state (P_k, Q_k) to
    (P_1, Q_1).  With ``minimal=False`` the minimal period word is written
    out twice, which is still an expansion of the same shape.
    """
    D2 = surd.D2
    root = isqrt(D2)
    cap = default_max_iter(D2) if max_iter is None else max_iter
    b0 = root // surd.Q
    P1 = b0 * surd.Q
    Q1 = (D2 - P1 * P1) // surd.Q
    P, Qk = P1, Q1
    period = []
    for _ in range(cap):
        b = (P + root) // Qk
        P = b * Qk - P
        Qk, rem = divmod(D2 - P * P, Qk)
        if rem or not (0 <= P <= root and 0 < Qk <= 2 * root + 1):
            raise InternalInvariantViolation(f"state (P={P}, Q={Qk}) of {surd} invalid or out of bounds")
        period.append(b)
        if P == P1 and Qk == Q1:
            break
    else:
        raise PeriodNotFound(f"no period for {surd} within {cap} steps")
    if period[-1] != 2 * b0 or period[:-1] != period[-2::-1]:
        raise InternalInvariantViolation(f"period of {surd} is not of the form b1..bm,2b0: {period}")
    word = tuple(period)
    if not minimal:
        word = word * 2
    return PeriodicCF(b0, word, minimal)


@dataclass(frozen=True)
class Convergent:
    """k-th convergent r/s; ``Qnext`` is Q_{k+1} when known."""

    k: int
    r: int
    s: int
    Qnext: int | None = None

    def as_fraction(self) -> Fraction:
        return Fraction(self.r, self.s)


class ConvergentStream:
    """Lazily extended convergents of sqrt(D/Q), together with Q_{k+1}.

    Index it like a list; it grows on demand.
    """

    def __init__(self, surd: Surd):
        self.surd = surd
        self._D2 = surd.D2
        self._root = isqrt(surd.D2)
        self._state = (0, surd.Q)  # P_k, Q_k of the next quotient to take
        self.b: list[int] = []
        self.r: list[int] = []
        self.s: list[int] = []
        self.Qnext: list[int] = []
        self.Pnext: list[int] = []
        self._r = (0, 1)  # r_{k-2}, r_{k-1}
        self._s = (1, 0)

    def __len__(self) -> int:
        return len(self.r)

    def extend_to(self, k: int) -> None:
        """Make index k available."""
        r2, r1 = self._r
        s2, s1 = self._s
        r, s, b_list, Qn, Pn = self.r, self.s, self.b, self.Qnext, self.Pnext
        D2, root = self._D2, self._root
        P, Qk = self._state
        while len(r) <= k:
            b = (P + root) // Qk
            P = b * Qk - P
            Qk, rem = divmod(D2 - P * P, Qk)
            if rem or Qk <= 0:
                raise InternalInvariantViolation(f"bad complete quotient in {self.surd} at k={len(r)}")
            r2, r1 = r1, b * r1 + r2
            s2, s1 = s1, b * s1 + s2
            b_list.append(b)
            r.append(r1)
            s.append(s1)
            Qn.append(Qk)
            Pn.append(P)
        self._state = (P, Qk)
        self._r = (r2, r1)
        self._s = (s2, s1)

    def __getitem__(self, k: int) -> Convergent:
        if k < 0:
            raise IndexError(k)
        self.extend_to(k)
        return Convergent(k, self.r[k], self.s[k], self.Qnext[k])

    def index_of_numerator(self, r: int, horizon: int | None = None) -> int | None:
        """Index k <= horizon with r_k == r, or None.

        Uses that r_k grows strictly for k >= 1.
        """
        self.extend_to(0)
        if self.r[0] == r:
            return 0
        while self.r[-1] < r and (horizon is None or len(self.r) <= horizon):
            self.extend_to(len(self.r) + 16)
        k = bisect_left(self.r, r, lo=1)
        if k < len(self.r) and self.r[k] == r and (horizon is None or k <= horizon):
            return k
        return None


def convergents(surd: Surd, count: int) -> list[Convergent]:
    if count < 1:
        raise ValueError("count must be positive")
    stream = ConvergentStream(surd)
    return [stream[k] for k in range(count)]


@dataclass(frozen=True)
class RationalCF:
    terms: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.terms) - 1

    def value(self) -> Fraction:
        num, den = self.terms[-1], 1
        for c in reversed(self.terms[:-1]):
            num, den = c * num + den, num
        return Fraction(num, den)

    def __str__(self) -> str:
        return f"[{','.join(map(str, self.terms))}]"


def rational_cf(num: int, den: int, parity: str = "canonical") -> RationalCF:
    """Finite continued fraction of num/den.

    ``parity`` is "canonical", "even" or "odd"; the latter two force the top
    index n to that parity by the tail rewrite c_n -> c_n - 1, 1 (or its
    inverse).
    """
    if den == 0:
        raise ValueError("zero denominator")
    if parity not in ("canonical", "even", "odd"):
        raise ValueError(f"unknown parity {parity!r}")
    if den < 0:
        num, den = -num, -den
    terms = []
    while den:
        c, rem = divmod(num, den)
        terms.append(c)
        num, den = den, rem
    want = {"even": 0, "odd": 1}.get(parity)
    if want is not None and (len(terms) - 1) % 2 != want:
        if len(terms) > 1 and terms[-1] == 1:
            terms[-2:] = [terms[-2] + 1]
        else:
            terms[-1:] = [terms[-1] - 1, 1]
    return RationalCF(tuple(terms))


def eval_periodic(cf: PeriodicCF, depth: int) -> Convergent:
    """The depth-th convergent of the infinite expansion described by cf."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    r2, r1 = 0, 1
    s2, s1 = 1, 0
    for k in range(depth + 1):
        b = cf.term(k)
        r2, r1 = r1, b * r1 + r2
        s2, s1 = s1, b * s1 + s2
    return Convergent(depth, r1, s1)


def check_expansion(surd: Surd, cf: PeriodicCF, stream: ConvergentStream, upto: int) -> None:
    """Assert the classical identities of the expansion up to index `upto`.

    Checks the norm relation Q r_k^2 - D s_k^2 = (-1)^(k+1) Q_{k+1}, the
    determinant r_k s_{k-1} - r_{k-1} s_k = (-1)^(k+1), coprimality, strict
    growth, the state bounds, agreement of the stream's partial quotients
    with cf, and periodicity of the (P, Q) states.
    """
    D, Q = surd.D, surd.Q
    root = isqrt(surd.D2)
    stream.extend_to(upto)
    L = len(cf.period)
    r, s, Qn, Pn, b = stream.r, stream.s, stream.Qnext, stream.Pnext, stream.b
    prev_r, prev_s = 1, 0
    for k in range(upto + 1):
        sign = 1 if k % 2 else -1
        if Q * r[k] * r[k] - D * s[k] * s[k] != sign * Qn[k]:
            raise InternalInvariantViolation(f"{surd}: norm relation fails at k={k}")
        if r[k] * prev_s - prev_r * s[k] != sign:
            raise InternalInvariantViolation(f"{surd}: determinant fails at k={k}")
        if (k >= 1 and r[k] <= prev_r) or (k >= 2 and s[k] <= prev_s):
            raise InternalInvariantViolation(f"{surd}: convergents not increasing at k={k}")
        if not (0 <= Pn[k] <= root and 0 < Qn[k] <= 2 * root + 1):
            raise InternalInvariantViolation(f"{surd}: state bound fails at k={k + 1}")
        if b[k] != cf.term(k):
            raise InternalInvariantViolation(f"{surd}: partial quotient mismatch at k={k}")
        if k >= L and (Pn[k], Qn[k]) != (Pn[k - L], Qn[k - L]):
            raise InternalInvariantViolation(f"{surd}: state not periodic at k={k + 1}")
        prev_r, prev_s = r[k], s[k]
    if gcd(r[upto], s[upto]) != 1:
        raise InternalInvariantViolation(f"{surd}: r_k, s_k not coprime at k={upto}")
