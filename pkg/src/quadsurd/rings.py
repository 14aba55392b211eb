"""Units of the orders Z[sqrt(D1)] and Z[sqrt(D2)] attached to sqrt(D/Q).

Here q is the smallest divisor of Q with Q | q**2, D1 = D*q**2/Q and
D2 = D*Q = D1*(Q/q)**2, so Z[sqrt(D2)] is a suborder of Z[sqrt(D1)].
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .arith import is_square, smallest_q
from .cfrac import ConvergentStream, Surd, expand, surd_new
from .errors import InternalInvariantViolation, NotRegular


@dataclass(frozen=True)
class RingContext:
    D: int
    Q: int
    q: int
    D1: int
    D2: int

    @property
    def surd(self) -> Surd:
        return Surd(self.D, self.Q)

    @property
    def conductor(self) -> int:
        """Q/q, the index of Z[sqrt(D2)] in Z[sqrt(D1)]."""
        return self.Q // self.q


def ring_context(D: int, Q: int) -> RingContext:
    surd_new(D, Q)
    q = smallest_q(Q)
    D1, rem = divmod(D * q * q, Q)
    D2 = D * Q
    if rem or is_square(D1) or D2 != D1 * (Q // q) ** 2:
        raise InternalInvariantViolation(f"inconsistent orders for D={D}, Q={Q}, q={q}")
    return RingContext(D, Q, q, D1, D2)


@dataclass(frozen=True)
class QuadUnit:
    """A unit r + s*sqrt(N) > 1 of Z[sqrt(N)] with norm r^2 - N s^2 = +-1."""

    N: int
    r: int
    s: int
    norm: int

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise ValueError(f"{self} is not a unit greater than one")
        if self.r * self.r - self.N * self.s * self.s != self.norm or self.norm not in (1, -1):
            raise ValueError(f"{self.r}^2 - {self.N}*{self.s}^2 is not {self.norm}")

    def __str__(self) -> str:
        return f"{self.r}+{self.s}*sqrt({self.N})"


@lru_cache(maxsize=4096)
def fundamental_unit(N: int) -> QuadUnit:
    """Smallest unit > 1 of Z[sqrt(N)], read off the end of the first period of sqrt(N)."""
    if N < 2 or is_square(N):
        raise ValueError(f"{N} is a square")
    surd = Surd(N, 1)
    m = expand(surd).m
    c = ConvergentStream(surd)[m]
    return QuadUnit(N, c.r, c.s, -1 if m % 2 == 0 else 1)


def unit_mul(u: QuadUnit, v: QuadUnit) -> QuadUnit:
    if u.N != v.N:
        raise ValueError(f"units of different rings: {u.N} vs {v.N}")
    return QuadUnit(u.N, u.r * v.r + u.s * v.s * u.N, u.r * v.s + u.s * v.r, u.norm * v.norm)


def unit_pow(u: QuadUnit, j: int) -> QuadUnit:
    if j < 1:
        raise ValueError("only positive powers are units > 1")
    out = u
    for _ in range(j - 1):
        out = unit_mul(out, u)
    return out


def unit_powers(u: QuadUnit, count: int) -> list[QuadUnit]:
    out = [u]
    while len(out) < count:
        out.append(unit_mul(out[-1], u))
    return out


class UnitClass(Enum):
    REGULAR = "regular"
    IRREGULAR = "irregular"

    def __str__(self) -> str:
        return self.value


def classify_unit(ctx: RingContext, u: QuadUnit) -> UnitClass:
    """Regular iff the unit of Z[sqrt(D1)] already lies in Z[sqrt(D2)], i.e. (Q/q) | s."""
    if u.N != ctx.D1:
        raise ValueError(f"unit lives in Z[sqrt({u.N})], expected Z[sqrt({ctx.D1})]")
    return UnitClass.REGULAR if u.s % ctx.conductor == 0 else UnitClass.IRREGULAR


def rewrite_in_D2(ctx: RingContext, u: QuadUnit) -> QuadUnit:
    """Write a regular unit r + s*sqrt(D1) as r + s'*sqrt(D2) with s' = s*q/Q."""
    if classify_unit(ctx, u) is not UnitClass.REGULAR:
        raise NotRegular(f"{u} is not in Z[sqrt({ctx.D2})]")
    return QuadUnit(ctx.D2, u.r, u.s // ctx.conductor, u.norm)


def lift_to_D1(ctx: RingContext, u: QuadUnit) -> QuadUnit:
    if u.N != ctx.D2:
        raise ValueError(f"unit lives in Z[sqrt({u.N})], expected Z[sqrt({ctx.D2})]")
    return QuadUnit(ctx.D1, u.r, u.s * ctx.conductor, u.norm)
