"""Exact integer helpers: square roots, factorization and valuations.

Everything here works on Python ints and never touches floating point.
"""

from __future__ import annotations

import math

Factorization = tuple[tuple[int, int], ...]


def isqrt(n: int) -> int:
    """Return floor(sqrt(n)) for n >= 0."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    if n < 0:
        raise ValueError(f"is_square of negative number {n}")
    r = math.isqrt(n)
    return r * r == n


def _trial_divide(n: int, bound: int | None = None) -> tuple[list[tuple[int, int]], int]:
    # Strip primes p <= bound (default sqrt(n)); returns the factors found and the cofactor.
    factors = []
    p = 2
    while p * p <= n and (bound is None or p <= bound):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    return factors, n


def factorize(n: int) -> Factorization:
    """Prime factorization of n >= 1 by trial division, as ((p, e), ...) ascending.

    Intended for desk-scale n (a few times 10**7 at most).
    """
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    factors, rest = _trial_divide(n)
    if rest > 1:
        factors.append((rest, 1))
    return tuple(factors)


def valuation(n: int, p: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    if p < 2:
        raise ValueError(f"{p} is not a prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def smallest_q(Q: int) -> int:
    """Smallest divisor q of Q with Q | q**2, i.e. prod p**ceil(e/2)."""
    q = 1
    for p, e in factorize(Q):
        q *= p ** ((e + 1) // 2)
    return q


def divisors_from_factorization(fac: Factorization, limit: int | None = None) -> list[int]:
    """Sorted divisors; with `limit`, only the smallest `limit` of them.

    Truncating after each prime is safe: the part of a divisor built from the
    earlier primes is itself a divisor no larger than it.
    """
    out = [1]
    for p, e in fac:
        pk = [p**i for i in range(e + 1)]
        out = sorted(d * x for d in out for x in pk)
        if limit is not None:
            del out[limit:]
    return out


def divisors(n: int) -> list[int]:
    return divisors_from_factorization(factorize(n))


def small_divisors(n: int, limit: int, prime_bound: int = 1000) -> list[int]:
    """At most `limit` small divisors of a possibly huge n, always including n itself.

    Divisors come from the prime_bound-smooth part of n.  Every divisor below
    prime_bound is smooth, so the list holds exactly the smallest divisors of
    n whenever its second-largest entry is below prime_bound.
    """
    if n < 1 or limit < 1:
        raise ValueError(f"divisors of {n} (limit {limit})")
    factors, rest = _trial_divide(n, bound=prime_bound)
    if 1 < rest <= prime_bound:
        factors.append((rest, 1))
    ds = divisors_from_factorization(tuple(factors), limit)
    if ds[-1] == n:
        return ds
    return ds[:limit - 1] + [n]
