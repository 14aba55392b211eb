"""Independent reference computations used only by the tests.

None of these go through the continued-fraction engine.
"""

from fractions import Fraction
from math import gcd, isqrt


def brute_force_unit(N, s_max):
    """Smallest (r, s, norm) with r^2 - N s^2 = +-1 and 1 <= s <= s_max, or None."""
    for s in range(1, s_max + 1):
        for norm in (-1, 1):
            rr = N * s * s + norm
            r = isqrt(rr)
            if r * r == rr:
                return r, s, norm
    return None


def chakravala(N):
    """First (r, s, norm) with |norm| = 1 reached by the chakravala method.

    The cyclic method walks triples a^2 - N b^2 = k, composing with m^2 - N
    and dividing by |k|, choosing m to minimise |m^2 - N|.
    """
    a = isqrt(N)
    if a * a == N:
        raise ValueError("square")
    if (a + 1) ** 2 - N < N - a * a:
        a += 1
    b, k = 1, a * a - N
    while abs(k) != 1:
        ak = abs(k)
        m0 = (-a * pow(b, -1, ak)) % ak
        base = isqrt(N)
        m1 = base - ((base - m0) % ak)
        cands = [m for m in (m1, m1 + ak) if m > 0]
        m = min(cands, key=lambda x: abs(x * x - N))
        a, b, k = (a * m + N * b) // ak, (a + b * m) // ak, (m * m - N) // k
        a, b = abs(a), abs(b)
    return a, b, k


def naive_smallest_q(Q):
    return next(d for d in range(1, Q + 1) if Q % d == 0 and (d * d) % Q == 0)


def fraction_of_terms(terms):
    x = Fraction(terms[-1])
    for c in reversed(terms[:-1]):
        x = c + 1 / x
    return x


def naive_sqrt_cf_terms(D, Q, count):
    """Partial quotients of sqrt(D/Q) computed on x = a + b*sqrt(D/Q) with a, b rational.

    Each floor is found by bisection on exact rational inequalities.
    """
    r = Fraction(D, Q)

    def at_least(a, b, n):
        # a + b sqrt(r) >= n, with b > 0
        rhs = n - a
        return rhs <= 0 or b * b * r >= rhs * rhs

    a, b = Fraction(0), Fraction(1)
    out = []
    for _ in range(count):
        lo, hi = 0, 1
        while at_least(a, b, hi):
            hi *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if at_least(a, b, mid):
                lo = mid
            else:
                hi = mid
        out.append(lo)
        a -= lo
        den = a * a - b * b * r
        a, b = a / den, -b / den
    return out
