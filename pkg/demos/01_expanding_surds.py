"""Continued fractions of sqrt(D/Q).

Run:  python demos/01_expanding_surds.py
"""
from quadsurd.cfrac import ConvergentStream, expand, rational_cf, surd_new

# sqrt(157/45) has a period of length 16 ending in 2*b0
s = surd_new(157, 45)
cf = expand(s)
print(f"{s} = {cf}")
print("period length", len(cf.period), " m =", cf.m)

# The middle of the period is a palindrome
print("b1..bm palindromic:", cf.period[:-1] == cf.period[-2::-1])

# Convergents come with Q_{k+1}; Q r^2 - D s^2 = (-1)^(k+1) Q_{k+1}
conv = ConvergentStream(s)
print("\n k          r_k          s_k   Q_(k+1)   Q r^2 - D s^2")
for k in range(17):
    c = conv[k]
    print(f"{k:2d} {c.r:12d} {c.s:12d} {c.Qnext:8d} {45 * c.r**2 - 157 * c.s**2:14d}")

# Q_(k+1) == Q exactly at k=4, 10 and 15, but only k=15 closes the period
print("\nQ_(k+1) == Q at", [k for k in range(16) if conv.Qnext[k] == 45])

# sqrt(D2) = sqrt(7065) has half the period
print("\nsqrt(7065) =", expand(surd_new(7065, 1)))

# Finite continued fractions with a chosen parity of the last index
for parity in ("canonical", "even", "odd"):
    print(f"4923521/1008 ({parity}):", rational_cf(4923521, 1008, parity))
