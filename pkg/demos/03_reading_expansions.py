"""Reading the expansion of (s_k/t) sqrt(D/Q) off the rational r_k/t.

Run:  python demos/03_reading_expansions.py
"""
from quadsurd.arith import factorize, small_divisors
from quadsurd.cfrac import ConvergentStream
from quadsurd.rings import ring_context
from quadsurd.theorems import verify_theorem3

ctx = ring_context(157, 45)
conv = ConvergentStream(ctx.surd)
s15 = conv[15].s
print("s_15 =", s15, "=", " * ".join(f"{p}^{e}" for p, e in factorize(s15)))

res = verify_theorem3(ctx, 1, 1008, conv)
print("\nr_15 / 1008        =", res.rational_terms)
print("predicted          =", res.predicted)
print(f"sqrt({res.Dprime}/{res.Qprime}) =", res.computed)
print("a =", res.a, "  (t sqrt(D'/Q') = a sqrt(D'Q'))")

print("\nA few more divisors t of s_15:")
for t in small_divisors(s15, 12):
    r = verify_theorem3(ctx, 1, t, conv)
    print(f"t={t:<8d} {str(r.rational_terms):<40s} minimal={r.predicted.minimal}")
