"""Units of Z[sqrt(785)] against the convergents of sqrt(157/45).

Here q = 15, D1 = 785 and D2 = 7065.  The fundamental unit eps = 28 + sqrt(785)
is not in Z[sqrt(7065)]; its fourth power is.

Run:  python demos/02_units_and_convergents.py
"""
from quadsurd.rings import fundamental_unit, ring_context, rewrite_in_D2
from quadsurd.theorems import unit_ladder, verify_theorem1_shift, verify_theorem2

ctx = ring_context(157, 45)
print(ctx)
print("eps =", fundamental_unit(ctx.D1), "  eta =", fundamental_unit(ctx.D2))

print("\nj   t   k   class      unit")
rungs = unit_ladder(ctx, 8)
for rung in rungs:
    print(f"{rung.power:<3d} {rung.link.t:<3d} {rung.link.k:<3d} {str(rung.cls):<10s} {rung.link.unit}")

# Shifting a linked convergent by one period gives the unit eps^(j+4)
shifted = verify_theorem1_shift(ctx, rungs[1].link)
print("\neps^2 at k=7 shifts to k =", shifted.k, "->", shifted.unit, "t =", shifted.t)

# The regular units are exactly the end-of-period convergents
for k, unit in verify_theorem2(ctx, 3):
    print(f"k={k}: {unit}")
print("\neps^4 rewritten over D2:", rewrite_in_D2(ctx, rungs[3].link.unit))
