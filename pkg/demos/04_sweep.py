"""Check every theorem on all admissible (D, Q) with D <= 120.

The full acceptance run uses D <= 500 (about 76,000 surds, a few minutes).

Run:  python demos/04_sweep.py
"""
from quadsurd.theorems import sweep

report = sweep(120)
print(report.summary())
print("first rows:")
print(report.to_jsonl().splitlines()[:3])
