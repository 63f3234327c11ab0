"""The dyadic induction engine
============================

Averaging a weight and a function level by level produces four
sequences whose composite through the special function can only
decrease.  Chaining the sign at the top against the lower bound at the
bottom yields the weighted square-function inequalities, checked here
on random instances, and a hill climb probes how much of each constant
random search can actually witness.
"""

import numpy as np

from bsq.bellman import MainKind
from bsq.certify import (
    build_sequences,
    extremizer_search,
    random_grid_function,
    random_weight,
    verify_inequality,
    verify_monotonicity,
)
from bsq.weights import dyadic_ap_characteristic

f = random_grid_function(8, seed=42)
w = random_weight(8, seed=42, index=1)
char = dyadic_ap_characteristic(w, 2.0).characteristic
print(f"random instance at depth 8, [w]_A2 = {char:.3f}")

seq = build_sequences(f, w, 2.0)
print("level-0 averages: f =", seq.phi[0][0], " w =", seq.w[0][0], " v =", seq.v[0][0])

trace = verify_monotonicity(MainKind(2.0 * char), f, w)
print("\ntrace of the special-function integral (never increases):")
for n, val in enumerate(trace.integrals):
    print(f"  level {n}: {val:12.4f}")
print("monotone:", trace.passed, " top value <= 0:", trace.integrals[0] <= 0)

print("\nend-to-end inequalities:")
for which in ("lower160", "upper128", "upper_ar"):
    out = verify_inequality(f, w, which)
    print(f"  {which:9s}: {out.lhs:10.4f} <= {out.rhs:12.4f} "
          f"(constant {out.constant_used:g}, characteristic {out.characteristic:.3f})")

print("\nhill-climbing the observed constants (proved ceilings 160 / 128 / 6):")
for which, ceiling in (("lower160", 160.0), ("upper128", 128.0), ("upper_ar", 6.0)):
    res = extremizer_search(which, depth=6, budget=2000, seed=5)
    print(f"  {which:9s}: observed {res.best_ratio:8.4f}  <= {ceiling:g}")
