"""
Open covers, strings and the substitution count
===============================================

The second engine never builds a ball. It covers the space by strings of
L-cylinders; a mistake string is the Hamming ball of strings around it.
Passing from mistake strings back to ordinary ones costs at most a factor
sum_i C(m, i) |cover|**i, which is exp(m * gamma).
"""
import math

from pressurelab import (CylinderCover, LocallyConstant, MistakeFunction, SftSystem, StringU,
                         cover_pressure, stirling_gamma, string_trace_set, substitution_count,
                         substitutions)

sys = SftSystem.golden_mean()
zero = LocallyConstant.zero(2)

cover = CylinderCover(sys, 2)
print("cover of scale 2:", cover.elements, " diam =", cover.diam)
U = StringU(cover, [(0, 1), (1, 0), (0, 0)])
print("trace of", U.entries, "->", string_trace_set(U))
print("strings within one substitution:", sum(1 for _ in substitutions(U, 1)),
      "=", substitution_count(3, 1, len(cover)))

for g in (None, MistakeFunction.linear()):
    est = cover_pressure(sys, None, zero, [1, 2, 3, 4], [8, 10, 12, 14], g)
    label = "strings" if g is None else "mistake strings"
    print(f"{label:>16}:", [round(p.critical_s, 4) for p in est.trace])

# the exponential price of mistakes at density theta**L, m = 64
print("\n L  budget  gamma")
for L in range(1, 7):
    b = math.floor(64 * 0.5 ** L)
    print(f"{L:>2}  {b:>6}  {stirling_gamma(64, b, 2 ** L):.4f}")
print("one mistake in 100 steps, two symbols:", stirling_gamma(100, 1, 2))
