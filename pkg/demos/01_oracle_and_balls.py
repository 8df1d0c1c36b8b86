"""
Pressure from Bowen balls, checked against the transfer matrix
==============================================================

For a locally constant potential the pressure is the log of the Perron
eigenvalue of the weighted transition matrix. The ball engine never looks
at that matrix; it bisects on the cost of covering the space by Bowen
balls of radius theta**L and length N.
"""
import math

import numpy as np

from pressurelab import LocallyConstant, SftSystem, pressure_estimate, transfer_pressure

golden = SftSystem.golden_mean(theta=0.5)
zero = LocallyConstant.zero(2)
print("golden mean transitions:\n", golden.transitions.astype(int))

# the oracle: log of the golden ratio
print("transfer oracle:", transfer_pressure(golden, zero), " log(phi) =", math.log((1 + 5 ** 0.5) / 2))

# uniform covers: one ball per admissible (N+L)-word, so m(s) is a partition function
est = pressure_estimate(golden, None, zero, "bowen", delta_schedule=[0.5 ** L for L in (1, 2, 3, 4)],
                        N_schedule=[8, 10, 12, 14])
for p in est.trace:
    print(f"delta={p.delta:<8} N={p.N:<3} s*={p.critical_s:.6f}  m(s*)={p.m_at_critical:.3f}")

# a potential that rewards the symbol 1
beta = LocallyConstant(2, 1, [0.0, 1.0])
full = SftSystem.full_shift(2)
print("\nfull shift, phi = 1[x0 = 1]")
print("  oracle     ", transfer_pressure(full, beta), " ln(1+e) =", math.log1p(math.e))
print("  balls (N=14)", pressure_estimate(full, None, beta, delta_schedule=[0.0625], N_schedule=[14]).value)

# adding a constant to phi moves the critical value by the same constant
shifted = pressure_estimate(full, None, beta.shifted(-0.7), delta_schedule=[0.0625], N_schedule=[14]).value
print("  shift by -0.7 ->", shifted)
assert np.isclose(shifted + 0.7, pressure_estimate(full, None, beta, delta_schedule=[0.0625], N_schedule=[14]).value)
