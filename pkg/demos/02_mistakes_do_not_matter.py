"""
Mistake Bowen balls give the same pressure
==========================================

A mistake ball lets the orbits disagree at up to g(n, eps) times. With
g(n, eps) = floor(n * eps) the budget grows with n but its density shrinks
with the radius, and the critical values close in on the classical ones.

Uniform covers use the same atoms for every kind of ball, so here the
covers are optimised greedily over ball lengths N and N+1.
"""
from pressurelab import LocallyConstant, MistakeFunction, SftSystem, eval_budget
from pressurelab.pressure_ball import critical_point

g = MistakeFunction.linear()
cases = {
    "full shift": (SftSystem.full_shift(2), LocallyConstant.zero(2)),
    "golden mean": (SftSystem.golden_mean(), LocallyConstant.zero(2)),
}
schedule = [(3, 10), (4, 12), (5, 14)]

for name, (sys, phi) in cases.items():
    print(name)
    for L, N in schedule:
        delta = sys.radius(L)
        classical = critical_point(sys, None, phi, N, delta, "bowen", strategy="greedy", span=1)[0]
        sloppy = critical_point(sys, None, phi, N, delta, "mistake", g, strategy="greedy", span=1)[0]
        print(f"  L={L} N={N} budget={eval_budget(g, N, delta)}  bowen={classical:.4f}  "
              f"mistake={sloppy:.4f}  gap={sloppy - classical:+.4f}")

# once floor(N * delta) is 0 the leftover gap is the boundary: a mistake ball
# with no mistakes is closed, a Bowen ball is open, and at these sizes the
# optimiser finds that one symbol cheaper, about log(2)/N.

# a zero budget is the classical ball with a closed boundary; for uniform covers
# the two agree exactly
sys, phi = cases["golden mean"]
a = critical_point(sys, None, phi, 12, 0.125, "bowen")[0]
b = critical_point(sys, None, phi, 12, 0.125, "mistake", MistakeFunction.zero())[0]
print("\nzero budget, uniform covers:", a, b)
