"""mc1: strong convergence to the origin at an exact doubling rate.

From any interior start the chain squares with probability x and falls to
the absorbing origin otherwise.  The distance to delta_0 after n steps is
exactly x0^(2^n - 1): the log of the tv distance doubles every step, which
the log-domain atoms track bit for bit long after linear floats underflow.
"""

import math

from unitchain import ZERO, convergence_profile, dirac, iterate, mc1, tv_distance_log10
from unitchain.grids import geometric_near_one
from unitchain.analysis import uniformity_sup

kernel = mc1()

print("pointwise rate from x0 = 0.5 (tv = 0.5^(2^n - 1)):")
prof = convergence_profile(kernel, 0.5, dirac(ZERO), 6)
print(f"  {'n':>2}  {'tv':>24}  {'log10 tv':>20}")
for r in prof.rows[1:]:
    print(f"  {r.n:>2}  {r.tv:>24.17g}  {r.log10_tv:>20.12f}")

print()
print("iteration n = 40, far below every linear floor:")
mu40 = iterate(kernel, dirac(0.5), 40)[-1]
got = tv_distance_log10(mu40, dirac(ZERO))
want = (2.0**40 - 1.0) * math.log10(0.5)
print(f"  log10 tv measured {got!r}")
print(f"  log10 tv predicted {want!r}")
print(f"  relative error {abs(got - want) / abs(want):.3e}")

print()
print("the rate is pointwise only; the sup over starts near 1 never decays:")
for n in (1, 3, 6):
    sup = uniformity_sup(kernel, geometric_near_one(12), dirac(ZERO), n)
    print(f"  n = {n}: sup tv over {{1 - 10^-j}} = {sup:.6f}")
