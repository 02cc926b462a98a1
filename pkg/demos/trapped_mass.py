"""mc2: the moving atom keeps a positive share of mass forever.

Jump probability 1 - x favors squaring near the origin, so the moving atom
survives with probability prod (1 - x0^(2^k)), which converges to a positive
limit.  Strong convergence to delta_0 fails; every bounded continuous test
function stops seeing the moving atom anyway, so the weak-sense gap closes.
"""

from unitchain import ZERO, dirac, gamma_limit, iterate, mc2, tv_distance
from unitchain.analysis import default_test_family, weak_star_gap

kernel = mc2()
x0 = 0.5

print(f"limiting trapped mass gamma(x0) for a few starts:")
for x in (0.1, 0.3, 0.5, 0.7, 0.9):
    print(f"  gamma({x}) = {gamma_limit(x):.12f}")

print()
print(f"two distances from delta_0, starting at x0 = {x0}:")
print(f"  {'n':>2}  {'tv (strong)':>18}  {'weak-sense gap':>18}")
fam = default_test_family()
for n in (0, 1, 2, 4, 6, 8, 10, 12):
    mu = iterate(kernel, dirac(x0), n)[-1]
    tv = tv_distance(mu, dirac(ZERO))
    gap = weak_star_gap(kernel, x0, n, fam, dirac(ZERO))
    print(f"  {n:>2}  {tv:>18.12f}  {gap:>18.12e}")

print()
print(f"tv is pinned above gamma({x0}) = {gamma_limit(x0):.12f} while the gap")
print("vanishes: convergence happens in the weak-sense topology only.")
