"""mc3: absorption at a geometric rate that is uniform over all starts.

The tent-shaped jump probability (x on the left half, 1 - x on the right)
never exceeds 1/2, so every interior state sends at least half its mass to
the origin each step.  Interior mass dies like (1/2)^n uniformly, well
inside the certified (3/4)^n envelope, and a one-step minorization
certificate survives an adversarial family of test sets.
"""

from unitchain import mc3, nstep_mass, open_unit_interval
from unitchain.certify import adversarial_set_family, check_doeblin, mc3_certificate
from unitchain.grids import endpoint_refined_grid, geometric_near_one, geometric_near_zero

kernel = mc3()
interior = open_unit_interval()

print("worst-case interior mass over a two-sided geometric grid:")
grid = geometric_near_zero(12) + geometric_near_one(12)
print(f"  {'n':>2}  {'max interior mass':>20}  {'(3/4)^n':>12}")
for n in (1, 2, 4, 8, 12):
    worst = max(nstep_mass(kernel, x0, interior, n) for x0 in grid)
    print(f"  {n:>2}  {worst:>20.12e}  {0.75**n:>12.6e}")

print()
cert = mc3_certificate()
x_grid = endpoint_refined_grid()
family = adversarial_set_family(kernel, x_grid)
report = check_doeblin(kernel, cert, family, x_grid)
print(f"minorization certificate phi = 0.5*delta_0 + 0.5*delta_1, eps = {cert.eps}:")
print(f"  verdict: {'PASS' if report.passed else 'FAIL'}")
print(f"  {report.sets_triggered} of {report.sets_checked} sets triggered the small-mass clause")
print(f"  note: {report.qualifier}")
