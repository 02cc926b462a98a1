"""mc5: constant jump probability p, the cleanest certified case.

Interior mass is exactly p^n from every interior start, the minorization
certificate (p*delta_0 + q*delta_1, eps = min(p,q)/2) passes, and every
candidate vanishing-buffer witness is refuted: near an endpoint the chain
still leaks a constant 1 - p (or p) of its mass, so no buffer can hold.
"""

import sys

from unitchain import mc5, nstep_mass, open_unit_interval
from unitchain.certify import (
    adversarial_set_family,
    candidate_witnesses,
    check_doeblin,
    mc5_certificate,
    verify_pfa_witness,
)
from unitchain.grids import endpoint_refined_grid

p = float(sys.argv[1]) if len(sys.argv) > 1 else 0.3
kernel = mc5(p)
interior = open_unit_interval()

print(f"interior mass from assorted starts (p = {p}):")
for x0 in (0.01, 0.5, 0.99):
    row = "  x0 = {:<5}".format(x0)
    for n in (1, 3, 6):
        row += f"  n={n}: {nstep_mass(kernel, x0, interior, n):.10f}"
    print(row + f"   (p^6 = {p**6:.10f})")

print()
grid = endpoint_refined_grid()
cert = mc5_certificate(p)
report = check_doeblin(kernel, cert, adversarial_set_family(kernel, grid), grid)
print(f"minorization certificate eps = {cert.eps!r}: {'PASS' if report.passed else 'FAIL'}")

print()
print("all candidate buffer witnesses are refuted, each with a counterexample:")
for w in candidate_witnesses():
    rep = verify_pfa_witness(kernel, w)
    n, x = rep.counterexample
    print(f"  {w.description:<28} refuted at level {n}, x = {x.value!r}")
