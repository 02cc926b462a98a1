"""mc4: buffers at both endpoints defeat every finite basis.

The anti-tent jump probability (1 - x left of 1/2, x right of it) pushes
mass toward whichever absorber is nearer, but more and more slowly: states
close to an endpoint almost always square, creeping inward at a vanishing
rate.  Both endpoint shells carry vanishing-buffer witnesses, each one an
invariant purely finitely additive measure that no list of countably
additive invariant measures can account for.
"""

from unitchain import mc4
from unitchain.certify import (
    adversarial_set_family,
    check_doeblin,
    diagnose_quasicompactness,
    mc3_certificate,
    near_one_witness,
    near_zero_witness,
    verify_pfa_witness,
)
from unitchain.grids import endpoint_refined_grid

kernel = mc4()

for name, witness in (
    ("near-zero buffer, param 0.5", near_zero_witness(0.5)),
    ("near-one buffer, param 0.7", near_one_witness(0.7)),
):
    rep = verify_pfa_witness(kernel, witness)
    worst = min(rep.level_margins)
    print(f"{name}: {'PASS' if rep.passed else 'FAIL'} (worst margin {worst:.3e})")

print()
grid = endpoint_refined_grid()
report = check_doeblin(kernel, mc3_certificate(), adversarial_set_family(kernel, grid), grid)
E, x, val = report.counterexample
print("the tent-chain certificate fails here, with an explicit counterexample:")
print(f"  p(x, E) = {val!r} at x = {x.value!r}")
print(f"  E has {len(E.intervals)} interval component(s)")

print()
d = diagnose_quasicompactness(kernel)
print("combined diagnosis:")
print(f"  invariant point masses: {[p.value for p in d.fixed_points]}")
print(f"  local basis checks pass: {d.basis_report.passed}")
print(f"  verdict: {d.verdict}")
