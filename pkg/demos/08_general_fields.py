"""Second variation for arbitrary ambient fields (v, w).

The boundary-integral form of E''(0) takes any smooth deformation
x + t v + (t^2/2) w, not just normal-speed data.  Three structural facts
make good demonstrations:

  - only the normal trace v.nu matters: adding a tangential rotation to v
    (and re-completing w) leaves the value unchanged;
  - a rigid rotation with its own completion is an isometry to second
    order, so the value vanishes;
  - dilations are not volume preserving, and the general form picks up
    the full unconstrained value.
"""
import math

from rsv import (
    linear_field,
    radial_harmonic_field,
    rotation_field,
    second_variation_general,
    solve_torsion_ball,
    volume_completion_field,
    zero_field,
)
from rsv.sphere_geometry import AmbientField  # noqa: F401  (type of all fields below)

sol = solve_torsion_ball(2, 1.0, 1.0)
N = {(2, 0): math.sqrt(math.pi)}

v = radial_harmonic_field(2, 1.0, N)
w = volume_completion_field(v, 2, 1.0)
base = second_variation_general(sol, v, w)
print(f"normal field for cos 2 theta:        E''(0) = {base!r}")
print(f"                                     (13 pi/12 = {13 * math.pi / 12!r})")

vr = v + rotation_field(2)
wr = volume_completion_field(vr, 2, 1.0)
print(f"same + tangential rotation:          E''(0) = {second_variation_general(sol, vr, wr)!r}")
assert abs(second_variation_general(sol, vr, wr) - base) < 1e-9

rot = rotation_field(2)
print(f"pure rotation (isometry):            E''(0) = {second_variation_general(sol, rot, volume_completion_field(rot, 2, 1.0))!r}")

# dilation v = x: E(t) = c(t)^{n+2} E(B_1) under scaling, so the second
# derivative is E(B_1) n (n+2) ... -3 pi R^3/alpha - 3 pi R^4/2 in general
dil = linear_field([[1.0, 0.0], [0.0, 1.0]])
value = second_variation_general(sol, dil, zero_field(2))
print(f"dilation, no volume constraint:      E''(0) = {value!r}")
print(f"                                     (-9 pi/2 = {-4.5 * math.pi!r})")
assert abs(value + 4.5 * math.pi) < 1e-9
