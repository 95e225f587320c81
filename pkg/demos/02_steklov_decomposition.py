"""Steklov eigenvalues mu_s: the denominators of the second variation.

The second variation decomposes over spherical-harmonic degrees, and each
degree s contributes through 1/mu_s.  For the torsion state the spectrum
is exactly alpha + s/R; for the Robin eigenstate it is alpha plus a
Bessel log-derivative, with two structural identities: mu_0 = 0 (the
state itself) and a pinned mu_1 (translations).
"""
from rsv import SteklovSpectrum, solve_robin_eigen_ball, solve_torsion_ball

n, R, alpha = 2, 1.0, 1.0

print(f"== torsion spectrum, n={n}, R={R}, alpha={alpha} ==")
spec = SteklovSpectrum(solve_torsion_ball(n, R, alpha))
print(f"  {'s':>2} {'mu_s':>10} {'mult':>5}")
for s, mu, mult in spec.table(6):
    print(f"  {s:>2} {mu:>10.6f} {mult:>5}")
print("  (exactly alpha + s/R, multiplicity 1 then 2, 2, ... on the circle)")

print()
print(f"== Robin eigenstate spectrum, n={n}, R={R}, alpha={alpha} ==")
eig = solve_robin_eigen_ball(n, R, alpha)
espec = SteklovSpectrum(eig)
for s, mu, mult in espec.table(6):
    print(f"  {s:>2} {mu:>10.6f} {mult:>5}")
print(f"  mu_0 = {espec.mu(0):.3e}  (the eigenstate itself: exactly zero)")
pinned = alpha - (n - 1) / R + eig.lam / alpha
print(f"  mu_1 = {espec.mu(1):.15f}")
print(f"  alpha - (n-1)/R + lam/alpha = {pinned:.15f}   (translation identity)")
assert abs(espec.mu(1) - pinned) < 1e-11

# resonance: at alpha R = -s the torsion mu_s vanishes and the linearized
# problem is singular; the library refuses rather than divides by zero
print()
print("== resonance guard ==")
from rsv import second_variation_energy_ball

try:
    second_variation_energy_ball(solve_torsion_ball(2, 1.0, -2.0), {(2, 0): 1.0})
except ArithmeticError as exc:
    print(f"  alpha R = -2 with degree-2 data: {exc}")
