"""The three reference states on the ball.

Everything downstream differentiates one of these in the domain: the
torsion state (-Lap u = 1), the first Robin eigenstate, and the first
Dirichlet eigenstate.  This script solves each on B_R and verifies the
defining equations pointwise.
"""
import math

import numpy as np

from rsv import (
    solve_dirichlet_eigen_ball,
    solve_robin_eigen_ball,
    solve_torsion_ball,
)


def check(label, value, limit=1e-10):
    flag = "ok" if abs(value) <= limit else "FAIL"
    print(f"  {label:<46} {value: .3e}  [{flag}]")


print("== torsion state, n = 2, R = 1, alpha = 1 ==")
tor = solve_torsion_ball(2, 1.0, 1.0)
# u = (R^2 - r^2)/(2n) + R/(n alpha); explicit and easy to cross-check
r = np.linspace(0.0, 1.0, 9)
explicit = (1.0 - r**2) / 4.0 + 0.5
print("  u(0) =", tor.u(0.0), " (closed form", explicit[0], ")")
check("max |u - closed form| on [0, R]", float(np.max(np.abs(tor.u(r) - explicit))))
check("Robin residual u_r(R) + alpha u(R)", tor.boundary_slope() + tor.boundary_value())
print(f"  energy E(B_1) = {tor.energy():.15f}  (-5 pi/8 = {-5*math.pi/8:.15f})")

print()
print("== first Robin eigenstate, n = 2, R = 1, alpha = 1 ==")
eig = solve_robin_eigen_ball(2, 1.0, 1.0)
print(f"  lam = {eig.lam:.15f}")
# -Lap u = lam u along a radial sample, via the 1d radial Laplacian
rr = np.linspace(0.05, 0.95, 7)
h = 1e-5
lap = (eig.u(rr + h) - 2 * eig.u(rr) + eig.u(rr - h)) / h**2 + eig.u_r(rr) / rr
check("max PDE residual -u''-u'/r - lam u", float(np.max(np.abs(-lap - eig.lam * eig.u(rr)))), 1e-5)
check("Robin residual at R", eig.boundary_slope() + eig.boundary_value())
check("L2 normalization int u^2 - 1", eig.l2_norm_sq() - 1.0)

print()
print("== first Dirichlet eigenstate, n = 3, R = 1 ==")
dir3 = solve_dirichlet_eigen_ball(3, 1.0)
print(f"  lam_D = {dir3.lam:.15f}  (pi^2 = {math.pi**2:.15f})")
check("lam_D - pi^2", dir3.lam - math.pi**2)
check("u(R)", dir3.boundary_value())
