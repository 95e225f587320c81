"""Brute-force PDE oracle on perturbed star domains.

Everything here treats the deformed domain r < R + t N + (t^2/2) W directly:
the torsion and first-eigenvalue problems are solved by Trefftz collocation
(the ansatz satisfies the PDE exactly, only the boundary condition is fitted
in least squares), and the resulting scalar maps t -> E(t), lam(t), S(t),
V(t) are differentiated by Richardson-extrapolated central differences.

The basis evaluations use scipy.special on purpose, keeping the oracle
independent of the in-repo special-function stack it is meant to check.
Supported geometry: n = 2 with arbitrary band-limited boundary data, n = 3
restricted to zonal (axisymmetric) data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_legendre, jv, jvp, spherical_jn

from .radial_solutions import (
    DIRICHLET_EIGEN,
    ROBIN_EIGEN,
    TORSION,
    BallProblem,
    solve_dirichlet_eigen_ball,
    solve_robin_eigen_ball,
)
from .sphere_geometry import (
    PerturbationField,
    StarDomain,
    eval_boundary,
    eval_boundary_dtheta,
    exact_surface_area,
    exact_volume,
    perturbed_domain,
)

OVERSAMPLE = 4
RESIDUAL_LIMIT = 1e-6
CONDITION_LIMIT = 1e14


# ---------------------------------------------------------------------------
# geometry on a polar angle grid
# ---------------------------------------------------------------------------


def _directions_from_theta(n: int, theta: np.ndarray) -> np.ndarray:
    if n == 2:
        return np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return np.stack([np.sin(theta), np.zeros_like(theta), np.cos(theta)], axis=-1)


def _theta_grid(n: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Angles and weights so that sum w f(theta) integrates over the sphere
    of directions (the 2 pi azimuthal factor is included for n = 3)."""
    if n == 2:
        theta = 2.0 * math.pi * np.arange(count) / count
        w = np.full(count, 2.0 * math.pi / count)
        return theta, w
    x, wx = np.polynomial.legendre.leggauss(count)
    theta = 0.5 * math.pi * (x + 1.0)
    w = 2.0 * math.pi * 0.5 * math.pi * wx * np.sin(theta)
    return theta, w


@dataclass
class _Boundary:
    theta: np.ndarray
    r: np.ndarray
    r_theta: np.ndarray
    nu_rho: np.ndarray  # radial component of the outward normal
    nu_theta: np.ndarray  # polar-tangent component
    dS: np.ndarray  # surface weights: sum dS f = boundary integral


def _boundary(d: StarDomain, count: int) -> _Boundary:
    theta, w = _theta_grid(d.n, count)
    dirs = _directions_from_theta(d.n, theta)
    r = d.radius_at(dirs)
    if np.any(r <= 0.0):
        raise ValueError("domain is not star-shaped: r <= 0 at some angle")
    rp = d.t * eval_boundary_dtheta(d.n, d.N, dirs)
    rp = rp + 0.5 * d.t**2 * eval_boundary_dtheta(d.n, d.W, dirs)
    g = np.sqrt(r * r + rp * rp)
    dS = w * g if d.n == 2 else w * r * g
    return _Boundary(theta, r, rp, r / g, -rp / g, dS)


def _interior(d: StarDomain, n_theta: int, n_rho: int):
    """Tensor quadrature for volume integrals: rho, theta, weights (L, G)."""
    theta, w = _theta_grid(d.n, n_theta)
    dirs = _directions_from_theta(d.n, theta)
    r = d.radius_at(dirs)
    xg, wg = np.polynomial.legendre.leggauss(n_rho)
    rho = 0.5 * r[:, None] * (xg[None, :] + 1.0)
    weight = 0.5 * r[:, None] * wg[None, :] * rho ** (d.n - 1) * w[:, None]
    # _theta_grid already carries sin(theta) and the azimuthal factor for n=3
    return theta, rho, weight


# ---------------------------------------------------------------------------
# Trefftz bases: every element solves the PDE in the interior exactly
# ---------------------------------------------------------------------------


def _angular_parts(n: int, modes: int, theta: np.ndarray):
    """Degrees k and angular factors T, dT/dtheta, shaped (basis, points)."""
    if n == 2:
        ks = [0]
        rows_t = [np.ones_like(theta)]
        rows_dt = [np.zeros_like(theta)]
        for k in range(1, modes + 1):
            ks += [k, k]
            rows_t += [np.cos(k * theta), np.sin(k * theta)]
            rows_dt += [-k * np.sin(k * theta), k * np.cos(k * theta)]
        return np.array(ks), np.vstack(rows_t), np.vstack(rows_dt)
    ls = np.arange(modes + 1)
    x = np.cos(theta)
    sin_t = np.sin(theta)
    T = eval_legendre(ls[:, None], x[None, :])
    shifted = eval_legendre(np.maximum(ls - 1, 0)[:, None], x[None, :])
    # dP_l(cos t)/dt = l (cos t P_l - P_{l-1}) / sin t; zero on the axis
    with np.errstate(divide="ignore", invalid="ignore"):
        dT = np.where(
            sin_t[None, :] > 1e-14,
            ls[:, None] * (x[None, :] * T - shifted) / sin_t[None, :],
            0.0,
        )
    dT[0] = 0.0
    return ls, T, dT


def _radial_harmonic(degrees: np.ndarray, rho: np.ndarray, scale: float):
    """(rho/scale)^k and its rho-derivative, shaped (basis, points)."""
    k = degrees[:, None].astype(float)
    z = (rho[None, :] / scale) ** degrees[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        dz = np.where(rho[None, :] > 0.0, k * z / rho[None, :], 0.0)
    # k = 1 has a finite slope at the origin
    dz[degrees == 1] = 1.0 / scale
    return z, dz


def _radial_wave(n: int, degrees: np.ndarray, lam: float, rho: np.ndarray):
    """Radial factors solving the Helmholtz equation, shaped (basis, points)."""
    k = math.sqrt(lam)
    z = k * rho[None, :]
    if n == 2:
        f = jv(degrees[:, None], z)
        df = k * jvp(degrees[:, None], z, 1)
        return f, df
    ls, zz = np.broadcast_arrays(degrees[:, None], z)
    f = spherical_jn(ls, zz)
    df = k * spherical_jn(ls, zz, derivative=True)
    return f, df


def _validate_domain(d: StarDomain) -> None:
    if d.n not in (2, 3):
        raise ValueError("n must be 2 or 3")
    if d.n == 3:
        for coeffs in (d.N, d.W):
            for s, i in coeffs:
                if i != s:
                    raise ValueError(
                        "n=3 oracle supports zonal (axisymmetric) data only"
                    )


# ---------------------------------------------------------------------------
# solutions
# ---------------------------------------------------------------------------


@dataclass
class OracleSolution:
    """Collocation solution on one perturbed domain.

    The expansion coefficients multiply interior solutions of the PDE, so
    the only numerical defect is the boundary residual recorded here.
    """

    kind: str
    domain: StarDomain
    alpha: float
    modes: int
    coefficients: np.ndarray
    lam: float | None
    residual: float
    condition: float
    energy: float
    volume: float
    surface: float
    _scale: float

    @property
    def n(self) -> int:
        return self.domain.n

    def _parts(self, rho: np.ndarray, theta: np.ndarray):
        degrees, T, dT = _angular_parts(self.n, self.modes, theta)
        if self.kind == TORSION:
            Rf, dRf = _radial_harmonic(degrees, rho, self._scale)
        else:
            Rf, dRf = _radial_wave(self.n, degrees, self.lam, rho)
        return Rf, dRf, T, dT

    def values(self, rho, theta) -> np.ndarray:
        """u at polar points (zonal plane points for n = 3)."""
        rho = np.asarray(rho, dtype=float).ravel()
        theta = np.asarray(theta, dtype=float).ravel()
        Rf, _, T, _ = self._parts(rho, theta)
        out = self.coefficients @ (Rf * T)
        if self.kind == TORSION:
            out = out - rho**2 / (2.0 * self.n)
        return out

    def gradient_polar(self, rho, theta) -> tuple[np.ndarray, np.ndarray]:
        """(du/drho, (1/rho) du/dtheta) at polar points."""
        rho = np.asarray(rho, dtype=float).ravel()
        theta = np.asarray(theta, dtype=float).ravel()
        Rf, dRf, T, dT = self._parts(rho, theta)
        u_rho = self.coefficients @ (dRf * T)
        u_ang = self.coefficients @ (Rf * dT) / rho
        if self.kind == TORSION:
            u_rho = u_rho - rho / self.n
        return u_rho, u_ang


def _integrals(sol: OracleSolution, n_theta: int, n_rho: int):
    """(int u dx, int |grad u|^2 dx, int u^2 dx, boundary int u^2 dS)."""
    d = sol.domain
    theta, rho, w = _interior(d, n_theta, n_rho)
    th_flat = np.broadcast_to(theta[:, None], rho.shape).ravel()
    vals = sol.values(rho.ravel(), th_flat)
    g_rho, g_ang = sol.gradient_polar(rho.ravel(), th_flat)
    wf = w.ravel()
    int_u = float(wf @ vals)
    int_grad_sq = float(wf @ (g_rho * g_rho + g_ang * g_ang))
    int_u_sq = float(wf @ (vals * vals))
    bd = _boundary(d, n_theta)
    bvals = sol.values(bd.r, bd.theta)
    bd_u_sq = float(bd.dS @ (bvals * bvals))
    return int_u, int_grad_sq, int_u_sq, bd_u_sq


def _quad_sizes(modes: int) -> tuple[int, int]:
    return max(64, 4 * modes + 16), max(48, modes + 8)


def solve_perturbed_torsion(
    d: StarDomain, alpha: float, modes: int = 32
) -> OracleSolution:
    """Torsion state on the perturbed domain: -Lap u = 1 inside,
    du/dnu + alpha u = 0 on the boundary.

    Ansatz: u = -|y|^2/(2n) + harmonic expansion up to degree `modes`; the
    Robin condition is fitted at OVERSAMPLE times as many equispaced
    collocation angles as there are basis functions.
    """
    _validate_domain(d)
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero")
    n_basis = 2 * modes + 1 if d.n == 2 else modes + 1
    bd = _boundary(d, OVERSAMPLE * n_basis)
    scale = float(np.max(bd.r))

    degrees, T, dT = _angular_parts(d.n, modes, bd.theta)
    Rf, dRf = _radial_harmonic(degrees, bd.r, scale)
    A = (bd.nu_rho * (dRf * T) + bd.nu_theta * (Rf * dT) / bd.r + alpha * Rf * T).T
    rhs = -(bd.nu_rho * (-bd.r / d.n) + alpha * (-bd.r**2 / (2.0 * d.n)))

    col_norm = np.linalg.norm(A, axis=0)
    col_scale = np.maximum(col_norm, 1e-8 * col_norm.max())
    y, _, _, svals = np.linalg.lstsq(A / col_scale, rhs, rcond=None)
    condition = float(svals[0] / svals[-1])
    coeffs = y / col_scale
    residual = float(np.max(np.abs(A @ coeffs - rhs)))
    if condition > CONDITION_LIMIT:
        raise ArithmeticError(
            f"ill-conditioned collocation (estimate {condition:.2e})"
        )
    if residual > RESIDUAL_LIMIT:
        raise ArithmeticError(
            f"boundary residual {residual:.2e} exceeds {RESIDUAL_LIMIT:.0e} "
            f"(condition estimate {condition:.2e})"
        )

    sol = OracleSolution(
        kind=TORSION,
        domain=d,
        alpha=alpha,
        modes=modes,
        coefficients=coeffs,
        lam=None,
        residual=residual,
        condition=condition,
        energy=math.nan,
        volume=exact_volume(d),
        surface=exact_surface_area(d),
        _scale=scale,
    )
    n_theta, n_rho = _quad_sizes(modes)
    int_u, int_grad_sq, _, bd_u_sq = _integrals(sol, n_theta, n_rho)
    sol.energy = int_grad_sq - 2.0 * int_u + alpha * bd_u_sq
    return sol


def _subspace_sigma(
    B: np.ndarray, M: np.ndarray, want_vector: bool = False
) -> tuple[float, np.ndarray | None, float]:
    """Smallest angle between the trial space and boundary-vanishing fields.

    Orthonormalizes the stacked (boundary; interior) sample matrix and takes
    the smallest singular value of the boundary block: small iff some trial
    combination nearly vanishes on the boundary while staying of unit size
    inside.  Columns are rescaled to unit norm, so tiny natural scales cost
    nothing; only underflowed (exactly zero) columns are dropped.  Returns
    (sigma, coefficients or None, condition estimate)."""
    S = np.vstack([B, M])
    norms = np.linalg.norm(S, axis=0)
    keep = norms > 0.0
    Q, R = np.linalg.qr(S[:, keep] / norms[keep])
    _, svals, vt = np.linalg.svd(Q[: B.shape[0]], full_matrices=False)
    sigma = float(svals[-1])
    if not want_vector:
        return sigma, None, math.nan
    diag = np.abs(np.diagonal(R))
    condition = float(diag.max() / max(diag.min(), 1e-300))
    y = np.linalg.solve(R, vt[-1])
    coeffs = np.zeros(norms.shape[0])
    coeffs[keep] = y / norms[keep]
    return sigma, coeffs, condition


def _golden_min(f, a: float, b: float, xtol: float, maxiter: int = 200) -> float:
    """Abscissa of the minimum of f on [a, b] to bracket width xtol."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = f(e)
    return c if fc < fe else e


def solve_perturbed_eigen(
    d: StarDomain,
    alpha: float | None,
    modes: int = 20,
    kind: str = ROBIN_EIGEN,
) -> OracleSolution:
    """First eigenvalue lam(t) of -Lap u = lam u on the perturbed domain with
    the Robin (du/dnu + alpha u = 0) or Dirichlet (u = 0) condition.

    The boundary-condition collocation matrix A(lam) is built from wave
    ansatz elements; lam is located by minimizing its smallest singular
    value near the unperturbed value, and the Rayleigh quotient of the
    reconstructed eigenfunction must reproduce lam to 1e-8.
    """
    _validate_domain(d)
    if kind == ROBIN_EIGEN:
        if alpha is None or alpha <= 0.0:
            raise ValueError("Robin eigenvalue oracle needs alpha > 0")
        lam0 = solve_robin_eigen_ball(d.n, d.R, alpha).lam
    elif kind == DIRICHLET_EIGEN:
        alpha = 0.0
        lam0 = solve_dirichlet_eigen_ball(d.n, d.R).lam
    else:
        raise ValueError(f"unsupported kind {kind!r}")

    n_basis = 2 * modes + 1 if d.n == 2 else modes + 1
    bd = _boundary(d, OVERSAMPLE * n_basis)
    degrees, T, dT = _angular_parts(d.n, modes, bd.theta)
    # interior sample rings normalizing the trial functions' bulk size
    int_theta = bd.theta[::2]
    int_r = bd.r[::2]
    _, T_int, _ = _angular_parts(d.n, modes, int_theta)
    int_rho = np.concatenate([0.45 * int_r, 0.8 * int_r])
    T_in = np.hstack([T_int, T_int])

    def matrices(lam: float) -> tuple[np.ndarray, np.ndarray]:
        Rf, dRf = _radial_wave(d.n, degrees, lam, bd.r)
        M = (_radial_wave(d.n, degrees, lam, int_rho)[0] * T_in).T
        if kind == DIRICHLET_EIGEN:
            return (Rf * T).T, M
        B = (
            bd.nu_rho * (dRf * T) + bd.nu_theta * (Rf * dT) / bd.r + alpha * Rf * T
        ).T
        return B, M

    def sigma_at(lam: float) -> float:
        return _subspace_sigma(*matrices(lam))[0]

    grid = lam0 * np.linspace(0.6, 1.5, 37)
    sigmas = [sigma_at(lam) for lam in grid]
    best = int(np.argmin(sigmas))
    if best in (0, len(grid) - 1):
        raise ArithmeticError(
            "root isolation failed: no interior singular-value minimum "
            f"near lam = {lam0:.6g}"
        )
    # width-based golden section: library minimizers stop at sqrt(eps)|x|,
    # too coarse for clean second differences of lam(t)
    lam = _golden_min(sigma_at, grid[best - 1], grid[best + 1], 1e-13 * lam0)
    B, M = matrices(lam)
    _, coeffs, condition = _subspace_sigma(B, M, want_vector=True)
    if condition > CONDITION_LIMIT:
        raise ArithmeticError(
            f"degenerate collocation basis near lam = {lam:.6g} "
            f"(condition estimate {condition:.2e})"
        )

    sol = OracleSolution(
        kind=kind,
        domain=d,
        alpha=alpha,
        modes=modes,
        coefficients=coeffs,
        lam=lam,
        residual=math.nan,
        condition=condition,
        energy=lam,
        volume=exact_volume(d),
        surface=exact_surface_area(d),
        _scale=1.0,
    )
    n_theta, n_rho = _quad_sizes(modes)
    int_u, int_grad_sq, int_u_sq, bd_u_sq = _integrals(sol, n_theta, n_rho)
    norm = math.sqrt(int_u_sq)
    sol.coefficients = coeffs / norm
    # fix the overall sign: the ground state has one sign; make it positive
    probe = sol.values(
        np.full(4, 0.3 * d.R), np.linspace(0.3, 5.9, 4)
    )
    if probe.sum() < 0.0:
        sol.coefficients = -sol.coefficients
    rayleigh = (int_grad_sq + alpha * bd_u_sq) / int_u_sq
    if abs(rayleigh - lam) > 1e-8 * max(1.0, abs(lam)):
        raise ArithmeticError(
            f"Rayleigh quotient {rayleigh!r} disagrees with the located "
            f"eigenvalue {lam!r}"
        )

    bvals = sol.values(bd.r, bd.theta)
    if kind == DIRICHLET_EIGEN:
        sol.residual = float(np.max(np.abs(bvals)))
    else:
        g_rho, g_ang = sol.gradient_polar(bd.r, bd.theta)
        robin = bd.nu_rho * g_rho + bd.nu_theta * g_ang + alpha * bvals
        sol.residual = float(np.max(np.abs(robin)))
    if sol.residual > RESIDUAL_LIMIT:
        raise ArithmeticError(
            f"boundary residual {sol.residual:.2e} exceeds {RESIDUAL_LIMIT:.0e}"
        )
    return sol


def energy_of(sol: OracleSolution, p: BallProblem) -> float:
    """Energy of an oracle solution, with the built-in consistency check.

    Torsion: E = int |grad u|^2 - 2 int G(u) + alpha boundary-int u^2 with
    G(u) = u, cross-checked against the weak form E = -int u to 1e-9.
    Eigenvalue kinds: the Rayleigh quotient of the stored eigenfunction.
    """
    if p.kind != sol.kind or p.n != sol.n:
        raise ValueError("problem does not match the solution")
    if sol.kind != DIRICHLET_EIGEN and p.alpha != sol.alpha:
        raise ValueError("problem does not match the solution")
    n_theta, n_rho = _quad_sizes(sol.modes)
    int_u, int_grad_sq, int_u_sq, bd_u_sq = _integrals(sol, n_theta, n_rho)
    if sol.kind == TORSION:
        direct = int_grad_sq - 2.0 * int_u + sol.alpha * bd_u_sq
        weak = -int_u
        if abs(direct - weak) > 1e-9 * max(1.0, abs(direct)):
            raise ArithmeticError(
                f"energy forms disagree: {direct!r} vs {weak!r}"
            )
        return direct
    return (int_grad_sq + sol.alpha * bd_u_sq) / int_u_sq


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Derivatives:
    """First and second derivative at 0 with Richardson error estimates."""

    d1: float
    d2: float
    d1_error: float
    d2_error: float

    def __iter__(self):
        return iter((self.d1, self.d2))


def finite_difference_derivatives(
    f, h: float = 5e-3, richardson_levels: int = 1
) -> Derivatives:
    """Central differences of f at 0 over steps h 2^m, extrapolated.

    Evaluates f at 0 and +-(h, 2h, ..., 2^levels h); the error estimate is
    the difference between the last two Richardson diagonals.  Raises when
    refinement makes the estimates worse (step too small, cancellation).
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    if richardson_levels < 0:
        raise ValueError("richardson_levels must be >= 0")
    levels = richardson_levels
    f0 = f(0.0)
    steps = [h * 2.0 ** (levels - m) for m in range(levels + 1)]
    d1 = []
    d2 = []
    for s in steps:
        fp, fm = f(s), f(-s)
        d1.append([(fp - fm) / (2.0 * s)])
        d2.append([(fp - 2.0 * f0 + fm) / (s * s)])
    for m in range(1, levels + 1):
        for table in (d1, d2):
            for j in range(1, m + 1):
                factor = 4.0**j
                table[m].append(
                    (factor * table[m][j - 1] - table[m - 1][j - 1])
                    / (factor - 1.0)
                )
    if levels == 0:
        return Derivatives(float(d1[0][0]), float(d2[0][0]), math.nan, math.nan)
    diag1 = [d1[m][m] for m in range(levels + 1)]
    diag2 = [d2[m][m] for m in range(levels + 1)]
    err1 = abs(diag1[-1] - diag1[-2])
    err2 = abs(diag2[-1] - diag2[-2])
    if levels >= 2:
        prev1 = abs(diag1[-2] - diag1[-3])
        prev2 = abs(diag2[-2] - diag2[-3])
        scale = max(1.0, abs(diag2[-1]), abs(diag1[-1]))
        # noise floors are normal; only clear blow-up under refinement counts
        if (err1 > 10.0 * prev1 and err1 > 1e-4 * scale) or (
            err2 > 10.0 * prev2 and err2 > 1e-4 * scale
        ):
            raise ArithmeticError(
                "finite differences diverge under refinement; "
                "h is too small for the available precision"
            )
    return Derivatives(float(diag1[-1]), float(diag2[-1]), float(err1), float(err2))


# ---------------------------------------------------------------------------
# curves in t and sweep tables
# ---------------------------------------------------------------------------


def torsion_energy_curve(p: PerturbationField, alpha: float, modes: int = 28):
    """t -> E(t) for the torsion energy on the perturbed family."""

    def f(t: float) -> float:
        return solve_perturbed_torsion(perturbed_domain(p, t), alpha, modes).energy

    return f


def eigenvalue_curve(
    p: PerturbationField,
    alpha: float | None,
    modes: int = 20,
    kind: str = ROBIN_EIGEN,
):
    """t -> lam(t) for the first Robin or Dirichlet eigenvalue."""

    def f(t: float) -> float:
        return solve_perturbed_eigen(perturbed_domain(p, t), alpha, modes, kind).lam

    return f


def surface_curve(p: PerturbationField, order: int | None = None):
    def f(t: float) -> float:
        return exact_surface_area(perturbed_domain(p, t), order=order)

    return f


def volume_curve(p: PerturbationField, order: int | None = None):
    def f(t: float) -> float:
        return exact_volume(perturbed_domain(p, t), order=order)

    return f


def sweep_rows(
    p: PerturbationField,
    alpha: float,
    kind: str,
    ts,
    modes: int = 20,
) -> list[tuple[float, float, float, float, float]]:
    """Rows (t, E, lam, S, V) along the family; lam is NaN for torsion."""
    rows = []
    for t in ts:
        d = perturbed_domain(p, float(t))
        if kind == TORSION:
            sol = solve_perturbed_torsion(d, alpha, modes=max(modes, 24))
            lam = math.nan
        else:
            sol = solve_perturbed_eigen(d, alpha, modes=modes, kind=kind)
            lam = sol.lam
        rows.append(
            (float(t), float(sol.energy), float(lam), float(sol.surface), float(sol.volume))
        )
    return rows
