"""Dynamical state (rho, u, w_eff) and derived physical quantities.

The effective velocity is w_eff = u - 2 nu0 perp_grad(log rho); it is
divergence-free whenever u is, and the pair (u, w_eff) each transports the
other in the reformulated system.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .grid import Grid, advect_scalar

RHO_FLOOR = 1e-6


class DensityFloorError(ValueError):
    """Density dropped to (or below) the positivity floor."""


@dataclass
class State:
    """Time, density, velocity, effective velocity, and odd viscosity coefficient."""

    t: float
    rho: np.ndarray
    u: np.ndarray
    w_eff: np.ndarray
    nu0: float
    grid: Grid

    def check_finite(self) -> bool:
        return bool(
            np.isfinite(self.rho).all()
            and np.isfinite(self.u).all()
            and np.isfinite(self.w_eff).all()
        )

    def rho_min(self) -> float:
        return float(np.min(self.rho))

    def rho_max(self) -> float:
        return float(np.max(self.rho))

    def div_residuals(self) -> tuple[float, float]:
        g = self.grid
        return (
            float(np.max(np.abs(g.divergence(self.u)))),
            float(np.max(np.abs(g.divergence(self.w_eff)))),
        )

    def compatibility_residual(self) -> float:
        """Max norm of w_eff - (u - 2 nu0 perp_grad log rho)."""
        w = effective_velocity(self.grid, self.rho, self.u, self.nu0)
        return float(np.max(np.abs(self.w_eff - w)))

    def copy(self) -> "State":
        return replace(self, rho=self.rho.copy(), u=self.u.copy(), w_eff=self.w_eff.copy())


def log_density(rho: np.ndarray, floor: float = RHO_FLOOR) -> np.ndarray:
    if float(np.min(rho)) <= floor:
        raise DensityFloorError(f"min(rho) = {np.min(rho):.3e} <= floor {floor:.1e}")
    return np.log(rho)


def effective_velocity(grid: Grid, rho: np.ndarray, u: np.ndarray, nu0: float) -> np.ndarray:
    """w_eff = u - 2 nu0 perp_grad(log rho).

    The pointwise logarithm is dealiased so that every derived field stays
    supported in the 2/3 mask; all identities are then exact at the discrete
    level.
    """
    return u - 2.0 * nu0 * grid.perp_grad(grid.dealias(log_density(rho)))


def make_state(grid: Grid, rho: np.ndarray, u: np.ndarray, nu0: float,
               t: float = 0.0) -> State:
    """Assemble a compatible state, deriving w_eff from (rho, u)."""
    return State(t=t, rho=rho, u=u,
                 w_eff=effective_velocity(grid, rho, u, nu0), nu0=nu0, grid=grid)


def vorticity(grid: Grid, u: np.ndarray) -> np.ndarray:
    return grid.curl(u)


def odd_tensor_divergence(grid: Grid, rho: np.ndarray, u: np.ndarray,
                          nu0: float) -> np.ndarray:
    """nu0 div(rho (grad(u_perp) + perp_grad(u))), the odd stress divergence."""
    u_perp = np.stack([-u[1], u[0]])
    m = grid.jacobian_T(u_perp) + grid.perp_jacobian_T(u)
    return nu0 * grid.matrix_divergence(m, rho)


def odd_tensor_divergence_split(grid: Grid, rho: np.ndarray, u: np.ndarray,
                                nu0: float) -> np.ndarray:
    """Equivalent split form 2 nu0 div(rho grad(u_perp)) + nu0 grad(rho omega)."""
    u_perp = np.stack([-u[1], u[0]])
    part1 = 2.0 * nu0 * grid.matrix_divergence(grid.jacobian_T(u_perp), rho)
    part2 = nu0 * grid.grad(grid.product(rho, grid.curl(u)))
    return part1 + part2


def skew_part_identity_residual(grid: Grid, rho: np.ndarray, u: np.ndarray,
                                nu0: float) -> float:
    """Max residual of 2 nu0 div(rho A u) = -nu0 perp_grad(rho omega),
    A u the skew part (Du - grad u)/2."""
    nab = grid.jacobian_T(u)
    skew = 0.5 * (np.swapaxes(nab, 0, 1) - nab)
    lhs = 2.0 * nu0 * grid.matrix_divergence(skew, rho)
    rhs = -nu0 * grid.perp_grad(grid.product(rho, grid.curl(u)))
    return float(np.max(np.abs(lhs - rhs)))


def bilinear_B(grid: Grid, u: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """B(grad u, hess alpha) = d1u1 (d11 a - d22 a) + d12 a (d1u2 + d2u1)."""
    d1u1 = grid.dx1(u[0])
    d1u2 = grid.dx1(u[1])
    d2u1 = grid.dx2(u[0])
    a11 = grid.dx1(grid.dx1(alpha))
    a22 = grid.dx2(grid.dx2(alpha))
    a12 = grid.dx1(grid.dx2(alpha))
    return grid.dealias(d1u1 * (a11 - a22) + a12 * (d1u2 + d2u1))


def bilinear_L(grid: Grid, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """L(grad f, grad g) = d1f1 (d1g2 + d2g1) + d2g2 (d1f2 + d2f1),
    skew-symmetric on pairs of divergence-free fields."""
    return grid.dealias(
        grid.dx1(f[0]) * (grid.dx1(g[1]) + grid.dx2(g[0]))
        + grid.dx2(g[1]) * (grid.dx1(f[1]) + grid.dx2(f[0]))
    )


def vorticity_sources(state: State, pi0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Source terms of the vorticity system, oriented so that
    d/dt omega + w_eff . grad omega = F - 2 nu0 G and
    d/dt zeta  + u     . grad zeta  = F + 2 nu0 G.

    F is minus the baroclinic-type term perp_grad(1/rho) . grad pi0 under
    this module's perp convention; G is the strain-Hessian form
    B(grad u, hess log rho)."""
    g = state.grid
    inv_rho = 1.0 / state.rho
    pg = g.perp_grad(g.dealias(inv_rho))
    gp = g.grad(pi0)
    f_src = -g.dealias(pg[0] * gp[0] + pg[1] * gp[1])
    g_src = bilinear_B(g, state.u, g.dealias(log_density(state.rho)))
    return f_src, g_src


def vorticity_rhs(state: State, pi0: np.ndarray) -> np.ndarray:
    """Right side of the omega equation: F - 2 nu0 G - w_eff . grad omega."""
    g = state.grid
    f_src, g_src = vorticity_sources(state, pi0)
    omega = g.curl(state.u)
    return f_src - 2.0 * state.nu0 * g_src - advect_scalar(g, state.w_eff, omega)
