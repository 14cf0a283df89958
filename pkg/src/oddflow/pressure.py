"""Variable-coefficient elliptic solves for the modified and original pressures.

Both pressures solve -div((1/rho) grad p) = rhs on the torus with zero-mean
gauge.  The operator is symmetric positive definite on zero-mean fields, so we
use conjugate gradients preconditioned by the constant-coefficient inverse
Laplacian scaled by the mean density; for smooth rho this keeps the iteration
count essentially mesh-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, convect
from .state import log_density, odd_tensor_divergence


@dataclass
class EllipticSolveReport:
    iterations: int
    relative_residual: float
    converged: bool


class EllipticSolveError(RuntimeError):
    """CG failed to reach the requested tolerance."""

    def __init__(self, report: EllipticSolveReport):
        super().__init__(
            f"elliptic solve did not converge: {report.iterations} iterations, "
            f"relative residual {report.relative_residual:.3e}"
        )
        self.report = report


def _apply_operator(grid: Grid, inv_rho: np.ndarray, p: np.ndarray) -> np.ndarray:
    """-div((1/rho) grad p), products dealiased.

    Fused spectral form (the dealias mask and the derivative act in one pass
    per flux component); this sits in the CG inner loop.
    """
    gp = grid.grad(p)
    m = grid.dealias_mask
    th0 = m * grid.fft(inv_rho * gp[0])
    th1 = m * grid.fft(inv_rho * gp[1])
    return -grid.ifft(1j * grid.kx * th0 + 1j * grid.ky * th1)


def solve_variable_poisson(grid: Grid, rho: np.ndarray, rhs: np.ndarray,
                           rtol: float = 1e-10, max_iters: int = 500,
                           x0: np.ndarray | None = None,
                           ) -> tuple[np.ndarray, EllipticSolveReport]:
    """Zero-mean solution of -div((1/rho) grad p) = rhs by preconditioned CG.

    The right side is projected to zero mean first (torus solvability); the
    tolerance is ||r||_2 / ||rhs||_2 with an absolute floor for rhs ~ 0.
    Raises EllipticSolveError on non-convergence.
    """
    log_density(rho)  # rejects nonpositive density
    inv_rho = grid.dealias(1.0 / rho)
    rho_bar = float(np.mean(rho))

    b = grid.zero_mean(rhs)
    b_norm = grid.l2_norm(b)
    if b_norm < 1e-14:
        report = EllipticSolveReport(iterations=0, relative_residual=0.0, converged=True)
        return np.zeros_like(rhs), report

    def precond(r: np.ndarray) -> np.ndarray:
        # exact inverse of -(1/rho_bar) Laplacian on zero-mean fields
        return grid.ifft(rho_bar * grid.inv_k2 * grid.fft(r))

    if x0 is None:
        x = np.zeros_like(b)
        r = b.copy()
    else:
        x = grid.zero_mean(x0)
        r = grid.zero_mean(b - _apply_operator(grid, inv_rho, x))
    z = precond(r)
    p = z.copy()
    rz = grid.integral(r * z)

    rel = grid.l2_norm(r) / b_norm
    iters = 0
    while rel > rtol and iters < max_iters:
        ap = grid.zero_mean(_apply_operator(grid, inv_rho, p))
        alpha = rz / grid.integral(p * ap)
        x = x + alpha * p
        r = r - alpha * ap
        rel = grid.l2_norm(r) / b_norm
        iters += 1
        if rel <= rtol:
            break
        z = precond(r)
        rz_new = grid.integral(r * z)
        beta = rz_new / rz
        rz = rz_new
        p = z + beta * p

    report = EllipticSolveReport(iterations=iters, relative_residual=rel,
                                 converged=rel <= rtol)
    if not report.converged:
        raise EllipticSolveError(report)
    return grid.zero_mean(x), report


def solve_pi0(grid: Grid, rho: np.ndarray, u: np.ndarray, w_eff: np.ndarray,
              rtol: float = 1e-10, max_iters: int = 500,
              x0: np.ndarray | None = None,
              ) -> tuple[np.ndarray, EllipticSolveReport]:
    """Modified pressure of the reformulated system:
    -div((1/rho) grad pi0) = div(u . grad w_eff)."""
    rhs = grid.divergence(convect(grid, u, w_eff))
    return solve_variable_poisson(grid, rho, rhs, rtol=rtol, max_iters=max_iters, x0=x0)


def solve_pi_original(grid: Grid, rho: np.ndarray, u: np.ndarray, nu0: float,
                      rtol: float = 1e-10, max_iters: int = 500,
                      x0: np.ndarray | None = None,
                      ) -> tuple[np.ndarray, EllipticSolveReport]:
    """Pressure of the original formulation, enforcing div(du/dt) = 0:
    -div((1/rho) grad pi) = div(u . grad u + (1/rho) odd_stress_div)."""
    odd = odd_tensor_divergence(grid, rho, u, nu0)
    inv_rho = grid.dealias(1.0 / rho)
    vec = convect(grid, u, u) + np.stack([
        grid.product(inv_rho, odd[0]),
        grid.product(inv_rho, odd[1]),
    ])
    rhs = grid.divergence(vec)
    return solve_variable_poisson(grid, rho, rhs, rtol=rtol, max_iters=max_iters, x0=x0)


def pi0_laplacian_identity_residual(grid: Grid, rho: np.ndarray, u: np.ndarray,
                                    w_eff: np.ndarray, pi0: np.ndarray) -> float:
    """Max residual of -Lap(pi0) = -grad(log rho) . grad(pi0) + rho grad u : grad w_eff."""
    lhs = -grid.laplacian(pi0)
    gl = grid.grad(grid.dealias(log_density(rho)))
    gp = grid.grad(pi0)
    term1 = -grid.dealias(gl[0] * gp[0] + gl[1] * gp[1])
    # grad u : grad w = sum_ij (d_i u_j)(d_j w_i) = div(u . grad w) for div-free w
    du = grid.jacobian_T(u)
    dw = grid.jacobian_T(w_eff)
    frob = sum(du[i, j] * dw[j, i] for i in range(2) for j in range(2))
    term2 = grid.product(rho, grid.dealias(frob))
    return float(np.max(np.abs(lhs - term1 - term2)))
