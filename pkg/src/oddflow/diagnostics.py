"""Monitored functionals: energies, Besov functionals, blow-up integrand,
stability distance, and the iterated-log lifespan lower bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields as dc_fields

import numpy as np

from .grid import Grid, advect_scalar
from .littlewood_paley import BesovIndex, DyadicCutoffs, besov_norm, besov_norm_vector
from .pressure import solve_pi0
from .state import State, log_density, vorticity_sources

CSV_COLUMNS = [
    "t", "kinetic_energy", "rho_min", "rho_max", "u_L2", "grad_u_inf",
    "hess_rho_inf", "div_u_inf", "div_w_inf", "compat_inf", "E_s", "E_lower",
    "H_upper", "A_t", "grad_pi0_L2", "grad_pi0_inf", "vorticity_residual",
]


@dataclass
class DiagnosticsRecord:
    t: float
    kinetic_energy: float
    rho_min: float
    rho_max: float
    u_L2: float
    grad_u_inf: float
    hess_rho_inf: float
    div_u_inf: float
    div_w_inf: float
    compat_inf: float
    E_s: float
    E_lower: float
    H_upper: float
    A_t: float
    grad_pi0_L2: float
    grad_pi0_inf: float
    vorticity_residual: float

    def as_row(self) -> list[float]:
        return [getattr(self, f.name) for f in dc_fields(self)]


def kinetic_energy(grid: Grid, rho: np.ndarray, u: np.ndarray) -> float:
    return 0.5 * grid.integral(rho * (u[0] ** 2 + u[1] ** 2))


def grad_inf(grid: Grid, u: np.ndarray) -> float:
    """Max absolute entry of the (transposed) Jacobian."""
    return float(np.max(np.abs(grid.jacobian_T(u))))


def hessian_inf(grid: Grid, f: np.ndarray) -> float:
    """Max absolute entry of the full Hessian."""
    fh = grid.fft(f)
    entries = [
        grid.ifft(-grid.kx * grid.kx * fh),
        grid.ifft(-grid.kx * grid.ky * fh),
        grid.ifft(-grid.ky * grid.ky * fh),
    ]
    return float(max(np.max(np.abs(e)) for e in entries))


def energy_functional(cut: DyadicCutoffs, state: State, s: float,
                      r: float) -> float:
    """E_s = ||u||_L2 + ||rho||_Linf + ||omega||_B^{s-1}_{inf,r} + ||zeta_eff||_B^{s-1}_{inf,r}."""
    g = state.grid
    idx = BesovIndex(s - 1.0, np.inf, r)
    omega = g.curl(state.u)
    zeta = g.curl(state.w_eff)
    return (g.l2_norm(np.sqrt(state.u[0] ** 2 + state.u[1] ** 2))
            + float(np.max(np.abs(state.rho)))
            + besov_norm(cut, omega, idx)
            + besov_norm(cut, zeta, idx))


def blowup_integrand(state: State) -> float:
    """A(t) = 1 + ||grad rho||_inf^5 + ||grad u||_inf^{5/2} + ||hess rho||_inf^{5/2}."""
    g = state.grid
    grho = float(np.max(np.abs(g.grad(state.rho))))
    return (1.0 + grho**5
            + grad_inf(g, state.u) ** 2.5
            + hessian_inf(g, state.rho) ** 2.5)


def reduced_blowup_integrand(state: State) -> float:
    """Integrand of the blow-up criterion: ||grad u||^{5/2} + ||hess rho||^{5/2}."""
    g = state.grid
    return grad_inf(g, state.u) ** 2.5 + hessian_inf(g, state.rho) ** 2.5


def lifespan_lower_bound(cut: DyadicCutoffs, omega0: np.ndarray,
                         rho0: np.ndarray, K: float = 1.0) -> float:
    """Iterated-log lifespan bound from the initial vorticity and density.

    T = K / (1 + N1) * phi^(4)(1 / ||grad rho0||_B1), with
    N1 = ||(omega0, Lap log rho0)||_B1 and phi(z) = log(1 + K z / (1 + N1)^3),
    all Besov indices B^1_{inf,1}.
    """
    if K <= 0:
        raise ValueError("K must be positive")
    g = cut.grid
    idx = BesovIndex(1.0, np.inf, 1.0)
    lap_log = g.laplacian(g.dealias(log_density(rho0)))
    n1 = besov_norm(cut, omega0, idx) + besov_norm(cut, lap_log, idx)
    grad_rho_norm = besov_norm_vector(cut, g.grad(rho0), idx)
    if grad_rho_norm == 0.0:
        return math.inf
    coeff = K / (1.0 + n1) ** 3
    z = 1.0 / grad_rho_norm
    for _ in range(4):
        z = math.log1p(coeff * z)
    return K / (1.0 + n1) * z


def stability_distance(a: State, b: State) -> float:
    """||delta rho||_L2 + ||delta u||_L2 + ||delta w_eff||_L2."""
    if a.grid.n != b.grid.n or a.grid.L != b.grid.L:
        raise ValueError("states live on different grids")
    g = a.grid
    du = a.u - b.u
    dw = a.w_eff - b.w_eff
    return (g.l2_norm(a.rho - b.rho)
            + g.l2_norm(np.sqrt(du[0] ** 2 + du[1] ** 2))
            + g.l2_norm(np.sqrt(dw[0] ** 2 + dw[1] ** 2)))


def b0_norm_history(cut: DyadicCutoffs, fields: list[np.ndarray]) -> list[float]:
    """||.||_B^0_{inf,1} over a stored field history."""
    idx = BesovIndex(0.0, np.inf, 1.0)
    return [besov_norm(cut, f, idx) for f in fields]


def doubling_time(times: list[float], values: list[float]) -> float | None:
    """First time the series reaches twice its initial value (linear
    interpolation); None if it never does (censored)."""
    target = 2.0 * values[0]
    for i in range(1, len(values)):
        if values[i] >= target:
            t0, t1 = times[i - 1], times[i]
            v0, v1 = values[i - 1], values[i]
            if v1 == v0:
                return t1
            return t0 + (target - v0) * (t1 - t0) / (v1 - v0)
    return None


class DiagnosticsCollector:
    """Builds one DiagnosticsRecord per sample; keeps the previous sample to
    form the finite-difference vorticity residual."""

    def __init__(self, grid: Grid, cut: DyadicCutoffs, s: float = 1.0,
                 r: float = 1.0, pressure_rtol: float = 1e-10):
        self.grid = grid
        self.cut = cut
        self.s = s
        self.r = r
        self.pressure_rtol = pressure_rtol
        self.records: list[DiagnosticsRecord] = []
        self._prev: tuple[float, np.ndarray, np.ndarray] | None = None

    def sample(self, state: State) -> DiagnosticsRecord:
        g = self.grid
        pi0, _ = solve_pi0(g, state.rho, state.u, state.w_eff,
                           rtol=self.pressure_rtol)
        gp = g.grad(pi0)
        gp_mag = np.sqrt(gp[0] ** 2 + gp[1] ** 2)

        f_src, g_src = vorticity_sources(state, pi0)
        omega = g.curl(state.u)
        adv = advect_scalar(g, state.w_eff, omega)
        rhs = f_src - 2.0 * state.nu0 * g_src - adv

        vort_res = 0.0
        if self._prev is not None:
            t_prev, omega_prev, rhs_prev = self._prev
            dt = state.t - t_prev
            if dt > 0:
                fd = (omega - omega_prev) / dt
                mid = 0.5 * (rhs + rhs_prev)
                scale = max(float(np.max(np.abs(mid))), 1e-12)
                vort_res = float(np.max(np.abs(fd - mid))) / scale
        self._prev = (state.t, omega, rhs)

        div_u, div_w = state.div_residuals()
        rec = DiagnosticsRecord(
            t=state.t,
            kinetic_energy=kinetic_energy(g, state.rho, state.u),
            rho_min=state.rho_min(),
            rho_max=state.rho_max(),
            u_L2=g.l2_norm(np.sqrt(state.u[0] ** 2 + state.u[1] ** 2)),
            grad_u_inf=grad_inf(g, state.u),
            hess_rho_inf=hessian_inf(g, state.rho),
            div_u_inf=div_u,
            div_w_inf=div_w,
            compat_inf=state.compatibility_residual(),
            E_s=energy_functional(self.cut, state, self.s, self.r),
            E_lower=energy_functional(self.cut, state, 1.0, 1.0),
            H_upper=energy_functional(self.cut, state, 2.0, 1.0),
            A_t=blowup_integrand(state),
            grad_pi0_L2=g.l2_norm(gp_mag),
            grad_pi0_inf=float(np.max(gp_mag)),
            vorticity_residual=vort_res,
        )
        self.records.append(rec)
        return rec
