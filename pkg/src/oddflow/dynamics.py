"""Time integration of the original and reformulated systems.

Original (formulation A) evolves (rho, u); the reformulated system
(formulation B) additionally evolves w_eff as an independent unknown, with the
compatibility relation w_eff = u - 2 nu0 perp_grad(log rho) monitored, not
enforced.  Classical explicit RK4 with a CFL-limited step; the odd stress is
dispersive (skew), so stability needs |lambda| dt <= 2 sqrt(2) along the
imaginary axis, giving the k_max^2 restriction in `time_step`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import Grid, advect_scalar, convect
from .pressure import (EllipticSolveReport, solve_pi0, solve_pi_original)
from .state import DensityFloorError, State, effective_velocity

FORMULATIONS = ("original", "elsasser")


@dataclass
class SolverConfig:
    formulation: str = "elsasser"
    n: int = 64
    L: float = 2.0 * np.pi
    nu0: float = 0.1
    cfl_adv: float = 0.5
    cfl_odd: float = 1.0
    t_end: float = 1.0
    dt_max: float = 0.05
    reproject_every: int = 1
    rho_floor: float = 1e-6
    pressure_rtol: float = 1e-10
    pressure_max_iters: int = 500

    def __post_init__(self) -> None:
        if self.formulation not in FORMULATIONS:
            raise ValueError(f"formulation must be one of {FORMULATIONS}")
        for name in ("n", "L", "nu0", "cfl_adv", "cfl_odd", "t_end", "dt_max",
                     "reproject_every", "rho_floor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"config field {name} must be positive")


@dataclass
class StepResult:
    state: State
    dt: float
    elliptic_report: EllipticSolveReport
    div_u_inf: float
    div_w_inf: float
    compat_inf: float


class BlowupSuspectedError(RuntimeError):
    """Density floor hit or non-finite fields: halt and report."""

    def __init__(self, message: str, state: State):
        super().__init__(message)
        self.state = state


@dataclass
class _Tendency:
    drho: np.ndarray
    du: np.ndarray
    dw: np.ndarray | None
    report: EllipticSolveReport


class Integrator:
    """One integration loop; keeps a pressure warm start across stages."""

    def __init__(self, config: SolverConfig, grid: Grid):
        self.config = config
        self.grid = grid
        self._pi_warm: np.ndarray | None = None

    # -- right-hand sides ---------------------------------------------------

    def rhs_original(self, state: State) -> _Tendency:
        g = self.grid
        pi, report = solve_pi_original(
            g, state.rho, state.u, state.nu0,
            rtol=self.config.pressure_rtol,
            max_iters=self.config.pressure_max_iters, x0=self._pi_warm)
        self._pi_warm = pi

        from .state import odd_tensor_divergence
        inv_rho = g.dealias(1.0 / state.rho)
        odd = odd_tensor_divergence(g, state.rho, state.u, state.nu0)
        gp = g.grad(pi)
        du = -convect(g, state.u, state.u) - np.stack([
            g.product(inv_rho, gp[0] + odd[0]),
            g.product(inv_rho, gp[1] + odd[1]),
        ])
        drho = -advect_scalar(g, state.u, state.rho)
        return _Tendency(drho=drho, du=du, dw=None, report=report)

    def rhs_elsasser(self, state: State) -> _Tendency:
        g = self.grid
        pi0, report = solve_pi0(
            g, state.rho, state.u, state.w_eff,
            rtol=self.config.pressure_rtol,
            max_iters=self.config.pressure_max_iters, x0=self._pi_warm)
        self._pi_warm = pi0

        inv_rho = g.dealias(1.0 / state.rho)
        gp = g.grad(pi0)
        press = np.stack([g.product(inv_rho, gp[0]), g.product(inv_rho, gp[1])])
        du = -convect(g, state.w_eff, state.u) - press
        dw = -convect(g, state.u, state.w_eff) - press
        drho = -advect_scalar(g, state.u, state.rho)
        return _Tendency(drho=drho, du=du, dw=dw, report=report)

    def rhs(self, state: State) -> _Tendency:
        if self.config.formulation == "original":
            return self.rhs_original(state)
        return self.rhs_elsasser(state)

    # -- stepping -----------------------------------------------------------

    def time_step(self, state: State) -> float:
        cfg = self.config
        g = self.grid
        speed = max(float(np.max(np.abs(state.u))),
                    float(np.max(np.abs(state.w_eff))), 1e-12)
        dt_adv = cfg.cfl_adv * g.dx / speed
        rho_ratio = state.rho_max() / max(state.rho_min(), cfg.rho_floor)
        dt_odd = cfg.cfl_odd * 2.0 * np.sqrt(2.0) / (
            2.0 * abs(state.nu0) * g.kcut**2 * rho_ratio)
        return min(cfg.dt_max, dt_adv, dt_odd)

    def _advance(self, state: State, dt: float, k: _Tendency, frac: float) -> State:
        rho = state.rho + frac * dt * k.drho
        u = state.u + frac * dt * k.du
        if k.dw is not None:
            w = state.w_eff + frac * dt * k.dw
        else:
            w = u  # unused by rhs_original; real w_eff is rebuilt per accepted step
        return State(t=state.t + frac * dt, rho=rho, u=u, w_eff=w,
                     nu0=state.nu0, grid=self.grid)

    def step(self, state: State, step_index: int = 0) -> StepResult:
        cfg = self.config
        g = self.grid
        dt = self.time_step(state)

        try:
            k1 = self.rhs(state)
            k2 = self.rhs(self._advance(state, dt, k1, 0.5))
            k3 = self.rhs(self._advance(state, dt, k2, 0.5))
            k4 = self.rhs(self._advance(state, dt, k3, 1.0))
        except DensityFloorError as exc:
            # a stage state crossed the positivity floor; the last accepted
            # state is still attached for post-mortem output
            raise BlowupSuspectedError(
                f"density floor crossed inside a stage at t = {state.t:.6f}: {exc}",
                state) from exc

        def combine(a, b, c, d):
            return (a + 2.0 * b + 2.0 * c + d) / 6.0

        rho = state.rho + dt * combine(k1.drho, k2.drho, k3.drho, k4.drho)
        u = state.u + dt * combine(k1.du, k2.du, k3.du, k4.du)
        if k1.dw is not None:
            w = state.w_eff + dt * combine(k1.dw, k2.dw, k3.dw, k4.dw)
        else:
            w = None

        if (step_index + 1) % cfg.reproject_every == 0:
            u = g.leray_project(u)
            if w is not None:
                w = g.leray_project(w)

        t_new = state.t + dt
        if not (np.isfinite(rho).all() and np.isfinite(u).all()):
            raise BlowupSuspectedError(f"non-finite fields at t = {t_new:.6f}", state)
        if float(np.min(rho)) <= cfg.rho_floor:
            raise BlowupSuspectedError(f"density floor reached at t = {t_new:.6f}", state)
        if w is None:
            w = effective_velocity(g, rho, u, state.nu0)
        elif not np.isfinite(w).all():
            raise BlowupSuspectedError(f"non-finite fields at t = {t_new:.6f}", state)

        new = State(t=t_new, rho=rho, u=u, w_eff=w, nu0=state.nu0, grid=g)

        div_u, div_w = new.div_residuals()
        return StepResult(state=new, dt=dt, elliptic_report=k4.report,
                          div_u_inf=div_u, div_w_inf=div_w,
                          compat_inf=new.compatibility_residual())


def run(config: SolverConfig, initial: State,
        monitor: Callable[[State, StepResult | None], None] | None = None,
        sample_every: int = 1) -> State:
    """Integrate to t_end, invoking `monitor` on the initial state and then
    every `sample_every` accepted steps (and on the final state).  A monitor
    returning True (the bool itself, so that monitors returning records keep
    working) stops the integration early."""
    integ = Integrator(config, initial.grid)
    state = initial
    if monitor is not None and monitor(state, None) is True:
        return state
    i = 0
    while state.t < config.t_end - 1e-12:
        # land exactly on t_end
        dt_cap = config.t_end - state.t
        saved_dt_max = integ.config.dt_max
        integ.config.dt_max = min(saved_dt_max, dt_cap)
        result = integ.step(state, step_index=i)
        integ.config.dt_max = saved_dt_max
        state = result.state
        i += 1
        if monitor is not None and (i % sample_every == 0 or
                                    state.t >= config.t_end - 1e-12):
            if monitor(state, result) is True:
                break
    return state
