"""Initial-condition library: Taylor-Green, shear layer, random divergence-free
velocity, and cosine density bumps rho0 = 1 + eps cos(m1 x) cos(m2 y)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid
from .state import State, make_state

FAMILIES = ("taylor_green", "shear_layer", "random_divfree")


@dataclass
class ScenarioSpec:
    name: str = "taylor_green"
    amplitude: float = 1.0
    epsilon: float = 0.0          # density variation amplitude
    bump_mode: tuple[int, int] = (1, 1)
    seed: int = 0
    spectrum_slope: float = -2.0
    spectrum_cutoff: float = 8.0  # physical wavenumber below which modes are seeded

    def __post_init__(self) -> None:
        if self.name not in FAMILIES:
            raise ValueError(f"unknown initial-condition family {self.name!r}")
        if not (0.0 <= self.epsilon < 1.0):
            raise ValueError("epsilon must keep rho0 = 1 - eps positive")


def taylor_green(grid: Grid, amplitude: float = 1.0) -> np.ndarray:
    """u = A (cos x sin y, -sin x cos y), steady for 2-D Euler on the 2 pi box
    with pressure -A^2 (cos 2x + cos 2y) / 4."""
    # coordinates scaled so one full TG cell fills the box for any L
    x = 2.0 * np.pi * grid.x / grid.L
    y = 2.0 * np.pi * grid.y / grid.L
    return amplitude * np.stack([np.cos(x) * np.sin(y), -np.sin(x) * np.cos(y)])


def shear_layer(grid: Grid, amplitude: float = 1.0, thickness: float = 0.2,
                perturbation: float = 0.05) -> np.ndarray:
    """Double tanh shear layer with a sinusoidal cross-stream perturbation."""
    y = 2.0 * np.pi * grid.y / grid.L
    x = 2.0 * np.pi * grid.x / grid.L
    u1 = amplitude * (np.tanh((y - np.pi / 2) / thickness)
                      - np.tanh((y - 3 * np.pi / 2) / thickness) - 1.0)
    u2 = perturbation * np.sin(x)
    v = np.stack([u1, u2])
    return grid.leray_project(np.stack([grid.dealias(v[0]), grid.dealias(v[1])]))


def random_divfree(grid: Grid, seed: int, slope: float = -2.0,
                   cutoff: float = 8.0, normalize_l2: float = 1.0) -> np.ndarray:
    """Leray-projected Gaussian field with |k|^slope amplitudes below `cutoff`."""
    rng = np.random.default_rng(seed)
    kmag = np.sqrt(grid.k2)
    amp = np.zeros_like(kmag)
    sel = (kmag > 0) & (kmag <= cutoff)
    amp[sel] = kmag[sel] ** slope

    def one_component() -> np.ndarray:
        coef = rng.standard_normal(kmag.shape) + 1j * rng.standard_normal(kmag.shape)
        return grid.ifft(amp * coef * grid.n**2)

    v = np.stack([one_component(), one_component()])
    v = grid.leray_project(np.stack([grid.dealias(v[0]), grid.dealias(v[1])]))
    norm = grid.l2_norm(np.sqrt(v[0] ** 2 + v[1] ** 2))
    if norm > 0:
        v *= normalize_l2 / norm
    return v


def density_bump(grid: Grid, epsilon: float, mode: tuple[int, int] = (1, 1)) -> np.ndarray:
    """rho0 = 1 + eps cos(m1 x) cos(m2 y); stays >= 1 - eps > 0."""
    x = 2.0 * np.pi * grid.x / grid.L
    y = 2.0 * np.pi * grid.y / grid.L
    return 1.0 + epsilon * np.cos(mode[0] * x) * np.cos(mode[1] * y)


def build_initial_state(grid: Grid, spec: ScenarioSpec, nu0: float) -> State:
    if spec.name == "taylor_green":
        u = taylor_green(grid, spec.amplitude)
    elif spec.name == "shear_layer":
        u = shear_layer(grid, spec.amplitude)
    else:
        u = random_divfree(grid, spec.seed, spec.spectrum_slope,
                           spec.spectrum_cutoff, normalize_l2=spec.amplitude)
    rho = density_bump(grid, spec.epsilon, spec.bump_mode)
    return make_state(grid, rho, u, nu0)
