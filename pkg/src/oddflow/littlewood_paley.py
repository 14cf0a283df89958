"""Dyadic frequency decomposition, Besov norms, Bony paraproducts, transport commutators.

All cutoffs act as Fourier multipliers on the physical wavenumber lattice
(2*pi/L scaling), so octave indices are grid-independent.  Blocks are truncated
at the largest octave populated below the dealias cutoff; for fields whose
spectrum lies inside the 2/3 mask the decomposition is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .grid import Grid


def _bump(t: np.ndarray) -> np.ndarray:
    """exp(-1/t) for t > 0, 0 otherwise (smooth, vanishing to all orders)."""
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def radial_profile(r: np.ndarray) -> np.ndarray:
    """Smooth cutoff: 1 on [0, 1], 0 on [2, inf), radially nonincreasing between."""
    r = np.asarray(r, dtype=float)
    up = _bump(2.0 - r)
    down = _bump(r - 1.0)
    out = np.where(r <= 1.0, 1.0, np.where(r >= 2.0, 0.0, up / (up + down + 1e-300)))
    return out


class DyadicCutoffs:
    """Low-pass profile chi and annular multipliers phi_j on a grid's lattice.

    phi_j(xi) = chi(2^-j xi) - chi(2^-j+1 xi) is supported in the annulus
    2^(j-1) <= |xi| <= 2^(j+1); the lowest block carries chi(2 xi).  The blocks
    telescope to 1 on every mode inside the dealias mask.
    """

    def __init__(self, grid: Grid):
        self.grid = grid
        kmag = np.sqrt(grid.k2)
        self.kmag = kmag

        xi_max = float(np.max(kmag[grid.dealias_mask]))
        # smallest j with chi(2^-j xi) = 1 on the whole mask
        self.j_max = max(0, int(np.ceil(np.log2(xi_max))))

        self.chi = radial_profile(kmag)
        self.low_block = radial_profile(2.0 * kmag)
        self.phi = [
            radial_profile(kmag / 2.0**j) - radial_profile(kmag / 2.0 ** (j - 1))
            for j in range(self.j_max + 1)
        ]

    def block_multiplier(self, j: int) -> np.ndarray:
        if j == -1:
            return self.low_block
        if 0 <= j <= self.j_max:
            return self.phi[j]
        raise ValueError(f"block index {j} outside [-1, {self.j_max}]")

    def low_multiplier(self, j: int) -> np.ndarray:
        """Multiplier of S_j = chi(2^-j D) = sum of blocks below j; zero for j <= -1."""
        if j <= -1:
            return np.zeros_like(self.chi)
        if j > self.j_max + 1:
            raise ValueError(f"cutoff index {j} beyond j_max + 1")
        return radial_profile(self.kmag / 2.0 ** (j - 1))

    def partition_residual(self) -> float:
        """Max deviation from 1 of the block-multiplier sum over the dealias mask."""
        total = self.low_block + sum(self.phi)
        return float(np.max(np.abs(total[self.grid.dealias_mask] - 1.0)))


def make_cutoffs(grid: Grid) -> DyadicCutoffs:
    return DyadicCutoffs(grid)


def dyadic_block(cut: DyadicCutoffs, f: np.ndarray, j: int) -> np.ndarray:
    g = cut.grid
    return g.ifft(cut.block_multiplier(j) * g.fft(f))


def low_cutoff(cut: DyadicCutoffs, f: np.ndarray, j: int) -> np.ndarray:
    g = cut.grid
    return g.ifft(cut.low_multiplier(j) * g.fft(f))


def decompose(cut: DyadicCutoffs, f: np.ndarray) -> list[np.ndarray]:
    """All blocks [-1 .. j_max]; their sum reconstructs any dealiased field."""
    g = cut.grid
    fh = g.fft(f)
    return [g.ifft(cut.block_multiplier(j) * fh) for j in range(-1, cut.j_max + 1)]


@dataclass(frozen=True)
class BesovIndex:
    """Regularity/integrability indices (s, p, r); p in {2, inf}, r >= 1 or inf."""

    s: float
    p: float
    r: float

    def __post_init__(self) -> None:
        if self.p not in (2, np.inf):
            raise ValueError("only p = 2 or p = inf supported")
        if not (self.r >= 1):
            raise ValueError("summation exponent r must be >= 1 (or inf)")


def _lp_norm(grid: Grid, f: np.ndarray, p: float) -> float:
    if p == np.inf:
        return float(np.max(np.abs(f)))
    return grid.l2_norm(f)


def besov_norm(cut: DyadicCutoffs, f: np.ndarray, idx: BesovIndex) -> float:
    """Truncated Besov norm || 2^{js} ||block_j f||_Lp ||_{l^r}, j = -1 .. j_max."""
    g = cut.grid
    fh = g.fft(f)
    terms = []
    for j in range(-1, cut.j_max + 1):
        blk = g.ifft(cut.block_multiplier(j) * fh)
        terms.append(2.0 ** (j * idx.s) * _lp_norm(g, blk, idx.p))
    terms_arr = np.array(terms)
    if idx.r == np.inf:
        return float(np.max(terms_arr))
    return float(np.sum(terms_arr**idx.r) ** (1.0 / idx.r))


def besov_norm_vector(cut: DyadicCutoffs, v: np.ndarray, idx: BesovIndex) -> float:
    """Besov norm of a vector (or tuple of scalars): sum of component norms."""
    return sum(besov_norm(cut, comp, idx) for comp in v)


class BernsteinRatio(NamedTuple):
    ratio: float
    degenerate: bool


def bernstein_ratio(cut: DyadicCutoffs, f: np.ndarray, j: int,
                    tiny: float = 1e-300) -> BernsteinRatio:
    """||grad block_j f||_inf / (2^j ||block_j f||_inf); 0 with a flag for a zero block."""
    g = cut.grid
    blk = dyadic_block(cut, f, j)
    denom = float(np.max(np.abs(blk)))
    if denom <= tiny:
        return BernsteinRatio(0.0, True)
    gb = g.grad(blk)
    num = float(np.max(np.abs(gb)))
    return BernsteinRatio(num / (2.0**j * denom), False)


def bony_decompose(cut: DyadicCutoffs, f: np.ndarray, g_field: np.ndarray
                   ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Paraproducts and remainder: T_f g, T_g f, R(f, g).

    T_f g = sum_j (S_{j-1} f)(block_j g); R collects the |j - j'| <= 1 pairs.
    The three parts sum to the dealiased product f * g exactly (up to roundoff)
    for fields supported in the dealias mask.
    """
    grid = cut.grid
    fh = grid.fft(f)
    gh = grid.fft(g_field)
    jj = range(-1, cut.j_max + 1)
    f_blocks = [grid.ifft(cut.block_multiplier(j) * fh) for j in jj]
    g_blocks = [grid.ifft(cut.block_multiplier(j) * gh) for j in jj]

    t_fg = np.zeros_like(f)
    t_gf = np.zeros_like(f)
    for j in range(1, cut.j_max + 1):
        s_f = grid.ifft(cut.low_multiplier(j - 1) * fh)
        s_g = grid.ifft(cut.low_multiplier(j - 1) * gh)
        t_fg += s_f * g_blocks[j + 1]
        t_gf += s_g * f_blocks[j + 1]

    rem = np.zeros_like(f)
    nblk = cut.j_max + 2
    for a in range(nblk):
        for b in range(max(0, a - 1), min(nblk, a + 2)):
            rem += f_blocks[a] * g_blocks[b]

    return grid.dealias(t_fg), grid.dealias(t_gf), grid.dealias(rem)


def transport_commutator(cut: DyadicCutoffs, v: np.ndarray, f: np.ndarray,
                         j: int) -> np.ndarray:
    """[v . grad, block_j] f, both orderings dealiased identically.

    Vanishes identically (to roundoff) when v is constant, since Fourier
    multipliers commute.
    """
    grid = cut.grid
    mult = cut.block_multiplier(j)

    blk = grid.ifft(mult * grid.fft(f))
    gb = grid.grad(blk)
    path_a = grid.dealias(v[0] * gb[0] + v[1] * gb[1])

    gf = grid.grad(f)
    adv = grid.dealias(v[0] * gf[0] + v[1] * gf[1])
    path_b = grid.ifft(mult * grid.fft(adv))
    return path_a - path_b
