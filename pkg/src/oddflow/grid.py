"""Periodic spectral grid on [0, L)^2: FFTs, derivative multipliers, dealiasing, Leray projection.

Conventions
-----------
* Forward FFT is unnormalized (``numpy.fft.rfft2``, half spectrum of shape
  (n, n//2 + 1) since all fields are real); the inverse carries the 1/n^2
  factor.  A constant field c transforms to c * n^2 at mode (0, 0).
* Scalar fields are real arrays of shape (n, n); vector fields have shape
  (2, n, n); matrix fields (2, 2, n, n) with entry [j, i] = d_j v_i (the
  transposed-Jacobian layout: column i of the matrix is the gradient of v_i).
* Every pointwise product of spectral fields is followed by 2/3-rule
  dealiasing (`dealias` / `product`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with precomputed wavenumbers and dealias mask.

    Parameters
    ----------
    n : int
        Points per axis; even, at least 8 (powers of two are fastest).
    L : float
        Box side length.
    """

    n: int
    L: float = 2.0 * np.pi

    def __post_init__(self) -> None:
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"n must be an even integer >= 8, got {self.n}")
        if self.L <= 0:
            raise ValueError("box length must be positive")

        dx = self.L / self.n
        x1 = np.arange(self.n) * dx
        x, y = np.meshgrid(x1, x1, indexing="ij")

        k1 = 2.0 * np.pi * np.fft.fftfreq(self.n, d=dx)
        kr = 2.0 * np.pi * np.fft.rfftfreq(self.n, d=dx)
        kx, ky = np.meshgrid(k1, kr, indexing="ij")
        k2 = kx**2 + ky**2
        inv_k2 = np.zeros_like(k2)
        inv_k2[k2 > 0] = 1.0 / k2[k2 > 0]

        # 2/3 rule: keep modes with max(|k1|,|k2|) <= (2/3) * Nyquist
        k_nyq = np.pi * self.n / self.L
        kcut = (2.0 / 3.0) * k_nyq
        dealias_mask = (np.abs(kx) <= kcut) & (np.abs(ky) <= kcut)

        for name, val in (
            ("dx", dx), ("x", x), ("y", y), ("kx", kx), ("ky", ky),
            ("k2", k2), ("inv_k2", inv_k2), ("kcut", kcut),
            ("dealias_mask", dealias_mask),
        ):
            object.__setattr__(self, name, val)

    # -- transforms ---------------------------------------------------------

    def fft(self, f: np.ndarray) -> np.ndarray:
        """Forward real FFT (unnormalized), half spectrum (n, n//2 + 1)."""
        return np.fft.rfft2(f)

    def ifft(self, fh: np.ndarray) -> np.ndarray:
        """Inverse real FFT (normalization 1/n^2 lives here)."""
        return np.fft.irfft2(fh, s=(self.n, self.n))

    def dealias(self, f: np.ndarray) -> np.ndarray:
        """Zero all modes outside the 2/3 mask of a physical-space field."""
        return self.ifft(self.dealias_mask * self.fft(f))

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Pointwise product followed by 2/3 dealiasing."""
        return self.dealias(a * b)

    # -- first-order operators ---------------------------------------------

    def dx1(self, f: np.ndarray) -> np.ndarray:
        return self.ifft(1j * self.kx * self.fft(f))

    def dx2(self, f: np.ndarray) -> np.ndarray:
        return self.ifft(1j * self.ky * self.fft(f))

    def grad(self, f: np.ndarray) -> np.ndarray:
        fh = self.fft(f)
        return np.stack([self.ifft(1j * self.kx * fh), self.ifft(1j * self.ky * fh)])

    def perp_grad(self, f: np.ndarray) -> np.ndarray:
        """Rotated gradient (-d2 f, d1 f); always divergence-free."""
        fh = self.fft(f)
        return np.stack([self.ifft(-1j * self.ky * fh), self.ifft(1j * self.kx * fh)])

    def divergence(self, v: np.ndarray) -> np.ndarray:
        return self.ifft(1j * self.kx * self.fft(v[0]) + 1j * self.ky * self.fft(v[1]))

    def curl(self, v: np.ndarray) -> np.ndarray:
        """Scalar curl d1 v2 - d2 v1."""
        return self.ifft(1j * self.kx * self.fft(v[1]) - 1j * self.ky * self.fft(v[0]))

    def laplacian(self, f: np.ndarray) -> np.ndarray:
        return self.ifft(-self.k2 * self.fft(f))

    def inv_laplacian(self, f: np.ndarray) -> np.ndarray:
        """Zero-mean solution of Laplace(g) = f; the k=0 mode is gauged to zero."""
        return self.ifft(-self.inv_k2 * self.fft(f))

    # -- matrix-valued operators -------------------------------------------

    def jacobian_T(self, v: np.ndarray) -> np.ndarray:
        """Transposed Jacobian: entry [j, i] = d_j v_i (columns are grad v_i)."""
        g0 = self.grad(v[0])
        g1 = self.grad(v[1])
        return np.stack([np.stack([g0[0], g1[0]]), np.stack([g0[1], g1[1]])])

    def jacobian(self, v: np.ndarray) -> np.ndarray:
        """Jacobian Dv: entry [j, i] = d_i v_j."""
        return np.swapaxes(self.jacobian_T(v), 0, 1)

    def perp_jacobian_T(self, v: np.ndarray) -> np.ndarray:
        """Rotated transposed Jacobian: entry [j, i] = (perp_grad v_i)_j."""
        g0 = self.perp_grad(v[0])
        g1 = self.perp_grad(v[1])
        return np.stack([np.stack([g0[0], g1[0]]), np.stack([g0[1], g1[1]])])

    def matrix_divergence(self, m: np.ndarray, weight: np.ndarray | None = None) -> np.ndarray:
        """Row-wise divergence of a weighted matrix field.

        Component i of the result is sum_j d_j(weight * m[j, i]); products are
        dealiased before differentiation.
        """
        out = np.empty((2, self.n, self.n))
        for i in range(2):
            if weight is None:
                w0h = self.fft(m[0, i])
                w1h = self.fft(m[1, i])
            else:
                # fused dealias + derivative (one transform per flux entry)
                w0h = self.dealias_mask * self.fft(weight * m[0, i])
                w1h = self.dealias_mask * self.fft(weight * m[1, i])
            out[i] = self.ifft(1j * self.kx * w0h + 1j * self.ky * w1h)
        return out

    # -- projections --------------------------------------------------------

    def leray_project(self, v: np.ndarray) -> np.ndarray:
        """Remove the gradient part of a vector field (zero-mean gauge on k=0).

        Exact on the dealiased subspace.  Fields carrying Nyquist modes should
        be passed through `dealias` first: the odd-ball Nyquist frequency has
        no consistent first derivative on a real grid.
        """
        vh0 = self.fft(v[0])
        vh1 = self.fft(v[1])
        div_h = 1j * self.kx * vh0 + 1j * self.ky * vh1
        phi_h = -div_h * self.inv_k2
        return np.stack([
            self.ifft(vh0 - 1j * self.kx * phi_h),
            self.ifft(vh1 - 1j * self.ky * phi_h),
        ])

    def mean(self, f: np.ndarray) -> float:
        return float(np.mean(f))

    def zero_mean(self, f: np.ndarray) -> np.ndarray:
        return f - np.mean(f)

    def integral(self, f: np.ndarray) -> float:
        """Collocation quadrature of f over the box."""
        return float(np.sum(f)) * self.dx * self.dx

    def l2_norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(np.sum(f * f) * self.dx * self.dx))


def convect(grid: Grid, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a . grad) b for vector fields, dealiased."""
    out = np.empty_like(b)
    for i in range(2):
        gb = grid.grad(b[i])
        out[i] = grid.dealias(a[0] * gb[0] + a[1] * gb[1])
    return out


def advect_scalar(grid: Grid, a: np.ndarray, f: np.ndarray) -> np.ndarray:
    """a . grad f for a vector field a and scalar f, dealiased."""
    gf = grid.grad(f)
    return grid.dealias(a[0] * gf[0] + a[1] * gf[1])
