"""Uniform grids and trig-lattice evaluation shared by the numeric modules.

All quadrature in the package runs on uniform grids (plain Riemann sums),
so refinement tests are trivial and every result is deterministic.  Sums
of the form S(u) = sum_k c_k exp(i u . k) over integer lattice points are
evaluated either directly (any point set) or, for uniform grids aligned
with the 2*pi lattice period, exactly via a zero-padded FFT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class UniformGrid:
    """Tensor grid given by per-axis uniform point arrays."""

    axes: tuple[np.ndarray, ...]

    def __post_init__(self):
        for ax in self.axes:
            if ax.ndim != 1 or ax.size < 2:
                raise ValueError("each axis needs at least two points")
            steps = np.diff(ax)
            if not np.allclose(steps, steps[0], rtol=1e-12, atol=0.0):
                raise ValueError("axis is not uniform")

    @classmethod
    def centered(cls, halfwidth: float, count: int, ndim: int = 1) -> "UniformGrid":
        ax = np.linspace(-halfwidth, halfwidth, count)
        return cls(tuple(ax for _ in range(ndim)))

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def spacings(self) -> tuple[float, ...]:
        return tuple(float(ax[1] - ax[0]) for ax in self.axes)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    @property
    def size(self) -> int:
        return int(np.prod([ax.size for ax in self.axes]))

    def points(self) -> np.ndarray:
        """All grid points as an (size, ndim) array, C order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def as_point_array(points, ndim: int) -> np.ndarray:
    """Coerce a point list to shape (m, ndim)."""
    arr = np.asarray(points, dtype=float)
    if ndim == 1 and arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != ndim:
        raise ValueError(f"expected points of dimension {ndim}, got shape {arr.shape}")
    return arr


def trig_lattice_direct(
    keys: np.ndarray, coeffs: np.ndarray, points: np.ndarray, chunk: int = 4096
) -> np.ndarray:
    """sum_k c_k exp(i x . k) at arbitrary points, chunked matrix products.

    keys: (K, n) integer lattice points; coeffs: (K,); points: (m, n).
    """
    keys = np.atleast_2d(np.asarray(keys, dtype=float))
    if keys.shape[0] == 1 and keys.shape[1] != points.shape[1]:
        keys = keys.T
    out = np.empty(points.shape[0], dtype=complex)
    c = np.asarray(coeffs, dtype=complex)
    for start in range(0, points.shape[0], chunk):
        block = points[start : start + chunk]
        phase = block @ keys.T  # (m_chunk, K)
        out[start : start + chunk] = np.exp(1j * phase) @ c
    return out


def periodic_lattice_table(keys, coeffs, n_fft: int) -> np.ndarray:
    """Exact values of sum_k c_k exp(i u k) at u = 2*pi*m/n_fft, m = 0..n_fft-1.

    One dimension: keys are integers with 2*max|k| < n_fft so that
    frequency folding cannot collide.  The table is one full period of the
    sum; values at any u on the grid follow by periodicity.
    """
    keys = np.asarray(keys, dtype=int).reshape(-1)
    if keys.size and 2 * int(np.abs(keys).max()) >= n_fft:
        raise ValueError(f"n_fft={n_fft} cannot hold frequencies up to {np.abs(keys).max()}")
    spectrum = np.zeros(n_fft, dtype=complex)
    np.add.at(spectrum, np.mod(keys, n_fft), np.asarray(coeffs, dtype=complex))
    return n_fft * np.fft.ifft(spectrum)


def fft_size_for(max_key: int, points_per_period: int = 16) -> int:
    """Smallest power of two resolving the fastest mode at the given rate."""
    need = max(points_per_period * (max_key + 1), 4)
    return 1 << int(np.ceil(np.log2(need)))


@dataclass(frozen=True)
class PeriodicSampling:
    """A symmetric uniform u-grid aligned with the 2*pi lattice period.

    Points are u_q = q * (2*pi/n_fft) for q in [-q_max, q_max]; lattice
    sums on this grid come from one FFT table plus index folding.
    """

    n_fft: int
    q_max: int

    @classmethod
    def for_radius(cls, max_key: int, u_radius: float, points_per_period: int = 16):
        n_fft = fft_size_for(max_key, points_per_period)
        du = 2.0 * np.pi / n_fft
        return cls(n_fft, int(np.ceil(u_radius / du)))

    @property
    def du(self) -> float:
        return 2.0 * np.pi / self.n_fft

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.q_max, self.q_max + 1)

    @property
    def u_points(self) -> np.ndarray:
        return self.indices * self.du

    @property
    def size(self) -> int:
        return 2 * self.q_max + 1

    def lattice_values(self, keys, coeffs) -> np.ndarray:
        table = periodic_lattice_table(keys, coeffs, self.n_fft)
        return table[np.mod(self.indices, self.n_fft)]
