"""Reference bilinear-operator evaluation and symbol-class seminorms.

`apply_bilinear` is the package's oracle: a deliberately plain nested
frequency quadrature of

    T(x) = (2 pi)^(-2n) iint e^(i x (xi1+xi2)) sigma(xi1, xi2)
           fhat1(xi1) fhat2(xi2) dxi1 dxi2,

used at small stage j to cross-validate the closed-form fast paths.  The
seminorm estimator bounds symbol-class membership numerically: weighted
central finite differences of sigma over the sampled support, maximized
over multi-indices up to a configured order.  Both routines are
deterministic; x-independent symbols have identically vanishing
x-derivatives, so only frequency multi-indices are scanned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .counterexample import LatticeSymbol, pair_components
from .sampling import UniformGrid


class ResolutionError(RuntimeError):
    """A grid fails its support or oscillation certification."""


@dataclass(frozen=True)
class SymbolClassParams:
    m: float
    rho: float
    delta: float = None  # type: ignore[assignment]  # defaults to rho
    n: int = 1

    def __post_init__(self):
        if self.delta is None:
            object.__setattr__(self, "delta", self.rho)
        if not 0 <= self.rho <= 1 or not 0 <= self.delta <= 1:
            raise ValueError("rho and delta must lie in [0, 1]")


@dataclass(frozen=True)
class SeminormConfig:
    max_order: int = 3
    rel_step: float = 1e-3
    points_per_cell: int = 5
    eval_points: tuple | None = None  # (xi1, xi2) arrays for generic callables
    scale: float | None = None  # frequency scale the step is relative to


def lp_norm(values, p: float, grid) -> float:
    """Riemann-sum L^p norm; p = inf is the max of samples.

    grid: a UniformGrid (its cell volume is used) or the cell volume itself.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    vol = grid.cell_volume if isinstance(grid, UniformGrid) else float(grid)
    mags = np.abs(np.asarray(values))
    if math.isinf(p):
        return float(np.max(mags))
    return float((np.sum(mags**p) * vol) ** (1.0 / p))


@dataclass(frozen=True)
class FrequencySamples:
    """Samples of a frequency-side function on a uniform grid."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape[0] != self.grid.axes[0].size:
            raise ValueError("values must match the grid axis length")


def _certify_quadrature(w: np.ndarray, xi1: np.ndarray, xi2: np.ndarray, x_max: float):
    peak = float(np.max(np.abs(w)))
    if peak == 0.0:
        return
    edge = max(
        float(np.max(np.abs(w[0, :]))),
        float(np.max(np.abs(w[-1, :]))),
        float(np.max(np.abs(w[:, 0]))),
        float(np.max(np.abs(w[:, -1]))),
    )
    if edge > 1e-12 * peak:
        raise ResolutionError("frequency grid does not cover the integrand support")
    step = max(float(xi1[1] - xi1[0]), float(xi2[1] - xi2[0]))
    if x_max > 0 and step > 2.0 * np.pi / (16.0 * x_max):
        raise ResolutionError(
            f"frequency step {step:.3g} cannot resolve phases up to |x|={x_max:.3g}"
        )


def apply_bilinear(symbol, fhat1: FrequencySamples, fhat2: FrequencySamples, x_points) -> np.ndarray:
    """Brute-force double frequency quadrature at each spatial point.

    symbol: callable sigma(xi1, xi2) on flat arrays (a LatticeSymbol works).
    One-dimensional frequency variables only; this is the small-j oracle.
    """
    if fhat1.grid.ndim != 1 or fhat2.grid.ndim != 1:
        raise NotImplementedError("the quadrature oracle is one-dimensional")
    xi1 = fhat1.grid.axes[0]
    xi2 = fhat2.grid.axes[0]
    x = np.asarray(x_points, dtype=float).reshape(-1)

    big1 = np.repeat(xi1, xi2.size)
    big2 = np.tile(xi2, xi1.size)
    w = np.asarray(symbol(big1, big2), dtype=complex).reshape(xi1.size, xi2.size)
    w *= fhat1.values[:, None]
    w *= fhat2.values[None, :]
    _certify_quadrature(w, xi1, xi2, float(np.max(np.abs(x))) if x.size else 0.0)

    e1 = np.exp(1j * np.outer(x, xi1))  # (X, m1)
    e2 = np.exp(1j * np.outer(x, xi2))  # (X, m2)
    inner = w @ e2.T  # (m1, X)
    out = np.einsum("xi,ix->x", e1, inner)
    measure = fhat1.grid.cell_volume * fhat2.grid.cell_volume
    return out * measure / (2.0 * np.pi) ** 2


# central difference stencils, second-order accuracy
_STENCILS = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
}


@dataclass
class SeminormEstimate:
    value: float
    breakdown: dict = field(default_factory=dict)
    fd_step: float = math.nan
    max_order: int = 3

    def __float__(self):
        return self.value


def _lattice_eval_points(symbol: LatticeSymbol, per_cell: int) -> tuple[np.ndarray, np.ndarray]:
    k1, k2 = pair_components(symbol.pairs, symbol.n)
    h = symbol.bump.support_halfwidth
    offs = np.linspace(-h, h, per_cell)
    if symbol.n == 1:
        o1 = np.repeat(offs, offs.size)
        o2 = np.tile(offs, offs.size)
        xi1 = (k1[:, None] + o1[None, :]).reshape(-1)
        xi2 = (k2[:, None] + o2[None, :]).reshape(-1)
        return xi1 * symbol.scale, xi2 * symbol.scale
    # dimension 2: sample the diagonal of each axis offset to bound the cost
    o = np.stack([np.repeat(offs, offs.size), np.tile(offs, offs.size)], axis=1)
    xi1 = (k1[:, None, :] + o[None, :, :]).reshape(-1, 2)
    xi2 = (k2[:, None, :] + o[None, :, :]).reshape(-1, 2)
    return xi1 * symbol.scale, xi2 * symbol.scale


def seminorm_estimate(symbol, params: SymbolClassParams, config: SeminormConfig = SeminormConfig()) -> SeminormEstimate:
    """Weighted finite-difference estimate of the class seminorm.

    Maximizes (1+|xi1|+|xi2|)^(-m + rho(|b1|+|b2|)) |D^(b1) D^(b2) sigma|
    over the evaluation points and all frequency multi-indices with
    |b1|, |b2| <= max_order.  x-derivatives are skipped: the symbols
    handled here do not depend on x.  Reports the per-multi-index maxima.
    """
    if isinstance(symbol, LatticeSymbol):
        xi1, xi2 = _lattice_eval_points(symbol, config.points_per_cell)
        scale = symbol.scale
        fn = symbol.evaluate
        ndim = symbol.n
    else:
        if config.eval_points is None or config.scale is None:
            raise ValueError("generic symbols need eval_points and scale in the config")
        xi1, xi2 = (np.asarray(a, dtype=float) for a in config.eval_points)
        scale = config.scale
        fn = symbol
        ndim = 1 if xi1.ndim == 1 else xi1.shape[1]
    h = config.rel_step * scale
    top = max(float(np.max(np.abs(xi1))), float(np.max(np.abs(xi2))), 1.0)
    if h < 1e-12 * top:
        raise ValueError(f"finite-difference step {h} underflows at scale {top}")

    if ndim == 1:
        weight_base = 1.0 + np.abs(xi1) + np.abs(xi2)
    else:
        weight_base = 1.0 + np.sqrt(np.sum(xi1**2, -1)) + np.sqrt(np.sum(xi2**2, -1))

    breakdown = {}
    for b1 in range(config.max_order + 1):
        for b2 in range(config.max_order + 1):
            acc = np.zeros(xi1.shape[0] if xi1.ndim > 1 else xi1.size, dtype=complex)
            for s1, w1 in _STENCILS[b1]:
                for s2, w2 in _STENCILS[b2]:
                    # offsets shift the first coordinate of each slot
                    p1 = xi1 + s1 * h if ndim == 1 else xi1 + np.array([s1 * h, 0.0])
                    p2 = xi2 + s2 * h if ndim == 1 else xi2 + np.array([s2 * h, 0.0])
                    acc += w1 * w2 * np.asarray(fn(p1, p2), dtype=complex)
            deriv = np.abs(acc) / h ** (b1 + b2)
            weighted = weight_base ** (-params.m + params.rho * (b1 + b2)) * deriv
            breakdown[(b1, b2)] = float(np.max(weighted))
    value = max(breakdown.values())
    return SeminormEstimate(value, breakdown, fd_step=h, max_order=config.max_order)
