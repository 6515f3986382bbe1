"""Seeded Rademacher signs and Monte-Carlo moment-comparison estimates.

Signs are derived statelessly: the sign attached to a lattice point k is
the parity bit of a splitmix64-style avalanche hash of (seed, encode(k)).
The same (seed, k) therefore always yields the same sign on any platform,
and distinct keys behave like independent fair coins for every practical
purpose (the test suite checks empirical bias and pair correlations).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix(v: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):  # uint64 wrap-around is the point
        v = (v + _GOLDEN) & _MASK
        v = ((v ^ (v >> np.uint64(30))) * _MIX1) & _MASK
        v = ((v ^ (v >> np.uint64(27))) * _MIX2) & _MASK
        return v ^ (v >> np.uint64(31))


def _zigzag(k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64)
    return ((k << 1) ^ (k >> 63)).astype(np.uint64)


def encode_keys(keys) -> np.ndarray:
    """Pack lattice points (ints or int pairs) into uint64 codes."""
    arr = np.asarray(keys)
    if arr.ndim == 1:
        return _zigzag(arr)
    if arr.ndim == 2 and arr.shape[1] == 2:
        return (_zigzag(arr[:, 0]) << np.uint64(32)) ^ _zigzag(arr[:, 1])
    raise ValueError(f"unsupported key shape {arr.shape}")


def sign_array(seed: int, keys) -> np.ndarray:
    """Vector of +-1 signs for the given lattice keys under this seed."""
    codes = encode_keys(keys)
    with np.errstate(over="ignore"):
        state = _splitmix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) * _GOLDEN & _MASK)
    hashed = _splitmix(codes ^ state)
    return np.where((hashed & np.uint64(1)).astype(bool), 1.0, -1.0)


def signs(seed: int, keys) -> dict:
    """Deterministic map key -> sign in {-1, +1}."""
    arr = sign_array(seed, keys)
    return {
        (tuple(k) if np.ndim(k) else int(k)): int(s)
        for k, s in zip(np.asarray(keys), arr)
    }


def derived_seed(seed: int, stream: int) -> int:
    """A child seed for an indexed substream (trials, per-j runs, ...)."""
    return int(_splitmix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) ^ _splitmix(np.uint64(stream))))


@dataclass(frozen=True)
class KhintchineEstimate:
    ratio: float
    ci_low: float
    ci_high: float
    trials: int
    p: float

    def contains(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high


def khintchine_ratio(
    d_map: dict,
    p: float,
    trials: int = 128,
    seed: int = 0,
    grid_points: int = 4096,
    bootstrap: int = 1000,
    domain_halfwidth: float = 1.0,
) -> KhintchineEstimate:
    """Monte-Carlo L^p / l^2 comparison for random sign trig sums.

    Averages ||sum_k r_k d_k e^(i x k)||_{L^p([-1,1]^n)}^p over seeded sign
    draws, takes the p-th root and divides by (sum d_k^2)^(1/2).  The 95%
    confidence interval comes from a seeded bootstrap over the per-trial
    p-th powers.  One-dimensional keys use a fixed uniform grid on [-1, 1].
    """
    if not d_map:
        raise ValueError("empty coefficient map")
    if trials < 32:
        raise ValueError("need at least 32 trials")
    if not 0 < p < np.inf:
        raise ValueError(f"p must be finite and positive, got {p}")
    keys = sorted(d_map)
    values = np.array([d_map[k] for k in keys], dtype=float)
    l2 = float(np.sqrt(np.sum(values**2)))
    if l2 == 0.0:
        raise ValueError("coefficients are identically zero")

    arr_keys = np.asarray(keys)
    if arr_keys.ndim != 1:
        raise NotImplementedError("Monte-Carlo grid is one-dimensional")
    x = np.linspace(-domain_halfwidth, domain_halfwidth, grid_points, endpoint=False)
    x += (x[1] - x[0]) / 2.0  # midpoint rule on [-1, 1]
    phases = np.exp(1j * np.outer(x, arr_keys.astype(float)))  # (X, K)
    weighted = phases * values  # d_k folded in

    sign_rows = np.stack(
        [sign_array(derived_seed(seed, t), arr_keys) for t in range(trials)]
    )
    samples = sign_rows @ weighted.T  # (trials, X)
    dx = 2.0 * domain_halfwidth / grid_points
    powers = np.sum(np.abs(samples) ** p, axis=1) * dx  # per-trial ||.||_p^p

    mean_power = float(np.mean(powers))
    ratio = mean_power ** (1.0 / p) / l2

    rng = np.random.default_rng(derived_seed(seed, 0xB001))
    idx = rng.integers(0, trials, size=(bootstrap, trials))
    boot = (np.mean(powers[idx], axis=1)) ** (1.0 / p) / l2
    lo, hi = np.quantile(boot, [0.025, 0.975])
    return KhintchineEstimate(float(ratio), float(lo), float(hi), trials, float(p))
