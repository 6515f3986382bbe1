"""Frequency-lattice counterexample symbols and their closed-form output.

At stage j the construction lives on the integer pairs

    D_j = { (k1, k2) : |k1|, |k2|, |k1 + k2| all in [lo, hi] },

a dyadic band [lo, hi] = [lower * 2^(j(1-rho)), upper * 2^(j(1-rho))]
(the implicit comparability constants get the explicit defaults 1/2 and
2).  The symbol puts a unimodular coefficient times (1+|k1|+|k2|)^m0 on
the frequency cell centered at 2^(j rho) (k1, k2), carried by the narrow
analysis bump; the test-function bumps reproduce exactly those cells, so
the operator output collapses to the closed form

    (2^(j rho n) PhiTransform(2^(j rho) x))^2
        * sum_k  r_k  e^(i 2^(j rho) x . k)  d_{k,t}

with positive slice sums d_{k,t} over k1 + k2 = k.  The coefficient
choice r_(k1+k2) e^(-i|k1|^a1) e^(-i|k2|^a2) cancels the test functions'
lacunary phases, which is what makes every slice sum positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bumps import Bump
from .exponents import as_fraction, base_order
from .sampling import as_point_array, trig_lattice_direct
from .stochastics import sign_array
from .wainger import membership_threshold, scaled_product_norm


@dataclass(frozen=True)
class DyadicBand:
    """The annulus lower*2^(j(1-rho)) <= |k| <= upper*2^(j(1-rho))."""

    j: int
    rho: float
    n: int = 1
    lower: float = 0.5
    upper: float = 2.0

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if not 0 < self.lower < self.upper:
            raise ValueError("need 0 < lower < upper")
        if self.n not in (1, 2):
            raise ValueError("n must be 1 or 2")
        if not self.lattice_values().size:
            raise ValueError(f"band {self.bounds} holds no lattice points")

    @property
    def scale(self) -> float:
        return 2.0 ** (self.j * (1.0 - self.rho))

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.lower * self.scale, self.upper * self.scale)

    def contains(self, norms) -> np.ndarray:
        lo, hi = self.bounds
        norms = np.asarray(norms, dtype=float)
        return (norms >= lo) & (norms <= hi)

    def lattice_values(self) -> np.ndarray:
        """Integer points in the annulus, lexicographic order."""
        lo, hi = self.bounds
        reach = int(math.floor(hi))
        if self.n == 1:
            ks = np.arange(-reach, reach + 1)
            return ks[self.contains(np.abs(ks))]
        r = np.arange(-reach, reach + 1)
        k1, k2 = np.meshgrid(r, r, indexing="ij")
        pts = np.stack([k1.ravel(), k2.ravel()], axis=1)
        return pts[self.contains(np.sqrt(np.sum(pts.astype(float) ** 2, axis=1)))]


def _norms(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    return np.abs(arr) if arr.ndim == 1 else np.sqrt(np.sum(arr**2, axis=-1))


def build_Dj(band: DyadicBand) -> np.ndarray:
    """All pairs with |k1|, |k2|, |k1+k2| in the band, lexicographic order.

    Rows are (k1, k2) flattened to 2n integer columns.
    """
    singles = band.lattice_values()
    m = singles.shape[0]
    if band.n == 1:
        k1 = np.repeat(singles, m)
        k2 = np.tile(singles, m)
        keep = band.contains(np.abs(k1 + k2))
        return np.stack([k1[keep], k2[keep]], axis=1)
    idx1 = np.repeat(np.arange(m), m)
    idx2 = np.tile(np.arange(m), m)
    k1 = singles[idx1]
    k2 = singles[idx2]
    keep = band.contains(_norms(k1 + k2))
    return np.concatenate([k1[keep], k2[keep]], axis=1)


def pair_components(pairs: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    pairs = np.asarray(pairs)
    if n == 1:
        return pairs[:, 0], pairs[:, 1]
    return pairs[:, :n], pairs[:, n:]


def choose_c(seed: int, a1: float, a2: float, pairs: np.ndarray, n: int = 1) -> np.ndarray:
    """Coefficients r_(k1+k2) * e^(-i|k1|^a1) * e^(-i|k2|^a2), all unimodular.

    The random sign depends only on k1 + k2 (and the seed), so pairs with
    equal sum share it.
    """
    if not 0 < a1 <= 1 or not 0 < a2 <= 1:
        raise ValueError("phase exponents must lie in (0, 1]")
    k1, k2 = pair_components(pairs, n)
    signs = sign_array(seed, k1 + k2)
    r1, r2 = _norms(k1), _norms(k2)
    return signs * np.exp(-1j * r1**a1) * np.exp(-1j * r2**a2)


@dataclass(frozen=True)
class CounterexampleParams:
    """Exponent data for a blow-up run; b_i are recomputed on every read."""

    inv_p1: Fraction
    inv_p2: Fraction
    inv_p: Fraction
    rho: Fraction
    n: int = 1
    a1: float = 0.9
    a2: float = 0.9
    epsilon: float = 0.05

    def __post_init__(self):
        for name in ("inv_p1", "inv_p2", "inv_p", "rho"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if not (0 < self.a1 < 1 and 0 < self.a2 < 1):
            raise ValueError("a1, a2 must lie in (0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not (0 < self.inv_p1 < 1 and 0 < self.inv_p2 < 1):
            raise ValueError("need 1 < p1, p2 < inf for the construction")

    @property
    def point(self) -> tuple[Fraction, Fraction]:
        return (self.inv_p1, self.inv_p2)

    @property
    def m0(self) -> Fraction:
        """Critical order at roughness zero (restricted family)."""
        return base_order(self.point, self.n, family="I")

    def _b(self, a: float, inv_p: Fraction) -> float:
        return membership_threshold(a, float(1 / inv_p) if inv_p else math.inf, self.n) + self.epsilon

    @property
    def b1(self) -> float:
        return self._b(self.a1, self.inv_p1)

    @property
    def b2(self) -> float:
        return self._b(self.a2, self.inv_p2)


@dataclass
class LatticeSymbol:
    """The stage-j symbol as amplitudes on band cells, one term per cell."""

    j: int
    rho: float
    n: int
    m0: Fraction
    pairs: np.ndarray
    coeffs: np.ndarray
    bump: Bump

    def __post_init__(self):
        if np.max(np.abs(self.coeffs)) > 1.0 + 1e-12:
            raise ValueError("coefficients must satisfy |c| <= 1")
        k1, k2 = pair_components(self.pairs, self.n)
        weights = (1.0 + _norms(k1) + _norms(k2)) ** float(self.m0)
        self._amps = np.asarray(self.coeffs, dtype=complex) * weights
        cols = self.pairs.reshape(self.pairs.shape[0], 2 * self.n)
        self._offset = int(np.abs(cols).max()) + 1
        self._strides = (2 * self._offset + 1) ** np.arange(2 * self.n)[::-1]
        codes = (cols + self._offset) @ self._strides
        order = np.argsort(codes)
        self._codes = codes[order]
        self._order = order

    @property
    def scale(self) -> float:
        return 2.0 ** (self.j * self.rho)

    def evaluate(self, xi1, xi2) -> np.ndarray:
        """sigma at flat point lists; at most one lattice cell contributes.

        xi1, xi2: arrays of shape (m,) in dimension 1 or (m, 2) in
        dimension 2 (scalars are accepted in dimension 1).
        """
        scalar = self.n == 1 and np.ndim(xi1) == 0 and np.ndim(xi2) == 0
        u1 = as_point_array(np.atleast_1d(xi1), self.n) / self.scale
        u2 = as_point_array(np.atleast_1d(xi2), self.n) / self.scale
        if u1.shape != u2.shape:
            raise ValueError("xi1 and xi2 must list the same number of points")
        cols = np.concatenate(
            [np.round(u1).astype(int), np.round(u2).astype(int)], axis=1
        )
        out = np.zeros(cols.shape[0], dtype=complex)
        inside = np.all(np.abs(cols) < self._offset, axis=1)
        codes = (cols[inside] + self._offset) @ self._strides
        pos = np.clip(np.searchsorted(self._codes, codes), 0, self._codes.size - 1)
        hit = self._codes[pos] == codes
        idx = np.nonzero(inside)[0][hit]
        rows = self._order[pos[hit]]
        frac1 = u1[idx] - cols[idx, : self.n]
        frac2 = u2[idx] - cols[idx, self.n :]
        vals = self._amps[rows] * self.bump.amplitude**2  # one bump per slot
        for axis in range(self.n):
            vals = vals * self.bump.axis_profile(frac1[:, axis])
            vals = vals * self.bump.axis_profile(frac2[:, axis])
        out[idx] = vals
        return out[0] if scalar else out

    def __call__(self, xi1, xi2) -> np.ndarray:
        return self.evaluate(xi1, xi2)

    def support_radius(self) -> tuple[float, float]:
        """Min and max of |xi_i| over the support boxes (either slot)."""
        k1, k2 = pair_components(self.pairs, self.n)
        h = self.bump.support_halfwidth
        lo = min(float(np.min(_norms(k1))), float(np.min(_norms(k2)))) - h
        hi = max(float(np.max(_norms(k1))), float(np.max(_norms(k2)))) + h
        return lo * self.scale, hi * self.scale


def build_sigma(
    params: CounterexampleParams,
    band: DyadicBand,
    coeffs: np.ndarray,
    bump: Bump,
    pairs: np.ndarray | None = None,
) -> LatticeSymbol:
    """Assemble the symbol from per-pair unimodular coefficients."""
    if pairs is None:
        pairs = build_Dj(band)
    if len(coeffs) != len(pairs):
        raise ValueError("one coefficient per lattice pair required")
    return LatticeSymbol(band.j, band.rho, band.n, params.m0, pairs, coeffs, bump)


def slice_cardinalities(band: DyadicBand) -> dict:
    """#{k1 : |k1|, |k-k1| in band} for every band point k."""
    singles = band.lattice_values()
    counts = {}
    for k in singles:
        diff = (k - singles) if band.n == 1 else (np.asarray(k) - singles)
        inside = band.contains(_norms(diff))
        key = int(k) if band.n == 1 else tuple(int(v) for v in k)
        counts[key] = int(np.count_nonzero(inside))
    return counts


def compute_dk(params: CounterexampleParams, band: DyadicBand, t: float = 0.0) -> dict:
    """Positive slice sums d_{k,t}; t = 0 gives the unregularized d_k.

    d_{k,t} = sum over k1 with |k1|, |k-k1| in the band of
    (1+|k1|+|k-k1|)^m0 e^(-t(|k1|+|k-k1|)) |k1|^(-b1) |k-k1|^(-b2).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if band.n != params.n:
        raise ValueError("band dimension does not match the parameters")
    m0 = float(params.m0)
    b1, b2 = params.b1, params.b2
    singles = band.lattice_values()
    r1 = _norms(singles)
    out = {}
    for k in singles:
        diff = (k - singles) if band.n == 1 else (np.asarray(k) - singles)
        r2 = _norms(diff)
        inside = band.contains(r2)
        v1, v2 = r1[inside], r2[inside]
        terms = (1.0 + v1 + v2) ** m0 * np.exp(-t * (v1 + v2)) * v1 ** (-b1) * v2 ** (-b2)
        key = int(k) if band.n == 1 else tuple(int(v) for v in k)
        out[key] = float(np.sum(terms))
    return out


def dk_arrays(d_map: dict) -> tuple[np.ndarray, np.ndarray]:
    keys = sorted(d_map)
    return np.asarray(keys), np.array([d_map[k] for k in keys], dtype=float)


def closed_form_T(
    params: CounterexampleParams,
    j: int,
    d_map: dict,
    seed: int,
    x_grid,
    bump: Bump,
) -> np.ndarray:
    """The collapsed operator output on a spatial grid (direct evaluation).

    (s^n Phi(s x))^2 * sum_k r_k e^(i s x . k) d_k with s = 2^(j rho).
    """
    keys, values = dk_arrays(d_map)
    s = 2.0 ** (j * float(params.rho))
    pts = as_point_array(x_grid, params.n)
    max_key = float(np.max(_norms(keys))) if keys.size else 1.0
    spacings = []
    for axis in range(pts.shape[1]):
        uniq = np.unique(pts[:, axis])
        if uniq.size > 1:
            spacings.append(float(np.min(np.diff(uniq))))
    nyquist = np.pi / (s * (max_key + 2 * bump.support_halfwidth))
    if spacings and max(spacings) > nyquist:
        raise ValueError(f"grid spacing {max(spacings):.3g} exceeds {nyquist:.3g}")
    signs = sign_array(seed, keys)
    lattice = trig_lattice_direct(keys, signs * values, s * pts)
    env = bump.inverse_transform(s * pts)
    return lattice * (s**params.n * env) ** 2


def closed_form_T_norm(
    params: CounterexampleParams,
    j: int,
    d_map: dict,
    seed: int,
    p: float,
    bump: Bump,
    points_per_period: int = 16,
) -> float:
    """||T(f1, f2)||_{L^p} of the closed form via the substituted fast path."""
    keys, values = dk_arrays(d_map)
    signs = sign_array(seed, keys)
    s = 2.0 ** (j * float(params.rho))
    return scaled_product_norm(
        keys, signs * values, bump, p, s, env_power=2, points_per_period=points_per_period
    )


def dump_tables_csv(path, band: DyadicBand, d_map: dict) -> None:
    """CSV rows (k, d_k, slice cardinality) for external inspection."""
    counts = slice_cardinalities(band)
    with open(path, "w") as fh:
        fh.write("k,d_k,slice_cardinality\n")
        for k in sorted(d_map):
            key = k if isinstance(k, tuple) else (k,)
            fh.write(f"\"{' '.join(map(str, key))}\",{d_map[k]!r},{counts.get(k, 0)}\n")
