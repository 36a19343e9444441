"""Voter/candidate distributions on [0, 1] and the empirical winner pool.

All analytic models are symmetric about 1/2 (checked for the supported
parameterizations in the test suite). The winner pool is the finite multiset
of winner positions produced by one generation of elections; it stands in for
the winner CDF and supports exact resampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "VoterModel",
    "uniform",
    "uniform_interval",
    "beta",
    "double_weibull",
    "WinnerPool",
    "EmpiricalStats",
    "pool_sample",
]

# Two-sided Weibull tail mass outside [0, 1] is truncated and the CDF
# renormalized whenever the [0, 1] mass falls below this threshold.
_RENORM_THRESHOLD = 1.0 - 1e-9

_QUANTILE_TOL = 1e-12


def _betainc_regularized(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta via Lentz's continued fraction."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - lbeta) / a
    # Continued fraction for I_x(a, b); use the symmetry relation when x is
    # past the distribution bulk so the fraction converges quickly.
    if x > (a + 1.0) / (a + b + 2.0):
        return 1.0 - _betainc_regularized(b, a, 1.0 - x)
    tiny = 1e-300
    f, c, d = 1.0, 1.0, 0.0
    for i in range(200):
        m = i // 2
        if i == 0:
            num = 1.0
        elif i % 2 == 0:
            num = m * (b - m) * x / ((a + 2 * m - 1) * (a + 2 * m))
        else:
            num = -(a + m) * (a + b + m) * x / ((a + 2 * m) * (a + 2 * m + 1))
        d = 1.0 + num * d
        d = 1.0 / (tiny if abs(d) < tiny else d)
        c = 1.0 + num / c
        if abs(c) < tiny:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return front * (f - 1.0)


@dataclass(frozen=True)
class VoterModel:
    """Analytic distribution on [0, 1] with vectorized CDF/quantile/sampling.

    kind is one of "uniform", "uniform_interval", "beta", "double_weibull".
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind == "uniform":
            pass
        elif self.kind == "uniform_interval":
            a, b = self.params
            if not (0.0 <= a < b <= 1.0):
                raise ValueError(f"uniform_interval requires 0 <= a < b <= 1, got ({a}, {b})")
        elif self.kind == "beta":
            alpha, bta = self.params
            if alpha <= 0 or bta <= 0:
                raise ValueError(f"beta requires alpha, beta > 0, got ({alpha}, {bta})")
        elif self.kind == "double_weibull":
            shape, loc, scale = self.params
            if shape <= 0 or scale <= 0:
                raise ValueError(f"double_weibull requires shape, scale > 0, got ({shape}, {scale})")
            if not 0.0 <= loc <= 1.0:
                raise ValueError(f"double_weibull location must be in [0, 1], got {loc}")
        else:
            raise ValueError(f"unknown voter model kind: {self.kind!r}")

    # -- CDF ---------------------------------------------------------------

    def cdf(self, x):
        """CDF at x (scalar or array). Input clamped to the [0, 1] support."""
        x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        if self.kind == "uniform":
            out = x
        elif self.kind == "uniform_interval":
            a, b = self.params
            out = np.clip((x - a) / (b - a), 0.0, 1.0)
        elif self.kind == "beta":
            alpha, bta = self.params
            if (alpha, bta) == (2.0, 2.0):
                out = 3.0 * x**2 - 2.0 * x**3
            elif (alpha, bta) == (0.5, 0.5):
                out = (2.0 / np.pi) * np.arcsin(np.sqrt(x))
            else:
                out = np.vectorize(lambda v: _betainc_regularized(alpha, bta, v))(x)
        else:
            out = self._dw_cdf(x)
        return out if out.ndim else float(out)

    def _dw_raw_cdf(self, x):
        shape, loc, scale = self.params
        z = (np.asarray(x, dtype=np.float64) - loc) / scale
        return np.where(
            z < 0,
            0.5 * np.exp(-np.abs(z) ** shape),
            1.0 - 0.5 * np.exp(-np.abs(z) ** shape),
        )

    def _dw_norm(self):
        lo = float(self._dw_raw_cdf(0.0))
        hi = float(self._dw_raw_cdf(1.0))
        if hi - lo < _RENORM_THRESHOLD:
            return lo, hi - lo
        return 0.0, 1.0

    def _dw_cdf(self, x):
        lo, z = self._dw_norm()
        return np.clip((self._dw_raw_cdf(x) - lo) / z, 0.0, 1.0)

    # -- Quantile ----------------------------------------------------------

    def quantile(self, p):
        """Inverse CDF at p (scalar or array in [0, 1])."""
        p = np.asarray(p, dtype=np.float64)
        if np.any((p < 0) | (p > 1)):
            raise ValueError("quantile argument must lie in [0, 1]")
        if self.kind == "uniform":
            out = p.copy()
        elif self.kind == "uniform_interval":
            a, b = self.params
            out = a + (b - a) * p
        elif self.kind == "beta" and self.params == (0.5, 0.5):
            out = np.sin(np.pi * p / 2.0) ** 2
        elif self.kind == "double_weibull":
            shape, loc, scale = self.params
            lo, z = self._dw_norm()
            q = lo + z * p
            left = q < 0.5
            mag = np.where(left, -np.log(2.0 * np.clip(q, 1e-300, None)),
                           -np.log(2.0 * np.clip(1.0 - q, 1e-300, None)))
            dist = scale * np.clip(mag, 0.0, None) ** (1.0 / shape)
            out = np.clip(np.where(left, loc - dist, loc + dist), 0.0, 1.0)
        else:
            out = self._quantile_bisect(p)
        return out if out.ndim else float(out)

    def _quantile_bisect(self, p):
        lo = np.zeros_like(p, dtype=np.float64)
        hi = np.ones_like(p, dtype=np.float64)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            below = np.asarray(self.cdf(mid)) < p
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def sample(self, rng: np.random.Generator, size=None):
        """Inverse-CDF sampling; returns positions in [0, 1]."""
        return self.quantile(rng.random(size))


def uniform() -> VoterModel:
    return VoterModel("uniform")


def uniform_interval(a: float, b: float) -> VoterModel:
    return VoterModel("uniform_interval", (float(a), float(b)))


def beta(alpha: float, bta: float) -> VoterModel:
    return VoterModel("beta", (float(alpha), float(bta)))


def double_weibull(shape: float, loc: float, scale: float) -> VoterModel:
    return VoterModel("double_weibull", (float(shape), float(loc), float(scale)))


# -- Winner pools -----------------------------------------------------------


@dataclass
class WinnerPool:
    """Finite multiset of winner positions for one generation."""

    positions: np.ndarray
    generation_index: int = 0

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64)
        if self.positions.size == 0:
            raise ValueError("winner pool must be non-empty")
        if np.any((self.positions < 0.0) | (self.positions > 1.0)):
            raise ValueError("winner pool positions must lie in [0, 1]")
        if self.generation_index < 0:
            raise ValueError("generation index must be >= 0")

    def __len__(self):
        return self.positions.size

    def stats(self) -> "EmpiricalStats":
        return EmpiricalStats(self.positions)


def pool_sample(pool: WinnerPool, mirror: bool, rng: np.random.Generator, size=None):
    """Uniform draw from the pool; with mirror, reflect across 1/2 w.p. 1/2."""
    n = len(pool)
    idx = rng.integers(0, n, size=size)
    out = pool.positions[idx]
    if mirror:
        flip = rng.random(size) < 0.5
        out = np.where(flip, 1.0 - out, out) if size is not None else (1.0 - out if flip else out)
    return out


@dataclass
class EmpiricalStats:
    """ECDF / quantile / histogram view of a finite sample on [0, 1]."""

    sample: np.ndarray
    _sorted: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.sample = np.asarray(self.sample, dtype=np.float64)
        self._sorted = np.sort(self.sample)

    def ecdf(self, x):
        """Right-continuous ECDF: fraction of the sample <= x."""
        return np.searchsorted(self._sorted, np.asarray(x, dtype=np.float64), side="right") / self._sorted.size

    def quantile(self, p):
        """Order statistic at index ceil(p * n) - 1 (empirical inverse)."""
        p = np.asarray(p, dtype=np.float64)
        n = self._sorted.size
        idx = np.clip(np.ceil(p * n).astype(np.int64) - 1, 0, n - 1)
        out = self._sorted[idx]
        return out if out.ndim else float(out)

    def histogram(self, bins: int = 200):
        """Counts over equal-width bins on [0, 1]."""
        counts, edges = np.histogram(self._sorted, bins=bins, range=(0.0, 1.0))
        return counts, edges

    def mass_in(self, lo: float, hi: float) -> float:
        """Fraction of the sample in the closed interval [lo, hi]."""
        left = np.searchsorted(self._sorted, lo, side="left")
        right = np.searchsorted(self._sorted, hi, side="right")
        return (right - left) / self._sorted.size
