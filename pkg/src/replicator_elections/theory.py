"""Closed-form predictions for the election dynamics.

Three families: finite-t CDF bounds on the winner distribution (exact for
two candidates, upper bounds for three and four), long-run limits under
uniform replacement noise, and one-dimensional iterated maps whose fixed
points mark the thresholds of the dynamics (center density growth, atom
takeover, two-spike equilibria).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .distributions import VoterModel, uniform

__all__ = [
    "cdf_k2_exact",
    "cdf_k3_upper",
    "cdf_k4_upper",
    "noisy_limit_k2",
    "noisy_limit_k3",
    "noisy_limit_k4",
    "density_ratio",
    "limited_support_threshold",
    "IteratedMap",
    "quadratic_noisy_k2",
    "cubic_noisy_k3",
    "linear_noisy_k4",
    "large_k",
    "center_mass_threshold",
    "two_spike_threshold",
    "iterate_map",
    "fixed_points",
]


# -- Finite-t CDF bounds ------------------------------------------------------


def cdf_k2_exact(x: float, t: int, f0: VoterModel | None = None) -> float:
    """Exact winner CDF for two candidates: [2 F_0(x)]^(2^t) / 2, x <= 1/2."""
    f0 = f0 or uniform()
    p = float(f0.cdf(x))
    if p > 0.5:
        raise ValueError("exact two-candidate form needs F_0(x) <= 1/2")
    if t < 0:
        raise ValueError("t must be >= 0")
    return (2.0 * p) ** (2**t) / 2.0


def cdf_k3_upper(x: float, t: int, f0: VoterModel | None = None) -> float:
    """Upper bound for three candidates: F_0(x) [3/4 + F_0(x)^2]^t."""
    f0 = f0 or uniform()
    p = float(f0.cdf(x))
    if p > 0.5:
        raise ValueError("three-candidate bound needs F_0(x) <= 1/2")
    if t < 0:
        raise ValueError("t must be >= 0")
    return p * (0.75 + p * p) ** t


def cdf_k4_upper(x: float, t: int, f0: VoterModel | None = None) -> float:
    """Upper bound for four candidates on x in (1/3, 1/2):
    F_0(x) [1 - 4 (1/2 - F_0(x/3 + 1/3))^3]^t.
    """
    if not 1.0 / 3.0 < x < 0.5:
        raise ValueError("four-candidate bound needs x in (1/3, 1/2)")
    if t < 0:
        raise ValueError("t must be >= 0")
    f0 = f0 or uniform()
    p = float(f0.cdf(x))
    q = float(f0.cdf(x / 3.0 + 1.0 / 3.0))
    return p * (1.0 - 4.0 * (0.5 - q) ** 3) ** t


# -- Long-run limits under uniform replacement noise --------------------------


def noisy_limit_k2(x: float, eps: float) -> float:
    """Limit of the noisy two-candidate winner CDF at x <= 1/2:
    (1 - 4 x eps (1 - eps) - sqrt(1 - 8 eps x (1 - eps))) / (4 (1 - eps)^2).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    if not 0.0 <= x <= 0.5:
        raise ValueError("x must be in [0, 1/2]")
    num = 1.0 - 4.0 * x * eps * (1.0 - eps) - math.sqrt(1.0 - 8.0 * eps * x * (1.0 - eps))
    return num / (4.0 * (1.0 - eps) ** 2)


def noisy_limit_k3(eps: float) -> float:
    """Limsup bound for the noisy three-candidate winner CDF left of 1/2."""
    if not 0.0 < eps < 1.0 / 3.0:
        raise ValueError("eps must be in (0, 1/3)")
    return 1.5 * eps


def _k4_beta(x: float, eps: float, f0: VoterModel) -> float:
    y = x / 3.0 + 1.0 / 3.0
    return 0.5 - eps * y - (1.0 - eps) * max(y, float(f0.cdf(y)))


def noisy_limit_k4(x: float, eps: float, f0: VoterModel | None = None) -> float:
    """Limsup bound eps / (8 beta^3) for the noisy four-candidate CDF at x,
    with beta = 1/2 - eps (x/3 + 1/3) - (1 - eps) max{x/3 + 1/3, F_0(x/3 + 1/3)}.
    """
    if not 1.0 / 3.0 < x < 0.5:
        raise ValueError("x must be in (1/3, 1/2)")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    beta = _k4_beta(x, eps, f0 or uniform())
    if beta <= 0.0:
        raise ValueError("bound undefined: beta <= 0 for these parameters")
    return eps / (8.0 * beta**3)


# -- Scalar constants ---------------------------------------------------------


def density_ratio(k: int) -> float:
    """Per-generation growth factor of the winner density at 1/2: k (1/2)^(k-2)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return k * 0.5 ** (k - 2)


def limited_support_threshold() -> float:
    """CDF level below which mass drains outward on limited support:
    (1 - sqrt(3/7)) / 2 = 0.17251...
    """
    return (1.0 - math.sqrt(3.0 / 7.0)) / 2.0


# -- Iterated maps ------------------------------------------------------------


@dataclass(frozen=True)
class IteratedMap:
    """One-dimensional map p -> f(p) on a closed domain."""

    name: str
    f: Callable[[float], float]
    domain: tuple[float, float] = (0.0, 1.0)

    def __call__(self, p: float) -> float:
        return self.f(p)


def quadratic_noisy_k2(eps: float, x: float) -> IteratedMap:
    """Noisy two-candidate CDF update at a fixed point x:
    p' = 2 p^2 (1-eps)^2 + 4 p x eps (1-eps) + 2 x^2 eps^2.
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must be in [0, 1)")
    if not 0.0 <= x <= 0.5:
        raise ValueError("x must be in [0, 1/2]")

    def f(p):
        return 2.0 * p * p * (1 - eps) ** 2 + 4.0 * p * x * eps * (1 - eps) + 2.0 * x * x * eps * eps

    return IteratedMap("quadratic_noisy_k2", f, (0.0, 0.5))


def cubic_noisy_k3(eps: float) -> IteratedMap:
    """Noisy three-candidate update: with q = eps/2 + (1-eps) p,
    p' = 3/4 q + q^3.
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must be in [0, 1)")

    def f(p):
        q = eps / 2.0 + (1.0 - eps) * p
        return 0.75 * q + q**3

    return IteratedMap("cubic_noisy_k3", f, (0.0, 0.5))


def linear_noisy_k4(eps: float, x: float, f0: VoterModel | None = None) -> IteratedMap:
    """Noisy four-candidate update with contraction rate 1 - 4 beta^3:
    p' = p (1-eps) (1 - 4 beta^3) + eps x (1 - 4 beta^3)... linear in p.
    """
    if not 1.0 / 3.0 < x < 0.5:
        raise ValueError("x must be in (1/3, 1/2)")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    beta = _k4_beta(x, eps, f0 or uniform())
    rate = 1.0 - 4.0 * beta**3

    def f(p):
        return p * (1.0 - eps) * rate + eps * x * rate

    return IteratedMap("linear_noisy_k4", f, (0.0, 0.5))


def large_k(k: int) -> IteratedMap:
    """Limited-support CDF update at the center for k candidates:
    p' = 1/2 + p^k - (1-p)^k + (1-2p)^k / 2.
    """
    if k < 2:
        raise ValueError("k must be >= 2")

    def f(p):
        return 0.5 + p**k - (1.0 - p) ** k + (1.0 - 2.0 * p) ** k / 2.0

    return IteratedMap(f"large_k_{k}", f)


def center_mass_threshold(k: int) -> IteratedMap:
    """Growth of an atom at 1/2 against a continuous remainder:
    p' = p^k + k p^(k-1) (1-p).
    """
    if k < 2:
        raise ValueError("k must be >= 2")

    def f(p):
        return p**k + k * p ** (k - 1) * (1.0 - p)

    return IteratedMap(f"center_mass_threshold_{k}", f)


def two_spike_threshold(k: int) -> IteratedMap:
    """Growth of combined mass on two mirrored atoms:
    p' = (2p)^k / 2 + k (1-2p) ((2p)^(k-1) - 2 p^(k-1)) / 2, for p in [0, 1/2].
    """
    if k < 2:
        raise ValueError("k must be >= 2")

    def f(p):
        return (2 * p) ** k / 2.0 + k * (1.0 - 2.0 * p) * ((2 * p) ** (k - 1) - 2.0 * p ** (k - 1)) / 2.0

    return IteratedMap(f"two_spike_threshold_{k}", f, (0.0, 0.5))


def iterate_map(m: IteratedMap, p0: float, steps: int) -> list[float]:
    """Orbit p0, f(p0), ..., f^steps(p0); raises if the orbit leaves the domain."""
    lo, hi = m.domain
    if not lo <= p0 <= hi:
        raise ValueError(f"p0={p0} outside map domain [{lo}, {hi}]")
    orbit = [p0]
    p = p0
    for step in range(steps):
        p = m(p)
        if not lo - 1e-12 <= p <= hi + 1e-12:
            raise ValueError(f"orbit left domain at step {step + 1}: p={p}")
        orbit.append(min(max(p, lo), hi))
        p = orbit[-1]
    return orbit


_FP_GRID = 10_000
_FP_TOL = 1e-12
_DERIV_STEP = 1e-6
_MARGINAL_TOL = 1e-4


def fixed_points(m: IteratedMap) -> list[tuple[float, str]]:
    """All fixed points in the map's domain with a stability label.

    Roots of f(p) - p are bracketed by sign changes over a 10^4-point grid
    and refined by bisection to 1e-12. Stability is by the central-difference
    derivative at the root: |f'| < 1 stable, > 1 unstable, within 1e-4 of 1
    reported as marginal (never guessed).
    """
    lo, hi = m.domain

    def g(p):
        return m(p) - p

    roots = []
    grid = [lo + (hi - lo) * i / _FP_GRID for i in range(_FP_GRID + 1)]
    vals = [g(p) for p in grid]
    for i in range(_FP_GRID + 1):
        if abs(vals[i]) < 1e-15:
            roots.append(grid[i])
    for i in range(_FP_GRID):
        a, b, ga, gb = grid[i], grid[i + 1], vals[i], vals[i + 1]
        if ga == 0.0 or gb == 0.0 or ga * gb > 0:
            continue
        while b - a > _FP_TOL:
            mid = 0.5 * (a + b)
            gm = g(mid)
            if gm == 0.0:
                a = b = mid
                break
            if ga * gm < 0:
                b = mid
            else:
                a, ga = mid, gm
        roots.append(0.5 * (a + b))

    out = []
    for r in sorted(roots):
        if out and abs(r - out[-1][0]) < 1e-9:
            continue
        a = max(lo, r - _DERIV_STEP)
        b = min(hi, r + _DERIV_STEP)
        deriv = (m(b) - m(a)) / (b - a)
        if abs(abs(deriv) - 1.0) < _MARGINAL_TOL:
            label = "marginal"
        elif abs(deriv) < 1.0:
            label = "stable"
        else:
            label = "unstable"
        out.append((r, label))
    return out
