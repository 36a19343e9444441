"""One-shot positioning game: exact payoffs and equilibrium verification.

k candidates pick points in [0, 1]; voters are uniform; the largest vote
share wins. Payoffs are lexicographic: win probability first, then expected
vote margins against opponents, strongest competitor first. Everything here
is exact enumeration over the finitely many tie outcomes (left/right role
assignments at coincident points, max-share lotteries); no Monte Carlo.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .election_core import TieBreakRule

__all__ = [
    "Profile",
    "Payoff",
    "payoff",
    "payoffs",
    "is_psne",
    "is_two_spike_smsne",
    "atom_seeded_convergence",
]

_TOL = 1e-12


@dataclass(frozen=True)
class Profile:
    """Multiset of candidate positions plus the tie-breaking rule."""

    positions: tuple[float, ...]
    rule: TieBreakRule = TieBreakRule.LEFT_RIGHT

    def __post_init__(self):
        if len(self.positions) < 2:
            raise ValueError("profile needs at least two candidates")
        for p in self.positions:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"position must be in [0, 1], got {p}")


@dataclass(frozen=True)
class Payoff:
    """Lexicographic payoff: win probability, then margins strongest-first.

    margins[0] is the expected vote margin against the toughest opponent
    (the most negative entry), so componentwise larger is better.
    """

    win_probability: float
    margins: tuple[float, ...]

    def beats(self, other: "Payoff", tol: float = _TOL) -> bool:
        """Strict lexicographic improvement over `other` with tolerance."""
        for a, b in zip((self.win_probability, *self.margins),
                        (other.win_probability, *other.margins)):
            if abs(a - b) <= tol:
                continue
            return a > b
        return False


def _share_outcomes(positions: tuple[float, ...], rule: TieBreakRule):
    """Yield (probability, shares-by-candidate-index) over tie resolutions.

    Sorts the profile, groups bit-equal positions, computes Voronoi masses
    under uniform voters, then enumerates the c(c-1) ordered (left-taker,
    right-taker) role picks for every coincident group of size c >= 2 under
    LEFT_RIGHT (EQUAL_SPLIT has a single outcome).
    """
    k = len(positions)
    order = sorted(range(k), key=lambda i: positions[i])
    pos = [positions[i] for i in order]
    cuts = [0.0] + [0.5 * (pos[i] + pos[i + 1]) for i in range(k - 1)] + [1.0]
    masses = [cuts[i + 1] - cuts[i] for i in range(k)]

    groups = []
    a = 0
    while a < k:
        b = a
        while b + 1 < k and pos[b + 1] == pos[a]:
            b += 1
        groups.append((a, b - a + 1))
        a = b + 1

    base = [0.0] * k
    multi = []
    for a, c in groups:
        if c == 1:
            base[a] = masses[a]
        elif rule is TieBreakRule.EQUAL_SPLIT:
            each = (masses[a] + masses[a + c - 1]) / c
            for i in range(a, a + c):
                base[i] = each
        else:
            multi.append((a, c, masses[a], masses[a + c - 1]))

    if not multi:
        shares = [0.0] * k
        for slot, i in enumerate(order):
            shares[i] = base[slot]
        yield 1.0, shares
        return

    choices = []
    for a, c, left, right in multi:
        opts = [(a + li, a + ri) for li in range(c) for ri in range(c) if li != ri]
        choices.append((opts, left, right))
    for picks in itertools.product(*(range(len(opts)) for opts, _, _ in choices)):
        slot_shares = list(base)
        prob = 1.0
        for (opts, left, right), pick in zip(choices, picks):
            li, ri = opts[pick]
            slot_shares[li] += left
            slot_shares[ri] += right
            prob /= len(opts)
        shares = [0.0] * k
        for slot, i in enumerate(order):
            shares[i] = slot_shares[slot]
        yield prob, shares


def payoffs(profile: Profile) -> list[Payoff]:
    """Exact payoff of every candidate in the profile."""
    k = len(profile.positions)
    win = [0.0] * k
    margin = [[0.0] * k for _ in range(k)]
    for prob, shares in _share_outcomes(profile.positions, profile.rule):
        top = max(shares)
        winners = [i for i in range(k) if top - shares[i] <= _TOL]
        for i in winners:
            win[i] += prob / len(winners)
        for i in range(k):
            si = shares[i]
            for j in range(k):
                if j != i:
                    margin[i][j] += prob * (si - shares[j])
    return [
        Payoff(win[i], tuple(sorted(m for j, m in enumerate(margin[i]) if j != i)))
        for i in range(k)
    ]


def payoff(profile: Profile, i: int) -> Payoff:
    """Exact payoff of candidate i."""
    return payoffs(profile)[i]


def is_psne(profile: Profile, grid_resolution: int = 10_000,
            delta: float = 1e-6) -> tuple[bool, tuple[int, float] | None]:
    """Check the profile against a grid-plus-offset deviation scan.

    Every candidate's payoff is compared with every unilateral deviation to
    {j/grid_resolution} plus all occupied points and their +-delta offsets.
    Returns (False, (candidate, deviation)) on the first strict lexicographic
    improvement; (True, None) means no grid witness exists (sound for "not a
    PSNE", grid-complete for "PSNE").
    """
    if grid_resolution < 1000:
        raise ValueError("grid_resolution must be >= 1000")
    if not 0.0 < delta <= 1e-4:
        raise ValueError("delta must be in (0, 1e-4]")
    pos = profile.positions
    occupied = sorted(set(pos))
    near = [min(max(p + s * delta, 0.0), 1.0) for p in occupied for s in (-1, 1)]
    candidates = occupied + near + [j / grid_resolution for j in range(grid_resolution + 1)]

    scanned: set[float] = set()
    current = payoffs(profile)
    for i, p in enumerate(pos):
        if p in scanned:  # identical candidates share the same scan
            continue
        scanned.add(p)
        base = current[i]
        for d in candidates:
            if d == p:
                continue
            moved = pos[:i] + (d,) + pos[i + 1:]
            if payoff(Profile(moved, profile.rule), i).beats(base):
                return False, (i, d)
    return True, None


def is_two_spike_smsne(x: float, k: int, grid_resolution: int = 10_000,
                       delta: float = 1e-6) -> tuple[bool, float]:
    """Check the symmetric mixture 50/50 over {x, 1-x} among k candidates.

    Scans every pure deviation position against k-1 opponents who mix
    independently; opponent outcomes collapse to the binomial count at x.
    Returns (is_equilibrium, best pure-deviation win probability); the
    mixture is an equilibrium iff no pure position wins with probability
    above 1/k (tolerance 1e-12). LEFT_RIGHT tie-breaking throughout.
    """
    if not 0.0 < x < 0.5:
        raise ValueError("x must be in (0, 1/2)")
    if k < 2:
        raise ValueError("k must be >= 2")

    weights = [math.comb(k - 1, c) / 2 ** (k - 1) for c in range(k)]

    def win_prob(d: float) -> float:
        total = 0.0
        for c in range(k):  # c opponents at x, rest at 1-x
            opp = (x,) * c + (1.0 - x,) * (k - 1 - c)
            total += weights[c] * payoff(Profile((d, *opp)), 0).win_probability
        return total

    points = {x, 1.0 - x, 0.5}
    for p in (x, 1.0 - x):
        points.update((max(p - delta, 0.0), min(p + delta, 1.0)))
    points.update(j / grid_resolution for j in range(grid_resolution + 1))

    best = max(win_prob(d) for d in sorted(points))
    return best <= 1.0 / k + _TOL, best


def atom_seeded_convergence(kind: str, k: int, p: float, x: float | None = None,
                            generations: int = 100, elections: int = 100_000,
                            seed: int = 0) -> list[float]:
    """Atom mass per generation when F_0 mixes point masses into Uniform(0,1).

    kind "center": mass p at 1/2. kind "two_spike": mass p at each of x and
    1-x. Returns the combined fraction of each generation's winner pool
    sitting exactly on the atoms (bit-equality).
    """
    from .engine import SimulationConfig, run_trial

    if kind == "center":
        if not 0.0 < p < 1.0:
            raise ValueError("center atom mass must be in (0, 1)")
        atoms = ((0.5, p),)
    elif kind == "two_spike":
        if x is None or not 0.25 < x < 0.5:
            raise ValueError("two_spike needs x in (1/4, 1/2)")
        if not 0.0 < p < 0.5:
            raise ValueError("two_spike atom mass must be in (0, 1/2)")
        atoms = ((x, p), (1.0 - x, p))
    else:
        raise ValueError(f"unknown kind: {kind!r}")

    cfg = SimulationConfig(
        k_counts={k: 1.0},
        generations=generations,
        elections=elections,
        seed=seed,
        rule=TieBreakRule.LEFT_RIGHT,
        atoms=atoms,
        track_atoms=True,
    )
    traj = run_trial(cfg, 0)
    return [float(np.sum(list(rec.summary.atom_mass.values()))) for rec in traj.records]
