"""Mechanics of one plurality election on the unit interval.

Candidates occupy points in [0, 1]; each voter supports the nearest
candidate, so a candidate's vote share is the voter-CDF mass of its Voronoi
cell (midpoints with neighbors, boundary candidates absorb their side).
Coincident candidates split the group's boundary shares per a tie-breaking
rule. Scalar functions here are the readable reference; ``batch_top_h`` is
the vectorized path used by the simulator and delegates ranking to a kernel
(compiled extension or numpy fallback).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .distributions import VoterModel
from .kernels import rank_elections

__all__ = [
    "TieBreakRule",
    "Slate",
    "vote_shares",
    "plurality_winner",
    "top_h_by_share",
    "cell_masses",
    "batch_top_h",
]

# Absolute tolerance for max-share ties; absorbs rounding in midpoint
# arithmetic. The batch kernel realizes the same grid by quantization.
SHARE_TIE_TOL = 1e-12


class TieBreakRule(enum.Enum):
    """How coincident candidates divide their group's boundary vote shares."""

    LEFT_RIGHT = "left_right"
    EQUAL_SPLIT = "equal_split"


@dataclass(frozen=True)
class Slate:
    """Sorted candidate positions for one election."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.sort(np.asarray(self.positions, dtype=np.float64))
        if pos.size < 1:
            raise ValueError("slate needs at least one candidate")
        if np.any((pos < 0.0) | (pos > 1.0)):
            raise ValueError("candidate positions must lie in [0, 1]")
        object.__setattr__(self, "positions", pos)

    def __len__(self):
        return self.positions.size

    def groups(self):
        """Run-length encoding of coincident positions: (start, count) pairs.

        Coincidence means bit-equality; no epsilon merging.
        """
        out = []
        pos = self.positions
        a = 0
        while a < pos.size:
            b = a
            while b + 1 < pos.size and pos[b + 1] == pos[a]:
                b += 1
            out.append((a, b - a + 1))
            a = b + 1
        return out


def _cuts(pos: np.ndarray) -> np.ndarray:
    """Voronoi cell boundaries: 0, midpoints of adjacent positions, 1."""
    k = pos.size
    cuts = np.empty(k + 1)
    cuts[0] = 0.0
    cuts[k] = 1.0
    cuts[1:k] = 0.5 * (pos[:-1] + pos[1:])
    return cuts


def vote_shares(slate: Slate, voters: VoterModel, rule: TieBreakRule,
                rng: np.random.Generator | None = None,
                u_roles: np.ndarray | None = None) -> np.ndarray:
    """Vote share of each candidate, in slate (sorted) order.

    For distinct positions the result is rule- and rng-independent. With
    coincident positions, LEFT_RIGHT hands the group's left share to one
    member chosen uniformly at random and its right share to a different
    member; EQUAL_SPLIT divides the group total equally. ``u_roles`` lets
    callers inject the role-choice uniforms (two per multi-candidate group,
    consumed left to right) instead of drawing from ``rng``.
    """
    pos = slate.positions
    masses = np.maximum(np.diff(voters.cdf(_cuts(pos))), 0.0)
    shares = np.asarray(masses, dtype=np.float64).copy()
    rp = 0
    for a, c in slate.groups():
        if c == 1:
            continue
        left, right = shares[a], shares[a + c - 1]
        shares[a : a + c] = 0.0
        if rule is TieBreakRule.EQUAL_SPLIT:
            shares[a : a + c] = (left + right) / c
        else:
            if u_roles is not None:
                u1, u2 = u_roles[rp], u_roles[rp + 1]
                rp += 2
            else:
                if rng is None:
                    raise ValueError("LEFT_RIGHT with coincident positions needs rng or u_roles")
                u1, u2 = rng.random(), rng.random()
            li = min(int(u1 * c), c - 1)
            rj = min(int(u2 * (c - 1)), c - 2)
            ri = rj + 1 if rj >= li else rj
            shares[a + li] += left
            shares[a + ri] += right
    return shares


def _ranked_indices(shares: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Indices by descending share; ties within SHARE_TIE_TOL broken u.a.r."""
    order = np.argsort(-shares, kind="stable")
    out = []
    i = 0
    while i < order.size:
        j = i
        while j + 1 < order.size and shares[order[i]] - shares[order[j + 1]] <= SHARE_TIE_TOL:
            j += 1
        block = order[i : j + 1]
        out.extend(rng.permutation(block))
        i = j + 1
    return np.asarray(out)


def plurality_winner(slate: Slate, voters: VoterModel, rule: TieBreakRule,
                     rng: np.random.Generator) -> tuple[int, float]:
    """Index and position of the winner (max share, ties broken u.a.r.)."""
    shares = vote_shares(slate, voters, rule, rng)
    idx = int(_ranked_indices(shares, rng)[0])
    return idx, float(slate.positions[idx])


def top_h_by_share(slate: Slate, voters: VoterModel, h: int, rule: TieBreakRule,
                   rng: np.random.Generator) -> np.ndarray:
    """Positions of the h highest-share candidates, descending by share."""
    if not 1 <= h <= len(slate):
        raise ValueError(f"h must be in [1, {len(slate)}], got {h}")
    shares = vote_shares(slate, voters, rule, rng)
    return slate.positions[_ranked_indices(shares, rng)[:h]]


# -- Vectorized path ----------------------------------------------------------


def cell_masses(pos_sorted: np.ndarray, voters: VoterModel) -> np.ndarray:
    """Voronoi cell masses for a (n, k) batch of sorted positions."""
    n, k = pos_sorted.shape
    cuts = np.empty((n, k + 1))
    cuts[:, 0] = 0.0
    cuts[:, k] = 1.0
    cuts[:, 1:k] = 0.5 * (pos_sorted[:, :-1] + pos_sorted[:, 1:])
    return np.maximum(np.diff(voters.cdf(cuts), axis=1), 0.0)


def batch_top_h(positions: np.ndarray, voters: VoterModel, rule: TieBreakRule,
                h: int, u_roles: np.ndarray, u_keys: np.ndarray) -> np.ndarray:
    """Top-h winner positions for a (n, k) batch of elections.

    ``u_roles`` and ``u_keys`` are (n, k) uniforms: role choices for
    coincident groups (two consumed per multi-candidate group, left to
    right) and ranking tie keys. Pre-drawn so the result is a pure function
    of its arguments.
    """
    pos_sorted = np.sort(positions, axis=1)
    masses = cell_masses(pos_sorted, voters)
    return rank_elections(
        np.ascontiguousarray(pos_sorted),
        np.ascontiguousarray(masses),
        rule is TieBreakRule.LEFT_RIGHT,
        np.ascontiguousarray(u_roles),
        np.ascontiguousarray(u_keys),
        h,
    )
