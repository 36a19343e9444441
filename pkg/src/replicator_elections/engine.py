"""Generational replicator loop over plurality elections.

Each generation runs n independent elections; the winners form the pool that
the next generation's candidates copy their positions from. Variants layer
onto the copy step: uniform replacement noise (epsilon), Gaussian
perturbation (sigma2), memory over recent generations, copying from top-h
rank pools, mixed candidate counts, and mirrored copying (symmetry).

Determinism contract: every (master seed, trial, generation) triple gets its
own counter-based random stream, and the draw layout inside a generation
depends only on the config, so reruns are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import EmpiricalStats, VoterModel, WinnerPool, uniform
from .election_core import TieBreakRule, batch_top_h

__all__ = [
    "SimulationConfig",
    "GenSummary",
    "GenerationRecord",
    "Trajectory",
    "run_trial",
    "run_experiment",
    "allocate_counts",
    "histogram_modes",
    "ECDF_GRID",
    "HIST_BINS",
]

# Fixed summary resolution: ecdf on 512 grid points (i/512 for i = 1..512)
# and a 200-bin histogram on [0, 1].
ECDF_GRID = np.arange(1, 513) / 512.0
HIST_BINS = 200

_DEFAULT_INTERVALS = ((0.45, 0.55), (0.34, 0.66))


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of one experiment (all trials share this config)."""

    k_counts: dict[int, float]
    generations: int
    elections: int
    trials: int = 1
    seed: int = 0
    rule: TieBreakRule = TieBreakRule.LEFT_RIGHT
    symmetry: bool = False
    epsilon: float = 0.0
    sigma2: float = 0.0
    memory: int = 1
    top_h: int = 1
    voters: VoterModel = field(default_factory=uniform)
    initial: VoterModel = field(default_factory=uniform)
    atoms: tuple[tuple[float, float], ...] = ()
    allow_combined: bool = False
    probe_x: tuple[float, ...] = ()
    mass_intervals: tuple[tuple[float, float], ...] = _DEFAULT_INTERVALS
    track_atoms: bool = False
    keep_pools: bool = False

    def __post_init__(self):
        if not self.k_counts:
            raise ValueError("k_counts must have at least one entry")
        for k, p in self.k_counts.items():
            if k < 1:
                raise ValueError(f"candidate count must be >= 1, got {k}")
            if p < 0:
                raise ValueError(f"k_counts proportion must be >= 0, got {p}")
        if abs(sum(self.k_counts.values()) - 1.0) > 1e-9:
            raise ValueError("k_counts proportions must sum to 1 within 1e-9")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.elections < 1:
            raise ValueError("elections must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        if self.sigma2 < 0.0:
            raise ValueError("sigma2 must be >= 0")
        if self.memory < 1:
            raise ValueError("memory must be >= 1")
        if not 1 <= self.top_h <= min(self.k_counts):
            raise ValueError("top_h must be in [1, min k]")
        atom_mass = 0.0
        for pos, mass in self.atoms:
            if not 0.0 <= pos <= 1.0:
                raise ValueError(f"atom position must be in [0, 1], got {pos}")
            if not 0.0 < mass <= 1.0:
                raise ValueError(f"atom mass must be in (0, 1], got {mass}")
            atom_mass += mass
        if atom_mass > 1.0 + 1e-12:
            raise ValueError("atom masses must sum to <= 1")
        # Variant studies are run one at a time unless explicitly combined.
        active = sum(
            [self.epsilon > 0, self.sigma2 > 0, self.memory > 1,
             self.top_h > 1, len(self.k_counts) > 1]
        )
        if active > 1 and not self.allow_combined:
            raise ValueError(
                "at most one variant of {epsilon, sigma2, memory, top_h, "
                "mixed k_counts} may be active unless allow_combined is set"
            )


def allocate_counts(k_counts: dict[int, float], n: int) -> dict[int, int]:
    """Largest-remainder allocation of n elections across candidate counts."""
    ks = sorted(k_counts)
    raw = {k: k_counts[k] * n for k in ks}
    out = {k: int(math.floor(raw[k])) for k in ks}
    short = n - sum(out.values())
    # deterministic tie order: larger remainder first, then smaller k
    for k in sorted(ks, key=lambda k: (-(raw[k] - out[k]), k))[:short]:
        out[k] += 1
    return {k: c for k, c in out.items() if c > 0}


@dataclass
class GenSummary:
    """Per-generation digest kept even when full pools are dropped."""

    t: int
    ecdf: np.ndarray  # on ECDF_GRID
    hist: np.ndarray  # HIST_BINS counts
    interval_mass: dict[tuple[float, float], float]
    modes: list[float]
    probes: dict[float, float]
    atom_mass: dict[float, float]


@dataclass
class GenerationRecord:
    t: int
    winner_pool: WinnerPool | None
    per_rank_pools: list[np.ndarray] | None
    summary: GenSummary


@dataclass
class Trajectory:
    records: list[GenerationRecord]
    config: SimulationConfig
    trial_index: int
    final_pool: WinnerPool


def histogram_modes(counts, window: int = 12, min_rel: float = 0.05) -> list[float]:
    """Bin centers of local histogram maxima.

    A bin is a mode when it holds the maximum of its +-window neighborhood,
    beats everything to its left in the window strictly (so a flat plateau
    yields one mode), and carries at least min_rel of the global peak.
    """
    counts = np.asarray(counts, dtype=np.float64)
    peak = counts.max()
    if peak <= 0:
        return []
    nbins = counts.size
    modes = []
    for i in range(nbins):
        if counts[i] < min_rel * peak:
            continue
        lo, hi = max(0, i - window), min(nbins, i + window + 1)
        if counts[i] < counts[lo:hi].max():
            continue
        if i > lo and counts[i] <= counts[lo:i].max():
            continue
        modes.append((i + 0.5) / nbins)
    return modes


def _summarize(t: int, positions: np.ndarray, cfg: SimulationConfig) -> GenSummary:
    stats = EmpiricalStats(positions)
    counts, _ = stats.histogram(HIST_BINS)
    atom_mass = {}
    if cfg.track_atoms:
        for pos, _ in cfg.atoms:
            atom_mass[pos] = float(np.mean(positions == pos))
    return GenSummary(
        t=t,
        ecdf=np.asarray(stats.ecdf(ECDF_GRID)),
        hist=counts,
        interval_mass={iv: stats.mass_in(*iv) for iv in cfg.mass_intervals},
        modes=histogram_modes(counts),
        probes={x: float(stats.ecdf(x)) for x in cfg.probe_x},
        atom_mass=atom_mass,
    )


def _gen_rng(cfg: SimulationConfig, trial: int, t: int) -> np.random.Generator:
    """Counter-based stream keyed by (master seed, trial, generation)."""
    seq = np.random.SeedSequence(entropy=(cfg.seed, trial, t))
    return np.random.Generator(np.random.Philox(seq))


def _initial_positions(cfg: SimulationConfig, rng: np.random.Generator) -> np.ndarray:
    n = cfg.elections
    u_choice = rng.random(n)
    u_cont = rng.random(n)
    out = np.asarray(cfg.initial.quantile(u_cont), dtype=np.float64).copy()
    lo = 0.0
    for pos, mass in cfg.atoms:
        out[(u_choice >= lo) & (u_choice < lo + mass)] = pos
        lo += mass
    return out


def _draw_positions(sources: list[list[np.ndarray]], cfg: SimulationConfig,
                    k: int, n_k: int, rng: np.random.Generator) -> np.ndarray:
    """Candidate positions for one block of n_k elections with k candidates.

    sources[g][r] is the rank-r pool of the g-th most recent generation.
    Draw order is fixed; conditional draws depend only on the config so the
    stream layout is reproducible.
    """
    shape = (n_k, k)
    if cfg.epsilon > 0:
        eps_mask = rng.random(shape) < cfg.epsilon
        u_unif = rng.random(shape)
    mm = len(sources)
    src = (rng.random(shape) * mm).astype(np.int64) if cfg.memory > 1 else np.zeros(shape, np.int64)
    rank = (rng.random(shape) * cfg.top_h).astype(np.int64) if cfg.top_h > 1 else np.zeros(shape, np.int64)
    u_pool = rng.random(shape)
    pos = np.empty(shape)
    for g in range(mm):
        for r in range(cfg.top_h):
            sel = (src == g) & (rank == r)
            if not sel.any():
                continue
            arr = sources[g][r]
            idx = np.minimum((u_pool[sel] * arr.size).astype(np.int64), arr.size - 1)
            pos[sel] = arr[idx]
    if cfg.symmetry:
        flip = rng.random(shape) < 0.5
        pos = np.where(flip, 1.0 - pos, pos)
    if cfg.sigma2 > 0:
        pos = np.clip(pos + rng.normal(0.0, math.sqrt(cfg.sigma2), shape), 0.0, 1.0)
    if cfg.epsilon > 0:
        pos = np.where(eps_mask, u_unif, pos)
    return pos


def run_trial(cfg: SimulationConfig, trial: int) -> Trajectory:
    """One seeded trajectory: initial sample plus cfg.generations updates."""
    alloc = allocate_counts(cfg.k_counts, cfg.elections)
    records: list[GenerationRecord] = []
    # recent[0] is the newest generation's rank pools (winner pool = rank 0);
    # only the window needed by the memory variant is retained.
    recent: list[list[np.ndarray]] = []

    rng0 = _gen_rng(cfg, trial, 0)
    init = _initial_positions(cfg, rng0)
    pool0 = WinnerPool(init, 0)
    # before any election has ranked candidates, every rank pool is F_0
    recent.append([init] * cfg.top_h)
    records.append(GenerationRecord(0, pool0 if cfg.keep_pools else None, None,
                                    _summarize(0, init, cfg)))
    last = init

    for t in range(1, cfg.generations + 1):
        rng = _gen_rng(cfg, trial, t)
        win_parts, rank_parts = [], [[] for _ in range(cfg.top_h)]
        for k in sorted(alloc):
            n_k = alloc[k]
            positions = _draw_positions(recent, cfg, k, n_k, rng)
            u_roles = rng.random((n_k, k))
            u_keys = rng.random((n_k, k))
            top = batch_top_h(positions, cfg.voters, cfg.rule, cfg.top_h,
                              u_roles, u_keys)
            win_parts.append(top[:, 0])
            for r in range(cfg.top_h):
                rank_parts[r].append(top[:, r])
        winners = np.concatenate(win_parts)
        ranks = [np.concatenate(p) for p in rank_parts]
        recent.insert(0, ranks)
        del recent[max(cfg.memory, 1):]
        keep = cfg.keep_pools
        records.append(GenerationRecord(
            t,
            WinnerPool(winners, t) if keep else None,
            ranks if (keep and cfg.top_h > 1) else None,
            _summarize(t, winners, cfg),
        ))
        last = winners

    return Trajectory(records, cfg, trial, WinnerPool(last, cfg.generations))


def run_experiment(cfg: SimulationConfig) -> list[Trajectory]:
    """All trials of a config; trial i is independent via its own streams."""
    return [run_trial(cfg, trial) for trial in range(cfg.trials)]


def mean_ecdf(trajectories: list[Trajectory], t: int) -> np.ndarray:
    """Across-trial mean of the generation-t ecdf on ECDF_GRID."""
    return np.mean([tr.records[t].summary.ecdf for tr in trajectories], axis=0)


def pooled_hist(trajectories: list[Trajectory], t: int) -> np.ndarray:
    """Summed generation-t histogram counts across trials."""
    return np.sum([tr.records[t].summary.hist for tr in trajectories], axis=0)
