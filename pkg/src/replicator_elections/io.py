"""Config parsing and serialized outputs: trajectory CSVs, summaries, manifests.

Interchange is plain CSV and JSON. Floats are written with 17 significant
digits so 64-bit values round-trip losslessly; every emitted file's sha256 is
recorded in the run manifest, and re-running with the manifest's seed must
reproduce identical digests.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from . import __version__
from .distributions import VoterModel
from .election_core import TieBreakRule
from .engine import ECDF_GRID, SimulationConfig, Trajectory

__all__ = [
    "fmt",
    "config_to_dict",
    "config_from_dict",
    "load_config",
    "emit_trajectory",
    "write_manifest",
    "sha256_file",
]

_CONFIG_KEYS = {
    "k", "k_counts", "generations", "elections", "trials", "seed", "rule",
    "symmetry", "epsilon", "sigma2", "memory", "top_h", "voters", "initial",
    "atoms", "allow_combined", "probe_x", "mass_intervals", "track_atoms",
    "keep_pools",
}


def fmt(x: float) -> str:
    """17-significant-digit decimal form (lossless for 64-bit floats)."""
    return format(float(x), ".17g")


def _model_to_dict(m: VoterModel) -> dict:
    return {"kind": m.kind, "params": list(m.params)}


def _model_from_dict(d: dict) -> VoterModel:
    if isinstance(d, str):
        return VoterModel(d)
    return VoterModel(d["kind"], tuple(float(p) for p in d.get("params", ())))


def config_to_dict(cfg: SimulationConfig) -> dict:
    return {
        "k_counts": {str(k): v for k, v in cfg.k_counts.items()},
        "generations": cfg.generations,
        "elections": cfg.elections,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "rule": cfg.rule.value,
        "symmetry": cfg.symmetry,
        "epsilon": cfg.epsilon,
        "sigma2": cfg.sigma2,
        "memory": cfg.memory,
        "top_h": cfg.top_h,
        "voters": _model_to_dict(cfg.voters),
        "initial": _model_to_dict(cfg.initial),
        "atoms": [list(a) for a in cfg.atoms],
        "allow_combined": cfg.allow_combined,
        "probe_x": list(cfg.probe_x),
        "mass_intervals": [list(iv) for iv in cfg.mass_intervals],
        "track_atoms": cfg.track_atoms,
        "keep_pools": cfg.keep_pools,
    }


def config_from_dict(d: dict) -> SimulationConfig:
    unknown = set(d) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "k" in d and "k_counts" in d:
        raise ValueError("config must set k or k_counts, not both")
    if "k" in d:
        k_counts = {int(d["k"]): 1.0}
    elif "k_counts" in d:
        k_counts = {int(k): float(v) for k, v in d["k_counts"].items()}
    else:
        raise ValueError("config must set k or k_counts")
    kwargs = {}
    if "rule" in d:
        kwargs["rule"] = TieBreakRule(d["rule"])
    if "voters" in d:
        kwargs["voters"] = _model_from_dict(d["voters"])
    if "initial" in d:
        kwargs["initial"] = _model_from_dict(d["initial"])
    if "atoms" in d:
        kwargs["atoms"] = tuple((float(p), float(m)) for p, m in d["atoms"])
    if "probe_x" in d:
        kwargs["probe_x"] = tuple(float(x) for x in d["probe_x"])
    if "mass_intervals" in d:
        kwargs["mass_intervals"] = tuple((float(a), float(b)) for a, b in d["mass_intervals"])
    for key in ("generations", "elections", "trials", "seed", "memory", "top_h"):
        if key in d:
            kwargs[key] = int(d[key])
    for key in ("epsilon", "sigma2"):
        if key in d:
            kwargs[key] = float(d[key])
    for key in ("symmetry", "allow_combined", "track_atoms", "keep_pools"):
        if key in d:
            kwargs[key] = bool(d[key])
    return SimulationConfig(k_counts=k_counts, **kwargs)


def load_config(path: str | Path, overrides: dict | None = None) -> SimulationConfig:
    """Config from a JSON file, with flag overrides applied on top."""
    with open(path) as fh:
        d = json.load(fh)
    if overrides:
        d.update(overrides)
    return config_from_dict(d)


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def emit_trajectory(trajectories: list[Trajectory], out_dir: str | Path) -> Path:
    """Write ecdf.csv, hist.csv, summary.json and the run manifest.

    ecdf.csv: trial, t, grid_x (512 points), ecdf_value.
    hist.csv: trial, t, bin_left (200 bins), count.
    summary.json: per-trial, per-t interval masses, modes, probes, atom mass.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = trajectories[0].config
    started = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())

    ecdf_path = out / "ecdf.csv"
    with open(ecdf_path, "w") as fh:
        fh.write("trial,t,grid_x,ecdf_value\n")
        for tr in trajectories:
            for rec in tr.records:
                for gx, ev in zip(ECDF_GRID, rec.summary.ecdf):
                    fh.write(f"{tr.trial_index},{rec.t},{fmt(gx)},{fmt(ev)}\n")

    hist_path = out / "hist.csv"
    nbins = trajectories[0].records[0].summary.hist.size
    with open(hist_path, "w") as fh:
        fh.write("trial,t,bin_left,count\n")
        for tr in trajectories:
            for rec in tr.records:
                for b, c in enumerate(rec.summary.hist):
                    fh.write(f"{tr.trial_index},{rec.t},{fmt(b / nbins)},{int(c)}\n")

    summary_path = out / "summary.json"
    summary = []
    for tr in trajectories:
        rows = []
        for rec in tr.records:
            s = rec.summary
            rows.append({
                "t": rec.t,
                "interval_mass": {f"{fmt(a)},{fmt(b)}": v for (a, b), v in s.interval_mass.items()},
                "modes": s.modes,
                "probes": {fmt(x): v for x, v in s.probes.items()},
                "atom_mass": {fmt(p): v for p, v in s.atom_mass.items()},
            })
        summary.append({"trial": tr.trial_index, "generations": rows})
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=1)
        fh.write("\n")

    write_manifest(out, cfg, [ecdf_path, hist_path, summary_path], started)
    return out


def write_manifest(out: Path, cfg: SimulationConfig, files: list[Path],
                   started: str, notes: list[str] | None = None) -> Path:
    manifest = {
        "tool_version": __version__,
        "master_seed": cfg.seed,
        "trial_seeds": [[cfg.seed, t] for t in range(cfg.trials)],
        "config": config_to_dict(cfg),
        "started": started,
        "finished": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "files": {p.name: sha256_file(p) for p in files},
        "notes": notes or [],
    }
    path = out / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")
    return path
