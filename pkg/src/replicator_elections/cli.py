"""Command-line surface.

Subcommands: run (simulate and emit trajectory files), bounds (compare an
emitted trajectory against a closed-form bound), nash-check (exact
equilibrium verdict for a profile), heatmap (mixture-of-k mode map), maps
(fixed-point report for an iterated map). Exit codes: 0 success, 2
configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

from . import equilibria, io, theory
from .election_core import TieBreakRule
from .engine import ECDF_GRID, SimulationConfig, pooled_hist, run_experiment

EXIT_CONFIG = 2
EXIT_IO = 3

_BOUND_K = {
    "k2_exact": 2, "k3_upper": 3, "k4_upper": 4,
    "k2_noisy": 2, "k3_noisy": 3, "k4_noisy": 4,
}


def _run_overrides(args) -> dict:
    out = {}
    for key in ("k", "generations", "elections", "trials", "seed", "epsilon",
                "sigma2", "memory", "top_h", "rule"):
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    if args.symmetry:
        out["symmetry"] = True
    return out


def cmd_run(args) -> int:
    try:
        if args.config:
            cfg = io.load_config(args.config, _run_overrides(args))
        else:
            cfg = io.config_from_dict(_run_overrides(args))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    trajectories = run_experiment(cfg)
    try:
        io.emit_trajectory(trajectories, args.out)
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote trajectory files to {args.out}")
    return 0


def _bound_value(kind: str, x: float, t: int, eps: float) -> float:
    if kind == "k2_exact":
        return theory.cdf_k2_exact(x, t)
    if kind == "k3_upper":
        return theory.cdf_k3_upper(x, t)
    if kind == "k4_upper":
        return theory.cdf_k4_upper(x, t)
    if kind == "k2_noisy":
        return theory.noisy_limit_k2(x, eps)
    if kind == "k3_noisy":
        return theory.noisy_limit_k3(eps)
    return theory.noisy_limit_k4(x, eps)


def cmd_bounds(args) -> int:
    traj_dir = Path(args.traj)
    try:
        with open(traj_dir / "manifest.json") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read trajectory manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    cfg = manifest["config"]
    k_counts = {int(k): v for k, v in cfg["k_counts"].items()}
    if len(k_counts) != 1 or next(iter(k_counts)) != _BOUND_K[args.kind]:
        print(f"error: bound {args.kind} needs a fixed k={_BOUND_K[args.kind]} "
              f"trajectory, got k_counts={k_counts}", file=sys.stderr)
        return EXIT_CONFIG
    if args.kind.endswith("_noisy") and args.epsilon is None:
        print("error: noisy bounds need --epsilon", file=sys.stderr)
        return EXIT_CONFIG
    n = cfg["elections"]
    trials = cfg["trials"]

    # mean ecdf across trials at grid points nearest the requested x values
    grid_of = {x: round(x * 512) / 512.0 for x in args.x}
    acc: dict[tuple[int, float], float] = {}
    try:
        with open(traj_dir / "ecdf.csv") as fh:
            for row in csv.DictReader(fh):
                gx = float(row["grid_x"])
                for x, g in grid_of.items():
                    if abs(gx - g) < 1e-12:
                        key = (int(row["t"]), x)
                        acc[key] = acc.get(key, 0.0) + float(row["ecdf_value"])
    except OSError as exc:
        print(f"error: cannot read ecdf.csv: {exc}", file=sys.stderr)
        return EXIT_IO

    started = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        path = out / "bounds.csv"
        with open(path, "w") as fh:
            fh.write("t,x,empirical_ecdf_mean,bound_value,satisfied\n")
            for (t, x), total in sorted(acc.items()):
                emp = total / trials
                try:
                    bound = _bound_value(args.kind, x, t, args.epsilon or 0.0)
                except ValueError as exc:
                    print(f"error: {exc}", file=sys.stderr)
                    return EXIT_CONFIG
                p = min(max(bound, 1e-9), 1 - 1e-9)
                se = math.sqrt(p * (1 - p) / (n * trials))
                if args.kind == "k2_exact":
                    ok = abs(emp - bound) <= 4 * se
                else:
                    ok = emp <= bound + 4 * se
                fh.write(f"{t},{io.fmt(x)},{io.fmt(emp)},{io.fmt(bound)},{str(ok).lower()}\n")
    except OSError as exc:
        print(f"error: cannot write bounds.csv: {exc}", file=sys.stderr)
        return EXIT_IO
    cfg_obj = io.config_from_dict(cfg)
    io.write_manifest(out, cfg_obj, [path], started,
                      notes=[f"bound kind {args.kind}"])
    print(f"wrote {path}")
    return 0


def cmd_nash_check(args) -> int:
    try:
        profile = equilibria.Profile(tuple(args.positions), TieBreakRule(args.rule))
        verdict, witness = equilibria.is_psne(profile, args.grid, args.delta)
        pays = equilibria.payoffs(profile)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = {
        "positions": list(args.positions),
        "rule": args.rule,
        "is_psne": verdict,
        "witness": None if witness is None else
            {"candidate": witness[0], "deviation": witness[1]},
        "payoffs": [
            {"win_probability": p.win_probability, "margins": list(p.margins)}
            for p in pays
        ],
    }
    json.dump(report, sys.stdout, indent=1)
    print()
    return 0


def cmd_heatmap(args) -> int:
    started = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    out = Path(args.out)
    notes = []
    rows = []
    g = args.steps
    cell = 0
    for i in range(g + 1):
        for j in range(g + 1):
            f3, f4 = i / g, j / g
            f5 = 1.0 - f3 - f4
            if f5 < -1e-9:
                notes.append(f"cell ({io.fmt(f3)}, {io.fmt(f4)}) skipped: negative k=5 remainder")
                continue
            f5 = max(f5, 0.0)
            k_counts = {k: f for k, f in ((3, f3), (4, f4), (5, f5)) if f > 0}
            seed = args.seed + cell
            cell += 1
            cfg = SimulationConfig(
                k_counts=k_counts,
                generations=args.generations,
                elections=args.elections,
                trials=args.trials,
                seed=seed,
                symmetry=not args.no_symmetry,
                allow_combined=len(k_counts) > 1,
            )
            trajs = run_experiment(cfg)
            hist = pooled_hist(trajs, args.generations)
            mode = (int(hist.argmax()) + 0.5) / hist.size
            rows.append((f3, f4, f5, seed, min(mode, 1.0 - mode)))
    try:
        out.mkdir(parents=True, exist_ok=True)
        path = out / "heatmap.csv"
        with open(path, "w") as fh:
            fh.write("fraction_k3,fraction_k4,fraction_k5,seed,mode\n")
            for f3, f4, f5, seed, mode in rows:
                fh.write(f"{io.fmt(f3)},{io.fmt(f4)},{io.fmt(f5)},{seed},{io.fmt(mode)}\n")
    except OSError as exc:
        print(f"error: cannot write heatmap.csv: {exc}", file=sys.stderr)
        return EXIT_IO
    cfg_echo = SimulationConfig(k_counts={3: 1.0}, generations=args.generations,
                                elections=args.elections, trials=args.trials,
                                seed=args.seed)
    io.write_manifest(out, cfg_echo, [path], started, notes=notes)
    print(f"wrote {path}")
    return 0


def cmd_maps(args) -> int:
    try:
        if args.map == "large_k":
            m = theory.large_k(args.k)
        elif args.map == "center_mass":
            m = theory.center_mass_threshold(args.k)
        elif args.map == "two_spike":
            m = theory.two_spike_threshold(args.k)
        elif args.map == "quadratic_noisy_k2":
            m = theory.quadratic_noisy_k2(args.epsilon, args.x)
        elif args.map == "cubic_noisy_k3":
            m = theory.cubic_noisy_k3(args.epsilon)
        else:
            m = theory.linear_noisy_k4(args.epsilon, args.x)
        report = {
            "map": m.name,
            "domain": list(m.domain),
            "fixed_points": [
                {"p": p, "stability": s} for p, s in theory.fixed_points(m)
            ],
        }
        if args.orbit is not None:
            orbit = theory.iterate_map(m, args.orbit, args.steps)
            report["orbit_start"] = args.orbit
            report["orbit_end"] = orbit[-1]
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    json.dump(report, sys.stdout, indent=1)
    print()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="replicator-elections",
                                description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate and emit trajectory files")
    run.add_argument("--config", help="JSON config file (flags override it)")
    run.add_argument("--out", default="out", help="output directory")
    run.add_argument("--k", type=int)
    run.add_argument("--generations", type=int)
    run.add_argument("--elections", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--rule", choices=[r.value for r in TieBreakRule])
    run.add_argument("--symmetry", action="store_true")
    run.add_argument("--epsilon", type=float)
    run.add_argument("--sigma2", type=float)
    run.add_argument("--memory", type=int)
    run.add_argument("--top-h", dest="top_h", type=int)
    run.set_defaults(func=cmd_run)

    bounds = sub.add_parser("bounds", help="compare a trajectory to a bound")
    bounds.add_argument("--traj", required=True, help="trajectory output directory")
    bounds.add_argument("--kind", required=True, choices=sorted(_BOUND_K))
    bounds.add_argument("--x", type=float, nargs="+", required=True)
    bounds.add_argument("--epsilon", type=float)
    bounds.add_argument("--out", default="out")
    bounds.set_defaults(func=cmd_bounds)

    nash = sub.add_parser("nash-check", help="exact equilibrium verdict")
    nash.add_argument("--positions", type=float, nargs="+", required=True)
    nash.add_argument("--rule", default=TieBreakRule.LEFT_RIGHT.value,
                      choices=[r.value for r in TieBreakRule])
    nash.add_argument("--grid", type=int, default=10_000)
    nash.add_argument("--delta", type=float, default=1e-6)
    nash.set_defaults(func=cmd_nash_check)

    heat = sub.add_parser("heatmap", help="mode map over k = 3/4/5 mixtures")
    heat.add_argument("--steps", type=int, default=4, help="simplex grid steps")
    heat.add_argument("--generations", type=int, default=100)
    heat.add_argument("--elections", type=int, default=100_000)
    heat.add_argument("--trials", type=int, default=1)
    heat.add_argument("--seed", type=int, default=0)
    heat.add_argument("--no-symmetry", action="store_true")
    heat.add_argument("--out", default="out")
    heat.set_defaults(func=cmd_heatmap)

    maps = sub.add_parser("maps", help="fixed-point report for an iterated map")
    maps.add_argument("--map", required=True,
                      choices=["large_k", "center_mass", "two_spike",
                               "quadratic_noisy_k2", "cubic_noisy_k3",
                               "linear_noisy_k4"])
    maps.add_argument("--k", type=int, default=5)
    maps.add_argument("--epsilon", type=float, default=0.05)
    maps.add_argument("--x", type=float, default=0.4)
    maps.add_argument("--orbit", type=float, help="report the orbit from this start")
    maps.add_argument("--steps", type=int, default=500)
    maps.set_defaults(func=cmd_maps)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
