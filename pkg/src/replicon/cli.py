"""Command-line entry points.

    replicon run --config seeded.cfg --seed 1 --steps 300000 --out out/
    replicon analyze out/metrics.jsonl --out out/analysis
    replicon sweep --config seeded.cfg --seeds 1,2,3,4,5 --out sweep/
    replicon calibrate --out calib/

`run` executes one scenario and writes metrics.jsonl, periodic snapshots,
optional SVG frames and a report.json. `analyze` prints a summary of a
metrics file and, with --out, exports CSV tables and rendered figures.
`sweep` runs one scenario across several seeds (parallelism capped by the
REPLICON_THREADS environment variable). `calibrate` searches a small grid of
physics constants for a profile that replicates reliably.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import ConfigError, load_config, save_config
from .harness import Scenario, calibrate, run_scenario
from .model import SimParams
from .output import load_snapshot
from .report import analyze_metrics


def _threads() -> int:
    raw = os.environ.get("REPLICON_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, os.cpu_count() or 1)


def _cmd_run(args) -> int:
    try:
        scenario = load_config(args.config) if args.config else Scenario()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        scenario.rng_seed = args.seed
    if args.steps is not None:
        scenario.max_steps = args.steps
    if args.snapshot_every is not None:
        scenario.snapshot_every = args.snapshot_every
    if args.frame_every is not None:
        scenario.frame_every = args.frame_every

    out_dir = Path(args.out) if args.out else None
    if out_dir is not None:
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            print(f"error: cannot create output directory {out_dir}: {exc}", file=sys.stderr)
            return 2

    if args.resume:
        from .harness import run_world
        world = load_snapshot(args.resume)
        report = run_world(world, scenario.max_steps, name=scenario.name,
                           out_dir=out_dir,
                           snapshot_every=scenario.snapshot_every,
                           frame_every=scenario.frame_every,
                           stop_after_replications=scenario.stop_after_replications,
                           audit_invariants=scenario.audit_invariants)
    else:
        try:
            scenario.validate()
        except ValueError as exc:
            print(f"error: invalid scenario: {exc}", file=sys.stderr)
            return 2
        report = run_scenario(scenario, out_dir=out_dir)

    print(f"{report.scenario_name}: {report.steps_executed} steps, "
          f"normalized time {report.normalized_time:g}, "
          f"{len(report.replication_events)} replications, "
          f"{len(report.spontaneous_bonds)} spontaneous bonds, "
          f"{report.wall_clock:.1f}s")
    if report.aborted:
        print(f"aborted: {report.aborted}", file=sys.stderr)
        return 1
    return 0


def _cmd_analyze(args) -> int:
    try:
        text = analyze_metrics(args.metrics, out_dir=args.out)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(text)
    return 0


def _run_one_seed(payload):
    # module-level helper so process pools can pickle it
    config_text, seed, out_dir = payload
    from .config import parse_config
    scenario = parse_config(config_text)
    scenario.rng_seed = seed
    scenario.name = f"{scenario.name}-seed{seed}"
    report = run_scenario(scenario, out_dir=Path(out_dir) if out_dir else None)
    return (seed, report.steps_executed, len(report.replication_events),
            report.first_replication_step, report.wall_clock, report.aborted)


def _cmd_sweep(args) -> int:
    try:
        config_text = Path(args.config).read_text(encoding="utf-8")
        load_config(args.config)  # validate before spawning work
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    out_base = Path(args.out) if args.out else None
    jobs = [(config_text, seed,
             str(out_base / f"seed_{seed}") if out_base else None)
            for seed in seeds]
    threads = min(_threads(), len(jobs))
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_one_seed, jobs))
    else:
        results = [_run_one_seed(j) for j in jobs]
    print(f"{'seed':>6} {'steps':>10} {'replications':>13} {'first':>10} {'wall':>8}")
    failures = 0
    for seed, steps, reps, first, wall, aborted in results:
        first_s = str(first) if first is not None else "-"
        print(f"{seed:>6} {steps:>10} {reps:>13} {first_s:>10} {wall:>7.1f}s"
              + ("  ABORTED" if aborted else ""))
        if aborted:
            failures += 1
    return 1 if failures else 0


_PROFILE = {
    # the shipped calibrated profile (see configs/seeded.cfg)
    "timestep_duration": 0.1,
    "brownian_linear_sigma": 0.35,
    "brownian_angular_sigma": 0.15,
    "linear_viscosity": 0.9,
    "angular_viscosity": 0.85,
    "linear_dampening": 0.9,
    "angular_dampening": 0.55,
    "k_attract": 20.0,
    "k_straighten": 16.0,
    "k_repel": 3.0,
    "moment_of_inertia": 25.0,
    "radius_small_red": 0.03,
    "radius_small_blue": 0.03,
    "radius_small_green": 0.25,
    "radius_small_purple": 0.25,
    "radius_large_green": 3.5,
    "radius_large_purple": 3.5,
}


def _default_grid() -> list[dict]:
    """The shipped profile plus one-knob variations around it."""
    grid = [dict(_PROFILE)]
    for knob, values in (("k_attract", (14.0, 26.0)),
                         ("brownian_linear_sigma", (0.25, 0.45)),
                         ("angular_dampening", (0.45, 0.7))):
        for v in values:
            candidate = dict(_PROFILE)
            candidate[knob] = v
            grid.append(candidate)
    return grid


def _cmd_calibrate(args) -> int:
    base = SimParams()
    results = calibrate(_default_grid(), trials=args.trials, base=base,
                        container=args.container,
                        intact_steps=args.intact_steps,
                        replication_budget=args.budget,
                        rarity_steps=args.rarity_steps)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ranking = [{"overrides": r.overrides, "seed_intact": r.seed_intact,
                "replication_rate": r.replication_rate,
                "mean_first_replication": (None if r.mean_first_replication == float("inf")
                                           else r.mean_first_replication),
                "spurious_bonds": r.spurious_bonds}
               for r in results]
    (out / "ranking.json").write_text(json.dumps(ranking, indent=2) + "\n", encoding="utf-8")
    best = results[0]
    scenario = Scenario(name="calibrated", seed_bits="00011001", free_codon_count=80,
                        container_width=args.container, container_height=args.container,
                        params=SimParams(**best.overrides),
                        max_steps=300_000)
    save_config(scenario, out / "profile.cfg")
    print(f"wrote {out / 'ranking.json'} and {out / 'profile.cfg'}")
    for r in results:
        print(f"  intact={r.seed_intact:.2f} replication={r.replication_rate:.2f} "
              f"first={r.mean_first_replication:.0f} spurious={r.spurious_bonds:.1f} "
              f"{r.overrides}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="replicon",
                                     description="self-replicating automata simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    p_run.add_argument("--config", help="scenario config file (key = value lines)")
    p_run.add_argument("--seed", type=int, help="override rng_seed")
    p_run.add_argument("--steps", type=int, help="override max_steps")
    p_run.add_argument("--out", help="output directory for metrics/snapshots/frames")
    p_run.add_argument("--resume", help="snapshot file to continue from")
    p_run.add_argument("--snapshot-every", type=int, dest="snapshot_every")
    p_run.add_argument("--frame-every", type=int, dest="frame_every")
    p_run.set_defaults(func=_cmd_run)

    p_an = sub.add_parser("analyze", help="summarize a metrics file")
    p_an.add_argument("metrics", help="metrics.jsonl file or run directory")
    p_an.add_argument("--out", help="directory for CSV tables and figures")
    p_an.set_defaults(func=_cmd_analyze)

    p_sw = sub.add_parser("sweep", help="run a scenario across several seeds")
    p_sw.add_argument("--config", required=True)
    p_sw.add_argument("--seeds", required=True, help="comma-separated seed list")
    p_sw.add_argument("--out", help="base output directory (one subdir per seed)")
    p_sw.set_defaults(func=_cmd_sweep)

    p_cal = sub.add_parser("calibrate", help="search physics constants")
    p_cal.add_argument("--out", required=True)
    p_cal.add_argument("--trials", type=int, default=2)
    p_cal.add_argument("--budget", type=int, default=150_000,
                       help="max steps per replication probe")
    p_cal.add_argument("--intact-steps", type=int, default=20_000, dest="intact_steps")
    p_cal.add_argument("--rarity-steps", type=int, default=20_000, dest="rarity_steps")
    p_cal.add_argument("--container", type=float, default=200.0)
    p_cal.set_defaults(func=_cmd_calibrate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
