"""Command-line front end.

Subcommands:
  run    integrate a scenario, writing the trajectory CSV, the monitor
         report JSON, and the three figures next to them
  plot   re-render one figure kind from a trajectory CSV
  sweep  batch-run a seeded scenario over derived seeds and summarize

Exit codes: 0 success (a detected singularity is a result, not a failure),
2 validation or usage error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .graphs import is_connected
from .scenario import Scenario, ScenarioError, load_scenario
from .simulator import build_report, integrate
from .tables import TableFormatError, TrajectoryTable, read_trajectory_csv, write_trajectory_csv

FIGURE_KINDS = ("states", "v2", "max_norm")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attsync",
        description="Simulate distributed signum attitude synchronization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate one scenario file")
    p_run.add_argument("scenario", type=Path, help="scenario JSON file")
    p_run.add_argument(
        "--out-dir", type=Path, default=Path("."), help="directory for outputs"
    )
    p_run.set_defaults(handler=_cmd_run)

    p_plot = sub.add_parser("plot", help="render a figure from a trajectory CSV")
    p_plot.add_argument("trajectory", type=Path, help="trajectory CSV file")
    p_plot.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    p_plot.add_argument("--out", type=Path, default=None, help="output figure file")
    p_plot.set_defaults(handler=_cmd_plot)

    p_sweep = sub.add_parser("sweep", help="batch-run a seeded scenario")
    p_sweep.add_argument("scenario", type=Path, help="scenario JSON file (seeded form)")
    p_sweep.add_argument("--count", type=_positive_int, required=True)
    p_sweep.add_argument("--seed", type=int, required=True, help="base seed")
    p_sweep.add_argument("--out", type=Path, default=None, help="summary JSON file")
    p_sweep.set_defaults(handler=_cmd_sweep)

    return parser


def _report_payload(scenario: Scenario, record, report) -> dict:
    payload = report.to_dict()
    payload["scenario"] = scenario.name
    payload["invariance_bound"] = scenario.invariance_bound
    payload["seed"] = scenario.seed
    payload["events"] = [
        {"time": event.time, "kind": event.kind.value} for event in record.events
    ]
    return payload


def _run_one(scenario: Scenario):
    record = integrate(scenario.config)
    report = build_report(record, scenario.config, scenario.invariance_bound)
    return record, report


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    if not is_connected(scenario.config.graph):
        print("warning: graph is not connected; consensus is not expected",
              file=sys.stderr)
    record, report = _run_one(scenario)

    out_dir = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    traj_name = scenario.outputs.get("trajectory", f"{scenario.name}_trajectory.csv")
    report_name = scenario.outputs.get("report", f"{scenario.name}_report.json")

    table = TrajectoryTable.from_record(record)
    traj_path = write_trajectory_csv(out_dir / traj_name, table)
    report_path = out_dir / report_name
    report_path.write_text(
        json.dumps(_report_payload(scenario, record, report), indent=2, sort_keys=True)
        + "\n"
    )

    from .plots import render_figure  # deferred: matplotlib import is slow

    figure_paths = []
    for kind in FIGURE_KINDS:
        figure_paths.append(
            render_figure(table, kind, out_dir / f"{scenario.name}_{kind}.svg")
        )

    print(f"trajectory: {traj_path}")
    print(f"report:     {report_path}")
    for path in figure_paths:
        print(f"figure:     {path}")
    if report.consensus_time is not None:
        print(f"consensus reached at t = {report.consensus_time:.6g} s")
    if report.singularity_time is not None:
        print(f"singularity crossed at t = {report.singularity_time:.6g} s")
    return 0


def _cmd_plot(args) -> int:
    table = read_trajectory_csv(args.trajectory)
    out = args.out
    if out is None:
        out = args.trajectory.with_name(f"{args.trajectory.stem}_{args.kind}.svg")

    from .plots import render_figure

    path = render_figure(table, args.kind, out)
    print(f"figure: {path}")
    return 0


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    if not scenario.seeded:
        raise ScenarioError(
            "initial_state: sweep needs the seeded form (seed + sum_sq_norm)"
        )
    runs = []
    for k in range(args.count):
        seed = args.seed + k
        record, report = _run_one(scenario.with_seed(seed))
        entry = {"seed": seed}
        entry.update(report.to_dict())
        runs.append(entry)
        consensus = report.consensus_time
        print(
            f"run {k:3d} seed={seed} consensus_time="
            f"{'%.6g' % consensus if consensus is not None else 'none'}"
        )

    summary = {
        "scenario": scenario.name,
        "base_seed": args.seed,
        "count": args.count,
        "runs": runs,
        "aggregate": {
            "consensus_count": sum(r["consensus_time"] is not None for r in runs),
            "all_consensus": all(r["consensus_time"] is not None for r in runs),
            "any_invariance_violation": any(r["invariance_violated"] for r in runs),
            "any_singularity": any(r["singularity_time"] is not None for r in runs),
        },
    }
    out = args.out or Path(f"{scenario.name}_sweep.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"summary: {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ScenarioError, TableFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 -- runtime/integration failures
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
