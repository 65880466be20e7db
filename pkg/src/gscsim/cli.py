"""Command-line entry point: simulate, plan, route and report.

Exit codes are a stable contract: 0 success, 1 feasibility or runtime
failure, 2 usage/configuration errors.  Output files are written
atomically (temp file then rename).
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from .config import ConfigurationError, RunConfig, load_config
from .deployment import (
    DeploymentProblem,
    apply_assignments,
    read_deployment_assignments,
    solve_exact,
    solve_greedy,
    uniform_delay_bounds,
    write_deployment_plan,
)
from .geometry import render_contact_plan
from .routing import Application, UnroutableError, route, route_traditional
from .scenario import (
    build_network,
    compare_methods,
    generate_workload,
    read_metrics_csv,
    render_metrics_csv,
    render_summary,
    run_windows,
)
from .temporal import (
    SnapshotGraph,
    TimeWindow,
    build_snapshot,
    dump_snapshot,
    load_snapshot,
    render_windows,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(config_path: str, seed_override: int | None) -> RunConfig:
    cfg = load_config(config_path)
    if seed_override is not None:
        cfg.experiment = replace(cfg.experiment, seed=seed_override)
    return cfg


def _fixture_snapshot(cfg: RunConfig) -> SnapshotGraph:
    assert cfg.fixture is not None
    plan = cfg.fixture.contact_plan
    window = TimeWindow(0, plan.horizon_start, plan.horizon_end)
    return build_snapshot(plan, window, cfg.fixture.nodes)


def cmd_simulate(args) -> int:
    cfg = _load(args.config, args.seed)
    if cfg.fixture is not None:
        print("simulate requires a synthesized constellation, not a network fixture",
              file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out)
    setup = build_network(cfg.experiment)
    if not setup.windows:
        print("no time windows inside the configured horizon", file=sys.stderr)
        return EXIT_RUNTIME
    if args.deployment:
        setup.nodes = _nodes_with_deployment(setup.nodes, args.deployment)

    _atomic_write(out_dir / cfg.outputs.contact_plan, render_contact_plan(setup.plan))
    _atomic_write(out_dir / cfg.outputs.windows, render_windows(setup.windows))
    if cfg.outputs.snapshots:
        snap_dir = out_dir / cfg.outputs.snapshots
        snap_dir.mkdir(parents=True, exist_ok=True)
        for window in setup.windows:
            snap = build_snapshot(setup.plan, window, setup.nodes)
            _atomic_write(snap_dir / f"window_{window.index:04d}.txt", dump_snapshot(snap))

    report = run_windows(setup, threads=args.threads)
    _atomic_write(out_dir / cfg.outputs.metrics_csv, render_metrics_csv(report))
    _atomic_write(out_dir / cfg.outputs.summary, render_summary(report))
    for diag in report.diagnostics:
        print(f"note: {diag}", file=sys.stderr)
    print(f"simulated {len(setup.windows)} windows, {len(setup.apps)} applications; "
          f"metrics in {out_dir / cfg.outputs.metrics_csv}")
    return EXIT_OK


def cmd_plan(args) -> int:
    cfg = _load(args.config, args.seed)
    try:
        snapshot = load_snapshot(Path(args.snapshot).read_text("utf-8"))
    except FileNotFoundError:
        print(f"snapshot file not found: {args.snapshot}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"unparseable snapshot: {err}", file=sys.stderr)
        return EXIT_USAGE

    apps = _deployment_apps(cfg)
    dep = cfg.deployment
    candidates = tuple(dep.get("candidates", ()))
    if not candidates:
        candidates = tuple(
            nid for nid, node in sorted(snapshot.nodes.items())
            if node.kind == "AISat" or node.compute_capacity > 0
        )
    problem = DeploymentProblem(
        snapshot=snapshot,
        candidates=candidates,
        applications=tuple(apps),
        profile=cfg.experiment.compression_profile(),
        delay_bounds_ms=uniform_delay_bounds(apps, float(dep.get("delayBoundMs", 10000.0))),
        penalty_hops=float(dep.get("penaltyHops", 16.0)),
        weights=tuple(dep.get("weights", (1.0, 0.0))),
    )
    solver = args.solver or dep.get("solver", "exact")
    if solver == "exact":
        plan = solve_exact(problem)
    elif solver == "greedy":
        plan = solve_greedy(problem)
        exact_hint = None
        try:
            exact_hint = solve_exact(problem)
        except ValueError:
            pass
        if exact_hint is not None and exact_hint.objective_value > 0:
            gap = (plan.objective_value - exact_hint.objective_value) / exact_hint.objective_value
            plan = replace(plan, gap=max(0.0, gap))
        elif exact_hint is not None:
            plan = replace(plan, gap=plan.objective_value - exact_hint.objective_value)
    else:
        print(f"unknown solver {solver!r}", file=sys.stderr)
        return EXIT_USAGE
    out_path = Path(args.out) / cfg.outputs.deployment_plan
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_deployment_plan(plan, out_path)
    print(f"{plan.solver} objective {plan.objective_value:.6f}"
          + (f" gap {plan.gap:.6f}" if plan.gap is not None else "")
          + f"; plan in {out_path}")
    return EXIT_OK


def _deployment_apps(cfg: RunConfig) -> list[Application]:
    if cfg.explicit_apps:
        return list(cfg.explicit_apps)
    if cfg.fixture is not None:
        return []
    return generate_workload(cfg.experiment)


class DeploymentFileError(Exception):
    pass


def _nodes_with_deployment(nodes, plan_path):
    try:
        assignments = read_deployment_assignments(plan_path)
        by_id = {n.id: n for n in nodes}
        by_id = apply_assignments(by_id, assignments)
    except (FileNotFoundError, ValueError, KeyError) as err:
        raise DeploymentFileError(f"cannot apply deployment plan {plan_path}: {err}")
    return [by_id[n.id] for n in nodes]


def parse_app_spec(spec: str) -> dict:
    fields = {}
    for part in spec.split(","):
        if not part:
            continue
        key, _, value = part.partition("=")
        fields[key.strip()] = value.strip()
    return fields


def cmd_route(args) -> int:
    cfg = _load(args.config, args.seed)
    fields = parse_app_spec(args.app)
    try:
        app = Application(
            id=int(fields.get("id", 0)),
            case_type=int(fields["case"]),
            src=fields["src"],
            dst=fields["dst"],
            rate_mbps=float(fields.get("rate", 20.0)),
            kb=int(fields.get("kb", 0)),
            ratio=float(fields["ratio"]) if "ratio" in fields else None,
        )
    except (KeyError, ValueError) as err:
        print(f"invalid application spec: {err}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.fixture is not None:
        snapshot = _fixture_snapshot(cfg)
        profile = cfg.experiment.compression_profile()
    else:
        setup = build_network(cfg.experiment)
        if not setup.windows:
            print("no time windows inside the configured horizon", file=sys.stderr)
            return EXIT_RUNTIME
        snapshot = build_snapshot(setup.plan, setup.windows[args.window], setup.nodes)
        profile = setup.profile
    if args.deployment:
        nodes = _nodes_with_deployment(list(snapshot.nodes.values()), args.deployment)
        snapshot = snapshot.with_nodes({n.id: n for n in nodes})

    try:
        if args.method == "traditional":
            plan = route_traditional(app, snapshot)
        else:
            plan = route(app, snapshot, profile)
    except UnroutableError as err:
        print(str(err))
        return EXIT_RUNTIME

    print(f"path: ({', '.join(plan.nodes)})")
    print(f"occupied: {plan.occupied_bandwidth_mbps:.6f} Mbps")
    print(f"delay: {plan.end_to_end_delay_ms:.6f} ms")
    print(f"encoder: {plan.encoder_node or '-'}  decoder: {plan.decoder_node or '-'}")
    print(
        "record: "
        f"app={plan.app_id} window=0 case={plan.case_type} "
        f"path={','.join(plan.nodes)} encoder={plan.encoder_node or '-'} "
        f"decoder={plan.decoder_node or '-'} occupied={plan.occupied_bandwidth_mbps!r} "
        f"delay={plan.end_to_end_delay_ms!r} admitted=1"
    )
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        report = read_metrics_csv(args.metrics)
    except FileNotFoundError:
        print(f"metrics file not found: {args.metrics}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"invalid metrics file: {err}", file=sys.stderr)
        return EXIT_USAGE
    comparison = compare_methods(report)
    print(f"overall bandwidth reduction: {report.overall_reduction:.4f}")
    for case in (1, 2, 3, 4):
        print(f"type {case}: reduction {comparison.reductions[case]:+.4f}")
    print(f"type-1 reduction is the maximum: {comparison.t1_reduction_is_max}")
    print(f"type-4 reduction is the minimum: {comparison.t4_reduction_is_min}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gscsim",
        description="Temporal-graph simulator for semantic-communication LEO networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run the full experiment and write metrics")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--threads", type=int, default=1)
    p_sim.add_argument("--deployment", default=None,
                       help="deployment plan file applied before routing")
    p_sim.add_argument("--out", default="out")
    p_sim.set_defaults(func=cmd_simulate)

    p_plan = sub.add_parser("plan", help="solve model placement for a snapshot")
    p_plan.add_argument("--config", required=True)
    p_plan.add_argument("--snapshot", required=True)
    p_plan.add_argument("--seed", type=int, default=None)
    p_plan.add_argument("--solver", choices=("exact", "greedy"), default=None)
    p_plan.add_argument("--out", default="out")
    p_plan.set_defaults(func=cmd_plan)

    p_route = sub.add_parser("route", help="route a single application")
    p_route.add_argument("--config", required=True)
    p_route.add_argument("--app", required=True,
                         help="case=3,src=U1,dst=U2,rate=20,kb=0[,ratio=0.25]")
    p_route.add_argument("--method", choices=("gsc", "traditional"), default="gsc")
    p_route.add_argument("--window", type=int, default=0)
    p_route.add_argument("--seed", type=int, default=None)
    p_route.add_argument("--deployment", default=None,
                         help="deployment plan file applied before routing")
    p_route.set_defaults(func=cmd_route)

    p_rep = sub.add_parser("report", help="summarize a metrics CSV")
    p_rep.add_argument("--metrics", required=True)
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DeploymentFileError as err:
        print(str(err), file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
