"""Encoder/decoder model placement on candidate AI satellites.

The placement problem assigns (node, kb, role) model slots so that the
workload routes with minimum total occupied bandwidth, subject to simple
paths, per-link capacity, per-application delay bounds, per-node slot
capacity, and KB matching.  ``solve_exact`` enumerates assignments with
capacity pruning and is meant for small candidate sets; ``solve_greedy``
adds the best marginal assignment until nothing improves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .knowledge import DECODER, ENCODER, NodeSpec
from .routing import Application, CompressionProfile, UnroutableError, admit, route
from .temporal import SnapshotGraph

Assignment = tuple[str, int, str]  # (node id, kb id, role)

# Enumeration guard for the exact solver (per-node option sets multiplied).
MAX_EXACT_COMBINATIONS = 4_000_000


@dataclass(frozen=True)
class DeploymentProblem:
    snapshot: SnapshotGraph
    candidates: tuple[str, ...]
    applications: tuple[Application, ...]
    profile: CompressionProfile
    delay_bounds_ms: dict[int, float]
    penalty_hops: float = 16.0
    weights: tuple[float, float] = (1.0, 0.0)  # (bandwidth, delay)

    def __post_init__(self):
        for app in self.applications:
            bound = self.delay_bounds_ms.get(app.id)
            if bound is None or bound <= 0:
                raise ValueError(f"app {app.id}: needs a positive delay bound")
        for nid in self.candidates:
            node = self.snapshot.nodes.get(nid)
            if node is None:
                raise ValueError(f"candidate {nid} is not in the snapshot")

    def capacity_of(self, nid: str) -> int:
        return self.snapshot.nodes[nid].compute_capacity


@dataclass(frozen=True)
class DeploymentPlan:
    assignments: tuple[Assignment, ...]
    objective_value: float
    infeasible_apps: tuple[int, ...] = ()
    gap: float | None = None
    solver: str = "exact"


def uniform_delay_bounds(apps, bound_ms: float) -> dict[int, float]:
    return {app.id: bound_ms for app in apps}


def apply_assignments(
    nodes: dict[str, NodeSpec], assignments
) -> dict[str, NodeSpec]:
    """New node map with capability entries incremented per assignment."""
    out = dict(nodes)
    for nid, kb, role in assignments:
        node = out[nid]
        enc = list(node.encoder_caps)
        dec = list(node.decoder_caps)
        if role == ENCODER:
            enc[kb] += 1
        elif role == DECODER:
            dec[kb] += 1
        else:
            raise ValueError(f"unknown role {role!r}")
        if sum(enc) + sum(dec) > node.compute_capacity:
            raise CapacityError(nid)
        out[nid] = replace(node, encoder_caps=tuple(enc), decoder_caps=tuple(dec))
    return out


class CapacityError(ValueError):
    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"node {node_id}: assignment exceeds compute capacity")


def apply_plan(plan: DeploymentPlan, snapshots):
    """Snapshots with deployment-augmented capability vectors.

    Accepts one snapshot or a list; inputs are left unmodified.
    """
    single = isinstance(snapshots, SnapshotGraph)
    items = [snapshots] if single else list(snapshots)
    out = []
    for snap in items:
        nodes = apply_assignments(snap.nodes, plan.assignments)
        out.append(snap.with_nodes(nodes))
    return out[0] if single else out


def evaluate_assignments(problem: DeploymentProblem, assignments) -> tuple[float, tuple[int, ...]]:
    """Objective of one assignment set: route the workload and accumulate.

    Each application is routed on a fresh-residual copy of the snapshot with
    the augmented capabilities, admitted in ascending id order.  Routable
    and admitted applications contribute weighted (bandwidth, delay);
    infeasible ones contribute rate x penalty_hops.
    """
    nodes = apply_assignments(problem.snapshot.nodes, assignments)
    working = problem.snapshot.fresh_copy().with_nodes(nodes)
    w_bw, w_delay = problem.weights
    total = 0.0
    infeasible = []
    for app in sorted(problem.applications, key=lambda a: a.id):
        try:
            plan = route(app, working, problem.profile)
        except UnroutableError:
            plan = None
        if (
            plan is None
            or plan.end_to_end_delay_ms > problem.delay_bounds_ms[app.id]
            or not admit(plan, working)
        ):
            total += app.rate_mbps * problem.penalty_hops
            infeasible.append(app.id)
            continue
        total += w_bw * plan.occupied_bandwidth_mbps + w_delay * plan.end_to_end_delay_ms
    return total, tuple(infeasible)


def _node_option_sets(problem: DeploymentProblem):
    """Per-candidate assignment subsets within that node's slot capacity.

    Only (kb, role) pairs some application can use are enumerated; unused
    KBs cannot change any route and are left to zero.
    """
    needed: set[tuple[int, str]] = set()
    for app in problem.applications:
        if app.case_type in (3, 4):
            needed.add((app.kb, ENCODER))
        if app.case_type in (2, 4):
            needed.add((app.kb, DECODER))
    pairs = sorted(needed)
    options_per_node = []
    for nid in sorted(problem.candidates):
        cap = problem.capacity_of(nid)
        opts: list[tuple[Assignment, ...]] = [()]
        for k in range(1, min(cap, len(pairs)) + 1):
            for combo in itertools.combinations(pairs, k):
                opts.append(tuple((nid, kb, role) for kb, role in combo))
        options_per_node.append(opts)
    return options_per_node


def solve_exact(problem: DeploymentProblem) -> DeploymentPlan:
    """Optimal assignment by exhaustive enumeration with capacity pruning."""
    option_sets = _node_option_sets(problem)
    size = 1
    for opts in option_sets:
        size *= len(opts)
        if size > MAX_EXACT_COMBINATIONS:
            raise ValueError(
                "instance too large for exact enumeration; use solve_greedy"
            )
    best_obj = None
    best_assignments: tuple[Assignment, ...] = ()
    best_infeasible: tuple[int, ...] = ()
    for chosen in itertools.product(*option_sets):
        assignments = tuple(a for group in chosen for a in group)
        obj, infeasible = evaluate_assignments(problem, assignments)
        key = (obj, len(assignments), assignments)
        if best_obj is None or key < best_obj:
            best_obj = key
            best_assignments = assignments
            best_infeasible = infeasible
    assert best_obj is not None
    return DeploymentPlan(
        assignments=best_assignments,
        objective_value=best_obj[0],
        infeasible_apps=best_infeasible,
        solver="exact",
    )


def solve_greedy(problem: DeploymentProblem) -> DeploymentPlan:
    """Marginal-gain heuristic: repeatedly add the best-improving assignment.

    Single placements cannot help an application that needs both an encoder
    and a decoder, so when no single step improves, encoder/decoder pairs
    for the still-unserved KBs are tried as one step.  Deterministic:
    candidates are scanned in sorted order and ties keep the first
    improvement found.
    """
    needed: set[tuple[int, str]] = set()
    pair_kbs: set[int] = set()
    for app in problem.applications:
        if app.case_type in (3, 4):
            needed.add((app.kb, ENCODER))
        if app.case_type in (2, 4):
            needed.add((app.kb, DECODER))
        if app.case_type == 4:
            pair_kbs.add(app.kb)
    current: list[Assignment] = []
    used: dict[str, int] = {nid: 0 for nid in problem.candidates}
    obj, infeasible = evaluate_assignments(problem, current)

    def free_nodes():
        return [nid for nid in sorted(problem.candidates)
                if used[nid] < problem.capacity_of(nid)]

    while True:
        best_step = None  # (objective, [assignments], infeasible)
        for nid in free_nodes():
            for kb, role in sorted(needed):
                cand = (nid, kb, role)
                if cand in current:
                    continue
                cand_obj, cand_inf = evaluate_assignments(problem, current + [cand])
                if cand_obj < obj and (best_step is None or cand_obj < best_step[0]):
                    best_step = (cand_obj, [cand], cand_inf)
        if best_step is None:
            for kb in sorted(pair_kbs):
                for enc_node in free_nodes():
                    enc = (enc_node, kb, ENCODER)
                    if enc in current:
                        continue
                    for dec_node in free_nodes():
                        if dec_node == enc_node:
                            continue
                        dec = (dec_node, kb, DECODER)
                        if dec in current:
                            continue
                        cand_obj, cand_inf = evaluate_assignments(
                            problem, current + [enc, dec]
                        )
                        if cand_obj < obj and (
                            best_step is None or cand_obj < best_step[0]
                        ):
                            best_step = (cand_obj, [enc, dec], cand_inf)
        if best_step is None:
            break
        obj, chosen, infeasible = best_step
        current.extend(chosen)
        for assignment in chosen:
            used[assignment[0]] += 1
    return DeploymentPlan(
        assignments=tuple(sorted(current)),
        objective_value=obj,
        infeasible_apps=infeasible,
        solver="greedy",
    )


def write_deployment_plan(plan: DeploymentPlan, path) -> None:
    lines = [
        f"# deployment solver={plan.solver} objective={plan.objective_value!r}"
        + (f" gap={plan.gap!r}" if plan.gap is not None else "")
    ]
    for nid, kb, role in plan.assignments:
        lines.append(f"assign {nid} {kb} {role}")
    for app_id in plan.infeasible_apps:
        lines.append(f"infeasible {app_id}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_deployment_assignments(path) -> tuple[Assignment, ...]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("infeasible"):
                continue
            parts = line.split()
            if parts[0] != "assign" or len(parts) != 4:
                raise ValueError(f"unrecognized deployment record: {line}")
            out.append((parts[1], int(parts[2]), parts[3]))
    return tuple(out)
