"""Capability-aware routing over one snapshot graph.

An application is routed under one of four cases describing where semantic
encoding and decoding can happen (terminals, satellites, or both).  The
search runs over a stage-expanded product graph whose states are
(physical node, stage); stage transitions exist only at nodes holding a
matching encoder or decoder model.  The objective is end-to-end delay,
with occupied bandwidth and then the lexicographic node sequence as
deterministic tie-breakers.  Returned paths are always physically simple;
when the unconstrained search closes a physical loop, an exact
branch-and-bound over simple paths takes over.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace

from .temporal import SnapshotGraph

RAW_PRE = 0
COMP_FRESH = 1
COMP = 2
RAW_POST = 3
STAGE_LABELS = {RAW_PRE: "raw-pre", COMP_FRESH: "compressed", COMP: "compressed", RAW_POST: "raw-post"}

RESIDUAL_EPS = 1e-9

GSC = "gsc"
TRADITIONAL = "traditional"

CASE_BOTH_TERMINALS = 1
CASE_SENDER_ENCODES = 2
CASE_RECEIVER_DECODES = 3
CASE_SATELLITES_ONLY = 4


class UnroutableError(Exception):
    """No feasible plan; ``reason`` is one of the documented categories."""

    REASONS = ("disconnected", "noMatchingKB", "insufficientCapacity")

    def __init__(self, reason: str, detail: str = ""):
        if reason not in self.REASONS:
            raise ValueError(f"unknown unroutable reason {reason!r}")
        self.reason = reason
        super().__init__(f"unroutable: {reason}" + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class Application:
    """A source->destination demand with its capability case and KB.

    ``ratio`` optionally pins the compression ratio for this application;
    otherwise the profile's per-KB ratio applies.
    """

    id: int
    case_type: int
    src: str
    dst: str
    rate_mbps: float
    kb: int
    ratio: float | None = None

    def __post_init__(self):
        if self.case_type not in (1, 2, 3, 4):
            raise ValueError(f"app {self.id}: case type must be 1..4")
        if self.src == self.dst:
            raise ValueError(f"app {self.id}: src and dst must differ")
        if self.rate_mbps <= 0:
            raise ValueError(f"app {self.id}: rate must be positive")
        if self.kb < 0:
            raise ValueError(f"app {self.id}: kb id must be >= 0")
        if self.ratio is not None and not 0.0 < self.ratio <= 1.0:
            raise ValueError(f"app {self.id}: ratio must lie in (0, 1]")


@dataclass(frozen=True)
class CompressionProfile:
    """Per-KB compression ratios and satellite compute latencies (ms)."""

    ratios: tuple[float, ...] = (0.25,)
    encode_latency_ms: tuple[float, ...] = ()
    decode_latency_ms: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.ratios:
            raise ValueError("profile needs at least one ratio")
        if any(not 0.0 < r <= 1.0 for r in self.ratios):
            raise ValueError("compression ratios must lie in (0, 1]")
        n = len(self.ratios)
        object.__setattr__(
            self, "encode_latency_ms", tuple(self.encode_latency_ms) or (0.0,) * n
        )
        object.__setattr__(
            self, "decode_latency_ms", tuple(self.decode_latency_ms) or (0.0,) * n
        )
        if len(self.encode_latency_ms) != n or len(self.decode_latency_ms) != n:
            raise ValueError("latency vectors must match the ratio vector length")

    def ratio_for(self, kb: int) -> float:
        return self.ratios[kb]

    def encode_latency(self, kb: int) -> float:
        return self.encode_latency_ms[kb]

    def decode_latency(self, kb: int) -> float:
        return self.decode_latency_ms[kb]


def effective_ratio(app: Application, profile: CompressionProfile) -> float:
    return app.ratio if app.ratio is not None else profile.ratio_for(app.kb)


@dataclass(frozen=True)
class RoutePlan:
    """One admitted-or-pending route with stage bookkeeping."""

    app_id: int
    method: str
    case_type: int
    kb: int
    rate_mbps: float
    ratio: float
    nodes: tuple[str, ...]
    links: tuple[tuple[str, str], ...]
    stage_labels: tuple[str, ...]
    per_link_rate: tuple[float, ...]
    per_link_delay: tuple[float, ...]
    encoder_node: str | None
    decoder_node: str | None
    occupied_bandwidth_mbps: float
    end_to_end_delay_ms: float
    fallback: bool = False

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError(f"app {self.app_id}: route must be a simple path")


@dataclass
class ExpandedGraph:
    """Product graph of (node, stage) states for one application."""

    start: tuple[str, int]
    accepts: frozenset
    adjacency: dict
    dst_node: str


# Edge tuples: (to_state, delay_ms, rate_mbps, label)
# where label is a stage label for physical links, or "encode"/"decode"
# for zero-length transitions.


def _case_structure(case: int, rate: float, comp_rate: float):
    """Per-case link stages as (from_stage, to_stage, rate) plus endpoints."""
    if case == CASE_BOTH_TERMINALS:
        return [(COMP, COMP, comp_rate)], COMP, COMP
    if case == CASE_SENDER_ENCODES:
        return [(COMP, COMP, comp_rate), (RAW_POST, RAW_POST, rate)], COMP, RAW_POST
    if case == CASE_RECEIVER_DECODES:
        return [(RAW_PRE, RAW_PRE, rate), (COMP, COMP, comp_rate)], RAW_PRE, COMP
    return (
        [
            (RAW_PRE, RAW_PRE, rate),
            (COMP_FRESH, COMP, comp_rate),
            (COMP, COMP, comp_rate),
            (RAW_POST, RAW_POST, rate),
        ],
        RAW_PRE,
        RAW_POST,
    )


def expand_stage_graph(
    snapshot: SnapshotGraph,
    app: Application,
    profile: CompressionProfile,
    enforce_capacity: bool = True,
) -> ExpandedGraph:
    """Build the stage-expanded graph realizing the application's case.

    Physical links replicate in every stage the case uses, carrying that
    stage's rate requirement; links without residual capacity for the
    stage's rate are omitted.  Encode transitions exist at nodes whose
    encoder entry for the application's KB is >= 1, decode transitions at
    nodes whose decoder entry is >= 1; both carry the configured compute
    latency and occupy no bandwidth.  Case 4 routes encode into a separate
    entry stage so the compressed section always spans at least one link,
    which also forbids encoding and decoding on the same node.
    """
    rate = app.rate_mbps
    ratio = effective_ratio(app, profile)
    comp_rate = rate * ratio
    kb = app.kb
    case = app.case_type
    link_stages, start_stage, accept_stage = _case_structure(case, rate, comp_rate)

    adjacency: dict = {}

    def edges_of(state):
        return adjacency.setdefault(state, [])

    for link in snapshot.links:
        for from_stage, to_stage, stage_rate in link_stages:
            if enforce_capacity and link.residual_mbps + RESIDUAL_EPS < stage_rate:
                continue
            label = STAGE_LABELS[to_stage]
            a, b = link.node_a, link.node_b
            edges_of((a, from_stage)).append(((b, to_stage), link.delay_ms, stage_rate, label))
            edges_of((b, from_stage)).append(((a, to_stage), link.delay_ms, stage_rate, label))

    if case in (CASE_RECEIVER_DECODES, CASE_SATELLITES_ONLY):
        enc_target = COMP if case == CASE_RECEIVER_DECODES else COMP_FRESH
        for nid, node in snapshot.nodes.items():
            if node.can_encode(kb):
                edges_of((nid, RAW_PRE)).append(
                    ((nid, enc_target), profile.encode_latency(kb), 0.0, "encode")
                )
    if case in (CASE_SENDER_ENCODES, CASE_SATELLITES_ONLY):
        for nid, node in snapshot.nodes.items():
            if node.can_decode(kb):
                edges_of((nid, COMP)).append(
                    ((nid, RAW_POST), profile.decode_latency(kb), 0.0, "decode")
                )

    for state in adjacency:
        adjacency[state].sort(key=lambda e: (e[0], e[3]))

    return ExpandedGraph(
        start=(app.src, start_stage),
        accepts=frozenset({(app.dst, accept_stage)}),
        adjacency=adjacency,
        dst_node=app.dst,
    )


def _node_sequence(pred, state):
    """Physical node ids along the stored best path to ``state``."""
    seq = []
    cur = state
    while cur is not None:
        prev = pred.get(cur)
        if prev is None:
            seq.append(cur[0])
            cur = None
        else:
            prev_state, edge = prev
            if edge[3] not in ("encode", "decode"):
                seq.append(cur[0])
            cur = prev_state
    seq.reverse()
    return seq


def shortest_delay_path(graph: ExpandedGraph, src_state, dst_states, restrictions=None):
    """Delay-minimal walk in the expanded graph, or None when unreachable.

    Ties resolve by accumulated bandwidth, then by the lexicographic
    physical node sequence, so results are deterministic.  Returns the step
    list [(from_state, to_state, delay, rate, label), ...]; an empty list
    when the source already satisfies an accepting state.
    """
    dst_states = frozenset(dst_states)
    if src_state in dst_states:
        return []
    if restrictions:
        src_chain = restrictions.get(src_state[0])
        if src_chain is not None and src_state[1] not in src_chain:
            return None
    dist: dict = {src_state: (0.0, 0.0)}
    pred: dict = {src_state: None}
    counter = 0
    heap = [(0.0, 0.0, 0, src_state)]
    best_accept = None  # (delay, bw, seq, state)
    adjacency = graph.adjacency

    while heap:
        d, b, _, state = heapq.heappop(heap)
        if (d, b) != dist.get(state):
            continue
        if best_accept is not None and (d, b) > best_accept[:2]:
            break
        if state in dst_states:
            seq = _node_sequence(pred, state)
            cand = (d, b, seq, state)
            if best_accept is None or cand[:3] < best_accept[:3]:
                best_accept = cand
            continue
        for edge in adjacency.get(state, ()):
            if restrictions and not _edge_allowed(restrictions, state, edge):
                continue
            to_state, e_delay, e_rate, label = edge
            nd, nb = d + e_delay, b + e_rate
            known = dist.get(to_state)
            if known is None or (nd, nb) < known:
                dist[to_state] = (nd, nb)
                pred[to_state] = (state, edge)
                counter += 1
                heapq.heappush(heap, (nd, nb, counter, to_state))
            elif (nd, nb) == known:
                new_seq = _node_sequence(pred, state)
                if label not in ("encode", "decode"):
                    new_seq = new_seq + [to_state[0]]
                if new_seq < _node_sequence(pred, to_state):
                    pred[to_state] = (state, edge)
                    counter += 1
                    heapq.heappush(heap, (nd, nb, counter, to_state))

    if best_accept is None:
        return None
    steps = []
    cur = best_accept[3]
    while pred[cur] is not None:
        prev_state, edge = pred[cur]
        steps.append((prev_state, edge[0], edge[1], edge[2], edge[3]))
        cur = prev_state
    steps.reverse()
    return steps


def _edge_allowed(restrictions: dict, state, edge) -> bool:
    """Edge filter for a restricted subproblem.

    A restriction maps a physical node to the contiguous stage chain a path
    may use there (possibly empty = node excluded): links may only enter at
    the chain head, leave from the chain tail, and transitions must follow
    the chain, so a restricted node can never be revisited.
    """
    node, stage = state
    (to_node, to_stage), _, _, label = edge
    is_move = label not in ("encode", "decode")
    chain = restrictions.get(node)
    if chain is not None:
        if stage not in chain:
            return False
        if is_move and stage != chain[-1]:
            return False
        if not is_move:
            pos = chain.index(stage)
            if pos + 1 >= len(chain) or chain[pos + 1] != to_stage:
                return False
    if is_move:
        to_chain = restrictions.get(to_node)
        if to_chain is not None and (to_stage not in to_chain or to_stage != to_chain[0]):
            return False
    return True


def _first_conflict(src: str, steps):
    """First physical node the walk revisits, or None when simple."""
    order = [src]
    for _, to_state, _, _, label in steps:
        if label not in ("encode", "decode"):
            order.append(to_state[0])
    seen: set[str] = set()
    for node in order:
        if node in seen:
            return node
        seen.add(node)
    return None


def _usage_chains(graph: ExpandedGraph, node: str):
    """Contiguous stage chains a simple path could use at ``node``."""
    stages = sorted({s for (n, s) in graph.adjacency if n == node})
    transitions = []
    for s in stages:
        for (to_node, to_stage), _, _, label in graph.adjacency.get((node, s), ()):
            if label in ("encode", "decode") and to_node == node:
                transitions.append((s, to_stage))
    next_of = dict(transitions)
    chains: list[tuple[int, ...]] = []
    for s in stages:
        chain = [s]
        chains.append(tuple(chain))
        cur = s
        while cur in next_of:
            cur = next_of[cur]
            chain.append(cur)
            chains.append(tuple(chain))
    if node not in (graph.start[0], graph.dst_node):
        chains.append(())
    # De-duplicate while preserving deterministic order.
    seen = set()
    unique = []
    for c in sorted(chains):
        if c not in seen:
            seen.add(c)
            unique.append(c)
    return unique


def _walk_key(src: str, steps):
    delay = 0.0
    bw = 0.0
    seq = [src]
    for _, to_state, e_delay, e_rate, label in steps:
        delay += e_delay
        bw += e_rate
        if label not in ("encode", "decode"):
            seq.append(to_state[0])
    return (delay, bw, seq)


# Subproblem budget for the exact conflict-branching search.  Small
# instances finish far below it; beyond it the search commits each popped
# walk's first-visit chains one node at a time, which converges linearly
# and stays deterministic, trading optimality for bounded latency.
SIMPLE_SEARCH_BUDGET = 200


def _first_visit_chain(src: str, steps, node: str):
    """Stage chain of ``node``'s first contiguous visit along the walk."""
    chain: list[int] = []
    if src == node:
        chain.append(steps[0][0][1] if steps else 0)
    for from_state, to_state, _, _, _ in steps:
        if to_state[0] == node:
            if not chain:
                chain.append(to_state[1])
            elif from_state[0] == node:
                chain.append(to_state[1])
            else:
                break
        elif chain and from_state[0] == node:
            break
    return tuple(chain)


def _best_simple_steps(graph: ExpandedGraph, root_steps=None, budget=SIMPLE_SEARCH_BUDGET):
    """Best physically simple stage-consistent path via conflict branching.

    Whenever the relaxed (walk) optimum of a subproblem revisits a node,
    split into subproblems fixing that node's usage to each possible
    contiguous chain or excluding it.  Subproblems are explored best-first
    by relaxation key, so the first simple relaxation popped is the global
    optimum including tie-breakers.  Once the relaxation budget is spent,
    each popped walk is repaired by committing its first-visit chain at the
    conflicting node (single child), which keeps the search deterministic
    and linear while abandoning the optimality proof.
    """
    if root_steps is None:
        root_steps = shortest_delay_path(graph, graph.start, graph.accepts)
    if root_steps is None:
        return None
    src = graph.start[0]
    counter = 0
    relaxations = 0
    heap = [(_walk_key(src, root_steps), counter, {}, root_steps)]
    seen_restrictions = {frozenset()}
    while heap:
        key, _, restrictions, steps = heapq.heappop(heap)
        conflict = _first_conflict(src, steps)
        if conflict is None:
            return steps
        if relaxations <= budget:
            chains = _usage_chains(graph, conflict)
        else:
            chains = [_first_visit_chain(src, steps, conflict)]
        for chain in chains:
            branched = dict(restrictions)
            branched[conflict] = chain
            marker = frozenset(branched.items())
            if marker in seen_restrictions:
                continue
            seen_restrictions.add(marker)
            sub_steps = shortest_delay_path(
                graph, graph.start, graph.accepts, restrictions=branched
            )
            relaxations += 1
            if sub_steps is None:
                continue
            counter += 1
            heapq.heappush(
                heap, (_walk_key(src, sub_steps), counter, branched, sub_steps)
            )
    return None


def _steps_are_simple(src: str, steps) -> bool:
    seen = {src}
    for _, to_state, _, _, label in steps:
        if label in ("encode", "decode"):
            continue
        if to_state[0] in seen:
            return False
        seen.add(to_state[0])
    return True


def _physically_connected(snapshot: SnapshotGraph, src: str, dst: str) -> bool:
    adj = snapshot.adjacency()
    if src not in adj or dst not in adj:
        return False
    seen = {src}
    frontier = [src]
    while frontier:
        cur = frontier.pop()
        if cur == dst:
            return True
        for nbr, _ in adj.get(cur, ()):
            if nbr not in seen:
                seen.add(nbr)
                frontier.append(nbr)
    return False


def _stage_steps(snapshot, app, profile, enforce_capacity: bool):
    """Best stage-consistent simple path, or None."""
    graph = expand_stage_graph(snapshot, app, profile, enforce_capacity=enforce_capacity)
    steps = shortest_delay_path(graph, graph.start, graph.accepts)
    if steps is None:
        return None
    if not _steps_are_simple(app.src, steps):
        steps = _best_simple_steps(graph, root_steps=steps)
    return steps


def _assemble_plan(app, profile, steps, method: str, fallback: bool = False) -> RoutePlan:
    rate = app.rate_mbps
    ratio = effective_ratio(app, profile)
    nodes = [app.src]
    links: list[tuple[str, str]] = []
    labels: list[str] = []
    rates: list[float] = []
    delays: list[float] = []
    encoder = None
    decoder = None
    transition_delay = 0.0
    for from_state, to_state, e_delay, e_rate, label in steps:
        if label == "encode":
            encoder = from_state[0]
            transition_delay += e_delay
        elif label == "decode":
            decoder = from_state[0]
            transition_delay += e_delay
        else:
            nodes.append(to_state[0])
            links.append((from_state[0], to_state[0]))
            labels.append(label)
            rates.append(e_rate)
            delays.append(e_delay)
    if method == GSC:
        if app.case_type == CASE_BOTH_TERMINALS:
            encoder, decoder = app.src, app.dst
        elif app.case_type == CASE_SENDER_ENCODES:
            encoder = app.src
        elif app.case_type == CASE_RECEIVER_DECODES:
            decoder = app.dst
    n_comp = sum(1 for l in labels if l == "compressed")
    n_raw = len(labels) - n_comp
    occupied = rate * (n_raw + ratio * n_comp) if method == GSC else rate * len(labels)
    delay = 0.0
    for d in delays:
        delay += d
    delay += transition_delay
    return RoutePlan(
        app_id=app.id,
        method=method,
        case_type=app.case_type,
        kb=app.kb,
        rate_mbps=rate,
        ratio=ratio if method == GSC else 1.0,
        nodes=tuple(nodes),
        links=tuple(links),
        stage_labels=tuple(labels),
        per_link_rate=tuple(rates),
        per_link_delay=tuple(delays),
        encoder_node=encoder,
        decoder_node=decoder,
        occupied_bandwidth_mbps=occupied,
        end_to_end_delay_ms=delay,
        fallback=fallback,
    )


def route(app: Application, snapshot: SnapshotGraph, profile: CompressionProfile) -> RoutePlan:
    """Route one application under its capability case.

    Raises UnroutableError when no stage-consistent simple path exists,
    classifying the cause as disconnected topology, missing matching
    encoder/decoder capability, or exhausted link capacity.
    """
    if app.src not in snapshot.nodes or app.dst not in snapshot.nodes:
        raise UnroutableError("disconnected", f"{app.src} or {app.dst} absent from snapshot")
    steps = _stage_steps(snapshot, app, profile, enforce_capacity=True)
    if steps is not None:
        return _assemble_plan(app, profile, steps, GSC)
    if not _physically_connected(snapshot, app.src, app.dst):
        raise UnroutableError("disconnected")
    if _stage_steps(snapshot, app, profile, enforce_capacity=False) is not None:
        raise UnroutableError("insufficientCapacity")
    raise UnroutableError("noMatchingKB")


def route_traditional(app: Application, snapshot: SnapshotGraph) -> RoutePlan:
    """Baseline: raw-rate shortest-delay path, no semantic processing."""
    if app.src not in snapshot.nodes or app.dst not in snapshot.nodes:
        raise UnroutableError("disconnected", f"{app.src} or {app.dst} absent from snapshot")
    adjacency: dict = {}
    for link in snapshot.links:
        if link.residual_mbps + RESIDUAL_EPS < app.rate_mbps:
            continue
        a, b = (link.node_a, RAW_PRE), (link.node_b, RAW_PRE)
        edge_ab = (b, link.delay_ms, app.rate_mbps, "raw-pre")
        edge_ba = (a, link.delay_ms, app.rate_mbps, "raw-pre")
        adjacency.setdefault(a, []).append(edge_ab)
        adjacency.setdefault(b, []).append(edge_ba)
    for state in adjacency:
        adjacency[state].sort(key=lambda e: (e[0], e[3]))
    graph = ExpandedGraph(
        start=(app.src, RAW_PRE),
        accepts=frozenset({(app.dst, RAW_PRE)}),
        adjacency=adjacency,
        dst_node=app.dst,
    )
    steps = shortest_delay_path(graph, graph.start, graph.accepts)
    if steps is None:
        if _physically_connected(snapshot, app.src, app.dst):
            raise UnroutableError("insufficientCapacity")
        raise UnroutableError("disconnected")
    return _assemble_plan(app, CompressionProfile((1.0,) * max(1, app.kb + 1)), steps, TRADITIONAL)


def route_with_fallback(
    app: Application, snapshot: SnapshotGraph, profile: CompressionProfile
) -> RoutePlan:
    """GSC routing with the documented degradation for satellite-dependent cases.

    Cases 2-4 fall back to a raw traditional path when no matching
    encoder/decoder satellite is reachable; the plan is flagged.  Capacity
    exhaustion and disconnection propagate unchanged.
    """
    try:
        return route(app, snapshot, profile)
    except UnroutableError as err:
        if app.case_type != CASE_BOTH_TERMINALS and err.reason == "noMatchingKB":
            plan = route_traditional(app, snapshot)
            return _with_fallback_flag(plan)
        raise


def _with_fallback_flag(plan: RoutePlan) -> RoutePlan:
    return replace(plan, fallback=True)


def occupied_bandwidth(plan: RoutePlan) -> float:
    """Sum of per-link occupied rate: rate x (raw links + ratio x compressed)."""
    n_comp = sum(1 for l in plan.stage_labels if l == "compressed")
    n_raw = len(plan.stage_labels) - n_comp
    if plan.method == TRADITIONAL:
        return plan.rate_mbps * len(plan.stage_labels)
    return plan.rate_mbps * (n_raw + plan.ratio * n_comp)


def end_to_end_delay(plan: RoutePlan, profile: CompressionProfile) -> float:
    """Propagation delays plus satellite-side compute latencies.

    Terminal-side transitions (case 1 endpoints, the case-2 sender, the
    case-3 receiver) contribute nothing.
    """
    total = 0.0
    for d in plan.per_link_delay:
        total += d
    if plan.method == GSC and not plan.fallback:
        if plan.case_type in (CASE_RECEIVER_DECODES, CASE_SATELLITES_ONLY):
            total += profile.encode_latency(plan.kb)
        if plan.case_type in (CASE_SENDER_ENCODES, CASE_SATELLITES_ONLY):
            total += profile.decode_latency(plan.kb)
    return total


def admit(plan: RoutePlan, snapshot: SnapshotGraph) -> bool:
    """Subtract the plan's per-link rates from residual capacity.

    All-or-nothing: when any link lacks residual the snapshot is left
    unchanged and False is returned.
    """
    resolved = []
    for (a, b), rate in zip(plan.links, plan.per_link_rate):
        link = snapshot.link_between(a, b)
        if link is None or link.residual_mbps + RESIDUAL_EPS < rate:
            return False
        resolved.append((link, rate))
    for link, rate in resolved:
        link.residual_mbps = max(0.0, link.residual_mbps - rate)
    return True


@dataclass
class RouteTimeline:
    """Per-window plans for one application; None marks an unroutable window."""

    plans: list[RoutePlan | None] = field(default_factory=list)
    switch_count: int = 0


def replan_routes(
    app: Application,
    windows,
    snapshots: list[SnapshotGraph],
    profile: CompressionProfile,
) -> RouteTimeline:
    """Route independently per window and count path changes.

    A switch is a pair of consecutive routed windows whose node sequences
    differ; unroutable windows are recorded as gaps and do not count.
    """
    plans: list[RoutePlan | None] = []
    for snapshot in snapshots:
        try:
            plans.append(route(app, snapshot, profile))
        except UnroutableError:
            plans.append(None)
    switches = 0
    for prev, cur in zip(plans, plans[1:]):
        if prev is not None and cur is not None and prev.nodes != cur.nodes:
            switches += 1
    return RouteTimeline(plans=plans, switch_count=switches)
