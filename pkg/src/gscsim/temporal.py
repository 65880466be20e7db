"""Time discretization and per-window snapshot graphs.

The horizon is cut at every contact boundary, then adjacent slots are
merged left-to-right until each window reaches the minimum service
duration; a trailing remainder merges backward into the last emitted
window.  Within one window the topology is static, so each window gets a
snapshot graph holding exactly the contacts that cover the whole window.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .geometry import Contact, ContactPlan
from .knowledge import TERMINAL, NodeSpec


@dataclass(frozen=True)
class DiscretizationConfig:
    """``min_window_s`` is the minimum service duration threshold."""

    min_window_s: float = 60.0

    def __post_init__(self):
        if self.min_window_s < 0:
            raise ValueError("minimum window length must be >= 0")


@dataclass(frozen=True)
class TimeWindow:
    index: int
    start: float
    end: float

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass
class SnapshotLink:
    """One usable link during a window; residual tracks admitted demand."""

    node_a: str
    node_b: str
    rate_mbps: float
    residual_mbps: float
    delay_ms: float
    kind: str

    def pair(self) -> tuple[str, str]:
        return (self.node_a, self.node_b)


@dataclass
class SnapshotGraph:
    window: TimeWindow
    nodes: dict[str, NodeSpec]
    links: list[SnapshotLink]
    _adjacency: dict | None = field(default=None, repr=False, compare=False)

    def adjacency(self) -> dict[str, list[tuple[str, int]]]:
        """Neighbor lists as (neighbor id, link index), sorted for determinism."""
        if self._adjacency is None:
            adj: dict[str, list[tuple[str, int]]] = {nid: [] for nid in self.nodes}
            for idx, link in enumerate(self.links):
                adj.setdefault(link.node_a, []).append((link.node_b, idx))
                adj.setdefault(link.node_b, []).append((link.node_a, idx))
            for nid in adj:
                adj[nid].sort()
            self._adjacency = adj
        return self._adjacency

    def link_between(self, a: str, b: str) -> SnapshotLink | None:
        for nbr, idx in self.adjacency().get(a, ()):
            if nbr == b:
                return self.links[idx]
        return None

    def invalidate_adjacency(self) -> None:
        self._adjacency = None

    def with_nodes(self, nodes: dict[str, NodeSpec]) -> "SnapshotGraph":
        links = [replace(l) for l in self.links]
        return SnapshotGraph(self.window, dict(nodes), links)

    def fresh_copy(self) -> "SnapshotGraph":
        """Same topology with residuals reset to full capacity."""
        links = [
            SnapshotLink(l.node_a, l.node_b, l.rate_mbps, l.rate_mbps, l.delay_ms, l.kind)
            for l in self.links
        ]
        return SnapshotGraph(self.window, dict(self.nodes), links)


def sort_timestamps(plan: ContactPlan) -> list[float]:
    """Strictly increasing contact boundaries, horizon endpoints included."""
    stamps = {plan.horizon_start, plan.horizon_end}
    for c in plan.contacts:
        stamps.add(c.start)
        stamps.add(c.end)
    return sorted(stamps)


def merge_windows(boundaries: list[float], cfg: DiscretizationConfig) -> list[TimeWindow]:
    """Merge boundary-delimited slots into windows of at least the threshold.

    Left-to-right accumulation: the current window grows across successive
    boundaries until it reaches ``min_window_s``, then is emitted.  A
    trailing remainder shorter than the threshold merges backward into the
    previously emitted window.  With nothing emitted at all (horizon shorter
    than the threshold) the whole horizon becomes one window.
    """
    if any(b >= c for b, c in zip(boundaries, boundaries[1:])):
        raise ValueError("boundaries must be strictly increasing")
    if len(boundaries) < 2:
        return []
    emitted: list[tuple[float, float]] = []
    start = boundaries[0]
    for b in boundaries[1:]:
        if b - start >= cfg.min_window_s:
            emitted.append((start, b))
            start = b
    if start < boundaries[-1]:
        if emitted:
            last_start, _ = emitted[-1]
            emitted[-1] = (last_start, boundaries[-1])
        else:
            emitted.append((boundaries[0], boundaries[-1]))
    return [TimeWindow(i, s, e) for i, (s, e) in enumerate(emitted)]


def build_snapshot(
    plan: ContactPlan, window: TimeWindow, nodes: list[NodeSpec]
) -> SnapshotGraph:
    """Snapshot for one window: contacts that cover the entire window.

    Nodes are the link endpoints plus every terminal (terminals stay
    addressable even when they have no coverage during the window).
    """
    by_id = {n.id: n for n in nodes}
    links = []
    present: set[str] = set()
    for c in plan.contacts:
        if c.start <= window.start and c.end >= window.end:
            links.append(
                SnapshotLink(c.node_a, c.node_b, c.rate_mbps, c.rate_mbps, c.delay_ms, c.kind)
            )
            present.add(c.node_a)
            present.add(c.node_b)
    for n in nodes:
        if n.kind == TERMINAL:
            present.add(n.id)
    missing = present - set(by_id)
    if missing:
        raise ValueError(f"contacts reference unknown nodes: {sorted(missing)}")
    snapshot_nodes = {nid: by_id[nid] for nid in sorted(present)}
    return SnapshotGraph(window, snapshot_nodes, links)


def stable_interval(plan: ContactPlan, path: list[str]) -> tuple[float, float] | None:
    """Earliest interval during which every link along ``path`` is available.

    Availability per hop is the union of that pair's contact intervals; the
    result is the earliest non-empty interval of the intersection across
    hops, or None when the hops never align.
    """
    if len(path) < 2:
        raise ValueError("path needs at least two nodes")
    by_pair: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for c in plan.contacts:
        key = (min(c.node_a, c.node_b), max(c.node_a, c.node_b))
        by_pair.setdefault(key, []).append((c.start, c.end))

    current: list[tuple[float, float]] | None = None
    for a, b in zip(path, path[1:]):
        key = (min(a, b), max(a, b))
        if key not in by_pair:
            raise ValueError(f"no contact between {a} and {b}")
        intervals = sorted(by_pair[key])
        current = intervals if current is None else _intersect(current, intervals)
        if not current:
            return None
    assert current
    return current[0]


def _intersect(
    xs: list[tuple[float, float]], ys: list[tuple[float, float]]
) -> list[tuple[float, float]]:
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if lo < hi:
            out.append((lo, hi))
        if xs[i][1] <= ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def render_windows(windows: list[TimeWindow]) -> str:
    return "".join(f"window {w.index} {w.start!r} {w.end!r}\n" for w in windows)


def write_windows(windows: list[TimeWindow], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_windows(windows))


def read_windows(path) -> list[TimeWindow]:
    windows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] != "window" or len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: unrecognized window line")
            windows.append(TimeWindow(int(parts[1]), float(parts[2]), float(parts[3])))
    return windows


def dump_snapshot(snapshot: SnapshotGraph) -> str:
    """Structured text dump: window header, node records, link records."""
    w = snapshot.window
    lines = [f"snapshot {w.index} {w.start!r} {w.end!r}"]
    for nid in sorted(snapshot.nodes):
        n = snapshot.nodes[nid]
        enc = ",".join(str(v) for v in n.encoder_caps)
        dec = ",".join(str(v) for v in n.decoder_caps)
        lines.append(f"node {n.id} {n.kind} {n.compute_capacity} {enc or '-'} {dec or '-'}")
    for l in snapshot.links:
        lines.append(
            f"link {l.node_a} {l.node_b} {l.rate_mbps!r} {l.residual_mbps!r} "
            f"{l.delay_ms!r} {l.kind}"
        )
    return "\n".join(lines) + "\n"


def parse_node_line(parts: list[str]) -> NodeSpec:
    enc = tuple(int(v) for v in parts[4].split(",")) if parts[4] != "-" else ()
    dec = tuple(int(v) for v in parts[5].split(",")) if parts[5] != "-" else ()
    return NodeSpec(parts[1], parts[2], enc, dec, int(parts[3]))


def load_snapshot(text: str) -> SnapshotGraph:
    window = TimeWindow(0, 0.0, 0.0)
    nodes: dict[str, NodeSpec] = {}
    links: list[SnapshotLink] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "snapshot" and len(parts) == 4:
            window = TimeWindow(int(parts[1]), float(parts[2]), float(parts[3]))
        elif parts[0] == "node" and len(parts) == 6:
            spec = parse_node_line(parts)
            nodes[spec.id] = spec
        elif parts[0] == "link" and len(parts) == 7:
            links.append(
                SnapshotLink(
                    parts[1], parts[2], float(parts[3]), float(parts[4]),
                    float(parts[5]), parts[6],
                )
            )
        else:
            raise ValueError(f"snapshot line {lineno}: unrecognized record")
    return SnapshotGraph(window, nodes, links)


def read_nodes(path) -> list[NodeSpec]:
    """Node records only (same field layout as snapshot node lines)."""
    nodes = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] != "node" or len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: unrecognized node line")
            nodes.append(parse_node_line(parts))
    return nodes
