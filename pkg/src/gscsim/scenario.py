"""Case-study workload generation, experiment execution and metrics.

One experiment builds a constellation and its contact plan, discretizes
the horizon into windows, places AI capabilities, then routes every
application twice per window: once under the capability-aware scheme and
once under the raw-rate traditional baseline, each with its own
sequential admission state.  Metrics aggregate per (application type,
method) over admitted (application, window) pairs.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .geometry import (
    ConstellationSpec,
    ContactPlan,
    GroundSite,
    VisibilityRules,
    assign_ai_capabilities,
    build_nodes,
    compute_contacts,
)
from .knowledge import KnowledgeBaseCatalog, NodeSpec
from .routing import (
    GSC,
    TRADITIONAL,
    Application,
    CompressionProfile,
    RoutePlan,
    UnroutableError,
    admit,
    route_traditional,
    route_with_fallback,
)
from .seeding import substream
from .temporal import (
    DiscretizationConfig,
    TimeWindow,
    build_snapshot,
    merge_windows,
    sort_timestamps,
)

METHODS = (TRADITIONAL, GSC)
CASES = (1, 2, 3, 4)
METRICS_HEADER = "case_type,method,mean_occupied_mbps,mean_delay_ms,routed,blocked"


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    constellation: ConstellationSpec = field(
        default_factory=lambda: ConstellationSpec(25, 20)
    )
    visibility: VisibilityRules = field(default_factory=VisibilityRules)
    sites: tuple[GroundSite, ...] = ()
    horizon: tuple[float, float] = (0.0, 4500.0)
    sampling_step_s: float = 10.0
    min_window_s: float = 60.0
    window_count: int = 60
    kb_catalog: KnowledgeBaseCatalog = field(default_factory=KnowledgeBaseCatalog)
    ratio_choices: tuple[float, ...] = (0.125, 0.25, 0.5)
    encode_latency_ms: tuple[float, ...] = ()
    decode_latency_ms: tuple[float, ...] = ()
    app_count: int = 200
    rate_range_mbps: tuple[float, float] = (5.0, 100.0)
    case_probabilities: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    ai_compute_capacity: int = 2

    def __post_init__(self):
        if abs(sum(self.case_probabilities) - 1.0) > 1e-9:
            raise ValueError("case probabilities must sum to 1")
        if any(not 0.0 < r <= 1.0 for r in self.ratio_choices):
            raise ValueError("ratio choices must lie in (0, 1]")
        if self.app_count < 0 or self.window_count <= 0:
            raise ValueError("app count must be >= 0 and window count positive")
        lo, hi = self.rate_range_mbps
        if lo <= 0 or hi < lo:
            raise ValueError("rate range must be positive and ordered")

    def compression_profile(self) -> CompressionProfile:
        rng = substream(self.seed, "profile")
        ratios = tuple(rng.choice(self.ratio_choices) for _ in self.kb_catalog.ids())
        return CompressionProfile(ratios, self.encode_latency_ms, self.decode_latency_ms)


@dataclass
class NetworkSetup:
    plan: ContactPlan
    nodes: list[NodeSpec]
    windows: list[TimeWindow]
    apps: list[Application]
    profile: CompressionProfile
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class MethodStats:
    occupied_sum: float = 0.0
    delay_sum: float = 0.0
    routed: int = 0
    blocked: int = 0

    @property
    def mean_occupied_mbps(self) -> float:
        return self.occupied_sum / self.routed if self.routed else 0.0

    @property
    def mean_delay_ms(self) -> float:
        return self.delay_sum / self.routed if self.routed else 0.0


@dataclass
class MetricsReport:
    rows: dict[tuple[int, str], MethodStats]
    overall_reduction: float
    fallback_count: int = 0
    diagnostics: tuple[str, ...] = ()

    def overall_mean_occupied(self, method: str) -> float:
        occupied = sum(self.rows[(c, method)].occupied_sum for c in CASES)
        routed = sum(self.rows[(c, method)].routed for c in CASES)
        return occupied / routed if routed else 0.0


def generate_workload(cfg: ExperimentConfig) -> list[Application]:
    """Applications with random endpoints, rates, cases, KBs and ratios.

    Deterministic under the ``workload`` sub-stream of the run seed.
    """
    if len(cfg.sites) < 2:
        raise ValueError("workload generation needs at least two ground sites")
    rng = substream(cfg.seed, "workload")
    site_ids = [s.node_id for s in cfg.sites]
    cumulative = []
    acc = 0.0
    for p in cfg.case_probabilities:
        acc += p
        cumulative.append(acc)
    apps = []
    for i in range(cfg.app_count):
        src, dst = rng.sample(site_ids, 2)
        roll = rng.random()
        case = next(idx + 1 for idx, c in enumerate(cumulative) if roll <= c)
        kb = rng.randrange(cfg.kb_catalog.size)
        rate = rng.uniform(*cfg.rate_range_mbps)
        ratio = rng.choice(cfg.ratio_choices)
        apps.append(Application(i, case, src, dst, rate, kb, ratio))
    return apps


def build_network(cfg: ExperimentConfig) -> NetworkSetup:
    """Contact plan, capability-assigned nodes, windows and workload."""
    diagnostics: list[str] = []
    plan = compute_contacts(
        cfg.constellation,
        list(cfg.sites),
        cfg.horizon,
        cfg.sampling_step_s,
        cfg.visibility,
        seed=cfg.seed,
    )
    nodes = build_nodes(cfg.constellation, list(cfg.sites), cfg.kb_catalog)
    nodes = assign_ai_capabilities(
        nodes,
        cfg.kb_catalog,
        cfg.constellation.ai_fraction,
        seed=cfg.seed,
        compute_capacity=cfg.ai_compute_capacity,
    )
    boundaries = sort_timestamps(plan)
    windows = merge_windows(boundaries, DiscretizationConfig(cfg.min_window_s))
    if len(windows) < cfg.window_count:
        diagnostics.append(
            f"horizon yields {len(windows)} windows; requested {cfg.window_count}"
        )
    windows = windows[: cfg.window_count]
    apps = generate_workload(cfg)
    return NetworkSetup(plan, nodes, windows, apps, cfg.compression_profile(), diagnostics)


def route_window(
    plan: ContactPlan,
    nodes: list[NodeSpec],
    window: TimeWindow,
    apps: list[Application],
    profile: CompressionProfile,
    collect_plans: bool = False,
):
    """Route and admit every application in one window, per method.

    Returns partial sums keyed by (case, method) plus the fallback count,
    and optionally the per-app plans for inspection.
    """
    base = build_snapshot(plan, window, nodes)
    snapshots = {TRADITIONAL: base.fresh_copy(), GSC: base.fresh_copy()}
    sums = {(c, m): MethodStats() for c in CASES for m in METHODS}
    fallbacks = 0
    plans: list[tuple[int, str, RoutePlan | None]] = []
    for app in sorted(apps, key=lambda a: a.id):
        for method in METHODS:
            snap = snapshots[method]
            try:
                if method == TRADITIONAL:
                    plan_ = route_traditional(app, snap)
                else:
                    plan_ = route_with_fallback(app, snap, profile)
            except UnroutableError:
                plan_ = None
            stats = sums[(app.case_type, method)]
            if plan_ is not None and admit(plan_, snap):
                stats.routed += 1
                stats.occupied_sum += plan_.occupied_bandwidth_mbps
                stats.delay_sum += plan_.end_to_end_delay_ms
                if plan_.fallback:
                    fallbacks += 1
            else:
                plan_ = None
                stats.blocked += 1
            if collect_plans:
                plans.append((app.id, method, plan_))
    return sums, fallbacks, plans


_WORKER: dict = {}


def _init_worker(plan, nodes, apps, profile):
    _WORKER.update(plan=plan, nodes=nodes, apps=apps, profile=profile)


def _window_task(window: TimeWindow):
    sums, fallbacks, _ = route_window(
        _WORKER["plan"], _WORKER["nodes"], window, _WORKER["apps"], _WORKER["profile"]
    )
    return sums, fallbacks


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> MetricsReport:
    """Full traditional-vs-GSC comparison over every window.

    Window-level results reduce in window order regardless of execution
    order, so serial and parallel runs produce identical reports.
    """
    setup = build_network(cfg)
    return run_windows(setup, threads=threads)


def run_windows(setup: NetworkSetup, threads: int = 1) -> MetricsReport:
    per_window = []
    if threads > 1 and len(setup.windows) > 1:
        with ProcessPoolExecutor(
            max_workers=threads,
            initializer=_init_worker,
            initargs=(setup.plan, setup.nodes, setup.apps, setup.profile),
        ) as pool:
            per_window = list(pool.map(_window_task, setup.windows))
    else:
        for window in setup.windows:
            sums, fallbacks, _ = route_window(
                setup.plan, setup.nodes, window, setup.apps, setup.profile
            )
            per_window.append((sums, fallbacks))

    rows = {(c, m): MethodStats() for c in CASES for m in METHODS}
    fallback_count = 0
    for sums, fallbacks in per_window:
        fallback_count += fallbacks
        for key, part in sums.items():
            rows[key].occupied_sum += part.occupied_sum
            rows[key].delay_sum += part.delay_sum
            rows[key].routed += part.routed
            rows[key].blocked += part.blocked

    diagnostics = list(setup.diagnostics)
    total_routed = sum(rows[(c, GSC)].routed for c in CASES)
    if total_routed == 0:
        diagnostics.append("no application was routable in any window")

    trad_mean = _overall_mean(rows, TRADITIONAL)
    gsc_mean = _overall_mean(rows, GSC)
    reduction = 1.0 - gsc_mean / trad_mean if trad_mean > 0 else 0.0
    return MetricsReport(
        rows=rows,
        overall_reduction=reduction,
        fallback_count=fallback_count,
        diagnostics=tuple(diagnostics),
    )


def _overall_mean(rows, method: str) -> float:
    occupied = sum(rows[(c, method)].occupied_sum for c in CASES)
    routed = sum(rows[(c, method)].routed for c in CASES)
    return occupied / routed if routed else 0.0


@dataclass(frozen=True)
class MethodComparison:
    reductions: dict[int, float]
    t1_reduction_is_max: bool
    t4_reduction_is_min: bool


def compare_methods(report: MetricsReport) -> MethodComparison:
    """Per-type bandwidth reduction ratios and the ordering flags.

    The flags are strict: equal reductions across all types leave both
    flags false.
    """
    reductions: dict[int, float] = {}
    for case in CASES:
        for method in METHODS:
            if (case, method) not in report.rows:
                raise ValueError(f"report is missing (case {case}, {method})")
        trad = report.rows[(case, TRADITIONAL)].mean_occupied_mbps
        gsc = report.rows[(case, GSC)].mean_occupied_mbps
        reductions[case] = 1.0 - gsc / trad if trad > 0 else 0.0
    t1_max = all(reductions[1] > reductions[c] for c in (2, 3, 4))
    t4_min = all(reductions[4] < reductions[c] for c in (1, 2, 3))
    return MethodComparison(reductions, t1_max, t4_min)


def render_metrics_csv(report: MetricsReport) -> str:
    """Fixed schema: one row per (case, method), traditional before gsc."""
    lines = [METRICS_HEADER]
    for case in CASES:
        for method in METHODS:
            stats = report.rows[(case, method)]
            lines.append(
                f"{case},{method},{stats.mean_occupied_mbps:.6f},"
                f"{stats.mean_delay_ms:.6f},{stats.routed},{stats.blocked}"
            )
    return "\n".join(lines) + "\n"


def write_metrics_csv(report: MetricsReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_metrics_csv(report))


def read_metrics_csv(path) -> MetricsReport:
    rows: dict[tuple[int, str], MethodStats] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != METRICS_HEADER:
            raise ValueError(f"unexpected metrics header: {header}")
        for lineno, line in enumerate(fh, 2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 columns")
            case, method = int(parts[0]), parts[1]
            routed, blocked = int(parts[4]), int(parts[5])
            stats = MethodStats(
                occupied_sum=float(parts[2]) * routed,
                delay_sum=float(parts[3]) * routed,
                routed=routed,
                blocked=blocked,
            )
            rows[(case, method)] = stats
    missing = [
        (c, m) for c in CASES for m in METHODS if (c, m) not in rows
    ]
    if missing:
        raise ValueError(f"metrics file is missing rows: {missing}")
    trad = _overall_mean(rows, TRADITIONAL)
    gsc = _overall_mean(rows, GSC)
    reduction = 1.0 - gsc / trad if trad > 0 else 0.0
    return MetricsReport(rows=rows, overall_reduction=reduction)


def render_summary(report: MetricsReport) -> str:
    comparison = compare_methods(report)
    lines = [
        f"overall_reduction = {report.overall_reduction:.6f}",
        f"mean_occupied_traditional_mbps = {report.overall_mean_occupied(TRADITIONAL):.6f}",
        f"mean_occupied_gsc_mbps = {report.overall_mean_occupied(GSC):.6f}",
        f"fallback_count = {report.fallback_count}",
    ]
    for case in CASES:
        lines.append(f"reduction_type_{case} = {comparison.reductions[case]:.6f}")
    lines.append(f"t1_reduction_is_max = {str(comparison.t1_reduction_is_max).lower()}")
    lines.append(f"t4_reduction_is_min = {str(comparison.t4_reduction_is_min).lower()}")
    for i, diag in enumerate(report.diagnostics):
        lines.append(f"diagnostic_{i} = {diag}")
    return "\n".join(lines) + "\n"


def write_summary(report: MetricsReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_summary(report))
