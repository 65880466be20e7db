"""Declarative run configuration: one JSON document drives a whole run.

Unknown keys are rejected everywhere so that typos fail loudly instead of
silently falling back to defaults.  A configuration either synthesizes a
constellation (``constellation`` + ``sites``) or loads an explicit network
fixture (``network`` with contact plan and node files).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import (
    ConfigurationError,
    ConstellationSpec,
    ContactPlan,
    VisibilityRules,
    read_contact_plan,
)
from .knowledge import KnowledgeBaseCatalog, NodeSpec
from .routing import Application
from .scenario import ExperimentConfig
from .sites import resolve_sites
from .temporal import read_nodes


@dataclass
class NetworkFixture:
    contact_plan: ContactPlan
    nodes: list[NodeSpec]


@dataclass
class OutputNames:
    contact_plan: str = "contacts.txt"
    windows: str = "windows.txt"
    metrics_csv: str = "metrics.csv"
    summary: str = "summary.txt"
    snapshots: str | None = None
    deployment_plan: str = "deployment.txt"


@dataclass
class RunConfig:
    experiment: ExperimentConfig
    outputs: OutputNames
    fixture: NetworkFixture | None = None
    deployment: dict = field(default_factory=dict)
    explicit_apps: tuple[Application, ...] = ()


def _require_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigurationError(f"{where}: unknown keys {sorted(unknown)}")


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text("utf-8"))
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}")
    except json.JSONDecodeError as err:
        raise ConfigurationError(f"{path}: invalid JSON ({err})")
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: top level must be an object")

    _require_keys(
        raw,
        {
            "seed", "constellation", "visibility", "sites", "network",
            "discretization", "kbCatalog", "compressionProfile", "workload",
            "deployment", "output",
        },
        str(path),
    )

    seed = int(raw.get("seed", 0))

    con = raw.get("constellation", {})
    _require_keys(
        con,
        {"planes", "satsPerPlane", "altitudeKm", "inclinationDeg",
         "phasingOffset", "aiFraction", "aiComputeCapacity"},
        "constellation",
    )
    constellation = ConstellationSpec(
        plane_count=int(con.get("planes", 25)),
        sats_per_plane=int(con.get("satsPerPlane", 20)),
        altitude_km=float(con.get("altitudeKm", 550.0)),
        inclination_deg=float(con.get("inclinationDeg", 53.0)),
        phasing_offset=int(con.get("phasingOffset", 1)),
        ai_fraction=float(con.get("aiFraction", 0.2)),
    )
    ai_compute_capacity = int(con.get("aiComputeCapacity", 0)) or None

    vis = raw.get("visibility", {})
    _require_keys(
        vis,
        {"elevationMaskDeg", "rateRangeMbps", "delayRangeMs", "samplingStepS"},
        "visibility",
    )
    visibility = VisibilityRules(
        elevation_mask_deg=float(vis.get("elevationMaskDeg", 25.0)),
        rate_range_mbps=tuple(vis.get("rateRangeMbps", (300.0, 350.0))),
        delay_range_ms=tuple(vis.get("delayRangeMs", (5.0, 15.0))),
    )
    sampling_step = float(vis.get("samplingStepS", 10.0))

    disc = raw.get("discretization", {})
    _require_keys(
        disc, {"lambdaS", "horizonStartS", "horizonEndS", "windowCount"}, "discretization"
    )
    min_window = float(disc.get("lambdaS", 60.0))
    horizon = (float(disc.get("horizonStartS", 0.0)), float(disc.get("horizonEndS", 4500.0)))
    window_count = int(disc.get("windowCount", 60))

    kb = raw.get("kbCatalog", {})
    _require_keys(kb, {"labels"}, "kbCatalog")
    catalog = KnowledgeBaseCatalog(tuple(kb.get("labels", ("kb0", "kb1", "kb2"))))

    comp = raw.get("compressionProfile", {})
    _require_keys(comp, {"encodeLatencyMs", "decodeLatencyMs"}, "compressionProfile")
    encode_latency = tuple(float(v) for v in comp.get("encodeLatencyMs", ()))
    decode_latency = tuple(float(v) for v in comp.get("decodeLatencyMs", ()))

    work = raw.get("workload", {})
    _require_keys(
        work,
        {"appCount", "rateRangeMbps", "caseProbabilities", "ratioChoices", "applications"},
        "workload",
    )
    app_count = int(work.get("appCount", 200))
    rate_range = tuple(float(v) for v in work.get("rateRangeMbps", (5.0, 100.0)))
    case_probs = tuple(float(v) for v in work.get("caseProbabilities", (0.25, 0.25, 0.25, 0.25)))
    ratio_choices = tuple(float(v) for v in work.get("ratioChoices", (0.125, 0.25, 0.5)))
    explicit_apps = []
    for entry in work.get("applications", ()):
        _require_keys(
            entry, {"id", "case", "src", "dst", "rate", "kb", "ratio"}, "workload.applications"
        )
        explicit_apps.append(
            Application(
                id=int(entry.get("id", len(explicit_apps))),
                case_type=int(entry["case"]),
                src=entry["src"],
                dst=entry["dst"],
                rate_mbps=float(entry.get("rate", 20.0)),
                kb=int(entry.get("kb", 0)),
                ratio=float(entry["ratio"]) if "ratio" in entry else None,
            )
        )

    fixture = None
    sites = ()
    if "network" in raw:
        net = raw["network"]
        _require_keys(net, {"contactPlanFile", "nodesFile"}, "network")
        plan_path = (path.parent / net["contactPlanFile"]).resolve()
        nodes_path = (path.parent / net["nodesFile"]).resolve()
        for p in (plan_path, nodes_path):
            if not p.exists():
                raise ConfigurationError(f"network file not found: {p}")
        fixture = NetworkFixture(read_contact_plan(plan_path), read_nodes(nodes_path))
    else:
        try:
            sites = tuple(resolve_sites(raw.get("sites", [])))
        except KeyError as err:
            raise ConfigurationError(str(err))

    dep = raw.get("deployment", {})
    _require_keys(
        dep, {"solver", "delayBoundMs", "penaltyHops", "weights", "candidates"}, "deployment"
    )

    out = raw.get("output", {})
    _require_keys(
        out,
        {"contactPlan", "windows", "metricsCsv", "summary", "snapshots", "deploymentPlan"},
        "output",
    )
    outputs = OutputNames(
        contact_plan=out.get("contactPlan", "contacts.txt"),
        windows=out.get("windows", "windows.txt"),
        metrics_csv=out.get("metricsCsv", "metrics.csv"),
        summary=out.get("summary", "summary.txt"),
        snapshots=out.get("snapshots"),
        deployment_plan=out.get("deploymentPlan", "deployment.txt"),
    )

    experiment = ExperimentConfig(
        seed=seed,
        constellation=constellation,
        visibility=visibility,
        sites=sites,
        horizon=horizon,
        sampling_step_s=sampling_step,
        min_window_s=min_window,
        window_count=window_count,
        kb_catalog=catalog,
        ratio_choices=ratio_choices,
        encode_latency_ms=encode_latency,
        decode_latency_ms=decode_latency,
        app_count=app_count,
        rate_range_mbps=rate_range,
        case_probabilities=case_probs,
        ai_compute_capacity=ai_compute_capacity if ai_compute_capacity else 2 * catalog.size,
    )
    return RunConfig(
        experiment=experiment,
        outputs=outputs,
        fixture=fixture,
        deployment=dep,
        explicit_apps=tuple(explicit_apps),
    )
