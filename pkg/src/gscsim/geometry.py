"""Constellation synthesis, orbit propagation and contact plan derivation.

Satellites fly circular Walker-style orbits around a spherical Earth.
Inter-satellite links follow the +Grid pattern (two intra-plane and two
inter-plane neighbors); ground links exist while a satellite stays above a
site's elevation mask.  Per-contact rates and delays are sampled once per
contact from configured ranges under a named sub-stream of the run seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .knowledge import AI_SAT, COMM_SAT, TERMINAL, KnowledgeBaseCatalog, NodeSpec, zero_caps
from .seeding import substream

EARTH_RADIUS_KM = 6371.0
EARTH_MU_KM3_S2 = 398600.4418
EARTH_ROTATION_RAD_S = 7.2921159e-5

ISL = "ISL"
SGL = "SGL"
LINK_KINDS = (ISL, SGL)


@dataclass(frozen=True)
class ConstellationSpec:
    """Walker shell: ``plane_count`` planes of ``sats_per_plane`` satellites."""

    plane_count: int
    sats_per_plane: int
    altitude_km: float = 550.0
    inclination_deg: float = 53.0
    phasing_offset: int = 1
    ai_fraction: float = 0.2

    def __post_init__(self):
        if self.plane_count <= 0 or self.sats_per_plane <= 0:
            raise ConfigurationError("plane count and satellites per plane must be positive")
        if self.altitude_km <= 0:
            raise ConfigurationError("altitude must be positive")
        if not 0.0 <= self.ai_fraction <= 1.0:
            raise ConfigurationError("ai_fraction must lie in [0, 1]")

    @property
    def satellite_count(self) -> int:
        return self.plane_count * self.sats_per_plane

    @property
    def orbit_radius_km(self) -> float:
        return EARTH_RADIUS_KM + self.altitude_km

    @property
    def orbital_period_s(self) -> float:
        return 2.0 * math.pi * math.sqrt(self.orbit_radius_km**3 / EARTH_MU_KM3_S2)

    def satellite_id(self, plane: int, slot: int) -> str:
        return f"SAT-{plane:03d}-{slot:03d}"

    def satellite_ids(self) -> list[str]:
        return [
            self.satellite_id(p, s)
            for p in range(self.plane_count)
            for s in range(self.sats_per_plane)
        ]


@dataclass(frozen=True)
class GroundSite:
    name: str
    latitude_deg: float
    longitude_deg: float

    def __post_init__(self):
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise ConfigurationError(f"site {self.name}: latitude out of range")
        if not -180.0 <= self.longitude_deg <= 180.0:
            raise ConfigurationError(f"site {self.name}: longitude out of range")

    @property
    def node_id(self) -> str:
        cleaned = "".join(c for c in self.name.upper() if c.isalnum())
        return f"GS-{cleaned}"


@dataclass(frozen=True)
class VisibilityRules:
    """Link construction knobs: elevation mask plus rate/delay sampling ranges."""

    elevation_mask_deg: float = 25.0
    rate_range_mbps: tuple[float, float] = (300.0, 350.0)
    delay_range_ms: tuple[float, float] = (5.0, 15.0)

    def __post_init__(self):
        if not 0.0 <= self.elevation_mask_deg < 90.0:
            raise ConfigurationError("elevation mask must lie in [0, 90)")
        lo, hi = self.rate_range_mbps
        if lo <= 0 or hi < lo:
            raise ConfigurationError("rate range must be positive and ordered")
        lo, hi = self.delay_range_ms
        if lo < 0 or hi < lo:
            raise ConfigurationError("delay range must be non-negative and ordered")


@dataclass(frozen=True)
class Contact:
    """One timed communication opportunity between two nodes."""

    node_a: str
    node_b: str
    start: float
    end: float
    rate_mbps: float
    delay_ms: float
    kind: str

    def __post_init__(self):
        if self.node_a == self.node_b:
            raise ValueError("contact endpoints must differ")
        if not self.start < self.end:
            raise ValueError(f"contact {self.node_a}-{self.node_b}: start must precede end")
        if self.rate_mbps <= 0:
            raise ValueError("contact rate must be positive")
        if self.delay_ms < 0:
            raise ValueError("contact delay must be non-negative")
        if self.kind not in LINK_KINDS:
            raise ValueError(f"unknown link kind {self.kind!r}")

    def pair(self) -> tuple[str, str]:
        return (self.node_a, self.node_b)


@dataclass
class ContactPlan:
    contacts: list[Contact] = field(default_factory=list)
    horizon_start: float = 0.0
    horizon_end: float = 0.0

    def __post_init__(self):
        for c in self.contacts:
            if c.start < self.horizon_start - 1e-9 or c.end > self.horizon_end + 1e-9:
                raise ValueError(
                    f"contact {c.node_a}-{c.node_b} [{c.start},{c.end}] outside horizon"
                )

    def sort_canonical(self) -> None:
        self.contacts.sort(key=lambda c: (c.node_a, c.node_b, c.start))


class ConfigurationError(ValueError):
    """Invalid constellation / visibility / run configuration."""


def propagate_positions(spec: ConstellationSpec, t: float) -> np.ndarray:
    """Earth-centered inertial positions (km) of every satellite at time ``t``.

    Satellites are ordered plane-major: index = plane * sats_per_plane + slot.
    """
    return _positions_at(spec, np.asarray([t], dtype=float))[0]


def _positions_at(spec: ConstellationSpec, times: np.ndarray) -> np.ndarray:
    """Positions for many sample times at once; shape (T, N, 3)."""
    radius = spec.orbit_radius_km
    inc = math.radians(spec.inclination_deg)
    mean_motion = 2.0 * math.pi / spec.orbital_period_s
    planes = np.arange(spec.plane_count)
    slots = np.arange(spec.sats_per_plane)

    raan = 2.0 * math.pi * planes / spec.plane_count
    phase0 = (
        2.0 * math.pi * slots[None, :] / spec.sats_per_plane
        + 2.0 * math.pi * spec.phasing_offset * planes[:, None] / spec.satellite_count
    )  # (P, S)
    u = phase0[None, :, :] + mean_motion * times[:, None, None]  # (T, P, S)

    cos_u, sin_u = np.cos(u), np.sin(u)
    cos_raan = np.cos(raan)[None, :, None]
    sin_raan = np.sin(raan)[None, :, None]
    x = radius * (cos_raan * cos_u - sin_raan * sin_u * math.cos(inc))
    y = radius * (sin_raan * cos_u + cos_raan * sin_u * math.cos(inc))
    z = radius * sin_u * math.sin(inc)
    out = np.stack([x, y, z], axis=-1)  # (T, P, S, 3)
    return out.reshape(len(times), spec.satellite_count, 3)


def site_positions_eci(sites: list[GroundSite], times: np.ndarray) -> np.ndarray:
    """Site positions rotated into the inertial frame; shape (T, M, 3)."""
    lat = np.radians([s.latitude_deg for s in sites])
    lon0 = np.radians([s.longitude_deg for s in sites])
    lon = lon0[None, :] + EARTH_ROTATION_RAD_S * times[:, None]
    cos_lat = np.cos(lat)[None, :]
    x = EARTH_RADIUS_KM * cos_lat * np.cos(lon)
    y = EARTH_RADIUS_KM * cos_lat * np.sin(lon)
    z = np.broadcast_to(EARTH_RADIUS_KM * np.sin(lat), lon.shape)
    return np.stack([x, y, z], axis=-1)


def elevation_deg(sat_pos: np.ndarray, site_pos: np.ndarray) -> np.ndarray:
    """Elevation of satellites above local horizon at each site (degrees).

    ``sat_pos``: (..., 3); ``site_pos``: (..., 3), broadcastable.
    """
    up = site_pos / EARTH_RADIUS_KM
    rel = sat_pos - site_pos
    dist = np.linalg.norm(rel, axis=-1)
    sin_elev = np.sum(rel * up, axis=-1) / np.maximum(dist, 1e-12)
    return np.degrees(np.arcsin(np.clip(sin_elev, -1.0, 1.0)))


def grid_isl_pairs(spec: ConstellationSpec) -> list[tuple[str, str]]:
    """+Grid neighbor pairs: ring within each plane, ring across planes."""
    pairs: set[tuple[str, str]] = set()
    for p in range(spec.plane_count):
        for s in range(spec.sats_per_plane):
            me = spec.satellite_id(p, s)
            if spec.sats_per_plane > 1:
                nxt = spec.satellite_id(p, (s + 1) % spec.sats_per_plane)
                if nxt != me:
                    pairs.add((min(me, nxt), max(me, nxt)))
            if spec.plane_count > 1:
                side = spec.satellite_id((p + 1) % spec.plane_count, s)
                if side != me:
                    pairs.add((min(me, side), max(me, side)))
    return sorted(pairs)


def compute_contacts(
    spec: ConstellationSpec,
    sites: list[GroundSite],
    horizon: tuple[float, float],
    sampling_step: float,
    rules: VisibilityRules,
    seed: int = 0,
) -> ContactPlan:
    """Derive the full contact plan (ISLs and SGLs) over the horizon.

    Ground visibility is evaluated at the center of each sampling slot, so a
    contact covers exactly the slots whose center elevation exceeds the mask
    and its boundaries are multiples of ``sampling_step``.  Rates and delays
    are drawn per contact from the configured ranges, in canonical contact
    order, from the ``contacts`` sub-stream of ``seed``.
    """
    if sampling_step <= 0:
        raise ConfigurationError("sampling step must be positive")
    start, end = horizon
    if end < start:
        raise ConfigurationError("horizon end precedes start")

    raw: list[tuple[str, str, float, float, str]] = []
    if end > start:
        for a, b in grid_isl_pairs(spec):
            raw.append((a, b, start, end, ISL))

        if sites:
            slot_starts = np.arange(start, end, sampling_step)
            slot_ends = np.minimum(slot_starts + sampling_step, end)
            centers = (slot_starts + slot_ends) / 2.0
            site_ids = [s.node_id for s in sites]
            sat_ids = spec.satellite_ids()
            # Chunk over time to bound the (T, N, M) broadcast.
            visible = np.zeros((len(centers), len(sat_ids), len(sites)), dtype=bool)
            chunk = max(1, int(2_000_000 / max(1, spec.satellite_count * len(sites))))
            for i in range(0, len(centers), chunk):
                ts = centers[i : i + chunk]
                sat_pos = _positions_at(spec, ts)  # (T, N, 3)
                site_pos = site_positions_eci(sites, ts)  # (T, M, 3)
                elev = elevation_deg(sat_pos[:, :, None, :], site_pos[:, None, :, :])
                visible[i : i + chunk] = elev > rules.elevation_mask_deg
            for n, sat in enumerate(sat_ids):
                for m, site in enumerate(site_ids):
                    a, b = min(sat, site), max(sat, site)
                    for lo, hi in _runs(visible[:, n, m]):
                        raw.append((a, b, float(slot_starts[lo]), float(slot_ends[hi]), SGL))

    raw.sort(key=lambda r: (r[0], r[1], r[2]))
    rng = substream(seed, "contacts")
    contacts = []
    for a, b, c_start, c_end, kind in raw:
        rate = rng.uniform(*rules.rate_range_mbps)
        delay = rng.uniform(*rules.delay_range_ms)
        contacts.append(Contact(a, b, c_start, c_end, rate, delay, kind))
    return ContactPlan(contacts, horizon_start=start, horizon_end=end)


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of True as inclusive (first, last) index pairs."""
    runs = []
    i = 0
    n = len(mask)
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs


def build_nodes(
    spec: ConstellationSpec, sites: list[GroundSite], catalog: KnowledgeBaseCatalog
) -> list[NodeSpec]:
    """All-relay satellites plus one terminal per ground site."""
    nodes = [
        NodeSpec(sat_id, COMM_SAT, zero_caps(catalog), zero_caps(catalog))
        for sat_id in spec.satellite_ids()
    ]
    for site in sites:
        nodes.append(NodeSpec(site.node_id, TERMINAL, zero_caps(catalog), zero_caps(catalog)))
    return nodes


def assign_ai_capabilities(
    nodes: list[NodeSpec],
    catalog: KnowledgeBaseCatalog,
    ai_fraction: float,
    seed: int = 0,
    compute_capacity: int | None = None,
) -> list[NodeSpec]:
    """Promote a deterministic random sample of satellites to AI satellites.

    Exactly round(ai_fraction * satellite_count) satellites are selected
    (round-half-up).  Each selected satellite hosts an encoder and a
    decoder for every catalog KB, so every AI satellite holds at least one
    model and can serve any application whose path reaches it.  Terminals
    and the remaining relays are untouched.
    """
    if not 0.0 <= ai_fraction <= 1.0:
        raise ConfigurationError("ai_fraction must lie in [0, 1]")
    sat_ids = sorted(n.id for n in nodes if n.kind in (COMM_SAT, AI_SAT))
    count = int(ai_fraction * len(sat_ids) + 0.5)
    rng = substream(seed, "capabilities")
    chosen = set(rng.sample(sat_ids, count)) if count else set()
    if compute_capacity is None:
        compute_capacity = 2 * catalog.size
    full = (1,) * catalog.size

    out = []
    for node in sorted(nodes, key=lambda n: n.id):
        if node.id in chosen:
            out.append(NodeSpec(node.id, AI_SAT, full, full, compute_capacity))
        elif node.kind == AI_SAT:
            out.append(
                NodeSpec(node.id, COMM_SAT, zero_caps(catalog), zero_caps(catalog), 0)
            )
        else:
            out.append(node)
    return out


def render_contact_plan(plan: ContactPlan) -> str:
    """Line format: ``contact nodeA nodeB start end rateMbps delayMs kind``."""
    lines = [f"horizon {plan.horizon_start!r} {plan.horizon_end!r}"]
    for c in plan.contacts:
        lines.append(
            f"contact {c.node_a} {c.node_b} {c.start!r} {c.end!r} "
            f"{c.rate_mbps!r} {c.delay_ms!r} {c.kind}"
        )
    return "\n".join(lines) + "\n"


def write_contact_plan(plan: ContactPlan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_contact_plan(plan))


def read_contact_plan(path) -> ContactPlan:
    horizon = (0.0, 0.0)
    contacts = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "horizon" and len(parts) == 3:
                horizon = (float(parts[1]), float(parts[2]))
            elif parts[0] == "contact" and len(parts) == 8:
                contacts.append(
                    Contact(
                        parts[1], parts[2], float(parts[3]), float(parts[4]),
                        float(parts[5]), float(parts[6]), parts[7],
                    )
                )
            else:
                raise ValueError(f"{path}:{lineno}: unrecognized contact plan line")
    return ContactPlan(contacts, horizon_start=horizon[0], horizon_end=horizon[1])
