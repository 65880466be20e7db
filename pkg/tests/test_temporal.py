import random

import pytest

from gscsim.geometry import Contact, ContactPlan
from gscsim.knowledge import NodeSpec
from gscsim.temporal import (
    DiscretizationConfig,
    SnapshotGraph,
    SnapshotLink,
    TimeWindow,
    build_snapshot,
    dump_snapshot,
    load_snapshot,
    merge_windows,
    read_windows,
    sort_timestamps,
    stable_interval,
    write_windows,
)

MIN = 60.0


def four_link_plan():
    # Published intervals (minutes): S-A [0,15], A-B [5,20], B-C [10,25], C-D [10,20].
    contacts = [
        Contact("S", "A", 0 * MIN, 15 * MIN, 100.0, 5.0, "ISL"),
        Contact("A", "B", 5 * MIN, 20 * MIN, 100.0, 5.0, "ISL"),
        Contact("B", "C", 10 * MIN, 25 * MIN, 100.0, 5.0, "ISL"),
        Contact("C", "D", 10 * MIN, 20 * MIN, 100.0, 5.0, "ISL"),
    ]
    return ContactPlan(contacts, 0.0, 25 * MIN)


def path_nodes():
    return [
        NodeSpec(i, "Terminal" if i in "SD" else "CommSat", (0,), (0,))
        for i in "SABCD"
    ]


def test_sort_timestamps_four_link_fixture():
    assert sort_timestamps(four_link_plan()) == [
        0.0, 5 * MIN, 10 * MIN, 15 * MIN, 20 * MIN, 25 * MIN
    ]


def test_sort_timestamps_single_contact():
    plan = ContactPlan([Contact("A", "B", 3.0, 7.0, 1.0, 0.0, "ISL")], 0.0, 10.0)
    assert sort_timestamps(plan) == [0.0, 3.0, 7.0, 10.0]


def test_sort_timestamps_deduplicates():
    plan = ContactPlan(
        [
            Contact("A", "B", 0.0, 5.0, 1.0, 0.0, "ISL"),
            Contact("B", "C", 5.0, 10.0, 1.0, 0.0, "ISL"),
        ],
        0.0,
        10.0,
    )
    stamps = sort_timestamps(plan)
    assert stamps == sorted(set(stamps)) == [0.0, 5.0, 10.0]


def test_sort_timestamps_empty_plan_returns_horizon():
    plan = ContactPlan([], 2.0, 9.0)
    assert sort_timestamps(plan) == [2.0, 9.0]


def test_merge_windows_no_threshold():
    boundaries = [0.0, 5 * MIN, 10 * MIN, 15 * MIN, 20 * MIN, 25 * MIN]
    windows = merge_windows(boundaries, DiscretizationConfig(0.0))
    assert [(w.start, w.end) for w in windows] == [
        (0.0, 5 * MIN), (5 * MIN, 10 * MIN), (10 * MIN, 15 * MIN),
        (15 * MIN, 20 * MIN), (20 * MIN, 25 * MIN),
    ]


def test_merge_windows_six_minute_threshold_merges_trailing_remainder():
    boundaries = [0.0, 5 * MIN, 10 * MIN, 15 * MIN, 20 * MIN, 25 * MIN]
    windows = merge_windows(boundaries, DiscretizationConfig(6 * MIN))
    assert [(w.start, w.end) for w in windows] == [(0.0, 10 * MIN), (10 * MIN, 25 * MIN)]


def test_merge_windows_single_long_interval():
    windows = merge_windows([0.0, 100.0], DiscretizationConfig(60.0))
    assert [(w.start, w.end) for w in windows] == [(0.0, 100.0)]


def test_merge_windows_threshold_beyond_horizon():
    windows = merge_windows([0.0, 10.0, 30.0], DiscretizationConfig(500.0))
    assert [(w.start, w.end) for w in windows] == [(0.0, 30.0)]


def test_merge_windows_rejects_unsorted_input():
    with pytest.raises(ValueError):
        merge_windows([0.0, 5.0, 5.0], DiscretizationConfig(1.0))


def random_plan(rng):
    n_contacts = rng.randint(1, 12)
    horizon_end = rng.uniform(50.0, 500.0)
    contacts = []
    for i in range(n_contacts):
        a, b = f"N{rng.randrange(6)}", f"N{rng.randrange(6, 12)}"
        start = rng.uniform(0.0, horizon_end - 1.0)
        end = rng.uniform(start + 0.5, horizon_end)
        contacts.append(Contact(a, b, start, end, 10.0, 1.0, "ISL"))
    return ContactPlan(contacts, 0.0, horizon_end)


def test_partition_property_randomized():
    rng = random.Random(1234)
    for _ in range(500):
        plan = random_plan(rng)
        lam = rng.uniform(0.0, plan.horizon_end * 1.2)
        boundaries = sort_timestamps(plan)
        windows = merge_windows(boundaries, DiscretizationConfig(lam))
        assert windows
        assert windows[0].start == plan.horizon_start
        assert windows[-1].end == plan.horizon_end
        for prev, cur in zip(windows, windows[1:]):
            assert prev.end == cur.start
        if plan.horizon_end - plan.horizon_start >= lam:
            assert all(w.length >= lam for w in windows)


def test_monotone_coarsening_in_threshold():
    rng = random.Random(99)
    for _ in range(200):
        plan = random_plan(rng)
        boundaries = sort_timestamps(plan)
        lam1 = rng.uniform(0.0, plan.horizon_end)
        lam2 = rng.uniform(lam1, plan.horizon_end * 1.5)
        n1 = len(merge_windows(boundaries, DiscretizationConfig(lam1)))
        n2 = len(merge_windows(boundaries, DiscretizationConfig(lam2)))
        assert n2 <= n1


def test_zero_threshold_equals_event_driven_snapshots():
    rng = random.Random(5)
    for _ in range(50):
        plan = random_plan(rng)
        boundaries = sort_timestamps(plan)
        windows = merge_windows(boundaries, DiscretizationConfig(0.0))
        assert len(windows) == len(boundaries) - 1
        assert [w.start for w in windows] == boundaries[:-1]


def test_build_snapshot_window_10_15():
    snap = build_snapshot(four_link_plan(), TimeWindow(0, 10 * MIN, 15 * MIN), path_nodes())
    assert sorted(l.pair() for l in snap.links) == [
        ("A", "B"), ("B", "C"), ("C", "D"), ("S", "A")
    ]
    assert all(l.residual_mbps == l.rate_mbps for l in snap.links)


def test_build_snapshot_window_0_5():
    snap = build_snapshot(four_link_plan(), TimeWindow(0, 0.0, 5 * MIN), path_nodes())
    assert sorted(l.pair() for l in snap.links) == [("S", "A")]


def test_build_snapshot_outside_all_contacts():
    plan = ContactPlan([Contact("A", "B", 0.0, 10.0, 1.0, 1.0, "ISL")], 0.0, 100.0)
    nodes = [NodeSpec("A", "CommSat", (0,), (0,)), NodeSpec("B", "CommSat", (0,), (0,))]
    snap = build_snapshot(plan, TimeWindow(0, 50.0, 60.0), nodes)
    assert snap.links == []


def test_snapshot_soundness_randomized():
    rng = random.Random(17)
    for _ in range(100):
        plan = random_plan(rng)
        boundaries = sort_timestamps(plan)
        windows = merge_windows(boundaries, DiscretizationConfig(rng.uniform(0, 50)))
        names = {c.node_a for c in plan.contacts} | {c.node_b for c in plan.contacts}
        nodes = [NodeSpec(n, "CommSat", (0,), (0,)) for n in sorted(names)]
        for w in windows:
            snap = build_snapshot(plan, w, nodes)
            for link in snap.links:
                covering = [
                    c for c in plan.contacts
                    if {c.node_a, c.node_b} == {link.node_a, link.node_b}
                    and c.start <= w.start and c.end >= w.end
                ]
                assert covering


def test_stable_interval_four_link_fixture():
    # The published prose reads 5-10 min, but the four intervals intersect to
    # [10, 15); the arithmetic wins here.
    assert stable_interval(four_link_plan(), list("SABCD")) == (10 * MIN, 15 * MIN)


def test_stable_interval_single_link_is_identity():
    plan = four_link_plan()
    assert stable_interval(plan, ["A", "B"]) == (5 * MIN, 20 * MIN)


def test_stable_interval_disjoint_is_none():
    plan = ContactPlan(
        [
            Contact("A", "B", 0.0, 5.0, 1.0, 0.0, "ISL"),
            Contact("B", "C", 6.0, 9.0, 1.0, 0.0, "ISL"),
        ],
        0.0,
        10.0,
    )
    assert stable_interval(plan, ["A", "B", "C"]) is None


def test_stable_interval_unknown_pair_raises():
    with pytest.raises(ValueError):
        stable_interval(four_link_plan(), ["S", "C"])


def test_snapshot_dump_round_trip():
    nodes = [
        NodeSpec("GS-A", "Terminal", (0, 0), (0, 0)),
        NodeSpec("SAT-1", "AISat", (1, 0), (0, 1), 2),
        NodeSpec("SAT-2", "CommSat", (0, 0), (0, 0)),
    ]
    snap = SnapshotGraph(
        TimeWindow(3, 60.0, 120.0),
        {n.id: n for n in nodes},
        [
            SnapshotLink("GS-A", "SAT-1", 310.5, 290.25, 7.5, "SGL"),
            SnapshotLink("SAT-1", "SAT-2", 325.0, 325.0, 12.0, "ISL"),
        ],
    )
    loaded = load_snapshot(dump_snapshot(snap))
    assert loaded.window == snap.window
    assert loaded.nodes == snap.nodes
    assert loaded.links == snap.links


def test_windows_file_round_trip(tmp_path):
    windows = [TimeWindow(0, 0.0, 62.5), TimeWindow(1, 62.5, 130.0)]
    path = tmp_path / "windows.txt"
    write_windows(windows, path)
    assert read_windows(path) == windows
