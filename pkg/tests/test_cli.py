import json
from pathlib import Path

import pytest

from gscsim.cli import main
from gscsim.config import load_config
from gscsim.geometry import ConfigurationError, read_contact_plan
from gscsim.scenario import read_metrics_csv
from gscsim.temporal import read_windows

REPO = Path(__file__).resolve().parent.parent
DEMO = REPO / "configs" / "demo_small.json"
DETOUR = REPO / "configs" / "encoder_detour" / "config.json"


@pytest.fixture(scope="module")
def demo_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("demo_out")
    code = main(["simulate", "--config", str(DEMO), "--out", str(out)])
    assert code == 0
    return out


def test_simulate_writes_all_outputs(demo_run):
    assert (demo_run / "contacts.txt").exists()
    assert (demo_run / "windows.txt").exists()
    assert (demo_run / "metrics.csv").exists()
    assert (demo_run / "summary.txt").exists()
    assert list((demo_run / "snapshots").glob("window_*.txt"))


def test_metrics_csv_has_eight_rows(demo_run):
    lines = (demo_run / "metrics.csv").read_text().strip().splitlines()
    assert len(lines) == 9  # header + 4 types x 2 methods
    report = read_metrics_csv(demo_run / "metrics.csv")
    assert len(report.rows) == 8


def test_outputs_round_trip_through_loaders(demo_run):
    plan = read_contact_plan(demo_run / "contacts.txt")
    assert plan.contacts
    windows = read_windows(demo_run / "windows.txt")
    assert windows and windows[0].index == 0
    read_metrics_csv(demo_run / "metrics.csv")


def test_simulate_is_byte_deterministic(demo_run, tmp_path):
    out2 = tmp_path / "again"
    assert main(["simulate", "--config", str(DEMO), "--out", str(out2)]) == 0
    assert (out2 / "metrics.csv").read_bytes() == (demo_run / "metrics.csv").read_bytes()
    assert (out2 / "contacts.txt").read_bytes() == (demo_run / "contacts.txt").read_bytes()


def test_simulate_seed_override_changes_output(demo_run, tmp_path):
    out2 = tmp_path / "seeded"
    assert main(["simulate", "--config", str(DEMO), "--seed", "99",
                 "--out", str(out2)]) == 0
    assert (out2 / "metrics.csv").read_bytes() != (demo_run / "metrics.csv").read_bytes()


def test_missing_config_exits_2(capsys):
    assert main(["simulate", "--config", "/no/such/file.json", "--out", "/tmp/x"]) == 2


def test_threshold_beyond_horizon_gives_single_window(tmp_path):
    config = json.loads(DEMO.read_text())
    config["discretization"]["lambdaS"] = 1e9
    config["output"] = {}
    path = tmp_path / "wide.json"
    path.write_text(json.dumps(config))
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(path), "--out", str(out)]) == 0
    windows = read_windows(out / "windows.txt")
    assert len(windows) == 1


def test_unknown_config_keys_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"seed": 1, "bogus": {}}))
    with pytest.raises(ConfigurationError):
        load_config(path)
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path)]) == 2


def test_route_traditional_matches_published_totals(capsys):
    code = main(["route", "--config", str(DETOUR),
                 "--app", "case=1,src=U1,dst=U2,rate=20,kb=0",
                 "--method", "traditional"])
    out = capsys.readouterr().out
    assert code == 0
    assert "path: (U1, A, B, U2)" in out
    assert "occupied: 60.000000 Mbps" in out
    assert "delay: 15.000000 ms" in out


def test_route_distant_encoder_matches_published_totals(capsys):
    code = main(["route", "--config", str(DETOUR),
                 "--app", "case=3,src=U1,dst=U2,rate=20,kb=0"])
    out = capsys.readouterr().out
    assert code == 0
    assert "path: (U1, A, C, D, E, U2)" in out
    assert "occupied: 70.000000 Mbps" in out
    assert "delay: 25.000000 ms" in out


def test_route_unroutable_reports_reason(capsys):
    code = main(["route", "--config", str(DETOUR),
                 "--app", "case=4,src=U1,dst=U2,rate=20,kb=0"])
    out = capsys.readouterr().out
    assert code == 1
    assert "unroutable: noMatchingKB" in out


def test_route_invalid_case_exits_2(capsys):
    assert main(["route", "--config", str(DETOUR),
                 "--app", "case=7,src=U1,dst=U2"]) == 2


@pytest.fixture()
def fixture_snapshot_file(tmp_path):
    from gscsim.cli import _fixture_snapshot
    from gscsim.temporal import dump_snapshot

    cfg = load_config(DETOUR)
    path = tmp_path / "snap.txt"
    path.write_text(dump_snapshot(_fixture_snapshot(cfg)))
    return path


def test_plan_exact_on_fixture(fixture_snapshot_file, tmp_path, capsys):
    code = main(["plan", "--config", str(DETOUR),
                 "--snapshot", str(fixture_snapshot_file), "--out", str(tmp_path)])
    assert code == 0
    text = (tmp_path / "deployment.txt").read_text()
    assert "solver=exact" in text
    assert "objective=70.0" in text


def test_plan_greedy_reports_gap(fixture_snapshot_file, tmp_path):
    code = main(["plan", "--config", str(DETOUR), "--solver", "greedy",
                 "--snapshot", str(fixture_snapshot_file), "--out", str(tmp_path)])
    assert code == 0
    text = (tmp_path / "deployment.txt").read_text()
    assert "solver=greedy" in text
    assert "gap=" in text
    gap = float(text.split("gap=")[1].split()[0])
    assert gap >= 0.0


def test_plan_empty_applications(tmp_path, fixture_snapshot_file):
    config = json.loads(DETOUR.read_text())
    config["workload"].pop("applications")
    config["network"]["contactPlanFile"] = str(DETOUR.parent / "contacts.txt")
    config["network"]["nodesFile"] = str(DETOUR.parent / "nodes.txt")
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(config))
    # fixture-mode config without explicit applications plans for nothing
    code = main(["plan", "--config", str(path),
                 "--snapshot", str(fixture_snapshot_file), "--out", str(tmp_path)])
    assert code == 0
    text = (tmp_path / "deployment.txt").read_text()
    assert "objective=0.0" in text


def test_plan_unparseable_snapshot_exits_2(tmp_path):
    bad = tmp_path / "bad_snap.txt"
    bad.write_text("garbage line\n")
    assert main(["plan", "--config", str(DETOUR), "--snapshot", str(bad),
                 "--out", str(tmp_path)]) == 2


def test_report_on_missing_file_exits_2():
    assert main(["report", "--metrics", "/no/such/metrics.csv"]) == 2


def test_route_imports_deployment_plan(tmp_path, capsys):
    # Granting node B a decoder lets a sender-encodes application route.
    plan_file = tmp_path / "deploy.txt"
    plan_file.write_text("assign B 0 decoder\n")
    config = json.loads(DETOUR.read_text())
    config["network"]["contactPlanFile"] = str(DETOUR.parent / "contacts.txt")
    nodes_file = tmp_path / "nodes.txt"
    nodes_file.write_text(
        (DETOUR.parent / "nodes.txt").read_text().replace(
            "node B CommSat 0", "node B AISat 2"
        )
    )
    config["network"]["nodesFile"] = str(nodes_file)
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(config))

    args = ["route", "--config", str(cfg_path),
            "--app", "case=2,src=U1,dst=U2,rate=20,kb=0"]
    assert main(args) == 1  # no decoder anywhere yet
    capsys.readouterr()
    assert main(args + ["--deployment", str(plan_file)]) == 0
    out = capsys.readouterr().out
    assert "decoder: B" in out


def test_deployment_file_errors_exit_2(tmp_path):
    assert main(["route", "--config", str(DETOUR),
                 "--app", "case=2,src=U1,dst=U2,rate=20,kb=0",
                 "--deployment", "/no/such/plan.txt"]) == 2
