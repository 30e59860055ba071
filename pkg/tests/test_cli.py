import json
import os
import subprocess
import sys

import pytest

from facepipe.cli import run_cli
from facepipe.io_formats import read_report, report_bytes
from conftest import (
    CROSSING_SCENARIO,
    DCF_CONFIG,
    GATING_CALIBRATION,
    GOLDEN_DIR,
    IOU_CONFIG,
    TABLE_CALIBRATION,
)


def facepipe_cmd(*args):
    return subprocess.run(
        [sys.executable, "-m", "facepipe.cli", *args],
        capture_output=True,
        text=True,
    )


def test_usage_errors_exit_one():
    out = facepipe_cmd()
    assert out.returncode == 1
    assert "usage error" in out.stderr
    out = facepipe_cmd("track", "--config", "x")
    assert out.returncode == 1


def test_data_errors_exit_two(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("tracker.warp = 1\n")
    out = facepipe_cmd(
        "track",
        "--config", str(cfg),
        "--detections", str(tmp_path / "absent.csv"),
        "--out", str(tmp_path / "r.json"),
    )
    assert out.returncode == 2
    assert "unknown key" in out.stderr


def test_track_requires_frames_for_dcf(tmp_path, crossing_dir):
    out = facepipe_cmd(
        "track",
        "--config", DCF_CONFIG,
        "--detections", os.path.join(crossing_dir, "detections.csv"),
        "--out", str(tmp_path / "r.json"),
    )
    assert out.returncode == 2
    assert "requires --frames" in out.stderr


def test_track_report_contents(tmp_path, crossing_dir):
    report_path = tmp_path / "track.json"
    code = run_cli(
        [
            "track",
            "--config", IOU_CONFIG,
            "--detections", os.path.join(crossing_dir, "detections.csv"),
            "--ground-truth", os.path.join(crossing_dir, "groundtruth.csv"),
            "--out", str(report_path),
        ]
    )
    assert code == 0
    report = read_report(str(report_path))
    assert report["frames"] == 30
    assert report["tracks_created"] == 4
    assert report["id_switches"] == 2
    assert report["recognition_calls"] is None


def test_gate_report_counts_calls(tmp_path, crossing_dir):
    report_path = tmp_path / "gate.json"
    code = run_cli(
        [
            "gate",
            "--config", DCF_CONFIG,
            "--detections", os.path.join(crossing_dir, "detections.csv"),
            "--frames", os.path.join(crossing_dir, "frames"),
            "--ground-truth", os.path.join(crossing_dir, "groundtruth.csv"),
            "--embeddings", os.path.join(crossing_dir, "embeddings.csv"),
            "--gallery", os.path.join(crossing_dir, "gallery.csv"),
            "--out", str(report_path),
        ]
    )
    assert code == 0
    report = read_report(str(report_path))
    assert report["tracks_created"] == 2
    assert report["id_switches"] == 0
    assert report["recognition_calls"] == 2
    assert report["gating_reduction"] == pytest.approx(1.0 - 2.0 / 54.0, abs=1e-9)


def test_gate_run_matches_committed_golden(tmp_path, crossing_dir):
    report_path = tmp_path / "gate.json"
    run_cli(
        [
            "gate",
            "--config", DCF_CONFIG,
            "--detections", os.path.join(crossing_dir, "detections.csv"),
            "--frames", os.path.join(crossing_dir, "frames"),
            "--ground-truth", os.path.join(crossing_dir, "groundtruth.csv"),
            "--embeddings", os.path.join(crossing_dir, "embeddings.csv"),
            "--gallery", os.path.join(crossing_dir, "gallery.csv"),
            "--out", str(report_path),
        ]
    )
    golden = os.path.join(GOLDEN_DIR, "gate_dcf.json")
    assert report_path.read_bytes() == open(golden, "rb").read()


def test_simulate_and_compare(tmp_path):
    first = tmp_path / "sim1.json"
    second = tmp_path / "sim2.json"
    for path in (first, second):
        code = run_cli(
            [
                "simulate",
                "--calibration", TABLE_CALIBRATION,
                "--out", str(path),
            ]
        )
        assert code == 0
    report = read_report(str(first))
    assert report["events"][0]["allocation"] == "run2"
    assert report["fps_simulated"] == pytest.approx(1000.0 / 4.9, rel=0.01)

    out = facepipe_cmd("report", "--in", str(first), "--compare", str(second))
    assert out.returncode == 0
    assert "identical" in out.stdout

    other = tmp_path / "sim3.json"
    run_cli(
        [
            "simulate",
            "--calibration", TABLE_CALIBRATION,
            "--allocation", "run3",
            "--out", str(other),
        ]
    )
    out = facepipe_cmd("report", "--in", str(first), "--compare", str(other))
    assert out.returncode == 2


def test_simulate_gating_target(tmp_path):
    path = tmp_path / "sim.json"
    code = run_cli(
        [
            "simulate",
            "--calibration", GATING_CALIBRATION,
            "--allocation", "run2",
            "--target-fps", "298",
            "--out", str(path),
        ]
    )
    assert code == 0
    report = read_report(str(path))
    assert report["fps_simulated"] == pytest.approx(298.0, rel=0.01)
    assert 0.0 < report["config_echo"]["gating_fraction"] < 1.0


def test_simulate_baseline(tmp_path):
    path = tmp_path / "sim.json"
    run_cli(
        [
            "simulate",
            "--calibration", TABLE_CALIBRATION,
            "--baseline",
            "--out", str(path),
        ]
    )
    report = read_report(str(path))
    assert report["power_mw"]["per_engine"]["GPU"] == 3506.0
    assert report["power_mw"]["per_engine"]["CPU"] == 1342.0


def test_report_pretty_print(tmp_path):
    path = tmp_path / "r.json"
    path.write_bytes(report_bytes({"frames": 3, "rate": 0.5}))
    out = facepipe_cmd("report", "--in", str(path))
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"frames": 3, "rate": 0.5}


def test_synth_writes_scenario(tmp_path):
    out_dir = tmp_path / "scn"
    code = run_cli(["synth", "--spec", CROSSING_SCENARIO, "--out", str(out_dir)])
    assert code == 0
    for name in ("detections.csv", "embeddings.csv", "gallery.csv", "groundtruth.csv"):
        assert (out_dir / name).exists()
    assert (out_dir / "frames" / "frame_000030.pgm").exists()
