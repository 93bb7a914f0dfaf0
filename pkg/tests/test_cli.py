import json

import pytest

from convexsmooth.cli import RunConfig, main, run


@pytest.fixture
def lens_file(tmp_path):
    path = tmp_path / "lens.json"
    path.write_text(
        json.dumps({"dim": 2, "radius": 1.0, "centers": [[0.5, 0.0], [-0.5, 0.0]]})
    )
    return path


@pytest.fixture
def ball_file(tmp_path):
    path = tmp_path / "ball.json"
    path.write_text(json.dumps({"dim": 2, "radius": 1.0, "centers": [[0.0, 0.0]]}))
    return path


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(
        json.dumps(
            {
                "halfspaces": [
                    {"normal": [1, 0], "offset": 0.5},
                    {"normal": [-1, 0], "offset": 0.5},
                    {"normal": [0, 1], "offset": 0.5},
                    {"normal": [0, -1], "offset": 0.5},
                ]
            }
        )
    )
    return path


def test_certify_ball_passes(ball_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        ["certify", "--input", str(ball_file), "--output", str(out), "--resolution", "240"]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] is True
    conditions = {r["condition"] for r in report["reports"]}
    assert {
        "eq39",
        "ball_support_b",
        "ball_family_c",
        "gauge_sq_hessian_d",
        "level_set_e",
        "halfspace_reconstruction",
    } <= conditions


def test_certify_square_fails_with_witness(square_file, tmp_path):
    out = tmp_path / "out"
    code = main(["certify", "--input", str(square_file), "--output", str(out)])
    assert code == 1
    report = json.loads((out / "report.json").read_text())
    failed = [r for r in report["reports"] if not r["passed"]]
    assert failed and all(r["condition"] == "ball_support_b" for r in failed)
    assert {r["constant"] for r in report["reports"]} == {1.0, 10.0, 100.0}
    assert failed[0]["worst_witness"]["margin"] > 0


def test_smooth_lens_meets_epsilon(lens_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "smooth",
            "--input", str(lens_file),
            "--output", str(out),
            "--epsilon", "0.05",
            "--delta", "1e-3",
            "--order", "c2",
            "--resolution", "2048",
        ]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    summary = report["summary"]
    assert summary["symdiff_measure"] < 0.05 * summary["boundary_measure"]
    assert summary["contained"] and summary["tube_ok"]
    assert 1.0 < summary["t0"] < 1.05
    assert (out / report["mesh_file"]).exists()
    mesh = json.loads((out / "mesh.json").read_text())
    assert len(mesh["points"]) == 2048


def test_probe_round_trip(ball_file, tmp_path):
    probe_file = tmp_path / "probe.json"
    probe_file.write_text(
        json.dumps(
            {
                "inner": {"dim": 2, "radius": 1.0, "centers": [[0.0, 0.0]]},
                "outer": {"dim": 2, "radius": 2.0, "centers": [[0.0, 0.0]]},
            }
        )
    )
    out = tmp_path / "out"
    code = main(["probe", "--input", str(probe_file), "--output", str(out)])
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["summary"]["max_gap"] <= 1e-6


def test_measure_writes_mesh(lens_file, tmp_path):
    out = tmp_path / "out"
    assert main(["measure", "--input", str(lens_file), "--output", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["summary"]["boundary_measure"] == pytest.approx(4.1888, abs=1e-3)


def test_invalid_body_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2, "radius": 1.0, "centers": [[5.0, 0.0]]}))
    code = main(["certify", "--input", str(bad), "--output", str(tmp_path / "out")])
    assert code == 2
    assert "interior" in capsys.readouterr().err

    missing = tmp_path / "missing.json"
    code = main(["certify", "--input", str(missing), "--output", str(tmp_path / "out")])
    assert code == 2


def test_bad_epsilon_exits_2(lens_file, tmp_path, capsys):
    config = RunConfig(
        command="smooth",
        input=str(lens_file),
        output=str(tmp_path / "out"),
        epsilon=0.4,
    )
    assert run(config) == 2
    assert "epsilon" in capsys.readouterr().err


def test_reports_are_deterministic(lens_file, tmp_path):
    out = tmp_path / "out"
    args = [
        "smooth",
        "--input", str(lens_file),
        "--output", str(out),
        "--epsilon", "0.05",
        "--delta", "1e-3",
        "--order", "c2",
        "--resolution", "512",
        "--seed", "7",
    ]
    assert main(args) == 0
    first = (out / "report.json").read_bytes()
    (out / "report.json").unlink()
    assert main(args) == 0
    assert (out / "report.json").read_bytes() == first
