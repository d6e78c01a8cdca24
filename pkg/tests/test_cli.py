import csv
import json

import numpy as np
import pytest

from mvwave import cli
from mvwave.analysis import detect_all_detections
from mvwave.pgm import read_pgm, read_pgm_array
from mvwave.reffun import DisplayConfig
from mvwave.scene import cube_diagonals, tetrahedron_geometry, walk_segment_3d


def run(*argv):
    return cli.main([str(a) for a in argv])


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def cube(tmp_path_factory):
    out = tmp_path_factory.mktemp("cube")
    assert run("synth", "cube8", "--out-dir", out) == 0
    return out


@pytest.fixture(scope="module")
def tetra(tmp_path_factory):
    out = tmp_path_factory.mktemp("tetra")
    assert run("synth", "tetra", "--out-dir", out) == 0
    return out


def test_synth_cube_size(cube):
    assert read_pgm_array(cube / "cube8.pgm").shape == (720, 720)
    assert len(rows(cube / "cube8.voxels.csv")) == 32
    manifest = json.loads((cube / "cube8.synth.json").read_text())
    assert str(cube / "cube8.pgm") in manifest["outputs"]


def test_synth_tetra_size(tetra):
    assert read_pgm_array(tetra / "tetra.pgm").shape == (2700, 2700)


def test_zero_noise_is_identity(cube, tmp_path):
    assert run("synth", "cube8", "--noise", 0, "--seed", 9, "--out-dir", tmp_path) == 0
    assert (tmp_path / "cube8.pgm").read_bytes() == (cube / "cube8.pgm").read_bytes()


def test_noise_changes_image(cube, tmp_path):
    assert run("synth", "cube8", "--noise", 51, "--seed", 3, "--name", "noisy", "--out-dir", tmp_path) == 0
    assert (tmp_path / "noisy.pgm").read_bytes() != (cube / "cube8.pgm").read_bytes()


def test_analyze_round_trip(cube, capsys):
    assert run("analyze", cube / "cube8.pgm", "--truth", cube / "cube8.voxels.csv", "--out-dir", cube) == 0
    manifest = json.loads((cube / "cube8.analyze.json").read_text())
    assert manifest["scores_vs_truth"]["recall"] == 1.0
    found = {(int(r["cx"]), int(r["cy"]), int(r["k"])) for r in rows(cube / "cube8.detections.csv")}
    assert cube_diagonals(8).voxels <= found
    cfg = DisplayConfig()
    assert len(found) == len(detect_all_detections(read_pgm(cube / "cube8.pgm", cfg), cfg))
    assert read_pgm_array(cube / "cube8.depth.pgm").shape == (12, 12)
    assert "recall: 1.0" in capsys.readouterr().out


def test_cwt_tetra_lower_left(tetra):
    assert run("cwt", tetra / "tetra.pgm", "--plane", 2, "--out-dir", tetra) == 0
    manifest = json.loads((tetra / "tetra.cwt_p2.json").read_text())
    cx, cy = manifest["argmax"]["cell"]
    a, b = tetrahedron_geometry().lower_left_edge()
    edge = [(x, y) for x, y, _ in walk_segment_3d(a, b)]
    assert min(max(abs(cx - x), abs(cy - y)) for x, y in edge) <= 1
    scores = np.loadtxt(tetra / "tetra.cwt_p2.csv", delimiter=",", dtype=np.int64)
    u0, v0, u1, v1 = manifest["valid_region"]
    assert scores.shape == (v1 - v0, u1 - u0)
    assert scores.max() == manifest["argmax"]["score"] == manifest["preview_normalization"]["max"]


def test_kernels_plane_one(tmp_path):
    assert run("kernels", "--plane", 1, "--out-dir", tmp_path) == 0
    row = (tmp_path / "kernels_p1.wav1d.csv").read_text().strip()
    assert row == ",".join(["1"] * 30 + ["-1"] * 30)
    ref2d = np.loadtxt(tmp_path / "kernels_p1.ref2d.csv", delimiter=",")
    assert ref2d.shape == (60, 60) and ref2d.sum() == 3600


def test_kernels_center_zero_recorded(tmp_path):
    assert run("kernels", "--plane", -4, "--out-dir", tmp_path) == 0
    assert json.loads((tmp_path / "kernels_m4.json").read_text())["center_zero_split"] is True


def test_reproducible_manifests(tmp_path):
    def synth():
        assert run("synth", "cube8", "--noise", 20, "--seed", 4, "--out-dir", tmp_path) == 0
        return (tmp_path / "cube8.synth.json").read_text().splitlines(), (tmp_path / "cube8.pgm").read_bytes()

    lines_a, pgm_a = synth()
    lines_b, pgm_b = synth()
    assert pgm_a == pgm_b
    assert len(lines_a) == len(lines_b)
    changed = [a for a, b in zip(lines_a, lines_b) if a != b]
    assert all('"timestamp"' in line for line in changed)


def test_env_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MVWAVE_OUT", str(tmp_path / "env"))
    assert run("kernels", "--plane", 3) == 0
    assert (tmp_path / "env" / "kernels_p3.wav2d.csv").is_file()


def test_object_file(tmp_path):
    obj = tmp_path / "seg.obj"
    obj.write_text("# one segment\nv 0 0 -4\nv 7 7 4\ne 0 1\n")
    assert run("synth", obj, "--out-dir", tmp_path) == 0
    assert len(rows(tmp_path / "seg.voxels.csv")) == 8


def test_exit_codes(tmp_path, capsys):
    assert run("synth", "sphere", "--out-dir", tmp_path) == 2
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P2\n1 1\n255\n0")
    assert run("analyze", bad, "--out-dir", tmp_path) == 3
    assert run("kernels", "--plane", 7, "--out-dir", tmp_path) == 4
    assert run("kernels", "--plane", 0, "--out-dir", tmp_path) == 4
    with pytest.raises(SystemExit) as exc:
        run("analyze", bad, "--fraction", "1.5")
    assert exc.value.code == 2
    assert "error" in capsys.readouterr().err


def test_selftest(capsys):
    assert run("selftest") == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "PASS" in out
    assert all(ok for _, ok in cli.selftest(DisplayConfig()))
