"""Command-line interface tests: output lines and exit-code contract."""

import json

import pytest

from sylvtri import cli, pipeline


@pytest.fixture(autouse=True)
def _fresh_cache():
    pipeline.clear_cache()
    yield
    pipeline.clear_cache()


def test_triangulate_p2dual(tmp_path, capsys):
    out = tmp_path / "p2dual_3.json"
    code = cli.main(
        ["triangulate", "--family", "p2dual", "--n", "3", "--out", str(out)]
    )
    text = capsys.readouterr().out
    assert code == 0
    assert "cells=42" in text and "regular=true" in text and "unimodular=true" in text
    assert out.exists()
    art = pipeline.load(str(out))
    assert len(art.triangulation.cells) == 42


def test_triangulate_quiet_omits_timing(tmp_path, capsys):
    out = tmp_path / "a.json"
    cli.main(
        ["triangulate", "--family", "p2dual", "--n", "2", "--out", str(out),
         "--quiet"]
    )
    assert "elapsed" not in capsys.readouterr().out


def test_triangulate_infeasible_n(tmp_path, capsys):
    out = tmp_path / "big.json"
    code = cli.main(
        ["triangulate", "--family", "p2dual", "--n", "99", "--out", str(out)]
    )
    assert code == 2
    assert "feasibility refusal" in capsys.readouterr().err
    assert not out.exists()


def test_triangulate_invalid_n(tmp_path):
    assert cli.main(
        ["triangulate", "--family", "p1", "--n", "0", "--out", str(tmp_path / "x")]
    ) == 5


def test_verify_good_artifact(tmp_path, capsys):
    path = tmp_path / "p1_3.json"
    pipeline.save(pipeline.triangulate_p1(3), str(path))
    code = cli.main(["verify", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "valid=true" in out and "regular=true" in out
    assert "checksum=12" in out


def test_verify_perturbed_witness(tmp_path, capsys):
    art = pipeline.triangulate_p2dual(2)
    data = pipeline.to_json_dict(art)
    # raising a shared vertex breaks strict convexity
    data["witness"][1] = "50/1"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code = cli.main(["verify", str(path), "--mode", "local"])
    captured = capsys.readouterr()
    assert code == 3
    assert "regular=false" in captured.out
    assert "regularity violation" in captured.err


def test_verify_truncated_file(tmp_path, capsys):
    path = tmp_path / "trunc.json"
    path.write_text('{"version": 1,')
    assert cli.main(["verify", str(path)]) == 4
    assert "parse error" in capsys.readouterr().err


def test_fan_p2(tmp_path, capsys):
    src = tmp_path / "p2_2.json"
    pipeline.save(pipeline.triangulate_p2(2), str(src))
    dst = tmp_path / "fan.json"
    code = cli.main(["fan", str(src), "--out", str(dst)])
    out = capsys.readouterr().out
    assert code == 0
    assert "complete smooth crepant" in out and "rays=6 cones=6" in out
    data = json.loads(dst.read_text())
    assert data["flags"] == {"complete": True, "smooth": True, "crepant": True}


def test_fan_p1(tmp_path, capsys):
    src = tmp_path / "p1_3.json"
    pipeline.save(pipeline.triangulate_p1(3), str(src))
    code = cli.main(["fan", str(src), "--out", str(tmp_path / "fan.json")])
    assert code == 0
    assert "cones=12" in capsys.readouterr().out


def test_invariants_text(capsys):
    assert cli.main(["invariants", "--n-max", "4"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0].split() == [
        "n", "index", "betti_sum", "euler_i1", "euler_i2",
        "middle_hodge_i1", "middle_hodge_i2",
    ]
    assert len(lines) == 5
    assert lines[4].split()[:3] == ["4", "3486", "1820448"]


def test_invariants_csv(capsys):
    assert cli.main(["invariants", "--n-max", "3", "--csv"]) == 0
    rows = [r.split(",") for r in capsys.readouterr().out.strip().splitlines()]
    assert rows[1] == ["1", "1", "4", "0", "0", "2", "2"]
    assert rows[3][:5] == ["3", "66", "1008", "-960", "0"]


def test_stats(tmp_path, capsys):
    path = tmp_path / "d2.json"
    pipeline.save(pipeline.triangulate_p2dual(2), str(path))
    assert cli.main(["stats", str(path)]) == 0
    out = capsys.readouterr().out
    assert "p2dual n=2" in out and "cells=6" in out and "dim=2" in out


def test_threads_validation():
    assert cli.main(["invariants", "--threads", "0"]) == 5
