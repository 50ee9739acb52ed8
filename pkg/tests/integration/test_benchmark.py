"""Integration tests for the benchmark command."""

import csv
import json
from pathlib import Path

from typer.testing import CliRunner

from fracpk_cli.fracpk.app import app


def read_table(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_benchmark_gl_and_abm(runner: CliRunner, tmp_path: Path) -> None:
    config = tmp_path / "bench.json"
    config.write_text(
        json.dumps(
            {
                "horizon": 5.0,
                "params": {
                    "points": 251,
                    "gl": [{"h": 0.01, "memory": 5.0}, {"h": 0.001, "memory": 5.0}],
                    "abm": [{"h": 0.01}, {"h": 0.001}],
                },
            }
        )
    )
    output = tmp_path / "out"
    result = runner.invoke(
        app,
        [
            "benchmark",
            "--config", str(config),
            "--family", "gl",
            "--family", "abm",
            "--family", "pade",
            "--workers", "1",
            "--output-dir", str(output),
        ],
        catch_exceptions=False,
    )
    assert result.exit_code == 0

    gl = read_table(output / "gl.csv")
    assert [row["params"] for row in gl] == ["h=0.01;memory=5.0", "h=0.001;memory=5.0"]
    assert all(row["status"] == "ok" for row in gl)
    coarse, fine = (float(row["e2_sup"]) for row in gl)
    assert fine < coarse
    assert fine < 1e-2

    abm = read_table(output / "abm.csv")
    assert [row["params"] for row in abm] == ["h=0.01", "h=0.001"]
    assert abm[1]["status"] == "ok"
    assert float(abm[1]["e1_sup"]) < 0.05

    pade = read_table(output / "pade.csv")
    assert [row["params"] for row in pade] == ["m=2;n=3", "m=3;n=4", "m=4;n=5", "m=5;n=6"]
    assert all(row["status"] == "ok" for row in pade)
    e1 = [float(row["e1_l2"]) for row in pade]
    assert e1 == sorted(e1, reverse=True)
    for error, expected in zip(e1, [2.833e-4, 1.105e-4, 4.514e-5, 2.327e-5]):
        assert expected / 10 < error < expected * 10

    summary = json.loads((output / "summary.json").read_text())
    assert set(summary["cells"]) == {"gl", "abm", "pade"}
    assert summary["reference"]["method"] == "valsa"
    assert len(list((output / "errors" / "gl").glob("*.csv"))) == 2
