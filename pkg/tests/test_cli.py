import csv
import io
import json
import subprocess
import sys

import pytest

from serrezeros.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_zeros_of_serre_e12(tmp_path):
    c, j = tmp_path / "z.csv", tmp_path / "a.json"
    code, _ = run("zeros", "--level", "1", "--form", "E_12", "--serre", "1", "-N", "128",
                  "--csv", str(c), "--json", str(j))
    assert code == 0
    lines = c.read_text().splitlines()
    assert lines[0] == "# schema: serre-zeros/1"
    rows = list(csv.DictReader(lines[1:]))
    assert {r["label"] for r in rows} == {"i", "rho_1"}
    report = json.loads(j.read_text())
    assert report["residual"] == "0" and report["schema"] == "serre-zeros/1"


def test_zeros_of_e12_interior_zero():
    code, out = run("zeros", "--form", "E12", "-N", "128")
    assert code == 0
    rows = [l for l in out.splitlines() if l.startswith("1,")]
    assert len(rows) == 1 and rows[0].split(",")[4] == "odd"


def test_jpoly_e4_certified():
    code, out = run("jpoly", "--form", "E4", "-N", "64")
    d = json.loads(out)
    assert code == 0 and d["certified"] and d["poly"] == ["-1/3"]
    assert (d["epsilon"], d["delta"], d["m"]) == (0, 1, 0)


def test_jpoly_refusal_exits_nonzero():
    code, out = run("jpoly", "--form", "E4*(j - 2000)", "-N", "64")
    assert code == 1 and json.loads(out)["certified"] is False


def test_audit_failure_exits_nonzero():
    code, out = run("audit", "--form", "E4*(j - 2000)", "-N", "128")
    assert code == 1 and json.loads(out)["status"] == "fail"


def test_weight_mismatch_is_a_usage_error(capsys):
    code, _ = run("audit", "--form", "E4 + E6")
    assert code == 2
    assert "position 3" in capsys.readouterr().err


def test_tail_flag_exits_nonzero(capsys):
    code, _ = run("audit", "--level", "7", "--form", "FrickeE(4)", "-N", "20")
    assert code == 1
    assert "tail-estimate" in capsys.readouterr().err


def test_gen_serre_geom_plot():
    code, out = run("gen", "--form", "Delta", "-N", "16", "--terms", "3")
    assert code == 0 and json.loads(out)["coeffs"] == ["1/1", "-24/1", "252/1"]
    code, out = run("serre", "--form", "E4", "--iterate", "2", "-N", "8", "--terms", "2")
    assert json.loads(out)["coeffs"] == ["1/6", "80/1"]
    code, out = run("geom", "--level", "5")
    d = json.loads(out)
    assert code == 0 and d["riemann_hurwitz"]["passed"] and len(d["arcs"]) == 2
    code, out = run("plot-data", "--level", "2", "--form", "FrickeE(4)", "-N", "64",
                    "--points", "5")
    assert code == 0 and len(out.strip().splitlines()) == 2 + 5


def test_outputs_are_byte_identical(tmp_path):
    outs = []
    for tag in ("a", "b"):
        c, j = tmp_path / f"{tag}.csv", tmp_path / f"{tag}.json"
        run("zeros", "--level", "5", "--form", "FrickeE(12)", "-N", "200", "--grid", "512",
            "--csv", str(c), "--json", str(j))
        outs.append((c.read_bytes(), j.read_bytes()))
    assert outs[0] == outs[1]


def test_suite_small_and_deterministic(tmp_path):
    dirs = []
    for workers in ("1", "2"):
        d = tmp_path / f"w{workers}"
        code, out = run("suite", "--levels", "2", "--iterates", "1", "-N", "160", "--grid", "512",
                        "--workers", workers, "--out-dir", str(d))
        assert code == 0 and "4/4 entries passed" in out
        dirs.append(d)
    names = sorted(p.name for p in dirs[0].iterdir())
    assert "summary.csv" in names and "summary.json" in names
    for n in names:
        assert (dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes()


def test_bad_levels_argument():
    assert run("suite", "--levels", "4")[0] == 2


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "serrezeros.cli", "geom", "--level", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and '"level": 1' in r.stdout
