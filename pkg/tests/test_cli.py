import csv
import io
import json
import math
import subprocess
import sys

import pytest

from bendbound.bounds import b_L_breakpoint, sech
from bendbound.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write_lamination(path, leaves):
    path.write_text(json.dumps({"leaves": [{"endpoints": e, "weight": w} for e, w in leaves]}))
    return str(path)


def perpendicular_endpoints(s):
    # endpoints of the geodesic crossing the real diameter perpendicularly at signed distance s
    c = math.tanh(s / 2)
    half = math.acos(2 * c / (1 + c * c))
    return [(-half) % (2 * math.pi), half]


# -- eval ------------------------------------------------------------------------


def test_eval_examples():
    code, out, _ = run("eval", "--kind", "r", "--s", "0.25")
    assert code == 0 and out.split()[0] == "0.549306144334055"
    code, out, _ = run("eval", "--kind", "bL", "--L", "1", "--x", repr(sech(1) / 2))
    assert code == 0 and float(out.split()[0]) == pytest.approx(math.pi, abs=1e-14)
    code, out, _ = run("eval", "--kind", "fbcy", "--L", "1")
    assert code == 0 and abs(float(out.split()[0]) - 4.238) < 5e-4
    code, out, _ = run("eval", "--kind", "cL", "--L", "1", "--r", "0")
    assert code == 0 and out.split() == ["0", "first-branch"]


def test_eval_near_rounded_endpoint():
    # 0.324 lies just below sech(1)/2 where the slope is infinite, so the
    # value is close to but not within print precision of pi
    code, out, _ = run("eval", "--kind", "bL", "--L", "1", "--x", "0.324")
    assert code == 0
    assert 3.1 < float(out.split()[0]) < math.pi


def test_eval_domain_error():
    code, out, err = run("eval", "--kind", "bL", "--L", "1", "--x", "0.4")
    assert code == 2 and out == ""
    assert "sech(L)/2" in err
    code, _, err = run("eval", "--kind", "teich", "--L", "1", "--dT", "0.25")
    assert code == 2 and "sech(L)/3" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "--kind", "bL", "--L", "1"),
        ("eval", "--kind", "nope", "--L", "1"),
        ("eval", "--kind", "bL", "--L", "nan", "--x", "0.1"),
        ("frobnicate",),
        ("table", "--L", "1", "--samples", "1"),
        ("verify", "trig", "--trials", "0"),
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


# -- table -----------------------------------------------------------------------


def test_table_rows():
    code, out, _ = run("table", "--kind", "bL", "--L", "1", "--samples", "200")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 200
    assert float(rows[0]["x"]) == 0 and float(rows[0]["value"]) == 0
    assert float(rows[-1]["x"]) == sech(1) / 2
    assert float(rows[-1]["value"]) == pytest.approx(math.pi, abs=1e-9)
    branches = [r["branch"] for r in rows]
    flips = [i for i in range(1, 200) if branches[i] != branches[i - 1]]
    assert len(flips) == 1
    step = sech(1) / 2 / 199
    xb = b_L_breakpoint(1.0)
    assert abs(float(rows[flips[0]]["x"]) - xb) <= step


def test_table_round_trip_decimal():
    code, out, _ = run("table", "--kind", "cL", "--L", "0.5", "--samples", "5")
    rows = list(csv.reader(io.StringIO(out)))[1:]
    for x, v, _b in rows:
        assert repr(float(x)) == x and repr(float(v)) == v


def test_table_json_and_file(tmp_path):
    path = tmp_path / "t.json"
    code, out, _ = run("table", "--L", "1", "--samples", "10", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text())
    assert len(data["rows"]) == 10 and data["config"]["L"] == 1.0


def test_table_unwritable_output(tmp_path):
    target = tmp_path / "missing-dir" / "t.csv"
    assert run("table", "--L", "1", "--out", str(target))[0] == 3


# -- verify ----------------------------------------------------------------------


def test_verify_halfplane_deterministic():
    argv = ("verify", "halfplane-lemma", "--L", "0.5", "--r", "0.5", "--trials", "10000", "--seed", "7")
    code1, out1, _ = run(*argv)
    code2, out2, _ = run(*argv)
    assert code1 == code2 == 0
    a, b = json.loads(out1), json.loads(out2)
    assert a["violations"] == 0 and a["trials"] == 10000
    for key in ("trials", "violations", "max_observed", "bound_value", "seed", "wall_time"):
        assert key in a
    a.pop("wall_time"), b.pop("wall_time")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["config"]["seed"] == 7


def test_verify_wedge():
    code, out, _ = run("verify", "wedge", "--k", "0.8", "--L", "1", "--samples", "2500")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert rep["max_observed"] == pytest.approx(0.2 * math.pi)


@pytest.mark.parametrize("target", ["area-lemma", "bers-kernel", "trig"])
def test_verify_other_targets(target):
    code, out, _ = run("verify", target, "--trials", "5", "--seed", "1")
    assert code == 0 and json.loads(out)["violations"] == 0


def test_verify_violation_exit_code():
    # a tolerance far below rounding makes the trig check report violations
    code, out, _ = run("verify", "trig", "--trials", "2000", "--tol", "1e-300")
    assert code == 1 and json.loads(out)["violations"] > 0


def test_verify_domain_error():
    assert run("verify", "halfplane-lemma", "--L", "2", "--r", "2")[0] == 2
    assert run("verify", "wedge", "--k", "0.8")[0] == 2


# -- lamination ------------------------------------------------------------------


def test_lamination_examples(tmp_path):
    one = write_lamination(tmp_path / "one.json", [(perpendicular_endpoints(0.0), 2.5)])
    code, out, _ = run("lamination", "--input", one, "--L", "1")
    assert code == 0 and float(out) == 2.5
    two = write_lamination(
        tmp_path / "two.json",
        [(perpendicular_endpoints(0.0), 1), (perpendicular_endpoints(0.4), 1)],
    )
    code, out, _ = run("lamination", "--input", two, "--L", "0.3")
    assert code == 0 and float(out) == 1
    assert float(run("lamination", "--input", two, "--L", "0.5")[1]) == 2


def test_lamination_errors(tmp_path):
    bad = write_lamination(tmp_path / "bad.json", [([0, math.pi], 1), ([math.pi / 2, 3 * math.pi / 2], 1)])
    code, _, err = run("lamination", "--input", bad, "--L", "1")
    assert code == 2 and "InvalidLamination" in err
    spread = write_lamination(tmp_path / "spread.json", [([t - 0.3, t + 0.3], 1) for t in (0.5, 2.5, 4.5)])
    code, _, err = run("lamination", "--input", spread, "--L", "1")
    assert code == 2 and "NotStackedError" in err
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run("lamination", "--input", str(junk), "--L", "1")[0] == 2
    assert run("lamination", "--input", str(tmp_path / "absent.json"), "--L", "1")[0] == 3
    one = write_lamination(tmp_path / "one.json", [(perpendicular_endpoints(0.0), 1)])
    assert run("lamination", "--input", one, "--L", "0")[0] == 2


# -- entry points ----------------------------------------------------------------


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bendbound", "eval", "--kind", "aw", "--s", "0.25"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.split() == ["0.549306144334055", "first-branch"]
    proc = subprocess.run([sys.executable, "-m", "bendbound", "eval", "--kind", "r", "--s", "0.7"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr.startswith("error:")
