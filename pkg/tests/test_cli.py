from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from cue_deviations import cli, verify
from cue_deviations.cumulants import Observable, cumulants

jsonschema = pytest.importorskip("jsonschema")


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_cumulants_csv_roundtrips_floats(capsys):
    code, out, _ = run(["cumulants", "--observable", "re-log-p", "--N", "100", "--m-max", "5"], capsys)
    assert code == 0
    table = rows(out)
    assert [int(r["m"]) for r in table] == [1, 2, 3, 4, 5]
    ref = cumulants(Observable.RE_LOG_P, 100, 5)
    assert all(float(r["value"]) == ref[int(r["m"])] for r in table)


def test_cumulants_asymptotic_by_log_n(capsys):
    code, out, _ = run(["cumulants", "--observable", "im-log-p", "--logN", "1e100", "--mode", "asymptotic",
                        "--m-max", "2"], capsys)
    assert code == 0 and float(rows(out)[1]["value"]) == pytest.approx(0.5e100)


def test_cumulants_log_n_needs_asymptotic(capsys):
    code, _, err = run(["cumulants", "--logN", "10"], capsys)
    assert code == 2 and "asymptotic" in err


@pytest.mark.parametrize("method", ["edgeworth", "inversion", "monte-carlo"])
def test_density_methods_share_schema(method, capsys, tmp_path):
    args = ["density", "--observable", "im-log-p", "--N", "20", "--method", method, "--points", "41",
            "--draws", "400"]
    code, out, _ = run(args, capsys)
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["observable", "method", "N", "x", "density"]
    assert {r["method"] for r in table} == {method}


def test_monte_carlo_histogram_file(capsys, tmp_path):
    path = tmp_path / "hist.csv"
    code, _, _ = run(["density", "--observable", "re-log-p", "--N", "10", "--method", "monte-carlo",
                      "--draws", "500", "--bins", "20", "--histogram-out", str(path)], capsys)
    hist = rows(path.read_text())
    assert code == 0 and len(hist) == 20
    assert list(hist[0]) == ["bin_left", "bin_right", "count", "normalized_density"]
    assert sum(float(h["normalized_density"]) * (float(h["bin_right"]) - float(h["bin_left"])) for h in hist) \
        == pytest.approx(1.0)


def test_inversion_refused_above_limit(capsys):
    code, _, err = run(["density", "--observable", "re-log-p", "--N", "501", "--method", "inversion"], capsys)
    assert code == 2 and "500" in err


def test_json_output(capsys):
    code, out, _ = run(["density", "--observable", "re-log-p", "--N", "30", "--points", "5", "--format", "json"],
                       capsys)
    doc = json.loads(out)
    assert code == 0 and doc["meta"]["M"] == 24 and len(doc["rows"]) == 5


def test_regime_table(capsys):
    code, out, _ = run(["regime", "--theorem", "T2", "--alpha", "0.5", "--log2-min", "10", "--log2-max", "12"],
                       capsys)
    table = rows(out)
    assert code == 0 and len(table) == 3 and {r["branch"] for r in table} == {"alpha<1"}
    assert all(math.isfinite(float(r["ratio"])) for r in table)


def test_regime_epsilon_and_smoothing(capsys):
    assert run(["regime", "--epsilon", "0.3", "--log2-max", "11"], capsys)[0] == 0
    code, out, _ = run(["regime", "--smoothing", "below", "--log2-max", "11"], capsys)
    assert code == 0 and rows(out)[0]["branch"] == "smoothed-below"
    assert run(["regime", "--epsilon", "1.5"], capsys)[0] == 2


def test_regime_flags_are_exclusive(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["regime", "--alpha", "1", "--epsilon", "0.1"])
    assert exc.value.code == 2


def test_smoothing(capsys):
    code, out, _ = run(["smoothing", "--logN", "1e6"], capsys)
    assert code == 0 and float(rows(out)[0]["value"]) == pytest.approx(math.exp(-1), abs=1e-5)


def test_coefficient(capsys, tmp_path):
    path = tmp_path / "c.csv"
    code, _, _ = run(["coefficient", "--family", "c", "--kappa", "1", "2", "--N", "1000", "-o", str(path)], capsys)
    table = rows(path.read_text())
    assert code == 0 and float(table[0]["limit"]) == pytest.approx(1.0)
    assert float(table[1]["limit"]) == pytest.approx(1 / 12)


def test_bad_observable_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["cumulants", "--observable", "nope"])
    assert exc.value.code == 2


def test_verify_subset_report_validates(capsys):
    code, out, err = run(["verify", "--only", "specfun"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, verify.REPORT_SCHEMA)
    assert code == 0 and doc["passed"] and doc["n_checks"] == 4
    assert "PASS specfun.constants" in err


def test_verify_full_report_exit_code(tmp_path):
    path = tmp_path / "report.json"
    proc = subprocess.run([sys.executable, "-m", "cue_deviations", "verify", "-o", str(path)],
                          capture_output=True, text=True)
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, verify.REPORT_SCHEMA)
    assert proc.returncode == (0 if doc["passed"] else 3)
    assert {c["module"] for c in doc["checks"]} == set(verify.MODULES)
