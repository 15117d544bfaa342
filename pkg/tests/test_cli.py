import csv
import io
import json
import subprocess
import sys

import pytest

from snextremes.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, fmt_float, main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_constants_b9(capsys):
    code, out, _ = run(capsys, "constants", "--lambda", "1", "--n", "9")
    assert code == EXIT_OK
    (row,) = rows(out)
    assert 1.69 < float(row["b_n"]) < 1.70
    assert row["below_n0"] == "false"


def test_constants_hall_json(capsys):
    code, out, _ = run(capsys, "constants", "--lambda", "0", "--n", "100", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert set(doc) == {"schema_version", "command", "params", "results"}
    assert doc["command"] == "constants"
    assert abs(doc["results"][0]["residual"]) < 1e-12
    assert doc["results"][0]["regime"] == "zero"


def test_constants_below_n0(capsys):
    code, out, err = run(capsys, "constants", "--lambda", "-1", "--n", "5")
    assert code == EXIT_OK
    assert "below n0(-1)=34" in err
    assert rows(out)[0]["below_n0"] == "true"


def test_constants_grid(capsys):
    code, out, _ = run(capsys, "constants", "--lambda", "2", "--n-grid", "10:1000:10")
    assert [r["n"] for r in rows(out)] == ["10", "100", "1000"]


def test_domain_error_exit(capsys):
    code, _, err = run(capsys, "constants", "--lambda", "1", "--n", "1")
    assert code == EXIT_NUMERIC and "n must be >= 2" in err
    code, _, _ = run(capsys, "maxdist", "--lambda", "-1", "--n", "10")
    assert code == EXIT_NUMERIC


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--lambda", "1", "--bogus"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--lambda", "1", "--n-grid", "1:2"])
    assert exc.value.code == EXIT_USAGE
    code, _, _ = run(capsys, "constants", "--lambda", "1")
    assert code == EXIT_USAGE


def test_dist(capsys):
    code, out, _ = run(capsys, "dist", "--lambda", "-1", "--x", "0", "8")
    r = rows(out)
    assert code == EXIT_OK
    assert float(r[0]["cdf"]) == 0.75
    assert r[1]["method"] == "log_tail_quadrature"


def test_maxdist_and_ratecurve(capsys, tmp_path):
    code, out, _ = run(capsys, "maxdist", "--lambda", "1", "--n", "1e6")
    assert code == EXIT_OK
    assert abs(float(rows(out)[0]["delta_n"]) - 0.024320574700) < 1e-9
    svg = tmp_path / "r.svg"
    code, out, err = run(capsys, "ratecurve", "--lambda", "1", "--n-grid", "1e3:1e6:10",
                         "--plot", str(svg))
    assert code == EXIT_OK and len(rows(out)) == 4
    assert "band:" in err
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<polyline") == 2


def test_ratecurve_needs_grid(capsys):
    code, _, _ = run(capsys, "ratecurve", "--lambda", "1", "--n", "100")
    assert code == EXIT_USAGE


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == EXIT_OK
    assert all(r["status"] == "pass" for r in rows(out))


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--lambda", "1", "--n", "1000", "--reps", "2000",
                       "--seed", "3")
    assert code == EXIT_OK and rows(out)[0]["status"] == "pass"


def test_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["simulate", "--lambda", "-1", "--n", "200", "--reps", "1000", "--seed", "5",
            "--format", "json"]
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_float_format_roundtrips():
    for v in (0.1, 1 / 3, 2.0**-1074, 1e308):
        assert float(fmt_float(v)) == v


def test_parse_grid():
    assert parse_grid("1e3:1e5:10") == (1000, 10000, 100000)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "snextremes", "constants", "--lambda", "1",
                          "--n", "9"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("n,lambda")
