import json
from fractions import Fraction

import pytest

from besseldiff import cli, serialize
from besseldiff.bounds import TableRow
from besseldiff.cli import UsageError, main, parse_complex, parse_exact, parse_range
from besseldiff.exact import ExactComplexRational
from besseldiff.numerics import NumericContext
from besseldiff.roots import certify


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_exact():
    assert parse_exact("0.5") == Fraction(1, 2)
    assert parse_exact("-3/8") == Fraction(-3, 8)
    assert parse_exact(".25") == Fraction(1, 4)
    for bad in ("1e-3", "2E5", "abc", "1/0.5", ""):
        with pytest.raises(UsageError):
            parse_exact(bad)


def test_parse_complex_and_range():
    assert parse_complex("0.25,-0.5") == ExactComplexRational(Fraction(1, 4), Fraction(-1, 2))
    assert parse_complex("1/3") == Fraction(1, 3)
    with pytest.raises(UsageError):
        parse_complex("1,2,3")
    assert parse_range("7") == (7, 7)
    assert parse_range("13..18") == (13, 18)
    for bad in ("0", "5..3", "a..b", "1-4"):
        with pytest.raises(UsageError):
            parse_range(bad)


def test_zeros_order_one(capsys):
    code, out, _ = run(capsys, "zeros", "--n", "1")
    assert code == 0
    d = json.loads(out)
    assert [float(v) for v in d["alphas"][0]] == [-1.0, 0.0]
    assert d["certification"]["passed"]


def test_zeros_order_two(capsys):
    code, out, _ = run(capsys, "zeros", "--n", "2", "--bits", "128")
    assert code == 0
    d = json.loads(out)
    assert len(d["alphas"]) == 2
    assert d["alphas"][0][1] == "-" + d["alphas"][1][1]
    assert all(m.startswith("0.57735") for m in d["moduli"])
    assert all(len(m.replace("0.", "", 1)) <= 128 // 3 for m in d["moduli"])


@pytest.mark.parametrize("argv", [["zeros", "--n", "0"], ["zeros", "--n", "x"], ["zeros", "--n", "3", "--bits", "32"],
                                  ["verify", "prop2", "--n", "14"], ["verify", "thm1", "--n", "5"],
                                  ["table", "--n", "5..8", "--mode", "fixed", "--x", "0.5"],
                                  ["table", "--n", "13..14", "--zfrac", "1e-1"],
                                  ["apply", "--n", "1", "--z", "0.5"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_unknown_target_is_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "nonsense", "--n", "3"])
    assert e.value.code == 2


def test_zero_set_round_trip(capsys):
    _, out, _ = run(capsys, "zeros", "--n", "6")
    d = json.loads(out)
    zs = serialize.zeroset_from_dict(d)
    assert zs.n == 6 and zs.precision_bits == 256
    assert certify(zs).passed
    assert serialize.zeroset_to_dict(zs, certify(zs))["alphas"] == d["alphas"]


def test_stencil_command(capsys):
    code, out, _ = run(capsys, "stencil", "--n", "1")
    d = json.loads(out)
    assert code == 0 and d["passed"]
    assert float(d["a_nodes"][0][0]) == 1.5 and float(d["b_nodes"][0][0]) == 0.5


def test_apply_builtin(capsys):
    code, out, _ = run(capsys, "apply", "--n", "1", "--z", "0.5", "--builtin", "g")
    assert code == 0
    d = json.loads(out)
    assert d["approximation"][0].startswith("2.6666666666")
    assert float(d["reference"][0]) == 2.0
    assert d["remainder"][0].startswith("-0.666666666")


def test_apply_series_degree_six(tmp_path, capsys):
    path = tmp_path / "poly6.json"
    path.write_text(json.dumps(["1", "-0.5", "0.25", "1/3", ["0.1", "-0.2"], "0", "0.75"]))
    code, out, _ = run(capsys, "apply", "--n", "3", "--z", "0.25", "--series", str(path))
    assert code == 0
    d = json.loads(out)
    assert d["identically_zero"] is True
    assert float(d["remainder"][0]) == 0 and float(d["remainder"][1]) == 0
    assert abs(float(d["consistency_error"])) < 1e-60


def test_apply_long_series(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(["0"] + ["1"] * 80))
    code, out, _ = run(capsys, "apply", "--n", "2", "--z", "0.2,0.1", "--series", str(path))
    d = json.loads(out)
    assert code == 0 and d["identically_zero"] is False


@pytest.mark.parametrize("content", ["not json", "[]", "{\"a\": 1}", "[1, 2]", "[\"1e-3\"]", "[[\"1\"]]"])
def test_malformed_series(tmp_path, capsys, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, _ = run(capsys, "apply", "--n", "3", "--z", "0.25", "--series", str(path))
    assert code == 2


def test_missing_series_file(capsys, tmp_path):
    code, _, _ = run(capsys, "apply", "--n", "3", "--z", "0.25", "--series", str(tmp_path / "absent.json"))
    assert code == 2


def test_verify_prop1(capsys):
    code, out, err = run(capsys, "verify", "prop1", "--n", "20")
    assert code == 0
    d = json.loads(out)
    assert d["passed"] and len(d["exact_checks"]) == 2
    assert "m - A_m^n = 0 for 1 <= m <= 40" in err
    assert "PASS" in err


def test_verify_summary_to_stdout_with_out(tmp_path, capsys):
    path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "verify", "powersums", "--n", "1..5", "--out", str(path))
    assert code == 0
    assert "verify powersums: PASS" in out
    assert json.loads(path.read_text())["passed"]


def test_verify_identity(capsys):
    code, out, _ = run(capsys, "verify", "identity", "--n", "8", "--samples", "25")
    assert code == 0
    assert "25/25" in json.loads(out)["exact_checks"][0]["detail"]


def test_verify_thm1_and_round_trip(capsys):
    code, out, _ = run(capsys, "verify", "thm1", "--n", "14", "--x", "0.5")
    assert code == 0
    d = json.loads(out)
    assert {r["inequality"] for r in d["bound_reports"]} == {"THM1_9", "THM1_10"}
    ctx = NumericContext(d["precision_bits"])
    for item in d["bound_reports"]:
        r = serialize.bound_report_from_dict(item, ctx)
        assert r.verdict
        assert serialize.bound_report_to_dict(r, ctx) == item


@pytest.mark.parametrize("argv", [["verify", "lemma", "--n", "14"], ["verify", "prop2", "--n", "14", "--x", "1/2"],
                                  ["verify", "cor13", "--n", "14", "--x", "0.5"]])
def test_verify_other_targets(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and json.loads(out)["passed"]


def test_failing_check_exits_one(capsys, monkeypatch):
    monkeypatch.setattr(cli, "verify_prop1", lambda n: [cli._exact_check("prop1_exactness", n, False, "forced")])
    code, _, err = run(capsys, "verify", "prop1", "--n", "3")
    assert code == 1 and "FAIL" in err


def test_table_csv_and_json_agree(capsys):
    code, csv_text, _ = run(capsys, "table", "--n", "13..18", "--mode", "xn", "--zfrac", "0.9", "--format", "csv")
    assert code == 0
    lines = csv_text.strip().splitlines()
    assert lines[0] == ",".join(TableRow.FIELDS)
    assert len(lines) == 7
    code, json_text, _ = run(capsys, "table", "--n", "13..18", "--mode", "xn", "--zfrac", "0.9")
    ctx = NumericContext(256)
    from_csv = serialize.table_from_csv(csv_text, ctx)
    from_json = serialize.table_from_dicts(json.loads(json_text)["rows"], ctx)
    assert from_csv == from_json
    assert all(r.ratio9 <= 1 and r.ratio10 <= 1 for r in from_csv)
    assert serialize.table_to_csv(from_csv, ctx) == csv_text


def test_deterministic_output(capsys):
    outs = [run(capsys, "verify", "prop2", "--n", "14", "--x", "0.3")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, "zeros", "--n", "9", "--bits", "200")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "besseldiff", "zeros", "--n", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 1
