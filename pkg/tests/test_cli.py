import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from poissonk.cli import main
from poissonk.report import Num, ReportRow, fmt_lambda, fmt_scaled, fmt_value, read_rows, write_rows


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return read_rows(text)


class TestFormatting:
    def test_lambda_digits(self):
        assert fmt_lambda(math.sqrt(3) - 1) == "0.732050807569"

    def test_value_digits(self):
        assert fmt_value(1 / 3) == "0.333333333333333"

    def test_scaled_out_of_range(self):
        text = fmt_scaled(2.0, 1000 * math.log(10))
        mant, exp = text.split("e")
        assert exp == "+1000" and float(mant) == pytest.approx(2.0, rel=1e-12)
        assert fmt_scaled(3.0, -800 * math.log(10)).endswith("e-800")
        assert float(fmt_scaled(0.5, 2.0)) == pytest.approx(0.5 * math.e**2, rel=1e-14)
        assert fmt_scaled(0.0, 5.0) == "0"

    @given(st.floats(1e-300, 1e300))
    def test_value_roundtrip(self, x):
        assert float(fmt_value(x)) == pytest.approx(x, rel=1e-14)

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_rows_roundtrip(self, fmt):
        rows = [
            ReportRow("t", (("k", 3), ("lam", fmt_lambda(0.25)), ("name", "a,b"), ("ok", True))),
            ReportRow("t", (("k", 4), ("lam", fmt_lambda(1.5)), ("name", 'q"x'), ("ok", False))),
        ]
        buf = io.StringIO()
        write_rows(rows, buf, fmt)
        back = read_rows(buf.getvalue())
        assert [r["k"] for r in back] == ([3, 4] if fmt == "json" else ["3", "4"])
        assert [float(r["lam"]) for r in back] == [0.25, 1.5]
        assert [r["name"] for r in back] == ["a,b", 'q"x']

    def test_json_numbers_are_raw(self):
        buf = io.StringIO()
        write_rows([ReportRow("t", (("x", Num("1.500000000000")),))], buf, "json")
        assert buf.getvalue() == '{"x":1.500000000000}\n'


class TestPmf:
    def test_standard_poisson(self, capsys):
        code, out, _ = run(["pmf", "--k", "1", "--lambda", "1", "--n-max", "5"], capsys)
        assert code == 0
        rows = csv_rows(out)
        assert [int(r["n"]) for r in rows] == list(range(6))
        for r in rows:
            n = int(r["n"])
            assert float(r["pmf"]) == pytest.approx(math.exp(-1) / math.factorial(n), rel=1e-14)

    def test_k50_double_mode_histogram(self, capsys):
        code, out, _ = run(["pmf", "--k", "50", "--lambda", "0.10194", "--n-max", "130"], capsys)
        assert code == 0
        h = [float(r["h"]) for r in csv_rows(out)]
        assert h[0] == 1.0
        assert h[113] == pytest.approx(1.0, abs=1e-3)
        assert max(h[1:]) == h[113]

    @pytest.mark.parametrize("lam", ["0", "-1", "nan"])
    def test_bad_lambda_exit_2(self, lam, capsys):
        code, _, err = run(["pmf", "--k", "2", "--lambda", lam], capsys)
        assert code == 2 and "error" in err

    def test_bad_k_exit_2(self, capsys):
        assert run(["pmf", "--k", "0", "--lambda", "1"], capsys)[0] == 2

    def test_usage_error_exit_2(self):
        with pytest.raises(SystemExit) as info:
            main(["pmf", "--lambda", "1"])
        assert info.value.code == 2


class TestDoubleMode:
    def test_k2_to_14(self, capsys):
        code, out, _ = run(["double-mode", "--k-min", "2", "--k-max", "14"], capsys)
        rows = csv_rows(out)
        assert code == 0
        assert [int(r["m_hat"]) for r in rows] == list(range(2, 15))
        assert float(rows[0]["lambda_hat"]) == pytest.approx(0.7320508, abs=1e-7)
        for r in rows:
            assert float(r["mean_minus_m_hat"]) == pytest.approx(float(r["mean"]) - int(r["m_hat"]), abs=1e-11)

    def test_k38_to_41(self, capsys):
        code, out, _ = run(["double-mode", "--k-min", "38", "--k-max", "41", "--format", "json"], capsys)
        rows = csv_rows(out)
        assert [r["m_hat"] for r in rows] == [2 * k - 3 for k in range(38, 42)]

    def test_reversed_range(self, capsys):
        assert run(["double-mode", "--k-min", "5", "--k-max", "4"], capsys)[0] == 2


class TestExcluded:
    @pytest.mark.parametrize(
        "k,expected",
        [("9", "[1,8] [10,14] [19,20]"), ("29", "[1,53] [57,63]"), ("2", "[1,1] [3,3]")],
    )
    def test_examples(self, k, expected, capsys):
        code, out, _ = run(["excluded", "--k", k], capsys)
        assert code == 0
        assert csv_rows(out)[0]["intervals"] == expected

    def test_tables_layout(self, capsys):
        code, out, _ = run(["tables", "--k-min", "2", "--k-max", "4"], capsys)
        rows = csv_rows(out)
        assert code == 0
        assert [r["table"] for r in rows] == ["1", "1", "1"]
        assert rows[0]["interval_1"] == "1" and rows[0]["interval_2"] == "3"
        assert rows[2]["interval_2"] == "[5,6]" and rows[2]["interval_3"] == "9"

    def test_tables_range_guard(self, capsys):
        assert run(["tables", "--k-min", "2", "--k-max", "42"], capsys)[0] == 2


class TestFit:
    def test_power_law_file(self, tmp_path, capsys):
        f = tmp_path / "pts.csv"
        f.write_text("x,y\n" + "".join(f"{x},{2 * x**3}\n" for x in (1, 2, 3, 5, 8)))
        code, out, _ = run(["fit", "--input", str(f), "--model", "powerlaw"], capsys)
        row = csv_rows(out)[0]
        assert code == 0
        assert float(row["b"]) == pytest.approx(3.0, abs=1e-10)
        assert float(row["a"]) == pytest.approx(2.0, rel=1e-10)

    def test_reads_double_mode_output(self, tmp_path, capsys):
        f = tmp_path / "dm.json"
        assert main(["double-mode", "--k-min", "20", "--k-max", "30", "--format", "json", "--out", str(f)]) == 0
        code, out, _ = run(["fit", "--input", str(f), "--model", "linear", "--x", "k", "--y", "mean_minus_m_hat"], capsys)
        assert code == 0
        assert int(csv_rows(out)[0]["n_points"]) == 11

    @pytest.mark.parametrize("body", ["x,y\n1,2\n", "x,y\n1,a\n2,3\n3,4\n", ""])
    def test_malformed_exit_2(self, body, tmp_path, capsys):
        f = tmp_path / "bad.csv"
        f.write_text(body)
        assert run(["fit", "--input", str(f), "--model", "linear"], capsys)[0] == 2

    def test_missing_file_exit_2(self, tmp_path, capsys):
        assert run(["fit", "--input", str(tmp_path / "nope.csv"), "--model", "linear"], capsys)[0] == 2


class TestConjectures:
    def test_k_plus_one_small_k(self, capsys):
        code, out, _ = run(["conjectures", "--k-min", "2", "--k-max", "20", "--samples", "3"], capsys)
        rows = csv_rows(out)
        assert code == 0
        assert all(r["k_plus_one"] == "pass" for r in rows)
        assert all(r["mode_formula"] == "pass" for r in rows)
        assert rows[2]["single_interval"] == "n/a"

    def test_failure_exit_4(self, monkeypatch, capsys):
        import poissonk.cli as cli

        monkeypatch.setattr(cli, "check_k_plus_one", lambda k, report=None: k != 3)
        code, out, err = run(["conjectures", "--k-min", "2", "--k-max", "4", "--samples", "1"], capsys)
        assert code == 4
        assert [r["k_plus_one"] for r in csv_rows(out)] == ["pass", "fail", "pass"]
        assert "k = [3]" in err


class TestOther:
    def test_stats(self, capsys):
        code, out, _ = run(["stats", "--k", "2", "--lambda", "0.7320508075688772"], capsys)
        row = csv_rows(out)[0]
        assert code == 0 and row["modes"] == "0 2"

    def test_root(self, capsys):
        code, out, _ = run(["root", "--k", "2", "--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["root"] == pytest.approx(math.sqrt(3) - 1, abs=1e-12)

    def test_unit_root(self, capsys):
        code, out, _ = run(["root", "--k", "50", "--n", "113"], capsys)
        assert code == 0 and float(csv_rows(out)[0]["root"]) == pytest.approx(0.10194, abs=1e-5)

    def test_breakpoints(self, capsys):
        code, out, _ = run(["breakpoints", "--k", "1", "--lambda-max", "3.5"], capsys)
        rows = csv_rows(out)
        assert [float(r["lambda"]) for r in rows] == pytest.approx([1.0, 2.0, 3.0], abs=1e-12)
        assert [r["tie_set"] for r in rows] == ["0 1", "1 2", "2 3"]

    def test_multimodal(self, capsys):
        code, out, _ = run(["multimodal", "--k", "2", "--lambda-max", "2"], capsys)
        assert code == 0 and out == ""

    @pytest.mark.parametrize("fig", ["2", "3", "4", "5"])
    def test_figures(self, fig, capsys):
        code, out, _ = run(["figure", "--id", fig, "--k-min", "2", "--k-max", "6"], capsys)
        assert code == 0 and len(csv_rows(out)) == 5

    def test_figure1(self, capsys):
        code, out, _ = run(["figure", "--id", "1", "--n-max", "130"], capsys)
        h = [float(r["h"]) for r in csv_rows(out)]
        assert code == 0 and len(h) == 131
        assert h[98] == pytest.approx(0.9835, abs=5e-4)


def test_deterministic_output(tmp_path):
    cmd = [sys.executable, "-m", "poissonk", "excluded", "--k", "12", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
