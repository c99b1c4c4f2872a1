import csv
import io
import subprocess
import sys

import pytest

from cliquedensity.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def wg_file(tmp_path):
    p = tmp_path / "g.wg"
    code, _, _ = call("extremal", "--gamma", "0.28", "--out", str(p))
    assert code == 0
    return p


def test_bound():
    code, out, _ = call("bound", "--r", "3", "--gamma", "0.28")
    assert code == 0
    assert "value 0.0145185185185185" in out
    assert "s 2" in out and "alpha 0.4" in out


def test_bound_exact_and_alias():
    code, out, _ = call("bound", "--r", "4", "--gamma", "3/8", "--exact")
    assert code == 0 and "value 1/256" in out and "alias 3 0" in out


def test_bound_inverse_and_ls():
    out = call("bound-inverse", "--r", "3", "--y", "1/27")[1]
    assert float(out.split()[1]) == pytest.approx(1 / 3, abs=1e-12)
    code, out, _ = call("ls-bound", "--r", "3", "--gamma", "3/8")
    assert code == 0 and "value 1/16" in out and "clique_bound 1/16" in out


def test_domain_error_exit_2():
    code, _, err = call("bound", "--r", "3", "--gamma", "0.5")
    assert code == 2 and "error" in err


def test_unknown_subcommand():
    assert call("frobnicate")[0] == 2
    assert call()[0] == 2
    assert call("bound", "--r", "3")[0] == 2


def test_limit_exit_3():
    assert call("oracle", "--n", "9", "--m", "10", "--r", "3")[0] == 3
    assert call("check-identities", "--r", "9")[0] == 3


def test_check_identities_exhaustive():
    code, out, _ = call("check-identities", "--r", "3", "--mode", "exhaustive01")
    assert code == 0 and out.count("pass") == 2


def test_check_identities_on_graph(wg_file, tmp_path):
    code, out, _ = call("check-identities", "--r", "3", "--in", str(wg_file))
    assert code == 0 and "second_step" in out
    csv_path = tmp_path / "local.csv"
    assert call("check-identities", "--r", "3", "--mode", "random_fractional", "--samples", "1000",
                "--csv", str(csv_path))[0] == 0
    assert csv_path.read_text().splitlines()[0] == "claim,interval,status,worst_slack,witness"


def test_eval_and_deficit(wg_file, tmp_path):
    csv_path = tmp_path / "eval.csv"
    code, out, _ = call("eval", "--in", str(wg_file), "--csv", str(csv_path))
    assert code == 0 and "K 2 0.28" in out
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["rho", "density"] and len(rows) == 4
    code, out, _ = call("deficit", "--in", str(wg_file), "--r", "3")
    assert code == 0 and "deficit" in out


def test_bad_input_file(tmp_path):
    p = tmp_path / "bad.wg"
    p.write_text("wg 1\n2\n0.5 0.6\n1\n")
    assert call("eval", "--in", str(p))[0] == 2
    assert call("eval", "--in", str(tmp_path / "missing.wg"))[0] == 2


def test_verify_analytic(tmp_path):
    p = tmp_path / "a.csv"
    code, out, _ = call("verify-analytic", "--r", "3", "--s", "3", "--m", "1", "--grid", "21", "--csv", str(p))
    assert code == 0
    assert p.read_text() == out
    assert call("verify-analytic", "--r", "4", "--s", "4", "--m", "1.5")[0] == 2


def test_extremal_blowup_and_count(tmp_path):
    p = tmp_path / "b.sg"
    assert call("extremal", "--gamma", "1/3", "--blowup", "12", "--out", str(p))[0] == 0
    code, out, _ = call("count", "--in", str(p), "--r", "3")
    assert code == 0 and out.strip() == "count 64"


def test_oracle_cell():
    code, out, _ = call("oracle", "--n", "5", "--m", "7", "--r", "3")
    assert code == 0 and "minimum 2" in out and "sg 1" in out


def test_oracle_sweep_csv(tmp_path):
    p = tmp_path / "s.csv"
    code, _, _ = call("oracle-sweep", "--n", "5", "--r", "3", "--csv", str(p), "--workers", "1")
    assert code == 0
    rows = list(csv.reader(p.open()))
    assert rows[0] == ["n", "m", "r", "minimum", "bound", "slack"]
    assert len(rows) == 12 and rows[8][3] == "2"


def test_optimize_and_stationarity(tmp_path):
    trace, final = tmp_path / "t.csv", tmp_path / "f.wg"
    code, out, _ = call("optimize", "--n", "3", "--r", "3", "--gamma", "0.3", "--steps", "5000",
                        "--csv", str(trace), "--out", str(final))
    assert code == 0 and "m_stat" in out and "converged" in out
    assert trace.read_text().splitlines()[0] == "step,gamma,deficit"
    code, out, _ = call("stationarity", "--in", str(final), "--r", "3", "--chain")
    assert code == 0 and "chain" in out


def test_stationarity_rejects_random(tmp_path):
    p = tmp_path / "r.wg"
    p.write_text("wg 1\n3\n0.2 0.3 0.5\n0.4 0.9\n0.7\n")
    assert call("stationarity", "--in", str(p), "--r", "3")[0] == 0
    assert call("stationarity", "--in", str(p), "--r", "3", "--chain")[0] == 2


def test_byte_identical_output():
    argv = ["oracle-sweep", "--n", "5", "--r", "3", "--workers", "1"]
    assert call(*argv)[1] == call(*argv)[1]
    argv = ["optimize", "--n", "4", "--r", "3", "--steps", "300", "--seed", "3"]
    assert call(*argv)[1] == call(*argv)[1]


def test_digits_flag():
    out = call("bound", "--r", "3", "--gamma", "0.28", "--digits", "4")[1]
    assert "value 0.01452" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cliquedensity", "bound", "--r", "3", "--gamma", "0.28"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("value")
