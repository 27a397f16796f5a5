import csv
import json

import pytest

from cyclicpf.checks import CheckReport
from cyclicpf.cli import config_params, emit, main, phi_rows


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_series_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["series", "main", "--m", "2", "--n", "1", "--k", "1", "--area-budget", "3",
                 "--labels", "2", "--csv", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["t", "x_partition", "q_coefficient"]
    assert rows[1:] == [["0", "1", "1"], ["1", "1", "0"], ["2", "1", "0"]]


def test_series_csv_higher_t(tmp_path):
    # nabla e1^2 = m2 + (1 + q + t - qt) m11
    out = tmp_path / "s.csv"
    assert main(["series", "main", "--m", "1", "--n", "1", "--k", "2", "--area-budget", "4",
                 "--csv", str(out)]) == 0
    rows = {(r[0], r[1]): r[2] for r in read_csv(out)[1:]}
    assert rows[("0", "2")] == "1" and rows[("1", "2")] == "0"
    assert rows[("0", "1 1")] == "1 + q"
    assert rows[("1", "1 1")] == "1 - q"
    assert rows[("2", "1 1")] == "0"


def test_phi_table(tmp_path):
    header, rows = phi_rows("s", (2, 2))
    assert header == ["word", "coefficient"] and len(rows) == 11
    out = tmp_path / "phi.json"
    assert main(["table", "phi", "--lambda", "2,2", "--json", str(out)]) == 0
    assert len(json.loads(out.read_text())) == 11


def test_macdonald_and_calpha_tables(capsys):
    assert main(["table", "macdonald", "--degree", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "mu,monomial,coefficient,eigenvalue"
    assert "2,2,1,q" in lines
    assert main(["table", "calpha", "--lambda", "1"]) == 0
    assert capsys.readouterr().out.strip().splitlines() == ["alpha,coefficient", "1,1"]


def test_report_emit(tmp_path):
    rep = CheckReport("synthetic", {"m": 1}, verdict="fail", witness={"t": 0, "lhs": "1", "rhs": "2"})
    path = emit("report", [rep], tmp_path / "r.csv")
    rows = read_csv(path)
    assert rows[1][0] == "synthetic" and rows[1][2] == "fail"
    assert json.loads(rows[1][3]) == {"t": 0, "lhs": "1", "rhs": "2"}
    with pytest.raises(ValueError):
        emit("plot", None, tmp_path / "x.csv")


def test_verify_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "calpha", "--m", "2", "--n", "1", "--alpha", "1", "--json", str(out)]) == 0
    assert json.loads(out.read_text())[0]["verdict"] == "pass"
    assert "PASS" in capsys.readouterr().out
    assert main(["verify", "main", "--m", "2", "--n", "1", "--k", "2", "--area-budget", "1"]) == 1
    assert "SKIPPED" in capsys.readouterr().out


def test_unknown_check_rejected():
    with pytest.raises(SystemExit):
        main(["verify", "bogus"])


def test_config_overrides(tmp_path):
    cfg = {"checks": {"counts": {"k": 1}}, "budgets": {"1,1,2": {"k": 2}}}
    assert config_params(cfg, "counts", 1, 1, 2) == {"k": 2}
    assert config_params(cfg, "counts", None, None, None) == {"k": 1}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"checks": {"counts": {"m": 2, "n": 1, "k": 2}}}))
    assert main(["verify", "counts", "--config", str(path)]) == 0


def test_enumerate(tmp_path, capsys):
    out = tmp_path / "cpf.json"
    assert main(["enumerate", "cpf", "--m", "2", "--n", "1", "--area-budget", "1", "--labels", "1", "--json", str(out)]) == 0
    assert [p["north_x"] for p in json.loads(out.read_text())] == [[0], [-1]]
    assert main(["enumerate", "pf", "--m", "1", "--n", "1", "--k", "2"]) == 0
    assert "5 objects" in capsys.readouterr().err
    assert main(["enumerate", "chains", "--m", "1", "--n", "1", "--length", "2", "--area-budget", "1", "--labels", "1"]) == 0


def test_bad_config_is_an_error(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("[1, 2]")
    assert main(["verify", "counts", "--config", str(path)]) == 2
