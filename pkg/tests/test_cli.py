import json
import shutil

import pytest

from projlds.cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_VALIDATION, main
from projlds.fixtures import CHECKS
from projlds.lds import import_matrix, verify_fixture


def test_generate_q2_matches_published(tmp_path, published_7x9, capsys):
    out = tmp_path / "c.json"
    assert main(["generate", "--q", "2", "--out", str(out)]) == EXIT_OK
    assert verify_fixture(import_matrix(out), published_7x9)
    assert "L=7 K=9" in capsys.readouterr().out


def test_generate_q3_csv(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["generate", "--q", "3", "--out", str(out), "--format", "csv"]) == EXIT_OK
    rows = [r for r in out.read_text().splitlines() if not r.startswith("#")]
    assert len(rows) == 13 and all(len(r.split(",")) == 15 for r in rows)
    assert all(int(v) in (-1, 0, 1) for r in rows for v in r.split(","))


def test_generate_unsupported_q(tmp_path, capsys):
    assert main(["generate", "--q", "6", "--out", str(tmp_path / "x.json")]) == EXIT_VALIDATION
    assert "not a prime power" in capsys.readouterr().err


def test_analyze_7x9(fixture_dir, tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert main(["analyze", "--matrix", str(fixture_dir / "lds_7x9.json"), "--report-out", str(rep)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "c_max" in out and "1/3" in out
    assert json.loads(rep.read_text())["c_max"]["fraction"] == "1/3"


def test_analyze_13x15_welch(fixture_dir, capsys):
    assert main(["analyze", "--matrix", str(fixture_dir / "lds_13x15.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "225/13" in out
    assert "closed-form TSC differs" in out


def test_analyze_corrupted(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = main(["analyze", "--matrix", str(bad)])
    assert code == EXIT_VALIDATION
    assert code not in (EXIT_OK, EXIT_USAGE)


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        main(["generate", "--bogus"])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == EXIT_USAGE


def _write_cfg(path, **kw):
    path.write_text("".join(f"{k} = {v}\n" for k, v in kw.items()))
    return path


def test_simulate_deterministic(tmp_path):
    cfg = _write_cfg(tmp_path / "s.cfg", matrix="lds:2", detector="pda", channel="awgn",
                     snr_grid_db="2, 6", seed=11, max_trials=600, min_bit_errors=100, block_size=100)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", str(cfg), "--out", str(a)]) == EXIT_OK
    assert main(["simulate", "--config", str(cfg), "--out", str(b), "--workers", "3"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().splitlines()[0].split(",")
    assert header == ["eb_n0_db", "trials", "bit_errors", "ber", "detector", "channel", "matrix_id", "seed"]
    dat = list(tmp_path.glob("a.*.dat"))
    assert len(dat) == 1
    data = [l.split() for l in dat[0].read_text().splitlines() if not l.startswith("#")]
    assert [float(r[0]) for r in data] == [2.0, 6.0]


def test_simulate_ml_guard(tmp_path, capsys):
    cfg = _write_cfg(tmp_path / "s.cfg", matrix="lds:3", detector="ml", snr_grid_db="0")
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o.csv")]) == EXIT_RUNTIME
    assert "use the PDA detector" in capsys.readouterr().err


def test_simulate_config_error(tmp_path, capsys):
    cfg = _write_cfg(tmp_path / "s.cfg", detectr="ml")
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o.csv")]) == EXIT_VALIDATION
    assert "detectr" in capsys.readouterr().err


def test_check_fixtures_list(capsys):
    assert main(["check-fixtures", "--list"]) == EXIT_OK
    assert capsys.readouterr().out.split() == list(CHECKS)


def test_check_fixtures_tampered(tmp_path, fixture_dir, capsys):
    d = tmp_path / "fx"
    shutil.copytree(fixture_dir, d)
    vals = json.loads((d / "published_values.json").read_text())
    vals["trace_q3"][4] = 1
    (d / "published_values.json").write_text(json.dumps(vals))
    rows = json.loads((d / "incidence_7.json").read_text())
    rows["rows"][0][0] = 1
    (d / "incidence_7.json").write_text(json.dumps(rows))
    assert main(["check-fixtures", "--fixtures-dir", str(d)]) == EXIT_CHECK_FAILED
    out = capsys.readouterr().out
    assert "FAIL  trace_table_q3" in out and "Tr(alpha^4)" in out
    assert "FAIL  incidence_I7" in out and "entry (0, 0)" in out
