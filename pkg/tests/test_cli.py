import json
import subprocess
import sys

import pytest

from wres6 import report as report_mod
from wres6.cli import CliError, main, parse_specialization


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_verify_interior_passes(capsys):
    code, out = run_cli(["verify", "interior"], capsys)
    assert code == 0
    assert "status: pass" in out


def test_verify_boundary_passes(capsys):
    code, out = run_cli(["verify", "boundary"], capsys)
    assert code == 0
    assert "total: 0 (expected 0) -> match" in out


def test_verify_all_passes(capsys):
    code, out = run_cli(["verify", "all", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "pass"
    assert rep["interior"] and rep["boundary"]


def test_reports_are_byte_identical(capsys):
    _, out1 = run_cli(["verify", "all", "--format", "json"], capsys)
    _, out2 = run_cli(["verify", "all", "--format", "json"], capsys)
    assert out1.encode() == out2.encode()


def test_report_round_trip(capsys):
    _, out = run_cli(["verify", "interior", "--format", "json"], capsys)
    rep = report_mod.from_json(out)
    assert report_mod.to_json(rep) == out


def test_specialize_flat_case(capsys):
    code, out = run_cli(["verify", "interior", "--specialize", "f=1,h=1",
                         "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "pass"
    th = rep["interior"]["theorem"]
    assert th["verdict"] == "match"
    assert th["computed"] == "-(4/3)*s*pi^3"


def test_specialize_flat_case_text_shows_density(capsys):
    code, out = run_cli(["verify", "interior", "--specialize", "f=1,h=1"], capsys)
    assert code == 0
    assert "status: pass" in out
    assert "-(4/3)*s*pi^3" in out


def test_specialize_constant_product(capsys):
    # h := f^-1 makes every ledgered interior diff vanish: clean pass
    code, out = run_cli(["verify", "interior", "--specialize", "fh=1",
                         "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert all(r["verdict"] == "match" for r in rep["interior"]["terms"])
    assert rep["interior"]["theorem"]["verdict"] == "match"


def test_specialize_powers_runs_end_to_end(capsys):
    code, out = run_cli(["verify", "boundary", "--specialize", "f=u^3,h=u^-2",
                         "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "pass"


def test_specialize_rational_exponent_rejected(capsys):
    code = main(["verify", "interior", "--specialize", "f=u^-7/2,h=u^1"])
    assert code == 2


def test_specialize_unknown_text_rejected(capsys):
    code = main(["verify", "interior", "--specialize", "g=2"])
    assert code == 2


def test_unknown_flag_exits_2(capsys):
    code = main(["verify", "interior", "--nonsense"])
    assert code == 2


def test_case_filter(capsys):
    code, out = run_cli(["verify", "boundary", "--case", "b",
                         "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert [r["case"] for r in rep["boundary"]["cases"]] == ["b"]
    assert "total" not in rep["boundary"]


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, _ = run_cli(["verify", "boundary", "--case", "a1",
                       "--format", "json", "--out", str(target)], capsys)
    assert code == 0
    rep = json.loads(target.read_text())
    assert rep["schema"] == "wres-report/1"


def test_malformed_ledger_exits_2(tmp_path, capsys):
    bad = tmp_path / "ledger.json"
    bad.write_text("{not json")
    code = main(["verify", "interior", "--ledger", str(bad)])
    assert code == 2
    bad.write_text(json.dumps({"location": "x"}))
    code = main(["verify", "interior", "--ledger", str(bad)])
    assert code == 2


def test_empty_ledger_turns_diffs_into_failures(tmp_path, capsys):
    empty = tmp_path / "ledger.json"
    empty.write_text("[]")
    code, out = run_cli(["verify", "interior", "--ledger", str(empty),
                         "--format", "json"], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["status"] == "fail"
    verdicts = {r["index"]: r["verdict"] for r in rep["interior"]["terms"]}
    assert verdicts[8] == "diff"


def test_dump_symbols_qinv(capsys):
    code, out = run_cli(["dump", "symbols", "--operator", "Qinv",
                         "--order", "-2"], capsys)
    assert code == 0
    assert out.strip() == "order=-2 | f^-2*h^-2 | xi=|xi|^-2 | cliff=1"


def test_dump_symbols_q_symbolic_atoms(capsys):
    code, out = run_cli(["dump", "symbols", "--operator", "Q",
                         "--order", "1"], capsys)
    assert code == 0
    assert "Gam[" in out and "sig[" in out and "cliff=c[" in out


def test_dump_symbols_boundary_context(capsys):
    code, out = run_cli(["dump", "symbols", "--operator", "Qinv",
                         "--order", "-3", "--context", "boundary"], capsys)
    assert code == 0
    assert "wp" in out


def test_dump_term_table_json(capsys):
    code, out = run_cli(["dump", "term-table", "--format", "json"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 21
    assert {r["verdict"] for r in rows} == {"match", "diff (ledgered)"}


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wres6.cli",
                           "verify", "boundary", "--case", "a1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_parse_specialization_function_values():
    spec = parse_specialization("fh=1")
    from wres6.scalars import ScalarExpr, f_pow
    assert spec(("h", ())) == f_pow(-1)
    assert spec(("f", ())) == ScalarExpr.atom(("f", ()))
    with pytest.raises(CliError):
        parse_specialization("f=u^0.5,h=u^1")
