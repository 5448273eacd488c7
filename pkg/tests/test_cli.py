"""Command-line interface: outputs, exit codes, determinism."""

import json

from cmgamma.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_exact_polynomial(self, capsys):
        code, out, _ = run(capsys, "eval", "p", "0")
        assert code == 0 and "p(0) = 450" in out

    def test_q_constant(self, capsys):
        code, out, _ = run(capsys, "eval", "Q", "0")
        assert code == 0 and "1382400" in out

    def test_bound_exact_form(self, capsys):
        code, out, _ = run(capsys, "eval", "B", "1")
        assert code == 0 and "189241/921600" in out

    def test_g_enclosure(self, capsys):
        code, out, _ = run(capsys, "eval", "g", "1", "--prec", "128")
        assert code == 0 and "0.0963546" in out and "+/-" in out

    def test_trigamma(self, capsys):
        code, out, _ = run(capsys, "eval", "psi1", "1", "--prec", "128")
        assert code == 0 and "1.6449340" in out

    def test_polygamma_requires_order(self, capsys):
        code, _, err = run(capsys, "eval", "polygamma", "1")
        assert code == 2 and "order" in err

    def test_polygamma_with_order(self, capsys):
        code, out, _ = run(capsys, "eval", "polygamma", "2", "--order", "3")
        assert code == 0 and "psi^(3)(2)" in out

    def test_h_prints_rational_part(self, capsys):
        code, out, _ = run(capsys, "eval", "H", "1", "--prec", "96")
        assert code == 0 and "rational part" in out

    def test_domain_error_exit_two(self, capsys):
        code, _, err = run(capsys, "eval", "g", "-1")
        assert code == 2 and "error" in err

    def test_unparseable_x(self, capsys):
        code, _, err = run(capsys, "eval", "g", "one")
        assert code == 2

    def test_env_var_precision(self, capsys, monkeypatch):
        monkeypatch.setenv("CMGAMMA_PREC", "96")
        code, out, _ = run(capsys, "eval", "psi1", "1")
        assert code == 0 and "[96-bit target]" in out

    def test_crosscheck_flag(self, capsys):
        code, out, _ = run(capsys, "eval", "psi1", "1", "--prec", "64",
                           "--crosscheck")
        assert code == 0 and "non-certified" in out


class TestIdentityCheck:
    def test_expansion(self, capsys):
        code, out, _ = run(capsys, "identity-check", "expansion")
        assert code == 0 and "equal" in out

    def test_remark2(self, capsys):
        code, out, _ = run(capsys, "identity-check", "remark2")
        assert code == 0

    def test_telescoping(self, capsys):
        code, out, _ = run(capsys, "identity-check", "telescoping",
                           "--x", "1", "--prec", "192")
        assert code == 0 and "overlap" in out

    def test_telescoping_requires_x(self, capsys):
        code, _, err = run(capsys, "identity-check", "telescoping")
        assert code == 2 and "--x" in err

    def test_mutated_constants_fail_exit_one(self, capsys, mutate_constants):
        path = mutate_constants(r"-251/120 1 2", "-131/120 1 2")
        code, out, _ = run(capsys, "identity-check", "expansion",
                           "--constants", str(path))
        assert code == 1 and "UNEQUAL" in out


class TestReplayProof:
    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "replay-proof")
        assert code == 0
        assert "overall: PASS" in out
        assert out.count("[PASS]") == 15

    def test_emit_stdout_deterministic(self, capsys):
        code1, out1, _ = run(capsys, "replay-proof", "--emit", "-")
        code2, out2, _ = run(capsys, "replay-proof", "--emit", "-")
        assert code1 == code2 == 0
        assert out1 == out2
        assert json.loads(out1)["payload"]["overall"] == "pass"

    def test_emit_file(self, capsys, tmp_path):
        target = tmp_path / "cert.json"
        code, out, _ = run(capsys, "replay-proof", "--emit", str(target))
        assert code == 0 and target.exists()
        doc = json.loads(target.read_text())
        assert doc["schema"] == "cmgamma.report/1"

    def test_emit_unwritable_path(self, capsys, tmp_path):
        code, _, err = run(capsys, "replay-proof", "--emit",
                           str(tmp_path / "no" / "such" / "dir" / "c.json"))
        assert code == 2 and "cannot write" in err

    def test_corrupted_constants_exit_one(self, capsys, mutate_constants):
        path = mutate_constants(r"1 435456000", "1 435456001")
        code, out, err = run(capsys, "replay-proof", "--constants", str(path))
        assert code == 1
        assert "FAILED at step" in err

    def test_malformed_constants_exit_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("[poly p]\n0 1 2 3\n")
        code, _, err = run(capsys, "replay-proof", "--constants", str(bad))
        assert code == 2


class TestCmScan:
    def test_single_row(self, capsys):
        code, out, _ = run(capsys, "cm-scan", "g", "--kmax", "0", "--grid", "1")
        assert code == 0 and "result: PASS" in out

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "cm-scan", "g", "--kmax", "1",
                           "--grid", "1,2", "--format", "csv", "--prec", "96")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "k,x,mid,rad,verdict"
        assert len(lines) == 5

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "cm-scan", "H", "--kmax", "0",
                           "--grid", "1", "--format", "json", "--prec", "96")
        assert code == 0
        doc = json.loads(out)
        assert doc["payload"]["summary"]["kind"] == "H"

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "scan.csv"
        code, _, _ = run(capsys, "cm-scan", "g", "--kmax", "0", "--grid", "1",
                         "--format", "csv", "--output", str(target), "--prec", "96")
        assert code == 0
        assert target.read_text().startswith("k,x,mid,rad,verdict")

    def test_geometric_grid_flag(self, capsys):
        code, out, _ = run(capsys, "cm-scan", "g", "--kmax", "0",
                           "--grid", "geometric:1/4:2:3", "--prec", "96")
        assert code == 0

    def test_bad_kind_usage_error(self, capsys):
        code = main(["cm-scan", "nope"])
        capsys.readouterr()
        assert code == 2

    def test_bad_grid_usage_error(self, capsys):
        code, _, err = run(capsys, "cm-scan", "g", "--grid", "geometric:1:2")
        assert code == 2


def test_no_command_is_usage_error(capsys):
    code = main([])
    capsys.readouterr()
    assert code == 2
