import json

import numpy as np
import pytest

from mixcomp import io
from mixcomp.cli import analyze_set, format_summary, main
from mixcomp.linalg import Tolerances
from mixcomp.states import demo_set


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_demo(tmp_path, name):
    path = tmp_path / f"{name}.json"
    io.write_candidate_set(demo_set(name), str(path))
    return str(path)


class TestAnalyze:
    def test_eq26_n2_reports_no_m2(self, tmp_path, capsys):
        path = write_demo(tmp_path, "eq26")
        code, out, err = run(capsys, "analyze", path, "--n", "2")
        assert code == 0
        rep = json.loads(out)
        assert rep["existence"] == {"m1": False, "m2": False}
        assert rep["conditions"]["m2_necessary"] is True
        assert "m2_necessary" in err

    def test_eq26_n3_reports_m2_with_quarter_probability(self, tmp_path, capsys):
        path = write_demo(tmp_path, "eq26")
        code, out, _ = run(capsys, "analyze", path, "--n", "3")
        assert code == 0
        rep = json.loads(out)
        assert rep["existence"]["m2"] is True
        maximal = next(op for op in rep["operators"] if op["provenance"] == "M2_maximal")
        assert maximal["best_distinct_probability"] >= 0.25 - 1e-9
        assert maximal["best_distinct_tuple"] == [0, 1, 2]

    def test_out_file_moves_summary_to_stdout(self, tmp_path, capsys):
        path = write_demo(tmp_path, "orth2")
        out_path = tmp_path / "report.json"
        code, out, err = run(capsys, "analyze", path, "--n", "2", "--out", str(out_path))
        assert code == 0
        assert err == ""
        assert "corollary1" in out
        rep = json.loads(out_path.read_text())
        assert rep["conditions"]["corollary1"] is True
        assert rep["povm"]["assembled"] is True
        assert rep["povm"]["alpha"] == 1.0

    def test_malformed_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema_version": 1, "states": "nope"}')
        code, _, err = run(capsys, "analyze", str(bad), "--n", "2")
        assert code == 2
        assert "states" in err

    def test_missing_file_exits_2(self, capsys):
        code, _, _ = run(capsys, "analyze", "/does/not/exist.json", "--n", "2")
        assert code == 2

    def test_cap_exceeded_exits_3(self, tmp_path, capsys):
        path = write_demo(tmp_path, "orth2")
        code, _, err = run(capsys, "analyze", path, "--n", "13")
        assert code == 3
        assert "cap" in err

    def test_n_below_two_exits_2(self, tmp_path, capsys):
        path = write_demo(tmp_path, "orth2")
        code, _, _ = run(capsys, "analyze", path, "--n", "1")
        assert code == 2

    def test_report_fields_echo_inputs(self, tmp_path, capsys):
        path = write_demo(tmp_path, "nested2")
        code, out, _ = run(capsys, "analyze", path, "--n", "2", "--tol", "1e-8")
        rep = json.loads(out)
        assert rep["input"]["k"] == 2
        assert rep["input"]["dim"] == 2
        assert rep["input"]["tolerances"]["rank"] == 1e-8
        assert rep["input"]["tolerances"]["sym"] == 1e-9
        assert rep["reduction"]["survivors"] == [1]


class TestToleranceResolution:
    def test_env_var_used_when_flag_absent(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("MIXCOMP_TOL", "1e-6")
        path = write_demo(tmp_path, "orth2")
        code, out, _ = run(capsys, "analyze", path, "--n", "2")
        assert code == 0
        assert json.loads(out)["input"]["tolerances"]["rank"] == 1e-6

    def test_flag_beats_env_var(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("MIXCOMP_TOL", "not-a-number")
        path = write_demo(tmp_path, "orth2")
        code, out, _ = run(capsys, "analyze", path, "--n", "2", "--tol", "1e-9")
        assert code == 0
        assert json.loads(out)["input"]["tolerances"]["rank"] == 1e-9

    def test_broken_env_var_without_flag_exits_2(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("MIXCOMP_TOL", "not-a-number")
        path = write_demo(tmp_path, "orth2")
        code, _, err = run(capsys, "analyze", path, "--n", "2")
        assert code == 2
        assert "MIXCOMP_TOL" in err

    def test_nonpositive_tol_exits_2(self, tmp_path, capsys):
        path = write_demo(tmp_path, "orth2")
        code, _, _ = run(capsys, "analyze", path, "--n", "2", "--tol", "0")
        assert code == 2


class TestConstruct:
    @pytest.mark.parametrize(
        "name,operator,method,n",
        [
            ("orth2", "m1", "eq13", 2),
            ("orth2", "m1", "maximal", 2),
            ("orth2", "m2", "eq24", 2),
            ("orth2", "m2", "eq27", 2),
            ("eq26", "m2", "eq27", 3),
            ("eq26", "m2", "maximal", 3),
        ],
    )
    def test_builds_and_round_trips(self, tmp_path, capsys, name, operator, method, n):
        path = write_demo(tmp_path, name)
        out_path = tmp_path / "op.json"
        code, _, _ = run(
            capsys, "construct", path, "--n", str(n),
            "--operator", operator, "--method", method, "--out", str(out_path),
        )
        assert code == 0
        op = io.read_operator(str(out_path))
        assert op.n == n
        assert op.is_valid()

    def test_stdout_payload_parses(self, tmp_path, capsys):
        path = write_demo(tmp_path, "orth2")
        code, out, err = run(capsys, "construct", path, "--n", "2", "--operator", "m1", "--method", "eq13")
        assert code == 0
        obj = json.loads(out)
        assert obj["provenance"] == "M1_eq13"
        assert "rank" in err

    def test_operator_method_mismatch_exits_2(self, tmp_path, capsys):
        path = write_demo(tmp_path, "orth2")
        code, _, err = run(capsys, "construct", path, "--n", "2", "--operator", "m1", "--method", "eq27")
        assert code == 2
        assert "eq27" in err

    def test_i0_restricted_to_eq13(self, tmp_path, capsys):
        path = write_demo(tmp_path, "orth2")
        code, _, _ = run(
            capsys, "construct", path, "--n", "2",
            "--operator", "m2", "--method", "eq24", "--i0", "0",
        )
        assert code == 2

    def test_infeasible_construction_exits_2(self, tmp_path, capsys):
        path = write_demo(tmp_path, "eq26")
        code, _, err = run(capsys, "construct", path, "--n", "2", "--operator", "m1", "--method", "eq13")
        assert code == 2
        assert "escape" in err or "exist" in err

    def test_too_short_tuple_exits_2(self, tmp_path, capsys):
        path = write_demo(tmp_path, "eq26")
        code, _, err = run(capsys, "construct", path, "--n", "2", "--operator", "m2", "--method", "eq27")
        assert code == 2
        assert "n >= 3" in err


class TestVerify:
    def test_constructed_operator_passes(self, tmp_path, capsys):
        set_path = write_demo(tmp_path, "eq26")
        op_path = tmp_path / "op.json"
        run(capsys, "construct", set_path, "--n", "3", "--operator", "m2",
            "--method", "eq27", "--out", str(op_path))
        code, out, _ = run(capsys, "verify", str(op_path), set_path)
        assert code == 0
        rep = json.loads(out)
        assert rep["invariants"]["valid"] is True
        assert rep["unambiguous"]["ok"] is True
        assert rep["nontrivial"]["ok"] is True
        assert rep["nontrivial"]["best_probability"] == pytest.approx(0.125)

    def test_tampered_operator_reported_not_crashed(self, tmp_path, capsys):
        set_path = write_demo(tmp_path, "orth2")
        op_path = tmp_path / "op.json"
        run(capsys, "construct", set_path, "--n", "2", "--operator", "m2",
            "--method", "eq24", "--out", str(op_path))
        obj = json.loads(op_path.read_text())
        obj["matrix"] = io.matrix_to_rows(3.0 * np.asarray(io.rows_to_matrix(obj["matrix"], "m")))
        op_path.write_text(json.dumps(obj))
        code, out, _ = run(capsys, "verify", str(op_path), set_path)
        assert code == 0
        rep = json.loads(out)
        assert rep["invariants"]["valid"] is False
        assert rep["invariants"]["above_identity"] == pytest.approx(2.0)

    def test_dimension_mismatch_exits_2(self, tmp_path, capsys):
        orth2 = write_demo(tmp_path, "orth2")
        eq26 = write_demo(tmp_path, "eq26")
        op_path = tmp_path / "op.json"
        run(capsys, "construct", orth2, "--n", "2", "--operator", "m1",
            "--method", "eq13", "--out", str(op_path))
        code, _, _ = run(capsys, "verify", str(op_path), eq26)
        assert code == 2


class TestGen:
    def test_deterministic_output(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        run(capsys, "gen", "--d", "3", "--k", "2", "--ranks", "1,2", "--seed", "5", "--out", str(a))
        run(capsys, "gen", "--d", "3", "--k", "2", "--ranks", "1,2", "--seed", "5", "--out", str(b))
        assert a.read_text() == b.read_text()

    def test_generated_set_analyzes(self, tmp_path, capsys):
        path = tmp_path / "set.json"
        run(capsys, "gen", "--d", "2", "--k", "2", "--ranks", "1,1", "--seed", "3", "--out", str(path))
        code, out, _ = run(capsys, "analyze", str(path), "--n", "2")
        assert code == 0
        assert json.loads(out)["input"]["k"] == 2

    def test_rank_count_must_match_k(self, capsys):
        code, _, err = run(capsys, "gen", "--d", "3", "--k", "2", "--ranks", "1,2,3")
        assert code == 2
        assert "ranks" in err

    def test_rank_out_of_range(self, capsys):
        code, _, _ = run(capsys, "gen", "--d", "2", "--k", "2", "--ranks", "1,3")
        assert code == 2

    def test_non_numeric_ranks(self, capsys):
        code, _, _ = run(capsys, "gen", "--d", "2", "--k", "2", "--ranks", "1,x")
        assert code == 2


class TestDemo:
    def test_eq26_writes_set_and_reports(self, tmp_path, capsys):
        code, out, _ = run(capsys, "demo", "eq26", "--out-dir", str(tmp_path))
        assert code == 0
        n2 = json.loads((tmp_path / "eq26_report_n2.json").read_text())
        n3 = json.loads((tmp_path / "eq26_report_n3.json").read_text())
        assert n2["existence"]["m2"] is False
        assert n3["existence"]["m2"] is True
        assert n2["existence"]["m1"] is False and n3["existence"]["m1"] is False
        cs = io.read_candidate_set(str(tmp_path / "eq26.json"))
        assert cs.k == 3

    def test_orth2_has_both_and_povm(self, tmp_path, capsys):
        code, _, _ = run(capsys, "demo", "orth2", "--out-dir", str(tmp_path))
        assert code == 0
        rep = json.loads((tmp_path / "orth2_report_n2.json").read_text())
        assert rep["existence"] == {"m1": True, "m2": True}
        assert rep["conditions"]["corollary1"] is True
        assert rep["povm"]["assembled"] is True
        assert rep["povm"]["inconclusive_min_eigenvalue"] >= -1e-9

    def test_nested2_m1_only(self, tmp_path, capsys):
        code, _, _ = run(capsys, "demo", "nested2", "--out-dir", str(tmp_path))
        assert code == 0
        rep = json.loads((tmp_path / "nested2_report_n2.json").read_text())
        assert rep["existence"] == {"m1": True, "m2": False}
        assert rep["conditions"]["corollary1"] is False

    def test_unknown_name_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["demo", "wat"])
        assert exc.value.code == 2


class TestRoundTrip:
    def test_rewritten_set_gives_bit_identical_verdicts(self, tmp_path, capsys):
        first = tmp_path / "gen.json"
        run(capsys, "gen", "--d", "3", "--k", "3", "--ranks", "1,2,2", "--seed", "17",
            "--out", str(first))
        cs1 = io.read_candidate_set(str(first))
        second = tmp_path / "rewritten.json"
        io.write_candidate_set(cs1, str(second))
        cs2 = io.read_candidate_set(str(second))
        tol = Tolerances()
        rep1 = analyze_set(cs1, 2, tol, 4096)
        rep2 = analyze_set(cs2, 2, tol, 4096)
        assert rep1 == rep2

    def test_summary_is_pure_function_of_report(self, tmp_path, capsys):
        cs = demo_set("eq26")
        rep = analyze_set(cs, 3, Tolerances(), 4096)
        assert format_summary(rep) == format_summary(json.loads(json.dumps(rep)))
