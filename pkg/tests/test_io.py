import json

import numpy as np
import pytest

from mixcomp import io
from mixcomp.comparison import OperatorKind, Provenance, build_m2_pair
from mixcomp.errors import InputError
from mixcomp.states import demo_set, random_density, candidate_set


class TestComplexEncoding:
    def test_pair_round_trip(self):
        z = complex(0.1, -2.5)
        assert io.pair_to_complex(io.complex_to_pair(z), "x") == z

    @pytest.mark.parametrize("bad", [[1.0], [1.0, 2.0, 3.0], "ab", [True, 0.0], None, [1.0, "x"]])
    def test_bad_pairs_rejected(self, bad):
        with pytest.raises(InputError):
            io.pair_to_complex(bad, "x")

    def test_matrix_round_trip_is_exact(self):
        m = random_density(3, 2, 99).matrix
        back = io.rows_to_matrix(io.matrix_to_rows(m), "m")
        assert np.array_equal(m, back)

    def test_ragged_matrix_rejected(self):
        rows = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0]]]
        with pytest.raises(InputError) as err:
            io.rows_to_matrix(rows, "m")
        assert "row 1" in str(err.value)


class TestCandidateSetSchema:
    def test_round_trip_demo_set(self):
        cs = demo_set("eq26")
        back = io.candidate_set_from_obj(io.candidate_set_to_obj(cs))
        assert back.labels == cs.labels
        for i in range(cs.k):
            assert np.array_equal(back.matrix(i), cs.matrix(i))

    def test_ensemble_form_parses(self):
        obj = {
            "schema_version": 1,
            "dim": 2,
            "states": [
                {"label": "a", "ensemble": {"weights": [1.0], "vectors": [[[1.0, 0.0], [0.0, 0.0]]]}},
                {"label": "b", "matrix": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]},
            ],
        }
        cs = io.candidate_set_from_obj(obj)
        assert np.array_equal(cs.matrix(0), np.diag([1.0, 0.0]))
        assert np.array_equal(cs.matrix(1), np.diag([0.0, 1.0]))

    def test_wrong_schema_version(self):
        with pytest.raises(InputError) as err:
            io.candidate_set_from_obj({"schema_version": 2, "states": []})
        assert "schema_version" in str(err.value)

    def test_error_names_offending_label(self):
        obj = {
            "schema_version": 1,
            "states": [
                {"label": "good", "matrix": [[[1.0, 0.0]]]},
                {"label": "crooked", "matrix": [[[0.5, 0.0], [0.3, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]},
            ],
        }
        with pytest.raises(InputError) as err:
            io.candidate_set_from_obj(obj)
        assert "crooked" in str(err.value)

    def test_declared_dim_must_match(self):
        obj = {
            "schema_version": 1,
            "dim": 3,
            "states": [
                {"label": "a", "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]},
                {"label": "b", "matrix": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]},
            ],
        }
        with pytest.raises(InputError) as err:
            io.candidate_set_from_obj(obj)
        assert "dim" in str(err.value)

    def test_state_without_payload_rejected(self):
        obj = {"schema_version": 1, "states": [{"label": "a"}, {"label": "b"}]}
        with pytest.raises(InputError) as err:
            io.candidate_set_from_obj(obj)
        assert "'a'" in str(err.value)


class TestOperatorSchema:
    def test_round_trip(self):
        op = build_m2_pair(demo_set("orth2"), 2)
        back = io.operator_from_obj(io.operator_to_obj(op))
        assert back.n == op.n and back.dim == op.dim
        assert back.provenance is op.provenance
        assert np.array_equal(back.matrix, op.matrix)
        assert back.kind is OperatorKind.M2

    def test_kind_provenance_mismatch_rejected(self):
        op = build_m2_pair(demo_set("orth2"), 2)
        obj = io.operator_to_obj(op)
        obj["kind"] = "M1"
        with pytest.raises(InputError) as err:
            io.operator_from_obj(obj)
        assert "provenance" in str(err.value)

    def test_unknown_provenance_rejected(self):
        op = build_m2_pair(demo_set("orth2"), 2)
        obj = io.operator_to_obj(op)
        obj["provenance"] = "homemade"
        with pytest.raises(InputError):
            io.operator_from_obj(obj)

    def test_wrong_matrix_size_rejected(self):
        obj = {
            "schema_version": 1,
            "kind": "M1",
            "n": 2,
            "dim": 2,
            "provenance": "M1_maximal",
            "matrix": io.matrix_to_rows(np.eye(3)),
        }
        with pytest.raises(InputError):
            io.operator_from_obj(obj)


class TestFileHelpers:
    def test_json_files_round_trip(self, tmp_path):
        cs = candidate_set([random_density(2, 1, 1), random_density(2, 2, 2)])
        path = tmp_path / "set.json"
        io.write_candidate_set(cs, str(path))
        again = io.read_candidate_set(str(path))
        for i in range(2):
            assert np.array_equal(again.matrix(i), cs.matrix(i))

    def test_unreadable_path(self):
        with pytest.raises(InputError):
            io.read_candidate_set("/nonexistent/set.json")

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "junk.json"
        p.write_text("{not json")
        with pytest.raises(InputError) as err:
            io.read_candidate_set(str(p))
        assert "JSON" in str(err.value)

    def test_dump_to_stdout(self, capsys):
        io.dump_json({"x": 1}, None)
        out = capsys.readouterr().out
        assert json.loads(out) == {"x": 1}
