"""JSON schemas for candidate sets, operators, and reports.

Complex numbers are [re, im] pairs of decimal numbers, matrices are lists
of rows. Floats go through Python's repr, which is the shortest decimal
that round-trips, so a written set re-reads to bit-identical matrices.
"""

from __future__ import annotations

import json
import sys
from typing import Any

import numpy as np

from .comparison import MeasurementOperator, OperatorKind, Provenance
from .errors import InputError
from .states import CandidateSet, DensityMatrix, candidate_set, from_ensemble

SCHEMA_VERSION = 1


def complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def pair_to_complex(entry: Any, context: str) -> complex:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        raise InputError(f"{context}: expected a [re, im] number pair, got {entry!r}")
    return complex(float(entry[0]), float(entry[1]))


def matrix_to_rows(a: np.ndarray) -> list[list[list[float]]]:
    return [[complex_to_pair(z) for z in row] for row in np.asarray(a)]


def rows_to_matrix(rows: Any, context: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise InputError(f"{context}: matrix must be a non-empty list of rows")
    width = None
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list):
            raise InputError(f"{context}: row {r} is not a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputError(
                f"{context}: row {r} has {len(row)} entries, expected {width}"
            )
        out.append([pair_to_complex(e, f"{context}, row {r}") for e in row])
    return np.asarray(out, dtype=np.complex128)


def vector_to_entries(v: np.ndarray) -> list[list[float]]:
    return [complex_to_pair(z) for z in np.asarray(v).reshape(-1)]


def entries_to_vector(entries: Any, context: str) -> np.ndarray:
    if not isinstance(entries, list) or not entries:
        raise InputError(f"{context}: vector must be a non-empty list of [re, im] pairs")
    return np.asarray(
        [pair_to_complex(e, context) for e in entries], dtype=np.complex128
    )


def _require_version(obj: Any, context: str) -> None:
    if not isinstance(obj, dict):
        raise InputError(f"{context}: top level must be a JSON object")
    v = obj.get("schema_version")
    if v != SCHEMA_VERSION:
        raise InputError(
            f"{context}: schema_version {v!r} is not supported (expected {SCHEMA_VERSION})"
        )


def candidate_set_to_obj(cs: CandidateSet) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": cs.dim,
        "states": [
            {"label": lbl, "matrix": matrix_to_rows(st.matrix)}
            for lbl, st in zip(cs.labels, cs.states)
        ],
    }


def candidate_set_from_obj(obj: Any) -> CandidateSet:
    """Parse a candidate-set object; messages name the offending state label."""
    _require_version(obj, "candidate set")
    entries = obj.get("states")
    if not isinstance(entries, list) or len(entries) < 2:
        raise InputError("candidate set: 'states' must be a list of at least 2 entries")
    dim = obj.get("dim")
    labels = []
    states = []
    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise InputError(f"candidate set: state #{pos} is not an object")
        label = entry.get("label")
        if not isinstance(label, str) or not label:
            raise InputError(f"candidate set: state #{pos} needs a non-empty string label")
        try:
            if "matrix" in entry:
                m = rows_to_matrix(entry["matrix"], "matrix")
                state = DensityMatrix(m)
            elif "ensemble" in entry:
                ens = entry["ensemble"]
                if not isinstance(ens, dict):
                    raise InputError("'ensemble' must be an object")
                weights = ens.get("weights")
                vectors = ens.get("vectors")
                if not isinstance(weights, list) or not isinstance(vectors, list):
                    raise InputError("ensemble needs 'weights' and 'vectors' lists")
                vs = [
                    entries_to_vector(v, f"vector {i}") for i, v in enumerate(vectors)
                ]
                state = from_ensemble(weights, vs)
            else:
                raise InputError("needs either a 'matrix' or an 'ensemble'")
        except Exception as exc:
            raise InputError(f"state '{label}': {exc}") from exc
        if isinstance(dim, int) and state.dim != dim:
            raise InputError(
                f"state '{label}' has dimension {state.dim}, file declares dim {dim}"
            )
        labels.append(label)
        states.append(state)
    try:
        return candidate_set(states, labels)
    except Exception as exc:
        raise InputError(f"candidate set: {exc}") from exc


def operator_to_obj(m: MeasurementOperator) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": m.kind.value,
        "n": m.n,
        "dim": m.dim,
        "provenance": m.provenance.value,
        "matrix": matrix_to_rows(m.matrix),
    }


def operator_from_obj(obj: Any) -> MeasurementOperator:
    _require_version(obj, "operator file")
    try:
        kind = OperatorKind(obj.get("kind"))
    except ValueError:
        raise InputError(
            f"operator file: 'kind' must be 'M1' or 'M2', got {obj.get('kind')!r}"
        ) from None
    try:
        prov = Provenance(obj.get("provenance"))
    except ValueError:
        raise InputError(
            f"operator file: unknown provenance {obj.get('provenance')!r}, expected "
            f"one of {[p.value for p in Provenance]}"
        ) from None
    if prov in (Provenance.M1_EQ13, Provenance.M1_MAXIMAL):
        prov_kind = OperatorKind.M1
    else:
        prov_kind = OperatorKind.M2
    if prov_kind is not kind:
        raise InputError(
            f"operator file: provenance {prov.value} is a {prov_kind.value} "
            f"construction but kind says {kind.value}"
        )
    n = obj.get("n")
    dim = obj.get("dim")
    if not isinstance(n, int) or n < 1:
        raise InputError(f"operator file: 'n' must be a positive integer, got {n!r}")
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"operator file: 'dim' must be a positive integer, got {dim!r}")
    matrix = rows_to_matrix(obj.get("matrix"), "operator matrix")
    try:
        return MeasurementOperator(n=n, dim=dim, matrix=matrix, provenance=prov)
    except Exception as exc:
        raise InputError(f"operator file: {exc}") from exc


def load_json(path: str, context: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{context}: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{context}: {path} is not valid JSON: {exc}") from exc


def dump_json(obj: Any, path: str | None) -> None:
    """Write to the path, or to stdout when the path is None."""
    text = json.dumps(obj, indent=2)
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def read_candidate_set(path: str) -> CandidateSet:
    return candidate_set_from_obj(load_json(path, "candidate set"))


def write_candidate_set(cs: CandidateSet, path: str | None) -> None:
    dump_json(candidate_set_to_obj(cs), path)


def read_operator(path: str) -> MeasurementOperator:
    return operator_from_obj(load_json(path, "operator file"))


def write_operator(m: MeasurementOperator, path: str | None) -> None:
    dump_json(operator_to_obj(m), path)
