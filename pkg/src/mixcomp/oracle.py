"""Exhaustive verification of measurement operators on the tensor space.

The oracle enumerates every length-n tuple over the candidate indices,
forms the tensor product state for each, and evaluates the outcome
probability exactly (up to floating point). Unambiguity and non-triviality
are then plain scans over the forbidden or allowed tuple class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .comparison import DEFAULT_CAP, MeasurementOperator, OperatorKind, build_maximal
from .errors import CapExceededError, ShapeError
from .linalg import Tolerances, kron_all, trace_product
from .states import CandidateSet


class TupleKind(str, Enum):
    IDENTICAL = "IDENTICAL"
    DIFFERENT = "DIFFERENT"


@dataclass(frozen=True)
class TupleClass:
    """An n-tuple of candidate indices with its comparison class.

    ``kind`` is IDENTICAL exactly when all indices coincide; DIFFERENT means
    not all identical, repeats allowed. ``pairwise_distinct`` additionally
    flags tuples with no repeats at all. Indices are 0-based.
    """

    indices: tuple[int, ...]
    kind: TupleKind
    pairwise_distinct: bool

    def __post_init__(self):
        if len(self.indices) == 0:
            raise ShapeError("a tuple needs at least one index")
        identical = all(i == self.indices[0] for i in self.indices)
        if (self.kind is TupleKind.IDENTICAL) != identical:
            raise ShapeError(
                f"kind {self.kind.value} inconsistent with indices {self.indices}"
            )
        if self.pairwise_distinct != (len(set(self.indices)) == len(self.indices)):
            raise ShapeError(
                f"pairwise_distinct flag inconsistent with indices {self.indices}"
            )


def classify_tuple(indices: Sequence[int]) -> TupleClass:
    idx = tuple(int(i) for i in indices)
    if not idx:
        raise ShapeError("a tuple needs at least one index")
    identical = all(i == idx[0] for i in idx)
    return TupleClass(
        indices=idx,
        kind=TupleKind.IDENTICAL if identical else TupleKind.DIFFERENT,
        pairwise_distinct=len(set(idx)) == len(idx),
    )


def enumerate_tuples(k: int, n: int, kind: TupleKind | None = None) -> Iterator[TupleClass]:
    """All k**n index tuples in lexicographic order, optionally filtered."""
    if k < 1 or n < 1:
        raise ShapeError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    for combo in itertools.product(range(k), repeat=n):
        t = classify_tuple(combo)
        if kind is None or t.kind is kind:
            yield t


def _tuple_state(cs: CandidateSet, t: TupleClass) -> np.ndarray:
    return kron_all([cs.matrix(i) for i in t.indices])


def outcome_probability(
    m: MeasurementOperator,
    t: TupleClass,
    cs: CandidateSet,
    cap: int = DEFAULT_CAP,
) -> float:
    """Probability of the outcome on the tensor product of the tuple's states.

    Returns the real part of Tr(M rho_t1 x ... x rho_tn); the imaginary part
    vanishes for Hermitian inputs. The value may undershoot 0 or overshoot 1
    by round-off, callers clamp for display.
    """
    if len(t.indices) != m.n:
        raise ShapeError(f"tuple length {len(t.indices)} does not match operator n = {m.n}")
    if cs.dim != m.dim:
        raise ShapeError(f"set dimension {cs.dim} does not match operator dim = {m.dim}")
    if any(not 0 <= i < cs.k for i in t.indices):
        raise ShapeError(f"tuple {t.indices} has indices outside 0..{cs.k - 1}")
    if cs.dim ** m.n > cap:
        raise CapExceededError(cs.dim, m.n, cap)
    return float(trace_product(m.matrix, _tuple_state(cs, t)).real)


class UnambiguityResult(NamedTuple):
    """Scan over the forbidden tuple class: ok iff every probability is tiny."""

    ok: bool
    worst_probability: float
    worst_tuple: tuple[int, ...]


class NontrivialityResult(NamedTuple):
    """Scan over the allowed tuple class: ok iff some probability is positive.

    The best pairwise-distinct tuple is tracked separately; it is None when
    n > k makes repeat-free tuples impossible.
    """

    ok: bool
    best_probability: float
    best_tuple: tuple[int, ...]
    best_distinct_probability: float | None
    best_distinct_tuple: tuple[int, ...] | None


def _check_scan_inputs(m: MeasurementOperator, cs: CandidateSet, n: int, cap: int) -> None:
    if n != m.n:
        raise ShapeError(f"requested n = {n} does not match operator n = {m.n}")
    if cs.dim != m.dim:
        raise ShapeError(f"set dimension {cs.dim} does not match operator dim = {m.dim}")
    if cs.dim ** n > cap:
        raise CapExceededError(cs.dim, n, cap)


def verify_unambiguous(
    m: MeasurementOperator,
    forbidden: TupleKind,
    cs: CandidateSet,
    n: int | None = None,
    cap: int = DEFAULT_CAP,
    tol: Tolerances | None = None,
) -> UnambiguityResult:
    """Certify that the operator never fires on the forbidden tuple class.

    Scans every tuple of the forbidden kind and reports the largest
    probability found with its tuple (lexicographically first among ties).
    """
    t = tol or Tolerances()
    n = m.n if n is None else n
    _check_scan_inputs(m, cs, n, cap)
    forbidden = TupleKind(forbidden)
    worst_p = -np.inf
    worst_t: tuple[int, ...] = ()
    for tup in enumerate_tuples(cs.k, n, forbidden):
        p = outcome_probability(m, tup, cs, cap)
        if p > worst_p:
            worst_p, worst_t = p, tup.indices
    if not worst_t:
        worst_p = 0.0
    return UnambiguityResult(ok=worst_p <= t.prob, worst_probability=float(worst_p),
                             worst_tuple=worst_t)


def verify_nontrivial(
    m: MeasurementOperator,
    allowed: TupleKind,
    cs: CandidateSet,
    n: int | None = None,
    cap: int = DEFAULT_CAP,
    tol: Tolerances | None = None,
) -> NontrivialityResult:
    """Certify that the operator fires on at least one allowed tuple."""
    t = tol or Tolerances()
    n = m.n if n is None else n
    _check_scan_inputs(m, cs, n, cap)
    allowed = TupleKind(allowed)
    best_p = -np.inf
    best_t: tuple[int, ...] = ()
    best_dp: float | None = None
    best_dt: tuple[int, ...] | None = None
    for tup in enumerate_tuples(cs.k, n, allowed):
        p = outcome_probability(m, tup, cs, cap)
        if p > best_p:
            best_p, best_t = p, tup.indices
        if tup.pairwise_distinct and (best_dp is None or p > best_dp):
            best_dp, best_dt = p, tup.indices
    if not best_t:
        best_p = 0.0
    return NontrivialityResult(
        ok=best_p > t.prob,
        best_probability=float(best_p),
        best_tuple=best_t,
        best_distinct_probability=best_dp,
        best_distinct_tuple=best_dt,
    )


def decide_exists(
    cs: CandidateSet,
    n: int,
    which: OperatorKind,
    cap: int = DEFAULT_CAP,
    tol: Tolerances | None = None,
) -> bool:
    """Exact existence decision for a non-trivial operator of the given kind.

    Builds the maximal operator for the class and checks non-triviality on
    the matching tuple class. Correct because every valid operator's support
    lies inside the maximal projector's range.
    """
    t = tol or Tolerances()
    which = OperatorKind(which)
    m = build_maximal(cs, n, which, cap=cap, tol=t)
    allowed = TupleKind.IDENTICAL if which is OperatorKind.M1 else TupleKind.DIFFERENT
    return verify_nontrivial(m, allowed, cs, n, cap=cap, tol=t).ok
