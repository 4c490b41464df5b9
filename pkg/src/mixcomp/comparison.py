"""Feasibility conditions and measurement constructions for state comparison.

Everything here works on supports. The condition checkers ask, for each
candidate, whether its support escapes the span of the others and vice
versa; the constructors turn witnesses of those conditions into explicit
projective operators on the n-fold tensor space; the maximal constructors
build the largest operator compatible with an unambiguity constraint, which
turns existence questions into rank checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    CapExceededError,
    ConditionNotMetError,
    InternalCheckError,
    ShapeError,
    TupleTooShortError,
)
from .linalg import (
    Tolerances,
    _mgs_extend,
    dagger,
    herm_residual,
    identity,
    kron_all,
    min_eigenvalue,
    numerical_rank,
)
from .states import CandidateSet
from .subspace import Subspace, complement, contains, projector, subspace_sum, support_of

DEFAULT_CAP = 4096


class OperatorKind(str, Enum):
    M1 = "M1"
    M2 = "M2"


class Provenance(str, Enum):
    """Which construction produced an operator. Values appear in JSON reports."""

    M1_EQ13 = "M1_eq13"
    M2_PRODUCT_EQ27 = "M2_product_eq27"
    M2_PAIR_EQ24 = "M2_pair_eq24"
    M1_MAXIMAL = "M1_maximal"
    M2_MAXIMAL = "M2_maximal"


_KIND_OF_PROVENANCE = {
    Provenance.M1_EQ13: OperatorKind.M1,
    Provenance.M1_MAXIMAL: OperatorKind.M1,
    Provenance.M2_PRODUCT_EQ27: OperatorKind.M2,
    Provenance.M2_PAIR_EQ24: OperatorKind.M2,
    Provenance.M2_MAXIMAL: OperatorKind.M2,
}


@dataclass(frozen=True)
class MeasurementOperator:
    """A conclusive-outcome operator on the n-fold tensor space.

    ``matrix`` has shape (dim**n, dim**n) and is read-only. The constructors
    in this module always produce projectors; user-supplied operators only
    need 0 <= M <= I.
    """

    n: int
    dim: int
    matrix: np.ndarray
    provenance: Provenance

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        expected = self.dim ** self.n
        if m.ndim != 2 or m.shape != (expected, expected):
            raise ShapeError(
                f"operator shape {m.shape} does not match dim**n = {expected}"
            )
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise ShapeError("operator contains NaN or Inf entries")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def kind(self) -> OperatorKind:
        return _KIND_OF_PROVENANCE[self.provenance]

    def rank(self, tol: Tolerances | None = None) -> int:
        t = tol or Tolerances()
        return numerical_rank(self.matrix, t.rank, t.sym)

    def residuals(self) -> dict[str, float]:
        """Deviation of the operator from its invariants.

        hermitian: max |M - M^dagger|; psd: how far the lowest eigenvalue
        dips below 0; below_identity: same for I - M; projector: max
        |M^2 - M|. All are 0 for an exact projector.
        """
        m = self.matrix
        herm = herm_residual(m)
        sym = (m + dagger(m)) / 2.0
        w = np.linalg.eigvalsh(sym)
        return {
            "hermitian": herm,
            "psd": max(0.0, -float(w[0])),
            "below_identity": max(0.0, float(w[-1]) - 1.0),
            "projector": float(np.max(np.abs(sym @ sym - sym))),
        }

    def is_valid(self, tol: Tolerances | None = None, require_projector: bool = False) -> bool:
        t = tol or Tolerances()
        r = self.residuals()
        ok = r["hermitian"] <= t.sym and r["psd"] <= t.neg and r["below_identity"] <= t.neg
        if require_projector:
            ok = ok and r["projector"] <= t.neg
        return ok


@dataclass(frozen=True)
class ConditionReport:
    """Per-candidate geometry and the overall feasibility verdicts.

    ``escapes_others[i]`` is true when Supp(sigma_i) is not contained in the
    span of the other supports; ``others_escape[i]`` is true when that span
    is not contained in Supp(sigma_i). All indices are 0-based.
    """

    k: int
    dim: int
    escapes_others: tuple[bool, ...]
    others_escape: tuple[bool, ...]
    m1_condition: bool
    m1_witnesses: tuple[int, ...]
    m2_necessary: bool
    m2_failures: tuple[int, ...]
    m2_structural: bool
    structural_witness: int | None
    corollary1: bool


def _supports(cs: CandidateSet, tol: Tolerances) -> list[Subspace]:
    return [support_of(cs.matrix(i), tol.rank, tol.sym) for i in range(cs.k)]


def _sum_of_others(supports: list[Subspace], i: int, tol: Tolerances, d: int) -> Subspace:
    return subspace_sum(
        [s for j, s in enumerate(supports) if j != i], tol.rank, ambient_dim=d
    )


def check_conditions(cs: CandidateSet, tol: Tolerances | None = None) -> ConditionReport:
    """Evaluate all feasibility conditions in one pass.

    The m1 condition asks for some support escaping the span of the others
    (witnesses reported); the m2 necessary condition asks that no single
    support swallow the span of the others; the structural condition is
    their conjunction, with the smallest escape witness as i0.
    """
    t = tol or Tolerances()
    supports = _supports(cs, t)
    d = cs.dim
    escapes = []
    others_escape = []
    for i in range(cs.k):
        others = _sum_of_others(supports, i, t, d)
        escapes.append(not contains(others, supports[i], t.rank))
        others_escape.append(not contains(supports[i], others, t.rank))
    witnesses = tuple(i for i, e in enumerate(escapes) if e)
    failures = tuple(i for i, e in enumerate(others_escape) if not e)
    m1 = bool(witnesses)
    m2n = not failures
    structural = m1 and m2n
    return ConditionReport(
        k=cs.k,
        dim=d,
        escapes_others=tuple(escapes),
        others_escape=tuple(others_escape),
        m1_condition=m1,
        m1_witnesses=witnesses,
        m2_necessary=m2n,
        m2_failures=failures,
        m2_structural=structural,
        structural_witness=witnesses[0] if structural else None,
        corollary1=m1 and m2n,
    )


def check_m1_condition(cs: CandidateSet, tol: Tolerances | None = None) -> ConditionReport:
    """Condition for a non-trivial identical-outcome operator to exist."""
    return check_conditions(cs, tol)


def check_m2_necessary(cs: CandidateSet, tol: Tolerances | None = None) -> ConditionReport:
    """Necessary condition for a non-trivial different-outcome operator."""
    return check_conditions(cs, tol)


def check_m2_structural(cs: CandidateSet, tol: Tolerances | None = None) -> ConditionReport:
    """Sufficient structural condition for the two-slot pair construction."""
    return check_conditions(cs, tol)


def reduce_candidates(cs: CandidateSet, tol: Tolerances | None = None) -> tuple[int, ...]:
    """Indices of candidates that survive support-containment reduction.

    A candidate is dropped when its support sits inside another candidate's
    support, keeping only the lowest index among candidates with identical
    supports. Survivors' supports are pairwise incomparable.
    """
    t = tol or Tolerances()
    supports = _supports(cs, t)
    k = cs.k
    inside = [[contains(supports[j], supports[i], t.rank) for j in range(k)] for i in range(k)]
    survivors = []
    for i in range(k):
        dominated = any(
            j != i and inside[i][j] and (not inside[j][i] or j < i)
            for j in range(k)
        )
        if not dominated:
            survivors.append(i)
    return tuple(survivors)


def _check_cap(dim: int, n: int, cap: int) -> None:
    if dim ** n > cap:
        raise CapExceededError(dim, n, cap)


def _require_n(n: int, minimum: int = 2) -> None:
    if not isinstance(n, (int, np.integer)) or n < minimum:
        raise ShapeError(f"tuple size n must be an integer >= {minimum}, got {n!r}")


def _self_check(op: MeasurementOperator, tol: Tolerances) -> MeasurementOperator:
    if not op.is_valid(tol, require_projector=True):
        raise InternalCheckError(
            f"constructed operator {op.provenance.value} failed its own "
            f"invariants: residuals {op.residuals()}"
        )
    return op


def build_m1(
    cs: CandidateSet,
    n: int,
    i0: int | None = None,
    tol: Tolerances | None = None,
    cap: int = DEFAULT_CAP,
) -> MeasurementOperator:
    """Identical-outcome operator P tensored n times.

    P projects onto the orthogonal complement of the span of every support
    except the witness i0's. With i0 = None the smallest witness is used.
    Raises ConditionNotMetError when i0 is not a witness or none exists.
    """
    _require_n(n)
    t = tol or Tolerances()
    _check_cap(cs.dim, n, cap)
    report = check_conditions(cs, t)
    if not report.m1_condition:
        raise ConditionNotMetError(
            "no candidate's support escapes the span of the others; "
            "a non-trivial identical-outcome operator does not exist"
        )
    if i0 is None:
        i0 = report.m1_witnesses[0]
    elif i0 not in report.m1_witnesses:
        raise ConditionNotMetError(
            f"index {i0} is not a witness; witnesses are {list(report.m1_witnesses)}"
        )
    supports = _supports(cs, t)
    p = projector(complement(_sum_of_others(supports, i0, t, cs.dim)))
    matrix = kron_all([p] * n)
    op = MeasurementOperator(n=n, dim=cs.dim, matrix=matrix, provenance=Provenance.M1_EQ13)
    return _self_check(op, t)


def build_m2_product(
    cs: CandidateSet,
    n: int,
    tol: Tolerances | None = None,
    cap: int = DEFAULT_CAP,
) -> MeasurementOperator:
    """Different-outcome operator with one complement projector per survivor.

    Slot i carries the projector onto Supp(sigma'_i)^perp for the i-th
    surviving candidate; remaining slots carry the identity. Needs the
    necessary condition and n at least the survivor count r. Unambiguous
    because any all-identical input meets its own survivor's complement in
    some slot; non-trivial because survivor supports are incomparable.
    """
    _require_n(n)
    t = tol or Tolerances()
    _check_cap(cs.dim, n, cap)
    report = check_conditions(cs, t)
    if not report.m2_necessary:
        raise ConditionNotMetError(
            f"the span of the other supports is contained in the support of "
            f"candidate index {report.m2_failures[0]}; no non-trivial "
            f"different-outcome operator exists"
        )
    survivors = reduce_candidates(cs, t)
    r = len(survivors)
    if n < r:
        raise TupleTooShortError(n, r)
    supports = _supports(cs, t)
    factors = [projector(complement(supports[i])) for i in survivors]
    factors.extend([identity(cs.dim)] * (n - r))
    matrix = kron_all(factors)
    op = MeasurementOperator(
        n=n, dim=cs.dim, matrix=matrix, provenance=Provenance.M2_PRODUCT_EQ27
    )
    return _self_check(op, t)


def build_m2_pair(
    cs: CandidateSet,
    n: int,
    tol: Tolerances | None = None,
    cap: int = DEFAULT_CAP,
) -> MeasurementOperator:
    """Different-outcome operator using only the first two slots.

    Slot one projects onto Supp(sigma_i0)^perp, slot two onto the complement
    of the span of the other supports, the rest are identities. Valid for
    every n >= 2 once the structural condition holds at witness i0.
    """
    _require_n(n)
    t = tol or Tolerances()
    _check_cap(cs.dim, n, cap)
    report = check_conditions(cs, t)
    if not report.m2_structural:
        raise ConditionNotMetError(
            "structural condition fails: need every support to escape the "
            "others' span collectively and at least one support to escape "
            "it individually"
        )
    i0 = report.structural_witness
    supports = _supports(cs, t)
    first = projector(complement(supports[i0]))
    second = projector(complement(_sum_of_others(supports, i0, t, cs.dim)))
    factors = [first, second] + [identity(cs.dim)] * (n - 2)
    matrix = kron_all(factors)
    op = MeasurementOperator(
        n=n, dim=cs.dim, matrix=matrix, provenance=Provenance.M2_PAIR_EQ24
    )
    return _self_check(op, t)


def _identical_tuple_span(n, supports, threshold, full_dim):
    q = np.zeros((full_dim, 0), dtype=np.complex128)
    for s in supports:
        if s.dim == 0:
            continue
        q = _mgs_extend(q, kron_all([s.basis] * n), threshold)
        if q.shape[1] == full_dim:
            break
    return q


def _different_tuple_span(k, n, supports, threshold, full_dim):
    q = np.zeros((full_dim, 0), dtype=np.complex128)
    for combo in itertools.product(range(k), repeat=n):
        if all(c == combo[0] for c in combo):
            continue
        factors = [supports[c].basis for c in combo]
        if any(f.shape[1] == 0 for f in factors):
            continue
        q = _mgs_extend(q, kron_all(factors), threshold)
        if q.shape[1] == full_dim:
            break
    return q


def build_maximal(
    cs: CandidateSet,
    n: int,
    which: OperatorKind,
    cap: int = DEFAULT_CAP,
    tol: Tolerances | None = None,
) -> MeasurementOperator:
    """Largest operator compatible with the given unambiguity constraint.

    For the different-outcome kind this is the projector onto the orthogonal
    complement of the span of all identical-tuple supports; for the
    identical-outcome kind, of all non-identical-tuple supports. Every valid
    operator of the class has support inside this projector's range, so the
    class admits a non-trivial member iff the returned operator is non-zero.
    """
    _require_n(n)
    which = OperatorKind(which)
    t = tol or Tolerances()
    _check_cap(cs.dim, n, cap)
    supports = _supports(cs, t)
    full_dim = cs.dim ** n
    # kron products of orthonormal columns have unit norm, so the MGS drop
    # threshold is the bare relative tolerance
    if which is OperatorKind.M2:
        q = _identical_tuple_span(n, supports, t.rank, full_dim)
        prov = Provenance.M2_MAXIMAL
    else:
        q = _different_tuple_span(cs.k, n, supports, t.rank, full_dim)
        prov = Provenance.M1_MAXIMAL
    matrix = projector(complement(Subspace(full_dim, q)))
    op = MeasurementOperator(n=n, dim=cs.dim, matrix=matrix, provenance=prov)
    return _self_check(op, t)


@dataclass(frozen=True)
class PovmAssembly:
    """A completing three-outcome measurement.

    conclusive_identical = alpha * M1, conclusive_different = beta * M2, and
    inconclusive is whatever remains below the identity. Iterating yields
    the three matrices in that order.
    """

    n: int
    dim: int
    conclusive_identical: np.ndarray
    conclusive_different: np.ndarray
    inconclusive: np.ndarray
    alpha: float
    beta: float

    def __iter__(self):
        return iter((self.conclusive_identical, self.conclusive_different, self.inconclusive))


def assemble_povm(
    m1: MeasurementOperator,
    m2: MeasurementOperator,
    tol: Tolerances | None = None,
) -> PovmAssembly:
    """Complete two conclusive operators into a POVM.

    Uses the operators unscaled when I - M1 - M2 is already PSD, otherwise
    halves both. Halving always succeeds because each operator is below the
    identity. Scaling by a positive factor preserves which tuples have zero
    and which have positive probability.
    """
    t = tol or Tolerances()
    if m1.n != m2.n or m1.dim != m2.dim:
        raise ShapeError(
            f"operators disagree on geometry: n={m1.n},dim={m1.dim} vs n={m2.n},dim={m2.dim}"
        )
    eye = identity(m1.dim ** m1.n)
    rest = eye - m1.matrix - m2.matrix
    if min_eigenvalue(rest, t.sym) >= -t.neg:
        alpha = beta = 1.0
    else:
        alpha = beta = 0.5
        rest = eye - 0.5 * m1.matrix - 0.5 * m2.matrix
    if min_eigenvalue(rest, t.sym) < -t.neg:
        raise InternalCheckError(
            "inconclusive operator is not PSD even after halving; "
            "the conclusive operators violate their invariants"
        )
    return PovmAssembly(
        n=m1.n,
        dim=m1.dim,
        conclusive_identical=alpha * m1.matrix,
        conclusive_different=beta * m2.matrix,
        inconclusive=rest,
        alpha=alpha,
        beta=beta,
    )
