"""Closed-form route candidates for geodesics on the sup-norm unit sphere, any n >= 3.

A candidate names a chain of facets a shortest path may cross, together with a
sign per middle axis saying which of the two facets of that axis is used.  Its
value is a maximum of affine terms in the endpoint coordinates and is both a
lower bound for every path with that crossing pattern and the exact length of
the best such path.  The distance between two points on non-touching facets is
the minimum of the candidate values over the whole family (for n = 3 this
reduces to the three-route adjacent formula and the twelve-route opposite
formula, bitwise).

Canonical frames
----------------
adjacent : A on the facet x0 = +1, B on the facet x1 = +1; middle axes from
           {2, .., n-1}.
opposite : A on x0 = +1, B on x0 = -1; middle axes from {1, .., n-1}.

A ``CandidateAdjacent`` with axes (t1, .., tm) and signs (e1, .., em) has terms

    (2 - A[1]) + e1*B[t1]
    (2 + e2*A[t2]) - B[0]          (with t2 := t1 when m = 1)
    (2 + e_{r+1}*A[t_{r+1}]) + e_r*B[t_r]   for r = 2 .. m-1
    (2 + e1*A[t1]) + em*B[tm]      (when m >= 2)
    |A[i] - B[i]|                  for every middle axis i not in the tuple

and for m = 0 simply (2 - A[1]) - B[0] plus all the residual terms.  A
``CandidateOpposite`` with axes (u1, .., um), m >= 1, has terms

    (2 + e_{r+1}*A[u_{r+1}]) + e_r*B[u_r]   for r = 1 .. m-1
    (4 + e1*A[u1]) + em*B[um]

Each term couples the distance A must cover toward one facet of the chain with
the distance B must cover toward the previous one; the facet actually crossed
for axis t carries sign -e_t.  The implied facet chain runs through the axes in
order (t2, .., tm, t1) for adjacent candidates and (u1, .., um) for opposite
ones.

All scalar evaluation is plain Python arithmetic with integer constants, so
exact types such as ``fractions.Fraction`` pass through unchanged; the batch
evaluators build the very same expression trees with numpy, so scalar and
batch results agree bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterator, Sequence

import mpmath as mp
import numpy as np

from . import adjacent3, opposite3
from .surface import (
    Adjacent,
    FaceId,
    GeodesicPath,
    Opposite,
    SurfaceError,
    SurfacePoint,
    canonicalize,
    classify_pair,
    sup_distance,
)

__all__ = [
    "DEFAULT_MAX_N",
    "TIE_TOL",
    "EnumerationCapError",
    "CandidateAdjacent",
    "CandidateOpposite",
    "CandidateValue",
    "adjacent_candidates",
    "opposite_candidates",
    "eval_adjacent_candidate",
    "eval_opposite_candidate",
    "batch_min_adjacent",
    "batch_min_opposite",
    "candidate_count",
    "counting_remainder",
    "adjacent_candidate_count",
    "opposite_candidate_count",
    "candidate_face_sequence",
    "n3_route_alias",
    "Provenance",
    "DistanceResult",
    "geodesic_distance",
]

#: Default dimension cap for candidate enumeration (the family has
#: floor(m! 2^m sqrt(e)) members for m middle axes, so cost explodes).
DEFAULT_MAX_N = 10

#: Tie tolerance used when listing all minimizing candidates.
TIE_TOL = 1e-12


class EnumerationCapError(SurfaceError):
    """Raised when a requested dimension exceeds the enumeration cap."""


# ---------------------------------------------------------------------------
# Candidate types
# ---------------------------------------------------------------------------


def _sign_str(axis: int, sign: int) -> str:
    return f"{'+' if sign > 0 else '-'}{axis}"


@dataclass(frozen=True)
class CandidateAdjacent:
    """A facet-chain candidate for endpoints on the facets x0=+1 and x1=+1.

    ``axes`` is an ordered tuple of distinct middle axes (each in {2..n-1});
    ``signs`` assigns +1 or -1 to each tuple position.  ``axes`` may be empty
    (the direct route across the shared edge).
    """

    axes: tuple[int, ...]
    signs: tuple[int, ...]

    def label(self) -> str:
        return "adj(" + ",".join(_sign_str(t, s) for t, s in zip(self.axes, self.signs)) + ")"

    def schema(self, n: int) -> str:
        """Human-readable term list, e.g. ``max{2-A[1]+B[2], 2-A[2]-B[0]}``."""
        parts = list(_adjacent_term_strings(self, n))
        return "max{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class CandidateOpposite:
    """A facet-chain candidate for endpoints on the facets x0=+1 and x0=-1.

    ``axes`` is an ordered tuple of distinct middle axes (each in {1..n-1}),
    never empty; ``signs`` assigns +1 or -1 to each tuple position.
    """

    axes: tuple[int, ...]
    signs: tuple[int, ...]

    def label(self) -> str:
        return "opp(" + ",".join(_sign_str(t, s) for t, s in zip(self.axes, self.signs)) + ")"

    def schema(self, n: int) -> str:
        parts = list(_opposite_term_strings(self))
        return "max{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class CandidateValue:
    """One evaluated candidate: its terms (in schema order) and their max."""

    candidate: CandidateAdjacent | CandidateOpposite
    terms: tuple
    value: object

    def __float__(self) -> float:
        return float(self.value)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _check_n(n: int, max_n: int) -> None:
    if not isinstance(n, int) or n < 3:
        raise SurfaceError(f"dimension must be an integer >= 3, got {n!r}")
    if n > max_n:
        raise EnumerationCapError(
            f"n={n} exceeds the enumeration cap {max_n}; the candidate family has "
            f"factorial size, pass a larger cap explicitly to proceed"
        )


def adjacent_candidates(n: int, max_n: int = DEFAULT_MAX_N) -> Iterator[CandidateAdjacent]:
    """All adjacent-frame candidates for dimension ``n``, lazily.

    Order: by tuple length m = 0..n-2, then lexicographic in the axis tuple,
    then sign vectors with +1 before -1 per slot.  The total number streamed is
    ``candidate_count(n - 2)``.
    """
    _check_n(n, max_n)

    def gen() -> Iterator[CandidateAdjacent]:
        for m in range(0, n - 1):
            for axes in permutations(range(2, n), m):
                for signs in product((1, -1), repeat=m):
                    yield CandidateAdjacent(axes, signs)

    return gen()


def opposite_candidates(n: int, max_n: int = DEFAULT_MAX_N) -> Iterator[CandidateOpposite]:
    """All opposite-frame candidates for dimension ``n``, lazily.

    Order: by tuple length m = 1..n-1, then lexicographic in the axis tuple,
    then sign vectors with +1 before -1 per slot.  The total number streamed is
    ``candidate_count(n - 1) - 1``.
    """
    _check_n(n, max_n)

    def gen() -> Iterator[CandidateOpposite]:
        for m in range(1, n):
            for axes in permutations(range(1, n), m):
                for signs in product((1, -1), repeat=m):
                    yield CandidateOpposite(axes, signs)

    return gen()


# ---------------------------------------------------------------------------
# Evaluation (scalar, exact-type friendly)
# ---------------------------------------------------------------------------


def _coords(p) -> Sequence:
    return p.coords if isinstance(p, SurfacePoint) else p


def _check_candidate(cand, lo: int, n: int) -> None:
    m = len(cand.axes)
    if len(cand.signs) != m:
        raise SurfaceError(f"candidate has {m} axes but {len(cand.signs)} signs")
    if len(set(cand.axes)) != m:
        raise SurfaceError(f"candidate axes must be distinct, got {cand.axes}")
    for t in cand.axes:
        if not lo <= t < n:
            raise SurfaceError(f"candidate axis {t} out of range [{lo}, {n})")
    for s in cand.signs:
        if s not in (1, -1):
            raise SurfaceError(f"candidate signs must be +1 or -1, got {s!r}")


def _adjacent_terms(cand: CandidateAdjacent, A: Sequence, B: Sequence):
    n = len(A)
    axes, signs = cand.axes, cand.signs
    m = len(axes)
    terms = []
    if m == 0:
        terms.append((2 - A[1]) - B[0])
    else:
        terms.append((2 - A[1]) + signs[0] * B[axes[0]])
        sec = 1 if m >= 2 else 0
        terms.append((2 + signs[sec] * A[axes[sec]]) - B[0])
        for r in range(1, m - 1):
            terms.append((2 + signs[r + 1] * A[axes[r + 1]]) + signs[r] * B[axes[r]])
        if m >= 2:
            terms.append((2 + signs[0] * A[axes[0]]) + signs[m - 1] * B[axes[m - 1]])
    used = set(axes)
    for i in range(2, n):
        if i not in used:
            terms.append(abs(A[i] - B[i]))
    return terms


def _opposite_terms(cand: CandidateOpposite, A: Sequence, B: Sequence):
    axes, signs = cand.axes, cand.signs
    m = len(axes)
    terms = []
    for r in range(m - 1):
        terms.append((2 + signs[r + 1] * A[axes[r + 1]]) + signs[r] * B[axes[r]])
    terms.append((4 + signs[0] * A[axes[0]]) + signs[m - 1] * B[axes[m - 1]])
    return terms


def eval_adjacent_candidate(cand: CandidateAdjacent, A, B) -> CandidateValue:
    """Evaluate one adjacent candidate at A (on x0=+1) and B (on x1=+1).

    Works with floats, Fractions or any ordered numeric type.
    """
    A, B = _coords(A), _coords(B)
    n = len(A)
    if len(B) != n:
        raise SurfaceError("endpoint dimension mismatch")
    if A[0] != 1 or B[1] != 1:
        raise SurfaceError("adjacent frame requires A[0] == 1 and B[1] == 1")
    _check_candidate(cand, 2, n)
    terms = _adjacent_terms(cand, A, B)
    return CandidateValue(cand, tuple(terms), max(terms))


def eval_opposite_candidate(cand: CandidateOpposite, A, B) -> CandidateValue:
    """Evaluate one opposite candidate at A (on x0=+1) and B (on x0=-1)."""
    A, B = _coords(A), _coords(B)
    n = len(A)
    if len(B) != n:
        raise SurfaceError("endpoint dimension mismatch")
    if A[0] != 1 or B[0] != -1:
        raise SurfaceError("opposite frame requires A[0] == 1 and B[0] == -1")
    _check_candidate(cand, 1, n)
    terms = _opposite_terms(cand, A, B)
    return CandidateValue(cand, tuple(terms), max(terms))


def _adjacent_term_strings(cand: CandidateAdjacent, n: int) -> Iterator[str]:
    axes, signs = cand.axes, cand.signs
    m = len(axes)
    pm = lambda s: "+" if s > 0 else "-"  # noqa: E731
    if m == 0:
        yield "2-A[1]-B[0]"
    else:
        yield f"2-A[1]{pm(signs[0])}B[{axes[0]}]"
        sec = 1 if m >= 2 else 0
        yield f"2{pm(signs[sec])}A[{axes[sec]}]-B[0]"
        for r in range(1, m - 1):
            yield f"2{pm(signs[r + 1])}A[{axes[r + 1]}]{pm(signs[r])}B[{axes[r]}]"
        if m >= 2:
            yield f"2{pm(signs[0])}A[{axes[0]}]{pm(signs[m - 1])}B[{axes[m - 1]}]"
    used = set(axes)
    for i in range(2, n):
        if i not in used:
            yield f"|A[{i}]-B[{i}]|"


def _opposite_term_strings(cand: CandidateOpposite) -> Iterator[str]:
    axes, signs = cand.axes, cand.signs
    m = len(axes)
    pm = lambda s: "+" if s > 0 else "-"  # noqa: E731
    for r in range(m - 1):
        yield f"2{pm(signs[r + 1])}A[{axes[r + 1]}]{pm(signs[r])}B[{axes[r]}]"
    yield f"4{pm(signs[0])}A[{axes[0]}]{pm(signs[m - 1])}B[{axes[m - 1]}]"


# ---------------------------------------------------------------------------
# Evaluation (batch, numpy; bitwise-identical expression trees)
# ---------------------------------------------------------------------------


def _adjacent_terms_batch(cand: CandidateAdjacent, A: np.ndarray, B: np.ndarray):
    n = A.shape[1]
    axes, signs = cand.axes, cand.signs
    m = len(axes)
    terms = []
    if m == 0:
        terms.append((2 - A[:, 1]) - B[:, 0])
    else:
        terms.append((2 - A[:, 1]) + signs[0] * B[:, axes[0]])
        sec = 1 if m >= 2 else 0
        terms.append((2 + signs[sec] * A[:, axes[sec]]) - B[:, 0])
        for r in range(1, m - 1):
            terms.append((2 + signs[r + 1] * A[:, axes[r + 1]]) + signs[r] * B[:, axes[r]])
        if m >= 2:
            terms.append((2 + signs[0] * A[:, axes[0]]) + signs[m - 1] * B[:, axes[m - 1]])
    used = set(axes)
    for i in range(2, n):
        if i not in used:
            terms.append(np.abs(A[:, i] - B[:, i]))
    return terms


def _opposite_terms_batch(cand: CandidateOpposite, A: np.ndarray, B: np.ndarray):
    axes, signs = cand.axes, cand.signs
    m = len(axes)
    terms = []
    for r in range(m - 1):
        terms.append((2 + signs[r + 1] * A[:, axes[r + 1]]) + signs[r] * B[:, axes[r]])
    terms.append((4 + signs[0] * A[:, axes[0]]) + signs[m - 1] * B[:, axes[m - 1]])
    return terms


def _fold_max(terms) -> np.ndarray:
    acc = np.array(terms[0], copy=True)
    for t in terms[1:]:
        np.maximum(acc, t, out=acc)
    return acc


def batch_min_adjacent(A: np.ndarray, B: np.ndarray, max_n: int = DEFAULT_MAX_N) -> np.ndarray:
    """Minimum adjacent-candidate value per row of A (on x0=+1) and B (on x1=+1)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    best = None
    for cand in adjacent_candidates(A.shape[1], max_n):
        v = _fold_max(_adjacent_terms_batch(cand, A, B))
        best = v if best is None else np.minimum(best, v, out=best)
    return best


def batch_min_opposite(A: np.ndarray, B: np.ndarray, max_n: int = DEFAULT_MAX_N) -> np.ndarray:
    """Minimum opposite-candidate value per row of A (on x0=+1) and B (on x0=-1)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    best = None
    for cand in opposite_candidates(A.shape[1], max_n):
        v = _fold_max(_opposite_terms_batch(cand, A, B))
        best = v if best is None else np.minimum(best, v, out=best)
    return best


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

_COUNT_VERIFY_CAP = 4000


def counting_remainder(m: int) -> mp.mpf:
    """m! 2^m (sqrt(e) - sum_{j<=m} (1/2)^j / j!), computed in high precision.

    This is the fractional part left over when the candidate total is written
    as the integer part of m! 2^m sqrt(e); it lies strictly between 0 and 1.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    digits = int(math.lgamma(m + 1) / math.log(10) + m * math.log10(2)) + 30
    with mp.workdps(digits):
        tail = mp.sqrt(mp.e) - mp.nsum(lambda j: mp.mpf(2) ** (-j) / mp.factorial(j), [0, m])
        return mp.factorial(m) * mp.mpf(2) ** m * tail


def candidate_count(m: int) -> int:
    """Exact size of the candidate family over m middle axes.

    Returns sum_{k=0..m} m!/(m-k)! 2^k and verifies, in high-precision
    arithmetic, that this equals floor(m! 2^m sqrt(e)) with a remainder
    strictly inside (0, 1).
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if m > _COUNT_VERIFY_CAP:
        raise OverflowError(
            f"candidate_count verification is capped at m={_COUNT_VERIFY_CAP}"
        )
    total = sum(math.perm(m, k) * (1 << k) for k in range(m + 1))
    rem = counting_remainder(m)
    if not (0 < rem < 1):
        raise ArithmeticError(f"counting remainder {rem} outside (0, 1) for m={m}")
    digits = int(math.lgamma(m + 1) / math.log(10) + m * math.log10(2)) + 30
    with mp.workdps(digits):
        whole = int(mp.floor(mp.factorial(m) * mp.mpf(2) ** m * mp.sqrt(mp.e)))
    if whole != total:
        raise ArithmeticError(
            f"floor(m! 2^m sqrt(e)) = {whole} disagrees with the integer sum {total}"
        )
    return total


def adjacent_candidate_count(n: int) -> int:
    """Number of adjacent candidates in dimension n (= candidate_count(n-2))."""
    if n < 3:
        raise SurfaceError("n must be >= 3")
    return candidate_count(n - 2)


def opposite_candidate_count(n: int) -> int:
    """Number of opposite candidates in dimension n (= candidate_count(n-1) - 1)."""
    if n < 3:
        raise SurfaceError("n must be >= 3")
    return candidate_count(n - 1) - 1


# ---------------------------------------------------------------------------
# Face sequences
# ---------------------------------------------------------------------------


def candidate_face_sequence(cand: CandidateAdjacent | CandidateOpposite) -> tuple[FaceId, ...]:
    """The facet chain a path realizing this candidate crosses, in order.

    The sequence includes both endpoint facets.  Middle axis t with sign e is
    crossed on the facet x_t = -e; adjacent chains visit the tuple axes in
    order (t2, .., tm, t1), opposite chains in tuple order.
    """
    mids_axes: tuple[int, ...]
    if isinstance(cand, CandidateAdjacent):
        if len(cand.axes) >= 2:
            order = cand.axes[1:] + cand.axes[:1]
            osigns = cand.signs[1:] + cand.signs[:1]
        else:
            order, osigns = cand.axes, cand.signs
        mids = tuple(FaceId(t, -s) for t, s in zip(order, osigns))
        return (FaceId(0, 1),) + mids + (FaceId(1, 1),)
    mids = tuple(FaceId(t, -s) for t, s in zip(cand.axes, cand.signs))
    return (FaceId(0, 1),) + mids + (FaceId(0, -1),)


# ---------------------------------------------------------------------------
# n=3 aliases (the three adjacent routes and the twelve opposite routes)
# ---------------------------------------------------------------------------

_N3_ADJACENT_ALIAS: dict[tuple, str] = {
    ((), ()): "alpha",
    ((2,), (-1,)): "beta",
    ((2,), (1,)): "gamma",
}

_N3_OPPOSITE_ALIAS: dict[tuple, str] = {
    ((1,), (-1,)): "s1",
    ((1,), (1,)): "s2",
    ((2,), (-1,)): "s3",
    ((2,), (1,)): "s4",
    ((2, 1), (-1, -1)): "s5",
    ((2, 1), (1, -1)): "s6",
    ((2, 1), (-1, 1)): "s7",
    ((2, 1), (1, 1)): "s8",
    ((1, 2), (-1, -1)): "s9",
    ((1, 2), (-1, 1)): "s10",
    ((1, 2), (1, -1)): "s11",
    ((1, 2), (1, 1)): "s12",
}

_N3_OPPOSITE_INDEX: dict[tuple, int] = {
    key: int(alias[1:]) for key, alias in _N3_OPPOSITE_ALIAS.items()
}


def n3_route_alias(cand: CandidateAdjacent | CandidateOpposite) -> str | None:
    """The n=3 route name (alpha/beta/gamma or s1..s12) of a candidate, if any."""
    key = (cand.axes, cand.signs)
    if isinstance(cand, CandidateAdjacent):
        return _N3_ADJACENT_ALIAS.get(key)
    return _N3_OPPOSITE_ALIAS.get(key)


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Provenance:
    """Which route family and candidate produced the reported distance.

    kind        : "same-face", "adjacent" or "opposite".
    label       : winning candidate (n=3: alpha/beta/gamma or s1..s12).
    candidate   : the winning candidate object, if any.
    face_a/face_b : the facet assignment that won, as faces of the first and
                  second argument of :func:`geodesic_distance`.
    swapped     : True when the winning evaluation ran with the arguments in
                  reverse order (the candidate frames are not symmetric; both
                  orders are always tried and the minimum taken).
    minimizers  : labels of every candidate tying the minimum (within the tie
                  tolerance) in the winning frame.
    conditions  : for n=3, labels of the closed-form optimality conditions
                  that fired for the winning route; empty otherwise.
    """

    kind: str
    label: str
    candidate: CandidateAdjacent | CandidateOpposite | None
    face_a: FaceId | None
    face_b: FaceId | None
    swapped: bool
    minimizers: tuple[str, ...]
    conditions: tuple[str, ...]


@dataclass(frozen=True)
class DistanceResult:
    """Distance, optional witness path, and provenance for one point pair."""

    distance: float
    witness: GeodesicPath | None
    provenance: Provenance


def _min_candidate(kind: str, A: Sequence, B: Sequence, n: int, max_n: int):
    """(best value, first best candidate) over one frame's full family."""
    if kind == "adjacent":
        stream = adjacent_candidates(n, max_n)
        terms_of = _adjacent_terms
    else:
        stream = opposite_candidates(n, max_n)
        terms_of = _opposite_terms
    best_v = None
    best_c = None
    for cand in stream:
        v = max(terms_of(cand, A, B))
        if best_v is None or v < best_v:
            best_v, best_c = v, cand
    return best_v, best_c


def _tied_candidates(kind: str, A: Sequence, B: Sequence, n: int, max_n: int,
                     best_v, tie_tol: float) -> tuple[str, ...]:
    if kind == "adjacent":
        stream = adjacent_candidates(n, max_n)
        terms_of = _adjacent_terms
    else:
        stream = opposite_candidates(n, max_n)
        terms_of = _opposite_terms
    labels = []
    for cand in stream:
        if max(terms_of(cand, A, B)) <= best_v + tie_tol:
            alias = n3_route_alias(cand) if n == 3 else None
            labels.append(alias if alias is not None else cand.label())
    return tuple(labels)


def _n3_cross_check(kind: str, P2: SurfacePoint, Q2: SurfacePoint, val) -> tuple[str, ...]:
    """Check the n=3 closed forms agree bitwise; return fired condition labels."""
    if kind == "adjacent":
        ay, az = P2.coords[1], P2.coords[2]
        bx, bz = Q2.coords[0], Q2.coords[2]
        res = adjacent3.adjacent3_distance(ay, az, bx, bz)
        if res.distance != val:
            raise RuntimeError(
                "internal inconsistency: three-route formula disagrees with the "
                f"candidate minimum ({res.distance!r} vs {val!r})"
            )
        return tuple(str(i) for i in res.satisfied_conditions)
    a, b = P2.coords[1], P2.coords[2]
    c, d = Q2.coords[1], Q2.coords[2]
    res = opposite3.opposite3_distance(a, b, c, d)
    if res.distance != val:
        raise RuntimeError(
            "internal inconsistency: twelve-route formula disagrees with the "
            f"candidate minimum ({res.distance!r} vs {val!r})"
        )
    fired: list[str] = []
    for j in sorted(res.minimizers):
        fired.extend(res.condition_hits[j])
    return tuple(dict.fromkeys(fired))


def geodesic_distance(
    a: SurfacePoint,
    b: SurfacePoint,
    witness: bool = True,
    max_n: int = DEFAULT_MAX_N,
    tie_tol: float = TIE_TOL,
) -> DistanceResult:
    """Geodesic distance between two points of the sup-norm unit sphere.

    Points sharing a facet are joined by the straight segment (the ambient
    sup-norm distance is always a lower bound, and the segment stays inside
    the shared facet, so it is optimal).  Otherwise every facet assignment of
    both points, in both argument orders, is brought to a canonical frame by a
    signed permutation and the candidate family minimized; the smallest value
    over all frames is the distance.  Evaluating both argument orders makes
    the result bitwise symmetric, and closure of the family under signed
    permutations of the middle axes makes it bitwise invariant under all
    isometries of the cube.

    When ``witness`` is true a shortest path is reconstructed by convex
    minimization over the winning candidate's facet chain and mapped back
    through the inverse isometry; its length always matches the distance to
    within 1e-9.
    """
    if not isinstance(a, SurfacePoint) or not isinstance(b, SurfacePoint):
        raise SurfaceError("geodesic_distance expects SurfacePoint arguments")
    if a.n != b.n:
        raise SurfaceError(f"dimension mismatch: {a.n} vs {b.n}")
    n = a.n
    _check_n(n, max_n)

    shared = a.faces & b.faces
    if shared:
        d = sup_distance(a.coords, b.coords)
        face = min(shared)
        wit = None
        if witness:
            wit = GeodesicPath.from_vertices([a] if a.coords == b.coords else [a, b])
        prov = Provenance(
            kind="same-face",
            label=f"segment[{face}]",
            candidate=None,
            face_a=face,
            face_b=face,
            swapped=False,
            minimizers=tuple(f"segment[{f}]" for f in sorted(shared)),
            conditions=(),
        )
        return DistanceResult(d, wit, prov)

    best = None  # (value, swapped, assignment, g, P2, Q2, candidate, kind)
    for swapped, P, Q in ((False, a, b), (True, b, a)):
        for assignment in classify_pair(P, Q):
            kind = "adjacent" if isinstance(assignment, Adjacent) else "opposite"
            g, P2, Q2 = canonicalize(P, Q, assignment)
            val, cand = _min_candidate(kind, P2.coords, Q2.coords, n, max_n)
            if n == 3:
                _n3_cross_check(kind, P2, Q2, val)
            if best is None or val < best[0]:
                best = (val, swapped, assignment, g, P2, Q2, cand, kind)

    val, swapped, assignment, g, P2, Q2, cand, kind = best
    alias = n3_route_alias(cand) if n == 3 else None
    label = alias if alias is not None else cand.label()
    minimizers = _tied_candidates(kind, P2.coords, Q2.coords, n, max_n, val, tie_tol)
    conditions = _n3_cross_check(kind, P2, Q2, val) if n == 3 else ()

    if swapped:
        face_a, face_b = assignment.face_b, assignment.face_a
    else:
        face_a, face_b = assignment.face_a, assignment.face_b

    wit = None
    if witness:
        from .oracle import minimize_over_sequence
        from .surface import make_surface_point

        seq = candidate_face_sequence(cand)
        lp_val, crossings = minimize_over_sequence(P2.coords, Q2.coords, seq)
        if not abs(lp_val - val) <= 1e-9:
            raise RuntimeError(
                "internal inconsistency: witness minimization over the winning "
                f"facet chain gave {lp_val!r}, expected {val!r}"
            )
        ginv = g.inverse()
        mids = [make_surface_point(c, tol=0.0) for c in crossings]
        verts = [ginv.apply(v) for v in [P2, *mids, Q2]]
        if swapped:
            verts.reverse()
        wit = GeodesicPath.from_vertices(verts)
        if not abs(wit.total_length - val) <= 1e-9:
            raise RuntimeError(
                "internal inconsistency: witness length "
                f"{wit.total_length!r} differs from distance {val!r}"
            )

    prov = Provenance(
        kind=kind,
        label=label,
        candidate=cand,
        face_a=face_a,
        face_b=face_b,
        swapped=swapped,
        minimizers=minimizers,
        conditions=conditions,
    )
    return DistanceResult(val, wit, prov)
