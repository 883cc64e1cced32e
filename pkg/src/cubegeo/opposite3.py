"""Closed-form geodesic distance between points on opposite facets (n = 3).

Canonical frame: A = (1, a, b) on the facet x0 = +1 and B = (-1, c, d) on the
facet x0 = -1.  Twelve route values cover all geodesics:

* ``s1..s4`` — three-leg routes across one side facet (x1 = +-1 or x2 = +-1):
  s1 = 4-a-c, s2 = 4+a+c, s3 = 4-b-d, s4 = 4+b+d;
* ``s5..s12`` — four-leg routes across two side facets, each of the form
  max(2 +- a +- d', 4 +- b' +- c') for one of the eight sign/axis patterns.

The distance is min(s1..s12).  Each index j has an inequality system of five
condition slots that is (in exact arithmetic) equivalent to s_j being
minimal.  The systems are stated for two template indices (s1 and s6) and
transported to the other ten by the sign/axis symmetries of the frame, each
of which permutes the twelve values.  Four indices carry fixed numeric
condition labels (1: 37-41, 6: 42-46, 4: 68-72, 5: 73-77); the rest label
their slots "sj:1".."sj:5".  Scalar functions use plain Python arithmetic
(so ``fractions.Fraction`` works); ``*_batch`` variants take numpy arrays
with identical expression trees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surface import GeodesicPath, SurfaceError, make_surface_point

__all__ = [
    "TIE_TOL",
    "s_values",
    "s_values_batch",
    "template_conditions_s1",
    "template_conditions_s6",
    "SUBSTITUTIONS",
    "condition_labels",
    "sj_condition_slots",
    "sj_conditions",
    "s1_conditions",
    "s6_conditions",
    "all_conditions",
    "all_conditions_batch",
    "OppositeResult",
    "opposite3_distance",
    "opposite3_witness",
]

TIE_TOL = 1e-12


# ---------------------------------------------------------------------------
# The twelve route values
# ---------------------------------------------------------------------------


def s_values(a, b, c, d):
    """The twelve route values (s1..s12) for canonical opposite inputs."""
    return (
        (4 - a) - c,
        (4 + a) + c,
        (4 - b) - d,
        (4 + b) + d,
        max((2 - a) - d, (4 - b) - c),
        max((2 - a) + d, (4 + b) - c),
        max((2 + a) - d, (4 - b) + c),
        max((2 + a) + d, (4 + b) + c),
        max((2 - b) - c, (4 - a) - d),
        max((2 + b) - c, (4 - a) + d),
        max((2 - b) + c, (4 + a) - d),
        max((2 + b) + c, (4 + a) + d),
    )


def s_values_batch(a, b, c, d):
    """Vectorised :func:`s_values` as a (12, ...) array (same expressions)."""
    return np.array(
        [
            (4 - a) - c,
            (4 + a) + c,
            (4 - b) - d,
            (4 + b) + d,
            np.maximum((2 - a) - d, (4 - b) - c),
            np.maximum((2 - a) + d, (4 + b) - c),
            np.maximum((2 + a) - d, (4 - b) + c),
            np.maximum((2 + a) + d, (4 + b) + c),
            np.maximum((2 - b) - c, (4 - a) - d),
            np.maximum((2 + b) - c, (4 - a) + d),
            np.maximum((2 - b) + c, (4 + a) - d),
            np.maximum((2 + b) + c, (4 + a) + d),
        ]
    )


# ---------------------------------------------------------------------------
# Minimality conditions
# ---------------------------------------------------------------------------


def template_conditions_s1(a, b, c, d):
    """The five inequality systems equivalent to s1 = 4-a-c being minimal.

    Works elementwise on numpy arrays.  Slots: 1 interior, 2-5 boundary cases
    (a corner of A or B pinned to the shared edge structure).
    """
    return (
        (abs(b) <= a) & (abs(d) <= c),
        (c == 1) & (d == -1) & (b >= -a),
        (c == 1) & (d == 1) & (b <= a),
        (a == 1) & (b == -1) & (d >= -c),
        (a == 1) & (b == 1) & (d <= c),
    )


def template_conditions_s6(a, b, c, d):
    """The five inequality systems equivalent to s6 = max(2-a+d, 4+b-c) being minimal."""
    return (
        (a + b <= 0) & (c + d >= 0) & (abs(a + d) <= c - b) & (b + d <= a + c) & (b <= 0) & (c >= 0),
        (b == -1) & (c >= 0) & (-c <= d) & (d <= (1 + a) + c),
        (b == -1) & (d >= (1 - a) - c),
        (c == 1) & (b <= 0) & ((b + d) - 1 <= a) & (a <= -b),
        (c == 1) & (a <= (-1 - b) - d),
    )


# For each index j: (template family, coordinate substitution).  The
# substitution sigma is given as ((src, sgn), ...) meaning the template is
# evaluated at (sgn0*v[src0], sgn1*v[src1], ...).  Each sigma comes from a
# surface isometry fixing the canonical frame (sign flips of the free axes,
# the swap of axes 1 and 2, and the end swap A <-> B), chosen so that
# s_family(sigma(v)) == s_j(v).
SUBSTITUTIONS: dict[int, tuple[int, tuple[tuple[int, int], ...]]] = {
    1: (1, ((0, 1), (1, 1), (2, 1), (3, 1))),
    2: (1, ((0, -1), (1, 1), (2, -1), (3, 1))),
    3: (1, ((1, 1), (0, 1), (3, 1), (2, 1))),
    4: (1, ((1, -1), (0, -1), (3, -1), (2, -1))),
    5: (6, ((0, 1), (1, -1), (2, 1), (3, -1))),
    6: (6, ((0, 1), (1, 1), (2, 1), (3, 1))),
    7: (6, ((0, -1), (1, -1), (2, -1), (3, -1))),
    8: (6, ((0, -1), (1, 1), (2, -1), (3, 1))),
    9: (6, ((1, 1), (0, -1), (3, 1), (2, -1))),
    10: (6, ((2, 1), (3, 1), (0, 1), (1, 1))),
    11: (6, ((1, 1), (0, 1), (3, 1), (2, 1))),
    12: (6, ((1, -1), (0, 1), (3, -1), (2, 1))),
}

# Fixed numeric label blocks for four indices; the remaining indices label
# their slots "s<j>:<slot>".
_NUMBERED_LABEL_BASE = {1: 37, 6: 42, 4: 68, 5: 73}


def condition_labels(j: int) -> tuple[str, ...]:
    """Labels for the five condition slots of index j."""
    if j in _NUMBERED_LABEL_BASE:
        base = _NUMBERED_LABEL_BASE[j]
        return tuple(str(base + k) for k in range(5))
    return tuple(f"s{j}:{k + 1}" for k in range(5))


def _substitute(j: int, a, b, c, d):
    v = (a, b, c, d)
    _, sigma = SUBSTITUTIONS[j]
    return tuple(sgn * v[src] for src, sgn in sigma)


def sj_condition_slots(j: int, a, b, c, d):
    """Slot truth values for index j (tuple of 5 bools, or boolean arrays)."""
    family, _ = SUBSTITUTIONS[j]
    args = _substitute(j, a, b, c, d)
    tmpl = template_conditions_s1 if family == 1 else template_conditions_s6
    return tmpl(*args)


def sj_conditions(j: int, a, b, c, d) -> bool:
    """True iff at least one optimality condition for route ``j`` holds."""
    return bool(any(sj_condition_slots(j, a, b, c, d)))


def _fired(j: int, slots) -> tuple[str, ...]:
    labels = condition_labels(j)
    return tuple(lab for lab, hit in zip(labels, slots) if hit)


def s1_conditions(a, b, c, d) -> tuple[bool, tuple[str, ...]]:
    """(any condition for route 1 holds, labels of the clauses that fired)."""
    slots = sj_condition_slots(1, a, b, c, d)
    return bool(any(slots)), _fired(1, slots)


def s6_conditions(a, b, c, d) -> tuple[bool, tuple[str, ...]]:
    """(any condition for route 6 holds, labels of the clauses that fired)."""
    slots = sj_condition_slots(6, a, b, c, d)
    return bool(any(slots)), _fired(6, slots)


def all_conditions(a, b, c, d) -> dict[int, tuple]:
    """Slot truth values for every index: {j: (5 bools)}."""
    return {j: sj_condition_slots(j, a, b, c, d) for j in range(1, 13)}


def all_conditions_batch(a, b, c, d):
    """Vectorised: (12, 5, N) boolean array of slot truth values."""
    a, b, c, d = np.asarray(a), np.asarray(b), np.asarray(c), np.asarray(d)
    out = np.zeros((12, 5) + np.shape(a), dtype=bool)
    for j in range(1, 13):
        for k, slot in enumerate(sj_condition_slots(j, a, b, c, d)):
            out[j - 1, k] = np.broadcast_to(slot, np.shape(a))
    return out


@dataclass(frozen=True)
class OppositeResult:
    """The twelve route values, the distance, and condition diagnostics."""

    s: tuple[float, ...]
    distance: float
    minimizers: frozenset[int]
    condition_hits: dict[int, tuple[str, ...]]


def opposite3_distance(a, b, c, d, tie_tol: float = TIE_TOL) -> OppositeResult:
    """Distance and diagnostics for canonical opposite inputs (n = 3)."""
    s = s_values(a, b, c, d)
    dist = min(s)
    mins = frozenset(j for j in range(1, 13) if s[j - 1] <= dist + tie_tol)
    hits: dict[int, tuple[str, ...]] = {}
    for j in range(1, 13):
        slots = sj_condition_slots(j, a, b, c, d)
        labels = condition_labels(j)
        hits[j] = tuple(labels[k] for k in range(5) if slots[k])
    return OppositeResult(tuple(s), float(dist), mins, hits)


# ---------------------------------------------------------------------------
# Witness paths
# ---------------------------------------------------------------------------


def _clip_interval(lo: float, hi: float) -> float:
    lo, hi = max(lo, -1.0), min(hi, 1.0)
    if lo > hi + 1e-12:
        raise SurfaceError(f"internal inconsistency: empty witness interval [{lo}, {hi}]")
    return 0.5 * (lo + hi)


def _three_leg_vertices(a, b, c, d, j: int) -> list[tuple[float, float, float]]:
    """Witness vertices for s1..s4: one crossing facet, two free crossings.

    For s1 the route runs over x1 = +1 through (1, 1, z1) and (-1, 1, z2) with
    |z1 - b| <= 1-a and |z2 - d| <= 1-c, so each end leg costs exactly its
    facet gap and the middle leg costs 2.  s2 mirrors on x1 = -1, s3/s4 swap
    the roles of the last two axes (crossings (1, y1, +-1), (-1, y2, +-1)).
    """
    if j == 1:
        z1 = _clip_interval(b - (1 - a), b + (1 - a))
        z2 = _clip_interval(d - (1 - c), d + (1 - c))
        return [(1.0, a, b), (1.0, 1.0, z1), (-1.0, 1.0, z2), (-1.0, c, d)]
    if j == 2:
        z1 = _clip_interval(b - (1 + a), b + (1 + a))
        z2 = _clip_interval(d - (1 + c), d + (1 + c))
        return [(1.0, a, b), (1.0, -1.0, z1), (-1.0, -1.0, z2), (-1.0, c, d)]
    if j == 3:
        y1 = _clip_interval(a - (1 - b), a + (1 - b))
        y2 = _clip_interval(c - (1 - d), c + (1 - d))
        return [(1.0, a, b), (1.0, y1, 1.0), (-1.0, y2, 1.0), (-1.0, c, d)]
    if j == 4:
        y1 = _clip_interval(a - (1 + b), a + (1 + b))
        y2 = _clip_interval(c - (1 + d), c + (1 + d))
        return [(1.0, a, b), (1.0, y1, -1.0), (-1.0, y2, -1.0), (-1.0, c, d)]
    raise SurfaceError(f"no three-leg witness for index {j}")


def _four_leg_vertices_s6(a, b, c, d) -> list[tuple[float, float, float]]:
    """Witness vertices for s6: A -> (1,y,-1) -> (x,1,-1) -> (-1,1,z) -> B.

    Case (a) (1+a+b <= c+d-1, so s6 = 2-a+d): any y = z = x = m with m in
    [1+a+b, c+d-1] telescopes to length 2-a+d; we take the midpoint.
    Case (b) (s6 = 4+b-c): equality needs |y-a| <= 1+b, |z-d| <= 1-c and
    z <= x <= y; when those two intervals overlap we take y = z = x at the
    midpoint of the overlap, otherwise z at the top of its interval, y at the
    bottom of its interval, x between them.
    """
    lo_a = (1 + a) + b
    hi_a = (c + d) - 1
    if lo_a <= hi_a:
        m = 0.5 * (lo_a + hi_a)
        y = z = x = m
    else:
        lo = max(a - (1 + b), d - (1 - c), -1.0)
        hi = min(a + (1 + b), d + (1 - c), 1.0)
        if lo <= hi:
            y = z = x = 0.5 * (lo + hi)
        else:
            z = max(d - (1 - c), -1.0)
            y = min(a + (1 + b), 1.0)
            if z > y:
                raise SurfaceError("internal inconsistency: no feasible four-leg witness")
            x = 0.5 * (z + y)
    return [(1.0, a, b), (1.0, y, -1.0), (x, 1.0, -1.0), (-1.0, 1.0, z), (-1.0, c, d)]


# Point maps carrying the canonical s6 witness (computed at sigma_j(v)) back to
# the original frame; j=10 additionally reverses the path (A and B swap).
_POINT_MAPS_BACK = {
    5: lambda p: (p[0], p[1], -p[2]),
    7: lambda p: (p[0], -p[1], -p[2]),
    8: lambda p: (p[0], -p[1], p[2]),
    9: lambda p: (p[0], -p[2], p[1]),
    10: lambda p: (-p[0], p[1], p[2]),
    11: lambda p: (p[0], p[2], p[1]),
    12: lambda p: (p[0], p[2], -p[1]),
}


def opposite3_witness(a, b, c, d, tie_tol: float = TIE_TOL) -> GeodesicPath:
    """A concrete geodesic realising min(s1..s12) for canonical opposite inputs.

    Builds the witness for the smallest minimal index: three-leg routes for
    s1..s4, the four-leg construction for s6, and for the other four-leg
    indices the s6 construction at the substituted coordinates mapped back
    through the corresponding isometry.  The result is verified (length equals
    the distance to 1e-12, endpoints exactly A and B) before returning.
    """
    s = s_values(a, b, c, d)
    dist = min(s)
    j = next(k for k in range(1, 13) if s[k - 1] <= dist + tie_tol)
    if j <= 4:
        verts = _three_leg_vertices(a, b, c, d, j)
    elif j == 6:
        verts = _four_leg_vertices_s6(a, b, c, d)
    else:
        a2, b2, c2, d2 = _substitute(j, a, b, c, d)
        raw = _four_leg_vertices_s6(a2, b2, c2, d2)
        back = _POINT_MAPS_BACK[j]
        verts = [back(p) for p in raw]
        if j == 10:
            verts = list(reversed(verts))
    path = GeodesicPath.from_vertices([make_surface_point(v) for v in verts])
    if abs(path.total_length - dist) > 1e-12:
        raise SurfaceError(
            f"internal inconsistency: witness length {path.total_length} != distance {dist} (index {j})"
        )
    if path.vertices[0].coords != (1.0, a, b) or path.vertices[-1].coords != (-1.0, c, d):
        raise SurfaceError("internal inconsistency: witness endpoints do not match the inputs")
    return path
