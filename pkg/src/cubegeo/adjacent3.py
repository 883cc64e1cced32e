"""Closed-form geodesic distance between points on adjacent facets (n = 3).

Canonical frame: A = (1, ay, az) on the facet x0 = +1 and B = (bx, 1, bz) on
the facet x1 = +1.  Three route families cover all geodesics:

* ``alpha`` — two legs over the shared edge x0 = x1 = 1, through one corner
  point C = (1, 1, z);
* ``beta``  — three legs over the top facet x2 = +1, through two corner points
  C1 = (1, y, 1) and C2 = (x, 1, 1);
* ``gamma`` — the mirror route over the bottom facet x2 = -1.

The distance is min(alpha, beta, gamma).  ``beta1``/``gamma1`` are the
unclipped three-term forms whose witness regions are described by
:func:`two_corner_witness_region`; they agree with beta/gamma whenever the latter is
minimal.  Twelve inequality systems (ids 1..12) characterise exactly which
routes are minimal: 1-4 for alpha, 5-8 for beta, 9-12 for gamma.

Scalar functions use plain Python arithmetic, so exact types such as
``fractions.Fraction`` pass through unchanged; ``*_batch`` variants take numpy
arrays.  Scalar and batch evaluation use identical expression trees, so their
float results agree bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surface import GeodesicPath, SurfaceError, make_surface_point

__all__ = [
    "TIE_TOL",
    "route_values",
    "route_values_batch",
    "conditions",
    "conditions_batch",
    "ALPHA_CONDITIONS",
    "BETA_CONDITIONS",
    "GAMMA_CONDITIONS",
    "AdjacentResult",
    "adjacent3_distance",
    "two_leg_exists",
    "corner_route_length",
    "top_route_length",
    "bottom_route_length",
    "CornerWitness",
    "corner_witness_interval",
    "WitnessRegion",
    "two_corner_witness_region",
    "planarity_defect",
    "planar_beta_path",
    "planar_minimal_path",
]

TIE_TOL = 1e-12

ALPHA_CONDITIONS = (1, 2, 3, 4)
BETA_CONDITIONS = (5, 6, 7, 8)
GAMMA_CONDITIONS = (9, 10, 11, 12)


# ---------------------------------------------------------------------------
# Route values
# ---------------------------------------------------------------------------


def route_values(ay, az, bx, bz):
    """(alpha, beta, gamma, beta1, gamma1) for canonical adjacent inputs."""
    alpha = max((2 - ay) - bx, abs(az - bz))
    beta = max((2 - az) - bx, (2 - ay) - bz)
    gamma = max((2 + az) - bx, (2 - ay) + bz)
    beta1 = max((2 - az) - bx, (2 - ay) - bz, (2 - az) - bz)
    gamma1 = max((2 + az) - bx, (2 - ay) + bz, (2 + az) + bz)
    return alpha, beta, gamma, beta1, gamma1


def route_values_batch(ay, az, bx, bz):
    """Vectorised :func:`route_values` (same expression trees, numpy arrays)."""
    alpha = np.maximum((2 - ay) - bx, np.abs(az - bz))
    beta = np.maximum((2 - az) - bx, (2 - ay) - bz)
    gamma = np.maximum((2 + az) - bx, (2 - ay) + bz)
    beta1 = np.maximum(beta, (2 - az) - bz)
    gamma1 = np.maximum(gamma, (2 + az) + bz)
    return alpha, beta, gamma, beta1, gamma1


# ---------------------------------------------------------------------------
# Minimality conditions (ids 1..12)
# ---------------------------------------------------------------------------


def conditions(ay, az, bx, bz):
    """The twelve route-minimality tests as a dict {id: bool}.

    Works elementwise on numpy arrays as well (returns boolean arrays).  In
    exact arithmetic: alpha is minimal iff one of 1-4 holds, beta iff one of
    5-8, gamma iff one of 9-12.
    """
    a, b, c, d = ay, az, bx, bz
    return {
        1: abs(b) <= a,
        2: abs(d) <= c,
        3: (abs(a) <= b) & (abs(c) <= -d),
        4: (abs(a) <= -b) & (abs(c) <= d),
        5: (a <= b) & (c <= d) & (b >= 0) & (c <= (a + b) + d),
        6: (a <= b) & (c <= d) & (d >= 0) & (a <= (c + b) + d),
        7: (a == 1) & (b == 1),
        8: (c == 1) & (d == 1),
        9: (a <= -b) & (c <= -d) & (b <= 0) & (c <= (a - b) - d),
        10: (a <= -b) & (c <= -d) & (d <= 0) & (a <= (c - b) - d),
        11: (a == 1) & (b == -1),
        12: (c == 1) & (d == -1),
    }


def conditions_batch(ay, az, bx, bz):
    """Vectorised conditions as a (12, N) boolean array (row j-1 is id j)."""
    cond = conditions(np.asarray(ay), np.asarray(az), np.asarray(bx), np.asarray(bz))
    return np.array([np.broadcast_to(cond[j], np.shape(ay)) for j in range(1, 13)])


def two_leg_exists(ay, az, bx, bz) -> bool:
    """True iff some two-leg route over the shared edge is a geodesic (ids 1-4)."""
    cond = conditions(ay, az, bx, bz)
    return bool(cond[1] | cond[2] | cond[3] | cond[4])


@dataclass(frozen=True)
class AdjacentResult:
    """Route values, the distance, and which routes/conditions are active."""

    alpha: float
    beta: float
    gamma: float
    beta1: float
    gamma1: float
    distance: float
    minimizers: frozenset[str]
    satisfied_conditions: tuple[int, ...]


def adjacent3_distance(ay, az, bx, bz, tie_tol: float = TIE_TOL) -> AdjacentResult:
    """Distance and diagnostics for canonical adjacent inputs (n = 3)."""
    alpha, beta, gamma, beta1, gamma1 = route_values(ay, az, bx, bz)
    dist = min(alpha, beta, gamma)
    mins = frozenset(
        name for name, val in (("alpha", alpha), ("beta", beta), ("gamma", gamma)) if val <= dist + tie_tol
    )
    cond = conditions(ay, az, bx, bz)
    fired = tuple(j for j in range(1, 13) if cond[j])
    return AdjacentResult(alpha, beta, gamma, beta1, gamma1, dist, mins, fired)


# ---------------------------------------------------------------------------
# Direct route-length evaluators (used by witness verification and tests)
# ---------------------------------------------------------------------------


def corner_route_length(ay, az, bx, bz, z):
    """Length of the two-leg route A -> (1,1,z) -> B."""
    return max(1 - ay, abs(z - az)) + max(1 - bx, abs(z - bz))


def top_route_length(ay, az, bx, bz, x, y):
    """Length of the three-leg route A -> (1,y,1) -> (x,1,1) -> B."""
    return max(abs(y - ay), 1 - az) + max(1 - x, 1 - y) + max(abs(x - bx), 1 - bz)


def bottom_route_length(ay, az, bx, bz, x, y):
    """Length of the three-leg route A -> (1,y,-1) -> (x,1,-1) -> B."""
    return top_route_length(ay, -az, bx, -bz, x, y)


# ---------------------------------------------------------------------------
# Corner witness for alpha (two-leg routes)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CornerWitness:
    """The z-interval of corners (1,1,z) realising a two-leg geodesic."""

    z_lo: float
    z_hi: float
    path: GeodesicPath


def corner_witness_interval(ay, az, bx, bz, tie_tol: float = TIE_TOL) -> CornerWitness:
    """Witness interval and a concrete two-leg geodesic for alpha-minimal inputs.

    The corner length f(z) = max(1-ay, |z-az|) + max(1-bx, |z-bz|) attains its
    minimum alpha exactly on an interval:

    * if |az - bz| <= (2 - ay) - bx the two per-leg slack intervals overlap and
      the minimiser set is [max(ay+az-1, bx+bz-1, -1), min(az-ay+1, bz-bx+1, 1)];
    * otherwise the intervals are disjoint and the minimiser set is the band
      between them ([1-bx+bz, ay+az-1] when az > bz, mirrored otherwise).

    The returned path goes through the interval midpoint.
    """
    alpha, beta, gamma, _, _ = route_values(ay, az, bx, bz)
    if alpha > min(beta, gamma) + tie_tol:
        raise SurfaceError(f"two-leg route is not minimal: alpha={alpha} > min(beta,gamma)={min(beta, gamma)}")
    if abs(az - bz) <= (2 - ay) - bx:
        lo = max((ay + az) - 1, (bx + bz) - 1, -1.0)
        hi = min((az - ay) + 1, (bz - bx) + 1, 1.0)
    elif az > bz:
        lo, hi = (1 - bx) + bz, (ay + az) - 1
    else:
        lo, hi = (az - ay) + 1, (bx + bz) - 1
    if lo > hi + tie_tol:
        raise SurfaceError(f"internal inconsistency: empty corner interval [{lo}, {hi}]")
    z = 0.5 * (lo + hi)
    a_pt = make_surface_point((1.0, ay, az))
    b_pt = make_surface_point((bx, 1.0, bz))
    if a_pt.coords == b_pt.coords:
        path = GeodesicPath.from_vertices([a_pt])
    else:
        path = GeodesicPath.from_vertices([a_pt, make_surface_point((1.0, 1.0, z)), b_pt])
    if abs(path.total_length - alpha) > 1e-12:
        raise SurfaceError(
            f"internal inconsistency: corner witness length {path.total_length} != alpha {alpha}"
        )
    return CornerWitness(lo, hi, path)


# ---------------------------------------------------------------------------
# Two-corner witness regions for beta1 / gamma1 (three-leg routes)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessRegion:
    """Where the three-leg route value attains beta1 (route 'top') or gamma1 ('bottom').

    The region lives in the (x, y) corner coordinates of the route
    A -> (1, y, s) -> (x, 1, s) -> B with s = +1 (top) or s = -1 (bottom).  It
    is described by a primary interval and a secondary interval whose lower
    end may additionally be clipped by the primary variable:

    * case 'a' (x-gap largest): primary is x in [x_lo, x_hi], and for each x
      the valid y are [max(sec_lo, x), sec_hi];
    * case 'b' (y-gap largest): primary is y, and valid x are
      [max(sec_lo, y), sec_hi];
    * case 'c' (cross-gap largest): the single corner pair x = y = 1.
    """

    route: str
    case: str
    value: float
    primary: str  # 'x' or 'y'
    primary_lo: float
    primary_hi: float
    sec_lo: float
    sec_hi: float

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        p, s = (x, y) if self.primary == "x" else (y, x)
        if not (self.primary_lo - tol <= p <= self.primary_hi + tol):
            return False
        return max(self.sec_lo, p) - tol <= s <= self.sec_hi + tol

    def sample_points(self) -> list[tuple[float, float]]:
        """A few (x, y) pairs inside the region (corners and midpoints)."""
        pts: list[tuple[float, float]] = []
        for p in {self.primary_lo, 0.5 * (self.primary_lo + self.primary_hi), self.primary_hi}:
            lo = max(self.sec_lo, p)
            for s in {lo, 0.5 * (lo + self.sec_hi), self.sec_hi}:
                pts.append((p, s) if self.primary == "x" else (s, p))
        return sorted(set(pts))


def two_corner_witness_region(ay, az, bx, bz, route: str = "top") -> WitnessRegion:
    """Exact minimiser region of the three-leg route value g(x, y).

    For the top route, g(x,y) = max(|y-ay|, 1-az) + max(1-x, 1-y)
    + max(|x-bx|, 1-bz) has minimum beta1 = max(x1, y1, z1) with
    x1 = (2-az)-bx, y1 = (2-ay)-bz, z1 = (2-az)-bz; which term is largest
    selects the region shape.  The bottom route is the z-mirror (value gamma1).
    """
    if route == "top":
        a2, b2 = az, bz
    elif route == "bottom":
        a2, b2 = -az, -bz
    else:
        raise SurfaceError(f"route must be 'top' or 'bottom', got {route!r}")
    x1 = (2 - a2) - bx
    y1 = (2 - ay) - b2
    z1 = (2 - a2) - b2
    value = max(x1, y1, z1)
    if x1 >= y1 and x1 >= z1:
        case = "a"
        primary = "x"
        p_lo = (1 + bx) - b2
        p_hi = min(1.0, (1 + ay) - a2)
        s_lo = (ay + a2) - 1
        s_hi = min(1.0, (1 + ay) - a2)
    elif y1 >= z1:
        case = "b"
        primary = "y"
        p_lo = (1 + ay) - a2
        p_hi = min(1.0, (1 + bx) - b2)
        s_lo = (bx + b2) - 1
        s_hi = min(1.0, (1 + bx) - b2)
    else:
        case = "c"
        primary = "x"
        p_lo = p_hi = 1.0
        s_lo = s_hi = 1.0
    if p_lo > p_hi + 1e-12:
        raise SurfaceError(f"internal inconsistency: empty witness region [{p_lo}, {p_hi}]")
    return WitnessRegion(route, case, value, primary, p_lo, min(p_hi, 1.0), s_lo, s_hi)


# ---------------------------------------------------------------------------
# Planar three-leg witness paths
# ---------------------------------------------------------------------------


def planarity_defect(coords) -> float:
    """How far a list of 3-d points is from lying in one plane.

    For exactly four points this is |det(v1-v0, v2-v0, v3-v0)|; in general it
    is the third singular value of the stacked difference matrix (0 for any
    coplanar set).
    """
    pts = np.asarray(coords, dtype=float)
    if pts.shape[0] <= 3:
        return 0.0
    diff = pts[1:] - pts[0]
    if pts.shape[0] == 4:
        return float(abs(np.linalg.det(diff)))
    return float(np.linalg.svd(diff, compute_uv=False)[2])


def _planar_beta_vertices(ay, az, bx, bz) -> list[tuple[float, float, float]]:
    """Corner pair (x, y) for a coplanar top-route geodesic, canonical ordering.

    Requires x1 >= y1 (x-gap at least y-gap), so the minimiser region is case
    'a'.  Within it, coplanarity of {A, (1,y,1), (x,1,1), B} means
    (1-az)(1-y)(x-bx) = (y-ay)(1-x)(1-bz); solving for y at a given x gives
    y(x) = [ay(1-x)(1-bz) + (1-az)(x-bx)] / [(1-x)(1-bz) + (1-az)(x-bx)],
    which meets the region constraint y >= x up to the pivot
    x* = (bx*p + q)/(p + q) with p = az-ay, q = 1-bz.  We take the midpoint of
    [x_lo, x*].  When the denominator vanishes both products are zero and any
    y in the region works.
    """
    if ay == 1.0 and bx == 1.0 and az == bz:
        return [(1.0, ay, az)]
    if ay == az and bz == 1.0:
        x, y = bx, 1.0
    else:
        p = az - ay
        q = 1 - bz
        x_lo = (1 + bx) - bz
        x_piv = (bx * p + q) / (p + q)
        x = 0.5 * (x_lo + x_piv) if x_piv > x_lo else x_lo
        den = (1 - x) * q + (1 - az) * (x - bx)
        if den > 1e-14:
            y = (ay * (1 - x) * q + (1 - az) * (x - bx)) / den
        else:
            y = 0.5 * (max((ay + az) - 1, x) + min(1.0, (1 + ay) - az))
        y_lo = max((ay + az) - 1, x)
        y_hi = min(1.0, (1 + ay) - az)
        y = min(max(y, y_lo), y_hi)
    return [(1.0, ay, az), (1.0, y, 1.0), (x, 1.0, 1.0), (bx, 1.0, bz)]


def planar_beta_path(ay, az, bx, bz, tie_tol: float = TIE_TOL) -> GeodesicPath:
    """A coplanar top-route geodesic for beta-minimal canonical inputs.

    Preconditions: beta = min(alpha, beta, gamma) and (2-az)-bx >= (2-ay)-bz
    (the other ordering and the gamma case are reached through the coordinate
    symmetries; see :func:`planar_minimal_path`).  The result is verified
    before returning: total length equals beta to 1e-12 and the four vertices
    are coplanar to 1e-9.
    """
    alpha, beta, gamma, _, _ = route_values(ay, az, bx, bz)
    if beta > min(alpha, gamma) + tie_tol:
        raise SurfaceError(f"top route is not minimal: beta={beta} > min(alpha,gamma)={min(alpha, gamma)}")
    if (2 - az) - bx < (2 - ay) - bz - tie_tol:
        raise SurfaceError("canonical ordering required: x-gap (2-az)-bx must be >= y-gap (2-ay)-bz")
    verts = _planar_beta_vertices(ay, az, bx, bz)
    path = GeodesicPath.from_vertices([make_surface_point(v) for v in verts])
    if len(verts) > 1 and abs(path.total_length - beta) > 1e-12:
        raise SurfaceError(f"internal inconsistency: planar witness length {path.total_length} != beta {beta}")
    defect = planarity_defect([v.coords for v in path.vertices])
    if defect > 1e-9:
        raise SurfaceError(f"internal inconsistency: witness not coplanar (defect {defect})")
    return path


def planar_minimal_path(ay, az, bx, bz, tie_tol: float = TIE_TOL) -> GeodesicPath:
    """A coplanar geodesic for any canonical adjacent input.

    Dispatches on the minimal route: alpha gives the two-leg corner witness
    (three points, trivially coplanar); beta/gamma reduce to
    :func:`planar_beta_path` through the swap symmetry (x,y,z) -> (y,x,z)
    (which exchanges the roles of A and B) and the mirror z -> -z.
    """
    alpha, beta, gamma, _, _ = route_values(ay, az, bx, bz)
    if alpha <= min(beta, gamma):
        return corner_witness_interval(ay, az, bx, bz, tie_tol).path
    if gamma < beta:
        flipped = planar_minimal_path(ay, -az, bx, -bz, tie_tol)
        verts = [make_surface_point((v.coords[0], v.coords[1], -v.coords[2])) for v in flipped.vertices]
        return GeodesicPath.from_vertices(verts)
    if (2 - az) - bx >= (2 - ay) - bz:
        return planar_beta_path(ay, az, bx, bz, tie_tol)
    swapped = planar_beta_path(bx, bz, ay, az, tie_tol)
    verts = [make_surface_point((v.coords[1], v.coords[0], v.coords[2])) for v in reversed(swapped.vertices)]
    return GeodesicPath.from_vertices(verts)
