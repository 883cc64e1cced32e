"""Three-route adjacent-facet formulas, conditions, and planar witnesses (n=3)."""

from fractions import Fraction

import numpy as np
import pytest

from cubegeo.adjacent3 import (
    TIE_TOL,
    adjacent3_distance,
    conditions,
    conditions_batch,
    corner_witness_interval,
    planar_beta_path,
    planar_minimal_path,
    planarity_defect,
    route_values,
    route_values_batch,
    two_corner_witness_region,
    two_leg_exists,
)
from cubegeo.oracle import exact_oracle
from cubegeo.surface import SurfaceError, make_surface_point


def _draw(rng, size=4):
    return rng.uniform(-1.0, 1.0, size)


# ---------------------------------------------------------------------------
# route values
# ---------------------------------------------------------------------------


def test_route_values_at_facet_centres():
    # A = (1,0,0), B = (0,1,0): two-leg route across the shared edge.
    alpha, beta, gamma, beta1, gamma1 = route_values(0.0, 0.0, 0.0, 0.0)
    assert alpha == 2.0
    assert beta == 2.0
    assert gamma == 2.0
    assert beta1 == 2.0
    assert gamma1 == 2.0


def test_route_values_simple_two_leg_case():
    # A = (1,0.5,0), B = (0.5,1,0): straight across the shared edge.
    alpha, beta, gamma, _, _ = route_values(0.5, 0.0, 0.5, 0.0)
    assert alpha == 1.0
    assert beta == 1.5
    assert gamma == 1.5


def test_route_values_supports_exact_fractions():
    vals = route_values(Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(0))
    assert vals[0] == Fraction(1)
    assert all(isinstance(v, Fraction) for v in vals[:3])


def test_three_leg_envelopes_dominate_their_routes(rng):
    for _ in range(200):
        ay, az, bx, bz = _draw(rng)
        _, beta, gamma, beta1, gamma1 = route_values(ay, az, bx, bz)
        assert beta1 >= beta
        assert gamma1 >= gamma


def test_batch_matches_scalar_bitwise(rng):
    ay, az, bx, bz = rng.uniform(-1, 1, (4, 500))
    batch = route_values_batch(ay, az, bx, bz)
    for i in range(500):
        scalar = route_values(ay[i], az[i], bx[i], bz[i])
        for k in range(5):
            assert batch[k][i] == scalar[k]


def test_distance_agrees_with_exact_oracle(rng):
    for _ in range(30):
        ay, az, bx, bz = _draw(rng)
        res = adjacent3_distance(ay, az, bx, bz)
        a = make_surface_point((1.0, ay, az))
        b = make_surface_point((bx, 1.0, bz))
        val, _, _ = exact_oracle(a, b)
        assert res.distance == pytest.approx(val, abs=1e-9)


# ---------------------------------------------------------------------------
# result structure
# ---------------------------------------------------------------------------


def test_distance_is_the_minimum_of_the_three_routes(rng):
    for _ in range(300):
        ay, az, bx, bz = _draw(rng)
        res = adjacent3_distance(ay, az, bx, bz)
        assert res.distance == min(res.alpha, res.beta, res.gamma)


def test_minimizers_collect_all_ties():
    # Symmetric inputs: all three routes equal 2.
    res = adjacent3_distance(0.0, 0.0, 0.0, 0.0)
    assert res.minimizers == {"alpha", "beta", "gamma"}


def test_satisfied_conditions_match_minimizing_routes(rng):
    groups = {"alpha": (1, 2, 3, 4), "beta": (5, 6, 7, 8), "gamma": (9, 10, 11, 12)}
    for _ in range(300):
        ay, az, bx, bz = _draw(rng)
        res = adjacent3_distance(ay, az, bx, bz)
        fired_groups = {
            name for name, idx in groups.items() if any(i in res.satisfied_conditions for i in idx)
        }
        assert fired_groups.issuperset(res.minimizers)


def test_conditions_batch_matches_scalar(rng):
    ay, az, bx, bz = rng.uniform(-1, 1, (4, 200))
    batch = conditions_batch(ay, az, bx, bz)
    assert batch.shape == (12, 200)
    for i in range(200):
        scalar = conditions(ay[i], az[i], bx[i], bz[i])
        for j in range(1, 13):
            assert batch[j - 1, i] == scalar[j]


def test_two_leg_exists_equals_first_condition_group(rng):
    for _ in range(200):
        ay, az, bx, bz = _draw(rng)
        cond = conditions(ay, az, bx, bz)
        assert two_leg_exists(ay, az, bx, bz) == any(cond[j] for j in (1, 2, 3, 4))


# ---------------------------------------------------------------------------
# corner witness (two-leg routes)
# ---------------------------------------------------------------------------


def test_corner_witness_interval_for_centres():
    w = corner_witness_interval(0.5, 0.0, 0.5, 0.0)
    assert w.z_lo <= w.z_hi
    assert w.path.total_length == adjacent3_distance(0.5, 0.0, 0.5, 0.0).distance
    corner = w.path.vertices[1]
    assert corner.coords[0] == 1.0 and corner.coords[1] == 1.0


def test_corner_witness_interval_is_exactly_the_minimizer_set(rng):
    for _ in range(100):
        ay, az, bx, bz = _draw(rng)
        res = adjacent3_distance(ay, az, bx, bz)
        if "alpha" not in res.minimizers:
            continue
        w = corner_witness_interval(ay, az, bx, bz)

        def corner_len(z):
            return max(1 - ay, abs(z - az)) + max(1 - bx, abs(z - bz))

        for z in (w.z_lo, 0.5 * (w.z_lo + w.z_hi), w.z_hi):
            assert corner_len(z) == pytest.approx(res.alpha, abs=1e-12)
        for z in (w.z_lo - 1e-6, w.z_hi + 1e-6):
            if -1.0 <= z <= 1.0:
                assert corner_len(z) > res.alpha


def test_corner_witness_requires_alpha_minimal():
    # A deep-z pair where the corner route is strictly worse.
    ay, az, bx, bz = -0.9, 0.95, -0.9, 0.95
    res = adjacent3_distance(ay, az, bx, bz)
    if "alpha" in res.minimizers:  # pragma: no cover - guards the fixture choice
        pytest.skip("fixture no longer gamma-minimal")
    with pytest.raises(SurfaceError):
        corner_witness_interval(ay, az, bx, bz)


# ---------------------------------------------------------------------------
# two-corner witness regions (three-leg routes)
# ---------------------------------------------------------------------------


def test_two_corner_region_points_attain_the_route_value(rng):
    checked = 0
    while checked < 50:
        ay, az, bx, bz = _draw(rng)
        res = adjacent3_distance(ay, az, bx, bz)
        region = two_corner_witness_region(ay, az, bx, bz, route="top")
        assert region.value == res.beta1

        def top_len(x, y):
            return (
                max(abs(y - ay), 1 - az)
                + max(1 - x, 1 - y)
                + max(abs(x - bx), 1 - bz)
            )

        for x, y in region.sample_points():
            assert region.contains(x, y, tol=1e-12)
            assert top_len(x, y) == pytest.approx(res.beta1, abs=1e-12)
        checked += 1


def test_two_corner_region_bottom_mirrors_top(rng):
    for _ in range(50):
        ay, az, bx, bz = _draw(rng)
        bottom = two_corner_witness_region(ay, az, bx, bz, route="bottom")
        top = two_corner_witness_region(ay, -az, bx, -bz, route="top")
        assert bottom.value == top.value
        assert (bottom.case, bottom.primary) == (top.case, top.primary)


def test_two_corner_region_rejects_unknown_route():
    with pytest.raises(SurfaceError):
        two_corner_witness_region(0.0, 0.0, 0.0, 0.0, route="sideways")


# ---------------------------------------------------------------------------
# planar witnesses
# ---------------------------------------------------------------------------


def _planar_case_inputs(rng, which):
    """Rejection-sample canonical inputs whose strict minimum is `which`."""
    while True:
        ay, az, bx, bz = _draw(rng)
        alpha, beta, gamma, _, _ = route_values(ay, az, bx, bz)
        if which == "beta" and beta < min(alpha, gamma):
            return ay, az, bx, bz
        if which == "gamma" and gamma < min(alpha, beta):
            return ay, az, bx, bz
        if which == "alpha" and alpha < min(beta, gamma):
            return ay, az, bx, bz


def test_planar_beta_path_properties(rng):
    for _ in range(60):
        ay, az, bx, bz = _planar_case_inputs(rng, "beta")
        if (2 - az) - bx < (2 - ay) - bz:
            ay, az, bx, bz = bx, bz, ay, az  # canonical ordering via the swap symmetry
        path = planar_beta_path(ay, az, bx, bz)
        res = adjacent3_distance(ay, az, bx, bz)
        assert len(path.vertices) == 4
        assert abs(path.total_length - res.distance) <= 1e-12
        assert planarity_defect([v.coords for v in path.vertices]) <= 1e-9
        for mid in path.vertices[1:3]:
            assert sum(abs(c) == 1.0 for c in mid.coords) >= 2


def test_planar_minimal_path_handles_all_routes(rng):
    for which in ("alpha", "beta", "gamma"):
        for _ in range(25):
            ay, az, bx, bz = _planar_case_inputs(rng, which)
            path = planar_minimal_path(ay, az, bx, bz)
            res = adjacent3_distance(ay, az, bx, bz)
            assert abs(path.total_length - res.distance) <= 1e-12
            assert planarity_defect([v.coords for v in path.vertices]) <= 1e-9
            assert path.vertices[0].coords == (1.0, ay, az)
            assert path.vertices[-1].coords == (bx, 1.0, bz)


def test_planar_beta_path_rejects_non_minimal_beta():
    ay, az, bx, bz = 0.5, 0.0, 0.5, 0.0  # alpha strictly minimal here
    with pytest.raises(SurfaceError):
        planar_beta_path(ay, az, bx, bz)


def test_planarity_defect_zero_for_three_points():
    pts = [(1.0, 0.0, 0.0), (1.0, 1.0, 0.5), (0.0, 1.0, 0.25)]
    assert planarity_defect(pts) == 0.0


def test_planarity_defect_positive_for_skew_quadruple():
    pts = [(1.0, 0.0, 0.0), (1.0, 1.0, 0.0), (0.0, 1.0, 1.0), (0.0, 0.0, 5.0)]
    assert planarity_defect(pts) > 1.0


def test_tie_tolerance_is_pinned():
    assert TIE_TOL == 1e-12
