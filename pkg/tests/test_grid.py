"""King-move lattice graph on the cube surface: structure, snapping, search."""

import numpy as np
import pytest

from cubegeo.gridgraph import SurfaceGrid, clear_grid_cache, shared_grid
from cubegeo.surface import SurfaceError, make_surface_point


@pytest.fixture(scope="module")
def grid20() -> SurfaceGrid:
    return SurfaceGrid.build(3, 20)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def test_exact_surface_node_count(grid20):
    # Inclusion-exclusion on 6 facets of (K+1)^2 nodes: 6(K+1)^2 - 12(K+1) + 8.
    K = 20
    assert grid20.node_ids.size == 6 * (K + 1) ** 2 - 12 * (K + 1) + 8
    assert grid20.h == 0.1


def test_node_count_bound_dominates_actual_count(grid20):
    assert grid20.node_ids.size <= SurfaceGrid.node_count_bound(3, 20)
    assert SurfaceGrid.node_count_bound(3, 20) == 6 * 21 * 21
    assert SurfaceGrid.node_count_bound(4, 10) == 8 * 11**3


def test_resolution_must_be_even_and_at_least_ten():
    with pytest.raises(SurfaceError):
        SurfaceGrid.build(3, 21)
    with pytest.raises(SurfaceError):
        SurfaceGrid.build(3, 8)


def test_adjacency_is_symmetric(grid20):
    indptr, indices = grid20.indptr, grid20.indices
    for u in range(0, grid20.node_ids.size, 97):
        for v in indices[indptr[u] : indptr[u + 1]]:
            assert u in indices[indptr[v] : indptr[v + 1]]


def test_neighbors_are_king_steps_on_the_surface(grid20):
    indptr, indices = grid20.indptr, grid20.indices
    idx = grid20.idx
    for u in range(0, grid20.node_ids.size, 211):
        du = idx[u]
        for v in indices[indptr[u] : indptr[u + 1]]:
            step = np.abs(idx[v].astype(int) - du.astype(int))
            assert step.max() == 1  # a king move
            # both endpoints stay on the surface
            assert (idx[v] == 0).any() or (idx[v] == 20).any()


# ---------------------------------------------------------------------------
# snapping
# ---------------------------------------------------------------------------


def test_lattice_points_round_trip(grid20):
    p = make_surface_point((1.0, 0.4, -0.3))
    row = grid20.snap(p)
    assert grid20.node_coords(row) == pytest.approx((1.0, 0.4, -0.3), abs=1e-12)


def test_snap_moves_at_most_half_a_cell(grid20):
    rng = np.random.default_rng(0)
    for _ in range(50):
        coords = rng.uniform(-1, 1, 3)
        coords[int(rng.integers(0, 3))] = 1.0
        p = make_surface_point(tuple(coords))
        q = grid20.node_coords(grid20.snap(p))
        assert np.max(np.abs(np.asarray(q) - coords)) <= grid20.h / 2 + 1e-12


def test_snap_rejects_interior_points(grid20):
    with pytest.raises(SurfaceError):
        grid20.snap_indices((0.5, 0.5, 0.5))


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------


def test_within_facet_distance_is_chebyshev_exactly(grid20):
    rng = np.random.default_rng(1)
    for _ in range(100):
        ia = rng.integers(0, 21, 3)
        ib = rng.integers(0, 21, 3)
        ia[0] = ib[0] = 20  # both on the facet x0 = +1
        ra = grid20.snap(tuple(-1 + 0.1 * ia))
        rb = grid20.snap(tuple(-1 + 0.1 * ib))
        moves = grid20.moves(ra, rb)
        assert moves == np.max(np.abs(ia - ib))


def test_opposite_centres_distance(grid20):
    a = make_surface_point((1.0, 0.0, 0.0))
    b = make_surface_point((-1.0, 0.0, 0.0))
    assert grid20.distance(a, b) == pytest.approx(4.0, abs=1e-12)


def test_distance_is_moves_times_spacing(grid20):
    a = make_surface_point((1.0, 0.3, 0.0))
    b = make_surface_point((0.3, 1.0, -0.2))
    ra, rb = grid20.snap(a), grid20.snap(b)
    assert grid20.distance(a, b) == grid20.moves(ra, rb) * grid20.h


def test_distance_symmetric(grid20):
    a = make_surface_point((1.0, 0.37, -0.81))
    b = make_surface_point((-0.63, -1.0, 0.12))
    assert grid20.distance(a, b) == grid20.distance(b, a)


def test_four_dimensional_grid_smoke():
    g = SurfaceGrid.build(4, 10)
    a = make_surface_point((1.0, 0.0, 0.0, 0.0))
    b = make_surface_point((-1.0, 0.0, 0.0, 0.0))
    assert g.distance(a, b) == pytest.approx(4.0, abs=1e-12)


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def test_shared_grid_is_cached():
    clear_grid_cache()
    g1 = shared_grid(3, 10)
    g2 = shared_grid(3, 10)
    assert g1 is g2
    clear_grid_cache()
    assert shared_grid(3, 10) is not g1
