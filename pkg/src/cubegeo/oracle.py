"""Ground-truth oracles for surface geodesics.

Two fully independent engines cross-check the closed forms:

* ``exact_oracle`` enumerates facet sequences (chains of facets, consecutive
  ones sharing an (n-2)-face) and, for each, minimizes the exact path length
  over the crossing points.  Leg lengths are sup norms, so the objective is a
  sum of maxima of absolute affine functions -- convex piecewise-linear -- and
  is minimized exactly by a linear program with one epigraph variable per leg.
* ``grid_oracle`` (see :mod:`cubegeo.gridgraph`) runs shortest-path search on a
  king-move lattice; it is approximate with an explicit resolution bound but
  shares no code or ideas with the LP route.

A cheap per-sequence lower bound (sum over legs of the largest coordinate gap
forced by the fixed crossing coordinates) sorts and prunes the LP work; the
pruned and unpruned paths are equivalent and tested to agree.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np
from scipy.optimize import linprog

from .gridgraph import shared_grid
from .surface import (
    FaceId,
    GeodesicPath,
    SurfaceError,
    SurfacePoint,
    make_surface_point,
    sup_distance,
)

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "default_depth",
    "default_grid_resolution",
    "enumerate_face_sequences",
    "chain_lower_bound",
    "minimize_over_sequence",
    "exact_oracle",
    "restricted_exact_oracle",
    "grid_oracle",
]

#: Safety valve for grid sizes: 2n(K+1)^(n-1) must stay below this.
DEFAULT_NODE_BUDGET = 2_000_000

_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}

_SOLVE_SLACK = 1e-12


def default_depth(n: int) -> int:
    """Default facet-sequence depth: 5 for n=3, 4 otherwise."""
    return 5 if n == 3 else 4


def default_grid_resolution(n: int) -> int:
    """Default lattice resolution K: 200 for n=3, 40 for n=4, 10 beyond."""
    if n == 3:
        return 200
    if n == 4:
        return 40
    return 10


# ---------------------------------------------------------------------------
# Facet sequences
# ---------------------------------------------------------------------------


def enumerate_face_sequences(
    a: SurfacePoint, b: SurfacePoint, depth: int
) -> Iterator[tuple[FaceId, ...]]:
    """All facet chains from a facet of A to a facet of B, up to ``depth``.

    Consecutive facets share an (n-2)-face (for the cube: their axes differ);
    no facet is ever revisited, which also rules out immediate backtracking.
    Sequences come out in deterministic sorted order, shortest first.
    """
    if a.n != b.n:
        raise SurfaceError("dimension mismatch")
    if depth < 1:
        raise SurfaceError("depth must be >= 1")
    n = a.n
    all_faces = sorted(FaceId(ax, s) for ax in range(n) for s in (1, -1))
    b_faces = b.faces

    def extend(chain: list[FaceId], used: set[FaceId]) -> Iterator[tuple[FaceId, ...]]:
        if chain[-1] in b_faces:
            yield tuple(chain)
        if len(chain) == depth:
            return
        last_axis = chain[-1].axis
        for f in all_faces:
            if f.axis != last_axis and f not in used:
                chain.append(f)
                used.add(f)
                yield from extend(chain, used)
                used.discard(f)
                chain.pop()

    for start in sorted(a.faces):
        yield from extend([start], {start})


def chain_lower_bound(a: SurfacePoint, b: SurfacePoint, seq: Sequence[FaceId]) -> float:
    """Cheap lower bound on the minimal path length along a facet chain.

    Each leg's sup norm is at least the gap in any coordinate whose value is
    pinned at both leg ends (endpoints pin everything; a crossing pins the two
    facet coordinates).  Summing legs and flooring at the direct sup distance
    keeps the bound valid.
    """
    k = len(seq)
    direct = sup_distance(a.coords, b.coords)
    if k == 1:
        return direct
    total = abs(a.coords[seq[1].axis] - seq[1].sign)
    total += abs(b.coords[seq[k - 2].axis] - seq[k - 2].sign)
    for r in range(1, k - 2):
        # leg between crossings r and r+1; crossing r sits on seq[r-1] & seq[r]
        lb = 0.0
        if seq[r - 1].axis == seq[r + 1].axis:
            lb = abs(seq[r - 1].sign - seq[r + 1].sign)
        total += lb
    return max(total, direct)


# ---------------------------------------------------------------------------
# Convex minimization over one facet sequence
# ---------------------------------------------------------------------------


def minimize_over_sequence(
    a_coords: Sequence[float], b_coords: Sequence[float], seq: Sequence[FaceId]
) -> tuple[float, list[tuple[float, ...]]]:
    """Exact minimal length of a path crossing the given facet chain.

    Returns ``(length, crossings)`` where ``crossings`` holds one point per
    interior chain boundary (so ``len(seq) - 1`` points); the full witness is
    ``[A, *crossings, B]``.  Crossing r lies on the shared (n-2)-face of
    ``seq[r]`` and ``seq[r+1]``: those two coordinates are fixed, the rest are
    free in [-1, 1].  The total sup-norm length is minimized exactly via an
    epigraph linear program (one auxiliary variable per leg, one constraint
    per leg/coordinate/sign).
    """
    n = len(a_coords)
    k = len(seq)
    if k < 1:
        raise SurfaceError("empty facet sequence")
    for r in range(k - 1):
        if seq[r].axis == seq[r + 1].axis:
            raise SurfaceError(f"consecutive facets {seq[r]}/{seq[r + 1]} do not touch")
    if abs(a_coords[seq[0].axis] - seq[0].sign) > 1e-12:
        raise SurfaceError("first facet does not contain the start point")
    if abs(b_coords[seq[-1].axis] - seq[-1].sign) > 1e-12:
        raise SurfaceError("last facet does not contain the end point")
    if k == 1:
        return sup_distance(a_coords, b_coords), []

    n_cross = k - 1
    fixed: list[dict[int, float]] = []
    for r in range(n_cross):
        fixed.append({seq[r].axis: float(seq[r].sign), seq[r + 1].axis: float(seq[r + 1].sign)})

    # variable layout: free crossing coordinates first, then one t per leg
    var_of: list[dict[int, int]] = []
    nv = 0
    for r in range(n_cross):
        m = {}
        for i in range(n):
            if i not in fixed[r]:
                m[i] = nv
                nv += 1
        var_of.append(m)
    t0 = nv
    nv += k

    rows = []
    rhs = []

    def coord(point_idx: int, i: int) -> tuple[float, int]:
        """(constant, variable index or -1) for coordinate i of chain point."""
        if point_idx == 0:
            return float(a_coords[i]), -1
        if point_idx == k:
            return float(b_coords[i]), -1
        r = point_idx - 1
        if i in fixed[r]:
            return fixed[r][i], -1
        return 0.0, var_of[r][i]

    for leg in range(k):
        for i in range(n):
            c0, v0 = coord(leg, i)
            c1, v1 = coord(leg + 1, i)
            if v0 < 0 and v1 < 0:
                # constant leg coordinate: fold into a bound on t via a row
                for s in (1.0, -1.0):
                    row = np.zeros(nv)
                    row[t0 + leg] = -1.0
                    rows.append(row)
                    rhs.append(-s * (c1 - c0))
                continue
            for s in (1.0, -1.0):
                row = np.zeros(nv)
                if v1 >= 0:
                    row[v1] += s
                if v0 >= 0:
                    row[v0] -= s
                row[t0 + leg] = -1.0
                rows.append(row)
                rhs.append(-s * (c1 - c0))

    c = np.zeros(nv)
    c[t0:] = 1.0
    bounds = [(-1.0, 1.0)] * t0 + [(0.0, None)] * k
    res = linprog(
        c,
        A_ub=np.array(rows),
        b_ub=np.array(rhs),
        bounds=bounds,
        method="highs",
        options=_LP_OPTIONS,
    )
    if not res.success:  # pragma: no cover - tiny feasible LPs
        raise SurfaceError(f"LP solver failed on sequence {seq}: {res.message}")

    crossings = []
    for r in range(n_cross):
        pt = []
        for i in range(n):
            if i in fixed[r]:
                pt.append(fixed[r][i])
            else:
                pt.append(float(min(1.0, max(-1.0, res.x[var_of[r][i]]))))
        crossings.append(tuple(pt))
    return float(res.fun), crossings


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def exact_oracle(
    a: SurfacePoint,
    b: SurfacePoint,
    depth: int | None = None,
    prune: bool = True,
) -> tuple[float, GeodesicPath, tuple[FaceId, ...]]:
    """Global minimum over all facet chains up to ``depth``, with witness.

    Chains are sorted by their lower bound; with ``prune`` enabled the LP stops
    once remaining bounds exceed the best value found (result unchanged).
    """
    if a.n != b.n:
        raise SurfaceError("dimension mismatch")
    if depth is None:
        depth = default_depth(a.n)
    ranked = sorted(
        ((chain_lower_bound(a, b, seq), seq) for seq in enumerate_face_sequences(a, b, depth)),
        key=lambda item: (item[0], len(item[1]), item[1]),
    )
    if not ranked:  # pragma: no cover - every facet pair is chain-connected
        raise SurfaceError("no facet sequence connects the points at this depth")

    best_val = None
    best_seq = None
    best_cross = None
    for lb, seq in ranked:
        if prune and best_val is not None and lb > best_val + _SOLVE_SLACK:
            break
        val, crossings = minimize_over_sequence(a.coords, b.coords, seq)
        if best_val is None or val < best_val:
            best_val, best_seq, best_cross = val, seq, crossings
    mids = [make_surface_point(c, tol=0.0) for c in best_cross]
    witness = GeodesicPath.from_vertices([a, *mids, b])
    return best_val, witness, best_seq


def restricted_exact_oracle(a: SurfacePoint, b: SurfacePoint, max_faces: int) -> float:
    """Minimal length over facet chains of at most ``max_faces`` facets."""
    val, _, _ = exact_oracle(a, b, depth=max_faces)
    return val


def grid_oracle(
    a: SurfacePoint,
    b: SurfacePoint,
    K: int | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> float:
    """Shortest-path estimate on the king-move lattice with resolution K.

    Both endpoints are snapped to the nearest node (each snap changes the
    length by at most h = 2/K); for n=3 the estimate is within 6h of the true
    geodesic, for n=4 within 8h.
    """
    if a.n != b.n:
        raise SurfaceError("dimension mismatch")
    n = a.n
    if K is None:
        K = default_grid_resolution(n)
    from .gridgraph import SurfaceGrid

    bound = SurfaceGrid.node_count_bound(n, K)
    if bound > node_budget:
        raise SurfaceError(
            f"grid for n={n}, K={K} needs up to {bound} nodes, over the budget {node_budget}"
        )
    grid = shared_grid(n, K)
    return grid.distance(a.coords, b.coords)
