"""King-move lattice over the cube surface: the approximate distance oracle.

The surface of the sup-norm unit ball is discretized with spacing h = 2/K per
axis.  Nodes are the lattice points lying on at least one facet; within a
facet every node connects to all of its up-to 3^(n-1)-1 king-move neighbours,
and every such move has sup-norm length exactly h.  Graph distance therefore
equals (move count) x h, and within a single facet it reproduces the sup-norm
distance of the endpoints exactly (king moves realize the Chebyshev metric).

Shortest paths are found with A* over unit move weights, using the maximum of
two consistent integer lower bounds: the per-axis index gap, and landmark
differences |d(L, v) - d(L, t)| for breadth-first fields d(L, .) precomputed
from every corner of the cube.  All kernels are numba-compiled and reuse
per-grid scratch buffers, so repeated queries allocate nothing.

The estimate returned for arbitrary surface points snaps each endpoint to the
nearest node (ties broken toward lower indices) and is accurate to within a
few h: each snap moves the endpoint by at most h, and each facet crossing of
the true geodesic costs at most one extra move.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
from numba import njit

from .surface import SurfaceError, SurfacePoint

__all__ = ["SurfaceGrid", "shared_grid", "clear_grid_cache"]


# ---------------------------------------------------------------------------
# Numba kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _bfs_fill(indptr, indices, src, dist):
    """Unweighted BFS from src; fills dist (preallocated, will be reset)."""
    n_nodes = dist.shape[0]
    for i in range(n_nodes):
        dist[i] = -1
    queue = np.empty(n_nodes, dtype=np.int32)
    head = 0
    tail = 0
    dist[src] = 0
    queue[tail] = src
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if dist[v] < 0:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1


@njit(cache=True)
def _astar_moves(indptr, indices, idx, lm, src, tgt, g, popped, touched, heap):
    """Minimal king-move count src -> tgt; -1 if unreachable (never happens).

    g/popped are persistent scratch: every entry this call touches is recorded
    in `touched` and reset before returning, so callers need not clear them.
    """
    if src == tgt:
        return np.int64(0)
    n_nodes = g.shape[0]
    n_lm = lm.shape[0]
    n_ax = idx.shape[1]

    # heuristic for the target itself is 0; precompute target columns
    # h(v) = max( max_d |idx[v,d]-idx[t,d]| , max_l |lm[l,v]-lm[l,t]| )
    result = np.int64(-1)
    heap_size = 0
    n_touched = 0

    g[src] = 0
    touched[n_touched] = src
    n_touched += 1

    # initial push
    h0 = np.int64(0)
    for d in range(n_ax):
        gap = np.int64(idx[src, d]) - np.int64(idx[tgt, d])
        if gap < 0:
            gap = -gap
        if gap > h0:
            h0 = gap
    for l in range(n_lm):
        gap = np.int64(lm[l, src]) - np.int64(lm[l, tgt])
        if gap < 0:
            gap = -gap
        if gap > h0:
            h0 = gap
    heap[0] = h0 * n_nodes + src
    heap_size = 1

    while heap_size > 0:
        # pop-min
        top = heap[0]
        heap_size -= 1
        heap[0] = heap[heap_size]
        pos = 0
        while True:
            child = 2 * pos + 1
            if child >= heap_size:
                break
            if child + 1 < heap_size and heap[child + 1] < heap[child]:
                child += 1
            if heap[child] < heap[pos]:
                tmp = heap[pos]
                heap[pos] = heap[child]
                heap[child] = tmp
                pos = child
            else:
                break
        u = top % n_nodes
        if popped[u] == 1:
            continue
        popped[u] = 1
        if u == tgt:
            result = g[u]
            break
        gu = g[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if popped[v] == 1:
                continue
            gv = gu + 1
            old = g[v]
            if old >= 0 and old <= gv:
                continue
            if old < 0:
                touched[n_touched] = v
                n_touched += 1
            g[v] = gv
            hv = np.int64(0)
            for d in range(n_ax):
                gap = np.int64(idx[v, d]) - np.int64(idx[tgt, d])
                if gap < 0:
                    gap = -gap
                if gap > hv:
                    hv = gap
            for l in range(n_lm):
                gap = np.int64(lm[l, v]) - np.int64(lm[l, tgt])
                if gap < 0:
                    gap = -gap
                if gap > hv:
                    hv = gap
            # push
            heap[heap_size] = (gv + hv) * n_nodes + v
            pos = heap_size
            heap_size += 1
            while pos > 0:
                parent = (pos - 1) // 2
                if heap[pos] < heap[parent]:
                    tmp = heap[pos]
                    heap[pos] = heap[parent]
                    heap[parent] = tmp
                    pos = parent
                else:
                    break

    for i in range(n_touched):
        node = touched[i]
        g[node] = -1
        popped[node] = 0
    return result


# ---------------------------------------------------------------------------
# Grid construction
# ---------------------------------------------------------------------------


@dataclass
class SurfaceGrid:
    """Immutable king-move graph over the surface lattice for one (n, K)."""

    n: int
    K: int
    h: float
    node_ids: np.ndarray          # (V,) int64, sorted encoded indices
    idx: np.ndarray               # (V, n) int16 lattice indices
    indptr: np.ndarray            # (V+1,) int64 CSR
    indices: np.ndarray           # (2E,) int32 CSR
    landmarks: np.ndarray         # (L, V) int32 BFS move counts from corners
    _g: np.ndarray = field(repr=False, default=None)
    _popped: np.ndarray = field(repr=False, default=None)
    _touched: np.ndarray = field(repr=False, default=None)
    _heap: np.ndarray = field(repr=False, default=None)

    # -- construction -------------------------------------------------------

    @staticmethod
    def node_count_bound(n: int, K: int) -> int:
        """Upper bound 2n(K+1)^(n-1) on the number of lattice nodes."""
        return 2 * n * (K + 1) ** (n - 1)

    @classmethod
    def build(cls, n: int, K: int) -> "SurfaceGrid":
        if n < 3:
            raise SurfaceError("grid oracle requires n >= 3")
        if K < 10 or K % 2 != 0:
            raise SurfaceError(f"grid resolution K must be even and >= 10, got {K}")
        radix = (K + 1) ** np.arange(n, dtype=np.int64)

        # nodes: every lattice point of every facet, deduplicated
        free_shape = (K + 1,) * (n - 1)
        free_idx = np.indices(free_shape).reshape(n - 1, -1).T.astype(np.int64)
        all_ids = []
        for axis in range(n):
            free_radix = np.delete(radix, axis)
            base = free_idx @ free_radix
            for side in (0, K):
                all_ids.append(base + side * radix[axis])
        node_ids = np.unique(np.concatenate(all_ids))
        V = node_ids.shape[0]
        idx = np.empty((V, n), dtype=np.int16)
        for d in range(n):
            idx[:, d] = (node_ids // radix[d]) % (K + 1)

        # edges: king moves inside each facet, positive directions only
        offsets = [o for o in product((-1, 0, 1), repeat=n - 1) if o != (0,) * (n - 1)]
        offsets = [o for o in offsets if o > tuple(-c for c in o)]
        eu_parts = []
        ev_parts = []
        for axis in range(n):
            free_radix = np.delete(radix, axis)
            base = free_idx @ free_radix
            for side in (0, K):
                fixed = side * radix[axis]
                for o in offsets:
                    ov = np.array(o, dtype=np.int64)
                    nb = free_idx + ov
                    ok = np.all((nb >= 0) & (nb <= K), axis=1)
                    u = base[ok] + fixed
                    v = nb[ok] @ free_radix + fixed
                    eu_parts.append(u)
                    ev_parts.append(v)
        eu = np.searchsorted(node_ids, np.concatenate(eu_parts)).astype(np.int64)
        ev = np.searchsorted(node_ids, np.concatenate(ev_parts)).astype(np.int64)
        lo = np.minimum(eu, ev)
        hi = np.maximum(eu, ev)
        key = np.unique(lo * V + hi)
        lo = key // V
        hi = key % V

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.argsort(src, kind="stable")
        indices = dst[order].astype(np.int32)
        counts = np.bincount(src, minlength=V)
        indptr = np.zeros(V + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])

        # landmark fields from every corner
        corner_rows = []
        for corner in product((0, K), repeat=n):
            cid = np.dot(np.array(corner, dtype=np.int64), radix)
            corner_rows.append(int(np.searchsorted(node_ids, cid)))
        landmarks = np.empty((len(corner_rows), V), dtype=np.int32)
        for li, row in enumerate(corner_rows):
            _bfs_fill(indptr, indices, np.int64(row), landmarks[li])

        grid = cls(
            n=n,
            K=K,
            h=2.0 / K,
            node_ids=node_ids,
            idx=idx,
            indptr=indptr,
            indices=indices,
            landmarks=landmarks,
        )
        object.__setattr__(grid, "_g", np.full(V, -1, dtype=np.int32))
        object.__setattr__(grid, "_popped", np.zeros(V, dtype=np.uint8))
        object.__setattr__(grid, "_touched", np.empty(V, dtype=np.int32))
        object.__setattr__(grid, "_heap", np.empty(indices.shape[0] + V + 16, dtype=np.int64))
        return grid

    # -- queries ------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return self.node_ids.shape[0]

    def snap_indices(self, coords) -> tuple[int, ...]:
        """Nearest lattice indices; .5 ties broken toward the lower index."""
        K = self.K
        out = []
        for p in coords:
            x = (p + 1.0) / self.h
            i = int(np.ceil(x - 0.5))
            out.append(min(max(i, 0), K))
        if not any(i in (0, K) for i in out):
            raise SurfaceError(f"snapped point {coords!r} left the surface lattice")
        return tuple(out)

    def snap(self, point) -> int:
        """Row index of the nearest surface lattice node."""
        coords = point.coords if isinstance(point, SurfacePoint) else point
        if len(coords) != self.n:
            raise SurfaceError(f"expected {self.n} coordinates, got {len(coords)}")
        ids = self.snap_indices(coords)
        radix = (self.K + 1) ** np.arange(self.n, dtype=np.int64)
        nid = int(np.dot(np.array(ids, dtype=np.int64), radix))
        row = int(np.searchsorted(self.node_ids, nid))
        if row >= self.node_count or self.node_ids[row] != nid:
            raise SurfaceError("snapped node missing from the lattice")  # pragma: no cover
        return row

    def node_coords(self, row: int) -> tuple[float, ...]:
        return tuple(-1.0 + float(i) * self.h for i in self.idx[row])

    def moves(self, row_a: int, row_b: int) -> int:
        """Minimal number of king moves between two nodes."""
        m = _astar_moves(
            self.indptr, self.indices, self.idx, self.landmarks,
            np.int64(row_a), np.int64(row_b),
            self._g, self._popped, self._touched, self._heap,
        )
        if m < 0:  # pragma: no cover - the surface graph is connected
            raise SurfaceError("grid nodes are disconnected")
        return int(m)

    def distance(self, a, b) -> float:
        """Graph-distance estimate between two surface points (snapped)."""
        return self.moves(self.snap(a), self.snap(b)) * self.h


# ---------------------------------------------------------------------------
# Shared cache
# ---------------------------------------------------------------------------

_CACHE: dict[tuple[int, int], SurfaceGrid] = {}


def shared_grid(n: int, K: int) -> SurfaceGrid:
    """Build (once) and reuse the grid for (n, K)."""
    key = (n, K)
    grid = _CACHE.get(key)
    if grid is None:
        grid = SurfaceGrid.build(n, K)
        _CACHE[key] = grid
    return grid


def clear_grid_cache() -> None:
    _CACHE.clear()
