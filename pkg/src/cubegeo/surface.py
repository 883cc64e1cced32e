"""Points, faces, paths, and isometries of the cube surface.

The surface is the unit sphere of the sup norm in R^n (n >= 3): all points x
with ||x||_inf = 1, i.e. the boundary of the cube [-1,1]^n.  Every surface
point lies on at least one facet; points on edges and corners lie on several.
Geodesics are polylines whose legs each stay inside one facet, with leg length
measured in the sup norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

__all__ = [
    "DEFAULT_TOL",
    "FaceId",
    "SurfaceError",
    "SurfacePoint",
    "make_surface_point",
    "sup_distance",
    "SameFace",
    "Adjacent",
    "Opposite",
    "PairClass",
    "classify_pair",
    "SignedPermutation",
    "random_signed_permutation",
    "canonicalize",
    "GeodesicPath",
    "path_length",
]

# Coordinates within this distance of +-1 are snapped exactly onto the facet.
DEFAULT_TOL = 1e-9


class SurfaceError(ValueError):
    """Invalid surface data: off-surface point, bad leg, or bad assignment."""


class FaceId(NamedTuple):
    """One facet of the cube: the set of surface points with x[axis] == sign."""

    axis: int
    sign: int  # +1 or -1

    def __str__(self) -> str:
        return f"x{self.axis}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class SurfacePoint:
    """A validated point on the cube surface.

    ``coords`` always satisfies max|coords| == 1 with extremal coordinates
    stored exactly as +-1.0; ``faces`` is the (nonempty) set of facets the
    point lies on.  Build instances through :func:`make_surface_point`.
    """

    coords: tuple[float, ...]
    faces: frozenset[FaceId]

    @property
    def n(self) -> int:
        return len(self.coords)

    def on_face(self, face: FaceId) -> bool:
        return face in self.faces


def make_surface_point(coords: Iterable[float], tol: float = DEFAULT_TOL) -> SurfacePoint:
    """Validate and snap a coordinate tuple onto the cube surface.

    Coordinates within ``tol`` of +-1 are snapped exactly to +-1; the point is
    rejected unless its sup norm is then exactly 1.  Dimensions below 3 are
    rejected (the surface of a square is a curve; none of the route formulas
    apply there).
    """
    xs = [float(c) for c in coords]
    n = len(xs)
    if n < 3:
        raise SurfaceError(f"dimension must be at least 3, got {n}")
    snapped: list[float] = []
    faces: set[FaceId] = set()
    for i, c in enumerate(xs):
        if abs(c) > 1.0 + tol:
            raise SurfaceError(f"coordinate {i} = {c!r} lies outside [-1,1] by more than {tol}")
        if 1.0 - abs(c) <= tol:
            s = 1 if c > 0 else -1
            snapped.append(float(s))
            faces.add(FaceId(i, s))
        else:
            snapped.append(c)
    if not faces:
        m = max(abs(c) for c in xs)
        raise SurfaceError(f"point is not on the surface: sup norm {m!r} differs from 1 by more than {tol}")
    return SurfacePoint(tuple(snapped), frozenset(faces))


def sup_distance(a: SurfacePoint | Sequence[float], b: SurfacePoint | Sequence[float]) -> float:
    """Sup-norm distance between two points (coordinates or SurfacePoints)."""
    ca = a.coords if isinstance(a, SurfacePoint) else a
    cb = b.coords if isinstance(b, SurfacePoint) else b
    if len(ca) != len(cb):
        raise SurfaceError(f"dimension mismatch: {len(ca)} vs {len(cb)}")
    return max(abs(x - y) for x, y in zip(ca, cb))


# ---------------------------------------------------------------------------
# Pair classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SameFace:
    """Both points lie on this common facet; the geodesic is the segment."""

    face: FaceId


@dataclass(frozen=True)
class Adjacent:
    """A on ``face_a``, B on ``face_b``, with the two facets sharing an edge."""

    face_a: FaceId
    face_b: FaceId


@dataclass(frozen=True)
class Opposite:
    """A on ``face_a``, B on the opposite facet ``face_b`` (same axis)."""

    face_a: FaceId
    face_b: FaceId

    @property
    def axis(self) -> int:
        return self.face_a.axis


PairClass = Union[SameFace, Adjacent, Opposite]


def classify_pair(a: SurfacePoint, b: SurfacePoint) -> list[PairClass]:
    """All facet assignments for a pair of surface points.

    If the two face sets intersect, the pair is same-face and only those
    shared-facet assignments are returned (the straight segment is already a
    global minimum, so no other assignment can beat it).  Otherwise every
    ordered facet pair (one from A, one from B) yields an Opposite assignment
    (same axis, opposite signs) or an Adjacent one (different axes); Opposite
    assignments are listed first, each group in sorted face order.
    """
    if a.n != b.n:
        raise SurfaceError(f"dimension mismatch: {a.n} vs {b.n}")
    shared = sorted(a.faces & b.faces)
    if shared:
        return [SameFace(f) for f in shared]
    opposite: list[PairClass] = []
    adjacent: list[PairClass] = []
    for fa in sorted(a.faces):
        for fb in sorted(b.faces):
            if fa.axis == fb.axis:
                # Signs must differ here: equal signs would mean a shared face.
                opposite.append(Opposite(fa, fb))
            else:
                adjacent.append(Adjacent(fa, fb))
    return opposite + adjacent


# ---------------------------------------------------------------------------
# Signed permutations (the symmetry group of the cube)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignedPermutation:
    """A signed permutation of the coordinate axes: (g x)[i] = signs[i] * x[perm[i]].

    These are exactly the isometries of the cube surface that we use to move
    any facet assignment into the canonical frame (A on x0=+1, B on x1=+1 for
    adjacent pairs; B on x0=-1 for opposite pairs).  All operations are exact
    in floating point (negation and reordering introduce no rounding).
    """

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.signs) != n:
            raise SurfaceError(f"invalid signed permutation: perm={self.perm}, signs={self.signs}")
        if any(s not in (-1, 1) for s in self.signs):
            raise SurfaceError(f"signs must be +-1, got {self.signs}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    def apply_coords(self, coords: Sequence[float]) -> tuple[float, ...]:
        return tuple(s * coords[p] for p, s in zip(self.perm, self.signs))

    def apply(self, point: SurfacePoint) -> SurfacePoint:
        coords = self.apply_coords(point.coords)
        faces = frozenset(self.apply_face(f) for f in point.faces)
        return SurfacePoint(coords, faces)

    def apply_face(self, face: FaceId) -> FaceId:
        # Face x[k]=s maps to x[i]=signs[i]*s where perm[i] == k.
        i = self.perm.index(face.axis)
        return FaceId(i, self.signs[i] * face.sign)

    def apply_path(self, path: "GeodesicPath") -> "GeodesicPath":
        return GeodesicPath.from_vertices([self.apply(v) for v in path.vertices])

    def inverse(self) -> "SignedPermutation":
        n = self.n
        q = [0] * n
        for i, p in enumerate(self.perm):
            q[p] = i
        return SignedPermutation(tuple(q), tuple(self.signs[q[j]] for j in range(n)))

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """The map x -> self(other(x))."""
        perm = tuple(other.perm[p] for p in self.perm)
        signs = tuple(s * other.signs[p] for p, s in zip(self.perm, self.signs))
        return SignedPermutation(perm, signs)


def random_signed_permutation(rng, n: int) -> SignedPermutation:
    """Uniform random signed permutation (for invariance tests and audits)."""
    perm = tuple(int(i) for i in rng.permutation(n))
    signs = tuple(int(s) for s in rng.choice([-1, 1], size=n))
    return SignedPermutation(perm, signs)


def canonicalize(
    a: SurfacePoint, b: SurfacePoint, assignment: PairClass
) -> tuple[SignedPermutation, SurfacePoint, SurfacePoint]:
    """Signed permutation g moving an assignment into the canonical frame.

    Adjacent(fa, fb): g(A) lies on x0=+1 and g(B) on x1=+1.
    Opposite(fa, fb): g(A) lies on x0=+1 and g(B) on x0=-1.
    Returns (g, g(A), g(B)); same-face assignments have no canonical frame.
    """
    n = a.n
    if isinstance(assignment, SameFace):
        raise SurfaceError("same-face pairs have no canonical frame")
    if isinstance(assignment, Adjacent):
        fa, fb = assignment.face_a, assignment.face_b
        if not (a.on_face(fa) and b.on_face(fb)) or fa.axis == fb.axis:
            raise SurfaceError(f"assignment {assignment} does not match the points")
        lead = [(fa.axis, fa.sign), (fb.axis, fb.sign)]
    elif isinstance(assignment, Opposite):
        fa, fb = assignment.face_a, assignment.face_b
        if not (a.on_face(fa) and b.on_face(fb)) or fa.axis != fb.axis or fa.sign == fb.sign:
            raise SurfaceError(f"assignment {assignment} does not match the points")
        lead = [(fa.axis, fa.sign)]
    else:
        raise SurfaceError(f"unknown assignment {assignment!r}")
    used = {ax for ax, _ in lead}
    rest = [(ax, 1) for ax in range(n) if ax not in used]
    perm = tuple(ax for ax, _ in lead + rest)
    signs = tuple(s for _, s in lead + rest)
    g = SignedPermutation(perm, signs)
    return g, g.apply(a), g.apply(b)


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeodesicPath:
    """A facet-wise polyline on the cube surface.

    Consecutive vertices must share a facet (each leg then lies inside that
    facet, since facets are sup-norm convex).  Zero-length legs are allowed;
    witness constructions keep their structural vertices even when two of them
    coincide.  A single-vertex path (A == B) has length 0.
    """

    vertices: tuple[SurfacePoint, ...]
    leg_lengths: tuple[float, ...]
    total_length: float

    @classmethod
    def from_vertices(cls, vertices: Sequence[SurfacePoint]) -> "GeodesicPath":
        vs = tuple(vertices)
        if not vs:
            raise SurfaceError("a path needs at least one vertex")
        n = vs[0].n
        legs: list[float] = []
        for i in range(len(vs) - 1):
            u, v = vs[i], vs[i + 1]
            if v.n != n:
                raise SurfaceError("path vertices have mixed dimensions")
            if not (u.faces & v.faces):
                raise SurfaceError(
                    f"leg {i} endpoints share no facet: {sorted(map(str, u.faces))} vs {sorted(map(str, v.faces))}"
                )
            legs.append(sup_distance(u, v))
        return cls(vs, tuple(legs), float(sum(legs)))

    @property
    def n(self) -> int:
        return self.vertices[0].n


def path_length(path: GeodesicPath | Sequence[SurfacePoint]) -> float:
    """Total sup-norm length of a facet-wise polyline.

    Accepts a :class:`GeodesicPath` or a raw vertex sequence; in the latter
    case legs are validated (endpoints of each leg must share a facet).
    """
    if isinstance(path, GeodesicPath):
        return path.total_length
    return GeodesicPath.from_vertices(path).total_length
