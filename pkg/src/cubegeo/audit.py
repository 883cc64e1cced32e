"""Seeded audits: closed forms vs oracles, iff-conditions, metric properties.

Everything here is deterministic for a fixed seed: sampling uses
``numpy.random.default_rng(seed)``, reports carry no clocks or environment
data, and every float is rendered with 17 significant digits, so a report is
byte-identical across runs.

Sampling follows one rule everywhere: pick a facet uniformly among the 2n,
then draw the free coordinates uniformly in [-1, 1].  Pair classes constrain
the two facets (different axes for "adjacent", same axis opposite signs for
"opposite", the same facet for "same-face"); the "mixed" class also promotes
random coordinates to +-1 so that points live on edges and corners and every
classification can occur.

The iff audits (closed-form optimality conditions versus actual minimizers)
resample boundary-adjacent draws: any coordinate within 1e-9 of +-1, or any
two distinct route values within 1e-9 of each other.  The equivalences are
statements about exact reals; resampling keeps float rounding at set
boundaries from manufacturing spurious violations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import adjacent3, opposite3
from .candidates import geodesic_distance
from .oracle import (
    default_grid_resolution,
    exact_oracle,
    grid_oracle,
    restricted_exact_oracle,
)
from .surface import (
    SurfaceError,
    SurfacePoint,
    make_surface_point,
    random_signed_permutation,
    sup_distance,
)

__all__ = [
    "PAIR_CLASSES",
    "fmt17",
    "to_stable_json",
    "AuditReport",
    "sample_point",
    "sample_pair",
    "run_audit",
    "sample_adjacent_inputs",
    "sample_opposite_inputs",
    "adjacent_iff_violations",
    "opposite_iff_violations",
    "two_leg_reduction_violations",
    "metric_violations",
]

PAIR_CLASSES = ("adjacent", "opposite", "same-face", "mixed")

_BOUNDARY_EPS = 1e-9


# ---------------------------------------------------------------------------
# Stable JSON
# ---------------------------------------------------------------------------


def fmt17(x: float) -> str:
    """Render a float with 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")


def to_stable_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, floats via :func:`fmt17`."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  "{k}": {to_stable_json(v, indent + 2)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [to_stable_json(v, indent + 2) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(f"{pad}  {p}" for p in parts) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt17(obj)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {type(obj)!r}")


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def sample_point(rng: np.random.Generator, n: int, boundary: bool = False) -> SurfacePoint:
    """Uniform facet, uniform free coordinates; optionally snapped to edges."""
    axis = int(rng.integers(0, n))
    sign = 1 if rng.random() < 0.5 else -1
    coords = rng.uniform(-1.0, 1.0, n)
    coords[axis] = float(sign)
    if boundary:
        for i in range(n):
            if i != axis and rng.random() < 0.25:
                coords[i] = 1.0 if rng.random() < 0.5 else -1.0
    return make_surface_point(tuple(coords))


def sample_pair(
    rng: np.random.Generator, n: int, pair_class: str
) -> tuple[SurfacePoint, SurfacePoint]:
    """A point pair of the requested class (see :data:`PAIR_CLASSES`)."""
    if pair_class not in PAIR_CLASSES:
        raise SurfaceError(f"unknown pair class {pair_class!r}; one of {PAIR_CLASSES}")
    if pair_class == "mixed":
        return sample_point(rng, n, boundary=True), sample_point(rng, n, boundary=True)
    axis_a = int(rng.integers(0, n))
    sign_a = 1 if rng.random() < 0.5 else -1
    if pair_class == "same-face":
        axis_b, sign_b = axis_a, sign_a
    elif pair_class == "opposite":
        axis_b, sign_b = axis_a, -sign_a
    else:  # adjacent
        axis_b = int(rng.integers(0, n - 1))
        if axis_b >= axis_a:
            axis_b += 1
        sign_b = 1 if rng.random() < 0.5 else -1
    ca = rng.uniform(-1.0, 1.0, n)
    cb = rng.uniform(-1.0, 1.0, n)
    ca[axis_a] = float(sign_a)
    cb[axis_b] = float(sign_b)
    a = make_surface_point(tuple(ca))
    b = make_surface_point(tuple(cb))
    if pair_class in ("adjacent", "opposite") and (a.faces & b.faces):
        return sample_pair(rng, n, pair_class)  # pragma: no cover - measure zero
    return a, b


# ---------------------------------------------------------------------------
# Oracle-agreement audit (the `audit` subcommand's engine)
# ---------------------------------------------------------------------------


@dataclass
class AuditReport:
    """Outcome of one seeded audit run; serializes byte-stably."""

    n: int
    pair_class: str
    samples: int
    seed: int
    oracle: str
    grid_resolution: int | None
    tolerances: dict
    records: list
    max_delta: float
    equivalence_checked: int
    reduction_checked: int
    metric_checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "class": self.pair_class,
            "samples": self.samples,
            "seed": self.seed,
            "oracle": self.oracle,
            "grid_resolution": self.grid_resolution,
            "tolerances": self.tolerances,
            "max_delta": self.max_delta,
            "equivalence_checked": self.equivalence_checked,
            "reduction_checked": self.reduction_checked,
            "metric_checked": self.metric_checked,
            "violations": self.violations,
            "records": self.records,
        }
        return to_stable_json(payload) + "\n"


def run_audit(
    n: int,
    pair_class: str,
    samples: int,
    seed: int,
    oracle: str = "exact",
    K: int | None = None,
    exact_tol: float = 1e-9,
    grid_tol: float | None = None,
    keep_records: bool = True,
) -> AuditReport:
    """Check closed-form distances against the oracle(s) on seeded samples.

    Also exercises, where applicable: the n=3 condition/minimizer
    equivalences (on boundary-resampled draws), the two-leg reduction for
    adjacent n=3 pairs (restricted oracle with at most two facets), and metric
    sanity (bitwise symmetry, lower bound by the ambient sup distance,
    triangle inequality over consecutive sample triples).
    """
    if pair_class not in PAIR_CLASSES:
        raise SurfaceError(f"unknown pair class {pair_class!r}; one of {PAIR_CLASSES}")
    if oracle not in ("exact", "grid", "both"):
        raise SurfaceError(f"oracle must be exact, grid or both, got {oracle!r}")
    if samples < 0:
        raise SurfaceError("samples must be >= 0")
    use_grid = oracle in ("grid", "both")
    use_exact = oracle in ("exact", "both")
    if K is None and use_grid:
        K = default_grid_resolution(n)
    h = (2.0 / K) if K else None
    if grid_tol is None and use_grid:
        grid_tol = (6 * h) if n == 3 else (8 * h)

    tolerances = {"exact": exact_tol, "tie": 1e-12}
    if use_grid:
        tolerances["grid"] = grid_tol

    rng = np.random.default_rng(seed)
    records: list = []
    violations: list = []
    max_delta = 0.0
    equiv_checked = 0
    reduction_checked = 0
    metric_checked = 0
    recent: list[SurfacePoint] = []

    def violate(index: int, kind: str, detail: str) -> None:
        violations.append({"sample": index, "kind": kind, "detail": detail})

    for idx in range(samples):
        a, b = sample_pair(rng, n, pair_class)
        res = geodesic_distance(a, b, witness=False)
        closed = res.distance
        record = {
            "a": list(a.coords),
            "b": list(b.coords),
            "closed_form": closed,
            "route": res.provenance.label,
            "conditions": list(res.provenance.conditions),
            "oracles": {},
            "deltas": {},
        }

        if use_exact:
            ev, _, _ = exact_oracle(a, b)
            delta = abs(closed - ev)
            record["oracles"]["exact"] = ev
            record["deltas"]["exact"] = delta
            max_delta = max(max_delta, delta)
            if not delta <= exact_tol:
                violate(idx, "exact-oracle", f"|{fmt17(closed)} - {fmt17(ev)}| > {fmt17(exact_tol)}")
        if use_grid:
            gv = grid_oracle(a, b, K=K)
            delta = abs(closed - gv)
            record["oracles"]["grid"] = gv
            record["deltas"]["grid"] = delta
            max_delta = max(max_delta, delta)
            if not delta <= grid_tol:
                violate(idx, "grid-oracle", f"|{fmt17(closed)} - {fmt17(gv)}| > {fmt17(grid_tol)}")

        # metric sanity on the same pair
        metric_checked += 1
        res_rev = geodesic_distance(b, a, witness=False)
        if res_rev.distance != closed:
            violate(idx, "symmetry", f"{fmt17(closed)} != {fmt17(res_rev.distance)}")
        lower = sup_distance(a, b)
        if closed < lower - 1e-12:
            violate(idx, "norm-lower-bound", f"{fmt17(closed)} < {fmt17(lower)}")
        recent.append(a)
        recent.append(b)
        if len(recent) >= 3:
            p, q, r = recent[-3], recent[-2], recent[-1]
            dpq = geodesic_distance(p, q, witness=False).distance
            dqr = geodesic_distance(q, r, witness=False).distance
            dpr = geodesic_distance(p, r, witness=False).distance
            if dpr > dpq + dqr + 1e-9:
                violate(idx, "triangle", f"{fmt17(dpr)} > {fmt17(dpq)} + {fmt17(dqr)}")
            del recent[:-2]

        if keep_records:
            records.append(record)

    # n=3 closed-form equivalences on boundary-resampled canonical inputs
    if n == 3 and samples > 0 and pair_class in ("adjacent", "opposite", "mixed"):
        equiv_samples = min(samples, 2000)
        if pair_class in ("adjacent", "mixed"):
            bad = adjacent_iff_violations(equiv_samples, seed + 1)
            equiv_checked += equiv_samples
            for inputs, detail in bad:
                violations.append(
                    {"sample": -1, "kind": "adjacent-iff", "detail": detail,
                     "inputs": [fmt17(v) for v in inputs]}
                )
        if pair_class in ("opposite", "mixed"):
            bad = opposite_iff_violations(equiv_samples, seed + 2)
            equiv_checked += equiv_samples
            for inputs, detail in bad:
                violations.append(
                    {"sample": -1, "kind": "opposite-iff", "detail": detail,
                     "inputs": [fmt17(v) for v in inputs]}
                )

    # two-leg reduction via the restricted oracle (adjacent n=3 only)
    if n == 3 and samples > 0 and pair_class == "adjacent":
        reduction_samples = min(samples, 500)
        bad = two_leg_reduction_violations(reduction_samples, seed + 3)
        reduction_checked = reduction_samples
        for inputs, detail in bad:
            violations.append(
                {"sample": -1, "kind": "two-leg-reduction", "detail": detail,
                 "inputs": [fmt17(v) for v in inputs]}
            )

    return AuditReport(
        n=n,
        pair_class=pair_class,
        samples=samples,
        seed=seed,
        oracle=oracle,
        grid_resolution=K if use_grid else None,
        tolerances=tolerances,
        records=records,
        max_delta=max_delta,
        equivalence_checked=equiv_checked,
        reduction_checked=reduction_checked,
        metric_checked=metric_checked,
        violations=violations,
    )


# ---------------------------------------------------------------------------
# iff audits on canonical n=3 inputs (boundary-resampled)
# ---------------------------------------------------------------------------


def _resampled_uniform(
    rng: np.random.Generator,
    samples: int,
    n_vars: int,
    values_of: Callable[[np.ndarray], np.ndarray],
    eps: float = _BOUNDARY_EPS,
) -> np.ndarray:
    """(samples, n_vars) uniform draws, resampling boundary-adjacent rows.

    A row is boundary-adjacent when any variable is within ``eps`` of +-1 or
    when two distinct route values land within ``eps`` of each other.
    """
    out = np.empty((samples, n_vars))
    filled = 0
    while filled < samples:
        need = samples - filled
        draw = rng.uniform(-1.0, 1.0, (max(need, 64), n_vars))
        near_edge = np.any(np.abs(np.abs(draw) - 1.0) < eps, axis=1)
        vals = values_of(draw)  # (routes, N)
        svals = np.sort(vals, axis=0)
        gaps = np.diff(svals, axis=0)
        tied = np.any((gaps > 0) & (gaps < eps), axis=0)
        good = draw[~(near_edge | tied)]
        take = min(need, good.shape[0])
        out[filled : filled + take] = good[:take]
        filled += take
    return out


def sample_adjacent_inputs(samples: int, seed: int) -> np.ndarray:
    """Boundary-resampled (ay, az, bx, bz) rows for the adjacent iff audit."""
    rng = np.random.default_rng(seed)

    def values(draw: np.ndarray) -> np.ndarray:
        ay, az, bx, bz = draw.T
        alpha, beta, gamma, _, _ = adjacent3.route_values_batch(ay, az, bx, bz)
        return np.stack([alpha, beta, gamma])

    return _resampled_uniform(rng, samples, 4, values)


def sample_opposite_inputs(samples: int, seed: int) -> np.ndarray:
    """Boundary-resampled (a, b, c, d) rows for the opposite iff audit."""
    rng = np.random.default_rng(seed)

    def values(draw: np.ndarray) -> np.ndarray:
        a, b, c, d = draw.T
        return np.stack(opposite3.s_values_batch(a, b, c, d))

    return _resampled_uniform(rng, samples, 4, values)


def adjacent_iff_violations(
    samples: int, seed: int, tie_tol: float = 1e-12
) -> list[tuple[tuple, str]]:
    """Violations of: condition group for a route fires iff it is minimal.

    Conditions 1-4 pair with the first route (alpha), 5-8 with the second
    (beta), 9-12 with the third (gamma).
    """
    draw = sample_adjacent_inputs(samples, seed)
    ay, az, bx, bz = draw.T
    alpha, beta, gamma, _, _ = adjacent3.route_values_batch(ay, az, bx, bz)
    dist = np.minimum(np.minimum(alpha, beta), gamma)
    cond = adjacent3.conditions_batch(ay, az, bx, bz)  # (12, N) booleans
    groups = {
        "alpha": (alpha, cond[0:4]),
        "beta": (beta, cond[4:8]),
        "gamma": (gamma, cond[8:12]),
    }
    bad: list[tuple[tuple, str]] = []
    for name, (val, conds) in groups.items():
        minimal = val <= dist + tie_tol
        fired = np.any(conds, axis=0)
        for i in np.nonzero(minimal != fired)[0]:
            bad.append(
                (tuple(draw[i]),
                 f"{name}: minimal={bool(minimal[i])} but conditions fired={bool(fired[i])}")
            )
    return bad


def opposite_iff_violations(
    samples: int, seed: int, tie_tol: float = 1e-12
) -> list[tuple[tuple, str]]:
    """Violations of: condition set for s_j fires iff s_j is minimal (j=1..12)."""
    draw = sample_opposite_inputs(samples, seed)
    a, b, c, d = draw.T
    s = np.stack(opposite3.s_values_batch(a, b, c, d))
    dist = s.min(axis=0)
    slots = opposite3.all_conditions_batch(a, b, c, d)  # (12, 5, N)
    fired = np.any(slots, axis=1)
    bad: list[tuple[tuple, str]] = []
    for j in range(12):
        minimal = s[j] <= dist + tie_tol
        for i in np.nonzero(minimal != fired[j])[0]:
            bad.append(
                (tuple(draw[i]),
                 f"s{j + 1}: minimal={bool(minimal[i])} but conditions fired={bool(fired[j][i])}")
            )
    return bad


# ---------------------------------------------------------------------------
# Two-leg reduction audit (restricted oracle vs the first condition group)
# ---------------------------------------------------------------------------


def two_leg_reduction_violations(
    samples: int, seed: int, tol: float = 1e-9
) -> list[tuple[tuple, str]]:
    """Violations of: a two-facet path attains the distance iff one of the
    first four closed-form conditions holds (canonical adjacent n=3 inputs).

    The reference distance is the closed form (equal to the unrestricted
    oracle; that equality is audited separately), so the restricted oracle is
    the only linear-program work per sample.
    """
    rng = np.random.default_rng(seed)
    bad: list[tuple[tuple, str]] = []
    for _ in range(samples):
        ay, az, bx, bz = rng.uniform(-1.0, 1.0, 4)
        a = make_surface_point((1.0, ay, az))
        b = make_surface_point((bx, 1.0, bz))
        full = adjacent3.adjacent3_distance(ay, az, bx, bz).distance
        two = restricted_exact_oracle(a, b, max_faces=2)
        two_leg_ok = abs(two - full) <= tol
        cond = adjacent3.conditions(ay, az, bx, bz)
        fired = any(cond[j] for j in (1, 2, 3, 4))
        if two_leg_ok != fired:
            bad.append(
                ((ay, az, bx, bz),
                 f"two-leg={two_leg_ok} (restricted {fmt17(two)} vs full {fmt17(full)}) "
                 f"but conditions 1-4 fired={fired}")
            )
    return bad


# ---------------------------------------------------------------------------
# Metric-property audit (used by tests and the audit command)
# ---------------------------------------------------------------------------


def metric_violations(
    n: int,
    triples: int,
    seed: int,
    isometries_per_pair: int = 50,
    triangle_tol: float = 1e-9,
) -> list[str]:
    """Symmetry (bitwise), triangle inequality, norm lower bound, identity of
    indiscernibles, and signed-permutation invariance (bitwise) on random
    triples drawn from all pair classes."""
    rng = np.random.default_rng(seed)
    bad: list[str] = []
    classes = list(PAIR_CLASSES)
    for t in range(triples):
        cls = classes[int(rng.integers(0, len(classes)))]
        a, b = sample_pair(rng, n, cls)
        c, _ = sample_pair(rng, n, classes[int(rng.integers(0, len(classes)))])
        dab = geodesic_distance(a, b, witness=False).distance
        dba = geodesic_distance(b, a, witness=False).distance
        if dab != dba:
            bad.append(f"triple {t}: symmetry {fmt17(dab)} != {fmt17(dba)}")
        dbc = geodesic_distance(b, c, witness=False).distance
        dac = geodesic_distance(a, c, witness=False).distance
        if dac > dab + dbc + triangle_tol:
            bad.append(f"triple {t}: triangle {fmt17(dac)} > {fmt17(dab)} + {fmt17(dbc)}")
        if dab < sup_distance(a, b) - 1e-12:
            bad.append(f"triple {t}: below norm lower bound")
        if (dab == 0.0) != (a.coords == b.coords):
            bad.append(f"triple {t}: zero distance iff equality failed")
        dzero = geodesic_distance(a, a, witness=False).distance
        if dzero != 0.0:
            bad.append(f"triple {t}: d(a,a) = {fmt17(dzero)}")
        for _ in range(isometries_per_pair):
            g = random_signed_permutation(rng, n)
            dg = geodesic_distance(g.apply(a), g.apply(b), witness=False).distance
            if dg != dab:
                bad.append(f"triple {t}: isometry changed distance {fmt17(dab)} -> {fmt17(dg)}")
                break
    return bad
