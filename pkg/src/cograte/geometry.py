"""Convex-region machinery for the 2-D rate plane.

A region is represented by support-function samples over the first-quadrant
arc: the convex hull of a union of pentagons has support equal to the
pointwise max of the member supports, so unions over millions of pentagons
reduce to running maxima per direction with O(1) memory per direction.  The
boundary polyline is recovered afterwards as the lower envelope of the
sampled halfplanes, clipped to the nonnegative quadrant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .model import Pentagon, RatePair

#: Default number of support directions over the quadrant (eighth-degree steps).
DEFAULT_DIRECTIONS = 721

#: Vertex deduplication / constraint-check tolerance for boundary extraction.
_BOUNDARY_TOL = 1e-9

#: Chunk size for vectorized support maxima over large pentagon batches.
_CHUNK = 8192


def quadrant_directions(n: int) -> np.ndarray:
    """n unit vectors with angles uniform over [0, 90] degrees, as an (n, 2) array.

    The first row is exactly (1, 0) and the last exactly (0, 1).
    """
    if n < 3:
        raise ValueError(f"need at least 3 directions, got {n}")
    angles = np.linspace(0.0, np.pi / 2.0, n)
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    dirs[0] = (1.0, 0.0)
    dirs[-1] = (0.0, 1.0)
    return dirs


def pentagon_support(p: Pentagon, d: tuple[float, float] | np.ndarray) -> float:
    """Support value max_{x in p} d.x for a first-quadrant unit direction.

    Closed form by checking the at most five vertices.  Raises ValueError for
    an empty pentagon or a direction outside the closed first quadrant.
    """
    if p.is_empty():
        raise ValueError("empty region has no support")
    dx, dy = float(d[0]), float(d[1])
    if dx < 0.0 or dy < 0.0:
        raise ValueError(f"direction must lie in the first quadrant, got {(dx, dy)}")
    norm = np.hypot(dx, dy)
    if not np.isclose(norm, 1.0, rtol=0.0, atol=1e-9):
        raise ValueError(f"direction must be unit length, got norm {norm!r}")
    return max(dx * vx + dy * vy for vx, vy in p.vertices())


def support_max_over_pentagons(
    r1: np.ndarray, r2: np.ndarray, s: np.ndarray, dirs: np.ndarray
) -> np.ndarray:
    """Per-direction max support over a batch of non-empty pentagons.

    Uses the LP-dual closed form: for a pentagon (a, b, c) and direction
    (dx, dy) the support is min(dx*a + dy*b, m*c + (dx-m)*a + (dy-m)*b,
    M*c) with m = min(dx, dy), M = max(dx, dy).  The first two terms
    collapse to dx*a + dy*b - m*max(a + b - c, 0), and the third can only
    bind when the sum constraint is active, so each chunk reduces to one
    matmul plus an elementwise min.  Chunking bounds temporary memory.
    """
    r1 = np.asarray(r1, dtype=float).ravel()
    r2 = np.asarray(r2, dtype=float).ravel()
    s = np.asarray(s, dtype=float).ravel()
    if r1.size == 0:
        raise ValueError("no pentagons supplied")
    dx = dirs[:, 0][None, :]
    dy = dirs[:, 1][None, :]
    dmax = np.maximum(dx, dy)
    dmin_neg = -np.minimum(dx, dy)
    excess = np.maximum(r1 + r2 - s, 0.0)
    best = np.full(dirs.shape[0], -np.inf)
    # broadcasting instead of matmul keeps results bitwise independent of
    # the chunk and batch sizes
    for lo in range(0, r1.size, _CHUNK):
        hi = lo + _CHUNK
        h = r1[lo:hi, None] * dx + r2[lo:hi, None] * dy
        h += excess[lo:hi, None] * dmin_neg
        np.minimum(h, s[lo:hi, None] * dmax, out=h)
        np.maximum(best, h.max(axis=0), out=best)
    return best


def _boundary_from_support(dirs: np.ndarray, support: np.ndarray) -> np.ndarray:
    """Lower envelope of the sampled halfplanes, clipped to the quadrant.

    Candidate vertices are the intersections of adjacent constraint lines
    plus the two axis endpoints; candidates violating any sampled constraint
    (beyond tolerance) come from redundant halfplanes and are dropped.
    Returns an (m, 2) polyline ordered from the r1 axis to the r2 axis.
    """
    dx, dy = dirs[:, 0], dirs[:, 1]
    h = support
    # Adjacent-pair line intersections; det = sin(angle step) > 0.
    det = dx[:-1] * dy[1:] - dy[:-1] * dx[1:]
    px = (h[:-1] * dy[1:] - h[1:] * dy[:-1]) / det
    py = (dx[:-1] * h[1:] - dx[1:] * h[:-1]) / det
    cand = np.column_stack([px, py])
    cand = np.vstack([[h[0], 0.0], cand, [0.0, h[-1]]])
    # Keep points satisfying every sampled constraint and the quadrant.
    ok = np.all(cand @ dirs.T <= h[None, :] + _BOUNDARY_TOL, axis=1)
    ok &= cand[:, 0] >= -_BOUNDARY_TOL
    ok &= cand[:, 1] >= -_BOUNDARY_TOL
    pts = np.clip(cand[ok], 0.0, None)
    # Candidates are generated in direction-angle order, which already walks
    # the frontier from the r1 axis toward the r2 axis; deduplicate in place.
    keep = [0]
    for i in range(1, len(pts)):
        if np.max(np.abs(pts[i] - pts[keep[-1]])) > _BOUNDARY_TOL:
            keep.append(i)
    return pts[keep]


@dataclass(frozen=True)
class ConvexRegion:
    """A convex rate region sampled by its support function.

    directions is an (n, 2) array of unit vectors sorted by strictly
    increasing angle from (1, 0) to (0, 1); support holds the matching
    support values in bits; boundary is the extracted polyline.  provenance
    is a free-text tag of the generating family and grids (used in legends).
    """

    directions: np.ndarray
    support: np.ndarray
    boundary: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        h = np.asarray(self.support, dtype=float)
        if d.ndim != 2 or d.shape[1] != 2 or d.shape[0] != h.shape[0]:
            raise ValueError("directions and support shapes do not match")
        angles = np.arctan2(d[:, 1], d[:, 0])
        if np.any(np.diff(angles) <= 0.0):
            raise ValueError("directions must be sorted by strictly increasing angle")
        if tuple(d[0]) != (1.0, 0.0) or tuple(d[-1]) != (0.0, 1.0):
            raise ValueError("directions must start at (1,0) and end at (0,1)")
        if not np.all(np.isfinite(h)) or np.any(h < 0.0):
            raise ValueError("support values must be finite and >= 0")
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "support", h)
        object.__setattr__(self, "boundary", np.asarray(self.boundary, dtype=float))

    @classmethod
    def from_support(
        cls, directions: np.ndarray, support: np.ndarray, provenance: str = ""
    ) -> "ConvexRegion":
        boundary = _boundary_from_support(directions, np.asarray(support, dtype=float))
        return cls(directions=directions, support=support, boundary=boundary,
                   provenance=provenance)

    def contains(self, pt: RatePair | tuple[float, float], tol: float = 0.0) -> bool:
        """True iff d.pt <= support(d) + tol for every sampled direction."""
        x = (pt.r1, pt.r2) if isinstance(pt, RatePair) else (float(pt[0]), float(pt[1]))
        return bool(np.all(self.directions @ np.asarray(x) <= self.support + tol))

    def boundary_points(self) -> list[RatePair]:
        return [RatePair(float(x), float(y)) for x, y in self.boundary]


def hull_of_union(
    pentagons: Iterable[Pentagon],
    n_directions: int = DEFAULT_DIRECTIONS,
    provenance: str = "",
) -> ConvexRegion:
    """Convex hull of a union of pentagons, sampled at n_directions directions.

    Empty pentagons are skipped; raises ValueError when none survive.  The
    support at each direction is exactly the max of the member supports.
    """
    dirs = quadrant_directions(n_directions)
    r1, r2, s = [], [], []
    for p in pentagons:
        if not p.is_empty():
            r1.append(p.r1_max)
            r2.append(p.r2_max)
            s.append(p.sum_max)
    if not r1:
        raise ValueError("all pentagons are empty; nothing to hull")
    support = support_max_over_pentagons(np.array(r1), np.array(r2), np.array(s), dirs)
    return ConvexRegion.from_support(dirs, support, provenance)


def hull_of_pentagon_arrays(
    r1: np.ndarray,
    r2: np.ndarray,
    s: np.ndarray,
    n_directions: int = DEFAULT_DIRECTIONS,
    provenance: str = "",
) -> ConvexRegion:
    """Vectorized hull_of_union for pentagon bounds given as flat arrays."""
    r1 = np.asarray(r1, dtype=float).ravel()
    r2 = np.asarray(r2, dtype=float).ravel()
    s = np.asarray(s, dtype=float).ravel()
    keep = (r1 >= 0.0) & (r2 >= 0.0) & (s >= 0.0)
    if not np.any(keep):
        raise ValueError("all pentagons are empty; nothing to hull")
    dirs = quadrant_directions(n_directions)
    support = support_max_over_pentagons(r1[keep], r2[keep], s[keep], dirs)
    return ConvexRegion.from_support(dirs, support, provenance)


def _check_same_directions(a: ConvexRegion, b: ConvexRegion) -> None:
    if a.directions.shape != b.directions.shape or not np.array_equal(
        a.directions, b.directions
    ):
        raise ValueError("regions are sampled on different direction sets")


def directed_gap(outer: ConvexRegion, inner: ConvexRegion) -> float:
    """Max over sampled directions of outer.support - inner.support, in bits.

    Positive when the outer region sticks out beyond the inner one somewhere;
    negative when inner exceeds outer at every sampled direction.
    """
    _check_same_directions(outer, inner)
    return float(np.max(outer.support - inner.support))


@dataclass(frozen=True)
class SubsetReport:
    """Outcome of a tolerance-based subset check between two sampled regions."""

    is_subset: bool
    worst_direction: tuple[float, float]
    worst_violation: float

    @property
    def worst_direction_deg(self) -> float:
        dx, dy = self.worst_direction
        return float(np.degrees(np.arctan2(dy, dx)))


def subset_within(inner: ConvexRegion, outer: ConvexRegion, tol: float) -> SubsetReport:
    """Check inner.support(d) <= outer.support(d) + tol for every direction.

    The report carries the direction of the largest violation (which is
    negative slack when the check passes everywhere with room to spare).
    """
    _check_same_directions(inner, outer)
    diff = inner.support - outer.support
    i = int(np.argmax(diff))
    return SubsetReport(
        is_subset=bool(diff[i] <= tol),
        worst_direction=(float(inner.directions[i, 0]), float(inner.directions[i, 1])),
        worst_violation=float(diff[i]),
    )


def ray_boundary(
    membership: Callable[[RatePair], bool],
    directions: np.ndarray,
    r_hi: float,
    n_iter: int = 50,
) -> np.ndarray:
    """Boundary polyline of a region given only by a membership predicate.

    For each direction, bisects t in [0, r_hi] for the largest t with
    membership(t * d) true; the membership must be monotone toward the origin
    and r_hi must upper-bound the region radius.  Returns an (n, 2) array of
    member points (the bisection keeps the inside endpoint).
    """
    if not membership(RatePair(0.0, 0.0)):
        raise ValueError("region does not contain origin")
    pts = np.empty((directions.shape[0], 2))
    for i, (dx, dy) in enumerate(directions):
        lo, hi = 0.0, float(r_hi)
        for _ in range(n_iter):
            mid = 0.5 * (lo + hi)
            if membership(RatePair(mid * dx, mid * dy)):
                lo = mid
            else:
                hi = mid
        pts[i] = (lo * dx, lo * dy)
    return pts
