"""Planar geometry for convex polygon generators.

Everything here is exact up to floating point: areas by the shoelace
formula, inradii from the Chebyshev-center linear program, and inner
parallel bodies by intersecting inward-shifted edge half-planes.  The
Monte Carlo estimator is the only sampled quantity and exists to check
closed forms for shapes that are not polygons.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import linprog

from .errors import DegenerateShape

VERTEX_TOL = 1e-12
AREA_TOL = 1e-15


class ConvexPolygon:
    """A strictly convex polygon with counterclockwise vertices.

    Vertices given clockwise are reversed.  Collinear or repeated vertices
    are rejected rather than silently dropped.
    """

    __slots__ = ("_v",)

    def __init__(self, vertices):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise DegenerateShape("a polygon needs at least 3 two-dimensional vertices")
        if _signed_area(v) < 0:
            v = v[::-1].copy()
        edges = np.roll(v, -1, axis=0) - v
        if np.any(np.hypot(edges[:, 0], edges[:, 1]) <= VERTEX_TOL):
            raise DegenerateShape("repeated vertices")
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
        if np.any(cross <= 0):
            raise DegenerateShape("polygon is not strictly convex")
        v.setflags(write=False)
        self._v = v

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    def __len__(self):
        return len(self._v)

    def __repr__(self):
        return f"ConvexPolygon({self._v.tolist()!r})"

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon) and self._v.shape == other._v.shape and np.array_equal(self._v, other._v)

    def __hash__(self):
        return hash(self._v.tobytes())

    def edges(self) -> np.ndarray:
        return np.roll(self._v, -1, axis=0) - self._v

    def edge_lengths(self) -> np.ndarray:
        e = self.edges()
        return np.hypot(e[:, 0], e[:, 1])

    def perimeter(self) -> float:
        return float(self.edge_lengths().sum())

    def interior_angles(self) -> np.ndarray:
        """Interior angle at each vertex, in radians."""
        e = self.edges()
        prev = np.roll(e, 1, axis=0)
        turn = np.arctan2(prev[:, 0] * e[:, 1] - prev[:, 1] * e[:, 0], (prev * e).sum(axis=1))
        return math.pi - turn

    def inward_normals(self) -> np.ndarray:
        e = self.edges() / self.edge_lengths()[:, None]
        return np.column_stack([-e[:, 1], e[:, 0]])

    def scaled(self, factor: float, center=(0.0, 0.0)) -> "ConvexPolygon":
        c = np.asarray(center, dtype=float)
        return ConvexPolygon(c + factor * (self._v - c))

    def translated(self, offset) -> "ConvexPolygon":
        return ConvexPolygon(self._v + np.asarray(offset, dtype=float))


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_area(p: ConvexPolygon) -> float:
    area = _signed_area(p.vertices)
    if area < AREA_TOL:
        raise DegenerateShape(f"polygon area {area:.3g} is degenerate")
    return area


def polygon_inradius(p: ConvexPolygon) -> float:
    """Radius of the largest disk inside ``p``.

    Solved as the Chebyshev-center LP (maximize r subject to the disk lying
    on the inner side of every edge line), then polished by re-solving the
    active constraints as a linear system.
    """
    polygon_area(p)
    return chebyshev_center(p)[1]


def chebyshev_center(p: ConvexPolygon):
    """Return ``(center, radius)`` of the largest inscribed disk."""
    n = p.inward_normals()
    offsets = np.einsum("ij,ij->i", n, p.vertices)
    # n.x - r >= offset  <=>  -n.x + r <= -offset
    a_ub = np.column_stack([-n, np.ones(len(n))])
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=a_ub, b_ub=-offsets,
                  bounds=[(None, None), (None, None), (0, None)], method="highs")
    if res.status != 0:
        raise DegenerateShape(f"inradius LP failed: {res.message}")
    x = res.x
    slack = n @ x[:2] - x[2] - offsets
    active = slack < 1e-9 * max(1.0, abs(x[2]))
    if active.sum() >= 3:
        sol, *_ = np.linalg.lstsq(np.column_stack([n[active], -np.ones(active.sum())]), offsets[active], rcond=None)
        if np.all(n @ sol[:2] - sol[2] - offsets > -1e-12):
            x = sol
    return x[:2].copy(), float(x[2])


def _clip(poly: np.ndarray, normal: np.ndarray, offset: float) -> np.ndarray:
    """Keep the part of a convex vertex list with ``normal . x >= offset``."""
    if len(poly) == 0:
        return poly
    s = poly @ normal - offset
    out = []
    k = len(poly)
    for i in range(k):
        j = (i + 1) % k
        si, sj = s[i], s[j]
        if si >= 0:
            out.append(poly[i])
        if (si >= 0) != (sj >= 0):
            t = si / (si - sj)
            out.append(poly[i] + t * (poly[j] - poly[i]))
    return np.array(out) if out else np.empty((0, 2))


def inner_parallel_body(p: ConvexPolygon, eps: float) -> Optional[ConvexPolygon]:
    """Points of ``p`` at distance at least ``eps`` from its boundary.

    Returns ``None`` once the eroded set has no interior (``eps`` at or
    beyond the inradius).
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        return p
    normals = p.inward_normals()
    offsets = np.einsum("ij,ij->i", normals, p.vertices) + eps
    core = np.array(p.vertices)
    for nrm, off in zip(normals, offsets):
        core = _clip(core, nrm, off)
        if len(core) < 3:
            return None
    core = _dedupe(core)
    if len(core) < 3 or _signed_area(core) <= AREA_TOL:
        return None
    try:
        return ConvexPolygon(core)
    except DegenerateShape:
        return None


def _dedupe(v: np.ndarray, tol: float = VERTEX_TOL) -> np.ndarray:
    keep = []
    for i, pt in enumerate(v):
        if not keep or np.hypot(*(pt - keep[-1])) > tol:
            keep.append(pt)
    if len(keep) > 1 and np.hypot(*(keep[0] - keep[-1])) <= tol:
        keep.pop()
    # drop vertices that became collinear after clipping
    out = []
    k = len(keep)
    for i in range(k):
        a, b, c = keep[i - 1], keep[i], keep[(i + 1) % k]
        cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cr > tol * tol:
            out.append(b)
    return np.array(out) if out else np.empty((0, 2))


def exact_tube_area(p: ConvexPolygon, eps: float) -> float:
    """Area of the inner eps-neighbourhood of the boundary of ``p``."""
    area = polygon_area(p)
    core = inner_parallel_body(p, eps)
    if core is None:
        return area
    return area - _signed_area(core.vertices)


def first_erosion_event(p: ConvexPolygon) -> float:
    """Smallest eps at which an edge of the eroded polygon shrinks to zero.

    While eps is below this value the eroded polygon keeps every edge and
    the tube area is the quadratic ``P eps - c eps**2``.
    """
    half = 0.5 * p.interior_angles()
    cot = 1.0 / np.tan(half)
    rate = cot + np.roll(cot, -1)
    return float(np.min(p.edge_lengths() / rate))


def regular_polygon(n: int, *, inradius: float | None = None, side: float | None = None,
                    center=(0.0, 0.0), rotation: float = 0.0) -> ConvexPolygon:
    if (inradius is None) == (side is None):
        raise ValueError("give exactly one of inradius or side")
    if side is not None:
        inradius = side / (2.0 * math.tan(math.pi / n))
    circ = inradius / math.cos(math.pi / n)
    ang = rotation - math.pi / 2 - math.pi / n + 2 * math.pi * np.arange(n) / n
    c = np.asarray(center, dtype=float)
    return ConvexPolygon(c + circ * np.column_stack([np.cos(ang), np.sin(ang)]))


def equilateral_triangle(side: float) -> ConvexPolygon:
    h = side * math.sqrt(3) / 2
    return ConvexPolygon([(0.0, 0.0), (side, 0.0), (side / 2, h)])


def square(side: float = 1.0) -> ConvexPolygon:
    return ConvexPolygon([(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)])


# --- Monte Carlo -------------------------------------------------------------

class ShapeSampler:
    """Interface for shapes used by :func:`montecarlo_tube_area`.

    Subclasses supply vectorized ``contains`` and ``boundary_distance`` on
    ``(n, 2)`` arrays and a ``bounding_box`` ``(xmin, ymin, xmax, ymax)``.
    """

    bounding_box: tuple

    def contains(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_distance(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class PolygonSampler(ShapeSampler):
    def __init__(self, polygon: ConvexPolygon):
        self.polygon = polygon
        v = polygon.vertices
        self.bounding_box = (float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max()))
        self._n = polygon.inward_normals()
        self._off = np.einsum("ij,ij->i", self._n, v)

    def _signed(self, pts):
        return pts @ self._n.T - self._off

    def contains(self, pts):
        return np.all(self._signed(pts) >= 0, axis=1)

    def boundary_distance(self, pts):
        # convex: distance to the boundary is the distance to the nearest edge line
        return np.min(self._signed(pts), axis=1)


class RoundedCornerSquare(ShapeSampler):
    """Square ``[0, side]^2`` whose corner at ``(side, side)`` is rounded
    by a circular arc of radius ``radius`` tangent to both sides."""

    def __init__(self, side: float = 2.0, radius: float = 0.5):
        if not 0 < radius <= side / 2:
            raise ValueError("radius must lie in (0, side/2]")
        self.side = side
        self.radius = radius
        self.bounding_box = (0.0, 0.0, side, side)
        self._c = side - radius

    def _corner(self, pts):
        zone = (pts[:, 0] > self._c) & (pts[:, 1] > self._c)
        rr = np.hypot(pts[:, 0] - self._c, pts[:, 1] - self._c)
        return zone, rr

    def contains(self, pts):
        s = self.side
        inside = (pts[:, 0] >= 0) & (pts[:, 1] >= 0) & (pts[:, 0] <= s) & (pts[:, 1] <= s)
        zone, rr = self._corner(pts)
        return inside & (~zone | (rr <= self.radius))

    def boundary_distance(self, pts):
        s = self.side
        x, y = pts[:, 0], pts[:, 1]
        flat = np.minimum(np.minimum(x, y), np.minimum(s - x, s - y))
        zone, rr = self._corner(pts)
        return np.where(zone, self.radius - rr, flat)

    def area(self) -> float:
        return self.side ** 2 - (1 - math.pi / 4) * self.radius ** 2


class MonteCarloEstimate(NamedTuple):
    estimate: float
    std_error: float


_CHUNK = 1 << 18


def montecarlo_tube_area(shape: ShapeSampler, eps, n_samples: int, seed: int,
                         workers: int = 1):
    """Hit-rate estimate of the inner tube area of ``shape``.

    Points are drawn uniformly from the bounding box.  The sample stream is
    split into fixed chunks, each with its own child seed, so the result
    depends only on ``seed`` and ``n_samples``, never on ``workers``.

    ``eps`` may be a scalar (returns one :class:`MonteCarloEstimate`) or a
    sequence (returns a list, all computed from the same samples).
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    scalar = np.ndim(eps) == 0
    eps_arr = np.atleast_1d(np.asarray(eps, dtype=float))
    if np.any(eps_arr < 0):
        raise ValueError("eps must be nonnegative")
    xmin, ymin, xmax, ymax = shape.bounding_box
    box_area = (xmax - xmin) * (ymax - ymin)
    if not box_area > 0:
        raise DegenerateShape("bounding box has zero area")

    sizes = [_CHUNK] * (n_samples // _CHUNK)
    if n_samples % _CHUNK:
        sizes.append(n_samples % _CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(args):
        size, ss = args
        rng = np.random.default_rng(ss)
        pts = rng.uniform((xmin, ymin), (xmax, ymax), size=(size, 2))
        inside = shape.contains(pts)
        dist = shape.boundary_distance(pts[inside])
        return np.array([np.count_nonzero(dist <= e) for e in eps_arr])

    jobs = list(zip(sizes, seeds))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            hits = sum(ex.map(run, jobs))
    else:
        hits = sum(map(run, jobs))
    frac = hits / n_samples
    est = box_area * frac
    se = box_area * np.sqrt(frac * (1 - frac) / n_samples)
    out = [MonteCarloEstimate(float(a), float(b)) for a, b in zip(est, se)]
    return out[0] if scalar else out
