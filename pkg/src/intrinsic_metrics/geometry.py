"""Convex-polygon geometry and the triangular ratio metric.

Points are Python/numpy complex numbers. Polygons are stored with
counterclockwise vertices, so the interior lies to the left of every
directed edge and ``Im(conj(e) * (p - a))`` is the signed distance of
``p`` from the line of an edge starting at ``a`` with unit direction ``e``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np
from scipy import optimize

from .errors import DomainError

BOUNDARY_TOL = 1e-12
CONTACT_TOL = 1e-9


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 3:
            raise DomainError("a polygon needs at least three vertices")
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in verts):
            raise DomainError("vertex coordinates must be finite")
        for i in range(n):
            a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            if abs(b - a) == 0:
                raise DomainError("repeated vertex")
            cross = ((b - a).conjugate() * (c - b)).imag
            if cross <= 1e-12:
                raise DomainError("vertices must turn strictly left (convex, counterclockwise)")
        total_turn = sum(
            np.angle((verts[(i + 2) % n] - verts[(i + 1) % n]) / (verts[(i + 1) % n] - verts[i])) for i in range(n)
        )
        if abs(total_turn - 2 * math.pi) > 1e-9:
            raise DomainError("vertices wind more than once; polygon is not simple")

    @classmethod
    def from_json(cls, source) -> "ConvexPolygon":
        """Build from ``{"vertices": [[x, y], ...]}`` given as a dict, JSON text, or file path."""
        if isinstance(source, dict):
            data = source
        else:
            text = str(source)
            if not text.lstrip().startswith("{"):
                with open(text, encoding="utf-8") as fh:
                    text = fh.read()
            data = json.loads(text)
        return cls(tuple(complex(x, y) for x, y in data["vertices"]))

    def to_json(self) -> dict:
        return {"vertices": [[v.real, v.imag] for v in self.vertices]}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def starts(self) -> np.ndarray:
        return np.array(self.vertices, dtype=complex)

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.abs(np.roll(self.starts, -1) - self.starts)

    @cached_property
    def directions(self) -> np.ndarray:
        """Unit direction of each edge."""
        return (np.roll(self.starts, -1) - self.starts) / self.lengths

    def edge(self, j: int) -> tuple[complex, complex]:
        return self.vertices[j], self.vertices[(j + 1) % self.n]

    def local(self, p) -> np.ndarray:
        """Edge-local coordinates of ``p``; shape ``p.shape + (n,)``."""
        p = np.asarray(p, dtype=complex)
        return (p[..., None] - self.starts) * np.conj(self.directions)

    def signed_distances(self, p) -> np.ndarray:
        return self.local(p).imag

    def perimeter(self) -> float:
        return float(np.sum(self.lengths))


@dataclass(frozen=True)
class Rectangle:
    """The rectangle ``[-k, k] x [-1, 1]``."""

    k: float

    def __post_init__(self):
        k = float(self.k)
        if not (k > 0 and math.isfinite(k)):
            raise DomainError(f"half-width must be positive, got {self.k!r}")
        object.__setattr__(self, "k", k)

    @cached_property
    def polygon(self) -> ConvexPolygon:
        k = self.k
        return ConvexPolygon((complex(-k, -1), complex(k, -1), complex(k, 1), complex(-k, 1)))

    def normalized(self) -> tuple["Rectangle", complex]:
        """Return ``(R', c)`` with ``R'`` of half-width ``>= 1`` and ``z -> c z`` mapping ``R`` onto ``R'``.

        For ``k < 1`` this is the quarter turn ``z -> (i/k) z``.
        """
        if self.k >= 1.0:
            return self, 1.0 + 0.0j
        return Rectangle(1.0 / self.k), 1j / self.k

    def contains(self, p, tol: float = BOUNDARY_TOL):
        p = np.asarray(p, dtype=complex)
        return (np.abs(p.real) < self.k - tol) & (np.abs(p.imag) < 1.0 - tol)


Domain = Union[ConvexPolygon, Rectangle]


def as_polygon(P: Domain) -> ConvexPolygon:
    if isinstance(P, Rectangle):
        return P.polygon
    if isinstance(P, ConvexPolygon):
        return P
    raise TypeError(f"expected a ConvexPolygon or Rectangle, got {type(P).__name__}")


@dataclass(frozen=True)
class PlanarGraph:
    nodes: tuple
    edges: tuple
    labels: tuple = field(default=())

    def segments(self) -> list[tuple[complex, complex]]:
        return [(self.nodes[i], self.nodes[j]) for i, j in self.edges]

    def sample(self, per_edge: int = 50, include_ends: bool = False) -> np.ndarray:
        """Points along every edge; isolated nodes are included as they are."""
        pts = []
        lo, hi = (0.0, 1.0) if include_ends else (1.0 / (per_edge + 1), per_edge / (per_edge + 1))
        ts = np.linspace(lo, hi, per_edge)
        for a, b in self.segments():
            pts.append(a + ts * (b - a))
        used = {i for e in self.edges for i in e}
        pts.extend(np.array([self.nodes[i]]) for i in range(len(self.nodes)) if i not in used)
        return np.concatenate(pts) if pts else np.empty(0, dtype=complex)


@dataclass(frozen=True)
class BoundaryContact:
    distance: float
    contacts: tuple


class SMetric(NamedTuple):
    s: float
    z_min: complex
    side: int


def _require_interior(poly: ConvexPolygon, p) -> None:
    v = poly.signed_distances(p)
    if np.any(np.min(v, axis=-1) <= BOUNDARY_TOL):
        raise DomainError("point is not strictly inside the polygon")


def distance_to_boundary(P: Domain, p) -> np.ndarray:
    """Vectorized Euclidean distance to the boundary (no interior check)."""
    poly = as_polygon(P)
    X = poly.local(p)
    u = np.clip(X.real, 0.0, poly.lengths)
    return np.min(np.abs(X - u), axis=-1)


def boundary_distance(P: Domain, p: complex, tol: float = CONTACT_TOL) -> BoundaryContact:
    """Distance from an interior point to the boundary and every contact point."""
    poly = as_polygon(P)
    p = complex(p)
    _require_interior(poly, p)
    X = poly.local(p)
    u = np.clip(X.real, 0.0, poly.lengths)
    dist = np.abs(X - u)
    best = float(np.min(dist))
    contacts: list[complex] = []
    for j in np.flatnonzero(dist <= best + tol * (1.0 + best)):
        z = complex(poly.starts[j] + u[j] * poly.directions[j])
        if all(abs(z - c) > 1e-12 for c in contacts):
            contacts.append(z)
    return BoundaryContact(best, tuple(contacts))


def _edge_path_minima(poly: ConvexPolygon, x, y) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge ``min |x-z| + |z-y|`` and the minimizing edge parameter.

    In edge coordinates the unconstrained minimizer is where the segment
    from the mirror image of ``x`` to ``y`` meets the edge line; the sum is
    convex along the line, so clamping that parameter to the edge gives
    the constrained minimizer.
    """
    X = poly.local(x)
    Y = poly.local(y)
    vx, vy = X.imag, Y.imag
    u_star = X.real + (Y.real - X.real) * vx / (vx + vy)
    u = np.clip(u_star, 0.0, poly.lengths)
    clamped = u != u_star
    reflected = np.hypot(Y.real - X.real, vx + vy)
    value = np.where(clamped, np.abs(X - u) + np.abs(Y - u), reflected)
    return value, u


def s_metric(P: Domain, x: complex, y: complex) -> SMetric:
    """Triangular ratio metric ``|x-y| / inf_{z in boundary} (|x-z| + |z-y|)``."""
    poly = as_polygon(P)
    x, y = complex(x), complex(y)
    _require_interior(poly, np.array([x, y]))
    value, u = _edge_path_minima(poly, x, y)
    j = int(np.argmin(value))
    z = complex(poly.starts[j] + u[j] * poly.directions[j])
    return SMetric(abs(x - y) / float(value[j]), z, j)


def s_metric_values(P: Domain, x, y, check: bool = True) -> np.ndarray:
    """Vectorized s-metric over broadcast arrays of points."""
    poly = as_polygon(P)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if check:
        _require_interior(poly, x)
        _require_interior(poly, y)
    value, _ = _edge_path_minima(poly, x, y)
    return np.abs(x - y) / np.min(value, axis=-1)


def nearest_side_labels(P: Domain, x, y) -> np.ndarray:
    """Index of the side carrying the minimizer of ``|x-z| + |z-y|``."""
    value, _ = _edge_path_minima(as_polygon(P), x, y)
    return np.argmin(value, axis=-1)


def s_metric_oracle(P: Domain, x: complex, y: complex, samples: int = 100_000) -> float:
    """Brute-force s-metric: dense boundary samples, then bounded refinement.

    Each edge gets samples in proportion to its length; the best sample on
    every edge is refined over its two neighbouring sample intervals.
    """
    poly = as_polygon(P)
    x, y = complex(x), complex(y)
    _require_interior(poly, np.array([x, y]))
    if x == y:
        return 0.0
    lengths = poly.lengths
    counts = np.maximum(3, np.round(samples * lengths / lengths.sum()).astype(int))
    best = math.inf
    for j in range(poly.n):
        a, e, L = poly.starts[j], poly.directions[j], lengths[j]
        ts = np.linspace(0.0, L, counts[j])
        z = a + ts * e
        f = np.abs(x - z) + np.abs(z - y)
        i = int(np.argmin(f))
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, len(ts) - 1)]
        res = optimize.minimize_scalar(
            lambda t: abs(x - (a + t * e)) + abs(a + t * e - y),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13 * max(1.0, L)},
        )
        best = min(best, float(f[i]), float(res.fun))
    return abs(x - y) / best


class NearestSideRegions(NamedTuple):
    xs: np.ndarray
    ys: np.ndarray
    labels: np.ndarray
    orientation: int

    @property
    def trapezoid_sides(self) -> str:
        """Which pair of regions are trapezoids: ``"bottom-top"``, ``"left-right"`` or ``"none"``."""
        return {-1: "bottom-top", 1: "left-right", 0: "none"}[self.orientation]


def rect_nearest_side_regions(R: Rectangle, x: complex, grid: int) -> NearestSideRegions:
    """Label a ``grid x grid`` sample of ``R`` by the side minimizing ``|x-z| + |z-y|``.

    Labels follow the counterclockwise side order bottom, right, top, left
    (0..3). ``orientation`` is the sign of ``Re x^2 - Im x^2 - (k^2 - 1)``:
    negative means the bottom and top regions are the trapezoids.
    """
    if grid < 2:
        raise DomainError("grid must be at least 2")
    x = complex(x)
    _require_interior(R.polygon, x)
    k = R.k
    xs = -k + (np.arange(grid) + 0.5) * (2 * k / grid)
    ys = -1 + (np.arange(grid) + 0.5) * (2.0 / grid)
    Y = xs[None, :] + 1j * ys[:, None]
    labels = nearest_side_labels(R, x, Y)
    key = (x * x).real - k * k + 1.0
    orientation = 0 if abs(key) < 1e-12 else int(np.sign(key))
    return NearestSideRegions(xs, ys, labels, orientation)


def sigma_segments(R: Rectangle) -> PlanarGraph:
    """The central segment and the four corner bisectors that split ``R`` by nearest side."""
    k = R.k
    if k < 1.0:
        raise DomainError("sigma segments need k >= 1; normalize the rectangle first")
    lo, hi = complex(-(k - 1), 0), complex(k - 1, 0)
    corners = (complex(-k, -1), complex(-k, 1), complex(k, -1), complex(k, 1))
    if k == 1.0:
        nodes = (0j,) + corners
        edges = ((1, 0), (2, 0), (3, 0), (4, 0))
        labels = ("sigma1", "sigma2", "sigma3", "sigma4")
    else:
        nodes = (lo, hi) + corners
        edges = ((0, 1), (2, 0), (3, 0), (4, 1), (5, 1))
        labels = ("sigma0", "sigma1", "sigma2", "sigma3", "sigma4")
    return PlanarGraph(nodes, edges, labels)


def _equidistant_point(poly: ConvexPolygon, lines: Sequence[int]) -> tuple[complex, float]:
    """Point at equal inward distance ``t`` from three edge lines."""
    A = np.empty((3, 3))
    b = np.empty(3)
    for row, j in enumerate(lines):
        n = 1j * poly.directions[j]
        A[row] = (n.real, n.imag, -1.0)
        b[row] = (np.conj(n) * poly.starts[j]).real
    px, py, t = np.linalg.solve(A, b)
    return complex(px, py), float(t)


def _merge_graph(nodes: list[complex], edges: Iterable[tuple[int, int]], tol: float = 1e-9):
    rep: list[int] = []
    merged: list[complex] = []
    for z in nodes:
        for idx, w in enumerate(merged):
            if abs(z - w) <= tol * (1.0 + abs(w)):
                rep.append(idx)
                break
        else:
            rep.append(len(merged))
            merged.append(z)
    out = []
    for i, j in edges:
        a, b = sorted((rep[i], rep[j]))
        if a != b and (a, b) not in out:
            out.append((a, b))
    return merged, out, rep


def medial_axis(P: Domain) -> PlanarGraph:
    """Medial axis of a convex polygon: the union of boundaries of the nearest-side regions.

    Computed by shrinking the polygon: every edge collapses at the point
    equidistant from its own line and its two current neighbours; the
    earliest collapse is processed, the edge removed, and the process
    repeats until three lines remain and meet at one point. Node ids
    ``0..n-1`` are the polygon vertices.
    """
    poly = as_polygon(P)
    n = poly.n
    nodes: list[complex] = list(poly.vertices)
    edges: list[tuple[int, int]] = []
    active = list(range(n))
    start = {j: j for j in range(n)}
    while len(active) > 3:
        events = []
        m = len(active)
        for pos in range(m):
            prev, cur, nxt = active[pos - 1], active[pos], active[(pos + 1) % m]
            p, t = _equidistant_point(poly, (prev, cur, nxt))
            events.append((t, pos, p))
        t, pos, p = min(events, key=lambda ev: (ev[0], ev[1]))
        cur, nxt = active[pos], active[(pos + 1) % m]
        nodes.append(p)
        new = len(nodes) - 1
        edges.append((start[cur], new))
        edges.append((start[nxt], new))
        start[nxt] = new
        active.pop(pos)
    p, _ = _equidistant_point(poly, active)
    nodes.append(p)
    new = len(nodes) - 1
    edges.extend((start[j], new) for j in active)
    merged, out, _ = _merge_graph(nodes, edges)
    return PlanarGraph(tuple(merged), tuple(out))


def medial_graph(P: Domain) -> PlanarGraph:
    """``Gr(P)``: the medial axis without the polygon vertices and the edges reaching them.

    What is left are the interior branch points and the edges between
    them. A polygon with an inscribed circle yields the single centre.
    """
    poly = as_polygon(P)
    axis = medial_axis(poly)
    boundary = set(range(poly.n))
    keep = [i for i in range(len(axis.nodes)) if i not in boundary]
    index = {old: new for new, old in enumerate(keep)}
    edges = tuple((index[i], index[j]) for i, j in axis.edges if i in index and j in index)
    return PlanarGraph(tuple(axis.nodes[i] for i in keep), edges)


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


@dataclass(frozen=True)
class SCircle:
    center: complex
    radius: float
    points: np.ndarray
    corner: np.ndarray
    omitted: tuple
    nonmonotone: tuple

    def closed(self) -> np.ndarray:
        return np.append(self.points, self.points[:1])


def _exit_distance(poly: ConvexPolygon, x: complex, dirs: np.ndarray) -> np.ndarray:
    v = poly.signed_distances(x)
    speed = -(np.conj(poly.directions)[None, :] * dirs[:, None]).imag
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(speed > 0, v[None, :] / speed, np.inf)
    return np.min(t, axis=1)


def _radial_solve(poly, x, r, dirs, iterations=64):
    t_max = _exit_distance(poly, x, dirs) * (1.0 - 1e-12)
    lo = np.zeros_like(t_max)
    hi = t_max.copy()
    reachable = s_metric_values(poly, x, x + hi * dirs, check=False) >= r
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        above = s_metric_values(poly, x, x + mid * dirs, check=False) >= r
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi), t_max, reachable


def s_circle(P: Domain, x: complex, r: float, directions: int = 720) -> SCircle:
    """The s-metric circle ``{y : s(x, y) = r}`` traced along rays from ``x``.

    Each ray is solved by bisection, assuming ``t -> s(x, x + t e)`` is
    nondecreasing; a 64-sample pre-scan checks that and reports rays where
    it fails in ``nonmonotone``. Rays that never reach ``r`` are dropped
    and listed in ``omitted``. Where neighbouring rays meet different
    boundary sides the switching point is located by bisection on the
    angle and inserted, so the polyline has its corners at the true
    kinks of the curve.
    """
    poly = as_polygon(P)
    x = complex(x)
    _require_interior(poly, x)
    if not 0.0 < r < 1.0:
        raise DomainError("radius must lie in (0, 1)")
    if directions < 8:
        raise DomainError("need at least 8 directions")
    thetas = 2 * math.pi * np.arange(directions) / directions
    dirs = np.exp(1j * thetas)
    t, t_max, reachable = _radial_solve(poly, x, r, dirs)

    fractions = np.arange(1, 65) / 65.0
    scan = s_metric_values(poly, x, x + (t_max[:, None] * fractions[None, :]) * dirs[:, None], check=False)
    nonmonotone = tuple(int(i) for i in np.flatnonzero(np.any(np.diff(scan, axis=1) < -1e-13, axis=1)))

    pts = x + t * dirs
    labels = nearest_side_labels(poly, x, pts)
    keep = np.flatnonzero(reachable)
    nxt = np.roll(keep, -1)
    switch = np.flatnonzero(labels[keep] != labels[nxt])

    corner_pts = np.empty(0, dtype=complex)
    if switch.size:
        th_lo = thetas[keep[switch]]
        th_hi = thetas[nxt[switch]]
        th_hi = np.where(th_hi <= th_lo, th_hi + 2 * math.pi, th_hi)
        lab_lo = labels[keep[switch]]
        for _ in range(48):
            mid = 0.5 * (th_lo + th_hi)
            d = np.exp(1j * mid)
            tm, _, _ = _radial_solve(poly, x, r, d)
            same = nearest_side_labels(poly, x, x + tm * d) == lab_lo
            th_lo = np.where(same, mid, th_lo)
            th_hi = np.where(same, th_hi, mid)
        mid = 0.5 * (th_lo + th_hi)
        d = np.exp(1j * mid)
        tm, _, _ = _radial_solve(poly, x, r, d)
        corner_pts = x + tm * d

    out, is_corner = [], []
    inserted = dict(zip(switch.tolist(), corner_pts.tolist()))
    for pos, i in enumerate(keep):
        out.append(pts[i])
        is_corner.append(False)
        if pos in inserted:
            z = inserted[pos]
            nxt_pt = pts[keep[(pos + 1) % keep.size]]
            # a ray that hits the kink exactly already carries the corner
            if abs(z - pts[i]) <= 1e-12 * (1.0 + abs(z)):
                is_corner[-1] = True
            elif abs(z - nxt_pt) > 1e-12 * (1.0 + abs(z)):
                out.append(z)
                is_corner.append(True)
    omitted = tuple(int(i) for i in np.flatnonzero(~reachable))
    return SCircle(x, float(r), np.array(out, dtype=complex), np.array(is_corner), omitted, nonmonotone)
