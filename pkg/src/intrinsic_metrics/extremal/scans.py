"""Empirical scans: maximum location of ``2d/r``, monotonicity toward the
boundary, the finite-difference limit of ``th(rho/2)/s``, and the
two-sided comparison of ``th(rho/2)`` with ``s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from ..geometry import Rectangle, boundary_distance, distance_to_boundary, medial_graph, s_metric_values
from ..hypmetric import local_ratio, th_rho_rect
from .domains import d1_conformal_radius, d1_contains, d1_distance
from .rectangle import c_lambda_k, conformal_radius_rect, ratio_rect
from .report import ExtremalReport

UPPER_LABEL = "conjecture-supporting"


@dataclass(frozen=True)
class MonotonicityReport:
    ok: bool
    z0: complex
    contact: complex
    base_ratio: float
    max_excess: float
    samples: int

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "z0": [self.z0.real, self.z0.imag],
            "contact": [self.contact.real, self.contact.imag],
            "base_ratio": self.base_ratio,
            "max_excess": self.max_excess,
            "samples": self.samples,
        }


def segment_monotonicity_check(P, z0: complex, contact: complex | None = None, samples: int = 200, tol: float = 1e-10) -> MonotonicityReport:
    """Check ``d(z1)/r(z1) <= d(z0)/r(z0)`` for ``z1`` on the segment from ``z0`` to a nearest boundary point.

    ``P`` is a :class:`Rectangle` or the string ``"D1"``. When ``contact``
    is omitted the first nearest boundary point is used.
    """
    z0 = complex(z0)
    if isinstance(P, Rectangle):
        if contact is None:
            contact = boundary_distance(P, z0).contacts[0]
        dist = lambda z: distance_to_boundary(P, z)
        rad = lambda z: conformal_radius_rect(P, z)
    elif isinstance(P, str) and P.upper() == "D1":
        if not d1_contains(z0):
            raise DomainError("point is not inside D1")
        if contact is None:
            contact = d1_distance(z0)[1]
        dist = lambda z: np.array([d1_distance(complex(p))[0] for p in np.ravel(z)])
        rad = lambda z: np.array([d1_conformal_radius(complex(p)) for p in np.ravel(z)])
    else:
        raise DomainError("segment check supports a Rectangle or 'D1'")
    contact = complex(contact)
    ts = np.linspace(0.0, 0.99, samples + 1)[1:]
    pts = z0 + ts * (contact - z0)
    base = float(np.ravel(dist(np.array([z0])) / rad(np.array([z0])))[0])
    vals = np.ravel(dist(pts) / rad(pts))
    excess = float(np.max(vals - base))
    return MonotonicityReport(excess <= tol, z0, contact, base, excess, samples)


@dataclass(frozen=True)
class ConjectureScan:
    k: float
    pairs: int
    seed: int
    max_ratio: float
    argmax_pair: tuple
    c_value: float
    lower_violations: int
    upper_exceedances: int
    upper_label: str = UPPER_LABEL

    def to_json(self) -> dict:
        u, v = self.argmax_pair
        return {
            "k": self.k,
            "pairs": self.pairs,
            "seed": self.seed,
            "max_ratio": self.max_ratio,
            "argmax_pair": [[u.real, u.imag], [v.real, v.imag]],
            "c_lambda": self.c_value,
            "lower_bound_violations": self.lower_violations,
            "upper_bound_exceedances": self.upper_exceedances,
            "upper_bound_status": self.upper_label if self.upper_exceedances == 0 else "counterexample-candidate",
        }


def random_interior_points(R: Rectangle, n: int, rng: np.random.Generator, margin: float = 1e-9) -> np.ndarray:
    k = R.k
    x = rng.uniform(-k, k, n) * (1 - margin)
    y = rng.uniform(-1, 1, n) * (1 - margin)
    return x + 1j * y


def conjecture_scan(R: Rectangle, pairs: int, seed: int) -> ConjectureScan:
    """Ratios ``th(rho_R/2) / s_R`` on seeded uniform random pairs.

    The lower bound ``s <= th(rho/2)`` must hold; the upper bound
    ``th(rho/2) <= C s`` is conjectural and its exceedances are only counted.
    """
    if pairs < 1:
        raise DomainError("pairs must be at least 1")
    rng = np.random.default_rng(seed)
    u = random_interior_points(R, pairs, rng)
    v = random_interior_points(R, pairs, rng)
    th = th_rho_rect(R, u, v)
    s = s_metric_values(R, u, v)
    ratio = th / s
    c = c_lambda_k(R.k)
    lower = int(np.count_nonzero(s > th * (1 + 1e-10)))
    upper = int(np.count_nonzero(th > c * s * (1 + 1e-9)))
    i = int(np.argmax(ratio))
    return ConjectureScan(R.k, pairs, int(seed), float(ratio[i]), (complex(u[i]), complex(v[i])), c, lower, upper)


def _best(values: np.ndarray, points: np.ndarray, rtol: float = 1e-12):
    """Maximum with ties broken by the lexicographically smaller location."""
    top = np.max(values)
    tied = np.flatnonzero(values >= top - rtol * abs(top))
    j = min(tied, key=lambda i: (points[i].real, points[i].imag))
    return float(values[j]), complex(points[j])


def rect_extremal_scan(R: Rectangle, grid: int = 64, levels: int = 24) -> ExtremalReport:
    """Maximize ``2d/r`` on a grid over ``R`` and zoom in around the maximum.

    The residual compares the maximum with ``C``; the flags record the
    distance of the maximizer from ``+-(k-1)`` (after normalization) and
    the maximum over ``Gr(R)``.
    """
    if grid < 16:
        raise DomainError("grid must be at least 16")
    Rn, c = R.normalized()
    k = Rn.k
    xs = (np.arange(grid) + 0.5) / grid * 2 * k - k
    ys = (np.arange(grid) + 0.5) / grid * 2 - 1
    pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    vals = ratio_rect(Rn, pts)
    grid_min = float(np.min(vals))
    best, loc = _best(vals, pts)
    hx, hy = 2 * k / grid, 2.0 / grid
    lim = 1 - 1e-12
    for _ in range(levels):
        gx = np.clip(loc.real + np.linspace(-hx, hx, 9), -k * lim, k * lim)
        gy = np.clip(loc.imag + np.linspace(-hy, hy, 9), -lim, lim)
        cand = (gx[None, :] + 1j * gy[:, None]).ravel()
        cv = ratio_rect(Rn, cand)
        b2, l2 = _best(np.r_[cv, best], np.r_[cand, loc])
        best, loc = b2, l2
        hx /= 4
        hy /= 4
    cval = c_lambda_k(k)
    gr = medial_graph(Rn)
    gr_pts = gr.sample(per_edge=201, include_ends=True)
    gr_vals = ratio_rect(Rn, gr_pts)
    gr_best, gr_loc = _best(gr_vals, gr_pts)
    target = k - 1.0
    argmax_error = min(abs(loc - target), abs(loc + target))
    return ExtremalReport(
        name="rect_ratio_max",
        value=best,
        location=loc / c,
        formula_ref="max of 2d/r over a zoomed grid vs K|cn dn/sn| at iK",
        oracle_residual=abs(best - cval),
        tolerance=1e-6,
        flags={
            "k": R.k,
            "c_lambda": cval,
            "argmax_error": argmax_error,
            "grid_min": grid_min,
            "graph_max": gr_best,
            "graph_argmax": gr_loc / c,
        },
    )


@dataclass(frozen=True)
class LemmaLimitScan:
    k: float
    points: int
    max_error: float
    max_spread: float
    worst_point: complex
    violations: int = field(default=0)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "points": self.points,
            "max_error": self.max_error,
            "max_direction_spread": self.max_spread,
            "worst_point": [self.worst_point.real, self.worst_point.imag],
            "violations": self.violations,
        }


def lemma_limit_scan(R: Rectangle, grid: int = 8, h_factor: float = 1e-4, tol: float = 1e-3) -> LemmaLimitScan:
    """Compare ``local_ratio`` with ``2d/r`` on a ``grid x grid`` cell-centre sample.

    The step is ``h_factor`` times the boundary distance of each point.
    """
    k = R.k
    xs = (np.arange(grid) + 0.5) / grid * 2 * k - k
    ys = (np.arange(grid) + 0.5) / grid * 2 - 1
    pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    errs, spreads = [], []
    for p in pts:
        d = float(distance_to_boundary(R, p))
        est, spread = local_ratio(R, p, h_factor * d, spread=True)
        errs.append(abs(est - ratio_rect(R, p)))
        spreads.append(spread)
    errs = np.array(errs)
    i = int(np.argmax(errs))
    return LemmaLimitScan(k, len(pts), float(errs[i]), float(max(spreads)), complex(pts[i]), int(np.count_nonzero(errs > tol)))
