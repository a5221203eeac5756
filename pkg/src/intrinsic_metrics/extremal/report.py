"""Report record shared by every extremal computation, plus small numeric helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy import optimize

Location = Union[complex, float]


@dataclass(frozen=True)
class ExtremalReport:
    """A named extremal value with where it is attained and how it was checked.

    ``oracle_residual`` is the absolute gap between ``value`` and an
    independent computation; it must not exceed ``tolerance``.
    ``formula_ref`` is the closed form that produced ``value``.
    """

    name: str
    value: float
    location: Location
    formula_ref: str
    oracle_residual: float
    tolerance: float
    flags: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.oracle_residual <= self.tolerance

    def to_json(self) -> dict:
        loc = complex(self.location)
        out = {
            "name": self.name,
            "value": float(self.value),
            "location": [loc.real, loc.imag],
            "formula_ref": self.formula_ref,
            "oracle_residual": float(self.oracle_residual),
        }
        if self.flags:
            out["flags"] = _jsonable(self.flags)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def maximize_1d(f: Callable[[float], float], lo: float, hi: float, samples: int = 2001, xtol: float = 1e-15):
    """Global-then-local maximization on ``[lo, hi]``: dense scan, then golden-section refinement.

    Golden section needs only unimodality, so it also converges at kinks,
    where the maximum of ``2d/r`` usually sits. Returns ``(x, f(x))``.
    """
    xs = np.linspace(lo, hi, samples)
    vals = np.array([f(x) for x in xs])
    i = int(np.nanargmax(vals))
    if 0 < i < samples - 1:
        x = optimize.golden(lambda t: -f(t), brack=(xs[i - 1], xs[i], xs[i + 1]), tol=xtol)
        x = float(min(max(x, xs[i - 1]), xs[i + 1]))
        fx = f(x)
        if fx >= vals[i]:
            return x, float(fx)
    return float(xs[i]), float(vals[i])


def curve_distance(curve: Callable, w: complex, lo: float = -math.pi, hi: float = math.pi, samples: int = 4096):
    """Distance from ``w`` to a parameterized curve, with the nearest parameter.

    ``curve`` must accept numpy arrays. Every local minimum of a dense
    scan is refined by bounded Brent, so near-ties between separate
    boundary arcs are resolved by the refined values rather than by
    sample spacing.
    """
    ts = np.linspace(lo, hi, samples)
    d = np.abs(curve(ts) - w)
    left = np.r_[np.inf, d[:-1]]
    right = np.r_[d[1:], np.inf]
    candidates = np.flatnonzero((d <= left) & (d <= right))
    candidates = candidates[np.argsort(d[candidates])][:8]
    best_d, best_t = math.inf, float("nan")
    for i in candidates:
        a, b = ts[max(i - 1, 0)], ts[min(i + 1, samples - 1)]
        res = optimize.minimize_scalar(
            lambda t: float(np.abs(curve(np.array(t)) - w)), bounds=(a, b), method="bounded", options={"xatol": 1e-14}
        )
        for val, t in ((float(res.fun), float(res.x)), (float(d[i]), float(ts[i]))):
            if val < best_d:
                best_d, best_t = val, t
    return best_d, best_t


def bisect_increasing(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-13, maxiter: int = 400) -> float:
    """Root of a strictly increasing ``f`` on ``[lo, hi]`` by bisection."""
    flo, fhi = f(lo), f(hi)
    if not flo <= 0.0 <= fhi:
        raise ValueError("root is not bracketed")
    root = optimize.bisect(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=maxiter)
    return float(root)
