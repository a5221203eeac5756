"""Hyperbolic metric in the disk, the half-plane and rectangles.

The rectangle ``R = [-k, k] x [-1, 1]`` (``k >= 1``) is mapped onto the
upper half-plane by ``F(z) = sn(i K (k - z), lam)``: the affine part
sends ``R`` onto ``[-K, K] x [0, 2kK]``, which sn maps conformally onto
the upper half-plane exactly when ``K'(lam) = 2 k K(lam)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import optimize

from . import specfun
from .errors import DomainError, PrecisionError
from .geometry import Rectangle, distance_to_boundary, s_metric_values
from .specfun import EllipticModulus

# Below this modulus the AGM bracket is exhausted and theta series take over.
_LAM_FLOOR = 1e-300


def mobius_disk(a: complex, z):
    """``T_a(z) = (z - a) / (1 - conj(a) z)``, an automorphism of the unit disk."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError("Mobius centre must lie in the open unit disk")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-15):
        raise DomainError("argument must lie in the closed unit disk")
    out = (z - a) / (1.0 - np.conj(a) * z)
    return out[()] if out.ndim == 0 else out


def th_rho_canonical(domain: str, x, y):
    """``tanh(rho/2)`` for the hyperbolic metric of ``"half-plane"`` or ``"disk"``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if domain == "half-plane":
        if np.any(x.imag <= 0) or np.any(y.imag <= 0):
            raise DomainError("points must lie in the upper half-plane")
        out = np.abs(x - y) / np.abs(x - np.conj(y))
    elif domain == "disk":
        if np.any(np.abs(x) >= 1) or np.any(np.abs(y) >= 1):
            raise DomainError("points must lie in the open unit disk")
        out = np.abs(x - y) / np.abs(1.0 - x * np.conj(y))
    else:
        raise DomainError(f"unknown canonical domain {domain!r}")
    return out[()] if out.ndim == 0 else out


def _ratio_residual(log_lam: float, target: float) -> float:
    m = specfun.elliptic_k(math.exp(log_lam))
    return m.K / m.Kp - target


@lru_cache(maxsize=128)
def rect_modulus(k: float) -> EllipticModulus:
    """Modulus with ``K(lam)/K'(lam) = 1/(2k)`` for the rectangle of half-width ``k >= 1``.

    Solved by bisection in ``log lam``, where the ratio is strictly
    increasing. For very long rectangles (``k`` beyond roughly 220) the
    root drops below the smallest normal double; the theta-series record
    is returned instead, whose ``K, K'`` stay exact.
    """
    k = float(k)
    if not (k >= 1.0 and math.isfinite(k)):
        raise DomainError(f"rect_modulus needs k >= 1, got {k!r}")
    target = 0.5 / k
    lo, hi = math.log(_LAM_FLOOR), math.log(math.sqrt(0.5))
    if _ratio_residual(lo, target) > 0:
        return specfun.modulus_from_ratio_theta(target)
    root = optimize.bisect(_ratio_residual, lo, hi, args=(target,), xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return specfun.elliptic_k(math.exp(root))


@dataclass(frozen=True)
class RectMap:
    k: float
    modulus: EllipticModulus

    @property
    def alpha(self) -> float:
        return self.modulus.K


@lru_cache(maxsize=128)
def rect_map(k: float) -> RectMap:
    return RectMap(float(k), rect_modulus(k))


class HalfPlaneImage(NamedTuple):
    w: complex
    dw: complex


def _check_inside(k: float, z: np.ndarray) -> None:
    if np.any(np.abs(z.real) >= k - 1e-12) or np.any(np.abs(z.imag) >= 1.0 - 1e-12):
        raise DomainError("point is not strictly inside the rectangle")


def rect_to_halfplane(m: RectMap, z) -> HalfPlaneImage:
    """``w = F(z)`` and ``F'(z)`` for interior ``z`` (scalar or array).

    Vertices correspond as ``k+i -> 1``, ``k-i -> -1``,
    ``-k+i -> 1/lam``, ``-k-i -> -1/lam``.
    """
    z = np.asarray(z, dtype=complex)
    _check_inside(m.k, z)
    K = m.modulus.K
    sn, cn, dn = specfun.jacobi_complex(1j * K * (m.k - z), m.modulus)
    dw = -1j * K * np.asarray(cn) * np.asarray(dn)
    w = np.asarray(sn)
    if w.ndim == 0:
        return HalfPlaneImage(complex(w), complex(dw))
    return HalfPlaneImage(w, dw)


def _normalize(R: Rectangle, *points):
    Rn, c = R.normalized()
    return Rn, [np.asarray(p, dtype=complex) * c for p in points], abs(c)


def th_rho_rect(R: Rectangle, u, v):
    """``tanh(rho_R(u, v)/2)`` through the conformal map onto the half-plane."""
    Rn, (u, v), _ = _normalize(R, u, v)
    m = rect_map(Rn.k)
    wu = rect_to_halfplane(m, u).w
    wv = rect_to_halfplane(m, v).w
    return th_rho_canonical("half-plane", wu, wv)


def local_ratio(R: Rectangle, v: complex, h: float | None = None, spread: bool = False):
    """Finite-difference estimate of ``lim th(rho/2)/s`` as the pair collapses to ``v``.

    The quotient is evaluated at ``v + h e`` for ``e in {1, i, -1, -i}``
    and averaged; opposite directions cancel the first-order error. With
    ``spread=True`` the spread of the four values is returned as well.
    The step defaults to ``1e-4 d_R(v)`` and may not exceed ``1e-3 d_R(v)``.
    """
    v = complex(v)
    if not bool(R.contains(v)):
        raise DomainError("point is not strictly inside the rectangle")
    d = float(distance_to_boundary(R, v))
    if h is None:
        h = 1e-4 * d
    if not h > 0:
        raise DomainError("step must be positive")
    if h > 1e-3 * d * (1 + 1e-12):
        raise PrecisionError(f"step {h:.3e} exceeds 1e-3 times the boundary distance {d:.3e}")
    pts = v + h * np.array([1, 1j, -1, -1j])
    vals = th_rho_rect(R, np.full(4, v), pts) / s_metric_values(R, np.full(4, v), pts)
    mean = float(np.mean(vals))
    if spread:
        return mean, float(np.ptp(vals))
    return mean
