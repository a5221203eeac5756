"""Maxima of the conformal radius and of ``2d/r`` for the disk images ``D1``..``D5``.

``D1 = sqrt(1+z) - 1`` (half lemniscate), ``D2 = z + sqrt(1+z^2) - 1``
(crescent), ``D3 = alpha z + beta z^2`` (cardioid-like, ``D4`` being
``alpha = sqrt 2, beta = 1/2``) and ``D5 = z / (1 - alpha z^2)`` (Booth
lemniscate), each applied to the unit disk. Conformal radii in the
oracles use ``r(w) = (1 - |g(w)|^2) / |g'(w)|`` with ``g`` the inverse
map onto the disk.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import optimize

from ..errors import DomainError
from .report import ExtremalReport, bisect_increasing, curve_distance, maximize_1d

SQRT2 = math.sqrt(2.0)
DOMAIN_TOL = 1e-9


# D1 -------------------------------------------------------------------

def d1_boundary(sigma):
    """Boundary of ``D1`` for ``sigma`` in ``[-1, 1]``.

    The polar angle ``(pi/4) sigma (2 - |sigma|)`` on the lemniscate
    ``rho^2 = 2 cos(2 phi)`` spaces points evenly in arc length near the
    right-angle corner at ``-1``, which the angle ``theta`` of the disk
    boundary point reaches only quadratically.
    """
    sigma = np.asarray(sigma, dtype=float)
    phi = 0.25 * math.pi * sigma * (2.0 - np.abs(sigma))
    rho = np.sqrt(np.maximum(2.0 * np.cos(2.0 * phi), 0.0))
    return rho * np.exp(1j * phi) - 1.0


def d1_contains(w: complex) -> bool:
    return abs(w * (w + 2.0)) < 1.0 and (w + 1.0).real > 0.0


def d1_conformal_radius(w: complex) -> float:
    g = w * (w + 2.0)
    return (1.0 - abs(g) ** 2) / abs(2.0 * w + 2.0)


def d1_distance(w: complex) -> tuple[float, complex]:
    """Numerical boundary distance of ``D1`` and the nearest boundary point."""
    d, sigma = curve_distance(d1_boundary, w, -1.0, 1.0)
    return d, complex(d1_boundary(sigma))


def _d1_A(theta: float, t: float) -> float:
    """Squared distance from ``t - 1`` to the boundary point with angle ``theta``."""
    return abs(cmath.sqrt(1.0 + cmath.exp(1j * theta)) - t) ** 2


def _d1_f(tau: float, t: float) -> float:
    """``_d1_A`` rewritten in ``tau = cos(theta/4)``."""
    s = 2.0 * tau * tau - 1.0
    return t * t - 2.0 * SQRT2 * t * tau * math.sqrt(s) + 2.0 * s


def _d1_tau0(t: float) -> float:
    """Minimizer of ``_d1_f`` over ``tau`` for ``0 < t < 2 sqrt(2)/3``."""
    return math.sqrt(0.25 * (1.0 + 1.0 / math.sqrt(1.0 - t * t)))


def d1_distance_closed(w: float) -> float:
    t = 1.0 + w
    if not 0.0 < t < SQRT2:
        raise DomainError("real point outside D1")
    if t < 2.0 * SQRT2 / 3.0:
        s = 1.0 - t * t
        return math.sqrt(math.sqrt(s) - s)
    return SQRT2 - t


def d1_radius_closed(w: float) -> float:
    t = 1.0 + w
    return 0.5 * t * (2.0 - t * t)


def _d1_reports() -> list[ExtremalReport]:
    lo, hi = -1.0 + 1e-6, SQRT2 - 1.0 - 1e-6

    u0 = bisect_increasing(lambda u: 4 * u**3 + 3 * u**2 - 1, 0.0, 1.0, xtol=1e-16)
    w0 = math.sqrt(1.0 - u0 * u0) - 1.0
    ratio = 2.0 * d1_distance_closed(w0) / d1_radius_closed(w0)
    w_or, ratio_or = maximize_1d(lambda w: 2.0 * d1_distance(w)[0] / d1_conformal_radius(w), lo, hi, samples=401)

    r_max = 2.0 * math.sqrt(6.0) / 9.0
    w_r = math.sqrt(6.0) / 3.0 - 1.0
    w_ror, r_or = maximize_1d(lambda w: d1_conformal_radius(w), lo, hi)
    return [
        ExtremalReport(
            "D1_ratio_max", ratio, w0, "2d/r with t=1+w, d=sqrt(sqrt(1-t^2)-(1-t^2)), r=t(2-t^2)/2, 4u^3+3u^2-1=0",
            abs(ratio - ratio_or), DOMAIN_TOL,
            {"u0": u0, "oracle_value": ratio_or, "oracle_location": w_or},
        ),
        ExtremalReport(
            "D1_radius_max", r_max, w_r, "2*sqrt(6)/9 at sqrt(6)/3-1",
            abs(r_max - r_or), DOMAIN_TOL,
            {"oracle_value": r_or, "oracle_location": w_ror},
        ),
    ]


# D2 -------------------------------------------------------------------

def d2_map(z):
    z = np.asarray(z, dtype=complex)
    return z + np.sqrt(1.0 + z * z) - 1.0


def d2_boundary(theta):
    return d2_map(np.exp(1j * np.asarray(theta)))


def d2_conformal_radius(w: complex) -> float:
    s = w + 1.0
    g = 0.5 * (s - 1.0 / s)
    dg = 0.5 * (1.0 + 1.0 / (s * s))
    return (1.0 - abs(g) ** 2) / abs(dg)


def _octic(t: float) -> float:
    return 4 * t**8 + 12 * t**6 + t**4 - 10 * t**2 + 1


def d2_octic_root() -> float:
    """Smallest positive root of ``4t^8 + 12t^6 + t^4 - 10t^2 + 1`` in ``(0.25, 0.4)``."""
    grid = np.round(np.arange(0.25, 0.4 + 1e-12, 0.01), 10)
    for a, b in zip(grid[:-1], grid[1:]):
        if _octic(a) * _octic(b) <= 0.0:
            return float(optimize.bisect(_octic, a, b, xtol=1e-16, maxiter=200))
    raise DomainError("no sign change of the octic in (0.25, 0.4)")


def d2_radius_bound(t: float) -> float:
    return (1.0 + abs(t) / math.sqrt(1.0 + t * t)) * (1.0 - t * t)


def d2_ratio_closed(t: float) -> float:
    """``2d/r`` on the real axis in terms of ``t = w + 1``."""
    c = SQRT2 - 1.0
    if not c < t < SQRT2 + 1.0:
        raise DomainError("t outside (sqrt2-1, sqrt2+1)")
    d = t - c if t < SQRT2 else SQRT2 + 1.0 - t
    return 4.0 * d * (t * t + 1.0) / (6.0 * t * t - t**4 - 1.0)


def _d2_reports() -> list[ExtremalReport]:
    lo, hi = SQRT2 - 2.0 + 1e-6, SQRT2 - 1e-6
    t_star = SQRT2
    ratio = d2_ratio_closed(t_star)
    w_or, ratio_or = maximize_1d(lambda w: 2.0 * curve_distance(d2_boundary, w)[0] / d2_conformal_radius(w), lo, hi, samples=401)

    t0 = d2_octic_root()
    M = d2_radius_bound(t0)
    w_t0 = float(d2_map(t0).real)
    t_or, r_or = maximize_1d(d2_radius_bound, 0.0, 1.0 - 1e-9)
    w_ror, r_or_w = maximize_1d(lambda w: d2_conformal_radius(w), lo, hi)
    return [
        ExtremalReport(
            "D2_ratio_max", ratio, t_star - 1.0, "4(t-(sqrt2-1))(t^2+1)/(6t^2-t^4-1) at t=sqrt2",
            abs(ratio - ratio_or), DOMAIN_TOL,
            {"oracle_value": ratio_or, "oracle_location": w_or, "printed_B_without_factor_4": ratio / 4.0},
        ),
        ExtremalReport(
            "D2_real_radius_max", M, w_t0, "(1+t/sqrt(1+t^2))(1-t^2) at the least positive root of 4t^8+12t^6+t^4-10t^2+1",
            abs(M - r_or_w), DOMAIN_TOL,
            {
                "t0": t0,
                "oracle_value": r_or_w,
                "oracle_location": w_ror,
                "oracle_t": t_or,
                "oracle_value_in_t": r_or,
                "octic_root_is_critical_point": abs(t0 - t_or) < 1e-6,
            },
        ),
    ]


# D3 / D4 --------------------------------------------------------------

def _d3_report(alpha: complex, beta: complex, name: str) -> ExtremalReport:
    A, Bm = abs(alpha), abs(beta)
    if not (Bm > 0 and A >= 2.0 * Bm * (1 - 1e-15)):
        raise DomainError("need |alpha| >= 2|beta| > 0")
    ell = lambda r: A + 2 * Bm * r - A * r * r - 2 * Bm * r**3
    r1 = (-A + math.sqrt(A * A + 12 * Bm * Bm)) / (6 * Bm)
    delta = cmath.phase(alpha / beta)
    z1 = r1 * cmath.exp(1j * delta)
    w0 = alpha * z1 + beta * z1 * z1
    value = ell(r1)
    ray = cmath.exp(1j * delta)
    s_or, r_or = maximize_1d(lambda s: abs(alpha + 2 * beta * s * ray) * (1 - s * s), 0.0, 1.0)
    flags = {"alpha": complex(alpha), "beta": complex(beta), "r1": r1, "delta": delta, "oracle_value": r_or, "oracle_r": s_or}
    return ExtremalReport(
        name, value, w0, "l(r1), l(r)=|a|+2|b|r-|a|r^2-2|b|r^3, r1=(-|a|+sqrt(|a|^2+12|b|^2))/(6|b|)",
        abs(value - r_or), DOMAIN_TOL, flags,
    )


def _d4_report() -> ExtremalReport:
    rep = _d3_report(SQRT2, 0.5, "D4_radius_max")
    closed = 2.0 / 27.0 * (7 * SQRT2 + 5 * math.sqrt(5.0))
    loc = (4 * math.sqrt(10.0) - 5.0) / 18.0
    flags = dict(rep.flags, closed_form=closed, closed_location=loc)
    return ExtremalReport(
        rep.name, closed, loc, "(2/27)(7sqrt2+5sqrt5) at (4sqrt10-5)/18",
        abs(closed - rep.flags["oracle_value"]), DOMAIN_TOL, flags,
    )


# D5 -------------------------------------------------------------------

def _d5_report(alpha: float) -> ExtremalReport:
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise DomainError("need 0 <= alpha < 1")
    psi = lambda tau: (1 + alpha * tau) * (1 - tau) / (1 - alpha * tau) ** 2
    tau_or, m_or = maximize_1d(psi, 0.0, 1.0)
    if alpha <= 1.0 / 3.0:
        value, tau, w0 = 1.0, 0.0, 0.0
        formula = "1 at the origin (alpha <= 1/3)"
        w_direct = 0.0
    else:
        value = (1 + alpha) ** 2 / (8 * alpha * (1 - alpha))
        tau = (3 * alpha - 1) / (alpha * (3 - alpha))
        w0 = (3 * alpha - 1) * (3 - alpha) / ((1 - alpha) * (-alpha * alpha + 14 * alpha - 1))
        formula = "(1+a)^2/(8a(1-a)) at tau=(3a-1)/(a(3-a)), w0=(3a-1)(3-a)/((1-a)(-a^2+14a-1))"
        t = math.sqrt(tau_or)
        w_direct = t / (1 - alpha * t * t)
    flags = {
        "alpha": alpha,
        "tau": tau,
        "oracle_tau": tau_or,
        "oracle_value": m_or,
        "direct_maximizer": w_direct,
        "location_mismatch": abs(w0 - w_direct) > 1e-6,
    }
    return ExtremalReport("D5_radius_max", value, w0, formula, abs(value - m_or), DOMAIN_TOL, flags)


def domain_report(domain_id: str, alpha=None, beta=None) -> list[ExtremalReport]:
    """Extremal reports for ``"D1"``, ``"D2"``, ``"D3"`` (needs ``alpha, beta``), ``"D4"`` or ``"D5"`` (needs ``alpha``)."""
    key = str(domain_id).upper()
    if key == "D1":
        return _d1_reports()
    if key == "D2":
        return _d2_reports()
    if key == "D3":
        if alpha is None or beta is None:
            raise DomainError("D3 needs alpha and beta")
        return [_d3_report(complex(alpha), complex(beta), "D3_radius_max")]
    if key == "D4":
        return [_d4_report()]
    if key == "D5":
        if alpha is None:
            raise DomainError("D5 needs alpha")
        return [_d5_report(alpha)]
    raise DomainError(f"unknown domain {domain_id!r}")
