"""Closed-form maxima of ``2d/r`` for polygonal families.

Each producer returns an :class:`ExtremalReport` whose residual comes
from a separate computation: a 1-D maximization of ``2d/r`` along a
curve through the extremal point, a root polished on a different
representation of the same equation, or an unsimplified gamma form.
"""

from __future__ import annotations

import math

import numpy as np

from .. import specfun
from ..errors import DomainError
from .report import ExtremalReport, bisect_increasing, maximize_1d

SQRT_PI = math.sqrt(math.pi)
M0 = 0.5 * math.pi / math.tanh(0.5 * math.pi)


def _ray_distance(z: complex, direction: complex) -> float:
    t = max((z * direction.conjugate()).real, 0.0)
    return abs(z - t * direction)


def sector_ratio(gamma: float) -> ExtremalReport:
    """Sector ``0 < arg z < gamma``: ``2d/r = pi sin(gamma/2) / gamma`` on the bisector."""
    gamma = float(gamma)
    if not 0.0 < gamma < math.pi:
        raise DomainError("sector opening must lie in (0, pi)")
    p = math.pi / gamma
    edge = complex(math.cos(gamma), math.sin(gamma))

    def ratio_on_arc(theta: float) -> float:
        z = complex(math.cos(theta), math.sin(theta))
        zp = z**p
        g = (zp - 1j) / (zp + 1j)
        dg = 2j * p * z ** (p - 1) / (zp + 1j) ** 2
        r = (1.0 - abs(g) ** 2) / abs(dg)
        d = min(_ray_distance(z, 1.0), _ray_distance(z, edge))
        return 2.0 * d / r

    value = math.pi * math.sin(0.5 * gamma) / gamma
    theta, best = maximize_1d(ratio_on_arc, 1e-6 * gamma, gamma * (1 - 1e-6))
    return ExtremalReport(
        name="sector",
        value=value,
        location=complex(math.cos(0.5 * gamma), math.sin(0.5 * gamma)),
        formula_ref="pi*sin(gamma/2)/gamma",
        oracle_residual=abs(best - value),
        tolerance=1e-10,
        flags={"gamma": gamma, "conformal_radius": 2.0 * gamma / math.pi, "oracle_argmax_angle": theta},
    )


def half_strip_constant(a: float = 1.0) -> ExtremalReport:
    """Half-strip ``|Re z| < a, Im z > 0``: the maximum ``M0 = (pi/2) coth(pi/2)`` at ``ia``."""
    a = float(a)
    if not a > 0:
        raise DomainError("half-width must be positive")

    def ratio_on_axis(y: float) -> float:
        z = 1j * y
        c = math.pi / (2.0 * a)
        g = np.sin(c * z)
        dg = c * np.cos(c * z)
        r = 2.0 * g.imag / abs(dg)
        return 2.0 * min(a, y) / r

    y, best = maximize_1d(ratio_on_axis, 1e-3 * a, 4.0 * a, samples=4001)
    return ExtremalReport(
        name="half_strip",
        value=M0,
        location=1j * a,
        formula_ref="(pi/2)*coth(pi/2)",
        oracle_residual=abs(best - M0),
        tolerance=1e-10,
        flags={"a": a, "conformal_radius": 4.0 * a / math.pi * math.tanh(0.5 * math.pi), "oracle_argmax": y},
    )


def _sc_root(alpha: float, scale: float, target: float) -> float:
    """``x`` with ``scale * int_0^x (1+t^2)^(alpha-1) dt = target``; bracket grows until it holds."""
    f = lambda x: scale * specfun.sc_edge_integral(alpha, x) - target
    hi = 1.0
    while f(hi) < 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise DomainError("preimage bracket exceeded 1e12")
    return bisect_increasing(f, 0.0, hi, xtol=1e-15 * max(1.0, hi))


def _hyp_root(alpha: float, scale: float, target: float, guess: float) -> float:
    """Newton polishing of ``scale x 2F1(1/2, 1-alpha; 3/2; -x^2) = target``."""
    x = guess
    for _ in range(60):
        fx = scale * x * specfun.hyp2f1_real(0.5, 1.0 - alpha, 1.5, -x * x) - target
        step = fx / (scale * (1.0 + x * x) ** (alpha - 1.0))
        x -= step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    return x


def _coarse_guess(alpha: float, scale: float, target: float) -> float:
    """Sign-change scan of the hypergeometric form on a geometric grid."""
    xs = np.geomspace(1e-8, 1e8, 321)
    for lo, hi in zip(xs[:-1], xs[1:]):
        if scale * hi * specfun.hyp2f1_real(0.5, 1.0 - alpha, 1.5, -hi * hi) >= target:
            return float(math.sqrt(lo * hi))
    raise DomainError("no sign change in hypergeometric scan")


def m1_preimage(alpha: float) -> float:
    """``x(alpha)``: preimage of the incentre under the triangle map."""
    scale = 2.0 / SQRT_PI * specfun.gamma(1.0 - alpha) / specfun.gamma(0.5 - alpha)
    return _sc_root(alpha, scale, 0.5 * (1.0 - math.tan(0.5 * math.pi * alpha) ** 2))


def _m1_value(alpha: float, x: float) -> float:
    t2 = math.tan(0.5 * math.pi * alpha) ** 2
    return SQRT_PI * (1.0 - t2) * specfun.gamma(0.5 - alpha) * (1.0 + x * x) ** (1.0 - alpha) / (
        4.0 * specfun.gamma(1.0 - alpha) * x
    )


def triangle_m1(alpha: float) -> ExtremalReport:
    """Isosceles triangle with base angles ``alpha pi``: ``M1(alpha)``, the value at the incentre."""
    alpha = float(alpha)
    if not 0.0 < alpha < 0.5:
        raise DomainError("alpha must lie in (0, 1/2)")
    scale = 2.0 / SQRT_PI * specfun.gamma(1.0 - alpha) / specfun.gamma(0.5 - alpha)
    target = 0.5 * (1.0 - math.tan(0.5 * math.pi * alpha) ** 2)
    x = _sc_root(alpha, scale, target)
    value = _m1_value(alpha, x)
    x_or = _hyp_root(alpha, scale, target, _coarse_guess(alpha, scale, target))
    residual = abs(scale * specfun.sc_edge_integral(alpha, x) - target)
    return ExtremalReport(
        name="M1",
        value=value,
        location=target,
        formula_ref="sqrt(pi)*(1-tan(alpha*pi/2)^2)*Gamma(1/2-alpha)*(1+x^2)^(1-alpha)/(4*Gamma(1-alpha)*x)",
        oracle_residual=abs(value - _m1_value(alpha, x_or)),
        tolerance=1e-10,
        flags={"alpha": alpha, "x": x, "x_oracle": x_or, "root_residual": residual},
    )


def m2_preimage(alpha: float) -> float:
    scale = 2.0 / SQRT_PI * specfun.gamma(0.5 + alpha) / specfun.gamma(alpha)
    return _sc_root(alpha, scale, math.tan(0.5 * math.pi * alpha))


def _m2_value(alpha: float, x: float) -> float:
    return SQRT_PI * math.tan(0.5 * math.pi * alpha) * specfun.gamma(alpha) * (1.0 + x * x) ** (1.0 - alpha) / (
        2.0 * specfun.gamma(0.5 + alpha) * x
    )


def lambda_m2(alpha: float) -> ExtremalReport:
    """Symmetric triangle with one vertex at infinity, finite angles ``alpha pi``: ``M2(alpha)``."""
    alpha = float(alpha)
    if not 0.5 < alpha < 1.0:
        raise DomainError("alpha must lie in (1/2, 1)")
    scale = 2.0 / SQRT_PI * specfun.gamma(0.5 + alpha) / specfun.gamma(alpha)
    target = math.tan(0.5 * math.pi * alpha)
    x = _sc_root(alpha, scale, target)
    value = _m2_value(alpha, x)
    x_or = _hyp_root(alpha, scale, target, _coarse_guess(alpha, scale, target))
    residual = abs(scale * specfun.sc_edge_integral(alpha, x) - target)
    return ExtremalReport(
        name="M2",
        value=value,
        location=target,
        formula_ref="sqrt(pi)*tan(alpha*pi/2)*Gamma(alpha)*(1+x^2)^(1-alpha)/(2*Gamma(1/2+alpha)*x)",
        oracle_residual=abs(value - _m2_value(alpha, x_or)),
        tolerance=1e-10,
        flags={"alpha": alpha, "x": x, "x_oracle": x_or, "root_residual": residual},
    )


def m3(alpha: float) -> float:
    """``M1`` below 1/2, ``M0`` at 1/2, ``M2`` above."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if alpha < 0.5:
        return triangle_m1(alpha).value
    if alpha == 0.5:
        return M0
    return lambda_m2(alpha).value


def rhomb_ratio(delta: float) -> ExtremalReport:
    """Rhomb with acute angle ``delta`` and unit side: ``phi(delta)`` at the centre."""
    delta = float(delta)
    if not 0.0 < delta <= 0.5 * math.pi:
        raise DomainError("delta must lie in (0, pi/2]")
    two_pi = 2.0 * math.pi
    a, b = (two_pi - delta) / two_pi, (math.pi + delta) / two_pi
    value = math.pi * SQRT_PI / (2.0 * specfun.gamma(a) * specfun.gamma(b))
    g1, g2 = specfun.gamma(delta / two_pi), specfun.gamma((math.pi - delta) / two_pi)
    direct = math.sin(delta) * g1 * g2 / (4.0 * SQRT_PI)
    log_derivative = (specfun.digamma(a) - specfun.digamma(b)) / two_pi
    return ExtremalReport(
        name="rhomb",
        value=value,
        location=0j,
        formula_ref="pi*sqrt(pi)/(2*Gamma((2pi-delta)/(2pi))*Gamma((pi+delta)/(2pi)))",
        oracle_residual=abs(value - direct),
        tolerance=1e-12,
        flags={
            "delta": delta,
            "conformal_radius": 4.0 * SQRT_PI / (g1 * g2),
            "distance": 0.5 * math.sin(delta),
            "log_derivative": log_derivative,
            "increasing": log_derivative > 0 or delta == 0.5 * math.pi,
        },
    )


def ngon_ratio(n: int) -> ExtremalReport:
    """Regular ``n``-gon: ``(1/n) 2^(1-2/n) B(1/n, 1/2)`` at the centre."""
    if isinstance(n, bool) or int(n) != n or n < 3:
        raise DomainError("n must be an integer >= 3")
    n = int(n)
    value = 2.0 ** (1.0 - 2.0 / n) * specfun.beta(1.0 / n, 0.5) / n
    direct = (
        2.0 ** (1.0 - 2.0 / n) * SQRT_PI * specfun.gamma(0.5 - 1.0 / n)
        / (n * math.tan(math.pi / n) * specfun.gamma(1.0 - 1.0 / n))
    )
    return ExtremalReport(
        name="ngon",
        value=value,
        location=0j,
        formula_ref="(1/n)*2^(1-2/n)*B(1/n,1/2)",
        oracle_residual=abs(value - direct),
        tolerance=1e-11,
        flags={"n": n},
    )
