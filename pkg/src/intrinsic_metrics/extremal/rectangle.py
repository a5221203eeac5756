"""Conformal radius of a rectangle, the ratio ``2d/r`` and its sharp upper bound ``C``."""

from __future__ import annotations

import math

import numpy as np

from .. import specfun
from ..errors import DomainError, SingularityError
from ..geometry import Rectangle, distance_to_boundary
from ..hypmetric import rect_map, rect_modulus, rect_to_halfplane
from ..specfun import EllipticModulus

LAMBDA0 = 3.0 - 2.0 * math.sqrt(2.0)


def conformal_radius_rect(R: Rectangle, v):
    """``r_R(v) = 2 Im F(v) / |F'(v)|`` for any half-plane uniformizer ``F``.

    Rectangles with ``k < 1`` are rotated to half-width ``1/k`` first; the
    radius scales with the similarity factor.
    """
    Rn, c = R.normalized()
    v = np.asarray(v, dtype=complex)
    w, dw = rect_to_halfplane(rect_map(Rn.k), v * c)
    r = 2.0 * np.imag(w) / np.abs(dw) / abs(c)
    return float(r) if np.ndim(r) == 0 else r


def ratio_rect(R: Rectangle, v):
    """``2 d_R(v) / r_R(v)``."""
    v = np.asarray(v, dtype=complex)
    out = 2.0 * distance_to_boundary(R, v) / conformal_radius_rect(R, v)
    return float(out) if np.ndim(out) == 0 else out


def _sn_imag_quarter(m: EllipticModulus) -> float:
    """``a = |sn(iK, lam)|`` via ``sn(iu, lam) = i sc(u, lam')``."""
    s1, c1, _ = specfun.jacobi_real(m.K, m.complement())
    return float(s1 / c1)


def c_lambda_forms(m: EllipticModulus) -> tuple[float, float]:
    """``C`` from the raw Jacobi quotient at ``iK`` and from the ``a(lam)`` form."""
    if m.K >= m.Kp:
        raise SingularityError("iK lies on or beyond the pole iK'", abs(m.Kp - m.K))
    sn, cn, dn = specfun.jacobi_complex(1j * m.K, m)
    raw = float(m.K * abs(cn * dn / sn))
    a = _sn_imag_quarter(m)
    lam = m.lam
    simplified = m.K * math.sqrt((1.0 + a * a) * (1.0 + (lam * a) ** 2)) / a
    return raw, simplified


def c_lambda(m: EllipticModulus) -> float:
    """``C = K |cn(iK) dn(iK) / sn(iK)|``, the maximum of ``2d/r`` over the rectangle with modulus ``m``."""
    return c_lambda_forms(m)[1]


def c_lambda_k(k: float) -> float:
    """``C`` for the rectangle of half-width ``k``; ``k < 1`` uses the rotated rectangle."""
    k = float(k)
    if not k > 0:
        raise DomainError("half-width must be positive")
    if k < 1.0:
        k = 1.0 / k
    return c_lambda(rect_modulus(k))


def landen_h(lam: float) -> float:
    """``((1 - sqrt(lam)) / (1 + sqrt(lam)))^2``; swaps ``K'/K = r`` with ``4/r``."""
    root = math.sqrt(lam)
    return ((1.0 - lam) / (1.0 + root) ** 2) ** 2


def c_tilde(lam: float) -> float:
    """``C`` extended to all moduli in ``(0, 1)``.

    Moduli above ``LAMBDA0`` describe the same rectangles as their Landen
    images below it, so both branches evaluate ``C`` at
    ``min(lam, h(lam))``, the modulus with ``K < K'``.
    """
    lam = float(lam)
    if not 0.0 < lam < 1.0:
        raise DomainError("modulus must lie in (0, 1)")
    mu = min(lam, landen_h(lam))
    if mu <= 0.0:
        # h(lam) underflowed: the half-strip limit
        return 0.5 * math.pi / math.tanh(0.5 * math.pi)
    return c_lambda(specfun.elliptic_k(mu))
