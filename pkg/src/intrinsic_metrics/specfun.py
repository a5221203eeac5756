"""Double-precision special functions.

Complete elliptic integrals via the arithmetic-geometric mean, Jacobi
elliptic functions by the descending Landen (AGM) scheme, gamma-family
functions via upward recurrence plus Stirling's series, and the
Schwarz-Christoffel edge integral ``int_0^x (1+t^2)^(alpha-1) dt``.

The elliptic modulus is the *modulus* ``lam`` (not the parameter
``m = lam**2``) throughout, so ``K(lam) = int_0^1 dt/sqrt((1-t^2)(1-lam^2 t^2))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError, SingularityError

_EPS = np.finfo(float).eps
_AGM_MAX_ITER = 64
_LANDEN_MAX_DEPTH = 32


@dataclass(frozen=True)
class EllipticModulus:
    """A modulus together with its complete integrals.

    ``lam_prime`` is stored rather than recomputed so that moduli whose
    complement rounds to 1 in double precision (very long rectangles)
    keep full relative accuracy in both directions; ``complement`` simply
    swaps the roles of the two.
    """

    lam: float
    lam_prime: float
    K: float
    Kp: float

    def complement(self) -> "EllipticModulus":
        return EllipticModulus(self.lam_prime, self.lam, self.Kp, self.K)

    @property
    def ratio(self) -> float:
        """``K/K'``."""
        return self.K / self.Kp


class JacobiTriple(NamedTuple):
    sn: complex
    cn: complex
    dn: complex


class GammaValues(NamedTuple):
    gamma: float
    log_gamma: float
    digamma: float


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two nonnegative numbers."""
    if a < 0 or b < 0:
        raise DomainError("agm needs nonnegative arguments")
    if a == 0 or b == 0:
        return 0.0
    for _ in range(_AGM_MAX_ITER):
        a_next = 0.5 * (a + b)
        b_next = math.sqrt(a * b)
        if abs(a_next - b_next) <= 1e-16 * a_next or (a_next, b_next) == (a, b):
            return a_next
        a, b = a_next, b_next
    return a


def complementary(lam: float) -> float:
    """``sqrt(1 - lam^2)`` without cancellation near ``lam = 1``."""
    return math.sqrt((1.0 - lam) * (1.0 + lam))


def elliptic_k(lam: float) -> EllipticModulus:
    """Complete elliptic integrals ``K(lam)`` and ``K'(lam) = K(sqrt(1-lam^2))``."""
    lam = float(lam)
    if not 0.0 < lam < 1.0:
        raise DomainError(f"modulus must lie in (0, 1), got {lam!r}")
    lam_p = complementary(lam)
    return EllipticModulus(lam, lam_p, math.pi / (2.0 * agm(1.0, lam_p)), math.pi / (2.0 * agm(1.0, lam)))


def modulus_from_pair(lam: float, lam_prime: float, K: float, Kp: float) -> EllipticModulus:
    """Assemble a modulus from externally computed values (no validation of ``K``)."""
    if lam < 0 or lam_prime < 0:
        raise DomainError("modulus and its complement must be nonnegative")
    return EllipticModulus(float(lam), float(lam_prime), float(K), float(Kp))


@lru_cache(maxsize=256)
def _landen_table(lam: float, lam_p: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    a, b, c = 1.0, lam_p, lam
    a_seq, c_seq = [a], [c]
    while abs(c) > _EPS * a and len(a_seq) <= _LANDEN_MAX_DEPTH:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    if abs(c) > _EPS * a:
        raise ConvergenceError("Landen recursion did not converge")
    return tuple(a_seq), tuple(c_seq)


def _unwrap(value, scalar: bool):
    return value[()] if scalar else value


def jacobi_real(u, m: EllipticModulus) -> JacobiTriple:
    """``sn, cn, dn`` of real argument ``u`` (scalar or array)."""
    u_arr = np.asarray(u, dtype=float)
    scalar = u_arr.ndim == 0
    if not np.all(np.isfinite(u_arr)):
        raise DomainError("argument must be finite")
    lam, lam_p = m.lam, m.lam_prime
    if lam == 0.0:
        sn, cn, dn = np.sin(u_arr), np.cos(u_arr), np.ones_like(u_arr)
    elif lam_p == 0.0:
        sech = 1.0 / np.cosh(u_arr)
        sn, cn, dn = np.tanh(u_arr), sech, sech
    else:
        a_seq, c_seq = _landen_table(lam, lam_p)
        depth = len(a_seq) - 1
        phi = (2.0**depth) * a_seq[depth] * u_arr
        for n in range(depth, 0, -1):
            phi = 0.5 * (phi + np.arcsin(c_seq[n] / a_seq[n] * np.sin(phi)))
        sn, cn = np.sin(phi), np.cos(phi)
        # sum of nonnegative terms: accurate even where cn vanishes
        dn = np.sqrt(lam_p * lam_p + (lam * cn) ** 2)
    return JacobiTriple(_unwrap(sn, scalar), _unwrap(cn, scalar), _unwrap(dn, scalar))


def pole_distance(z, m: EllipticModulus):
    """Distance from ``z`` to the nearest pole ``iK' + 2aK + 2biK'`` of sn."""
    z_arr = np.asarray(z, dtype=complex)
    half_re = 2.0 * m.K
    half_im = 2.0 * m.Kp
    re = z_arr.real - half_re * np.round(z_arr.real / half_re)
    shifted = z_arr.imag - m.Kp
    im = shifted - half_im * np.round(shifted / half_im)
    return np.hypot(re, im)


def _addition_formula(z: np.ndarray, m: EllipticModulus):
    s, c, d = jacobi_real(z.real, m)
    s1, c1, d1 = jacobi_real(z.imag, m.complement())
    lam2 = m.lam * m.lam
    den = c1 * c1 + lam2 * (s * s1) ** 2
    return s, c, d, s1, c1, d1, lam2, den


def jacobi_complex(z, m: EllipticModulus, pole_tol: float = 1e-9) -> JacobiTriple:
    """``sn, cn, dn`` of complex argument via the real/imaginary addition formulas.

    With ``s, c, d`` evaluated at ``Re z`` for modulus ``lam`` and
    ``s1, c1, d1`` at ``Im z`` for the complementary modulus::

        sn = (s d1 + i c d s1 c1) / D
        cn = (c c1 - i s d s1 d1) / D
        dn = (d c1 d1 - i lam^2 s c s1) / D,   D = c1^2 + lam^2 s^2 s1^2

    Arguments with ``K'/2 < |Im z| < 3K'/2`` are first moved by ``-+iK'``
    and mapped back with ``sn(u + iK') = 1/(lam sn u)``; near the pole
    row this keeps full relative accuracy and avoids underflow of ``D``.
    """
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    dist = pole_distance(z_arr, m)
    if np.any(dist < pole_tol):
        raise SingularityError("sn evaluated at a pole", float(np.min(dist)))
    shift = np.zeros(z_arr.shape)
    if m.lam > 0.0:
        v = z_arr.imag
        shift = np.where((v > 0.5 * m.Kp) & (v < 1.5 * m.Kp), 1.0, 0.0)
        shift = np.where((v < -0.5 * m.Kp) & (v > -1.5 * m.Kp), -1.0, shift)
    w = z_arr - 1j * m.Kp * shift
    s, c, d, s1, c1, d1, lam2, den = _addition_formula(w, m)
    if np.any(den == 0.0):
        raise SingularityError("addition formula denominator underflowed", float(np.min(dist)))
    sn = (s * d1 + 1j * (c * d * s1 * c1)) / den
    cn = (c * c1 - 1j * (s * d * s1 * d1)) / den
    dn = (d * c1 * d1 - 1j * (lam2 * s * c * s1)) / den
    if np.any(shift != 0.0):
        moved = shift != 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            # sn(u +- iK') = 1/(lam sn u), cn = -+i dn/(lam sn u), dn = -+i cn/sn u
            sn_m = 1.0 / (m.lam * sn)
            cn_m = -1j * shift * dn / (m.lam * sn)
            dn_m = -1j * shift * cn / sn
        sn, cn, dn = np.where(moved, sn_m, sn), np.where(moved, cn_m, cn), np.where(moved, dn_m, dn)
    return JacobiTriple(_unwrap(sn, scalar), _unwrap(cn, scalar), _unwrap(dn, scalar))


# Stirling-series coefficients B_2k / (2k (2k-1)) and B_2k / (2k)
_BERNOULLI = (
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0,
)
_LGAMMA_COEF = tuple(b / ((2 * k + 2) * (2 * k + 1)) for k, b in enumerate(_BERNOULLI))
_DIGAMMA_COEF = tuple(b / (2 * k + 2) for k, b in enumerate(_BERNOULLI))
_SHIFT_TO = 8.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _stirling_lgamma(y: float) -> float:
    inv = 1.0 / y
    inv2 = inv * inv
    series = 0.0
    for coef in reversed(_LGAMMA_COEF):
        series = series * inv2 + coef
    return (y - 0.5) * math.log(y) - y + _HALF_LOG_2PI + series * inv


def _stirling_digamma(y: float) -> float:
    inv2 = 1.0 / (y * y)
    series = 0.0
    for coef in reversed(_DIGAMMA_COEF):
        series = series * inv2 + coef
    return math.log(y) - 0.5 / y - series * inv2


def _shift(x: float) -> tuple[float, float, float]:
    """Return ``(y, prod, harmonic)`` with ``y = x + n >= 8``."""
    y, prod, harmonic = x, 1.0, 0.0
    while y < _SHIFT_TO:
        prod *= y
        harmonic += 1.0 / y
        y += 1.0
    return y, prod, harmonic


def _check_positive(x: float, name: str = "x") -> float:
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"{name} must be a positive finite number, got {x!r}")
    return x


def log_gamma(x: float) -> float:
    x = _check_positive(x)
    y, prod, _ = _shift(x)
    return _stirling_lgamma(y) - math.log(prod)


def gamma(x: float) -> float:
    x = _check_positive(x)
    y, prod, _ = _shift(x)
    inv = 1.0 / y
    inv2 = inv * inv
    series = 0.0
    for coef in reversed(_LGAMMA_COEF):
        series = series * inv2 + coef
    # split power keeps the relative error near one ulp for large y
    try:
        half = y ** (0.5 * (y - 0.5))
        return _SQRT_2PI * math.exp(series * inv) * half * math.exp(-y) * half / prod
    except OverflowError:
        return math.inf


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function."""
    x = _check_positive(x)
    y, _, harmonic = _shift(x)
    return _stirling_digamma(y) - harmonic


def gamma_suite(x: float) -> GammaValues:
    return GammaValues(gamma(x), log_gamma(x), digamma(x))


def beta(a: float, b: float) -> float:
    a = _check_positive(a, "a")
    b = _check_positive(b, "b")
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def sc_edge_integral(alpha_exponent: float, x: float) -> float:
    """``int_0^x (1 + t^2)^(alpha_exponent - 1) dt`` for ``x >= 0``.

    This is the Schwarz-Christoffel integral of a symmetric triangle
    whose two equal angles are ``alpha_exponent * pi``.
    """
    if not 0.0 < alpha_exponent < 1.0:
        raise DomainError("alpha_exponent must lie in (0, 1)")
    if x < 0:
        raise DomainError("upper limit must be nonnegative")
    if x == 0:
        return 0.0
    power = alpha_exponent - 1.0
    value, _ = integrate.quad(lambda t: (1.0 + t * t) ** power, 0.0, x, epsabs=1e-13, epsrel=1e-13, limit=200)
    return value


def hyp2f1_real(a: float, b: float, c: float, z: float, max_terms: int = 2_000_000) -> float:
    """Gauss hypergeometric function for real ``z < 1`` by power series.

    For ``z < -1/2`` the Pfaff transformation
    ``F(a,b;c;z) = (1-z)^(-b) F(c-a, b; c; z/(z-1))`` moves the argument
    into ``[1/3, 1)``. Only meant as an independent cross-check; the
    series slows down as the transformed argument approaches 1.
    """
    if z >= 1.0:
        raise DomainError("series needs z < 1")
    prefactor = 1.0
    if z < -0.5:
        prefactor = (1.0 - z) ** (-b)
        a, z = c - a, z / (z - 1.0)
    total, term, n = 1.0, 1.0, 0
    chunk = 4096
    while n < max_terms:
        k = np.arange(n, n + chunk, dtype=float)
        ratios = (a + k) * (b + k) / ((c + k) * (1.0 + k)) * z
        terms = term * np.cumprod(ratios)
        total += float(np.sum(terms))
        term = float(terms[-1])
        n += chunk
        if abs(term) < 1e-17 * abs(total) and abs(ratios[-1]) < 1.0:
            return prefactor * total
    raise ConvergenceError("hypergeometric series did not converge")


def theta_nome_series(log_q: float) -> tuple[float, float, float]:
    """Return ``(log theta2, log theta3, log theta4)`` for nome ``q = exp(log_q)``.

    Logarithms keep the result meaningful when ``q`` underflows.
    """
    if not log_q < 0:
        raise DomainError("nome must lie in (0, 1)")
    sum2 = sum3 = sum4 = 0.0
    n = 1
    while True:
        e3 = n * n * log_q
        e2 = n * (n + 1) * log_q
        if e2 < -745.0 and e3 < -745.0:
            break
        t3 = math.exp(e3)
        sum2 += math.exp(e2)
        sum3 += t3
        sum4 += t3 if n % 2 == 0 else -t3
        if t3 < 1e-17 * (1.0 + 2.0 * sum3):
            break
        n += 1
    log_theta2 = math.log(2.0) + 0.25 * log_q + math.log1p(sum2)
    return log_theta2, math.log1p(2.0 * sum3), math.log1p(2.0 * sum4)


def nome_lambda_oracle(ratio: float) -> float:
    """Modulus with ``K/K' = ratio`` from theta series, ``lam = (theta2/theta3)^2``.

    The nome is ``q = exp(-pi K'/K) = exp(-pi/ratio)``.
    """
    if not ratio > 0:
        raise DomainError("ratio must be positive")
    log_t2, log_t3, _ = theta_nome_series(-math.pi / ratio)
    return math.exp(2.0 * (log_t2 - log_t3))


def modulus_from_ratio_theta(ratio: float) -> EllipticModulus:
    """Full modulus record for ``K/K' = ratio`` from theta series.

    ``K = (pi/2) theta3^2`` and ``lam' = (theta4/theta3)^2``; this stays
    accurate when ``lam`` underflows.
    """
    log_t2, log_t3, log_t4 = theta_nome_series(-math.pi / ratio)
    K = 0.5 * math.pi * math.exp(2.0 * log_t3)
    return EllipticModulus(math.exp(2.0 * (log_t2 - log_t3)), math.exp(2.0 * (log_t4 - log_t3)), K, K / ratio)
