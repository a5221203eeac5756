import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from intrinsic_metrics import specfun
from intrinsic_metrics.errors import DomainError, SingularityError
from intrinsic_metrics.hypmetric import rect_modulus

# mpmath at 40 digits
K_REF = {
    0.3: (1.608048619930512801267207, 2.62777333208434387406287),
    0.9: (2.280549138422770204613752, 1.654616667522526934419225),
    1e-8: (1.57079632679489665850123, 19.80697510507225656115277),
}
SN_CN_DN_1_HALF = (0.8226355781298623596762303, 0.5685689980951714899417352, 0.9114920056691319003350428)
COMPLEX_REF = (
    0.66096861960933328967 + 0.21729763806661711535j,
    0.80152869416467439495 - 0.17919123909461963753j,
    0.92888130724188258187 - 0.055664475916027328799j,
)
NOME_REF = {
    1 / 8: 0.00001394936942415739777784738,
    1 / 4: 0.007469666729509581905511156,
    1 / 2: 0.1715728752538099023966226,
    1.0: 0.7071067811865475244008444,
    2.0: 0.985171431009416038689502,
}
GAMMA_QUARTER = 3.625609908221908311930685
SQUARE = 1.85407467730137191843385
lambdas = st.floats(min_value=1e-6, max_value=1 - 1e-6)


class TestEllipticK:
    @pytest.mark.parametrize("lam", sorted(K_REF))
    def test_against_high_precision(self, lam):
        m = specfun.elliptic_k(lam)
        K, Kp = K_REF[lam]
        assert m.K == pytest.approx(K, rel=1e-14)
        assert m.Kp == pytest.approx(Kp, rel=1e-14)

    def test_small_modulus_limit(self):
        assert specfun.elliptic_k(1e-12).K == pytest.approx(math.pi / 2, rel=1e-15)

    def test_symmetric_point(self):
        m = specfun.elliptic_k(math.sqrt(0.5))
        assert abs(m.K - m.Kp) <= 1e-12
        assert m.K == pytest.approx(specfun.gamma(0.25) ** 2 / (4 * math.sqrt(math.pi)), abs=1e-13)

    def test_singular_value_ratio(self):
        m = specfun.elliptic_k(3 - 2 * math.sqrt(2))
        assert abs(m.Kp / m.K - 2) <= 1e-12

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.5, 1.5, float("nan")])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            specfun.elliptic_k(bad)

    @settings(max_examples=200, deadline=None)
    @given(lambdas)
    def test_complement_swap(self, lam):
        m = specfun.elliptic_k(lam)
        assert m.Kp == pytest.approx(math.pi / (2 * specfun.agm(1.0, lam)), rel=1e-14)
        c = m.complement()
        assert (c.lam, c.lam_prime, c.K, c.Kp) == (m.lam_prime, m.lam, m.Kp, m.K)
        assert m.K >= math.pi / 2 and m.Kp >= math.pi / 2

    @settings(max_examples=100, deadline=None)
    @given(lambdas, lambdas)
    def test_monotone(self, a, b):
        if a == b:
            return
        lo, hi = sorted((a, b))
        mlo, mhi = specfun.elliptic_k(lo), specfun.elliptic_k(hi)
        assert mlo.K <= mhi.K and mlo.Kp >= mhi.Kp
        if hi - lo > 1e-9:
            assert mlo.K < mhi.K and mlo.Kp > mhi.Kp


def _amplitude_ode(u, lam):
    sol = solve_ivp(lambda t, y: [math.sqrt(1 - (lam * math.sin(y[0])) ** 2)], (0, u), [0.0], rtol=1e-13, atol=1e-14, method="DOP853")
    return sol.y[0, -1]


class TestJacobiReal:
    def test_origin(self):
        sn, cn, dn = specfun.jacobi_real(0.0, specfun.elliptic_k(0.4))
        assert (sn, cn, dn) == (0.0, 1.0, 1.0)

    @pytest.mark.parametrize("lam", [0.1, 0.5, 0.9, 0.999])
    def test_quarter_period(self, lam):
        m = specfun.elliptic_k(lam)
        sn, cn, dn = specfun.jacobi_real(m.K, m)
        assert sn == pytest.approx(1.0, abs=1e-12)
        assert abs(cn) <= 1e-12
        assert dn == pytest.approx(math.sqrt(1 - lam * lam), abs=1e-12)

    def test_amplitude_ode_oracle(self):
        m = specfun.elliptic_k(0.5)
        phi = _amplitude_ode(1.0, 0.5)
        sn, cn, dn = specfun.jacobi_real(1.0, m)
        assert sn == pytest.approx(math.sin(phi), abs=1e-10)
        assert cn == pytest.approx(math.cos(phi), abs=1e-10)
        assert dn == pytest.approx(math.sqrt(1 - 0.25 * math.sin(phi) ** 2), abs=1e-10)
        for got, ref in zip((sn, cn, dn), SN_CN_DN_1_HALF):
            assert got == pytest.approx(ref, abs=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(lambdas)
    def test_identities_and_period(self, lam):
        m = specfun.elliptic_k(lam)
        u = np.random.default_rng(int(lam * 1e9)).uniform(-20, 20, 100)
        sn, cn, dn = specfun.jacobi_real(u, m)
        assert np.max(np.abs(sn**2 + cn**2 - 1)) <= 1e-12
        assert np.max(np.abs(dn**2 + lam**2 * sn**2 - 1)) <= 1e-12
        sn4 = specfun.jacobi_real(u + 4 * m.K, m).sn
        assert np.max(np.abs(sn4 - sn)) <= 1e-11

    def test_vectorized_matches_scalar(self):
        m = specfun.elliptic_k(0.7)
        u = np.linspace(-5, 5, 11)
        vec = specfun.jacobi_real(u, m)
        for i, ui in enumerate(u):
            assert specfun.jacobi_real(float(ui), m).sn == vec.sn[i]

    def test_nonfinite(self):
        with pytest.raises(DomainError):
            specfun.jacobi_real(float("inf"), specfun.elliptic_k(0.5))


class TestJacobiComplex:
    def test_high_precision_value(self):
        got = specfun.jacobi_complex(0.7 + 0.3j, specfun.elliptic_k(0.6))
        for g, ref in zip(got, COMPLEX_REF):
            assert abs(g - ref) <= 1e-13

    @pytest.mark.parametrize("lam", [0.05, 0.3, 0.7, 0.95])
    def test_half_imaginary_period(self, lam):
        m = specfun.elliptic_k(lam)
        sn, cn, dn = specfun.jacobi_complex(0.5j * m.Kp, m)
        assert abs(sn - 1j / math.sqrt(lam)) <= 1e-10 * abs(sn)
        assert abs(cn - math.sqrt((1 + lam) / lam)) <= 1e-10 * abs(cn)
        assert abs(dn - math.sqrt(1 + lam)) <= 1e-10

    @settings(max_examples=50, deadline=None)
    @given(lambdas)
    def test_real_axis_consistency(self, lam):
        m = specfun.elliptic_k(lam)
        u = np.linspace(-3 * m.K, 3 * m.K, 37)
        c = specfun.jacobi_complex(u + 0j, m)
        r = specfun.jacobi_real(u, m)
        for a, b in zip(c, r):
            assert np.max(np.abs(a - b)) <= 1e-13

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=0.01, max_value=0.99))
    def test_imaginary_segment_is_pure_imaginary(self, lam):
        m = specfun.elliptic_k(lam)
        t = np.linspace(0.001, 0.999, 200) * m.Kp
        sn = specfun.jacobi_complex(1j * t, m).sn
        assert np.max(np.abs(sn.real)) <= 1e-12

    @settings(max_examples=50, deadline=None)
    @given(lambdas, st.complex_numbers(max_magnitude=6, allow_nan=False, allow_infinity=False))
    def test_complex_identities(self, lam, z):
        m = specfun.elliptic_k(lam)
        if specfun.pole_distance(z, m) < 0.05:
            return
        sn, cn, dn = specfun.jacobi_complex(z, m)
        scale = 1 + abs(sn) ** 2
        assert abs(sn * sn + cn * cn - 1) <= 1e-12 * scale
        assert abs(dn * dn + lam * lam * sn * sn - 1) <= 1e-12 * scale

    def test_pole(self):
        m = specfun.elliptic_k(0.5)
        with pytest.raises(SingularityError) as info:
            specfun.jacobi_complex(1j * m.Kp + 2 * m.K + 1e-12, m)
        assert info.value.distance < 1e-9


class TestGamma:
    def test_half(self):
        assert specfun.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_quarter_reflection(self):
        g = specfun.gamma(0.25)
        assert g == pytest.approx(GAMMA_QUARTER, rel=1e-14)
        assert abs(g * specfun.gamma(0.75) - math.pi * math.sqrt(2)) <= 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=150))
    def test_against_stdlib(self, x):
        g = specfun.gamma_suite(x)
        assert g.gamma == pytest.approx(math.gamma(x), rel=1e-13)
        assert g.log_gamma == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-13)

    def test_digamma_reference(self):
        assert specfun.digamma(0.3) == pytest.approx(-3.502524222200132988964495, abs=1e-12)
        assert specfun.digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-13)

    def test_digamma_increasing(self):
        xs = np.linspace(0.01, 10, 1000)
        vals = [specfun.digamma(x) for x in xs]
        assert np.all(np.diff(vals) > 0)

    @pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            specfun.gamma_suite(bad)


class TestBeta:
    def test_simple(self):
        assert specfun.beta(1, 1) == pytest.approx(1.0, abs=1e-14)
        assert specfun.beta(0.5, 0.5) == pytest.approx(math.pi, abs=1e-13)

    def test_square_identity(self):
        assert abs(0.25 * math.sqrt(2) * specfun.beta(0.25, 0.5) - SQUARE) <= 1e-11

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=0.01, max_value=30), st.floats(min_value=0.01, max_value=30))
    def test_gamma_quotient(self, a, b):
        ref = math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
        assert specfun.beta(a, b) == pytest.approx(ref, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.beta(0, 1)


class TestEdgeIntegral:
    def test_zero(self):
        assert specfun.sc_edge_integral(0.3, 0.0) == 0.0

    @pytest.mark.parametrize("x", [0.1, 1.0, 7.0, 100.0])
    def test_arcsinh(self, x):
        assert abs(specfun.sc_edge_integral(0.5, x) - math.asinh(x)) <= 1e-12

    def test_reference(self):
        assert abs(specfun.sc_edge_integral(0.3, 3.0) - 1.543217484285859692734629) <= 1e-12

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=0.02, max_value=0.98), st.floats(min_value=0.01, max_value=5.0))
    def test_hypergeometric_form(self, alpha, x):
        series = x * specfun.hyp2f1_real(0.5, 1 - alpha, 1.5, -x * x)
        assert abs(specfun.sc_edge_integral(alpha, x) - series) <= 1e-10

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=0.01, max_value=0.99), st.floats(min_value=0, max_value=50), st.floats(min_value=0, max_value=50))
    def test_monotone(self, alpha, a, b):
        if a == b:
            return
        lo, hi = sorted((a, b))
        assert specfun.sc_edge_integral(alpha, lo) < specfun.sc_edge_integral(alpha, hi)

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.sc_edge_integral(1.0, 1.0)
        with pytest.raises(DomainError):
            specfun.sc_edge_integral(0.5, -1.0)


class TestNome:
    @pytest.mark.parametrize("ratio", sorted(NOME_REF))
    def test_reference_and_bisection(self, ratio):
        lam = specfun.nome_lambda_oracle(ratio)
        assert lam == pytest.approx(NOME_REF[ratio], rel=1e-12)
        m = specfun.elliptic_k(lam)
        assert abs(m.K / m.Kp - ratio) <= 1e-12 * ratio

    @pytest.mark.parametrize("k", [1.0, 1.4, 2.0, 5.0])
    def test_agrees_with_rectangle_bisection(self, k):
        assert abs(rect_modulus(k).lam - specfun.nome_lambda_oracle(0.5 / k)) <= 1e-12

    def test_theta_record_for_underflow(self):
        m = specfun.modulus_from_ratio_theta(1 / 2000)
        assert m.lam == 0.0 and m.lam_prime == 1.0
        assert m.K == pytest.approx(math.pi / 2, rel=1e-15)
        assert m.Kp == pytest.approx(2000 * m.K, rel=1e-15)
