import math

import numpy as np
import pytest
from scipy import integrate

from restable.errors import DomainError, ParameterError
from restable.specfun import gamma_fn
from restable.stable import (
    StableParams,
    killing_rate,
    linear_term_b,
    mu_density,
    mu_tail_lower,
    mu_tail_upper,
    nu_density,
    psi_star,
    pv_symmetric_linear_term,
    small_jump_variance,
    validate,
    xi_mean,
)


class TestValidate:
    def test_basic_symmetric(self):
        p = validate(0.5, 0.5)
        assert p.c_plus == pytest.approx(p.c_minus, rel=1e-15)
        assert p.rho_hat == 0.5

    def test_rejects_one_sided(self):
        with pytest.raises(ParameterError, match="1-1/alpha"):
            validate(1.5, 0.2)
        with pytest.raises(ParameterError):
            validate(1.5, 0.9)
        with pytest.raises(ParameterError):
            validate(2.0, 0.5)
        with pytest.raises(ParameterError):
            validate(0.5, 1.0)

    def test_cauchy_case(self):
        p = validate(1.0, 0.5)
        assert p.drift_a == 0.0
        with pytest.raises(ParameterError, match="rho=1/2"):
            validate(1.0, 0.4)

    def test_constants_positive_on_grid(self):
        for alpha in (0.2, 0.7, 1.0, 1.3, 1.9):
            lo = 0.0 if alpha <= 1 else 1 - 1 / alpha
            hi = 1.0 if alpha <= 1 else 1 / alpha
            rhos = [0.5] if alpha == 1.0 else np.linspace(lo + 0.02, hi - 0.02, 7)
            for rho in rhos:
                p = validate(alpha, float(rho))
                assert p.c_plus > 0 and np.isfinite(p.c_plus)
                assert p.c_minus > 0 and np.isfinite(p.c_minus)

    def test_rho_half_iff_equal_constants(self):
        p = validate(1.7, 0.52)
        assert p.c_plus != pytest.approx(p.c_minus, rel=1e-6)


class TestDensities:
    def test_nu_symmetric(self):
        p = validate(0.8, 0.5)
        assert nu_density(p, 0.7) == pytest.approx(nu_density(p, -0.7), rel=1e-14)

    def test_nu_scaling(self):
        p = validate(0.5, 0.3)
        assert nu_density(p, 2.0) == pytest.approx(2.0 ** (-1.5) * nu_density(p, 1.0), rel=1e-14)

    def test_nu_domain(self):
        p = validate(0.5, 0.3)
        with pytest.raises(DomainError):
            nu_density(p, 0.0)

    def test_mu_matches_nu_pullback(self):
        # mu(log(z/x)) = x^alpha z nu(z - x)
        p = validate(0.5, 0.5)
        x, z = 1.0, 2.0
        lhs = mu_density(p, math.log(z / x))
        rhs = x**p.alpha * z * nu_density(p, z - x)
        assert lhs == pytest.approx(rhs, rel=1e-13)

    def test_mu_small_jump_limit(self):
        p = validate(0.5, 0.4)
        vals = [mu_density(p, 10.0**-k) * (10.0**-k) ** (1 + p.alpha) for k in range(3, 8)]
        assert vals[-1] == pytest.approx(p.c_plus, rel=1e-6)

    def test_mu_value_cauchy(self):
        p = validate(1.0, 0.5)
        expected = math.e / (math.pi * (math.e - 1.0) ** 2)
        assert mu_density(p, 1.0) == pytest.approx(expected, rel=1e-13)

    def test_mu_integrability(self):
        p = validate(1.5, 0.5)
        sq = small_jump_variance(p, 1.0)
        tail = mu_tail_upper(p, 1.0) + mu_tail_lower(p, 1.0)
        absmoment = integrate.quad(lambda y: y * mu_density(p, y), 1, np.inf)[0] - integrate.quad(
            lambda y: y * mu_density(p, y), -np.inf, -1
        )[0]
        assert np.isfinite(sq) and sq > 0
        assert np.isfinite(tail) and tail > 0
        assert np.isfinite(absmoment) and absmoment > 0

    def test_mu_tails_match_quadrature(self):
        p = validate(1.2, 0.55)
        for u in (0.05, 0.5, 2.0):
            up = integrate.quad(lambda y: mu_density(p, y), u, np.inf, limit=200)[0]
            assert mu_tail_upper(p, u) == pytest.approx(up, rel=1e-9)
            dn = integrate.quad(lambda y: mu_density(p, y), -np.inf, -u, limit=200)[0]
            assert mu_tail_lower(p, u) == pytest.approx(dn, rel=1e-9)


class TestKillingRate:
    def test_cauchy_value(self):
        p = validate(1.0, 0.5)
        assert killing_rate(p) == pytest.approx(1.0 / math.pi, rel=1e-13)
        assert killing_rate(p) == pytest.approx(
            float(gamma_fn(1.0)) / float(gamma_fn(0.5)) ** 2, rel=1e-13
        )

    def test_equals_psi_star_at_zero(self):
        for alpha, rho in ((0.4, 0.6), (1.0, 0.5), (1.6, 0.55)):
            p = validate(alpha, rho)
            z = psi_star(p, 0.0)
            assert z.imag == pytest.approx(0.0, abs=1e-14)
            assert z.real - killing_rate(p) == pytest.approx(0.0, abs=1e-12)

    def test_scale_free(self):
        p = validate(0.7, 0.3)
        assert killing_rate(p) == p.c_minus / p.alpha


def psi_star_quadrature(p: StableParams, theta: float) -> complex:
    """Oracle: killing + i b theta + compensated Fourier integral of mu."""
    b = linear_term_b(p)

    def re_int(y):
        return (1.0 - math.cos(theta * y)) * mu_density(p, y)

    def im_int(y):
        comp = theta * y if abs(y) <= 1.0 else 0.0
        return (-math.sin(theta * y) + comp) * mu_density(p, y)

    def both_sides(f):
        total = 0.0
        for lo, hi in ((0, 1), (1, np.inf), (-1, 0), (-np.inf, -1)):
            total += integrate.quad(f, lo, hi, limit=300)[0]
        return total

    re = killing_rate(p) + both_sides(re_int)
    im = b * theta + both_sides(im_int)
    return complex(re, im)


class TestPsiStar:
    def test_conjugate_symmetry(self):
        p = validate(1.3, 0.6)
        for theta in (0.5, 2.0, 17.0):
            assert psi_star(p, -theta) == pytest.approx(np.conj(psi_star(p, theta)), rel=1e-12)

    @pytest.mark.parametrize("alpha,rho", [(0.5, 0.5), (1.2, 0.55), (0.8, 0.3)])
    def test_against_levy_khintchine_quadrature(self, alpha, rho):
        p = validate(alpha, rho)
        for theta in (0.5, 1.0, 2.0):
            closed = psi_star(p, theta)
            quad = psi_star_quadrature(p, theta)
            assert closed.real == pytest.approx(quad.real, abs=2e-7)
            assert closed.imag == pytest.approx(quad.imag, abs=2e-7)


class TestLinearTerm:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_symmetric_principal_value_identity(self, alpha):
        p = validate(alpha, 0.5)
        pv = pv_symmetric_linear_term(p)
        assert -linear_term_b(p) == pytest.approx(pv, abs=1e-8)

    def test_symmetric_pv_absolutely_convergent_form(self):
        # for alpha < 1 the principal value equals the absolutely convergent
        # integral of y (mu(y) - mu(-y))
        p = validate(0.7, 0.5)
        direct = integrate.quad(
            lambda y: y * (mu_density(p, y) - mu_density(p, -y)), 0, 1, limit=200
        )[0]
        assert pv_symmetric_linear_term(p) == pytest.approx(direct, abs=1e-9)

    def test_pv_requires_symmetry(self):
        with pytest.raises(ParameterError):
            pv_symmetric_linear_term(validate(1.4, 0.55))

    @pytest.mark.parametrize("alpha,rho", [(0.5, 0.5), (1.2, 0.55), (0.8, 0.3), (1.5, 0.4)])
    def test_mean_consistency_with_characteristic_exponent(self, alpha, rho):
        # E(xi_1) = -b + int_{|y|>1} y mu(y) dy must match the derivative of
        # the exponent along the imaginary axis; this pins the sign of the
        # a-term in b.
        p = validate(alpha, rho)
        h = 1e-6

        def g(k):
            return (psi_star(p, -1j * k) - killing_rate(p)).real

        fd = (g(-h) - g(h)) / (2 * h)
        assert xi_mean(p) == pytest.approx(fd, abs=5e-6)
