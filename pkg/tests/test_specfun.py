import math

import numpy as np
import pytest

from restable.errors import DomainError
from restable.specfun import arccot, digamma, gamma_fn, gauss_2f1, ln_gamma


def psi_euler_maclaurin(x: float) -> float:
    """Independent digamma reference: recurrence shift + asymptotic series."""
    acc = 0.0
    while x < 20.0:
        acc -= 1.0 / x
        x += 1.0
    # Bernoulli-number tail of the asymptotic expansion
    inv2 = 1.0 / (x * x)
    series = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)))
    return acc + math.log(x) - 0.5 / x - series


def hyp2f1_series(a: float, b: float, c: float, z: float) -> float:
    """Direct power series, valid for |z| <= 0.5 in these tests."""
    term = 1.0
    total = 1.0
    for n in range(500):
        term *= (a + n) * (b + n) / (c + n) * z / (n + 1)
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


class TestLnGamma:
    def test_identity_at_one(self):
        assert ln_gamma(1.0) == 0.0

    def test_half(self):
        assert ln_gamma(0.5) == pytest.approx(0.5723649429247001, abs=1e-13)

    def test_modulus_on_imaginary_shift(self):
        # |Gamma(1+it)|^2 = pi t / sinh(pi t), an independent reflection oracle
        val = abs(np.exp(ln_gamma(1 + 1j))) ** 2
        assert val == pytest.approx(math.pi / math.sinh(math.pi), rel=1e-12)

    def test_pole_rejected(self):
        with pytest.raises(DomainError):
            ln_gamma(0.0)
        with pytest.raises(DomainError):
            ln_gamma(-3.0)

    def test_reflection_on_random_grid(self):
        rng = np.random.default_rng(101)
        count = 0
        while count < 100:
            z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
            if abs(z.imag) < 0.1 and abs(z.real - round(z.real)) < 0.1:
                continue
            lhs = gamma_fn(z) * gamma_fn(1.0 - z) * np.sin(math.pi * z) / math.pi
            assert lhs == pytest.approx(1.0, rel=1e-10, abs=1e-10)
            count += 1

    def test_recurrence(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            z = complex(rng.uniform(0.2, 20), rng.uniform(-10, 10))
            assert gamma_fn(z + 1) == pytest.approx(z * gamma_fn(z), rel=1e-12)


class TestDigamma:
    def test_euler_mascheroni(self):
        assert digamma(1.0) == pytest.approx(psi_euler_maclaurin(1.0), abs=1e-13)
        assert digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-13)

    def test_recurrence(self):
        assert digamma(2.0) == pytest.approx(digamma(1.0) + 1.0, rel=1e-13)

    def test_half_duplication(self):
        assert digamma(0.5) == pytest.approx(digamma(1.0) - 2.0 * math.log(2.0), rel=1e-13)

    def test_against_series_on_grid(self):
        for x in np.linspace(0.05, 30.0, 37):
            assert digamma(float(x)) == pytest.approx(psi_euler_maclaurin(float(x)), rel=1e-12, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            digamma(0.0)
        with pytest.raises(DomainError):
            digamma(-1.5)


class TestGauss2F1:
    def test_at_zero(self):
        assert gauss_2f1(2.0, 3.0, 4.0, 0.0) == 1.0

    def test_log_closed_form(self):
        z = 0.5
        assert gauss_2f1(1.0, 1.0, 2.0, z) == pytest.approx(-math.log(1.0 - z) / z, rel=1e-12)

    def test_against_series(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            a, b = rng.uniform(0.1, 3.0, 2)
            c = rng.uniform(0.5, 4.0)
            z = rng.uniform(-0.5, 0.5)
            assert gauss_2f1(a, b, c, z) == pytest.approx(
                hyp2f1_series(a, b, c, z), rel=1e-12, abs=1e-12
            )

    def test_very_negative_argument(self):
        # the argument range 1 - e^{-y} reaches far below -1
        val = gauss_2f1(1.0, 1.25, 2.5, 1.0 - math.exp(5.0))
        assert np.isfinite(val) and val > 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            gauss_2f1(1.0, 1.0, 0.0, 0.3)
        with pytest.raises(DomainError):
            gauss_2f1(1.0, 1.0, 2.0, 1.0)


class TestArccot:
    def test_anchor_points(self):
        assert arccot(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
        assert arccot(1.0) == pytest.approx(math.pi / 4, rel=1e-15)
        assert arccot(-1.0) == pytest.approx(3 * math.pi / 4, rel=1e-15)

    def test_reflection(self):
        for x in (-17.3, -2.0, 0.4, 5.0, 1e5):
            assert arccot(x) + arccot(-x) == pytest.approx(math.pi, rel=1e-14)

    def test_strictly_decreasing(self):
        grid = np.linspace(-1e6, 1e6, 10_000)
        vals = np.array([arccot(float(x)) for x in grid])
        assert np.all(np.diff(vals) < 0.0)
        assert np.all((vals > 0.0) & (vals < math.pi))
