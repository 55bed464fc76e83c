import math

import numpy as np
import pytest
from scipy import integrate, stats

from restable.errors import DivergenceError, ParameterError
from restable.phi import (
    DiracPhi,
    ExpPhi,
    PolyPhi,
    TabulatedPhi,
    from_generator,
    is_symmetric,
    parse_phi,
    resolve_phi,
)
from restable.specfun import digamma


class TestMellin:
    def test_probability_normalization(self):
        for phi in (PolyPhi(0.5, 1.0), ExpPhi(1.0, 2.0, 1.0), DiracPhi(2.0)):
            assert phi.mellin(0.0) == pytest.approx(1.0, rel=1e-14)

    def test_poly_imaginary_argument(self):
        phi = PolyPhi(0.4, 1.2)
        theta = 0.7
        val = phi.mellin(1j * theta)
        oracle = integrate.quad(
            lambda w: math.cos(theta * w) * phi.density(math.exp(w)) * math.exp(w), -60, 60,
            limit=400,
        )[0] + 1j * integrate.quad(
            lambda w: math.sin(theta * w) * phi.density(math.exp(w)) * math.exp(w), -60, 60,
            limit=400,
        )[0]
        assert val == pytest.approx(oracle, abs=1e-9)

    def test_dirac(self):
        phi = DiracPhi(3.0)
        assert phi.mellin(1j * 0.9) == pytest.approx(np.exp(1j * 0.9 * math.log(3.0)), rel=1e-14)

    def test_poly_real_argument_quadrature(self):
        phi = PolyPhi(1.0, 1.5)
        s = 0.3
        oracle = integrate.quad(lambda t: t**s * phi.density(t), 0, np.inf, limit=300)[0]
        assert phi.mellin(s).real == pytest.approx(oracle, rel=1e-9)

    def test_strip_enforced(self):
        phi = PolyPhi(1.0, 1.5)  # kappa0 = 0.5
        with pytest.raises(DivergenceError):
            phi.mellin(0.5)
        with pytest.raises(DivergenceError):
            phi.mellin(-1.0)
        phi2 = ExpPhi(1.0, 2.0, 1.0)
        with pytest.raises(DivergenceError):
            phi2.mellin(-2.0)

    def test_log_convexity_on_real_axis(self):
        for phi in (PolyPhi(0.7, 2.0), ExpPhi(1.5, 1.0, 0.8)):
            for s in np.linspace(0.1, 0.9, 5):
                d = 0.05
                m0 = phi.mellin(s).real
                lo = phi.mellin(s - d).real
                hi = phi.mellin(s + d).real
                assert m0 * m0 <= lo * hi * (1 + 1e-12)

    def test_fourier_mellin_grid(self):
        phi = PolyPhi(0.8, 1.7)
        for theta in np.linspace(-10, 10, 9):
            val = phi.mellin(1j * theta)
            re = integrate.quad(
                lambda w: math.cos(theta * w) * phi.density(math.exp(w)) * math.exp(w),
                -80, 80, limit=500,
            )[0]
            assert val.real == pytest.approx(re, abs=1e-8)


class TestLogMoment:
    def test_poly_trace_symmetric_point(self):
        phi = PolyPhi(1.0 - 1.0 * 0.5, 1.0)  # alpha=1, rho=1/2
        assert phi.log_moment == pytest.approx(0.0, abs=1e-14)

    def test_exp_reduces_to_digamma(self):
        phi = ExpPhi(1.0, 2.0, 1.0)
        assert phi.log_moment == pytest.approx(digamma(2.0), rel=1e-13)

    def test_dirac(self):
        assert DiracPhi(math.e).log_moment == pytest.approx(1.0, rel=1e-15)

    def test_against_quadrature(self):
        for phi in (PolyPhi(0.6, 1.4), ExpPhi(2.0, 1.5, 0.7)):
            oracle = integrate.quad(
                lambda t: math.log(t) * phi.density(t), 0, 1, limit=400
            )[0] + integrate.quad(
                lambda t: math.log(t) * phi.density(t), 1, np.inf, limit=400
            )[0]
            assert phi.log_moment == pytest.approx(oracle, abs=1e-8)


class TestKappa0:
    def test_poly_tail_integral(self):
        phi = PolyPhi(1.0, 1.5)
        assert phi.kappa0 == pytest.approx(0.5)
        # tail integral finite strictly below, infinite above
        below = integrate.quad(lambda t: t**0.45 * phi.density(t), 1, np.inf, limit=200)[0]
        assert np.isfinite(below)
        with pytest.raises(DivergenceError):
            phi.mellin(0.55)

    def test_exp_and_dirac_infinite(self):
        assert ExpPhi(1.0, 2.0, 1.0).kappa0 == math.inf
        assert DiracPhi(3.0).kappa0 == math.inf


class TestSamplers:
    def test_poly_kolmogorov_smirnov(self):
        phi = PolyPhi(0.5, 1.3)
        rng = np.random.default_rng(2024)
        n = 100_000
        sample = np.sort(phi.sample(rng, size=n))
        # oracle CDF: cumulative quadrature of the density on a log grid
        grid = np.logspace(-9, 9, 1201)
        pdf_mass = np.array(
            [integrate.quad(phi.density, lo, hi, limit=100)[0] for lo, hi in zip(grid[:-1], grid[1:])]
        )
        cdf_grid = np.concatenate([[0.0], np.cumsum(pdf_mass)])
        cdf_at = np.interp(np.log(sample), np.log(grid), cdf_grid)
        ecdf_hi = np.arange(1, n + 1) / n
        ecdf_lo = np.arange(0, n) / n
        ks = max(np.max(np.abs(ecdf_hi - cdf_at)), np.max(np.abs(cdf_at - ecdf_lo)))
        assert ks < 1.63 / math.sqrt(n)  # 1% level

    def test_exp_chi_square(self):
        phi = ExpPhi(2.0, 1.5, 0.8)
        rng = np.random.default_rng(99)
        n = 100_000
        sample = phi.sample(rng, size=n)
        edges = np.quantile(sample, np.linspace(0.0, 1.0, 31))
        edges[0], edges[-1] = 0.0, np.inf
        counts, _ = np.histogram(sample, bins=edges)
        expected = np.array(
            [
                n * integrate.quad(phi.density, lo, hi, limit=200)[0]
                for lo, hi in zip(edges[:-1], edges[1:])
            ]
        )
        stat, pval = stats.chisquare(counts, expected * counts.sum() / expected.sum())
        assert pval > 0.01

    def test_dirac_constant(self):
        rng = np.random.default_rng(1)
        out = DiracPhi(2.0).sample(rng, size=100)
        assert np.all(out == 2.0)

    def test_log_mean_matches_log_moment(self):
        phi = PolyPhi(1.0, 2.5)
        rng = np.random.default_rng(5)
        logs = np.log(phi.sample(rng, size=100_000))
        se = logs.std() / math.sqrt(logs.size)
        assert abs(logs.mean() - phi.log_moment) < 4 * se


class TestSymmetry:
    def test_poly_matched_gamma(self):
        for alpha in (0.5, 1.5):
            res = is_symmetric(PolyPhi(1.0, 1.0 + alpha), alpha)
            assert res.symmetric and res.residual == 0.0

    def test_poly_general_matched(self):
        alpha, beta = 0.9, 0.8
        res = is_symmetric(PolyPhi(beta, alpha + 2 * beta - 1.0), alpha)
        assert res.symmetric

    def test_exp_never_symmetric(self):
        res = is_symmetric(ExpPhi(1.0, 2.0, 1.0), 0.7)
        assert not res.symmetric
        assert res.residual > 0.1

    def test_dirac_atom_logic(self):
        assert is_symmetric(DiracPhi(1.0), 1.2).symmetric
        res = is_symmetric(DiracPhi(2.0), 1.2)
        assert not res.symmetric and res.residual > 0.1


class TestFromGenerator:
    def test_constant_generator_is_poly(self):
        phi = from_generator(lambda s: 1.0, alpha=1.0)
        target = PolyPhi(1.0, 2.0)
        for t in np.logspace(-3, 3, 25):
            assert phi.density(float(t)) == pytest.approx(target.density(float(t)), rel=2e-3)

    def test_always_symmetric(self):
        cases = (
            (0.6, lambda s: 1.0),
            (1.3, lambda s: 1.0 / s),
            (0.9, lambda s: math.exp(-s)),
        )
        for alpha, f in cases:
            phi = from_generator(f, alpha=alpha)
            res = is_symmetric(phi, alpha)
            assert res.symmetric, f"residual {res.residual}"

    def test_reciprocal_generator_normalized(self):
        alpha = 1.1
        phi = from_generator(lambda s: 1.0 / s, alpha=alpha)
        mass = integrate.quad(phi.density, 0, np.inf, limit=400)[0]
        assert mass == pytest.approx(1.0, abs=1e-5)
        # pointwise proportional to 1/((t + 1/t) (1+t)^(1+alpha))
        raw = lambda t: 1.0 / ((t + 1.0 / t) * (1.0 + t) ** (1.0 + alpha))
        norm = integrate.quad(raw, 0, np.inf, limit=400)[0]
        for t in (0.02, 0.5, 1.0, 7.0, 300.0):
            assert phi.density(t) == pytest.approx(raw(t) / norm, rel=2e-3)

    def test_linear_generator_not_normalizable(self):
        # f(s) = s makes the density ~ 1/t near zero: log-divergent mass
        with pytest.raises(DivergenceError):
            from_generator(lambda s: s, alpha=1.1)


class TestTabulated:
    def _table(self):
        t = np.logspace(-5, 5, 401)
        return TabulatedPhi(t, PolyPhi(0.8, 1.9).density(t))

    def test_normalized(self):
        phi = self._table()
        mass = integrate.quad(phi.density, 0, np.inf, limit=400)[0]
        assert mass == pytest.approx(1.0, abs=1e-5)

    def test_kappa_bounds_from_tails(self):
        phi = self._table()
        assert phi.kappa0 == pytest.approx(1.9 - 0.8, abs=2e-3)
        assert phi.kappa_lower == pytest.approx(-0.8, abs=2e-3)

    def test_mellin_and_log_moment(self):
        phi = self._table()
        ref = PolyPhi(0.8, 1.9)
        assert phi.mellin(0.0).real == pytest.approx(1.0, abs=1e-10)
        assert phi.mellin(0.5).real == pytest.approx(ref.mellin(0.5).real, rel=1e-3)
        assert phi.log_moment == pytest.approx(ref.log_moment, abs=1e-3)

    def test_sampler(self):
        phi = self._table()
        rng = np.random.default_rng(17)
        sample = phi.sample(rng, size=50_000)
        logs = np.log(sample)
        se = logs.std() / math.sqrt(logs.size)
        assert abs(logs.mean() - phi.log_moment) < 4 * se

    def test_rejects_nonnormalizable(self):
        t = np.logspace(-5, 5, 200)
        with pytest.raises(DivergenceError):
            TabulatedPhi(t, 1.0 / t)  # tail exponent -1: not integrable


class TestParse:
    def test_fixed_descriptors(self):
        assert isinstance(parse_phi("poly:beta=0.5,gamma=1"), PolyPhi)
        assert isinstance(parse_phi("exp:a=1,beta=2,gamma=1"), ExpPhi)
        assert isinstance(parse_phi("dirac:a=1"), DiracPhi)

    def test_table_from_csv(self, tmp_path):
        t = np.logspace(-4, 4, 200)
        d = PolyPhi(1.0, 2.0).density(t)
        path = tmp_path / "phi.csv"
        np.savetxt(path, np.column_stack([t, d]), delimiter=",")
        phi = parse_phi(f"table:path={path}")
        assert isinstance(phi, TabulatedPhi)
        assert phi.mellin(0.0).real == pytest.approx(1.0, abs=1e-8)

    def test_coupled_families(self):
        fam = resolve_phi("trace")
        phi = fam.make(1.2, 0.55)
        assert isinstance(phi, PolyPhi) and phi.beta == pytest.approx(1 - 1.2 * 0.55)
        with pytest.raises(ParameterError):
            fam.make(None, None)
        fam2 = resolve_phi("jumplaw")
        phi2 = fam2.make(0.7, None)
        assert phi2.gamma_ == pytest.approx(1.7)

    def test_errors(self):
        with pytest.raises(ParameterError):
            parse_phi("poly:beta=0.5")
        with pytest.raises(ParameterError):
            parse_phi("nosuch:a=1")
        with pytest.raises(ParameterError):
            parse_phi("poly:beta=0.5,gamma=1,extra=2")

    def test_invariants_of_families(self):
        with pytest.raises(ParameterError):
            PolyPhi(0.5, 0.4)
        with pytest.raises(ParameterError):
            ExpPhi(-1.0, 1.0, 1.0)
        with pytest.raises(ParameterError):
            DiracPhi(0.0)
