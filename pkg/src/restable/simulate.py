"""Monte Carlo engines for the resurrected process.

The Lamperti image xi_bar = xi + chi is simulated as

* jumps of the stable-image density mu above the cutoff epsilon, as a
  marked Poisson process whose jump law is inverted in closed form
  (the restricted tails of mu are elementary),
* a deterministic drift -b - int_{eps<|y|<=1} y mu(y) dy consistent with
  the [-1,1]-truncated characteristic triple,
* an optional Gaussian refinement with the small-jump variance
  int_{|y|<=eps} y^2 mu(y) dy (on by default for alpha >= 1),
* an independent compound Poisson overlay chi at rate c-/alpha whose
  jumps are W + log V with V ~ phi and W sampled by the exact inverse CDF
  W = log((1-U)^(-1/alpha) - 1).

Positive paths are produced by the Lamperti time change
X_t = x exp(xi_bar at the inverse of the clock I = int exp(alpha xi_bar));
I is integrated exactly over the piecewise-linear skeleton.  Path RNG
streams are spawned per (seed, path index), so results do not depend on
the execution schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError
from .phi import PhiMeasure
from .stable import (
    StableParams,
    linear_term_b,
    mu_density,
    mu_tail_lower,
    mu_tail_upper,
    small_jump_variance,
)
from ._quad import integrate_checked

__all__ = [
    "SimConfig",
    "LevyPath",
    "PssmpPath",
    "path_rng",
    "chi_rate",
    "big_jump_rates",
    "truncation_drift",
    "sample_chi_jump",
    "sample_xi_bar_path",
    "sample_xi_bar_endpoints",
    "integrated_exp_clock",
    "lamperti_transform",
    "simulate_step_process",
]


@dataclass(frozen=True)
class SimConfig:
    epsilon: float = 1e-3
    horizon: float = 1.0
    dt_out: float = 0.01
    seed: int = 0
    n_paths: int = 1
    gaussian_compensation: bool | None = None  # None = on for alpha >= 1

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 0.1:
            raise ParameterError(f"epsilon must lie in (0, 0.1], got {self.epsilon}")
        if not self.horizon > 0.0:
            raise ParameterError("horizon must be positive")
        if not self.dt_out > 0.0:
            raise ParameterError("dt_out must be positive")
        if not self.n_paths >= 1:
            raise ParameterError("n_paths must be >= 1")

    def compensate(self, alpha: float) -> bool:
        if self.gaussian_compensation is None:
            return alpha >= 1.0
        return self.gaussian_compensation


@dataclass(frozen=True)
class LevyPath:
    """Piecewise path: values are post-jump states, jumps the discontinuity at each node."""

    times: np.ndarray
    values: np.ndarray
    jumps: np.ndarray


@dataclass(frozen=True)
class PssmpPath:
    x0: float
    times: np.ndarray
    values: np.ndarray
    absorbed: bool = False
    absorption_time: float | None = None  # horizon-truncated estimate x^alpha * I(T)


def path_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream keyed by (seed, path index)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def chi_rate(p: StableParams) -> float:
    return p.c_minus / p.alpha


def big_jump_rates(p: StableParams, eps: float) -> tuple[float, float]:
    """(positive, negative) intensities of mu-jumps with |y| > eps."""
    return mu_tail_upper(p, eps), mu_tail_lower(p, eps)


def truncation_drift(p: StableParams, eps: float) -> float:
    """Drift of the eps-truncated skeleton: -b - int_{eps<|y|<=1} y mu(y) dy."""
    comp = integrate_checked(lambda y: y * mu_density(p, y), eps, 1.0) + integrate_checked(
        lambda y: y * mu_density(p, y), -1.0, -eps
    )
    return -linear_term_b(p) - comp


def _w_from_uniform(alpha: float, u):
    """Inverse CDF of the density alpha e^y (1+e^y)^(-1-alpha)."""
    u = np.asarray(u, dtype=float)
    out = np.log(np.expm1(-np.log1p(-u) / alpha))
    return float(out) if out.ndim == 0 else out


def sample_chi_jump(p: StableParams, phi: PhiMeasure, rng: np.random.Generator, size=None):
    """Jump of the overlay: W + log V with V ~ phi."""
    w = _w_from_uniform(p.alpha, rng.random(size))
    v = phi.sample(rng, size=size)
    return w + np.log(v)


def _sample_big_jumps(p: StableParams, eps: float, n: int, rng: np.random.Generator) -> np.ndarray:
    lam_pos, lam_neg = big_jump_rates(p, eps)
    total = lam_pos + lam_neg
    out = np.empty(n)
    pos = rng.random(n) < lam_pos / total
    n_pos = int(pos.sum())
    a = p.alpha
    if n_pos:
        u = rng.random(n_pos)
        out[pos] = np.log1p(math.expm1(eps) * u ** (-1.0 / a))
    n_neg = n - n_pos
    if n_neg:
        u = rng.random(n_neg)
        k = (-math.expm1(-eps)) ** (-a) - 1.0
        out[~pos] = np.log1p(-(1.0 + u * k) ** (-1.0 / a))
    return out


def sample_xi_bar_path(
    p: StableParams,
    phi: PhiMeasure,
    cfg: SimConfig,
    rng: np.random.Generator | None = None,
    index: int = 0,
) -> LevyPath:
    """One path of the resurrected Lamperti image on [0, horizon]."""
    if rng is None:
        rng = path_rng(cfg.seed, index)
    T = cfg.horizon
    lam_pos, lam_neg = big_jump_rates(p, cfg.epsilon)
    n_mu = rng.poisson((lam_pos + lam_neg) * T)
    t_mu = rng.uniform(0.0, T, n_mu)
    j_mu = _sample_big_jumps(p, cfg.epsilon, n_mu, rng)
    n_chi = rng.poisson(chi_rate(p) * T)
    t_chi = rng.uniform(0.0, T, n_chi)
    j_chi = np.asarray(sample_chi_jump(p, phi, rng, size=n_chi), dtype=float).reshape(n_chi)

    grid = np.arange(0.0, T, cfg.dt_out)
    grid = np.append(grid, T)
    times = np.concatenate([grid, t_mu, t_chi])
    jumps = np.concatenate([np.zeros(grid.size), j_mu, j_chi])
    order = np.argsort(times, kind="stable")
    times, jumps = times[order], jumps[order]
    keep = np.concatenate([[True], np.diff(times) > 0])
    # merge nodes at identical times, summing their jumps
    merged_t = times[keep]
    merged_j = np.add.reduceat(jumps, np.flatnonzero(keep))

    dt = np.diff(merged_t)
    drift = truncation_drift(p, cfg.epsilon)
    incr = drift * dt
    if cfg.compensate(p.alpha):
        sigma2 = small_jump_variance(p, cfg.epsilon)
        incr = incr + rng.normal(0.0, 1.0, dt.size) * np.sqrt(sigma2 * dt)
    values = np.empty_like(merged_t)
    values[0] = merged_j[0]
    values[1:] = merged_j[0] + np.cumsum(incr + merged_j[1:])
    return LevyPath(times=merged_t, values=values, jumps=merged_j)


def sample_xi_bar_endpoints(
    p: StableParams,
    phi: PhiMeasure,
    cfg: SimConfig,
    return_chi_counts: bool = False,
):
    """Vectorized ensemble of xi_bar(horizon) over cfg.n_paths paths."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed))
    T = cfg.horizon
    lam_pos, lam_neg = big_jump_rates(p, cfg.epsilon)
    lam_tot = lam_pos + lam_neg
    drift = truncation_drift(p, cfg.epsilon)
    sigma2 = small_jump_variance(p, cfg.epsilon) if cfg.compensate(p.alpha) else 0.0
    rate_chi = chi_rate(p)

    budget = 5_000_000
    chunk = max(1, int(budget / max(lam_tot * T, 1.0)))
    outs, chi_counts = [], []
    remaining = cfg.n_paths
    while remaining > 0:
        m = min(chunk, remaining)
        remaining -= m
        end = np.full(m, drift * T)
        n_mu = rng.poisson(lam_tot * T, m)
        tot = int(n_mu.sum())
        if tot:
            sizes = _sample_big_jumps(p, cfg.epsilon, tot, rng)
            end += np.bincount(np.repeat(np.arange(m), n_mu), weights=sizes, minlength=m)
        n_chi = rng.poisson(rate_chi * T, m)
        tot = int(n_chi.sum())
        if tot:
            sizes = np.asarray(sample_chi_jump(p, phi, rng, size=tot), dtype=float)
            end += np.bincount(np.repeat(np.arange(m), n_chi), weights=sizes, minlength=m)
        if sigma2 > 0.0:
            end += rng.normal(0.0, math.sqrt(sigma2 * T), m)
        outs.append(end)
        chi_counts.append(n_chi)
    endpoints = np.concatenate(outs)
    if return_chi_counts:
        return endpoints, np.concatenate(chi_counts)
    return endpoints


def _exprel(z: np.ndarray) -> np.ndarray:
    """(e^z - 1)/z, stable near 0."""
    out = np.ones_like(z)
    nz = np.abs(z) > 1e-12
    out[nz] = np.expm1(z[nz]) / z[nz]
    return out


def integrated_exp_clock(path: LevyPath, alpha: float) -> np.ndarray:
    """Cumulative I(t) = int_0^t exp(alpha * xi) over the piecewise-linear skeleton."""
    t, v, j = path.times, path.values, path.jumps
    dt = np.diff(t)
    start = v[:-1]
    end_pre = v[1:] - j[1:]
    z = alpha * (end_pre - start)
    seg = dt * np.exp(alpha * start) * _exprel(z)
    return np.concatenate([[0.0], np.cumsum(seg)])


def lamperti_transform(
    path: LevyPath,
    x: float,
    alpha: float,
    dt_out: float = 0.01,
    horizon: float | None = None,
    plateau_rtol: float = 1e-6,
    drifts_down: bool | None = None,
) -> PssmpPath:
    """Positive path X_t = x * exp(xi at inverse clock), t < x^alpha * I(end).

    The absorption flag is a horizon-truncated estimate: it is set when the
    clock has plateaued (relative increase below plateau_rtol over the last
    nine tenths of the simulated window) and, when given, the drift
    direction confirms divergence to -infinity.  absorption_time is then
    the estimate x^alpha * I(end), not an exact sample.
    """
    if not x > 0.0:
        raise DomainError("starting point must be positive")
    I = integrated_exp_clock(path, alpha)
    scale = x**alpha
    t_end = scale * I[-1]
    t_max = t_end if horizon is None else min(horizon, t_end)
    n_out = max(2, int(math.floor(t_max / dt_out)) + 1)
    t_out = np.minimum(np.arange(n_out) * dt_out, t_max * (1.0 - 1e-12))
    s = t_out / scale
    seg = np.clip(np.searchsorted(I, s, side="right") - 1, 0, I.size - 2)
    rem = s - I[seg]
    t, v, j = path.times, path.values, path.jumps
    a = v[seg]
    dt = t[seg + 1] - t[seg]
    slope = (v[seg + 1] - j[seg + 1] - a) / dt
    g = alpha * slope
    # rem * g * exp(-alpha a) > -1 holds exactly; guard the floating-point edge
    arg = np.maximum(rem * g * np.exp(-alpha * a), -1.0 + 1e-15)
    safe_g = np.where(np.abs(g) > 1e-12, g, 1.0)
    u = np.where(np.abs(g) > 1e-12, np.log1p(arg) / safe_g, rem * np.exp(-alpha * a))
    xi_at = a + slope * u
    values = x * np.exp(xi_at)

    k10 = int(np.searchsorted(path.times, path.times[-1] / 10.0))
    k10 = min(max(k10, 1), I.size - 1)
    plateaued = (I[-1] - I[k10]) <= plateau_rtol * I[-1]
    absorbed = bool(plateaued) and (drifts_down is not False)
    return PssmpPath(
        x0=x,
        times=t_out,
        values=values,
        absorbed=absorbed,
        absorption_time=float(t_end) if absorbed else None,
    )


def simulate_step_process(
    p: StableParams,
    phi: PhiMeasure,
    x: float,
    n_jumps: int,
    rng: np.random.Generator,
) -> PssmpPath:
    """Exact regular step process: hold at z for Exp((c-/alpha) z^-alpha), then z -> z*V*e^W."""
    if not x > 0.0:
        raise DomainError("starting point must be positive")
    w = _w_from_uniform(p.alpha, rng.random(n_jumps))
    v = np.asarray(phi.sample(rng, size=n_jumps), dtype=float)
    factors = v * np.exp(w)
    levels = x * np.concatenate([[1.0], np.cumprod(factors)])
    rates = chi_rate(p) * levels[:-1] ** (-p.alpha)
    holds = rng.exponential(1.0, n_jumps) / rates
    times = np.concatenate([[0.0], np.cumsum(holds)])
    return PssmpPath(x0=x, times=times, values=levels)
