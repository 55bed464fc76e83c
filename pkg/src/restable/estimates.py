"""Two-sided comparability envelopes for the resurrection kernel.

The kernel scales as q(lx, ly) = l^(-1-alpha) q(x, y), so every estimate
is a statement about the unit profile q(1, s).  Within a factor-5 band of
the diagonal q(x, y) is comparable to (x min y)^(-1-alpha); far from it
the two directions are governed by the behaviour of the return density at
0 (jumps toward the boundary) and at infinity (jumps away from it):

    q(big -> small) ~ big^(-1-alpha) * int_{small/(big-small)}^1 phi(t) dt/t
    q(small -> big) ~ big^(-1-alpha) * int_1^{big/small - 1} t^alpha phi(t) dt

For polynomial-tail, stretched-exponential and compactly supported
measures these integrals collapse to the power/log branch tables
implemented below.  Branch functions are normalized so the far envelope
matches the near-diagonal one at ratio 5; comparability, not continuity,
is the contract, and the normalization only changes constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._quad import integrate_checked
from .errors import ParameterError
from .kernels import ResurrectionKernel
from .phi import DiracPhi, ExpPhi, PhiMeasure, PolyPhi
from .stable import StableParams

__all__ = [
    "ScalingCertificate",
    "check_weak_scaling",
    "envelope",
    "ComparabilityReport",
    "verify_comparability",
    "pi_comparability",
]

_BOUNDARY_TOL = 1e-12
RATIO_BAND = 5.0


@dataclass(frozen=True)
class ScalingCertificate:
    kind: str  # L1 | U1 | L_inf | U_inf
    exponent: float
    constant: float
    passed: bool
    worst_ratio: float
    worst_pair: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "exponent": self.exponent,
            "constant": self.constant,
            "passed": self.passed,
            "worst_ratio": self.worst_ratio,
            "worst_pair": list(self.worst_pair),
        }


def check_weak_scaling(
    density: Callable[[float], float],
    kind: str,
    exponent: float,
    n_grid: int = 200,
    lower_floor: float = 1e-3,
    upper_cap: float = 1e3,
) -> ScalingCertificate:
    """Empirical weak-scaling certificate on a geometric grid of (r, R) pairs.

    Lower kinds (L1 at zero, L_inf at infinity) require
    g(R)/g(r) >= c (R/r)^exponent for r <= R; upper kinds bound the same
    ratio above.  The certificate records the extremal constant over the
    grid; it fails when that constant escapes [lower_floor, upper_cap].
    """
    if kind not in ("L1", "U1", "L_inf", "U_inf"):
        raise ParameterError(f"unknown scaling kind '{kind}'")
    at_zero = kind in ("L1", "U1")
    grid = np.logspace(-6, 0, n_grid, endpoint=False) if at_zero else np.logspace(0, 6, n_grid)
    g = np.array([density(x) for x in grid], dtype=float)
    if np.any(g <= 0) or not np.all(np.isfinite(g)):
        raise ParameterError("density must be finite and strictly positive on the tested range")
    logg = np.log(g)
    logt = np.log(grid)
    # ratios[i, j] = (g(R_j)/g(r_i)) / (R_j/r_i)^exponent for r_i < R_j
    diff = logg[None, :] - logg[:, None] - exponent * (logt[None, :] - logt[:, None])
    iu = np.triu_indices(n_grid, k=1)
    vals = np.exp(diff[iu])
    lower = kind.startswith("L")
    pos = int(np.argmin(vals)) if lower else int(np.argmax(vals))
    worst = float(vals[pos])
    pair = (float(grid[iu[0][pos]]), float(grid[iu[1][pos]]))
    if lower:
        constant = min(worst, 1.0)
        passed = worst >= lower_floor
    else:
        constant = max(worst, 1.0)
        passed = worst <= upper_cap
    return ScalingCertificate(kind, exponent, constant, passed, worst, pair)


def _down_branch_raw(phi: PhiMeasure, s: float) -> tuple[float, str]:
    # q(big -> small) shape in s = big/small; governed by phi near zero
    if isinstance(phi, (PolyPhi, ExpPhi)):
        b = phi.beta
        if b < 1.0:
            return s ** (1.0 - b), f"power:{1.0 - b:g}"
        if abs(b - 1.0) <= _BOUNDARY_TOL:
            return math.log(s), "log"
        return 1.0, "const"
    raise ParameterError(f"no branch table for {type(phi).__name__}")


def _up_branch_raw(p: StableParams, phi: PhiMeasure, s: float) -> tuple[float, str]:
    # q(small -> big) shape; governed by the tail of phi
    a = p.alpha
    if isinstance(phi, PolyPhi):
        excess = a - (phi.gamma_ - phi.beta)
        if abs(excess) <= _BOUNDARY_TOL:
            return math.log(s), "log"
        if excess > 0.0:
            return s**excess, f"power:{excess:g}"
        return 1.0, "const"
    if isinstance(phi, ExpPhi):
        return 1.0, "const"
    raise ParameterError(f"no branch table for {type(phi).__name__}")


def _integral_down(phi: PhiMeasure, s: float) -> float:
    # s > 1, so the lower limit 1/(s-1) sits below 1
    w = 1.0 / (s - 1.0)
    return integrate_checked(lambda t: phi.density(t) / t, w, 1.0, epsabs=1e-13, epsrel=1e-9)


def _integral_up(p: StableParams, phi: PhiMeasure, s: float) -> float:
    return integrate_checked(
        lambda t: t**p.alpha * phi.density(t), 1.0, max(s - 1.0, 1.0 + 1e-9),
        epsabs=1e-13, epsrel=1e-9,
    )


def envelope(p: StableParams, phi: PhiMeasure, x: float, y: float, method: str = "auto") -> float:
    """Envelope value for q(x, y); direction is encoded by the argument order.

    method='table' uses the family branch tables, 'integral' the general
    integral forms, 'auto' prefers tables and falls back to integrals.
    """
    if not (x > 0.0 and y > 0.0):
        raise ParameterError("envelope defined on (0, inf)^2")
    a = p.alpha
    small, big = (x, y) if x <= y else (y, x)
    s = big / small
    if s <= RATIO_BAND:
        return small ** (-1.0 - a)
    if isinstance(phi, DiracPhi):
        # compact support: far field comparable to |x - y|^(-1-alpha)
        return (4.0 * small / (big - small)) ** (1.0 + a) * small ** (-1.0 - a)
    down = x > y  # jumping from the larger state toward the boundary
    use_table = method == "table" or (
        method == "auto" and isinstance(phi, (PolyPhi, ExpPhi))
    )
    if method not in ("auto", "table", "integral"):
        raise ParameterError("method must be 'auto', 'table' or 'integral'")
    if use_table:
        raw, _ = (_down_branch_raw(phi, s) if down else _up_branch_raw(p, phi, s))
        raw5, _ = (_down_branch_raw(phi, RATIO_BAND) if down else _up_branch_raw(p, phi, RATIO_BAND))
    else:
        raw = _integral_down(phi, s) if down else _integral_up(p, phi, s)
        raw5 = _integral_down(phi, RATIO_BAND) if down else _integral_up(p, phi, RATIO_BAND)
    return big ** (-1.0 - a) * (RATIO_BAND ** (1.0 + a) / raw5) * raw


def envelope_branch(p: StableParams, phi: PhiMeasure, direction: str) -> str:
    """Name of the far-field branch used for this family ('down' or 'up')."""
    if isinstance(phi, DiracPhi):
        return "compact"
    try:
        if direction == "down":
            return _down_branch_raw(phi, 25.0)[1]
        return _up_branch_raw(p, phi, 25.0)[1]
    except ParameterError:
        return "integral"


@dataclass(frozen=True)
class ComparabilityReport:
    family: str
    branch_down: str
    branch_up: str
    ratio_min: float
    ratio_max: float
    spread: float
    near_spread: float
    passed: bool
    worst_low: float  # target s achieving ratio_min
    worst_high: float
    rows: tuple  # (s, q, envelope, ratio) per sweep point

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "branch_down": self.branch_down,
            "branch_up": self.branch_up,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "spread": self.spread,
            "near_spread": self.near_spread,
            "passed": self.passed,
            "worst_low": self.worst_low,
            "worst_high": self.worst_high,
        }


def verify_comparability(
    kernel: ResurrectionKernel,
    ratios: Sequence[float] | None = None,
    budget: float = 1e3,
    method: str = "auto",
) -> ComparabilityReport:
    """Sweep q(1, s)/envelope over s in [1e-6, 1e6] and report the spread.

    PASS means max/min ratio stays within the comparability budget; the
    near-diagonal band s in [1/5, 5] is also reported separately.
    """
    if ratios is None:
        ratios = np.logspace(-6, 6, 301)
    p, phi = kernel.params, kernel.phi
    svals, qvals, evals, rvals = [], [], [], []
    for s in ratios:
        q = kernel.q_unit(float(s))
        e = envelope(p, phi, 1.0, float(s), method=method)
        svals.append(float(s))
        qvals.append(q)
        evals.append(e)
        rvals.append(q / e)
    r = np.asarray(rvals)
    s_arr = np.asarray(svals)
    near = (s_arr >= 1.0 / RATIO_BAND) & (s_arr <= RATIO_BAND)
    near_spread = float(np.max(r[near]) / np.min(r[near])) if np.any(near) else math.nan
    spread = float(np.max(r) / np.min(r))
    return ComparabilityReport(
        family=phi.descriptor(),
        branch_down=envelope_branch(p, phi, "down"),
        branch_up=envelope_branch(p, phi, "up"),
        ratio_min=float(np.min(r)),
        ratio_max=float(np.max(r)),
        spread=spread,
        near_spread=near_spread,
        passed=spread <= budget,
        worst_low=float(s_arr[np.argmin(r)]),
        worst_high=float(s_arr[np.argmax(r)]),
        rows=tuple(zip(svals, qvals, evals, rvals)),
    )


def pi_comparability(
    kernel: ResurrectionKernel,
    u_max: float = 12.0,
    n: int = 121,
    budget: float = 1e3,
) -> dict:
    """Check pi(u) ~ 1 near 0 and pi(u) ~ e^u phi(e^u) for |u| > log 5."""
    log5 = math.log(RATIO_BAND)
    u_near = np.linspace(-log5, log5, 41)
    near_vals = np.array([kernel.pi_density(float(u)) for u in u_near])
    u_far = np.concatenate(
        [np.linspace(-u_max, -log5 * 1.0001, n // 2), np.linspace(log5 * 1.0001, u_max, n // 2)]
    )
    far_ratio = np.array(
        [
            kernel.pi_density(float(u)) / (math.exp(u) * kernel.phi.density(math.exp(u)))
            for u in u_far
        ]
    )
    near_spread = float(np.max(near_vals) / np.min(near_vals))
    far_spread = float(np.max(far_ratio) / np.min(far_ratio))
    return {
        "near_spread": near_spread,
        "far_spread": far_spread,
        "passed": near_spread <= budget and far_spread <= budget,
    }
