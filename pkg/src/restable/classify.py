"""Absorption-time classification of the resurrected process.

The resurrected process hits zero in finite time (continuously) exactly
when its Lamperti image drifts to -infinity, i.e. when the mean

    E = Gamma(alpha) * sin(pi*alpha*rho_hat)/pi
        * ( pi*cot(pi*alpha*rho_hat) + int log(u) phi(du) )

is negative; mean >= 0 gives an infinite absorption time.  The zero set
of E in the (alpha, rho) plane is the critical curve

    rho(alpha) = 1 - arccot(L/pi) / (alpha*pi),      L = -int log(u) phi(du),

which, when L does not depend on alpha, starts at rho = 0 at
a_phi = arccot(L/pi)/pi and leaves the admissible region at
alpha = 1 + a_phi.  In the finite-absorption case a recurrent extension
leaving zero continuously exists; its index kappa* in (0, alpha) is the
nontrivial root of

    h(kappa) = sin(pi(alpha*rho_hat - kappa))
               - sin(pi*alpha*rho_hat) * int u^kappa phi(du).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from ._quad import integrate_checked
from .errors import BracketError, NumericError, ParameterError
from .kernels import pi_hat_value
from .phi import PhiFamily, PhiMeasure, is_symmetric, resolve_phi
from .specfun import arccot, digamma, ln_gamma
from .stable import StableParams, psi_star, validate
from .stable import _linear_term_b_cached

__all__ = [
    "overline_psi",
    "h_function",
    "mean_xi1",
    "a_phi",
    "rho_critical_from_L",
    "rho_critical",
    "CriticalAlphas",
    "critical_alphas",
    "censored_mean",
    "censored_rho_critical",
    "censored_critical_alphas",
    "recurrent_extension_kappa",
    "ClassificationReport",
    "classify",
    "SymmetricRegionVerdict",
    "symmetric_region",
    "sigma_gamma",
    "ModifiedKernelReport",
    "modified_kernel_mean",
    "admissible_rho_interval",
    "region_grid",
    "critical_curve",
]

ZERO_TOL = 1e-12


def overline_psi(p: StableParams, phi: PhiMeasure, theta: complex, form: str = "sin") -> complex:
    """Characteristic exponent of the resurrected Lamperti image.

    form='sin' evaluates Gamma(alpha-i theta)Gamma(1+i theta)/pi *
    (sin(pi(alpha rho_hat - i theta)) - sin(pi alpha rho_hat) M(i theta));
    form='difference' evaluates the killed exponent minus the overlay
    transform.  Both agree to ~1e-10 and the difference form is kept as an
    internal cross-check.
    """
    theta = complex(theta)
    if form == "difference":
        return psi_star(p, theta) - pi_hat_value(p, phi, theta)
    if form != "sin":
        raise ValueError("form must be 'sin' or 'difference'")
    a, arh = p.alpha, p.alpha * p.rho_hat
    it = 1j * theta
    pref = np.exp(ln_gamma(a - it) + ln_gamma(1.0 + it)) / math.pi
    val = np.sin(math.pi * (arh - it)) - math.sin(math.pi * arh) * phi.mellin(it)
    return complex(pref * val)


def h_function(p: StableParams, phi: PhiMeasure, kappa: float) -> float:
    """h(kappa) whose root in (0, alpha) is the recurrent-extension index.

    Returns -inf once kappa reaches the moment abscissa of phi, where the
    Mellin integral diverges.
    """
    if kappa < 0.0:
        raise ParameterError("h is defined for kappa >= 0")
    arh = p.alpha * p.rho_hat
    if kappa >= phi.kappa0:
        return -math.inf
    mell = phi.mellin(complex(kappa)).real
    return math.sin(math.pi * (arh - kappa)) - math.sin(math.pi * arh) * mell


def _require_log_moment(phi: PhiMeasure) -> float:
    if not phi.has_finite_abs_log_moment:
        raise ParameterError(
            "return measure must integrate |log u|; otherwise the Lamperti image "
            "has no finite mean and the absorption classification is undefined"
        )
    return phi.log_moment


def mean_xi1(p: StableParams, phi: PhiMeasure) -> float:
    """Mean of the resurrected Lamperti image at time 1 (closed form)."""
    ell = _require_log_moment(phi)
    arh = p.alpha * p.rho_hat
    s, c = math.sin(math.pi * arh), math.cos(math.pi * arh)
    gamma_a = math.exp(ln_gamma(p.alpha))
    return gamma_a / math.pi * (math.pi * c + s * ell)


def a_phi(phi: PhiMeasure) -> float:
    """arccot(L/pi)/pi with L = -log-moment; lies in (0, 1)."""
    ell = _require_log_moment(phi)
    return arccot(-ell / math.pi) / math.pi


def rho_critical_from_L(alpha: float, L: float) -> float:
    """Critical rho(alpha) = 1 - arccot(L/pi)/(alpha*pi) (may fall outside (0,1))."""
    return 1.0 - arccot(L / math.pi) / (alpha * math.pi)


def rho_critical(alpha: float, phi: PhiMeasure) -> float:
    return rho_critical_from_L(alpha, -_require_log_moment(phi))


@dataclass(frozen=True)
class CriticalAlphas:
    """Ends of the two-sided band of the critical curve.

    Below alpha_lower the mean is positive for every admissible rho; above
    alpha_upper it is negative; rho_star = 1/alpha_upper is where the curve
    meets the upper admissibility boundary.
    """

    alpha_lower: float
    alpha_upper: float
    rho_star: float


_BRACKET_PAD = 1e-9


def _critical_alphas_from_L(L_of_alpha: Callable[[float], float]) -> CriticalAlphas:
    def upper_eq(a: float) -> float:
        return math.pi / math.tan(math.pi * (a - 1.0)) + (-L_of_alpha(a))

    def lower_eq(a: float) -> float:
        return arccot(L_of_alpha(a) / math.pi) - a * math.pi

    lo, hi = 1.0 + _BRACKET_PAD, 2.0 - _BRACKET_PAD
    if upper_eq(lo) * upper_eq(hi) > 0:
        raise BracketError("no sign change for the upper critical alpha on (1, 2)")
    alpha_upper = brentq(upper_eq, lo, hi, xtol=1e-14, rtol=8.9e-16)
    lo, hi = _BRACKET_PAD, 1.0 - _BRACKET_PAD
    if lower_eq(lo) * lower_eq(hi) > 0:
        raise BracketError("no sign change for the lower critical alpha on (0, 1)")
    alpha_lower = brentq(lower_eq, lo, hi, xtol=1e-14, rtol=8.9e-16)
    return CriticalAlphas(alpha_lower, alpha_upper, 1.0 / alpha_upper)


def critical_alphas(family: PhiFamily) -> CriticalAlphas:
    """Band ends for a return-measure family whose log-moment depends on alpha only."""
    logmom = family.log_moment_fn()
    return _critical_alphas_from_L(lambda a: -logmom(a))


def censored_mean(p: StableParams) -> float:
    """Mean of the Lamperti image of the censored process.

    Same structure as the resurrected mean but with log-moment term
    -(psi(1) - psi(alpha)).
    """
    arh = p.alpha * p.rho_hat
    s, c = math.sin(math.pi * arh), math.cos(math.pi * arh)
    gamma_a = math.exp(ln_gamma(p.alpha))
    return gamma_a / math.pi * (math.pi * c - s * (digamma(1.0) - digamma(p.alpha)))


def censored_rho_critical(alpha: float) -> float:
    return rho_critical_from_L(alpha, digamma(1.0) - digamma(alpha))


def censored_critical_alphas() -> CriticalAlphas:
    """Critical data of the censored process; the curve stays positive, so the
    lower end is the formal limit 0."""
    def upper_eq(a: float) -> float:
        return math.pi / math.tan(math.pi * (a - 1.0)) - (digamma(1.0) - digamma(a))

    alpha_upper = brentq(upper_eq, 1.0 + _BRACKET_PAD, 2.0 - _BRACKET_PAD, xtol=1e-14, rtol=8.9e-16)
    return CriticalAlphas(0.0, alpha_upper, 1.0 / alpha_upper)


def recurrent_extension_kappa(p: StableParams, phi: PhiMeasure) -> float:
    """Root kappa* of h in (0, min(alpha, kappa0)) with |h(kappa*)| <= 1e-10.

    Defined only in the finite-absorption case; the trivial root at 0 is
    excluded by requiring h > 0 just right of the origin.
    """
    mean = mean_xi1(p, phi)
    if mean >= 0.0:
        raise ParameterError(
            "recurrent extension index is defined only when the absorption time is "
            f"finite (mean < 0); got mean {mean:.6g}"
        )
    if not phi.kappa0 > 0.0:
        raise ParameterError("return measure must have a positive moment abscissa")
    upper = min(p.alpha, phi.kappa0)
    delta = 1e-8
    hi = upper - max(1e-12, 1e-9 * upper)
    if not h_function(p, phi, delta) > 0.0:
        raise NumericError(
            "h is not positive right of 0; cannot exclude the trivial root"
        )
    h_hi = h_function(p, phi, hi)
    if not h_hi < 0.0:
        raise BracketError(f"h({hi}) = {h_hi} is not negative; no bracket for kappa*")
    kappa = brentq(
        lambda k: h_function(p, phi, k), delta, hi, xtol=1e-14, rtol=8.9e-16
    )
    resid = abs(h_function(p, phi, kappa))
    if resid > 1e-10:
        raise NumericError(f"kappa* root residual {resid} exceeds 1e-10")
    return float(kappa)


@dataclass(frozen=True)
class ClassificationReport:
    alpha: float
    rho: float
    phi_descriptor: str
    mean_xi1: float
    verdict: str  # infinite_absorption | finite_absorption_continuous | boundary_zero_mean
    absorption: str  # infinite | finite_continuous (mean >= 0 counts as infinite)
    a_phi: float | None = None
    rho_critical: float | None = None
    kappa_star: float | None = None
    kappa_residual: float | None = None

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "rho": self.rho,
            "phi": self.phi_descriptor,
            "mean_xi1": self.mean_xi1,
            "verdict": self.verdict,
            "absorption": self.absorption,
            "a_phi": self.a_phi,
            "rho_critical": self.rho_critical,
            "kappa_star": self.kappa_star,
            "kappa_residual": self.kappa_residual,
        }


def classify(
    p: StableParams,
    phi: PhiMeasure,
    zero_tol: float = ZERO_TOL,
    want_kappa: bool = True,
) -> ClassificationReport:
    """Full absorption report: mean, verdict, critical data, extension index."""
    mean = mean_xi1(p, phi)
    absorption = "infinite" if mean >= 0.0 else "finite_continuous"
    if abs(mean) <= zero_tol:
        verdict = "boundary_zero_mean"
    elif mean > 0.0:
        verdict = "infinite_absorption"
    else:
        verdict = "finite_absorption_continuous"
    aphi = a_phi(phi)
    rc = rho_critical(p.alpha, phi)
    lo, hi = admissible_rho_interval(p.alpha)
    rc_out = rc if lo <= rc <= hi else None
    kappa = resid = None
    if want_kappa and verdict == "finite_absorption_continuous" and phi.kappa0 > 0.0:
        kappa = recurrent_extension_kappa(p, phi)
        resid = abs(h_function(p, phi, kappa))
    return ClassificationReport(
        alpha=p.alpha,
        rho=p.rho,
        phi_descriptor=phi.descriptor(),
        mean_xi1=mean,
        verdict=verdict,
        absorption=absorption,
        a_phi=aphi,
        rho_critical=rc_out,
        kappa_star=kappa,
        kappa_residual=resid,
    )


@dataclass(frozen=True)
class SymmetricRegionVerdict:
    sign: int | None  # +1 / 0 / -1, or None where the criterion is silent
    determinate: bool
    mean: float
    consistent: bool

    def to_dict(self) -> dict:
        return {
            "sign": self.sign,
            "determinate": self.determinate,
            "mean": self.mean,
            "consistent": self.consistent,
        }


def symmetric_region(p: StableParams, phi: PhiMeasure) -> SymmetricRegionVerdict:
    """Sign of the mean under a symmetric resurrection kernel.

    Determinate regions: mean < 0 when alpha > 1 and rho_hat in
    [1/(2 alpha), 1/alpha); mean = 0 at alpha = 1 (rho_hat = 1/2); mean > 0
    when alpha < 1 and rho_hat in (0, 1/(2 alpha)].  Outside these the sign
    depends on the measure and is reported as undetermined.  (For alpha > 1
    with rho_hat < 1/(2 alpha) the sign genuinely varies with phi, so no
    blanket positive verdict is possible there.)
    """
    sym = is_symmetric(phi, p.alpha)
    if not sym.symmetric:
        raise ParameterError(
            f"symmetric-region rule needs a symmetric return measure; residual {sym.residual:.3g}"
        )
    a, rh = p.alpha, p.rho_hat
    sign: int | None = None
    if a > 1.0 and 1.0 / (2.0 * a) <= rh < 1.0 / a:
        sign = -1
    elif a == 1.0:
        sign = 0
    elif a < 1.0 and 0.0 < rh <= 1.0 / (2.0 * a):
        sign = 1
    mean = mean_xi1(p, phi)
    if sign is None:
        consistent = True
    elif sign == 0:
        consistent = abs(mean) <= 1e-10
    else:
        consistent = (mean > 0) == (sign > 0) and mean != 0.0
    return SymmetricRegionVerdict(sign, sign is not None, mean, consistent)


# ---------------------------------------------------------------------------
# Modified jump kernels of the symmetric unit-constant stable base


def sigma_gamma(alpha: float, power: float, x: float) -> float:
    """Jump-density asymmetry e^{(1+g)x}/(e^x-1)^{1+a} - e^{-(1+g)x}/(1-e^{-x})^{1+a}.

    Evaluated in the cancellation-free form
    e^{-x} (e^{(g-a+1)x} - 1) / (1-e^{-x})^{1+a}; positive iff alpha < 1+g.
    """
    if not x > 0.0:
        raise ParameterError("sigma is defined for x > 0")
    c = power - alpha + 1.0
    return math.exp(-x) * math.expm1(c * x) / (-math.expm1(-x)) ** (1.0 + alpha)


@dataclass(frozen=True)
class ModifiedKernelReport:
    alpha: float
    boundary: str
    sign: int
    mean_sigma_route: float
    mean_quadrature_route: float

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "boundary": self.boundary,
            "sign": self.sign,
            "mean_sigma_route": self.mean_sigma_route,
            "mean_quadrature_route": self.mean_quadrature_route,
        }


def _mu_unit(alpha: float, y: float) -> float:
    return math.exp(y) * abs(math.expm1(y)) ** (-1.0 - alpha)


def modified_kernel_mean(
    alpha: float,
    boundary: float | Callable[[float], float],
) -> ModifiedKernelReport:
    """Mean of the Lamperti image for the boundary-modified symmetric kernel.

    The base is the symmetric stable process normalized to unit jump
    constant.  ``boundary`` is either a power g in (-1, alpha), meaning
    B(x, y) = (y/x)^g, or a symmetric boundary profile given as
    y -> B(1, e^y) for y > 0 (with B(1,1) = 1).  The mean is computed two
    ways: from the one-sided asymmetry integral int_0^inf y * sigma(y) dy,
    and from the compensated-generator identity
    -b_bar + int_{|y|>=1} y B(1, e^y) mu(y) dy; the two must agree.
    """
    if not 0.0 < alpha < 2.0:
        raise ParameterError(f"alpha={alpha} outside (0, 2)")
    if callable(boundary):
        be = boundary
        label = "symmetric"
        if abs(be(0.0) - 1.0) > 1e-12:
            raise ParameterError("boundary profile must satisfy B(1,1) = 1")

        def be_signed(y: float) -> float:
            return be(abs(y))

        def asym(y: float) -> float:
            return be(y) * sigma_gamma(alpha, 0.0, y)

        sign = int(np.sign(1.0 - alpha))
    else:
        g = float(boundary)
        if not -1.0 < g < alpha:
            raise ParameterError(f"power boundary needs g in (-1, alpha), got {g}")
        label = f"power:{g:g}"

        def be_signed(y: float) -> float:
            return math.exp(g * y)

        def asym(y: float) -> float:
            return sigma_gamma(alpha, g, y)

        sign = int(np.sign(1.0 + g - alpha))

    mean_sigma = integrate_checked(lambda y: y * asym(y), 0.0, np.inf, points=(1.0,))

    b_base = _linear_term_b_cached(alpha, 1.0, 1.0, 0.0)
    corr = integrate_checked(
        lambda y: y * (be_signed(y) - 1.0) * _mu_unit(alpha, y), -1.0, 1.0, points=(0.0,)
    )
    b_bar = b_base - corr
    tail = integrate_checked(
        lambda y: y * be_signed(y) * _mu_unit(alpha, y), 1.0, np.inf
    ) + integrate_checked(lambda y: y * be_signed(y) * _mu_unit(alpha, y), -np.inf, -1.0)
    mean_quad = -b_bar + tail
    return ModifiedKernelReport(alpha, label, sign, mean_sigma, mean_quad)


# ---------------------------------------------------------------------------
# Parameter-plane sweeps


def admissible_rho_interval(alpha: float) -> tuple[float, float]:
    """Open admissible rho-interval at this alpha (degenerate {1/2} at alpha=1)."""
    if not 0.0 < alpha < 2.0:
        raise ParameterError(f"alpha={alpha} outside (0, 2)")
    if alpha < 1.0:
        return 0.0, 1.0
    if alpha == 1.0:
        return 0.5, 0.5
    return 1.0 - 1.0 / alpha, 1.0 / alpha


def _grid_sign(mean: float, zero_tol: float) -> int:
    if abs(mean) <= zero_tol:
        return 0
    return 1 if mean > 0 else -1


def region_grid(
    family: PhiFamily | str,
    alphas: Sequence[float],
    n_rho: int = 40,
    rhos: Sequence[float] | None = None,
    zero_tol: float = ZERO_TOL,
) -> list[dict]:
    """Sign of the mean over the admissible (alpha, rho) region.

    Explicit ``rhos`` are checked pointwise and inadmissible combinations
    are kept in the output with admissible=False markers; otherwise each
    alpha gets ``n_rho`` points strictly inside its admissible interval.
    """
    if isinstance(family, str):
        family = resolve_phi(family)
    rows: list[dict] = []
    for a in alphas:
        lo, hi = admissible_rho_interval(a)
        if rhos is None:
            if a == 1.0:
                grid = [0.5]
            else:
                pad = (hi - lo) / (n_rho + 1)
                grid = list(np.linspace(lo + pad, hi - pad, n_rho))
        else:
            grid = list(rhos)
        for r in grid:
            admissible = (lo <= r <= hi) if a == 1.0 else (lo < r < hi)
            if not admissible:
                rows.append(
                    {"alpha": a, "rho": r, "admissible": False, "sign": None, "mean": None}
                )
                continue
            p = validate(a, r)
            mean = mean_xi1(p, family.make(a, r))
            rows.append(
                {
                    "alpha": a,
                    "rho": r,
                    "admissible": True,
                    "sign": _grid_sign(mean, zero_tol),
                    "mean": mean,
                }
            )
    return rows


def critical_curve(family: PhiFamily | str, alphas: Sequence[float]) -> list[dict]:
    """rho(alpha) with mean zero, localized per alpha.

    Closed form when the measure does not couple to rho; otherwise a
    bracketed root search in rho.  Entries where the curve leaves the
    admissible interval carry rho_critical=None.
    """
    if isinstance(family, str):
        family = resolve_phi(family)
    rows: list[dict] = []
    for a in alphas:
        lo, hi = admissible_rho_interval(a)
        rc: float | None
        if not family.needs_rho:
            rc = rho_critical(a, family.make(a, None))
        else:
            if a == 1.0:
                rc = 0.5 if abs(mean_xi1(validate(1.0, 0.5), family.make(1.0, 0.5))) < 1e-10 else None
            else:
                pad = (hi - lo) * 1e-6

                def f(r: float) -> float:
                    return mean_xi1(validate(a, r), family.make(a, r))

                f_lo, f_hi = f(lo + pad), f(hi - pad)
                if f_lo * f_hi > 0:
                    rc = None
                else:
                    rc = brentq(f, lo + pad, hi - pad, xtol=1e-12)
        if rc is not None and not (lo <= rc <= hi):
            rc = None
        rows.append({"alpha": a, "rho_critical": rc})
    return rows
