"""Return measures on (0, inf) that drive scale-invariant resurrection.

A return measure ``phi`` restarts the process at |exit position| * V with
V ~ phi.  Each measure exposes its Mellin transform with an explicit strip
of analyticity, the log-moment, the moment abscissa kappa0, a density when
one exists, and an exact sampler.

Families:

* PolyPhi(beta, gamma): density Gamma(gamma)/(Gamma(beta)Gamma(gamma-beta))
  * t^(beta-1) (1+t)^(-gamma), polynomial tail.
* ExpPhi(a, beta, gamma): density gamma*a^(beta/gamma)/Gamma(beta/gamma)
  * t^(beta-1) exp(-a t^gamma), stretched-exponential tail.
* DiracPhi(a): unit mass at a.
* TabulatedPhi: density samples on a geometric grid, log-linear
  interpolation, power-law tail extrapolation fitted on the outermost
  decade of the grid.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DivergenceError, DomainError, ParameterError
from .specfun import digamma, ln_gamma

__all__ = [
    "PhiMeasure",
    "PolyPhi",
    "ExpPhi",
    "DiracPhi",
    "TabulatedPhi",
    "SymmetryResult",
    "is_symmetric",
    "from_generator",
    "PhiFamily",
    "resolve_phi",
    "parse_phi",
]

SYMMETRY_TOL = 1e-8


class PhiMeasure(ABC):
    """Probability measure on (0, inf) used as a scale-invariant return law."""

    #: upper abscissa: int u^s phi(du) < inf for Re s < kappa0
    kappa0: float
    #: lower abscissa: transform diverges for Re s <= kappa_lower
    kappa_lower: float
    has_finite_abs_log_moment: bool = True

    def _require_in_strip(self, s: complex) -> None:
        re = complex(s).real
        if not (self.kappa_lower < re < self.kappa0):
            raise DivergenceError(
                f"Mellin transform diverges at Re s = {re}; "
                f"strip is ({self.kappa_lower}, {self.kappa0})"
            )

    @abstractmethod
    def mellin(self, s: complex) -> complex:
        """int u^s phi(du), defined on the strip kappa_lower < Re s < kappa0."""

    @property
    @abstractmethod
    def log_moment(self) -> float:
        """int log(u) phi(du)."""

    def density(self, t):
        raise DomainError(f"{type(self).__name__} has no Lebesgue density")

    def ln_density_log(self, v: float) -> float:
        """log density(e^v); -inf where the density vanishes.

        Overflow-safe form used by the kernel quadratures, which work on
        the log scale throughout.
        """
        d = self.density(float(np.exp(v)))
        return math.log(d) if d > 0.0 else -math.inf

    @abstractmethod
    def sample(self, rng: np.random.Generator, size=None):
        """Draw exact samples; returns a scalar when size is None."""

    @abstractmethod
    def descriptor(self) -> str:
        """Parseable textual form, e.g. 'poly:beta=0.5,gamma=1'."""


@dataclass(frozen=True)
class PolyPhi(PhiMeasure):
    beta: float
    gamma_: float

    def __post_init__(self):
        if not self.beta > 0.0:
            raise ParameterError(f"PolyPhi requires beta > 0, got {self.beta}")
        if not self.gamma_ > self.beta:
            raise ParameterError(
                f"PolyPhi requires gamma > beta, got gamma={self.gamma_}, beta={self.beta}"
            )

    @property
    def kappa0(self) -> float:
        return self.gamma_ - self.beta

    @property
    def kappa_lower(self) -> float:
        return -self.beta

    def mellin(self, s: complex) -> complex:
        self._require_in_strip(s)
        s = complex(s)
        ln_b = ln_gamma(self.beta) + ln_gamma(self.gamma_ - self.beta)
        val = ln_gamma(self.beta + s) + ln_gamma(self.gamma_ - self.beta - s) - ln_b
        return complex(np.exp(val))

    @property
    def log_moment(self) -> float:
        return digamma(self.beta) - digamma(self.gamma_ - self.beta)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        ln_c = ln_gamma(self.gamma_) - ln_gamma(self.beta) - ln_gamma(self.gamma_ - self.beta)
        with np.errstate(all="ignore"):
            # split exponent forms to stay finite at both ends of (0, inf)
            small = (self.beta - 1.0) * np.log(t) - self.gamma_ * np.log1p(t)
            large = (self.beta - 1.0 - self.gamma_) * np.log(t) - self.gamma_ * np.log1p(1.0 / t)
            out = np.exp(ln_c + np.where(t <= 1.0, small, large))
        out = np.where(np.isfinite(t), out, 0.0)
        return out if out.ndim else float(out)

    def ln_density_log(self, v: float) -> float:
        ln_c = ln_gamma(self.gamma_) - ln_gamma(self.beta) - ln_gamma(self.gamma_ - self.beta)
        softplus = v + math.log1p(math.exp(-v)) if v > 0 else math.log1p(math.exp(v))
        return ln_c + (self.beta - 1.0) * v - self.gamma_ * softplus

    def sample(self, rng: np.random.Generator, size=None):
        u = rng.beta(self.beta, self.gamma_ - self.beta, size=size)
        return u / (1.0 - u)

    def descriptor(self) -> str:
        return f"poly:beta={self.beta:g},gamma={self.gamma_:g}"


@dataclass(frozen=True)
class ExpPhi(PhiMeasure):
    a: float
    beta: float
    gamma_: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.beta > 0.0 and self.gamma_ > 0.0):
            raise ParameterError(
                f"ExpPhi requires a, beta, gamma > 0, got ({self.a}, {self.beta}, {self.gamma_})"
            )

    kappa0 = math.inf

    @property
    def kappa_lower(self) -> float:
        return -self.beta

    def mellin(self, s: complex) -> complex:
        self._require_in_strip(s)
        s = complex(s)
        val = (
            ln_gamma((self.beta + s) / self.gamma_)
            - ln_gamma(self.beta / self.gamma_)
            - s * math.log(self.a) / self.gamma_
        )
        return complex(np.exp(val))

    @property
    def log_moment(self) -> float:
        return (digamma(self.beta / self.gamma_) - math.log(self.a)) / self.gamma_

    def density(self, t):
        t = np.asarray(t, dtype=float)
        ln_c = (
            math.log(self.gamma_)
            + (self.beta / self.gamma_) * math.log(self.a)
            - ln_gamma(self.beta / self.gamma_)
        )
        with np.errstate(all="ignore"):
            out = np.exp(ln_c + (self.beta - 1.0) * np.log(t) - self.a * t**self.gamma_)
        out = np.where(np.isfinite(t), out, 0.0)
        return out if out.ndim else float(out)

    def ln_density_log(self, v: float) -> float:
        if self.gamma_ * v > 709.0:
            return -math.inf
        ln_c = (
            math.log(self.gamma_)
            + (self.beta / self.gamma_) * math.log(self.a)
            - ln_gamma(self.beta / self.gamma_)
        )
        return ln_c + (self.beta - 1.0) * v - self.a * math.exp(self.gamma_ * v)

    def sample(self, rng: np.random.Generator, size=None):
        g = rng.standard_gamma(self.beta / self.gamma_, size=size)
        return (g / self.a) ** (1.0 / self.gamma_)

    def descriptor(self) -> str:
        return f"exp:a={self.a:g},beta={self.beta:g},gamma={self.gamma_:g}"


@dataclass(frozen=True)
class DiracPhi(PhiMeasure):
    a: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ParameterError(f"DiracPhi requires a > 0, got {self.a}")

    kappa0 = math.inf
    kappa_lower = -math.inf

    def mellin(self, s: complex) -> complex:
        return complex(np.exp(complex(s) * math.log(self.a)))

    @property
    def log_moment(self) -> float:
        return math.log(self.a)

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return self.a
        return np.full(size, self.a, dtype=float)

    def descriptor(self) -> str:
        return f"dirac:a={self.a:g}"


def _segment_moment(tlo: float, thi: float, dlo: float, m: float, s: complex) -> complex:
    # int_tlo^thi t^s * dlo (t/tlo)^m dt, written in powers of the knot
    # ratio r = thi/tlo so steep segment exponents cannot overflow
    q = s + m + 1.0
    lr = math.log(thi / tlo)
    base = dlo * np.exp((s + 1.0) * math.log(tlo))
    if abs(q) < 1e-12:
        return base * lr
    return base * (np.exp(q * lr) - 1.0) / q


def _segment_log_moment(tlo: float, thi: float, dlo: float, m: float) -> float:
    # int_tlo^thi log(t) * dlo (t/tlo)^m dt
    q = m + 1.0
    lr = math.log(thi / tlo)
    llo, lhi = math.log(tlo), math.log(thi)
    if abs(q) < 1e-12:
        return dlo * tlo * 0.5 * (lhi * lhi - llo * llo)
    rq = math.exp(q * lr)
    return dlo * tlo * (rq * (lhi / q - 1.0 / q**2) - (llo / q - 1.0 / q**2))


class TabulatedPhi(PhiMeasure):
    """Density known on a geometric grid; power-law tails beyond it.

    The constructor normalizes the measure; the normalized total mass is
    checked to within 1e-8 afterwards.
    """

    def __init__(self, knots: Sequence[float], values: Sequence[float]):
        t = np.asarray(knots, dtype=float)
        d = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.size < 8 or np.any(np.diff(t) <= 0) or t[0] <= 0:
            raise ParameterError("TabulatedPhi needs at least 8 strictly increasing knots > 0")
        if d.shape != t.shape or np.any(d <= 0) or not np.all(np.isfinite(d)):
            raise ParameterError("TabulatedPhi needs finite, strictly positive density values")
        self._t = t
        self._logt = np.log(t)
        # per-segment power exponents of the log-linear model
        self._m = np.diff(np.log(d)) / np.diff(self._logt)
        # tail exponents fitted on the outermost decade of the grid
        self._p_head = self._fit_exponent(t, d, t <= t[0] * 10.0)
        self._p_tail = self._fit_exponent(t, d, t >= t[-1] / 10.0)
        if self._p_head <= -1.0:
            raise DivergenceError(
                f"density not integrable at 0: fitted head exponent {self._p_head:.4g} <= -1"
            )
        if self._p_tail >= -1.0:
            raise DivergenceError(
                f"density not integrable at infinity: fitted tail exponent {self._p_tail:.4g} >= -1"
            )
        d = d / self._total_mass(d)
        self._d = d
        self._logd = np.log(d)
        # cumulative masses: head, segments..., tail
        seg = np.array(
            [
                _segment_moment(t[i], t[i + 1], d[i], self._m[i], 0.0).real
                for i in range(t.size - 1)
            ]
        )
        head = d[0] * t[0] / (self._p_head + 1.0)
        tail = -d[-1] * t[-1] / (self._p_tail + 1.0)
        self._cum = np.concatenate([[0.0], np.cumsum(np.concatenate([[head], seg]))])
        self._mass_total = self._cum[-1] + tail
        if abs(self._mass_total - 1.0) > 1e-8:
            raise DivergenceError(
                f"normalization failed: total mass {self._mass_total} differs from 1"
            )

    @staticmethod
    def _fit_exponent(t: np.ndarray, d: np.ndarray, mask: np.ndarray) -> float:
        if mask.sum() < 2:
            raise ParameterError("grid too coarse to fit a tail exponent")
        return float(np.polyfit(np.log(t[mask]), np.log(d[mask]), 1)[0])

    def _total_mass(self, d: np.ndarray) -> float:
        t = self._t
        seg = sum(
            _segment_moment(t[i], t[i + 1], d[i], self._m[i], 0.0).real
            for i in range(t.size - 1)
        )
        head = d[0] * t[0] / (self._p_head + 1.0)
        tail = -d[-1] * t[-1] / (self._p_tail + 1.0)
        return head + seg + tail

    @property
    def kappa0(self) -> float:
        return -1.0 - self._p_tail

    @property
    def kappa_lower(self) -> float:
        return -1.0 - self._p_head

    def density(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        if np.any(t <= 0):
            raise DomainError("density defined on (0, inf)")
        logt = np.log(t)
        out = np.empty_like(t)
        below = t < self._t[0]
        above = t > self._t[-1]
        mid = ~(below | above)
        out[below] = self._d[0] * (t[below] / self._t[0]) ** self._p_head
        out[above] = self._d[-1] * (t[above] / self._t[-1]) ** self._p_tail
        out[mid] = np.exp(np.interp(logt[mid], self._logt, self._logd))
        return float(out[0]) if scalar else out

    def ln_density_log(self, v: float) -> float:
        if v < self._logt[0]:
            return float(self._logd[0] + self._p_head * (v - self._logt[0]))
        if v > self._logt[-1]:
            return float(self._logd[-1] + self._p_tail * (v - self._logt[-1]))
        return float(np.interp(v, self._logt, self._logd))

    def mellin(self, s: complex) -> complex:
        self._require_in_strip(s)
        s = complex(s)
        t, d, m = self._t, self._d, self._m
        # head: d0 (t/t0)^p for t < t0
        total = d[0] * np.exp((s + 1.0) * math.log(t[0])) / (s + self._p_head + 1.0)
        for i in range(t.size - 1):
            total += _segment_moment(t[i], t[i + 1], d[i], m[i], s)
        total += -d[-1] * np.exp((s + 1.0) * math.log(t[-1])) / (s + self._p_tail + 1.0)
        return complex(total)

    @property
    def log_moment(self) -> float:
        t, d, m = self._t, self._d, self._m
        total = 0.0
        p = self._p_head
        total += d[0] * t[0] * (math.log(t[0]) / (p + 1.0) - 1.0 / (p + 1.0) ** 2)
        for i in range(t.size - 1):
            total += _segment_log_moment(t[i], t[i + 1], d[i], m[i])
        p = self._p_tail
        total += -d[-1] * t[-1] * (math.log(t[-1]) / (p + 1.0) - 1.0 / (p + 1.0) ** 2)
        return total

    def sample(self, rng: np.random.Generator, size=None):
        scalar = size is None
        n = 1 if scalar else int(np.prod(size))
        u = rng.random(n) * self._mass_total
        idx = np.searchsorted(self._cum, u, side="right") - 1
        out = np.empty(n)
        t, d = self._t, self._d
        for k in range(n):
            i = idx[k]
            rem = u[k] - self._cum[i]
            if i == 0:
                # head segment: mass(x) = d0 t0 (x/t0)^{p+1} / (p+1)
                p = self._p_head
                out[k] = t[0] * (rem * (p + 1.0) / (d[0] * t[0])) ** (1.0 / (p + 1.0))
            elif i - 1 < self._m.size:
                j = i - 1
                m = self._m[j]
                if abs(m + 1.0) < 1e-12:
                    out[k] = t[j] * math.exp(rem / (d[j] * t[j]))
                else:
                    # mass within segment: d_j t_j ((x/t_j)^{m+1} - 1)/(m+1)
                    out[k] = t[j] * (1.0 + rem * (m + 1.0) / (d[j] * t[j])) ** (1.0 / (m + 1.0))
            else:
                # tail: remaining mass beyond x is -dN tN (x/tN)^{p+1} / (p+1)
                p = self._p_tail
                rem_tail = self._mass_total - u[k]
                out[k] = t[-1] * (rem_tail * -(p + 1.0) / (d[-1] * t[-1])) ** (1.0 / (p + 1.0))
        if scalar:
            return float(out[0])
        return out.reshape(size)

    def descriptor(self) -> str:
        return f"table:n={self._t.size},range=[{self._t[0]:g},{self._t[-1]:g}]"


@dataclass(frozen=True)
class SymmetryResult:
    symmetric: bool
    residual: float
    method: str

    def to_dict(self) -> dict:
        return {"symmetric": self.symmetric, "residual": self.residual, "method": self.method}


def is_symmetric(phi: PhiMeasure, alpha: float, tol: float = SYMMETRY_TOL) -> SymmetryResult:
    """Check whether the resurrection kernel built from phi is symmetric.

    The density criterion is phi(1/t) = t^(1+alpha) phi(t); the residual is
    the largest relative violation on a log grid t in [1e-4, 1e4].  Dirac
    measures are handled by atom logic, and PolyPhi by the closed-form
    condition gamma = alpha + 2*beta - 1.
    """
    if isinstance(phi, DiracPhi):
        resid = abs(phi.a - 1.0 / phi.a) / (phi.a + 1.0 / phi.a)
        return SymmetryResult(phi.a == 1.0, resid, "atom")
    if isinstance(phi, PolyPhi) and phi.gamma_ == alpha + 2.0 * phi.beta - 1.0:
        return SymmetryResult(True, 0.0, "closed-form")
    t = np.logspace(-4, 4, 321)
    lhs = phi.density(1.0 / t)
    rhs = t ** (1.0 + alpha) * phi.density(t)
    denom = lhs + rhs
    rel = np.zeros_like(denom)
    # points where both sides have underflowed carry no information;
    # below ~1e-290 the float representation itself is unreliable
    np.divide(np.abs(lhs - rhs), denom, out=rel, where=denom > 1e-290)
    resid = float(np.max(rel))
    return SymmetryResult(resid <= tol, resid, "grid")


def from_generator(
    f: Callable[[float], float],
    alpha: float,
    t_max: float = 1e6,
    points_per_decade: int = 50,
) -> TabulatedPhi:
    """Build the symmetric return density phi(t) = f(t + 1/t) / (1+t)^(1+alpha).

    f is a nonnegative function on [2, inf); the resulting density is
    tabulated on an inversion-symmetric geometric grid and normalized.  The
    construction makes g(t) = phi(t) (1+t)^(1+alpha) invariant under
    t -> 1/t, so the output always passes is_symmetric.
    """
    decades = math.log10(t_max)
    n = int(round(2 * decades * points_per_decade)) + 1
    t = np.logspace(-decades, decades, n)
    vals = np.array([f(ti + 1.0 / ti) for ti in t], dtype=float)
    if np.any(vals < 0) or not np.all(np.isfinite(vals)):
        raise ParameterError("generator f must be finite and nonnegative on [2, inf)")
    with np.errstate(all="ignore"):
        dens = vals / (1.0 + t) ** (1.0 + alpha)
    # trim underflowed nodes in mirror pairs so the table stays
    # inversion-symmetric (t_i <-> 1/t_i), which the interpolant inherits
    keep = (dens > 0.0) & (dens[::-1] > 0.0)
    if keep.sum() < 8:
        raise ParameterError("generator f vanishes on too much of the grid")
    idx = np.flatnonzero(keep)
    if not np.all(np.diff(idx) == 1):
        raise ParameterError("generator f must be positive on a contiguous range")
    return TabulatedPhi(t[keep], dens[keep])


# ---------------------------------------------------------------------------
# CLI descriptors


@dataclass(frozen=True)
class PhiFamily:
    """A return-measure family, possibly coupled to the stable parameters."""

    label: str
    maker: Callable[[float, float], PhiMeasure]
    needs_alpha: bool = False
    needs_rho: bool = False

    @property
    def fixed(self) -> bool:
        """True when the measure (hence its log-moment) is parameter-free."""
        return not (self.needs_alpha or self.needs_rho)

    def make(self, alpha: float | None = None, rho: float | None = None) -> PhiMeasure:
        if self.needs_alpha and alpha is None:
            raise ParameterError(f"return-measure family '{self.label}' needs alpha")
        if self.needs_rho and rho is None:
            raise ParameterError(f"return-measure family '{self.label}' needs rho")
        return self.maker(alpha, rho)

    def log_moment_fn(self) -> Callable[[float], float]:
        """log-moment as a function of alpha; undefined for rho-coupled families."""
        if self.needs_rho:
            raise ParameterError(
                f"family '{self.label}' couples to rho; its log-moment is not a function of alpha"
            )
        if self.fixed:
            value = self.maker(None, None).log_moment
            return lambda a: value
        return lambda a: self.maker(a, None).log_moment


def _parse_kv(body: str, wanted: dict[str, float | None]) -> dict[str, float]:
    out = dict(wanted)
    if body:
        for item in body.split(","):
            if "=" not in item:
                raise ParameterError(f"malformed return-measure option '{item}'")
            key, val = item.split("=", 1)
            key = key.strip()
            if key not in out:
                raise ParameterError(f"unknown return-measure option '{key}'")
            try:
                out[key] = float(val)
            except ValueError as exc:
                raise ParameterError(f"non-numeric value for '{key}': {val}") from exc
    missing = [k for k, v in out.items() if v is None]
    if missing:
        raise ParameterError(f"missing return-measure options: {', '.join(missing)}")
    return {k: float(v) for k, v in out.items()}


def resolve_phi(text: str) -> PhiFamily:
    """Parse a return-measure descriptor into a family.

    Fixed measures: ``poly:beta=B,gamma=G``, ``exp:a=A,beta=B,gamma=G``,
    ``dirac:a=A``, ``table:path=FILE`` (two-column CSV t,density).
    Coupled families: ``trace`` (beta = 1 - alpha*rho, gamma = 1, the
    path-censored return law) and ``jumplaw`` (beta = 1, gamma = 1 + alpha,
    restart by the jump distribution itself).
    """
    name, _, body = text.partition(":")
    name = name.strip().lower()
    if name == "poly":
        kv = _parse_kv(body, {"beta": None, "gamma": None})
        measure = PolyPhi(kv["beta"], kv["gamma"])
        return PhiFamily(text, lambda a, r: measure)
    if name == "exp":
        kv = _parse_kv(body, {"a": None, "beta": None, "gamma": None})
        measure = ExpPhi(kv["a"], kv["beta"], kv["gamma"])
        return PhiFamily(text, lambda a, r: measure)
    if name == "dirac":
        kv = _parse_kv(body, {"a": None})
        measure = DiracPhi(kv["a"])
        return PhiFamily(text, lambda a, r: measure)
    if name == "table":
        if not body.startswith("path="):
            raise ParameterError("table measure needs 'table:path=FILE'")
        path = body[len("path=") :]
        data = np.loadtxt(path, delimiter=",", dtype=float)
        if data.ndim != 2 or data.shape[1] != 2:
            raise ParameterError(f"{path}: expected two columns t,density")
        measure = TabulatedPhi(data[:, 0], data[:, 1])
        return PhiFamily(text, lambda a, r: measure)
    if name == "trace":
        if body:
            raise ParameterError("'trace' takes no options")
        return PhiFamily(
            "trace", lambda a, r: PolyPhi(1.0 - a * r, 1.0), needs_alpha=True, needs_rho=True
        )
    if name == "jumplaw":
        if body:
            raise ParameterError("'jumplaw' takes no options")
        return PhiFamily("jumplaw", lambda a, r: PolyPhi(1.0, 1.0 + a), needs_alpha=True)
    raise ParameterError(f"unknown return-measure descriptor '{text}'")


def parse_phi(text: str, alpha: float | None = None, rho: float | None = None) -> PhiMeasure:
    """Resolve a descriptor to a concrete measure (coupled families need alpha, rho)."""
    return resolve_phi(text).make(alpha, rho)
