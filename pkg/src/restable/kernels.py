"""Resurrection-kernel analytics.

For a stable process with jump kernel j(x,y) = nu(y-x) and a return
measure phi, the resurrection kernel is

    q(x, y) = c- int_(0,inf) (x + y/t)^(-1-alpha) t^(-1) phi(dt),

with total mass q(x) = (c-/alpha) x^(-alpha).  Its Lamperti counterpart is
the finite Levy measure pi(y) = q(1, e^y) e^y with Fourier transform

    pi_hat(theta) = (c-/alpha) * Gamma(alpha - i theta) Gamma(1 + i theta)
                    / Gamma(alpha) * int u^(i theta) phi(du),

and jump law Pi = pi / q(1).  The combined kernel of the resurrected
process is J = j + q, with boundary factor B = J/j (B(x,x) = 1).

Everything is reduced to the unit-base profile q(1, s) through the exact
scaling q(x, y) = x^(-1-alpha) q(1, y/x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._quad import integrate_checked
from .errors import DomainError
from .phi import DiracPhi, PhiMeasure, PolyPhi
from .specfun import gauss_2f1, ln_gamma
from .stable import StableParams, nu_density

__all__ = ["ResurrectionKernel", "pi_hat_value"]


def pi_hat_value(p: StableParams, phi: PhiMeasure, theta: float) -> complex:
    """Fourier transform of pi in closed form (log-Gamma differences)."""
    it = 1j * complex(theta)
    ratio = np.exp(ln_gamma(p.alpha - it) + ln_gamma(1.0 + it) - ln_gamma(p.alpha))
    return (p.c_minus / p.alpha) * complex(ratio) * phi.mellin(it)


def _softplus(w: float) -> float:
    # log(1 + e^w) without overflow
    if w > 0.0:
        return w + math.log1p(math.exp(-w))
    return math.log1p(math.exp(w))


@dataclass(frozen=True)
class ResurrectionKernel:
    params: StableParams
    phi: PhiMeasure
    epsabs: float = field(default=1e-14)
    epsrel: float = field(default=1e-11)

    # -- core profile -------------------------------------------------------

    def q_unit(self, s: float) -> float:
        """q(1, s): the kernel density from base point 1 to s > 0."""
        if not s > 0.0:
            raise DomainError("q is defined for positive targets")
        p = self.params
        a = p.alpha
        if isinstance(self.phi, DiracPhi):
            t = self.phi.a
            return p.c_minus / t * (1.0 + s / t) ** (-1.0 - a)

        v0 = math.log(s)

        def integrand(v: float) -> float:
            # (1 + s e^{-v})^{-1-a} phi(e^v), assembled in the log domain
            ln = -(1.0 + a) * _softplus(v0 - v) + self.phi.ln_density_log(v)
            return math.exp(ln) if ln > -745.0 else 0.0

        lo, hi = min(v0, 0.0), max(v0, 0.0)
        val = integrate_checked(
            integrand, -np.inf, np.inf, points=(lo, hi), epsabs=self.epsabs, epsrel=self.epsrel
        )
        return p.c_minus * val

    def q_density(self, x: float, y: float) -> float:
        """q(x, y) via the exact scaling reduction to q(1, y/x)."""
        if not (x > 0.0 and y > 0.0):
            raise DomainError("q is defined on (0, inf) x (0, inf)")
        return x ** (-1.0 - self.params.alpha) * self.q_unit(y / x)

    def q_mass(self, x: float) -> float:
        """Total resurrection intensity q(x) = (c-/alpha) x^(-alpha)."""
        if not x > 0.0:
            raise DomainError("q mass is defined for x > 0")
        p = self.params
        return p.c_minus / p.alpha * x ** (-p.alpha)

    # -- Lamperti-side densities -------------------------------------------

    def pi_density(self, u: float) -> float:
        """Levy density pi(u) = q(1, e^u) e^u of the resurrection overlay."""
        return math.exp(u) * self.q_unit(math.exp(u))

    def Pi_density(self, y: float, method: str = "auto") -> float:
        """Jump density Pi(y) = alpha e^y int t^alpha (t + e^y)^(-1-alpha) phi(dt).

        method='closed' uses the exact forms available for Dirac and
        polynomial-tail measures (a Beta-factor times a Gauss 2F1);
        method='quad' integrates directly; 'auto' prefers closed forms.
        """
        p = self.params
        a = p.alpha
        if method not in ("auto", "closed", "quad"):
            raise ValueError("method must be 'auto', 'closed' or 'quad'")
        if method in ("auto", "closed"):
            if isinstance(self.phi, DiracPhi):
                t = self.phi.a
                return a * math.exp(y) * t**a / (t + math.exp(y)) ** (1.0 + a)
            z = -math.expm1(-y)
            use_closed = False
            if isinstance(self.phi, PolyPhi):
                b, g = self.phi.beta, self.phi.gamma_
                # 2F1 loses accuracy toward z = 1 and z = -inf, much earlier
                # when the transformation parameters c-a-b = alpha+beta-gamma
                # (at z=1) or a-b = beta-1 (at -inf) sit near an integer; those
                # tails go to the quadrature route instead
                cab = a + b - g
                z_max = 0.9 if abs(cab - round(cab)) < 1e-6 else 1.0 - 1e-8
                ab = b - 1.0
                z_min = -100.0 if abs(ab - round(ab)) < 1e-6 else -7.2e10
                use_closed = z_min <= z <= z_max
            if use_closed:
                ln_c = (
                    math.log(a)
                    + ln_gamma(g)
                    + ln_gamma(1.0 + g - b)
                    + ln_gamma(a + b)
                    - ln_gamma(1.0 + g + a)
                    - ln_gamma(b)
                    - ln_gamma(g - b)
                )
                return math.exp(ln_c - (g - b) * y) * gauss_2f1(g, 1.0 + g - b, 1.0 + a + g, z)
            if method == "closed" and not isinstance(self.phi, PolyPhi):
                raise DomainError(
                    f"no closed-form jump density for {type(self.phi).__name__}"
                )

        def integrand(v: float) -> float:
            # e^y t^alpha (t + e^y)^{-1-alpha} phi(t) dt at t = e^v, in the log domain
            ln = y - (1.0 + a) * _softplus(y - v) + self.phi.ln_density_log(v)
            return math.exp(ln) if ln > -745.0 else 0.0

        val = integrate_checked(
            integrand,
            -np.inf,
            np.inf,
            points=(min(y, 0.0), max(y, 0.0)),
            epsabs=self.epsabs,
            epsrel=self.epsrel,
        )
        return a * val

    def pi_hat(self, theta: float) -> complex:
        return pi_hat_value(self.params, self.phi, theta)

    # -- combined kernel -----------------------------------------------------

    def j_density(self, x: float, y: float) -> float:
        """Stable jump kernel j(x, y) = nu(y - x)."""
        if x == y:
            raise DomainError("jump kernel undefined on the diagonal")
        return nu_density(self.params, y - x)

    def J_density(self, x: float, y: float) -> float:
        """Resurrected jump kernel J = j + q."""
        if x == y:
            raise DomainError("jump kernel undefined on the diagonal")
        return self.j_density(x, y) + self.q_density(x, y)

    def boundary_factor(self, x: float, y: float) -> float:
        """B(x, y) = J/j = 1 + q/j, with B(x, x) = 1 by continuity."""
        if x == y:
            return 1.0
        return 1.0 + self.q_density(x, y) / self.j_density(x, y)
