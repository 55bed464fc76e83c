"""Special-function kernel: complex log-Gamma, digamma, Beta, Gauss 2F1, arccot.

Backed by scipy.special, which meets the accuracy targets used throughout
(relative 1e-12 for Gamma/digamma on the arguments that occur here, 1e-10
for 2F1 with real z < 1).  The arccotangent follows the strictly
decreasing (0, pi)-valued convention used by the absorption classifier.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sc

from .errors import DomainError

__all__ = ["ln_gamma", "gamma_fn", "digamma", "ln_beta", "gauss_2f1", "arccot"]


def _is_nonpositive_integer(x: complex) -> bool:
    return x.imag == 0.0 and x.real <= 0.0 and x.real == round(x.real)


def ln_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z); exp(ln_gamma(z)) == Gamma(z).

    Accepts real or complex arguments.  Poles (non-positive integers) are
    rejected.
    """
    zc = complex(z)
    if _is_nonpositive_integer(zc):
        raise DomainError(f"Gamma pole at z={z}")
    out = sc.loggamma(zc)
    if zc.imag == 0.0 and z == zc.real:
        # keep real inputs real when Gamma(x) > 0
        if zc.real > 0.0:
            return complex(out).real
    return complex(out)


def gamma_fn(z: complex) -> complex:
    """Gamma(z) for real or complex z, via the principal-branch logarithm."""
    lg = ln_gamma(z)
    if isinstance(lg, float):
        return math.exp(lg)
    return np.exp(lg)


def digamma(x: float) -> float:
    """psi(x) = d/dx log Gamma(x) for x > 0."""
    if not x > 0.0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(sc.digamma(x))


def ln_beta(a: float, b: float) -> float:
    """log B(a, b) for a, b > 0."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"ln_beta requires positive arguments, got ({a}, {b})")
    return float(sc.betaln(a, b))


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) for real z < 1.

    The argument range needed here is z = 1 - exp(-y), which spans
    (-inf, 1); scipy applies the standard transformations internally.
    """
    if _is_nonpositive_integer(complex(c)):
        raise DomainError(f"2F1 undefined for non-positive integer c={c}")
    if not z < 1.0:
        raise DomainError(f"gauss_2f1 requires z < 1, got z={z}")
    out = float(sc.hyp2f1(a, b, c, z))
    if not math.isfinite(out):
        raise DomainError(f"2F1 did not converge for (a={a}, b={b}, c={c}, z={z})")
    return out


def arccot(x: float) -> float:
    """(0, pi)-valued arccotangent: strictly decreasing, arccot(0) = pi/2."""
    return math.pi / 2.0 - math.atan(x)
