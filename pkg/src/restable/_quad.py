"""Adaptive quadrature wrappers that surface failures instead of degrading.

All half-line integrals in this package are evaluated after the
substitution u = e^v, which turns power-law endpoints into exponential
decay; callers pass the already-substituted integrand together with the
breakpoints where its analytic behaviour changes.
"""

from __future__ import annotations

import warnings
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import NumericError

DEFAULT_EPSABS = 1e-12
DEFAULT_EPSREL = 1e-10


def integrate_checked(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    points: Sequence[float] = (),
    epsabs: float = DEFAULT_EPSABS,
    epsrel: float = DEFAULT_EPSREL,
    limit: int = 200,
) -> float:
    """Integrate f over (a, b), splitting at interior breakpoints.

    Raises NumericError with the QUADPACK diagnostics when any piece
    fails to converge.
    """
    cuts = [a] + sorted(p for p in points if a < p < b) + [b]
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            out = integrate.quad(
                f, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1
            )
        val, err = out[0], out[1]
        if len(out) > 3:
            raise NumericError(
                f"quadrature failed on ({lo}, {hi}): {out[3]} (value={val}, abserr={err})"
            )
        if not np.isfinite(val):
            raise NumericError(f"quadrature returned non-finite value on ({lo}, {hi})")
        total += val
    return total


def fourier_integral(
    f: Callable[[float], float],
    a: float,
    b: float,
    omega: float,
    kind: str,
    *,
    epsabs: float = 1e-10,
    limit: int = 400,
) -> float:
    """Oscillatory integral of f(y)*cos(omega*y) or f(y)*sin(omega*y) over [a, b]."""
    if kind not in ("cos", "sin"):
        raise ValueError("kind must be 'cos' or 'sin'")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            f, a, b, weight=kind, wvar=omega, epsabs=epsabs, limit=limit, full_output=1
        )
    if len(out) > 3:
        raise NumericError(f"oscillatory quadrature failed: {out[3]}")
    return out[0]


def richardson_limit(
    values: Sequence[float],
    steps: Sequence[float],
    orders: float | Sequence[float],
) -> float:
    """Extrapolate I(eps) -> I(0) given the known expansion orders of the error.

    ``values`` are I(eps) at the given steps (descending); each elimination
    level removes the corresponding entry of ``orders`` (a scalar is reused
    for every level) and the most-refined estimate is returned.
    """
    vals = list(values)
    eps = list(steps)
    if len(vals) != len(eps) or len(vals) < 2:
        raise ValueError("need matching values/steps with at least two entries")
    if isinstance(orders, (int, float)):
        orders = [float(orders)] * (len(vals) - 1)
    orders = list(orders)
    if len(orders) < len(vals) - 1:
        orders = orders + [orders[-1]] * (len(vals) - 1 - len(orders))
    level = 0
    while len(vals) > 1:
        p = orders[level]
        new_vals = []
        for i in range(len(vals) - 1):
            r = (eps[i + 1] / eps[i]) ** p
            new_vals.append((vals[i + 1] - r * vals[i]) / (1.0 - r))
        vals = new_vals
        eps = eps[1:]
        level += 1
    return vals[0]
