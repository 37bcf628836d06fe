"""Oblique-error geometry.

A line ``y = b0 + b1*x`` is fitted by minimising a weighted mix of squared
horizontal and squared vertical residuals,

    SSE(b0, b1, lam) = (1 - lam)**2 * Syy * SSE_h + lam**2 * Sxx * SSE_v,

so ``lam = 1`` is OLS(y|x), ``lam = 0`` is OLS(x|y) and everything in between
is an oblique projection.  Stationary slopes are roots of a quartic; this
module evaluates it, extracts the relevant root and maps slopes back to the
obliqueness ``lam``.

Internally the quartic is solved in the dimensionless slope
``u = b1 * sqrt(Sxx / Syy)``, where it reads

    g(u) = lam**2 * u**3 * (u - rho) - (1 - lam)**2 * (1 - rho*u)

and the admissible root lies in ``[rho, 1/rho]`` for ``rho > 0``.  Working in
``u`` makes the solver exactly equivariant under rescaling of x and y.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateStats, InvalidSlope, NoConvergence, OutOfRange
from .stats import SummaryStats

__all__ = [
    "ObliqueSolution",
    "sse_oblique",
    "p4_eval",
    "solve_slope_for_lambda",
    "lambda_for_slope",
    "lambda_min_deviation",
    "oblique_angle",
]

RTOL = 1e-12
MAXITER = 200
# Relative slack when deciding whether a slope sits on an admissible endpoint.
BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class ObliqueSolution:
    lam: float
    beta1: float
    beta0: float
    theta_deg: float


def _require_spread(stats: SummaryStats) -> None:
    if not (stats.sxx > 0 and stats.syy > 0):
        raise DegenerateStats("Sxx and Syy must both be positive")


def sse_oblique(beta0: float | None, beta1: float, lam: float,
                stats: SummaryStats) -> float:
    """Oblique sum of squared errors at ``(beta0, beta1, lam)``.

    ``beta0=None`` uses the optimal intercept ``y_bar - beta1*x_bar``, giving
    the reduced objective
    ``((1-lam)**2 Syy / b1**2 + lam**2 Sxx) (Syy - 2 b1 Sxy + b1**2 Sxx)``.
    """
    if beta1 == 0:
        raise InvalidSlope("horizontal error is undefined for a zero slope")
    sse_v = stats.syy - 2.0 * beta1 * stats.sxy + beta1 * beta1 * stats.sxx
    if beta0 is not None:
        offset = stats.y_bar - beta0 - beta1 * stats.x_bar
        sse_v += stats.n * offset * offset
    weight = (1.0 - lam) ** 2 * stats.syy / (beta1 * beta1) + lam * lam * stats.sxx
    return float(max(0.0, weight * sse_v))


def p4_eval(beta1, lam: float, stats: SummaryStats):
    """Evaluate the stationarity quartic in the slope (vectorised over `beta1`)."""
    _require_spread(stats)
    r = stats.sxx / stats.syy
    b = np.asarray(beta1, dtype=float)
    out = (lam * lam * math.sqrt(r) * r * b ** 4
           - lam * lam * r * stats.rho * b ** 3
           + (1.0 - lam) ** 2 * stats.rho * b
           - (1.0 - lam) ** 2 / math.sqrt(r))
    return out if out.ndim else float(out)


def _g(u: float, lam: float, rho: float) -> float:
    return lam * lam * u ** 3 * (u - rho) - (1.0 - lam) ** 2 * (1.0 - rho * u)


def _unit_root(lam: float, rho: float) -> float:
    """Root of ``g`` on ``[rho, 1/rho]`` for ``0 < rho <= 1``."""
    lo, hi = rho, 1.0 / rho
    g_lo, g_hi = _g(lo, lam, rho), _g(hi, lam, rho)
    if g_lo >= 0.0:
        return lo
    if g_hi <= 0.0:
        return hi
    try:
        u, info = brentq(_g, lo, hi, args=(lam, rho), xtol=np.finfo(float).tiny,
                         rtol=RTOL, maxiter=MAXITER, full_output=True, disp=False)
    except RuntimeError as exc:  # pragma: no cover - bracket is guaranteed
        raise NoConvergence(str(exc)) from exc
    if not info.converged:  # pragma: no cover
        raise NoConvergence(f"root search stopped after {info.iterations} steps")
    return u


def solve_slope_for_lambda(lam: float, stats: SummaryStats) -> ObliqueSolution:
    """Slope minimising the oblique error at obliqueness `lam`.

    The root carrying the sign of ``Sxy`` is returned; it always lies between
    the two OLS slopes.  ``lam`` equal to 0 or 1 short-circuits to
    ``Syy/Sxy`` and ``Sxy/Sxx``.

    Raises
    ------
    DegenerateStats
        ``Sxx`` or ``Syy`` is zero, or ``Sxy`` is zero.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    _require_spread(stats)
    if stats.sxy == 0.0:
        raise DegenerateStats("Sxy = 0: the oblique slope has no sign")
    if lam == 1.0:
        beta1 = stats.sxy / stats.sxx
    elif lam == 0.0:
        beta1 = stats.syy / stats.sxy
    else:
        rho = abs(stats.rho)
        u = _unit_root(lam, rho)
        beta1 = math.copysign(u * stats.slope_ratio, stats.sxy)
    return ObliqueSolution(
        lam=lam, beta1=beta1, beta0=stats.y_bar - beta1 * stats.x_bar,
        theta_deg=oblique_angle(lam, beta1),
    )


def lambda_for_slope(beta1: float, stats: SummaryStats) -> float:
    """Obliqueness at which `beta1` is the optimal oblique slope.

    Inverts :func:`solve_slope_for_lambda` in closed form.  With
    ``u = |beta1| sqrt(Sxx/Syy)``,
    ``lam / (1 - lam) = sqrt((1 - |rho| u) / (u**3 (u - |rho|)))``.

    Raises
    ------
    OutOfRange
        `beta1` is not between the two OLS slopes on the sign of ``Sxy``.
    """
    _require_spread(stats)
    if stats.sxy == 0.0:
        raise DegenerateStats("Sxy = 0: no admissible slopes")
    if beta1 == 0.0 or math.copysign(1.0, beta1) != math.copysign(1.0, stats.sxy):
        raise OutOfRange(f"slope {beta1} has the wrong sign")
    rho = abs(stats.rho)
    u = abs(beta1) / stats.slope_ratio
    t1 = u ** 3 * (u - rho)
    t2 = 1.0 - rho * u
    if t1 < 0.0:
        if u < rho * (1.0 - BOUNDARY_TOL):
            raise OutOfRange(f"slope {beta1} is below the OLS(y|x) slope")
        t1 = 0.0
    if t2 < 0.0:
        if rho * u > 1.0 + BOUNDARY_TOL:
            raise OutOfRange(f"slope {beta1} is above the OLS(x|y) slope")
        t2 = 0.0
    s1, s2 = math.sqrt(t1), math.sqrt(t2)
    if s1 + s2 == 0.0:
        # |rho| = 1: every obliqueness gives the same line.
        return 0.5
    return s2 / (s1 + s2)


def lambda_min_deviation(beta1: float, stats: SummaryStats) -> float:
    """Obliqueness minimising the oblique error for a fixed slope.

    ``Syy / (Syy + beta1**2 Sxx)``.
    """
    if stats.sxx + stats.syy <= 0:
        raise DegenerateStats("Sxx and Syy are both zero")
    if math.isinf(beta1):
        return 0.0
    return stats.syy / (stats.syy + beta1 * beta1 * stats.sxx)


def oblique_angle(lam, beta1):
    """Angle in degrees of the oblique projection at obliqueness `lam`.

    Measured at the oblique foot between the ray back to the data point and
    the fitted line, oriented so a slope-1 line gives 45 deg for the vertical
    projection, 90 deg at ``lam = 1/2`` and 135 deg for the horizontal one.
    Negative slopes use ``|beta1|``.  Vectorised over both arguments.
    """
    lam = np.asarray(lam, dtype=float)
    b = np.abs(np.asarray(beta1, dtype=float))
    num = lam * b * b - (1.0 - lam)
    den = np.sqrt((1.0 - lam) ** 2 + lam * lam * b * b) * np.sqrt(1.0 + b * b)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = np.degrees(np.arccos(np.clip(num / den, -1.0, 1.0)))
    return theta if theta.ndim else float(theta)
