"""Madansky's second-moment error variances and the ratio they imply.

For a candidate slope ``b``::

    sigma_delta^2 = Sxx/n - Sxy/(n b)      (x error)
    sigma_tau^2   = Syy/n - b Sxy/n        (y error)

Both are nonnegative exactly when ``b`` lies between the two OLS slopes.
Their ratio ``kappa~(b)`` fed back into the likelihood slope returns ``b``
itself, which :func:`mle_circularity` exposes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidSlope, OutOfRange
from .estimators import (
    Method,
    _gm_slope,
    _horizontal_slope,
    _mle_slope,
    _vertical_slope,
)
from .stats import SummaryStats

__all__ = [
    "ErrorVarianceEstimates",
    "madansky_variances",
    "kappa_tilde",
    "mle_circularity",
    "table3_row",
]

# Variances within this fraction of (Sxx + Syy)/n of zero count as zero.
ADMISSIBLE_TOL = 1e-12


@dataclass(frozen=True)
class ErrorVarianceEstimates:
    sigma_delta_sq: float
    sigma_tau_sq: float
    kappa_tilde: float
    admissible: bool


def _ratio(tau: float, delta: float) -> float:
    if delta == 0.0:
        return math.inf if tau > 0 else math.nan
    return tau / delta


def madansky_variances(beta1: float, stats: SummaryStats) -> ErrorVarianceEstimates:
    """Error variances implied by slope `beta1`.

    ``kappa_tilde`` follows ``0/positive = 0`` and ``positive/0 = inf``.
    Values within round-off of zero are snapped to zero.
    """
    if beta1 == 0 or not math.isfinite(beta1):
        raise InvalidSlope(f"slope must be finite and nonzero, got {beta1}")
    n = stats.n
    delta = stats.sxx / n - stats.sxy / (n * beta1)
    tau = stats.syy / n - beta1 * stats.sxy / n
    slack = ADMISSIBLE_TOL * (stats.sxx + stats.syy) / n
    if abs(delta) <= slack:
        delta = 0.0
    if abs(tau) <= slack:
        tau = 0.0
    admissible = delta >= 0 and tau >= 0
    return ErrorVarianceEstimates(delta, tau, _ratio(tau, delta), admissible)


def kappa_tilde(beta1: float, stats: SummaryStats) -> float:
    """Moment estimate of ``sigma_tau^2 / sigma_delta^2`` at slope `beta1`.

    Equal to ``(Syy - b rho sqrt(Sxx Syy)) / (Sxx - (rho/b) sqrt(Sxx Syy))``.
    Runs from ``inf`` at the OLS(y|x) slope down to ``0`` at the OLS(x|y) slope.

    Raises
    ------
    OutOfRange
        `beta1` is outside the closed admissible interval.
    """
    est = madansky_variances(beta1, stats)
    if not est.admissible:
        raise OutOfRange(f"slope {beta1} gives a negative error variance")
    return est.kappa_tilde


def mle_circularity(beta1: float, stats: SummaryStats) -> float:
    """Likelihood slope evaluated at ``kappa_tilde(beta1)``; returns `beta1`."""
    return _mle_slope(stats, kappa_tilde(beta1, stats))


def table3_row(method: Method | str, stats: SummaryStats,
               kappa: float | None = None) -> ErrorVarianceEstimates:
    """Closed-form error variances at a named estimator's slope.

    Supported methods are VER, HOR, GM, PER and MLE (the last needs `kappa`).
    The GM row uses ``|rho|`` so it also covers negative correlation.
    """
    method = Method(method)
    n = stats.n
    sxx, syy, rho = stats.sxx, stats.syy, stats.rho
    if method is Method.VER:
        _vertical_slope(stats)
        return ErrorVarianceEstimates(0.0, (1 - rho * rho) * syy / n, math.inf, True)
    if method is Method.HOR:
        _horizontal_slope(stats)
        return ErrorVarianceEstimates((1 - rho * rho) * sxx / n, 0.0, 0.0, True)
    if method is Method.GM:
        _gm_slope(stats)
        r = abs(rho)
        return ErrorVarianceEstimates((1 - r) * sxx / n, (1 - r) * syy / n,
                                      syy / sxx, True)
    if method is Method.PER:
        kappa = 1.0
    elif method is Method.MLE:
        if kappa is None:
            raise TypeError("the MLE row needs kappa")
    else:
        raise ValueError(f"no closed form for method {method.name}")
    _mle_slope(stats, kappa)
    one_minus_rho_sq = (1.0 - rho) * (1.0 + rho)
    delta = _smaller_root(sxx, syy / kappa, rho, one_minus_rho_sq) / n
    tau = _smaller_root(kappa * sxx, syy, rho, one_minus_rho_sq) / n
    return ErrorVarianceEstimates(delta, tau, kappa, True)


def _smaller_root(a: float, b: float, rho: float, one_minus_rho_sq: float) -> float:
    """``(a + b - sqrt((a - b)**2 + 4 rho**2 a b)) / 2`` without cancellation."""
    root = math.sqrt((a - b) ** 2 + 4.0 * rho * rho * a * b)
    return 2.0 * a * b * one_minus_rho_sq / (a + b + root)
