"""Slope estimators for the straight-line measurement error model.

Every estimator takes :class:`~obliq.stats.SummaryStats` and returns a
:class:`SlopeFit`.  All of them share the intercept rule
``beta0 = y_bar - beta1 * x_bar`` and, where the slope is admissible, report
the obliqueness ``lam`` at which the slope minimises the oblique error.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import (
    DegenerateStats,
    DenominatorZero,
    HorizontalUndefined,
    ObliqError,
    OutOfRange,
    RhoZero,
    SignAmbiguous,
)
from .oblique import (
    lambda_for_slope,
    lambda_min_deviation,
    oblique_angle,
    solve_slope_for_lambda,
)
from .stats import SummaryStats

__all__ = [
    "Method",
    "SlopeFit",
    "ols_vertical",
    "ols_horizontal",
    "geometric_mean",
    "perpendicular",
    "copas",
    "moment_raw",
    "moment_clamped",
    "mle",
    "minimum_deviation",
    "estimate_all",
]

# Diagnostic notes attached to fits.
TIE = "TIE"
FALLBACK_GM = "FALLBACK_GM"
CLAMPED_LOW = "CLAMPED_LOW"
CLAMPED_HIGH = "CLAMPED_HIGH"
OUTSIDE_RANGE = "OUTSIDE_RANGE"
KAPPA_TILDE = "KAPPA_TILDE"


class Method(str, enum.Enum):
    VER = "ver"
    HOR = "hor"
    GM = "gm"
    PER = "per"
    MLE = "mle"
    COPAS = "copas"
    MOM_RAW = "mom_raw"
    MOM = "mom"
    MD = "md"


@dataclass(frozen=True)
class SlopeFit:
    """One estimator's line.

    `lam` and `theta_deg` are NaN when the slope lies outside the admissible
    interval or the statistics are degenerate.  A fit whose estimator raised
    (see :func:`estimate_all`) has NaN everywhere and the error in `notes`.
    """

    method: Method
    beta1: float
    beta0: float
    lam: float
    theta_deg: float
    notes: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return math.isfinite(self.beta1)


def _fit(method: Method, beta1: float, stats: SummaryStats,
         lam: float | None = None, notes=()) -> SlopeFit:
    notes = tuple(notes)
    if lam is None:
        try:
            lam = lambda_for_slope(beta1, stats)
        except OutOfRange:
            lam = math.nan
            notes += (OUTSIDE_RANGE,)
        except DegenerateStats:
            lam = math.nan
    theta = oblique_angle(lam, beta1) if math.isfinite(lam) else math.nan
    return SlopeFit(method, beta1, stats.y_bar - beta1 * stats.x_bar,
                    lam, theta, notes)


def _vertical_slope(stats: SummaryStats) -> float:
    if not stats.sxx > 0:
        raise DegenerateStats("Sxx = 0: x has no spread")
    return stats.sxy / stats.sxx


def _horizontal_slope(stats: SummaryStats) -> float:
    if stats.sxy == 0:
        raise HorizontalUndefined("Sxy = 0: OLS(x|y) slope is undefined")
    return stats.syy / stats.sxy


def _gm_slope(stats: SummaryStats) -> float:
    if not (stats.sxx > 0 and stats.syy > 0):
        raise DegenerateStats("Sxx and Syy must both be positive")
    if stats.sxy == 0:
        raise SignAmbiguous("Sxy = 0: geometric mean slope has no sign")
    return math.copysign(stats.slope_ratio, stats.sxy)


def ols_vertical(stats: SummaryStats) -> SlopeFit:
    """OLS(y|x): minimise squared vertical errors, ``Sxy / Sxx``."""
    return _fit(Method.VER, _vertical_slope(stats), stats, lam=1.0)


def ols_horizontal(stats: SummaryStats) -> SlopeFit:
    """OLS(x|y) expressed as a y-on-x slope, ``Syy / Sxy``."""
    return _fit(Method.HOR, _horizontal_slope(stats), stats, lam=0.0)


def geometric_mean(stats: SummaryStats) -> SlopeFit:
    """``sign(Sxy) * sqrt(Syy / Sxx)``; its obliqueness is exactly 1/2."""
    return _fit(Method.GM, _gm_slope(stats), stats, lam=0.5)


def _mle_slope(stats: SummaryStats, kappa: float) -> float:
    if kappa < 0 or math.isnan(kappa):
        raise ValueError(f"kappa must be nonnegative, got {kappa}")
    if not (stats.sxx > 0 and stats.syy > 0):
        raise DegenerateStats("Sxx and Syy must both be positive")
    if stats.rho == 0 or stats.sxy == 0:
        raise RhoZero("rho = 0: the likelihood slope is undefined")
    if math.isinf(kappa):
        return stats.sxy / stats.sxx
    sxy = stats.rho * math.sqrt(stats.sxx * stats.syy)
    d = stats.syy - kappa * stats.sxx
    root = math.sqrt(d * d + 4.0 * kappa * sxy * sxy)
    # Both forms are the "+" root of Sxy b^2 - d b - kappa Sxy = 0; pick the one
    # free of cancellation.
    if d >= 0:
        return (d + root) / (2.0 * sxy)
    return 2.0 * kappa * sxy / (root - d)


def mle(stats: SummaryStats, kappa: float) -> SlopeFit:
    """Maximum likelihood slope for a known error-variance ratio.

    Parameters
    ----------
    stats : SummaryStats
    kappa : float
        Assumed ``sigma_tau**2 / sigma_delta**2``.  The limits ``0`` and
        ``inf`` give the OLS(x|y) and OLS(y|x) slopes.

    Returns
    -------
    SlopeFit
        The slope has the sign of ``rho``.
    """
    return _fit(Method.MLE, _mle_slope(stats, kappa), stats)


def perpendicular(stats: SummaryStats) -> SlopeFit:
    """Orthogonal (Adcock) regression; the likelihood slope at ``kappa = 1``."""
    if stats.sxy == 0:
        raise HorizontalUndefined("Sxy = 0: perpendicular slope is undefined")
    return _fit(Method.PER, _mle_slope(stats, 1.0), stats)


def copas(stats: SummaryStats) -> SlopeFit:
    """Copas's switch between the two OLS slopes.

    OLS(y|x) when ``Syy < Sxx`` (i.e. ``|gm| < 1``), OLS(x|y) when
    ``Syy > Sxx``.  The comparison uses centered sums; on a tie the geometric
    mean slope is returned with a ``TIE`` note.
    """
    if stats.syy < stats.sxx:
        return _fit(Method.COPAS, _vertical_slope(stats), stats, lam=1.0)
    if stats.syy > stats.sxx:
        return _fit(Method.COPAS, _horizontal_slope(stats), stats, lam=0.0)
    return _fit(Method.COPAS, _gm_slope(stats), stats, lam=0.5, notes=(TIE,))


def _fourth_moment_slope(stats: SummaryStats) -> tuple[float, tuple[str, ...]]:
    if not (math.isfinite(stats.sxxxy) and math.isfinite(stats.sxyyy)):
        raise DegenerateStats("fourth-order sums are unavailable")
    if stats.sxy == 0:
        raise SignAmbiguous("Sxy = 0: moment slope has no sign")
    # Products of second-order sums carry an extra factor n against the
    # fourth-order sums; dividing by n keeps both sides as moments.
    n = stats.n
    num = stats.sxyyy - 3.0 * stats.sxy * stats.syy / n
    den = stats.sxxxy - 3.0 * stats.sxy * stats.sxx / n
    if den == 0:
        raise DenominatorZero("Sxxxy - 3 Sxy Sxx / n = 0")
    radicand = num / den
    if radicand < 0:
        return _gm_slope(stats), (FALLBACK_GM,)
    return math.copysign(math.sqrt(radicand), stats.sxy), ()


def moment_raw(stats: SummaryStats) -> SlopeFit:
    """Fourth-moment slope ``sqrt((Sxyyy - 3 Sxy Syy/n) / (Sxxxy - 3 Sxy Sxx/n))``.

    Signed by ``Sxy``.  A negative radicand falls back to the geometric mean
    slope (note ``FALLBACK_GM``).  Not clamped, so the slope may lie outside
    the admissible interval, in which case `lam` is NaN.
    """
    beta1, notes = _fourth_moment_slope(stats)
    return _fit(Method.MOM_RAW, beta1, stats, notes=notes)


def moment_clamped(stats: SummaryStats) -> SlopeFit:
    """Fourth-moment slope clamped to the admissible interval [ver, hor]."""
    raw, notes = _fourth_moment_slope(stats)
    ver, hor = _vertical_slope(stats), _horizontal_slope(stats)
    if abs(raw) < abs(ver):
        beta1, notes = ver, notes + (CLAMPED_LOW,)
    elif abs(raw) > abs(hor):
        beta1, notes = hor, notes + (CLAMPED_HIGH,)
    else:
        beta1 = raw
    return _fit(Method.MOM, beta1, stats, notes=notes)


def minimum_deviation(stats: SummaryStats) -> SlopeFit:
    """Oblique slope at the obliqueness that best suits the clamped moment slope.

    The clamped moment slope fixes ``lam = Syy / (Syy + b**2 Sxx)``; the
    estimate is the quartic root at that ``lam``.
    """
    mom = moment_clamped(stats)
    lam = lambda_min_deviation(mom.beta1, stats)
    sol = solve_slope_for_lambda(lam, stats)
    return _fit(Method.MD, sol.beta1, stats, lam=lam, notes=mom.notes)


def _failed(method: Method, exc: Exception) -> SlopeFit:
    nan = math.nan
    return SlopeFit(method, nan, nan, nan, nan,
                    (f"ERROR {type(exc).__name__}: {exc}",))


def estimate_all(stats: SummaryStats,
                 assumed_kappa: float | None = None) -> list[SlopeFit]:
    """Run every estimator, one :class:`SlopeFit` per :class:`Method`.

    Without `assumed_kappa` the likelihood slope uses the moment ratio
    ``kappa~`` evaluated at the clamped moment slope (note ``KAPPA_TILDE``);
    an exact fit, where ``kappa~`` is 0/0, uses ``Syy/Sxx``.
    An estimator that raises contributes a NaN fit carrying the error text.
    """
    from .measurement_error import kappa_tilde

    def _mle() -> SlopeFit:
        if assumed_kappa is not None:
            return mle(stats, assumed_kappa)
        kappa = kappa_tilde(moment_clamped(stats).beta1, stats)
        if math.isnan(kappa):
            # Both error variances vanish (exact fit); every ratio gives one line.
            kappa = stats.syy / stats.sxx
        fit = mle(stats, kappa)
        return SlopeFit(fit.method, fit.beta1, fit.beta0, fit.lam,
                        fit.theta_deg, fit.notes + (KAPPA_TILDE,))

    runners = {
        Method.VER: lambda: ols_vertical(stats),
        Method.HOR: lambda: ols_horizontal(stats),
        Method.GM: lambda: geometric_mean(stats),
        Method.PER: lambda: perpendicular(stats),
        Method.MLE: _mle,
        Method.COPAS: lambda: copas(stats),
        Method.MOM_RAW: lambda: moment_raw(stats),
        Method.MOM: lambda: moment_clamped(stats),
        Method.MD: lambda: minimum_deviation(stats),
    }
    fits = []
    for method, run in runners.items():
        try:
            fits.append(run())
        except (ObliqError, ArithmeticError) as exc:
            fits.append(_failed(method, exc))
    return fits
