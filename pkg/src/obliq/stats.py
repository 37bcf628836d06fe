"""Sufficient statistics of a paired sample.

Every estimator in the package consumes a :class:`SummaryStats`; raw data
only pass through :func:`summarize`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateSample

__all__ = [
    "PairedSample",
    "SummaryStats",
    "Diagnostics",
    "summarize",
    "validate",
]


@dataclass(frozen=True)
class PairedSample:
    """Observed pairs ``(x_i, y_i)``; both coordinates may carry error."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float).ravel()
        ys = np.asarray(self.ys, dtype=float).ravel()
        if xs.shape != ys.shape:
            raise DegenerateSample(
                f"xs and ys differ in length ({xs.size} != {ys.size})"
            )
        if xs.size < 3:
            raise DegenerateSample(f"need at least 3 pairs, got {xs.size}")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise DegenerateSample("sample contains non-finite values")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return int(self.xs.size)


@dataclass(frozen=True)
class SummaryStats:
    """Centered second- and fourth-order sums of a paired sample.

    Attributes
    ----------
    n : int
        Number of pairs.
    x_bar, y_bar : float
        Sample means.
    sxx, syy, sxy : float
        ``sum((x - x_bar)**2)``, ``sum((y - y_bar)**2)`` and
        ``sum((x - x_bar)*(y - y_bar))``.
    rho : float
        Sample correlation, stored once so every formula uses the same value.
    sxxxy, sxyyy : float
        ``sum((x - x_bar)**3 * (y - y_bar))`` and
        ``sum((x - x_bar) * (y - y_bar)**3)``; NaN when unknown.
    """

    n: int
    x_bar: float
    y_bar: float
    sxx: float
    syy: float
    sxy: float
    rho: float
    sxxxy: float = math.nan
    sxyyy: float = math.nan

    @classmethod
    def from_moments(
        cls,
        sxx: float,
        syy: float,
        sxy: float | None = None,
        *,
        rho: float | None = None,
        n: int = 1,
        x_bar: float = 0.0,
        y_bar: float = 0.0,
        sxxxy: float = math.nan,
        sxyyy: float = math.nan,
    ) -> "SummaryStats":
        """Build statistics from sums given directly rather than from data.

        Exactly one of `sxy` and `rho` must be supplied.  `n` only matters
        for the per-observation error variances; every slope and every
        variance ratio is independent of it.
        """
        if (sxy is None) == (rho is None):
            raise TypeError("give exactly one of sxy and rho")
        sxx, syy = float(sxx), float(syy)
        if sxx < 0 or syy < 0:
            raise DegenerateSample("sums of squares must be nonnegative")
        if sxy is None:
            sxy = float(rho) * math.sqrt(sxx * syy)
        rho = _correlation(sxx, syy, float(sxy)) if rho is None else float(rho)
        return cls(
            n=int(n), x_bar=float(x_bar), y_bar=float(y_bar),
            sxx=sxx, syy=syy, sxy=float(sxy), rho=rho,
            sxxxy=float(sxxxy), sxyyy=float(sxyyy),
        )

    @property
    def slope_ratio(self) -> float:
        """``sqrt(syy / sxx)``, the magnitude of the geometric mean slope."""
        return math.sqrt(self.syy / self.sxx)

    def scaled(self, c: float, d: float) -> "SummaryStats":
        """Statistics of the sample mapped through ``x -> c*x, y -> d*y``."""
        return SummaryStats(
            n=self.n, x_bar=c * self.x_bar, y_bar=d * self.y_bar,
            sxx=c * c * self.sxx, syy=d * d * self.syy, sxy=c * d * self.sxy,
            rho=self.rho,
            sxxxy=c ** 3 * d * self.sxxxy, sxyyy=c * d ** 3 * self.sxyyy,
        )

    def reflected(self) -> "SummaryStats":
        """Statistics of the sample with ``y -> -y``."""
        return SummaryStats(
            n=self.n, x_bar=self.x_bar, y_bar=-self.y_bar,
            sxx=self.sxx, syy=self.syy, sxy=-self.sxy, rho=-self.rho,
            sxxxy=-self.sxxxy, sxyyy=-self.sxyyy,
        )


def _correlation(sxx: float, syy: float, sxy: float) -> float:
    denom = math.sqrt(sxx * syy)
    if denom == 0.0:
        return math.nan
    # Round-off can push |rho| a hair past one for collinear data.
    return min(1.0, max(-1.0, sxy / denom))


def summarize(sample: PairedSample | tuple[Sequence[float], Sequence[float]]
              ) -> SummaryStats:
    """Compute :class:`SummaryStats` with two-pass centered sums.

    Parameters
    ----------
    sample : PairedSample or (xs, ys)
        At least three finite pairs.

    Raises
    ------
    DegenerateSample
        Fewer than three pairs, mismatched lengths or non-finite values.
    """
    if not isinstance(sample, PairedSample):
        sample = PairedSample(*sample)
    x, y = sample.xs, sample.ys
    x_bar = math.fsum(x) / x.size
    y_bar = math.fsum(y) / y.size
    dx = x - x_bar
    dy = y - y_bar
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    sxy = float(dx @ dy)
    dx2 = dx * dx
    dy2 = dy * dy
    return SummaryStats(
        n=sample.n, x_bar=x_bar, y_bar=y_bar,
        sxx=sxx, syy=syy, sxy=sxy, rho=_correlation(sxx, syy, sxy),
        sxxxy=float((dx2 * dx) @ dy), sxyyy=float(dx @ (dy2 * dy)),
    )


COLLINEAR_TOL = 1e-12


class Diagnostics(enum.Flag):
    """Degeneracy flags raised by :func:`validate`."""

    NONE = 0
    HORIZONTAL_UNDEFINED = enum.auto()
    NO_X_VARIATION = enum.auto()
    NO_Y_VARIATION = enum.auto()
    COLLINEAR = enum.auto()


def validate(stats: SummaryStats) -> Diagnostics:
    flags = Diagnostics.NONE
    if stats.sxy == 0.0:
        flags |= Diagnostics.HORIZONTAL_UNDEFINED
    if stats.sxx == 0.0:
        flags |= Diagnostics.NO_X_VARIATION
    if stats.syy == 0.0:
        flags |= Diagnostics.NO_Y_VARIATION
    if stats.sxx > 0 and stats.syy > 0 and abs(stats.rho) >= 1.0 - COLLINEAR_TOL:
        flags |= Diagnostics.COLLINEAR
    return flags
