"""Seeded Monte Carlo studies of the slope estimators.

The true points are ``X ~ Exp(mu_x)`` (or normal) on the line
``Y = beta0 + beta1 X``; observations are ``x = X + delta``,
``y = Y + tau`` with independent normal errors.

Reproducibility
---------------
Replication ``r`` of a study seeded with ``seed`` draws from
``numpy.random.SeedSequence([seed, r])``, spawned into three PCG64 child
streams (true X, x error, y error).  Uniforms become exponentials by
inverse CDF, ``-mu * log(1 - u)``, and normals come from the Marsaglia
polar method.  A replication is therefore a pure function of
``(seed, r)``: results do not depend on execution order or worker count,
and studies that differ only in error sizes share their underlying draws.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np

from .estimators import (
    CLAMPED_HIGH,
    CLAMPED_LOW,
    FALLBACK_GM,
    TIE,
    Method,
    _mle_slope,
    estimate_all,
)
from .errors import ObliqError
from .oblique import oblique_angle
from .stats import PairedSample, summarize

__all__ = [
    "SimulationConfig",
    "EstimatorSummary",
    "SimulationReport",
    "KappaGrid",
    "generate_sample",
    "polar_normals",
    "run_study",
    "run_kappa_misspecification",
    "DEFAULT_ESTIMATORS",
    "KAPPA_GRID_LABELS",
    "parse_ratio",
]

DEFAULT_ESTIMATORS = (Method.VER, Method.HOR, Method.PER, Method.GM,
                    Method.MOM, Method.COPAS, Method.MD)

# "a:b" reads as the ratio a/b (y-error variance : x-error variance).
KAPPA_GRID_LABELS = ("1:9", "1:4", "4:9", "1:1", "4:4", "9:9", "9:4", "4:1", "9:1")


def parse_ratio(text: str) -> float:
    """``"4:9"``, ``"4/9"`` or ``"0.444"`` as a float."""
    text = str(text).strip()
    for sep in (":", "/"):
        if sep in text:
            a, b = text.split(sep)
            return float(a) / float(b)
    return float(text)


@dataclass(frozen=True)
class SimulationConfig:
    """Monte Carlo protocol.

    Zero error standard deviations are allowed (exact line) but every
    estimator needs some spread in the data.
    """

    sigma_delta: float
    sigma_tau: float
    distribution: str = "exponential"
    mu_x: float = 10.0
    sigma_x: float | None = None
    beta0: float = 0.0
    beta1: float = 1.0
    n: int = 100
    replications: int = 1000
    seed: int = 0
    assumed_kappas: tuple[float, ...] = ()
    estimators: tuple[Method, ...] = DEFAULT_ESTIMATORS

    def __post_init__(self):
        object.__setattr__(self, "estimators",
                           tuple(Method(m) for m in self.estimators))
        object.__setattr__(self, "assumed_kappas",
                           tuple(float(k) for k in self.assumed_kappas))
        checks = {
            "distribution": self.distribution in ("exponential", "normal"),
            "mu_x": self.distribution == "normal" or self.mu_x > 0,
            "sigma_x": self.sigma_x is None or self.sigma_x > 0,
            "sigma_delta": self.sigma_delta >= 0,
            "sigma_tau": self.sigma_tau >= 0,
            "n": self.n >= 3,
            "replications": self.replications >= 1,
            "seed": 0 <= self.seed < 2 ** 64,
            "assumed_kappas": all(k > 0 for k in self.assumed_kappas),
            "estimators": len(self.estimators) > 0,
        }
        for key, ok in checks.items():
            if not ok:
                raise ValueError(f"invalid {key}: {getattr(self, key)!r}")
        if self.distribution == "normal" and self.sigma_x is None:
            raise ValueError("invalid sigma_x: required for a normal X")

    @property
    def kappa(self) -> float:
        """True error ratio ``sigma_tau**2 / sigma_delta**2``."""
        if self.sigma_delta == 0:
            return math.inf
        return self.sigma_tau ** 2 / self.sigma_delta ** 2


def polar_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    """Standard normals by the Marsaglia polar method."""
    out = np.empty(size)
    filled = 0
    while filled < size:
        pairs = (size - filled + 1) // 2
        v = 2.0 * rng.random((pairs + pairs // 4 + 4, 2)) - 1.0
        s = np.einsum("ij,ij->i", v, v)
        keep = (s > 0.0) & (s < 1.0)
        v, s = v[keep], s[keep]
        z = (v * np.sqrt(-2.0 * np.log(s) / s)[:, None]).ravel()
        take = min(z.size, size - filled)
        out[filled:filled + take] = z[:take]
        filled += take
    return out


def _streams(seed: int, index: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence([seed, index]).spawn(3)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def generate_sample(config: SimulationConfig, replication_index: int) -> PairedSample:
    """Draw one contaminated sample; a pure function of (seed, index)."""
    g_x, g_delta, g_tau = _streams(config.seed, replication_index)
    n = config.n
    if config.distribution == "exponential":
        true_x = -config.mu_x * np.log1p(-g_x.random(n))
    else:
        true_x = config.mu_x + config.sigma_x * polar_normals(g_x, n)
    true_y = config.beta0 + config.beta1 * true_x
    xs = true_x + config.sigma_delta * polar_normals(g_delta, n)
    ys = true_y + config.sigma_tau * polar_normals(g_tau, n)
    return PairedSample(xs, ys)


@dataclass(frozen=True)
class EstimatorSummary:
    """Aggregate performance of one estimator over the replications.

    `mse_e3` is the MSE in units of 1e-3 (``mse * 1000``); `theta_deg` is the
    projection angle at (`mean_lambda`, `mean_slope`).
    """

    method: str
    mean_slope: float
    percent_bias: float
    mse: float
    mean_lambda: float
    mean_theta_deg: float
    n_ok: int

    @property
    def mse_e3(self) -> float:
        return 1e3 * self.mse


@dataclass(frozen=True)
class SimulationReport:
    config: SimulationConfig
    estimators: dict[str, EstimatorSummary]
    ols_star_mse: float
    ols_star_abs_bias: float
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ols_star_mse_e3(self) -> float:
        return 1e3 * self.ols_star_mse

    def __getitem__(self, method) -> EstimatorSummary:
        return self.estimators[Method(method).value]

    def as_rows(self) -> list[dict]:
        """One dict per estimator plus the OLS* average row, in table order."""
        rows = []
        for key, est in self.estimators.items():
            rows.append({
                "estimator": key, "mean_slope": est.mean_slope,
                "percent_bias": est.percent_bias, "mse": est.mse,
                "mse_e3": est.mse_e3, "mean_lambda": est.mean_lambda,
                "mean_theta_deg": est.mean_theta_deg, "n_ok": est.n_ok,
            })
            if key == Method.VER.value and math.isfinite(self.ols_star_mse):
                rows.append({
                    "estimator": "ols*", "mean_slope": math.nan,
                    "percent_bias": self.ols_star_abs_bias,
                    "mse": self.ols_star_mse, "mse_e3": self.ols_star_mse_e3,
                    "mean_lambda": math.nan, "mean_theta_deg": math.nan,
                    "n_ok": est.n_ok,
                })
        return rows

    def metadata(self) -> dict:
        cfg = asdict(self.config)
        cfg["estimators"] = [m.value for m in self.config.estimators]
        cfg["assumed_kappas"] = list(self.config.assumed_kappas)
        return {"config": cfg, "counts": dict(self.counts)}


_ALL_METHODS = tuple(Method)


def _replicate(config: SimulationConfig, index: int):
    """Slopes, obliqueness and notes of every estimator for one replication."""
    stats = summarize(generate_sample(config, index))
    fits = estimate_all(stats, assumed_kappa=config.kappa)
    slopes = np.array([f.beta1 for f in fits])
    lams = np.array([f.lam for f in fits])
    notes = {f.method.value: f.notes for f in fits}
    return slopes, lams, notes


def _map(fn, config, indices, workers):
    if workers <= 1:
        return [fn(config, i) for i in indices]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(indices) // (4 * workers))
        return list(pool.map(fn, [config] * len(indices), indices, chunksize=chunk))


def run_study(config: SimulationConfig, workers: int = 1) -> SimulationReport:
    """Run all replications and aggregate bias, MSE, obliqueness and angle.

    Replications are independent; ``workers > 1`` spreads them over processes
    without changing any result.
    """
    indices = list(range(config.replications))
    results = _map(_replicate, config, indices, workers)
    slopes = np.vstack([r[0] for r in results])
    lams = np.vstack([r[1] for r in results])
    col = {m: j for j, m in enumerate(_ALL_METHODS)}
    truth = config.beta1

    counts = {"fallback_gm": 0, "clamped_low": 0, "clamped_high": 0,
              "copas_tie": 0}
    for _, _, notes in results:
        mom = notes[Method.MOM.value]
        counts["fallback_gm"] += FALLBACK_GM in mom
        counts["clamped_low"] += CLAMPED_LOW in mom
        counts["clamped_high"] += CLAMPED_HIGH in mom
        counts["copas_tie"] += TIE in notes[Method.COPAS.value]

    summaries = {}
    for method in config.estimators:
        b = slopes[:, col[method]]
        ok = np.isfinite(b)
        counts[f"failed_{method.value}"] = int((~ok).sum())
        b = b[ok]
        lam = lams[ok, col[method]]
        mean_slope = float(b.mean()) if b.size else math.nan
        mean_lam = float(np.nanmean(lam)) if np.isfinite(lam).any() else math.nan
        summaries[method.value] = EstimatorSummary(
            method=method.value,
            mean_slope=mean_slope,
            percent_bias=100.0 * (mean_slope - truth) / truth,
            mse=float(np.mean((b - truth) ** 2)) if b.size else math.nan,
            mean_lambda=mean_lam,
            mean_theta_deg=oblique_angle(mean_lam, mean_slope),
            n_ok=int(ok.sum()),
        )

    ver, hor = summaries.get("ver"), summaries.get("hor")
    if ver and hor:
        ols_mse = 0.5 * (ver.mse + hor.mse)
        ols_bias = 0.5 * (abs(ver.percent_bias) + abs(hor.percent_bias))
    else:
        ols_mse = ols_bias = math.nan
    return SimulationReport(config, summaries, ols_mse, ols_bias, counts)


@dataclass(frozen=True)
class KappaGrid:
    """Percent bias of the likelihood slope; rows assumed, columns true kappa.

    `columns` holds the true ``(sigma_delta**2, sigma_tau**2)`` pairs.
    """

    assumed_kappas: tuple[float, ...]
    columns: tuple[tuple[float, float], ...]
    percent_bias: np.ndarray
    row_labels: tuple[str, ...] = ()
    column_labels: tuple[str, ...] = ()


def _mle_column(config: SimulationConfig, index: int) -> np.ndarray:
    stats = summarize(generate_sample(config, index))
    out = np.empty(len(config.assumed_kappas))
    for j, kappa in enumerate(config.assumed_kappas):
        try:
            out[j] = _mle_slope(stats, kappa)
        except ObliqError:
            out[j] = math.nan
    return out


def _labels_to_columns(labels: Sequence[str]) -> tuple[tuple[float, float], ...]:
    cols = []
    for lab in labels:
        tau_var, delta_var = (float(v) for v in lab.split(":"))
        cols.append((delta_var, tau_var))
    return tuple(cols)


def run_kappa_misspecification(
    config: SimulationConfig,
    error_variances: Sequence[tuple[float, float]] | None = None,
    workers: int = 1,
) -> KappaGrid:
    """Bias of the likelihood slope when the assumed ratio is wrong.

    Parameters
    ----------
    config : SimulationConfig
        Supplies the design and ``assumed_kappas`` (the rows).  Its own error
        SDs are replaced column by column.
    error_variances : sequence of (sigma_delta**2, sigma_tau**2), optional
        True error variances, one column each.  Defaults to the nine
        combinations of {1, 4, 9} ordered by true kappa.

    Every column reuses the same underlying draws, and within a replication
    the likelihood slope falls as the assumed ratio rises, so each column of
    the grid is monotone.
    """
    if not config.assumed_kappas:
        raise ValueError("invalid assumed_kappas: the grid is empty")
    labels: tuple[str, ...] = ()
    if error_variances is None:
        labels = KAPPA_GRID_LABELS
        error_variances = _labels_to_columns(labels)
    error_variances = tuple((float(d), float(t)) for d, t in error_variances)
    bias = np.empty((len(config.assumed_kappas), len(error_variances)))
    indices = list(range(config.replications))
    for j, (delta_var, tau_var) in enumerate(error_variances):
        cfg = replace(config, sigma_delta=math.sqrt(delta_var),
                      sigma_tau=math.sqrt(tau_var))
        slopes = np.vstack(_map(_mle_column, cfg, indices, workers))
        bias[:, j] = 100.0 * (np.nanmean(slopes, axis=0) - cfg.beta1) / cfg.beta1
    return KappaGrid(config.assumed_kappas, error_variances, bias,
                     column_labels=labels)
