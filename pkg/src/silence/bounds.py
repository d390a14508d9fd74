"""Gauss-inequality bounds on the rate-distortion trade-off, and exact curves.

Silence intervals here are symmetric about the mode: [mode - k, mode + k].
A sample is sent whenever X leaves the interval, so the sampling rate is
the outside mass; the mean distortion is mass * conditional variance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._io import csv_text
from .conditional import conditional_summary
from .density import Density, Interval, make_density, mass
from .errors import InvalidParameterError

TRADEOFF_HEADER = ("source", "k", "rate", "distortion")
BRANCH = 2.0 / math.sqrt(3.0)


class CurveSource(enum.Enum):
    GAUSS_BOUND = "GaussBound"
    EXACT_UNIFORM = "ExactUniform"
    EXACT_GAUSSIAN = "ExactGaussian"
    PERIODIC = "Periodic"


@dataclass(frozen=True)
class RateDistortionPoint:
    k: float
    rate: float
    distortion: float
    source: CurveSource


def tau(d: Density) -> float:
    """sqrt((mean - mode)^2 + variance), the scale in the Gauss inequality."""
    return math.sqrt((d.mean - d.mode) ** 2 + d.variance)


def _check(k: float, tau_: float) -> None:
    if not k >= 0.0:
        raise InvalidParameterError(f"k must be non-negative, got {k}")
    if not tau_ > 0.0:
        raise InvalidParameterError(f"tau must be positive, got {tau_}")


def gauss_rate_bound(k: float, tau_: float) -> float:
    """Upper bound on P(|X - mode| > k) for a unimodal density."""
    _check(k, tau_)
    if k >= BRANCH * tau_:
        r = 4.0 / 9.0 * tau_ * tau_ / (k * k)
    else:
        r = 1.0 - k / (math.sqrt(3.0) * tau_)
    return min(r, 1.0)


def gauss_distortion_bound(k: float, tau_: float, sigma2: float) -> float:
    """Rate bound times min(sigma^2, k^2 / 3), branchwise."""
    _check(k, tau_)
    if not sigma2 > 0.0:
        raise InvalidParameterError(f"sigma2 must be positive, got {sigma2}")
    cap = min(sigma2, k * k / 3.0)
    if k >= BRANCH * tau_:
        return 4.0 / 9.0 * tau_ * tau_ / (k * k) * cap
    return (1.0 - k / (math.sqrt(3.0) * tau_)) * cap


def symmetric_silence_point(d: Density, k: float, source: CurveSource) -> RateDistortionPoint:
    iv = Interval(d.mode - k, d.mode + k)
    m = mass(d, iv)
    if m <= 0.0:
        return RateDistortionPoint(k, 1.0, 0.0, source)
    # Silence about the mode of a symmetric density: the estimate is the mode.
    s = conditional_summary(d, iv, mass_floor=0.0)
    return RateDistortionPoint(k, max(0.0, 1.0 - m), m * s.cond_variance, source)


def exact_curve(d: Density, kind: str, grid: Sequence[float],
                source: CurveSource | None = None) -> list[RateDistortionPoint]:
    """Exact rate-distortion points.

    ``kind="symmetric-silence"`` treats ``grid`` as half-widths k.
    ``kind="periodic"`` treats ``grid`` as sampling rates r; sending a
    fraction r of IID ticks leaves error variance sigma^2 on the rest.
    """
    if kind == "symmetric-silence":
        src = source or CurveSource.EXACT_GAUSSIAN
        return [symmetric_silence_point(d, float(k), src) for k in grid]
    if kind == "periodic":
        pts = []
        for r in grid:
            if not 0.0 <= r <= 1.0:
                raise InvalidParameterError(f"rate must lie in [0, 1], got {r}")
            pts.append(RateDistortionPoint(math.nan, float(r), (1.0 - r) * d.variance,
                                           CurveSource.PERIODIC))
        return pts
    raise InvalidParameterError(f"unknown curve kind {kind!r}")


def default_k_grid(k_min: float = 0.0, k_max: float = 4.0, steps: int = 401) -> np.ndarray:
    return np.linspace(k_min, k_max, steps)


def fig6_sweep(k_grid: Iterable[float]) -> dict[CurveSource, list[RateDistortionPoint]]:
    """The four unit-variance curves; the Gauss branch point k = 2/sqrt(3) is always included.

    Periodic points are evaluated at the exact Gaussian rate of each k, so
    row i of every curve refers to the same grid k.
    """
    ks = np.unique(np.append(np.asarray(list(k_grid), dtype=float), BRANCH))
    if ks.size == 0 or ks[0] < 0.0:
        raise InvalidParameterError("k grid must be non-empty and non-negative")
    gauss = make_density("gaussian", {"mu": 0.0, "sigma": 1.0})
    unif = make_density("uniform", {"lo": -math.sqrt(3.0), "hi": math.sqrt(3.0)})
    t = 1.0  # sigma = tau = 1 for symmetric unit-variance densities
    curves = {
        CurveSource.GAUSS_BOUND: [RateDistortionPoint(float(k), gauss_rate_bound(k, t),
                                                      gauss_distortion_bound(k, t, 1.0),
                                                      CurveSource.GAUSS_BOUND) for k in ks],
        CurveSource.EXACT_UNIFORM: exact_curve(unif, "symmetric-silence", ks, CurveSource.EXACT_UNIFORM),
        CurveSource.EXACT_GAUSSIAN: exact_curve(gauss, "symmetric-silence", ks, CurveSource.EXACT_GAUSSIAN),
    }
    curves[CurveSource.PERIODIC] = [
        RateDistortionPoint(p.k, p.rate, (1.0 - p.rate) * gauss.variance, CurveSource.PERIODIC)
        for p in curves[CurveSource.EXACT_GAUSSIAN]
    ]
    return curves


def fig6_csv(curves: dict[CurveSource, list[RateDistortionPoint]]) -> str:
    rows = [(src.value, p.k, p.rate, p.distortion) for src in CurveSource for p in curves[src]]
    return csv_text(TRADEOFF_HEADER, rows)


def matched_rate_ratio(points: Sequence[RateDistortionPoint], sigma2: float = 1.0,
                       r_lo: float = 0.3, r_hi: float = 0.9, samples: int = 601) -> float:
    """Max over rates in [r_lo, r_hi] of curve distortion / periodic distortion.

    The curve is linearly interpolated in rate, since its grid is in k.
    """
    rates = np.array([p.rate for p in points])
    dist = np.array([p.distortion for p in points])
    order = np.argsort(rates)
    rates, dist = rates[order], dist[order]
    if rates[0] > r_lo or rates[-1] < r_hi:
        raise InvalidParameterError("curve does not cover the requested rate range")
    grid = np.linspace(r_lo, r_hi, samples)
    return float(np.max(np.interp(grid, rates, dist) / ((1.0 - grid) * sigma2)))
