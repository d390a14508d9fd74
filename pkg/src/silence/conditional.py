"""Statistics of a density restricted to an interval, and the sliding family.

The sliding family for a mass ``eta`` is the set of intervals [a, b(a)]
with ``mass([a, b(a)]) = eta``, parametrized by the left end ``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._io import csv_text
from ._numerics import integrate_piecewise
from .density import Density, Interval, mass
from .errors import InfeasibleError, InvalidParameterError, NullMassError

MASS_FLOOR = 1e-12
EPS_SCAN = 1e-6
LOW_DENSITY_FLAG = 1e-14
_MOMENT_RTOL = 1e-12

SCAN_HEADER = ("a", "b", "mass", "cond_mean", "cond_median", "midpoint",
               "cond_variance", "cond_mad")


@dataclass(frozen=True)
class ConditionalSummary:
    interval: Interval
    mass: float
    cond_mean: float
    cond_median: float
    cond_variance: float
    cond_mad: float
    midpoint: float
    flagged: bool = False  # pdf at the left end is (numerically) zero

    def row(self) -> tuple:
        iv = self.interval
        return (iv.lo, iv.hi, self.mass, self.cond_mean, self.cond_median,
                self.midpoint, self.cond_variance, self.cond_mad)


def clip_to_span(d: Density, iv: Interval) -> Interval:
    """Intersect with the support, replacing infinite ends by the span edges."""
    clipped = iv.intersect(d.support)
    lo = clipped.lo if math.isfinite(clipped.lo) else d.span.lo
    hi = clipped.hi if math.isfinite(clipped.hi) else d.span.hi
    return Interval(min(lo, hi), hi)


def conditional_median(d: Density, iv: Interval, m: float | None = None) -> float:
    """Point splitting the mass of ``iv`` in two equal halves."""
    if m is None:
        m = mass(d, iv)
    fa = d.cdf(iv.lo)
    if fa <= 0.5:
        x = d.quantile_or_edge(fa + 0.5 * m)
    else:
        x = d.quantile_or_edge(1.0 - (d.sf(iv.lo) - 0.5 * m))
    return min(max(x, iv.lo), iv.hi)


def conditional_mean(d: Density, iv: Interval, m: float | None = None) -> float:
    if m is None:
        m = mass(d, iv)
    c = iv.midpoint
    f = d.pdf1
    offset = integrate_piecewise(lambda t: (t - c) * f(t), iv.lo, iv.hi, d.breakpoints,
                                 epsabs=0.0, epsrel=_MOMENT_RTOL)
    return min(max(c + offset / m, iv.lo), iv.hi)


def conditional_variance(d: Density, iv: Interval, center: float, m: float) -> float:
    f = d.pdf1
    v = integrate_piecewise(lambda t: (t - center) ** 2 * f(t), iv.lo, iv.hi, d.breakpoints,
                            epsabs=0.0, epsrel=_MOMENT_RTOL)
    return max(v / m, 0.0)


def conditional_mad(d: Density, iv: Interval, center: float, m: float) -> float:
    f = d.pdf1
    pts = tuple(d.breakpoints) + (center,)
    v = integrate_piecewise(lambda t: abs(t - center) * f(t), iv.lo, iv.hi, pts,
                            epsabs=0.0, epsrel=_MOMENT_RTOL)
    return max(v / m, 0.0)


def conditional_summary(d: Density, iv: Interval, mass_floor: float = MASS_FLOOR) -> ConditionalSummary:
    """Mass, conditional mean/median/variance/MAD and midpoint of ``iv``."""
    iv = clip_to_span(d, iv)
    m = mass(d, iv)
    if not m > mass_floor:
        raise NullMassError(f"interval [{iv.lo}, {iv.hi}] has mass {m} <= {mass_floor}")
    mean = conditional_mean(d, iv, m)
    med = conditional_median(d, iv, m)
    return ConditionalSummary(
        interval=iv,
        mass=m,
        cond_mean=mean,
        cond_median=med,
        cond_variance=conditional_variance(d, iv, mean, m),
        cond_mad=conditional_mad(d, iv, med, m),
        midpoint=iv.midpoint,
        flagged=d.pdf1(iv.lo) < LOW_DENSITY_FLAG,
    )


def right_end_for_mass(d: Density, a: float, eta: float, tol: float = 1e-12) -> float:
    """Right end b with mass([a, b]) = eta."""
    if not 0.0 < eta <= 1.0:
        raise InvalidParameterError(f"eta must lie in (0, 1], got {eta}")
    fa = d.cdf(a)
    if fa <= 0.5:
        target = fa + eta
        if target > 1.0 + tol:
            raise InfeasibleError(f"only {1.0 - fa} mass lies right of a={a}, need {eta}")
        return d.quantile_or_edge(target)
    rest = d.sf(a) - eta
    if rest < -tol:
        raise InfeasibleError(f"only {d.sf(a)} mass lies right of a={a}, need {eta}")
    return d.quantile_or_edge(1.0 - rest) if rest > 0.0 else d.span.hi


def left_end_range(d: Density, eta: float, eps_scan: float = EPS_SCAN) -> tuple[float, float]:
    """Feasible left ends of the sliding family, with unbounded lows clipped."""
    if not 0.0 < eta < 1.0:
        raise InvalidParameterError(f"eta must lie in (0, 1), got {eta}")
    lo = d.support.lo if math.isfinite(d.support.lo) else d.quantile(eps_scan)
    hi = d.quantile(1.0 - eta)
    return lo, max(lo, hi)


def family_member(d: Density, a: float, eta: float) -> ConditionalSummary:
    return conditional_summary(d, Interval(a, right_end_for_mass(d, a, eta)))


def sliding_family_scan(d: Density, eta: float, grid: int = 101,
                        eps_scan: float = EPS_SCAN) -> list[ConditionalSummary]:
    """Summaries of mass-``eta`` intervals on an equispaced grid of left ends."""
    if grid < 2:
        raise InvalidParameterError("grid must be at least 2")
    lo, hi = left_end_range(d, eta, eps_scan)
    return [family_member(d, float(a), eta) for a in np.linspace(lo, hi, grid)]


def scan_csv(rows: list[ConditionalSummary]) -> str:
    return csv_text(SCAN_HEADER, (r.row() for r in rows))
