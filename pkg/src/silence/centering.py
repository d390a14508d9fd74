"""Centering of silence intervals, its fixed-point iteration, and a scan oracle.

One centering step replaces an interval S by the smallest interval
symmetric about the best estimate under silence (conditional mean for
squared error, conditional median for absolute error) that still collects
mass ``eta``.  Overhang outside the support carries no mass and is clipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ._io import csv_text
from ._numerics import golden_section_minimize
from .conditional import (MASS_FLOOR, ConditionalSummary, clip_to_span, conditional_median,
                          conditional_mean, conditional_summary, family_member,
                          left_end_range)
from .density import Density, DistortionKind, Interval, mass
from .errors import InfeasibleError, InvalidParameterError, NullMassError

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200
VALLEY_ATOL = 1e-10

TRACE_HEADER = ("iter", "lo", "hi", "estimate", "mass", "cond_distortion")


@dataclass(frozen=True)
class SilenceDesign:
    interval: Interval
    estimate: float
    mass: float
    distortion_kind: DistortionKind
    cond_distortion: float
    iterations: int = 0
    valley_width: float = 0.0

    @property
    def mean_distortion(self) -> float:
        """Unconditional distortion: zero when sampled, conditional cost when silent."""
        return self.mass * self.cond_distortion


@dataclass
class CenteringTrace:
    start: SilenceDesign
    designs: list[SilenceDesign] = field(default_factory=list)
    converged: bool = False
    fixed_point_gap: float = math.inf

    @property
    def final(self) -> SilenceDesign:
        return self.designs[-1] if self.designs else self.start

    @property
    def iterations(self) -> int:
        return len(self.designs)

    def rows(self):
        for i, dsg in enumerate([self.start] + self.designs):
            yield (i, dsg.interval.lo, dsg.interval.hi, dsg.estimate, dsg.mass,
                   dsg.cond_distortion)

    def to_csv(self) -> str:
        return csv_text(TRACE_HEADER, self.rows())


def _check_eta(eta: float) -> None:
    if not 0.0 < eta < 1.0:
        raise InvalidParameterError(f"eta must lie in (0, 1), got {eta}")
    if eta > 1.0 - MASS_FLOOR:
        raise InfeasibleError(f"eta={eta} leaves less than the mass floor outside")


def _design(s: ConditionalSummary, kind: DistortionKind, iterations: int = 0) -> SilenceDesign:
    if kind is DistortionKind.SQUARED_ERROR:
        est, dist = s.cond_mean, s.cond_variance
    else:
        est, dist = s.cond_median, s.cond_mad
    return SilenceDesign(s.interval, est, s.mass, kind, dist, iterations)


def design_for(d: Density, iv: Interval, kind: DistortionKind, iterations: int = 0) -> SilenceDesign:
    """Evaluate an arbitrary interval as a silence design."""
    return _design(conditional_summary(d, iv), kind, iterations)


def best_estimate(d: Density, iv: Interval, kind: DistortionKind) -> float:
    iv = clip_to_span(d, iv)
    m = mass(d, iv)
    if not m > MASS_FLOOR:
        raise NullMassError(f"interval [{iv.lo}, {iv.hi}] has mass {m}")
    if kind is DistortionKind.SQUARED_ERROR:
        return conditional_mean(d, iv, m)
    return conditional_median(d, iv, m)


def symmetric_interval(d: Density, center: float, eta: float) -> Interval:
    """Smallest [center - r, center + r] of mass >= eta, clipped to the support."""

    def excess(r):
        return mass(d, Interval(center - r, center + r)) - eta

    r_hi = max(center - d.span.lo, d.span.hi - center, 0.0)
    if excess(r_hi) < -1e-12:
        raise InfeasibleError(f"no interval about {center} collects mass {eta}")
    if excess(0.0) >= 0.0:
        r = 0.0
    elif excess(r_hi) <= 0.0:
        r = r_hi
    else:
        r = optimize.brentq(excess, 0.0, r_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                            maxiter=500)
    return Interval(center - r, center + r).intersect(d.support)


def _center_about(d: Density, estimate: float, eta: float, kind: DistortionKind,
                  iterations: int) -> SilenceDesign:
    iv = symmetric_interval(d, estimate, eta)
    return design_for(d, iv, kind, iterations)


def centering_step(d: Density, iv: Interval, eta: float, kind: DistortionKind) -> SilenceDesign:
    """One run of the centering algorithm on ``iv``."""
    _check_eta(eta)
    return _center_about(d, best_estimate(d, iv, kind), eta, kind, 1)


def iterate_centering(d: Density, start: Interval, eta: float, kind: DistortionKind,
                      tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> CenteringTrace:
    """Repeat centering until endpoints move less than ``tol`` or ``max_iter`` steps."""
    _check_eta(eta)
    if not tol > 0.0:
        raise InvalidParameterError("tol must be positive")
    if max_iter < 1:
        raise InvalidParameterError("max_iter must be at least 1")
    trace = CenteringTrace(start=design_for(d, start, kind))
    prev = trace.start
    for i in range(1, max_iter + 1):
        cur = _center_about(d, prev.estimate, eta, kind, i)
        trace.designs.append(cur)
        gap = max(abs(cur.interval.lo - prev.interval.lo), abs(cur.interval.hi - prev.interval.hi))
        trace.fixed_point_gap = gap
        if gap < tol:
            trace.converged = True
            break
        prev = cur
    return trace


def _stationarity(d: Density, a: float, eta: float, kind: DistortionKind) -> float:
    # Along the family, d(distortion)/da = pdf(a) * (b - a) * (a + b - 2 * estimate) / eta.
    s = family_member(d, a, eta)
    est = s.cond_mean if kind is DistortionKind.SQUARED_ERROR else s.cond_median
    return s.interval.lo + s.interval.hi - 2.0 * est


def brute_force_optimal(d: Density, eta: float, kind: DistortionKind,
                        grid: int = 101) -> SilenceDesign:
    """Minimum-distortion member of the sliding family.

    Scans ``grid`` left ends, then refines between the neighbours of the grid
    minimum by golden-section search.  When the derivative sign changes inside
    that bracket the stationary point is polished by root finding.  The
    returned design carries the flat-valley width of the scan.
    """
    _check_eta(eta)
    if grid < 100:
        raise InvalidParameterError("brute-force scan needs grid >= 100")
    lo, hi = left_end_range(d, eta)

    def cost(a: float) -> float:
        return _design(family_member(d, a, eta), kind).cond_distortion

    a_grid = np.linspace(lo, hi, grid)
    costs = np.array([cost(float(a)) for a in a_grid])
    i = int(np.argmin(costs))
    fmin = costs[i]
    near = a_grid[np.abs(costs - fmin) <= VALLEY_ATOL]
    valley = float(near.max() - near.min())

    left = float(a_grid[max(i - 1, 0)])
    right = float(a_grid[min(i + 1, grid - 1)])
    a_best, f_best = golden_section_minimize(cost, left, right, tol=1e-13 * max(1.0, abs(left)))
    if f_best > fmin:
        a_best = float(a_grid[i])

    if valley > 0.0:
        # flat valley: every member there is optimal; report the middle one
        a_best = float(0.5 * (near.min() + near.max()))
    elif right > left:
        gl = _stationarity(d, left, eta, kind)
        gr = _stationarity(d, right, eta, kind)
        if gl < 0.0 < gr:
            a_best = optimize.brentq(lambda a: _stationarity(d, a, eta, kind), left, right,
                                     xtol=1e-15, rtol=4 * np.finfo(float).eps)

    best = _design(family_member(d, a_best, eta), kind)
    return SilenceDesign(best.interval, best.estimate, best.mass, kind, best.cond_distortion,
                         iterations=0, valley_width=valley)


def symmetric_difference_mass(d: Density, a: Interval, b: Interval) -> float:
    inter = a.intersect(b)
    shared = mass(d, inter) if a.hi >= b.lo and b.hi >= a.lo else 0.0
    return max(mass(d, a) + mass(d, b) - 2.0 * shared, 0.0)


def is_centered(d: Density, iv: Interval, kind: DistortionKind, tol: float = 1e-8) -> bool:
    """True iff one centering step at the interval's own mass leaves it unchanged up to ``tol`` mass."""
    m = mass(d, iv)
    if not m > MASS_FLOOR:
        raise NullMassError(f"interval [{iv.lo}, {iv.hi}] has mass {m}")
    eta = min(m, 1.0 - MASS_FLOOR)
    new = centering_step(d, iv, eta, kind).interval
    return symmetric_difference_mass(d, iv, new) < tol
