"""Heuristic silence intervals built around the mode, and their comparison sweep."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy import optimize

from ._io import csv_text
from .centering import brute_force_optimal, symmetric_interval
from .conditional import (conditional_summary, family_member, left_end_range,
                          right_end_for_mass, sliding_family_scan)
from .density import Density, DistortionKind, Interval, mass
from .errors import InvalidParameterError

SWEEP_HEADER = ("density", "eta", "family", "lo", "hi", "cond_variance")
CURVE_HEADER = ("density", "eta", "a", "cond_variance")
DEFAULT_ETAS = (0.2, 0.4, 0.6, 0.8)


class FamilyKind(enum.Enum):
    SUPER_LEVEL = "super-level"
    EQUAL_SIDES = "equal-sides"
    EQUAL_AREAS = "equal-areas"
    MODE_AS_MEAN = "mode-as-conditional-mean"


def _check_eta(eta: float) -> None:
    if not 0.0 < eta < 1.0:
        raise InvalidParameterError(f"eta must lie in (0, 1), got {eta}")


def _edge_of_level(d: Density, level: float, inside: float, outside: float) -> float:
    """Last point from ``inside`` toward ``outside`` where pdf stays >= level."""
    if d.pdf1(outside) >= level:
        return outside
    for _ in range(200):
        mid = 0.5 * (inside + outside)
        if mid in (inside, outside):
            break
        if d.pdf1(mid) >= level:
            inside = mid
        else:
            outside = mid
    return inside


def super_level_interval(d: Density, eta: float) -> Interval:
    """Smallest super-level set {x : pdf(x) >= level} collecting mass ``eta``.

    For a unimodal density this is the member [a, b(a)] of the sliding family
    whose end densities match, or the family's end member when the mode sits
    at (or mass forces it onto) a support edge.  A flat top wider than needed
    is resolved by centering the interval inside the flat region.
    """
    _check_eta(eta)
    a_lo, a_hi = left_end_range(d, eta, eps_scan=min(1e-6, (1.0 - eta) * 1e-9))
    a_hi = min(a_hi, max(d.mode, a_lo))

    def gap(a: float) -> float:
        return d.pdf1(a) - d.pdf1(right_end_for_mass(d, a, eta))

    g_lo, g_hi = gap(a_lo), gap(a_hi)
    if g_lo >= 0.0:
        a = a_lo
    elif g_hi <= 0.0:
        a = a_hi
    else:
        a = optimize.brentq(gap, a_lo, a_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    b = right_end_for_mass(d, a, eta)

    level = min(d.pdf1(a), d.pdf1(b)) * (1.0 - 1e-12)
    flat = Interval(_edge_of_level(d, level, a, d.span.lo), _edge_of_level(d, level, b, d.span.hi))
    if mass(d, flat) > eta + 1e-9:
        return symmetric_interval(d, flat.midpoint, eta).intersect(flat)
    return Interval(a, b)


def equal_sides_interval(d: Density, eta: float) -> Interval:
    """[mode - r, mode + r] of mass ``eta``; a side that leaves the support is clipped."""
    _check_eta(eta)
    return symmetric_interval(d, d.mode, eta)


def equal_areas_interval(d: Density, eta: float) -> Interval:
    """Mass eta/2 on each side of the mode; the deficit of a short side moves to the other."""
    _check_eta(eta)
    fm = d.cdf(d.mode)
    p_lo, p_hi = fm - 0.5 * eta, fm + 0.5 * eta
    if p_lo < 0.0:
        p_lo, p_hi = 0.0, eta
    elif p_hi > 1.0:
        p_lo, p_hi = 1.0 - eta, 1.0
    lo = d.support.lo if p_lo == 0.0 else d.quantile_or_edge(p_lo)
    hi = d.support.hi if p_hi == 1.0 else d.quantile_or_edge(p_hi)
    return Interval(lo, hi).intersect(Interval(d.span.lo, d.span.hi))


def mode_as_mean_interval(d: Density, eta: float, grid: int = 101) -> Interval | None:
    """Mass-eta interval whose conditional mean equals the mode, or None."""
    _check_eta(eta)
    lo, hi = left_end_range(d, eta)

    def g(a: float) -> float:
        return family_member(d, a, eta).cond_mean - d.mode

    a_grid = np.linspace(lo, hi, grid)
    vals = [g(float(a)) for a in a_grid]
    for i, v in enumerate(vals):
        if v == 0.0:
            return Interval(float(a_grid[i]), right_end_for_mass(d, float(a_grid[i]), eta))
        if i and (vals[i - 1] < 0.0) != (v < 0.0):
            a = optimize.brentq(g, float(a_grid[i - 1]), float(a_grid[i]), xtol=1e-10)
            return Interval(a, right_end_for_mass(d, a, eta))
    return None


BUILDERS = {
    FamilyKind.SUPER_LEVEL: super_level_interval,
    FamilyKind.EQUAL_SIDES: equal_sides_interval,
    FamilyKind.EQUAL_AREAS: equal_areas_interval,
    FamilyKind.MODE_AS_MEAN: mode_as_mean_interval,
}


def family_interval(d: Density, eta: float, family: FamilyKind) -> Interval | None:
    return BUILDERS[family](d, eta)


@dataclass(frozen=True)
class FamilyRow:
    density: str
    eta: float
    family: str  # a FamilyKind value, or "optimal"
    interval: Interval | None
    cond_variance: float | None


@dataclass
class FamilySweep:
    rows: list[FamilyRow] = field(default_factory=list)
    curves: list[tuple[str, float, float, float]] = field(default_factory=list)

    def lookup(self, eta: float, family: str) -> FamilyRow:
        for r in self.rows:
            if r.eta == eta and r.family == family:
                return r
        raise KeyError((eta, family))

    def rows_csv(self) -> str:
        def cells(r):
            iv = r.interval
            return (r.density, r.eta, r.family, iv.lo if iv else None,
                    iv.hi if iv else None, r.cond_variance)
        return csv_text(SWEEP_HEADER, (cells(r) for r in self.rows))

    def curves_csv(self) -> str:
        return csv_text(CURVE_HEADER, self.curves)


def family_sweep(d: Density, etas: Iterable[float] = DEFAULT_ETAS, grid: int = 101) -> FamilySweep:
    """Conditional variance of every family (plus the optimum) for each eta,
    together with the sliding-family variance curves."""
    out = FamilySweep()
    for eta in sorted(etas):
        _check_eta(eta)
        for fam in FamilyKind:
            iv = family_interval(d, eta, fam)
            var = conditional_summary(d, iv).cond_variance if iv is not None else None
            out.rows.append(FamilyRow(d.kind, eta, fam.value, iv, var))
        best = brute_force_optimal(d, eta, DistortionKind.SQUARED_ERROR, grid=max(grid, 100))
        out.rows.append(FamilyRow(d.kind, eta, "optimal", best.interval, best.cond_distortion))
        for s in sliding_family_scan(d, eta, grid):
            out.curves.append((d.kind, eta, s.interval.lo, s.cond_variance))
    return out
