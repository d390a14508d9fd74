"""Small numeric kernels shared by the density and interval modules."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

QUAD_ABS_TOL = 1e-10
QUAD_REL_TOL = 1e-10
QUANTILE_TOL = 1e-12

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def integrate_piecewise(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    breakpoints: Sequence[float] = (),
    epsabs: float = QUAD_ABS_TOL,
    epsrel: float = QUAD_REL_TOL,
) -> float:
    """Adaptive quadrature of ``f`` over the finite range [lo, hi].

    Interior breakpoints (kinks of the integrand) split the range so each
    piece is smooth.
    """
    if not hi > lo:
        return 0.0
    cuts = [lo] + sorted(p for p in breakpoints if lo < p < hi) + [hi]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        # full_output silences roundoff warnings at tolerances near machine precision
        val = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=200, full_output=1)[0]
        total += val
    return total


def invert_monotone(
    func: Callable[[np.ndarray], np.ndarray],
    deriv: Callable[[np.ndarray], np.ndarray],
    targets: np.ndarray,
    lo: float,
    hi: float,
    tol: float = QUANTILE_TOL,
    max_iter: int = 200,
) -> np.ndarray:
    """Solve ``func(x) = targets`` elementwise for nondecreasing ``func``.

    Safeguarded Newton: a bracket [lo, hi] is kept for every element and a
    bisection step replaces any Newton step that leaves it.
    """
    shape = np.shape(targets)
    t = np.atleast_1d(np.asarray(targets, dtype=float)).ravel()
    a = np.full(t.shape, float(lo))
    b = np.full(t.shape, float(hi))
    x = 0.5 * (a + b)
    active = np.ones(t.shape, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        xa = x[active]
        r = func(xa) - t[active]
        done = np.abs(r) <= tol
        below = r < 0
        aa = np.where(below, xa, a[active])
        bb = np.where(below, b[active], xa)
        d = deriv(xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = xa - r / d
        bad = ~np.isfinite(step) | (step <= aa) | (step >= bb)
        nxt = np.where(bad, 0.5 * (aa + bb), step)
        stalled = (bb - aa) <= 4.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(xa))
        a[active] = aa
        b[active] = bb
        x[active] = np.where(done | stalled, xa, nxt)
        idx = np.flatnonzero(active)
        active[idx[done | stalled]] = False
    return x.reshape(shape)


def golden_section_minimize(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-12
) -> tuple[float, float]:
    """Golden-section search for the minimum of a unimodal ``f`` on [a, b].

    Returns ``(x, f(x))`` for the best point seen, the bracket ends included.
    """
    a, b = min(a, b), max(a, b)
    best_x, best_f = a, f(a)
    fb = f(b)
    if fb < best_f:
        best_x, best_f = b, fb
    h = b - a
    if h <= tol:
        return best_x, best_f
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    for _ in range(max(n, 1)):
        if fc < fd:
            b, d, fd = d, c, fc
            h *= INV_PHI
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= INV_PHI
            d = a + INV_PHI * h
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f
