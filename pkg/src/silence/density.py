"""Catalog of scalar log-concave densities and the numeric services on them.

Every density exposes pdf / cdf / survival / quantile, its cached mean,
variance and mode, a declared ``support`` (possibly unbounded) and a finite
``span`` used for quadrature.  The span cuts unbounded tails where the pdf
drops below ``TAIL_CUTOFF`` times its peak.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np
from scipy import special

from ._numerics import QUANTILE_TOL, integrate_piecewise, invert_monotone
from .errors import InvalidParameterError, SupportSamplingError

TAIL_CUTOFF = 1e-16
_TAIL_LOG = -math.log(TAIL_CUTOFF)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] on the real line."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise InvalidParameterError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise InvalidParameterError(f"interval lo={self.lo} exceeds hi={self.hi}")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            # disjoint: collapse onto the nearest edge of ``other``
            edge = other.lo if self.hi < other.lo else other.hi
            return Interval(edge, edge)
        return Interval(lo, hi)


class DistortionKind(enum.Enum):
    SQUARED_ERROR = "mse"
    ABSOLUTE_ERROR = "mae"

    def __call__(self, err):
        if self is DistortionKind.SQUARED_ERROR:
            return np.square(err)
        return np.abs(err)


class Density:
    """Base class for a scalar density on ``support``.

    Subclasses provide vectorized ``_pdf`` and ``_cdf`` valid on the support,
    and may override ``_sf``, ``_quantile`` and ``_moments`` with closed forms.
    ``_pdf1`` is a scalar fast path used by quadrature.
    """

    kind: str = "abstract"
    breakpoints: tuple[float, ...] = ()

    def __init__(self, params: Mapping[str, float], support: Interval, mode: float):
        self.params = dict(params)
        self.support = support
        self.mode = float(mode)
        self.span = self._span()
        self.peak = float(self.pdf(self.mode))
        self.mean, self.variance = self._moments()

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"

    # -- hooks ---------------------------------------------------------------
    def _pdf(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _pdf1(self, x: float) -> float:
        return float(self._pdf(np.array([x]))[0])

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return 1.0 - self._cdf(x)

    def _quantile(self, p: np.ndarray) -> np.ndarray:
        lo, hi = self.span.lo, self.span.hi
        return invert_monotone(self._cdf_clipped, self.pdf, p, lo, hi, tol=QUANTILE_TOL / 4)

    def _span(self) -> Interval:
        return self.support

    def _moments(self) -> tuple[float, float]:
        lo, hi = self.span.lo, self.span.hi
        m = integrate_piecewise(lambda t: t * self._pdf1(t), lo, hi, self.breakpoints,
                                epsabs=0.0, epsrel=1e-13)
        v = integrate_piecewise(lambda t: (t - m) ** 2 * self._pdf1(t), lo, hi,
                                self.breakpoints, epsabs=0.0, epsrel=1e-13)
        return m, v

    # -- public services -----------------------------------------------------
    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.support.lo) & (x <= self.support.hi)
        out = np.zeros(x.shape)
        if inside.any():
            out[inside] = self._pdf(x[inside])
        return out if out.ndim else float(out)

    def pdf1(self, x: float) -> float:
        """Scalar pdf without array overhead."""
        if x < self.support.lo or x > self.support.hi:
            return 0.0
        return self._pdf1(x)

    def logpdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(x))

    def _cdf_clipped(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= self.support.hi, 1.0, 0.0)
        inside = (x > self.support.lo) & (x < self.support.hi)
        if inside.any():
            out[inside] = np.clip(self._cdf(x[inside]), 0.0, 1.0)
        return out

    def cdf(self, x):
        out = self._cdf_clipped(x)
        return out if out.ndim else float(out)

    def sf(self, x):
        """Survival function 1 - cdf, accurate in the right tail."""
        x = np.asarray(x, dtype=float)
        out = np.where(x <= self.support.lo, 1.0, 0.0)
        inside = (x > self.support.lo) & (x < self.support.hi)
        if inside.any():
            out[inside] = np.clip(self._sf(x[inside]), 0.0, 1.0)
        return out if out.ndim else float(out)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any(~((p > 0.0) & (p < 1.0))):
            raise InvalidParameterError("quantile needs probabilities strictly inside (0, 1)")
        out = np.asarray(self._quantile(p), dtype=float)
        out = np.clip(out, self.support.lo, self.support.hi)
        return out if out.ndim else float(out)

    def quantile_or_edge(self, p: float) -> float:
        """Quantile that maps p <= 0 and p >= 1 onto the finite span edges."""
        if p <= 0.0:
            return self.span.lo
        if p >= 1.0:
            return self.span.hi
        return min(max(self.quantile(p), self.span.lo), self.span.hi)

    def mass(self, iv: Interval) -> float:
        return mass(self, iv)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def mass(d: Density, iv: Interval) -> float:
    """Probability that X falls in ``iv``: cdf(hi) - cdf(lo)."""
    lo, hi = max(iv.lo, d.support.lo), min(iv.hi, d.support.hi)
    if not hi > lo:
        return 0.0
    fa = d.cdf(lo)
    if fa > 0.5:
        m = d.sf(lo) - d.sf(hi)
    else:
        m = d.cdf(hi) - fa
    return max(m, 0.0)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise InvalidParameterError(f"{name} must be a positive finite number, got {value}")
    return value


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value}")
    return value


class Uniform(Density):
    kind = "uniform"

    def __init__(self, lo: float = 0.0, hi: float = 1.0):
        lo, hi = _finite("lo", lo), _finite("hi", hi)
        if not hi > lo:
            raise InvalidParameterError("uniform needs lo < hi")
        self._h = 1.0 / (hi - lo)
        super().__init__({"lo": lo, "hi": hi}, Interval(lo, hi), 0.5 * (lo + hi))

    def _pdf(self, x):
        return np.full(x.shape, self._h)

    def _pdf1(self, x):
        return self._h

    def _cdf(self, x):
        return (x - self.support.lo) * self._h

    def _sf(self, x):
        return (self.support.hi - x) * self._h

    def _quantile(self, p):
        return self.support.lo + p * (self.support.hi - self.support.lo)

    def _moments(self):
        w = self.support.hi - self.support.lo
        return self.mode, w * w / 12.0


class Exponential(Density):
    kind = "exponential"

    def __init__(self, lam: float = 1.0):
        self.lam = _positive("lambda", lam)
        super().__init__({"lambda": self.lam}, Interval(0.0, math.inf), 0.0)

    def _span(self):
        return Interval(0.0, _TAIL_LOG / self.lam)

    def _pdf(self, x):
        return self.lam * np.exp(-self.lam * x)

    def _pdf1(self, x):
        return self.lam * math.exp(-self.lam * x)

    def _cdf(self, x):
        return -np.expm1(-self.lam * x)

    def _sf(self, x):
        return np.exp(-self.lam * x)

    def _quantile(self, p):
        return -np.log1p(-p) / self.lam

    def _moments(self):
        return 1.0 / self.lam, 1.0 / self.lam**2


class Gaussian(Density):
    kind = "gaussian"

    def __init__(self, mu: float = 0.0, sigma: float = 1.0):
        self.mu = _finite("mu", mu)
        self.sigma = _positive("sigma", sigma)
        self._c = 1.0 / (self.sigma * math.sqrt(2.0 * math.pi))
        super().__init__({"mu": self.mu, "sigma": self.sigma},
                         Interval(-math.inf, math.inf), self.mu)

    def _span(self):
        w = self.sigma * math.sqrt(2.0 * _TAIL_LOG)
        return Interval(self.mu - w, self.mu + w)

    def _pdf(self, x):
        z = (x - self.mu) / self.sigma
        return self._c * np.exp(-0.5 * z * z)

    def _pdf1(self, x):
        z = (x - self.mu) / self.sigma
        return self._c * math.exp(-0.5 * z * z)

    def _cdf(self, x):
        return special.ndtr((x - self.mu) / self.sigma)

    def _sf(self, x):
        return special.ndtr((self.mu - x) / self.sigma)

    def _quantile(self, p):
        return self.mu + self.sigma * special.ndtri(p)

    def _moments(self):
        return self.mu, self.sigma**2


class Laplace(Density):
    kind = "laplace"
    breakpoints: tuple[float, ...]

    def __init__(self, mu: float = 0.0, b: float = 1.0):
        self.mu = _finite("mu", mu)
        self.b = _positive("b", b)
        self.breakpoints = (self.mu,)
        super().__init__({"mu": self.mu, "b": self.b}, Interval(-math.inf, math.inf), self.mu)

    def _span(self):
        w = self.b * _TAIL_LOG
        return Interval(self.mu - w, self.mu + w)

    def _pdf(self, x):
        return np.exp(-np.abs(x - self.mu) / self.b) / (2.0 * self.b)

    def _pdf1(self, x):
        return math.exp(-abs(x - self.mu) / self.b) / (2.0 * self.b)

    def _cdf(self, x):
        z = (x - self.mu) / self.b
        return np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))

    def _sf(self, x):
        z = (x - self.mu) / self.b
        return np.where(z > 0, 0.5 * np.exp(-np.maximum(z, 0.0)), 1.0 - 0.5 * np.exp(np.minimum(z, 0.0)))

    def _quantile(self, p):
        return np.where(p < 0.5, self.mu + self.b * np.log(2.0 * np.minimum(p, 0.5)),
                        self.mu - self.b * np.log(2.0 * (1.0 - np.maximum(p, 0.5))))

    def _moments(self):
        return self.mu, 2.0 * self.b**2


class UnbalancedLaplace(Density):
    """pdf proportional to exp(lambda_left x) for x <= 0 and exp(-lambda_right x) for x >= 0."""

    kind = "unbalanced-laplace"
    breakpoints = (0.0,)

    def __init__(self, lambda_left: float = 1.5, lambda_right: float = 0.3):
        self.lam_l = _positive("lambda_left", lambda_left)
        self.lam_r = _positive("lambda_right", lambda_right)
        self._c = 1.0 / (1.0 / self.lam_l + 1.0 / self.lam_r)
        super().__init__({"lambda_left": self.lam_l, "lambda_right": self.lam_r},
                         Interval(-math.inf, math.inf), 0.0)

    def _span(self):
        return Interval(-_TAIL_LOG / self.lam_l, _TAIL_LOG / self.lam_r)

    def _pdf(self, x):
        return self._c * np.where(x <= 0, np.exp(self.lam_l * np.minimum(x, 0.0)),
                                  np.exp(-self.lam_r * np.maximum(x, 0.0)))

    def _pdf1(self, x):
        if x <= 0.0:
            return self._c * math.exp(self.lam_l * x)
        return self._c * math.exp(-self.lam_r * x)

    def _cdf(self, x):
        left = self._c / self.lam_l * np.exp(self.lam_l * np.minimum(x, 0.0))
        right = 1.0 - self._c / self.lam_r * np.exp(-self.lam_r * np.maximum(x, 0.0))
        return np.where(x <= 0, left, right)

    def _sf(self, x):
        left = 1.0 - self._c / self.lam_l * np.exp(self.lam_l * np.minimum(x, 0.0))
        right = self._c / self.lam_r * np.exp(-self.lam_r * np.maximum(x, 0.0))
        return np.where(x <= 0, left, right)

    def _quantile(self, p):
        p0 = self._c / self.lam_l
        left = np.log(np.minimum(p, p0) / p0) / self.lam_l
        right = -np.log((1.0 - np.maximum(p, p0)) * self.lam_r / self._c) / self.lam_r
        return np.where(p <= p0, left, right)

    def _moments(self):
        c, a, b = self._c, self.lam_l, self.lam_r
        m = c * (1.0 / b**2 - 1.0 / a**2)
        m2 = c * (2.0 / a**3 + 2.0 / b**3)
        return m, m2 - m * m


class Rayleigh(Density):
    kind = "rayleigh"

    def __init__(self, sigma: float = 1.0):
        self.sigma = _positive("sigma", sigma)
        super().__init__({"sigma": self.sigma}, Interval(0.0, math.inf), self.sigma)

    def _span(self):
        # pdf(s*sigma)/pdf(sigma) = s * exp((1 - s^2)/2); solve for the tail cutoff.
        s = math.sqrt(2.0 * _TAIL_LOG + 1.0)
        for _ in range(60):
            s = math.sqrt(1.0 + 2.0 * (_TAIL_LOG + math.log(s)))
        return Interval(0.0, s * self.sigma)

    def _pdf(self, x):
        s2 = self.sigma**2
        return x / s2 * np.exp(-0.5 * x * x / s2)

    def _pdf1(self, x):
        s2 = self.sigma**2
        return x / s2 * math.exp(-0.5 * x * x / s2)

    def _cdf(self, x):
        return -np.expm1(-0.5 * (x / self.sigma) ** 2)

    def _sf(self, x):
        return np.exp(-0.5 * (x / self.sigma) ** 2)

    def _quantile(self, p):
        return self.sigma * np.sqrt(-2.0 * np.log1p(-p))

    def _moments(self):
        return self.sigma * math.sqrt(math.pi / 2.0), (4.0 - math.pi) / 2.0 * self.sigma**2


class Triangular(Density):
    kind = "triangular"

    def __init__(self, lo: float = -0.25, mode: float = 0.0, hi: float = 1.0):
        lo, mode, hi = _finite("lo", lo), _finite("mode", mode), _finite("hi", hi)
        if not (lo <= mode <= hi and lo < hi):
            raise InvalidParameterError("triangular needs lo <= mode <= hi and lo < hi")
        self._h = 2.0 / (hi - lo)
        self.breakpoints = (mode,)
        super().__init__({"lo": lo, "mode": mode, "hi": hi}, Interval(lo, hi), mode)

    def _pdf(self, x):
        lo, c, hi = self.support.lo, self.mode, self.support.hi
        with np.errstate(divide="ignore", invalid="ignore"):
            up = self._h * (x - lo) / (c - lo) if c > lo else np.full(x.shape, self._h)
            down = self._h * (hi - x) / (hi - c) if hi > c else np.full(x.shape, self._h)
        return np.where(x <= c, up, down)

    def _pdf1(self, x):
        lo, c, hi = self.support.lo, self.mode, self.support.hi
        if x <= c:
            return self._h * (x - lo) / (c - lo) if c > lo else self._h
        return self._h * (hi - x) / (hi - c)

    def _cdf(self, x):
        lo, c, hi = self.support.lo, self.mode, self.support.hi
        with np.errstate(divide="ignore", invalid="ignore"):
            left = (x - lo) ** 2 / ((hi - lo) * (c - lo)) if c > lo else np.zeros(x.shape)
            right = 1.0 - (hi - x) ** 2 / ((hi - lo) * (hi - c)) if hi > c else np.ones(x.shape)
        return np.where(x <= c, left, right)

    def _sf(self, x):
        lo, c, hi = self.support.lo, self.mode, self.support.hi
        with np.errstate(divide="ignore", invalid="ignore"):
            left = 1.0 - (x - lo) ** 2 / ((hi - lo) * (c - lo)) if c > lo else np.ones(x.shape)
            right = (hi - x) ** 2 / ((hi - lo) * (hi - c)) if hi > c else np.zeros(x.shape)
        return np.where(x <= c, left, right)

    def _quantile(self, p):
        lo, c, hi = self.support.lo, self.mode, self.support.hi
        pc = (c - lo) / (hi - lo)
        left = lo + np.sqrt(np.minimum(p, pc) * (hi - lo) * (c - lo))
        right = hi - np.sqrt((1.0 - np.maximum(p, pc)) * (hi - lo) * (hi - c))
        return np.where(p <= pc, left, right)

    def _moments(self):
        a, c, b = self.support.lo, self.mode, self.support.hi
        m = (a + b + c) / 3.0
        v = (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0
        return m, v


class CircularArc(Density):
    """Two circular arcs patched at x = 0, renormalized to unit mass.

    Left piece sqrt(R_L^2 - x^2) on [-R_L, 0]; right piece
    (R_L - R_R) + sqrt(R_R^2 - x^2) on [0, R_R].  Both meet at height R_L
    with zero slope; the right piece drops to zero at x = R_R.
    """

    kind = "circular-arc"
    breakpoints = (0.0,)

    def __init__(self, left_radius: float = 2.0, right_radius: float = 1.0):
        rl = _positive("left_radius", left_radius)
        rr = _positive("right_radius", right_radius)
        if rr > rl:
            raise InvalidParameterError("circular-arc needs right_radius <= left_radius")
        self.rl, self.rr = rl, rr
        area = math.pi * rl * rl / 4.0 + (rl - rr) * rr + math.pi * rr * rr / 4.0
        self._s = 1.0 / area
        self._left_mass = self._s * math.pi * rl * rl / 4.0
        super().__init__({"left_radius": rl, "right_radius": rr}, Interval(-rl, rr), 0.0)

    @staticmethod
    def _arc_area(x, r):
        # integral of sqrt(r^2 - t^2) from -r to x
        x = np.clip(x, -r, r)
        return 0.5 * (x * np.sqrt(np.maximum(r * r - x * x, 0.0)) + r * r * np.arcsin(x / r)) \
            + math.pi * r * r / 4.0

    def _pdf(self, x):
        rl, rr = self.rl, self.rr
        left = np.sqrt(np.maximum(rl * rl - x * x, 0.0))
        right = (rl - rr) + np.sqrt(np.maximum(rr * rr - x * x, 0.0))
        return self._s * np.where(x <= 0, left, right)

    def _pdf1(self, x):
        if x <= 0.0:
            return self._s * math.sqrt(max(self.rl * self.rl - x * x, 0.0))
        return self._s * ((self.rl - self.rr) + math.sqrt(max(self.rr * self.rr - x * x, 0.0)))

    def _cdf(self, x):
        left = self._s * self._arc_area(x, self.rl)
        xr = np.maximum(x, 0.0)
        right = self._left_mass + self._s * ((self.rl - self.rr) * xr
                                             + self._arc_area(xr, self.rr)
                                             - math.pi * self.rr * self.rr / 4.0)
        return np.where(x <= 0, left, right)


CATALOG: dict[str, tuple[type[Density], dict[str, str]]] = {
    # kind -> (class, json param name -> constructor argument)
    "uniform": (Uniform, {"lo": "lo", "hi": "hi"}),
    "exponential": (Exponential, {"lambda": "lam"}),
    "gaussian": (Gaussian, {"mu": "mu", "sigma": "sigma"}),
    "laplace": (Laplace, {"mu": "mu", "b": "b"}),
    "unbalanced-laplace": (UnbalancedLaplace, {"lambda_left": "lambda_left",
                                               "lambda_right": "lambda_right"}),
    "rayleigh": (Rayleigh, {"sigma": "sigma"}),
    "triangular": (Triangular, {"lo": "lo", "mode": "mode", "hi": "hi"}),
    "circular-arc": (CircularArc, {"left_radius": "left_radius",
                                   "right_radius": "right_radius"}),
}


def make_density(kind: str, params: Mapping[str, float] | None = None) -> Density:
    """Build a catalog density from its identifier and parameter record.

    Missing parameters take the catalog defaults (standard forms, and the
    shapes of the asymmetric study densities).
    """
    try:
        cls, names = CATALOG[kind]
    except KeyError:
        raise InvalidParameterError(
            f"unknown density kind {kind!r}; expected one of {sorted(CATALOG)}") from None
    params = dict(params or {})
    unknown = set(params) - set(names)
    if unknown:
        raise InvalidParameterError(f"unknown parameter(s) for {kind}: {sorted(unknown)}")
    kwargs = {}
    for key, value in params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidParameterError(f"parameter {key!r} must be a number")
        kwargs[names[key]] = value
    d = cls(**kwargs)
    total = mass(d, d.span)
    if not abs(total - 1.0) < 1e-8:
        raise InvalidParameterError(f"{kind} with {params} is not normalizable (mass {total})")
    return d


def density_from_config(config: Mapping[str, Any] | str) -> Density:
    """Parse ``{"kind": ..., "params": {...}}`` (dict or JSON text)."""
    if isinstance(config, str):
        try:
            config = json.loads(config)
        except json.JSONDecodeError as exc:
            raise InvalidParameterError(f"density config is not valid JSON: {exc}") from None
    if not isinstance(config, Mapping):
        raise InvalidParameterError("density config must be a JSON object")
    extra = set(config) - {"kind", "params"}
    if extra:
        raise InvalidParameterError(f"unknown key(s) in density config: {sorted(extra)}")
    if "kind" not in config:
        raise InvalidParameterError("density config needs a 'kind'")
    params = config.get("params", {})
    if not isinstance(params, Mapping):
        raise InvalidParameterError("'params' must be a JSON object")
    return make_density(config["kind"], params)


def density_to_config(d: Density) -> dict[str, Any]:
    _, names = CATALOG[d.kind]
    return {"kind": d.kind, "params": {k: d.params[k] for k in names}}


def verify_log_concavity(d: Density, grid_points: int = 1001, tol: float = 1e-9):
    """Scan second differences of log pdf on an equispaced interior grid.

    Returns ``(True, None)`` when every second difference is at most ``tol``
    times the local log-pdf scale, else ``(False, (x0, x1, x2))`` for the
    first violating triple.
    """
    if grid_points < 3:
        raise InvalidParameterError("grid_points must be at least 3")
    xs = np.linspace(d.span.lo, d.span.hi, grid_points + 2)[1:-1]
    logp = d.logpdf(xs)
    bad = ~np.isfinite(logp)
    if bad.any():
        x = float(xs[np.argmax(bad)])
        raise SupportSamplingError(f"density vanishes at interior grid point x={x}")
    second = logp[:-2] - 2.0 * logp[1:-1] + logp[2:]
    scale = np.maximum.reduce([np.ones_like(second), np.abs(logp[:-2]),
                               np.abs(logp[1:-1]), np.abs(logp[2:])])
    viol = np.flatnonzero(second > tol * scale)
    if viol.size:
        i = int(viol[0])
        return False, (float(xs[i]), float(xs[i + 1]), float(xs[i + 2]))
    return True, None


def total_mass_by_quadrature(d: Density) -> float:
    return integrate_piecewise(d.pdf1, d.span.lo, d.span.hi, d.breakpoints)

