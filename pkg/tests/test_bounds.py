import csv
import io
import math

import numpy as np
import pytest

from silence import (CurveSource, exact_curve, fig6_sweep, gauss_distortion_bound,
                     gauss_rate_bound, make_density, tau)
from silence.bounds import BRANCH, TRADEOFF_HEADER, default_k_grid, fig6_csv, matched_rate_ratio
from silence.errors import InvalidParameterError

from conftest import norm_cdf, norm_pdf

SQ3 = math.sqrt(3.0)
GAUSS = make_density("gaussian", {"mu": 0.0, "sigma": 1.0})
UNIF = make_density("uniform", {"lo": -SQ3, "hi": SQ3})
K100 = np.linspace(0.0, 4.0, 100)


def test_tau_examples():
    assert tau(make_density("gaussian")) == 1.0
    assert tau(make_density("exponential", {"lambda": 1})) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert tau(make_density("uniform")) == pytest.approx(math.sqrt(1 / 12), rel=1e-14)


def test_rate_bound_examples():
    assert gauss_rate_bound(2 / SQ3, 1.0) == pytest.approx(1 / 3, abs=1e-15)
    assert gauss_rate_bound(0.0, 1.0) == 1.0
    assert gauss_rate_bound(2.0, 1.0) == pytest.approx(1 / 9, abs=1e-16)


def test_distortion_bound_examples():
    assert gauss_distortion_bound(2 / SQ3, 1.0, 1.0) == pytest.approx(4 / 27, abs=1e-15)
    assert gauss_distortion_bound(0.0, 1.0, 1.0) == 0.0
    assert gauss_distortion_bound(3.0, 1.0, 1.0) == pytest.approx(4 / 81, abs=1e-16)


@pytest.mark.parametrize("args", [(-1.0, 1.0), (1.0, 0.0), (math.nan, 1.0)])
def test_bounds_reject_bad_arguments(args):
    with pytest.raises(InvalidParameterError):
        gauss_rate_bound(*args)
    with pytest.raises(InvalidParameterError):
        gauss_distortion_bound(*args, 1.0)


def test_exact_gaussian_k1_against_truncated_normal():
    (p,) = exact_curve(GAUSS, "symmetric-silence", [1.0])
    m = 2 * norm_cdf(1.0) - 1
    assert p.rate == pytest.approx(2 * (1 - norm_cdf(1.0)), abs=1e-13)
    assert p.rate == pytest.approx(0.3173, abs=1e-4)
    trunc_var = 1 - 2 * norm_pdf(1.0) / m
    assert p.distortion == pytest.approx(m * trunc_var, rel=1e-10)


def test_exact_uniform_whole_support():
    (p,) = exact_curve(UNIF, "symmetric-silence", [SQ3])
    assert p.rate == pytest.approx(0.0, abs=1e-15)
    assert p.distortion == pytest.approx(1.0, rel=1e-12)


def test_periodic_curve():
    pts = exact_curve(GAUSS, "periodic", [0.0, 0.5, 1.0])
    assert [p.distortion for p in pts] == pytest.approx([1.0, 0.5, 0.0], abs=1e-15)
    with pytest.raises(InvalidParameterError):
        exact_curve(GAUSS, "periodic", [1.5])
    with pytest.raises(InvalidParameterError):
        exact_curve(GAUSS, "sideways", [0.5])


def test_branch_continuity():
    lo, hi = np.nextafter(BRANCH, 0.0), np.nextafter(BRANCH, 10.0)
    for f in (lambda k: gauss_rate_bound(k, 1.0), lambda k: gauss_distortion_bound(k, 1.0, 1.0)):
        assert abs(f(lo) - f(BRANCH)) < 1e-14
        assert abs(f(hi) - f(BRANCH)) < 1e-14
    # the lower branch extended to the branch point, and the upper branch evaluated there
    assert 1 - BRANCH / SQ3 == pytest.approx(4 / 9 / BRANCH**2, abs=1e-15)


def test_rate_bound_monotone():
    r = [gauss_rate_bound(k, 1.0) for k in np.linspace(0, 10, 1001)]
    assert all(b <= a for a, b in zip(r, r[1:]))


@pytest.mark.parametrize("d", [GAUSS, UNIF], ids=["gaussian", "uniform"])
def test_exact_rate_strictly_decreasing_inside_support(d):
    ks = np.linspace(0.01, min(4.0, d.span.hi) - 0.01, 200)
    r = [p.rate for p in exact_curve(d, "symmetric-silence", ks)]
    assert all(b < a for a, b in zip(r, r[1:]))


def test_endpoint_limits():
    (small,) = exact_curve(GAUSS, "symmetric-silence", [1e-4])
    (large,) = exact_curve(GAUSS, "symmetric-silence", [12.0])
    (zero,) = exact_curve(GAUSS, "symmetric-silence", [0.0])
    assert zero.distortion == 0.0 and zero.rate == 1.0
    assert small.distortion < 1e-11
    assert large.distortion == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d", [GAUSS, UNIF], ids=["gaussian", "uniform"])
def test_rate_bound_validity(d):
    for p in exact_curve(d, "symmetric-silence", K100):
        assert p.rate <= gauss_rate_bound(p.k, tau(d)) + 1e-12


@pytest.mark.parametrize("d", [GAUSS, UNIF], ids=["gaussian", "uniform"])
def test_silence_distortion_below_mass_times_uniform_variance(d):
    # conditional variance on [-k, k] never exceeds that of the uniform, k^2 / 3
    for p in exact_curve(d, "symmetric-silence", K100):
        assert p.distortion <= (1 - p.rate) * min(d.variance, p.k**2 / 3) + 1e-12


@pytest.mark.xfail(strict=True, reason="the rate bound times min(sigma^2, k^2/3) undercuts "
                   "mass * conditional variance once the rate bound drops below the silent mass")
def test_distortion_bound_dominance_gaussian():
    for p in exact_curve(GAUSS, "symmetric-silence", K100):
        assert p.distortion <= gauss_distortion_bound(p.k, 1.0, 1.0) + 1e-12


def test_fig6_sweep_contents():
    curves = fig6_sweep(default_k_grid(0.0, 4.0, 400))
    assert set(curves) == set(CurveSource)
    ks = [p.k for p in curves[CurveSource.GAUSS_BOUND]]
    assert BRANCH in ks and ks == sorted(ks)
    for src in CurveSource:
        assert [p.k for p in curves[src]] == ks
        for p in curves[src]:
            assert 0.0 <= p.rate <= 1.0 and p.distortion >= 0.0
    branch = curves[CurveSource.GAUSS_BOUND][ks.index(BRANCH)]
    assert branch.rate == pytest.approx(1 / 3, abs=1e-15)
    for g, e in zip(curves[CurveSource.GAUSS_BOUND], curves[CurveSource.EXACT_GAUSSIAN]):
        assert g.rate == gauss_rate_bound(g.k, 1.0)
        assert g.distortion == gauss_distortion_bound(g.k, 1.0, 1.0)
        assert e.rate <= g.rate + 1e-12


def test_headline_ratio_below_a_third():
    curves = fig6_sweep(default_k_grid(0.0, 4.0, 400))
    ratio = matched_rate_ratio(curves[CurveSource.EXACT_GAUSSIAN])
    assert 0.0 < ratio < 1 / 3


def test_matched_ratio_needs_coverage():
    short = exact_curve(GAUSS, "symmetric-silence", np.linspace(0.0, 0.1, 5))
    with pytest.raises(InvalidParameterError):
        matched_rate_ratio(short)


def test_fig6_csv():
    curves = fig6_sweep([0.0, 1.0, 2.0])
    rows = list(csv.reader(io.StringIO(fig6_csv(curves))))
    assert tuple(rows[0]) == TRADEOFF_HEADER
    assert len(rows) == 1 + 4 * 4  # branch point inserted
    assert {r[0] for r in rows[1:]} == {s.value for s in CurveSource}
    zero = [r for r in rows[1:] if r[0] == "ExactGaussian" and float(r[1]) == 0.0]
    assert float(zero[0][3]) == 0.0
