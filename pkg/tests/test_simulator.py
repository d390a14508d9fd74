import json
import math

import numpy as np
import pytest

from silence import (DistortionKind, Interval, InvalidParameterError, SimReport, brute_force_optimal,
                     conditional_summary, make_density, simulate)
from silence.simulator import BLOCK, block_uniforms

from conftest import CATALOG_PARAMS, NON_UNIFORM, build, norm_cdf

N = 10**6


def within(report, field, target, k=3.0):
    return abs(getattr(report, field) - target) <= k * report.standard_errors[field]


def test_gaussian_unit_interval_rate():
    rep = simulate(make_density("gaussian"), Interval(-1, 1), 0.0, N, seed=7)
    assert within(rep, "empirical_rate", 2 * (1 - norm_cdf(1.0)))
    assert rep.n_ticks == N and rep.seed == 7


def test_whole_support_never_samples():
    d = make_density("exponential", {"lambda": 2})
    rep = simulate(d, d.span, d.mean, N, seed=3)
    assert rep.empirical_rate == 0.0
    assert within(rep, "empirical_mse", d.variance)


def test_degenerate_interval_always_samples():
    d = make_density("gaussian")
    rep = simulate(d, Interval(0.0, 0.0), 0.0, N, seed=3)
    assert rep.empirical_rate == 1.0
    assert rep.empirical_mse == 0.0 and rep.empirical_mae == 0.0


def test_equal_seeds_bitwise_identical():
    d = build("circular-arc")
    a = simulate(d, Interval(-0.5, 0.5), 0.0, 200_000, seed=11)
    b = simulate(d, Interval(-0.5, 0.5), 0.0, 200_000, seed=11)
    assert a == b and a.to_json() == b.to_json()
    c = simulate(d, Interval(-0.5, 0.5), 0.0, 200_000, seed=12)
    assert c.empirical_mse != a.empirical_mse


@pytest.mark.parametrize("workers", [2, 4, 7])
def test_shard_count_does_not_change_report(workers):
    d = make_density("laplace")
    n = 5 * BLOCK + 123
    serial = simulate(d, Interval(-1, 2), 0.3, n, seed=5)
    assert simulate(d, Interval(-1, 2), 0.3, n, seed=5, workers=workers) == serial


def test_block_streams_are_independent_of_length():
    u = block_uniforms(9, 3, 1000)
    assert np.array_equal(block_uniforms(9, 3, 10), u[:10])
    assert np.all((u > 0) & (u < 1))
    assert not np.array_equal(block_uniforms(9, 4, 10), u[:10])


def test_json_field_names_roundtrip():
    rep = simulate(make_density("uniform"), Interval(0.2, 0.6), 0.4, 1000, seed=1)
    data = json.loads(rep.to_json())
    assert set(data) == {"n_ticks", "seed", "empirical_rate", "empirical_mse", "empirical_mae",
                         "standard_errors"}
    assert set(data["standard_errors"]) == {"empirical_rate", "empirical_mse", "empirical_mae"}
    assert SimReport.from_json(rep.to_json()).n_ticks == 1000


def test_standard_error_is_sample_std_over_root_n():
    d = make_density("uniform")
    n = 5000
    rep = simulate(d, Interval(0.2, 0.6), 0.4, n, seed=2)
    x = d.quantile(block_uniforms(2, 0, n))
    silent = (x >= 0.2) & (x <= 0.6)
    sq = np.where(silent, (x - 0.4) ** 2, 0.0)
    assert rep.empirical_mse == pytest.approx(sq.mean(), rel=1e-12)
    assert rep.standard_errors["empirical_mse"] == pytest.approx(sq.std(ddof=1) / math.sqrt(n), rel=1e-9)


@pytest.mark.parametrize("n", [0, -5, 2.5])
def test_rejects_bad_tick_counts(n):
    with pytest.raises(InvalidParameterError):
        simulate(make_density("gaussian"), Interval(-1, 1), 0.0, n, seed=0)


def test_agreement_with_analytic_optimum():
    rng = np.random.default_rng(2024)
    kinds = sorted(NON_UNIFORM)
    for i in range(10):
        kind = kinds[i % len(kinds)]
        eta = float(rng.uniform(0.2, 0.9))
        d = build(kind)
        best = brute_force_optimal(d, eta, DistortionKind.SQUARED_ERROR)
        s = conditional_summary(d, best.interval)
        rep = simulate(d, best.interval, best.estimate, N, seed=100 + i)
        assert within(rep, "empirical_rate", 1 - s.mass), (kind, eta)
        assert within(rep, "empirical_mse", s.mass * s.cond_variance), (kind, eta)
