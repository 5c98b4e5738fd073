import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare, kstest

from permtab.clt import (
    ExperimentConfig,
    draw,
    exact_ks,
    exact_normalizers,
    ks_normal,
    ks_normal_exact,
    normalizers,
    pattern_covariances,
    run_mc,
    sample_records,
    variance_ratio,
)
from permtab.distribution import DistributionTable
from permtab.exact import distribution_from_pgf, moment_formulas, pgf_unrestricted
from permtab.rng import make_rng


def test_normalizer_examples():
    assert normalizers("R", 11) == (6, 1)
    assert normalizers("S", 30) == (75, math.sqrt(30**3 / 180))
    assert normalizers("pattern31_2", 30) == normalizers("S", 30)
    assert normalizers("U", 100) == (math.log(100), math.sqrt(math.log(100)))
    assert normalizers("F", 100) == normalizers("U", 100)


@pytest.mark.parametrize("stat, n", [("Q", 10), ("S", 1), ("U", 0)])
def test_normalizer_errors(stat, n):
    with pytest.raises(ValueError):
        normalizers(stat, n)


@pytest.mark.parametrize("n", [2, 3, 10, 57])
def test_exact_normalizers_match_moment_table(n):
    m = moment_formulas(n)
    assert exact_normalizers("U", n) == pytest.approx((float(m.mean_U), math.sqrt(m.var_U)), rel=1e-12)
    assert exact_normalizers("F", n) == pytest.approx((float(m.mean_F), math.sqrt(m.var_F)), rel=1e-12)
    assert exact_normalizers("S", n) == pytest.approx((float(m.mean_S), math.sqrt(m.var_S)), rel=1e-12, abs=1e-12)


def test_ks_examples():
    assert ks_normal(np.zeros(10)) == 0.5
    assert ks_normal([0.0]) == 0.5
    with pytest.raises(ValueError):
        ks_normal([])


def test_ks_large_normal_sample():
    x = make_rng(1).standard_normal(1_000_000)
    d = ks_normal(x)
    assert d < 0.005
    assert d == pytest.approx(kstest(x, "norm").statistic, abs=1e-12)


def test_ks_order_invariant():
    x = make_rng(2).standard_normal(1000) * 1.3 + 0.2
    assert ks_normal(x) == ks_normal(x[::-1]) == ks_normal(np.sort(x))
    assert ks_normal(x) == pytest.approx(kstest(x, "norm").statistic, abs=1e-12)


def test_ks_exact_lattice():
    assert ks_normal_exact(DistributionTable(1, {0: 1}), 0.0, 1.0) == 0.5
    d = ks_normal_exact(DistributionTable(2, {-1: 1, 1: 1}), 0.0, 1.0)
    assert d == pytest.approx(0.5 - 0.15865525393145707, abs=1e-12)


def test_exact_ks_reports_a_distance():
    for stat in ("U", "R", "S"):
        assert 0 <= exact_ks(stat, 30) <= 1
    assert exact_ks("S", 60) < exact_ks("S", 20)


def test_records_sampler_exact_law():
    n, size = 6, 720 * 200
    counts = Counter(sample_records(n, size, make_rng(3)).tolist())
    law = distribution_from_pgf(pgf_unrestricted(n), n)
    expected = [size * c / law.total for c in law.counts.values()]
    observed = [counts[k] for k in law.counts]
    assert sum(observed) == size
    assert chisquare(observed, expected).pvalue > 1e-3


def test_records_sampler_mean_at_large_n():
    n, size = 10**6, 50_000
    x = sample_records(n, size, make_rng(4))
    mean, sd = exact_normalizers("U", n)
    assert abs(x.mean() - mean) < 5 * sd / math.sqrt(size)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(statistic="Y", n=10, trials=5, source="permutation"),
        dict(statistic="S", n=10, trials=5, source="indicator"),
        dict(statistic="pattern31_2", n=10, trials=5, source="tableau"),
        dict(statistic="S", n=10, trials=0),
        dict(statistic="S", n=1, trials=5),
        dict(statistic="W", n=10, trials=5),
        dict(statistic="S", n=10, trials=5, source="urn"),
        dict(statistic="S", n=10, trials=5, normalization="other"),
    ],
)
def test_config_errors(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(**kwargs)


@pytest.mark.parametrize("source, stat", [("tableau", "R"), ("permutation", "S"), ("indicator", "U")])
def test_run_mc_independent_of_threads(source, stat):
    one = run_mc(ExperimentConfig(stat, 50, 45_000, source, seed=5, threads=1))
    three = run_mc(ExperimentConfig(stat, 50, 45_000, source, seed=5, threads=3))
    assert one.mean == three.mean and one.ks_distance == three.ks_distance
    assert one.config["threads"] == 1 and three.config["threads"] == 3


def test_run_mc_reproducible_and_stable_under_doubling():
    cfg = ExperimentConfig("S", 60, 20_000, "tableau", seed=6)
    a, b = run_mc(cfg), run_mc(cfg)
    assert a.to_json() == b.to_json()
    big = run_mc(ExperimentConfig("S", 60, 40_000, "tableau", seed=6))
    assert abs(big.mean - a.mean) < 6 * math.sqrt(a.variance / 20_000)


def test_sources_agree_on_unrestricted():
    n = 300
    a = run_mc(ExperimentConfig("U", n, 30_000, "tableau", seed=7))
    b = run_mc(ExperimentConfig("U", n, 30_000, "permutation", seed=7))
    c = run_mc(ExperimentConfig("U", n, 30_000, "indicator", seed=7))
    band = 5 * math.sqrt(2 / 30_000)
    assert abs(a.mean) < band and abs(b.mean) < band and abs(c.mean) < band


def test_sources_agree_on_rows_and_columns():
    n = 200
    rng = make_rng(8)
    for stat in ("R", "C"):
        x = draw(stat, "tableau", n, 20_000, rng)
        y = draw(stat, "permutation", n, 20_000, rng)
        sd = math.sqrt((n + 1) / 12)
        assert abs(x.mean() - y.mean()) < 5 * sd * math.sqrt(2 / 20_000)


def test_total_ones_mean():
    n, size = 1000, 4000
    report = run_mc(ExperimentConfig("Y", n, size, "tableau", seed=9, normalization="asymptotic"), keep_samples=True)
    y = report.samples.astype(float)
    target = float(moment_formulas(n).mean_S) + (n - 1) / 2
    assert abs(y.mean() - target) < 3 * y.std() / math.sqrt(size)
    # the centring n^2/12 is off by a term of order n
    assert abs(report.raw_mean - n * n / 12) < 2 * n


def test_report_outputs():
    report = run_mc(ExperimentConfig("R", 20, 100, seed=10), keep_samples=True)
    data = report.to_json()
    assert set(data) >= {"config", "center", "scale", "mean", "variance", "skewness", "ks_distance", "rng"}
    assert data["config"]["seed"] == 10
    lines = report.samples_csv().splitlines()
    assert lines[0] == "raw,normalized" and len(lines) == 101
    raw, norm = lines[1].split(",")
    assert float(norm) == pytest.approx((int(raw) - report.center) / report.scale)
    assert 0 <= report.ks_distance <= 1


def test_pattern_constants():
    pc = pattern_covariances()
    assert pc.single == Fraction(1, 6)
    assert list(pc.expectations.values()) == [
        Fraction(1, 12), Fraction(1, 30), Fraction(1, 120), Fraction(1, 120), Fraction(1, 40), Fraction(1, 40)
    ]
    assert pc.coefficient == Fraction(1, 180)


def test_variance_ratio_converges():
    assert abs(variance_ratio(10**4) - 1) < Fraction(1, 100)
    assert variance_ratio(10) != 1
