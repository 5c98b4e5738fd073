import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permtab import growth
from permtab.growth import (
    ROOT,
    Extension,
    JointCountTable,
    SamplerConfig,
    StateSpaceTooLarge,
    completions_count,
    decompose,
    enumerate_tableaux,
    extension_from_index,
    extension_index,
    extensions,
    iter_extensions,
    joint_distribution_dp,
    parent,
    path_code,
    sample_path_codes,
    sample_stats,
    sample_uniform,
    tableau_from_code,
)
from permtab.rng import make_rng
from permtab.tableau import Tableau, find_violations

from conftest import tableaux


def test_root_has_two_children():
    assert extensions(ROOT) == [Tableau((0, 0), ((), ())), Tableau((1,), ((1,),))]


@given(tableaux(max_length=8))
def test_extensions_are_valid_children(t):
    kids = extensions(t)
    u = len(t.unrestricted_rows)
    assert len(kids) == 2**u
    assert len(set(kids)) == len(kids)
    for child in kids:
        assert find_violations(child.shape, child.rows) == []
        assert child.length == t.length + 1
        assert parent(child) == t


@given(tableaux(max_length=8))
def test_new_unrestricted_counts_are_binomial(t):
    u = len(t.unrestricted_rows)
    got = Counter(len(c.unrestricted_rows) for c in extensions(t))
    assert got == {v: math.comb(u, v - 1) for v in range(1, u + 2)}


@given(tableaux(max_length=8))
def test_topmost_position_counts(t):
    u = len(t.unrestricted_rows)
    got = Counter(ext.g for ext, _ in iter_extensions(t) if ext.kind == "west")
    assert got == {j: 2 ** (u - j) for j in range(1, u + 1)}


@given(st.integers(0, 10).flatmap(lambda u: st.tuples(st.just(u), st.integers(0, 2**u - 1))))
def test_extension_index_round_trip(pair):
    u, index = pair
    assert extension_index(u, extension_from_index(u, index)) == index


def test_extension_order_is_south_then_west_by_position():
    kinds = [(e.kind, e.g, e.below) for e, _ in iter_extensions(Tableau((0, 0), ((), ())))]
    assert kinds == [("south", None, ()), ("west", 1, (0,)), ("west", 1, (1,)), ("west", 2, ())]


def test_bad_extension_rejected():
    with pytest.raises(ValueError):
        growth.extend(ROOT, Extension("west", 2, ()))
    with pytest.raises(ValueError):
        extension_from_index(2, 4)


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_count(n):
    ts = list(enumerate_tableaux(n))
    assert len(ts) == math.factorial(n)
    assert len(set(ts)) == len(ts)


def test_enumeration_small_histograms():
    assert Counter(len(t.unrestricted_rows) for t in enumerate_tableaux(3)) == {1: 2, 2: 3, 3: 1}
    s4 = [t.stats().superfluous for t in enumerate_tableaux(4)]
    assert len(s4) == 24 and Fraction(sum(s4), 24) == Fraction(1, 2)


def test_enumeration_is_deterministic():
    assert list(enumerate_tableaux(5)) == list(enumerate_tableaux(5))
    assert next(enumerate_tableaux(4)) == Tableau((0, 0, 0, 0), ((),) * 4)


@pytest.mark.parametrize("n", [0, growth.ENUMERATE_MAX + 1])
def test_enumeration_bounds(n):
    with pytest.raises(ValueError):
        enumerate_tableaux(n)


def test_parent_is_unique(levels):
    for k in range(1, 7):
        seen = Counter()
        for t in levels[k]:
            seen.update(extensions(t))
        assert set(seen) == set(levels[k + 1])
        assert set(seen.values()) == {1}


def test_root_has_no_parent():
    with pytest.raises(ValueError):
        decompose(ROOT)


def test_completions_examples():
    assert completions_count(ROOT, 1) == 1
    assert completions_count(ROOT, 3) == 6
    with pytest.raises(ValueError):
        completions_count(Tableau((1,), ((1,),)), 1)


def test_completions_sum_to_factorial(levels):
    for k in range(1, 8):
        for n in range(k, 9):
            assert sum(completions_count(t, n) for t in levels[k]) == math.factorial(n)


def test_completions_match_enumeration(levels):
    n = 6
    for k in range(1, n + 1):
        through = Counter()
        for t in levels[n]:
            cur = t
            while cur.length > k:
                cur = parent(cur)
            through[cur] += 1
        assert all(through[t] == completions_count(t, n) for t in levels[k])


def test_unrestricted_chain_is_binomial(levels):
    # under the uniform law on T_n, U_{k+1} given U_k is 1 + Bin(U_k, m/(m+1)), m = n-k
    n = 7
    pairs = Counter()
    for t in levels[n]:
        path = [t]
        while path[-1].length > 1:
            path.append(parent(path[-1]))
        us = [len(x.unrestricted_rows) for x in reversed(path)]
        pairs.update((k, us[k - 1], us[k]) for k in range(1, n))
    for k in range(1, n):
        p = Fraction(n - k, n - k + 1)
        totals = Counter()
        for (kk, a, _), c in pairs.items():
            if kk == k:
                totals[a] += c
        for (kk, a, b), c in pairs.items():
            if kk == k:
                want = math.comb(a, b - 1) * p ** (b - 1) * (1 - p) ** (a - b + 1)
                assert Fraction(c, totals[a]) == want


@pytest.mark.parametrize("n", range(1, 11))
def test_path_code_round_trip(n):
    if n <= 7:
        codes = {path_code(t) for t in enumerate_tableaux(n)}
        assert len(codes) == math.factorial(n)
    rng = make_rng(n)
    for code in sample_path_codes(n, 50, rng):
        assert path_code(tableau_from_code(n, int(code))) == code


@pytest.mark.parametrize("u", range(0, 12))
@pytest.mark.parametrize("m", range(1, 6))
def test_sampler_weights_sum(u, m):
    assert growth._weight_total(u, m) == m * (m + 1) ** u


def test_sampler_length_one():
    assert sample_uniform(SamplerConfig(1, seed=3)) == ROOT


def test_sampler_config_rejects_zero():
    with pytest.raises(ValueError):
        SamplerConfig(0)


def test_sampler_is_deterministic():
    a = [sample_uniform(SamplerConfig(9, seed=11)) for _ in range(3)]
    b = [sample_uniform(SamplerConfig(9, seed=11)) for _ in range(3)]
    assert a == b
    assert all(t.length == 9 for t in a)


def test_scalar_sampler_is_uniform_on_t4():
    from scipy.stats import chisquare

    rng = make_rng(5)
    cfg = SamplerConfig(4)
    draws = Counter(sample_uniform(cfg, rng) for _ in range(24 * 300))
    support = list(enumerate_tableaux(4))
    assert set(draws) == set(support)
    assert chisquare([draws[t] for t in support]).pvalue > 1e-3


def test_vector_sampler_is_uniform_on_t5():
    from scipy.stats import chisquare

    codes = sample_path_codes(5, 120 * 1000, make_rng(8))
    support = [path_code(t) for t in enumerate_tableaux(5)]
    counts = Counter(codes.tolist())
    assert set(counts) == set(support)
    assert chisquare([counts[c] for c in support]).pvalue > 1e-3


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 40))
def test_stats_chain_means(n):
    size = 20_000
    out = sample_stats(n, size, make_rng(n))
    h1 = sum(Fraction(1, k) for k in range(1, n + 1))
    h2 = sum(Fraction(1, k * k) for k in range(1, n + 1))
    sd = math.sqrt(h1 - h2) / math.sqrt(size)
    assert abs(out["U"].mean() - float(h1)) < 5 * sd
    assert np.all(out["R"] + out["C"] == n)
    assert np.all(out["F"] <= out["C"])
    assert np.all(out["Y"] == out["S"] + out["C"])


@pytest.mark.parametrize("n", range(1, 8))
def test_dp_matches_enumeration(n, levels):
    table = joint_distribution_dp(n, ("U", "R", "F", "S"))
    brute = Counter()
    for t in levels[n]:
        st_ = t.stats()
        brute[(st_.unrestricted, st_.rows, st_.first_row_ones, st_.superfluous)] += 1
    assert table.tracked == ("U", "R", "F", "S")
    assert table.counts == dict(brute)


def test_dp_rows_example():
    assert joint_distribution_dp(3, ("R",)).marginal("R") == {1: 1, 2: 4, 3: 1}


def test_dp_json_round_trip():
    table = joint_distribution_dp(6, ("F", "S"))
    data = table.to_json()
    assert data["total"] == "720"
    assert JointCountTable.from_json(data) == table


@pytest.mark.parametrize("track", [(), ("X",), ("U", "Q")])
def test_dp_rejects_bad_track(track):
    with pytest.raises(ValueError):
        joint_distribution_dp(4, track)


def test_dp_state_guard(monkeypatch):
    monkeypatch.setattr(growth, "DP_STATE_LIMIT", 100)
    with pytest.raises(StateSpaceTooLarge):
        joint_distribution_dp(20, ("S",))
