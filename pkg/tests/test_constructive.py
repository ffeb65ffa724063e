import math
from dataclasses import replace
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexmatch import chunks as ch
from convexmatch import constructive as cs
from convexmatch.core import Coloring, Mode, run_count, validate_matching
from convexmatch.exact import max_separated_matching
from convexmatch.harness import generate, GeneratorSpec

from conftest import balanced, colorings

BI, MONO = Mode.BI, Mode.MONO


def cfg(text, k, lengths):
    return ch.configuration_from_chunks(Coloring.parse(text).colors, k, lengths)


# ---------------------------------------------------------------- parallel

def test_parallel_examples():
    assert cs.parallel_matching(1, 4) == [(0, 1), (2, 3)]
    assert cs.parallel_matching(2, 4) == [(0, 2)]
    assert [len(m) for m in cs.parallel_matchings(6)] == [2, 3, 2, 3, 2, 3]


@pytest.mark.parametrize("N", range(2, 17))
def test_parallel_partition_all_pairs(N):
    ms = cs.parallel_matchings(N)
    flat = [e for m in ms for e in m]
    assert sorted(flat) == list(combinations(range(N), 2))
    for i, m in enumerate(ms):
        w = cs.parallel_witness(i, N)
        assert all(w.separates(e, N) for e in m)


# ---------------------------------------------------------------- runs

def test_runs_examples():
    r = cs.runs_matching(Coloring.parse("RBRB"))
    assert r.guaranteed_bound == Fraction(5, 4) and r.size >= 2
    r = cs.runs_matching(Coloring.parse("RRBB"))
    assert r.guaranteed_bound is None and r.size >= 1
    with pytest.raises(ValueError):
        cs.runs_matching(Coloring.parse("RRB"))


@settings(max_examples=60)
@given(balanced(2, 128), st.sampled_from([BI, MONO]))
def test_runs_valid_and_bounded(c, mode):
    r = cs.runs_matching(c, mode)
    assert validate_matching(c, r.matching)
    if mode is BI and run_count(c) >= 4:
        assert r.size >= cs.runs_bound(c)


def test_runs_bound_fuzz_n64():
    rng = np.random.default_rng(7)
    for _ in range(50):
        c = Coloring(tuple(int(x) for x in rng.permutation([0] * 32 + [1] * 32)))
        if run_count(c) >= 4:
            assert cs.runs_matching(c).size >= cs.runs_bound(c)


# ---------------------------------------------------------------- chunk matchings

def test_chunk_matching_self_pairs():
    assert len(cs.ChunkMatching(4, 2).self_paired) == 2
    assert len(cs.ChunkMatching(4, 1).self_paired) == 0
    assert len(cs.ChunkMatching(5, 3).self_paired) == 1
    cm = cs.ChunkMatching(6, 4)
    assert all(cm.partner(cm.partner(j)) == j for j in range(6))


def test_derive_examples():
    g = cfg("RRRBBB", 3, [3, 3])
    m = cs.derive_from_chunk_matching(g, cs.ChunkMatching(2, 1), BI)
    assert len(m) == 3
    g = cfg("RBRBR", 3, [5])
    assert cs.best_chunk_matching(g, BI).size == 1
    g = cfg("RRRRRRRR", 4, [4, 4])
    assert list(cs.chunk_matching_sizes(g, MONO)) == [4, 4]


def test_best_chunk_matching_rrrbbb():
    res = cs.best_chunk_matching(cfg("RRRBBB", 3, [3, 3]))
    assert res.size == 3 and res.trace["i"] == 1 and res.trace["average"] == Fraction(3, 2)


def test_variant_preconditions():
    with pytest.raises(ValueError):
        cs.best_chunk_matching(cfg("RRRRBBBB", 4, [4, 4]), BI, "cross")
    with pytest.raises(ValueError):
        cs.best_chunk_matching(cfg("RRRBBB", 3, [3, 3]), MONO)
    with pytest.raises(ValueError):
        cs.subchunk_strategy(cfg("RRRRBBBB", 4, [4, 4]))


def _config_case(ks=(1, 2, 3, 4, 6)):
    return balanced(1, 40).flatmap(lambda c: st.tuples(
        st.just(c), st.sampled_from([k for k in ks if k <= c.n] or [1])))


@settings(max_examples=80)
@given(_config_case())
def test_chunk_average_bi(case):
    c, k = case
    g = ch.PartitionBuilder(c).configuration(k)
    if g is None:
        return
    sizes = cs.chunk_matching_sizes(g, BI)
    assert Fraction(int(sizes.sum()), len(sizes)) >= Fraction(c.n, 2)
    res = cs.best_chunk_matching(g, BI)
    assert validate_matching(c, res.matching)
    assert res.size == int(sizes.max()) >= math.ceil(c.n / 2)


@settings(max_examples=80)
@given(_config_case((2, 4, 6)))
def test_chunk_average_mono(case):
    c, k = case
    g = ch.PartitionBuilder(c).configuration(k) if k % 2 == 0 else None
    if g is None:
        return
    assert cs.chunk_average(g, MONO) >= Fraction(c.n, 2)
    assert validate_matching(c, cs.best_chunk_matching(g, MONO).matching)


@settings(max_examples=60)
@given(_config_case((3, 6, 9)))
def test_cross_and_subchunk_valid(case):
    c, k = case
    g = ch.PartitionBuilder(c).configuration(k) if k % 3 == 0 else None
    if g is None or any(x.index >= Fraction(3, 10) for x in g.chunks):
        return
    for res in (cs.best_chunk_matching(g, BI, "cross"), cs.subchunk_strategy(g, BI)):
        assert validate_matching(c, res.matching)
        assert res.size >= math.ceil(c.n / 2)
    assert cs.chunk_average(g, BI, "cross") >= cs.chunk_average(g, BI, "basic")


def test_subchunk_rrrbbb():
    res = cs.subchunk_strategy(cfg("RRRBBB", 3, [3, 3]))
    assert res.size >= 2 and validate_matching(Coloring.parse("RRRBBB"), res.matching)


# ---------------------------------------------------------------- doubling

def test_doubling_halves():
    n = 10 ** 4
    c = Coloring.parse("R" * n + "B" * n)
    res = cs.interval_doubling(c, n)
    assert validate_matching(c, res.matching)
    assert res.guaranteed_bound == Fraction(n, 2) + Fraction(n, 81)
    assert res.size >= res.guaranteed_bound


def test_doubling_bound_gating():
    c = generate(GeneratorSpec("uniform-balanced", 60, 3))
    pb = ch.PartitionBuilder(c)
    k = next((k for k in range(1, 31) if cs._low_index_chunk(pb.build(k, 0))), None)
    assert k is not None
    res = cs.interval_doubling(c, k)
    assert res.guaranteed_bound is None and validate_matching(c, res.matching)


def test_doubling_rejects_without_low_chunk():
    with pytest.raises(ValueError):
        cs.interval_doubling(Coloring.parse("RB" * 20), 5)


@settings(max_examples=40)
@given(balanced(2, 60), st.sampled_from([BI, MONO]), st.integers(1, 4))
def test_doubling_valid(c, mode, d):
    k = max(1, c.n // d)
    if cs._low_index_chunk(ch.build_partition(c, k, 0)) is None:
        return
    res = cs.interval_doubling(c, k, mode)
    assert validate_matching(c, res.matching)
    if res.guaranteed_bound is not None:
        assert res.size >= res.guaranteed_bound


# ---------------------------------------------------------------- pipeline

def test_pipeline_two_runs():
    res = cs.pipeline(Coloring.parse("R" * 5 + "B" * 5))
    assert res.size == 5 and res.trace["case"] == "two_runs"
    res = cs.pipeline(Coloring.parse("R" * 4 + "B" * 4), mode=MONO)
    assert res.size == 4


def test_pipeline_alternating():
    n = 40
    res = cs.pipeline(Coloring.parse("RB" * n))
    assert res.size >= n / 2 + n / 8


def test_pipeline_random_1024():
    for seed in range(3):
        c = generate(GeneratorSpec("uniform-balanced", 1024, seed))
        res = cs.pipeline(c)
        assert validate_matching(c, res.matching)
        assert res.size >= 256
        assert "branch" in res.trace


def test_pipeline_rejects_unbalanced():
    with pytest.raises(ValueError):
        cs.pipeline(Coloring.parse("RRB"))


def test_pipeline_reaches_p3_branches():
    K = replace(cs.PipelineConstants.desk(), eps=Fraction(1))
    seen = set()
    for L in (16, 64):
        c = generate(GeneratorSpec("noisy-blocks", 512, 0, lengths=(L,) * (512 // L), noise=0.02))
        res = cs.pipeline(c, K)
        assert validate_matching(c, res.matching)
        seen.add(res.trace.get("branch"))
    assert {"variance", "uniform_middles"} <= seen, seen


@settings(max_examples=40)
@given(balanced(64, 200), st.sampled_from([BI, MONO]))
def test_pipeline_back_mapping(c, mode):
    res = cs.pipeline(c, mode=mode)
    assert validate_matching(c, res.matching)
    t = res.trace
    if "derived" in t and "fallback" not in t:
        assert res.size == t["derived"] - t["dropped"]


def test_lift_matching_drops_moved():
    c = Coloring.parse("RRBB")
    g = cs.two_run_matching(c).matching
    m, dropped = cs.lift_matching(c, g, (0, 1, 2, 3), frozenset({1}), BI)
    assert dropped == 1 and len(m) == 1


# ---------------------------------------------------------------- general mono

def test_general_mono_examples():
    assert cs.general_monochromatic(Coloring.parse("RRRRRR")).size == 3
    assert cs.general_monochromatic(Coloring.parse("RB")).size == 0
    res = cs.general_monochromatic(Coloring.parse("RRBB"))
    assert res.size == 2 and res.trace["branch"] == "balanced"


def test_general_mono_balancing_branch():
    c = Coloring.parse("R" * 11 + "B" * 10)
    res = cs.general_monochromatic(c, eps=Fraction(1, 2))
    assert res.trace["branch"] == "balancing" and res.trace["deleted"] == 1
    assert validate_matching(c, res.matching)


@given(colorings(1, 40))
def test_general_mono_valid(c):
    res = cs.general_monochromatic(c)
    assert validate_matching(c, res.matching)
    t = res.trace["branch"]
    if t == "greedy":
        hi = max(c.n_red, c.n_blue)
        assert 2 * res.size == 2 * (hi // 2)


# ---------------------------------------------------------------- portfolio

def test_portfolio_rrbb():
    assert cs.portfolio(Coloring.parse("RRBB")).size == 2
    assert cs.portfolio_k_grid(10) == [1, 2, 3, 6, 9]
    assert cs.portfolio_k_grid(1) == [1]


@settings(max_examples=40)
@given(balanced(1, 40), st.sampled_from([BI, MONO]))
def test_portfolio_vs_exact(c, mode):
    cfg_ = cs.PortfolioConfig(exact_max_points=0)
    res = cs.portfolio(c, mode, cfg_)
    assert validate_matching(c, res.matching)
    opt = max_separated_matching(c, mode).optimum
    assert res.size <= opt
    if mode is BI:
        assert res.size >= math.ceil(c.n / 2)


def test_portfolio_threads_match_serial():
    c = generate(GeneratorSpec("uniform-balanced", 100, 11))
    a = cs.portfolio(c, BI, cs.PortfolioConfig(threads=1))
    b = cs.portfolio(c, BI, cs.PortfolioConfig(threads=4))
    assert a.size == b.size and a.trace["winner"] == b.trace["winner"]
