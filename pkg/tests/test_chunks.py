from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from convexmatch import chunks as ch
from convexmatch.chunks import Chunk, Direction
from convexmatch.core import BLUE, RED, Coloring

from conftest import balanced


def _partition_case(draw_n=24):
    return balanced(1, draw_n).flatmap(lambda c: st.tuples(
        st.just(c), st.integers(1, c.n), st.integers(0, 4)))


def test_k1_single_points():
    p = ch.build_partition(Coloring.parse("RRBB"), 1, 0)
    assert len(p.chunks) == 4 and not p.uncovered
    assert all(x.index == 0 and x.length == 1 for x in p.chunks)


def test_rrbb_k2():
    p = ch.build_partition(Coloring.parse("RRBB"), 2, 0)
    assert sorted((x.color, x.length, x.index) for x in p.chunks) == [(RED, 2, 0), (BLUE, 2, 0)]
    assert not p.uncovered
    rep = ch.check_prop_2_2(p)
    assert rep.ok


def test_alternating_k2_first_chunk():
    # even k walks counterclockwise from the last point
    p = ch.build_partition(Coloring.parse("RB" * 4), 2, 0)
    first = p.chunks[0]
    assert (first.start, first.length, first.color, first.index) == (7, 3, BLUE, Fraction(1, 2))
    assert first.direction is Direction.CCW
    assert p.uncovered == frozenset({0, 1})


def test_summarize_examples():
    red = [Chunk(0, 5, RED, 3, 2, param=3), Chunk(5, 3, RED, 3, 0, param=3)]
    blue = [Chunk(8, 4, BLUE, 1, 3, param=3), Chunk(12, 5, BLUE, 2, 3, param=3)]
    s = ch.summarize(red + blue)
    assert (s.avg_red, s.avg_blue, s.index, s.max_color) == (Fraction(1, 3), Fraction(1, 2), Fraction(1, 2), BLUE)
    s = ch.summarize([Chunk(0, 7, RED, 4, 3, param=4)])
    assert (s.avg_blue, s.index) == (0, Fraction(3, 4))
    s = ch.summarize(ch.build_partition(Coloring.parse("RRRBBB"), 3, 0))
    assert (s.avg_red, s.avg_blue, s.index) == (0, 0, 0)


def test_prop_2_2_negative():
    c = Coloring.parse("RRBB")
    p = ch.build_partition(c, 2, 0)
    forged = ch.KLambdaPartition(4, 2, 0, 0, p.chunks * 3, frozenset(), c.colors)
    assert not ch.check_prop_2_2(forged).ok


def test_to_configuration_examples():
    g = ch.to_configuration(ch.build_partition(Coloring.parse("RRBB"), 2, 0))
    assert g is not None and len(g.chunks) == 2
    assert ch.to_configuration(ch.build_partition(Coloring.parse("RB" * 4), 2, 0)) is None
    g = ch.to_configuration(ch.build_partition(Coloring.parse("RRRBBB"), 3, 0))
    assert [x.index for x in g.chunks] == [0, 0]
    assert ch.check_prop_2_3(g).ok


def test_prop_2_3_negative():
    rep = ch.check_prop_2_3(n=5, k=2, R=2, B=1, alpha=Fraction(1, 2), beta=Fraction(0))
    assert not rep.ok


def test_subdivide_examples():
    g = ch.to_configuration(ch.build_partition(Coloring.parse("RRRBBB"), 3, 0))
    sub = ch.subdivide(g)
    assert sub.k == 1 and len(sub.chunks) == 6
    assert [i for i, m in enumerate(sub.middle) if m] == [1, 4]
    bad = ch.configuration_from_chunks(Coloring.parse("RBRRBRRR" + "B" * 6).colors, 6, [8, 6])
    assert bad.chunks[0].index == Fraction(1, 3)
    with pytest.raises(ValueError):
        ch.subdivide(bad)
    with pytest.raises(ValueError):
        ch.subdivide(ch.configuration_from_chunks(Coloring.parse("RRRRBBBB").colors, 4, [4, 4]))


@given(_partition_case())
def test_partition_invariants(case):
    c, k, lam = case
    p = ch.build_partition(c, k, lam)
    N = len(c)
    covered = [q for x in p.chunks for q in x.points(N)]
    assert len(covered) == len(set(covered))
    assert set(covered) | p.uncovered == set(range(N))
    assert len(p.uncovered) <= 2 * k - 2
    assert all(v <= k - 1 for v in p.uncovered_counts)
    for x in p.chunks:
        assert x.majority == x.k and x.minority < x.k
        assert 0 <= x.index <= Fraction(x.k - 1, x.k)
    assert ch.check_prop_2_2(p).ok


@given(_partition_case())
def test_configurations_satisfy_prop_2_3(case):
    c, k, _ = case
    g = ch.to_configuration(ch.build_partition(c, k, 0))
    if g is not None:
        assert ch.check_prop_2_3(g).ok
        assert ch.PartitionBuilder(c).configuration(k) == g


@given(_partition_case())
def test_fast_indices_match_summaries(case):
    c, k, lam = case
    pb = ch.PartitionBuilder(c)
    lam = min(lam, pb.max_lambda(k))
    for j, (ar, ab) in enumerate(pb.indices(k, lam)):
        s = ch.summarize(pb.build(k, j))
        assert (ar, ab) == (s.avg_red, s.avg_blue)


@given(balanced(3, 30).flatmap(lambda c: st.tuples(st.just(c), st.sampled_from(
    [k for k in (3, 6, 9) if k <= c.n] or [3]))))
def test_subdivide_keeps_averages(case):
    c, k = case
    if k > c.n:
        return
    g = ch.to_configuration(ch.build_partition(c, k, 0))
    if g is None or any(x.index >= Fraction(3, 10) for x in g.chunks):
        return
    s0, s1 = ch.summarize(g), ch.summarize(ch.subdivide(g))
    assert (s0.avg_red, s0.avg_blue) == (s1.avg_red, s1.avg_blue)


def _check_rearrangement(c, r):
    N = len(c)
    assert sorted(r.origin) == list(range(N))
    assert r.coloring.colors == tuple(c.colors[o] for o in r.origin)
    assert ch.check_prop_2_3(r.configuration).ok
    unmoved = [o for o in r.origin if o not in r.moved]
    # unmoved points keep their cyclic order
    start = unmoved.index(min(unmoved)) if unmoved else 0
    rot = unmoved[start:] + unmoved[:start]
    assert rot == sorted(rot)


def test_rearrange_identity():
    c = Coloring.parse("RRRBBB")
    p = ch.build_partition(c, 3, 0)
    r = ch.rearrange_to_P2(c, p)
    assert r.moved == frozenset() and r.coloring == c
    r3 = ch.rearrange_to_P3(c, r.configuration)
    assert r3.moved == frozenset()


def test_rearrange_p3_strips_high_index():
    c = Coloring.parse("R" * 5 + "B" * 5 + "R" * 35 + "B" * 35 + "R" * 5 + "B" * 5)
    g = ch.configuration_from_chunks(c.colors, 10, [15, 10, 10, 10, 10, 10, 10, 15])
    assert g.chunks[0].index == Fraction(1, 2)
    r = ch.rearrange_to_P3(c, g)
    assert r.moved and all(x.index < Fraction(3, 10) for x in r.configuration.chunks)
    _check_rearrangement(c, r)


@given(balanced(4, 60).flatmap(lambda c: st.tuples(
    st.just(c), st.integers(1, max(1, c.n // 3)), st.integers(0, 3))))
def test_rearrange_p2_properties(case):
    c, k, lam = case
    p = ch.build_partition(c, k, lam)
    try:
        r = ch.rearrange_to_P2(c, p)
    except ValueError:
        return  # no room to place leftovers at this size
    _check_rearrangement(c, r)
    assert len(r.moved) <= len(p.uncovered) + 6 * p.lambda_effective
    if r.max_groups_per_chunk <= 1:
        before = {x.as_cw(len(c)).start: x.index for x in p.chunks if x.k == k}
        for x in r.configuration.chunks:
            pts = [r.origin[q] for q in x.points(len(c))]
            if x.color is not None and pts and pts[0] in before:
                assert abs(x.index - before[pts[0]]) <= Fraction(6, k + 3) + Fraction(1, k)


def test_index_stability_small():
    c = Coloring.parse("RRRBBB")
    d = ch.index_stability_check(c, 3, 0)
    assert d["d_avg_red"] == 0 and d["d_avg_blue"] == 0
    assert d["dR"] <= 6 and not d["preconditions"]


@given(balanced(2, 40).flatmap(lambda c: st.tuples(
    st.just(c), st.integers(1, c.n), st.integers(0, 3))))
def test_index_stability_structure(case):
    c, k, lam = case
    d = ch.index_stability_check(c, k, lam)
    assert d["dR"] <= 6 and d["dB"] <= 6
