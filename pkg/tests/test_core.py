import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from convexmatch.core import (
    AlternatingPath,
    Coloring,
    Mode,
    SeparatedMatching,
    SplitLine,
    canonical_split,
    crosses,
    fast_witness,
    find_witness,
    first_crossing,
    make_matching,
    matching_to_path,
    run_count,
    runs,
    validate_matching,
    validate_path,
)
from convexmatch.exact import max_separated_matching

from conftest import balanced, colorings


def test_parse_and_str():
    assert str(Coloring.parse("RRBB")) == "RRBB"
    assert Coloring.parse("0101") == Coloring.parse("RBRB")
    with pytest.raises(ValueError):
        Coloring.parse("RXB")


def test_balance():
    c = Coloring.parse("RRRB")
    assert (c.n_red, c.n_blue, c.balanced) == (3, 1, False)
    with pytest.raises(ValueError):
        c.require_balanced()


@pytest.mark.parametrize("n, e1, e2, want", [
    (4, (0, 2), (1, 3), True),
    (4, (0, 1), (2, 3), False),
    (6, (0, 3), (1, 2), False),
])
def test_crosses_examples(n, e1, e2, want):
    assert crosses(e1, e2, n) is want
    assert crosses(e2, e1, n) is want


def test_crosses_rejects_shared_endpoint():
    with pytest.raises(ValueError):
        crosses((0, 1), (1, 2), 4)


@pytest.mark.parametrize("text, count", [("RRBB", 2), ("RBRB", 4), ("RRBRBB", 4), ("RRRR", 1)])
def test_runs_examples(text, count):
    assert run_count(Coloring.parse(text)) == count
    assert len(runs(Coloring.parse(text))) == count


def test_runs_pieces():
    got = [(r.start, r.length, r.color) for r in runs(Coloring.parse("RRBRBB"))]
    assert got == [(2, 1, 1), (3, 1, 0), (4, 2, 1), (0, 2, 0)] or sorted(got) == sorted(
        [(0, 2, 0), (2, 1, 1), (3, 1, 0), (4, 2, 1)])


@given(colorings(1, 40))
def test_runs_cover_every_point_once(c):
    seen = []
    for r in runs(c):
        seen += [(r.start + t) % len(c) for t in range(r.length)]
        assert all(c[(r.start + t) % len(c)] == r.color for t in range(r.length))
    assert sorted(seen) == list(range(len(c)))


def test_validate_examples():
    c = Coloring.parse("RRBB")
    ok = SeparatedMatching.build(4, [(0, 3), (1, 2)], SplitLine(2, 0), Mode.BI)
    assert validate_matching(c, ok)
    bad = SeparatedMatching.build(4, [(0, 2), (1, 3)], SplitLine(1, 3), Mode.BI)
    assert validate_matching(c, bad).condition == "crossing"
    shared = SeparatedMatching.build(4, [(0, 1), (1, 2)], SplitLine(1, 3), Mode.MONO)
    assert validate_matching(c, shared).condition == "shared_endpoint"


def test_validate_color_and_separation():
    c = Coloring.parse("RRBB")
    wrong_color = SeparatedMatching.build(4, [(0, 1)], SplitLine(1, 3), Mode.BI)
    assert validate_matching(c, wrong_color).condition == "color"
    not_split = SeparatedMatching.build(4, [(0, 3)], SplitLine(1, 2), Mode.BI)
    assert validate_matching(c, not_split).condition == "separation"


def test_find_witness_examples():
    assert find_witness(4, [(0, 3), (1, 2)]) == SplitLine(2, 0)
    assert find_witness(4, [(0, 1), (2, 3)]) == SplitLine(1, 3)
    assert find_witness(4, []) is not None
    assert find_witness(6, [(0, 1), (2, 3), (4, 5)]) is None


def test_canonical_split_puts_zero_in_b():
    for n in range(3, 9):
        for g1, g2 in itertools.permutations(range(n), 2):
            w = canonical_split(g1, g2, n)
            assert not w.in_a(0, n)
            assert {w.g1, w.g2} == {g1, g2}


@given(st.integers(2, 9).flatmap(lambda n: st.tuples(
    st.just(2 * n), st.permutations(range(2 * n)), st.integers(1, n))))
def test_fast_witness_agrees_with_scan(data):
    n_points, perm, m = data
    edges = [tuple(sorted(perm[2 * j: 2 * j + 2])) for j in range(m)]
    fast, slow = fast_witness(n_points, edges), find_witness(n_points, edges)
    assert (fast is None) == (slow is None)
    if fast is not None:
        assert all(fast.separates(e, n_points) for e in edges)


def test_first_crossing():
    assert first_crossing([(0, 2), (1, 3)], 4) is not None
    assert first_crossing([(0, 3), (1, 2)], 4) is None
    assert first_crossing([(0, 1), (1, 2)], 4) is None  # shared endpoints never cross


@given(st.integers(4, 12).flatmap(lambda n: st.lists(
    st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]),
    max_size=6).map(lambda es: (n, es))))
def test_first_crossing_matches_pairwise(data):
    n, edges = data
    pairwise = any(
        len({*a, *b}) == 4 and crosses(a, b, n) for a, b in itertools.combinations(edges, 2))
    assert (first_crossing(edges, n) is not None) == pairwise


def test_validate_path_examples():
    assert validate_path(Coloring.parse("RRBB"), AlternatingPath((0, 3, 1, 2)))
    assert validate_path(Coloring.parse("RRBB"), AlternatingPath((0, 1, 2))).condition == "alternation"
    assert validate_path(Coloring.parse("RBRB"), AlternatingPath((0, 3, 2, 1)))
    assert validate_path(Coloring.parse("RBRB"), AlternatingPath((0, 1, 0))).condition == "distinct"
    assert validate_path(Coloring.parse("RBRB"), AlternatingPath((0, 1, 2, 3, 4))).condition == "index"


def test_matching_to_path_examples():
    c = Coloring.parse("RRBB")
    m = make_matching(c, [(0, 3), (1, 2)], Mode.BI)
    assert matching_to_path(c, m).vertices == (0, 3, 1, 2)
    n = 7
    c = Coloring.parse("R" * n + "B" * n)
    m = make_matching(c, [(i, 2 * n - 1 - i) for i in range(n)], Mode.BI)
    p = matching_to_path(c, m)
    assert len(p) == 2 * n and validate_path(c, p)


@given(balanced(1, 10))
def test_matching_to_path_doubles(c):
    m = max_separated_matching(c, Mode.BI).certificate
    p = matching_to_path(c, m)
    assert len(p) == 2 * len(m)
    assert validate_path(c, p)


def test_json_round_trip():
    m = SeparatedMatching.build(4, [(0, 3), (1, 2)], SplitLine(2, 0), Mode.BI)
    assert SeparatedMatching.from_json(m.to_json()) == m
    p = AlternatingPath((0, 3, 1, 2))
    assert AlternatingPath.from_json(p.to_json()) == p


@given(colorings(1, 30), st.integers(-50, 50))
def test_rotation_keeps_counts(c, r):
    d = c.rotate(r)
    assert (d.n_red, run_count(d)) == (c.n_red, run_count(c))
    assert d.rotate(-r) == c
