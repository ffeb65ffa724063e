import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from convexmatch.core import Coloring, Mode, validate_matching, validate_path
from convexmatch.exact import (
    brute_force_matching,
    brute_force_path,
    max_alternating_path,
    max_separated_matching,
)

from conftest import balanced, colorings


def test_examples():
    c = Coloring.parse("RRBB")
    bi = max_separated_matching(c, Mode.BI)
    assert bi.optimum == 2 and bi.certificate.edges == ((0, 3), (1, 2))
    mono = max_separated_matching(c, Mode.MONO)
    assert mono.optimum == 2 and mono.certificate.edges == ((0, 1), (2, 3))
    assert max_alternating_path(c).certificate.vertices == (0, 3, 1, 2)
    assert max_separated_matching(Coloring.parse("RBRB"), Mode.BI).optimum == 2
    assert max_separated_matching(Coloring.parse("RBRB"), Mode.MONO).optimum == 1


def test_dp_matches_frozen_brute_force(oracle):
    for mode, key in ((Mode.BI, "matching_bi"), (Mode.MONO, "matching_mono")):
        for text, want in oracle[key].items():
            c = Coloring.parse(text)
            sol = max_separated_matching(c, mode)
            assert sol.optimum == want, (text, mode)
            assert validate_matching(c, sol.certificate)


def test_path_dp_matches_frozen_brute_force(oracle):
    for text, want in oracle["path"].items():
        c = Coloring.parse(text)
        sol = max_alternating_path(c)
        assert sol.optimum == want, text
        assert validate_path(c, sol.certificate)


@given(colorings(2, 12), st.sampled_from(list(Mode)))
def test_brute_force_certificates_validate(c, mode):
    sol = brute_force_matching(c, mode)
    assert validate_matching(c, sol.certificate)
    assert len(sol.certificate) == sol.optimum


@given(colorings(2, 60), st.sampled_from(list(Mode)), st.integers(0, 59))
def test_optimum_is_rotation_invariant(c, mode, r):
    assert max_separated_matching(c, mode).optimum == max_separated_matching(c.rotate(r), mode).optimum


@given(balanced(1, 40))
def test_balanced_bichromatic_floor(c):
    opt = max_separated_matching(c, Mode.BI).optimum
    assert math.ceil(c.n / 2) <= opt <= c.n


@given(colorings(1, 40))
def test_path_at_least_twice_matching(c):
    path = max_alternating_path(c)
    assert validate_path(c, path.certificate)
    if len(c) >= 2:
        assert path.optimum >= 2 * max_separated_matching(c, Mode.BI).optimum


def test_brute_force_limits():
    with pytest.raises(ValueError):
        brute_force_matching(Coloring.parse("RB" * 8))
    with pytest.raises(ValueError):
        brute_force_path(Coloring.parse("RB" * 7))
    with pytest.raises(ValueError):
        max_separated_matching(Coloring.parse("R"))


def test_large_instance_runs():
    c = Coloring.parse("RRB" * 200 + "BBR" * 200)
    sol = max_separated_matching(c, Mode.BI)
    assert validate_matching(c, sol.certificate)
    assert sol.optimum >= 300
