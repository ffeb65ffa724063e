import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convexmatch import words as wd
from convexmatch.core import Coloring, Mode
from convexmatch.exact import max_separated_matching
from convexmatch.words import CircularWord, Kind

words = st.lists(st.integers(0, 1), min_size=1, max_size=14).map(lambda b: CircularWord(tuple(b)))
KEYS = {"antipal": Kind.ANTIPALINDROME, "pal_even": Kind.EVEN_PALINDROME, "pal_any": Kind.PALINDROME}


def solve(w, kind):
    if kind is Kind.ANTIPALINDROME:
        return wd.max_antipalindromic_subsequence(w)
    return wd.max_palindromic_subsequence(w, "even" if kind is Kind.EVEN_PALINDROME else "any")


@pytest.mark.parametrize("text,expect", [
    ("0011", (4, 4, 4)), ("0101", (4, 2, 3)), ("010011", (6, 4, 5)), ("000", (0, 2, 3)),
    ("0", (0, 0, 1)), ("01", (2, 0, 1)),
])
def test_examples(text, expect):
    w = CircularWord.parse(text)
    got = tuple(solve(w, k)[0] for k in KEYS.values())
    assert got == expect


def test_parse_and_codec():
    w = CircularWord.parse("0110")
    assert str(w) == "0110" and len(w) == 4 and str(w.rotate(1)) == "1100"
    assert str(wd.decode(w)) == "RBBR" and wd.encode(Coloring.parse("RBBR")) == w
    for bad in ("", "012", "ab"):
        with pytest.raises(ValueError):
            CircularWord.parse(bad)


def test_predicates():
    assert wd.is_antipalindrome((0, 0, 1, 1)) and not wd.is_antipalindrome((0, 1, 0))
    assert wd.is_palindrome((0, 1, 0)) and wd.is_palindrome(()) and not wd.is_palindrome((0, 1))


def test_certificate_rejects_out_of_order():
    w = CircularWord.parse("0011")
    assert wd.SubsequenceCertificate((0, 1, 2, 3), Kind.ANTIPALINDROME).verify(w)
    assert not wd.SubsequenceCertificate((0, 2, 1, 3), Kind.ANTIPALINDROME).verify(w)
    assert not wd.SubsequenceCertificate((0, 0), Kind.PALINDROME).verify(w)


def test_frozen_oracle(oracle):
    for key, kind in KEYS.items():
        for text, want in oracle[key].items():
            w = CircularWord.parse(text)
            length, cert = solve(w, kind)
            assert length == want, (key, text)
            assert len(cert.positions) == length and cert.verify(w)


@given(words)
def test_certificates_verify(w):
    for kind in KEYS.values():
        length, cert = solve(w, kind)
        assert cert.verify(w) and len(cert.positions) == length


@given(words)
def test_relations(w):
    a = solve(w, Kind.ANTIPALINDROME)[0]
    e = solve(w, Kind.EVEN_PALINDROME)[0]
    p = solve(w, Kind.PALINDROME)[0]
    assert a % 2 == 0 and e % 2 == 0 and e <= p <= e + 1
    if len(w) >= 2:
        c = wd.decode(w)
        assert a == 2 * max_separated_matching(c, Mode.BI).optimum
        assert e == 2 * max_separated_matching(c, Mode.MONO).optimum


@given(words, st.integers(0, 20))
def test_rotation_invariant(w, r):
    for kind in KEYS.values():
        assert solve(w, kind)[0] == solve(w.rotate(r), kind)[0]


@given(st.lists(st.integers(0, 1), min_size=1, max_size=10))
def test_dp_equals_brute_force(bits):
    w = CircularWord(tuple(bits))
    for kind in KEYS.values():
        assert wd.subsequence_dp(np.array([bits]), kind)[0] == wd.brute_force_subsequence(w, kind)


def test_dp_batch():
    rng = np.random.default_rng(1)
    batch = rng.integers(0, 2, size=(200, 9))
    for kind in KEYS.values():
        got = wd.subsequence_dp(batch, kind)
        want = [solve(CircularWord(tuple(int(x) for x in row)), kind)[0] for row in batch]
        assert got.tolist() == want


def test_brute_force_limit():
    with pytest.raises(ValueError):
        wd.brute_force_subsequence(CircularWord((0,) * 17), Kind.PALINDROME)
