"""Binary circular words and their (anti)palindromic subsequences.

Letter 0 is a red point and 1 a blue point. A circular subsequence is a
subsequence of some rotation. Reading the endpoints of a separated matching
from one of its witness gaps gives a subsequence whose first half mirrors
the second half, so maximum antipalindromes and even palindromes are twice
the maximum bichromatic and monochromatic separated matchings.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Coloring, Mode, SeparatedMatching
from .exact import matching_table, max_separated_matching, solve_interval, _match_mask


class Kind(str, enum.Enum):
    ANTIPALINDROME = "antipalindrome"
    EVEN_PALINDROME = "even-palindrome"
    PALINDROME = "palindrome"


@dataclass(frozen=True)
class CircularWord:
    bits: tuple[int, ...]

    def __post_init__(self):
        if not self.bits:
            raise ValueError("a circular word has at least one letter")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("letters must be 0 or 1")

    @classmethod
    def parse(cls, text: str) -> "CircularWord":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a binary word: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def rotate(self, r: int) -> "CircularWord":
        r %= len(self.bits)
        return CircularWord(self.bits[r:] + self.bits[:r])


def encode(c: Coloring) -> CircularWord:
    return CircularWord(tuple(c.colors))


def decode(w: CircularWord) -> Coloring:
    return Coloring(tuple(w.bits))


def is_antipalindrome(s: Sequence[int]) -> bool:
    return all(s[i] != s[-1 - i] for i in range(len(s)))


def is_palindrome(s: Sequence[int]) -> bool:
    return all(s[i] == s[-1 - i] for i in range(len(s) // 2))


@dataclass(frozen=True)
class SubsequenceCertificate:
    """Positions in the order they are read, starting just after some cut."""

    positions: tuple[int, ...]
    kind: Kind

    def extract(self, w: CircularWord) -> tuple[int, ...]:
        return tuple(w.bits[p] for p in self.positions)

    def verify(self, w: CircularWord) -> bool:
        n = len(w)
        pos = self.positions
        if len(set(pos)) != len(pos) or any(not 0 <= p < n for p in pos):
            return False
        if pos:
            offs = [(p - pos[0]) % n for p in pos]
            if offs != sorted(offs):
                return False  # not in circular order
        s = self.extract(w)
        if self.kind is Kind.ANTIPALINDROME:
            return is_antipalindrome(s)
        if self.kind is Kind.EVEN_PALINDROME:
            return len(s) % 2 == 0 and is_palindrome(s)
        return is_palindrome(s)


def _read_from_cut(n: int, cut: int, points: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(points, key=lambda p: (p - cut) % n))


def certificate_from_matching(m: SeparatedMatching, kind: Kind) -> SubsequenceCertificate:
    pts = [v for e in m.edges for v in e]
    return SubsequenceCertificate(_read_from_cut(m.n_points, m.witness.g1, pts), kind)


def max_antipalindromic_subsequence(w: CircularWord) -> tuple[int, SubsequenceCertificate]:
    if len(w) < 2:
        return 0, SubsequenceCertificate((), Kind.ANTIPALINDROME)
    m = max_separated_matching(decode(w), Mode.BI).certificate
    return 2 * len(m), certificate_from_matching(m, Kind.ANTIPALINDROME)


def max_palindromic_subsequence(w: CircularWord, parity: str = "even") -> tuple[int, SubsequenceCertificate]:
    """Longest circular palindromic subsequence, of even length or of any length.

    An odd palindrome is a nested monochromatic chain plus one center point
    outside the chain: cutting the circle at the center leaves a line of N-1
    points, so the best odd length is 1 + max over centers of the chain table.
    """
    if parity not in ("even", "any"):
        raise ValueError("parity must be 'even' or 'any'")
    n = len(w)
    if n < 2:
        even = (0, SubsequenceCertificate((), Kind.EVEN_PALINDROME))
    else:
        m = max_separated_matching(decode(w), Mode.MONO).certificate
        even = (2 * len(m), certificate_from_matching(m, Kind.EVEN_PALINDROME))
    if parity == "even":
        return even
    if n == 1:
        return 1, SubsequenceCertificate((0,), Kind.PALINDROME)
    c = decode(w)
    table = matching_table(c, Mode.MONO)
    row = table[n - 1]
    centers = [(int(row[(x + 1) % n]), x) for x in range(n)]
    best, center = max(centers, key=lambda t: (t[0], -t[1]))
    odd_len = 2 * best + 1
    if odd_len <= even[0]:
        return even[0], SubsequenceCertificate(even[1].positions, Kind.PALINDROME)
    ok = _match_mask(c, Mode.MONO)
    chain = solve_interval(c, Mode.MONO, table, ok, (center + 1) % n, n - 1).edges
    pts = [v for e in chain for v in e] + [center]
    cut = center
    if chain:
        # left end of the innermost pair, measured clockwise from the center
        inner = max(min((u - center) % n, (v - center) % n) for u, v in chain)
        cut = (center + inner + 1) % n
    return odd_len, SubsequenceCertificate(_read_from_cut(n, cut, pts), Kind.PALINDROME)


# ---------------------------------------------------------------- oracles

def subsequence_dp(words: np.ndarray, kind: Kind | str) -> np.ndarray:
    """Longest circular subsequence of the given kind for a batch of words.

    ``words`` has shape (W, N). Runs the classic longest-palindromic-subsequence
    interval recurrence on the doubled word, vectorised over the batch, and
    takes the best window of length N. Letters match when equal (palindromes)
    or different (antipalindromes); a lone center is allowed only for
    palindromes of any parity.
    """
    kind = Kind(kind)
    words = np.atleast_2d(np.asarray(words, dtype=np.int8))
    W, N = words.shape
    d = np.concatenate([words, words], axis=1)
    M = 2 * N
    single = 1 if kind is Kind.PALINDROME else 0
    prev2 = np.zeros((W, M + 1), dtype=np.int32)           # length 0, index i
    prev = np.full((W, M), single, dtype=np.int32)          # length 1
    if N == 1:
        return prev[:, 0].copy()
    for length in range(2, N + 1):
        cnt = M - length + 1
        a, b = d[:, :cnt], d[:, length - 1:length - 1 + cnt]
        match = (a != b) if kind is Kind.ANTIPALINDROME else (a == b)
        take = np.where(match, prev2[:, 1:cnt + 1] + 2, 0)
        cur = np.maximum(np.maximum(prev[:, 1:cnt + 1], prev[:, :cnt]), take)
        prev2, prev = prev, cur
    return prev[:, :N].max(axis=1)


def brute_force_subsequence(w: CircularWord, kind: Kind | str) -> int:
    """Try every subset of positions and every cyclic reading of it."""
    kind = Kind(kind)
    n = len(w)
    if n > 16:
        raise ValueError("brute force limited to N <= 16")
    bits = w.bits
    test = {Kind.ANTIPALINDROME: is_antipalindrome, Kind.PALINDROME: is_palindrome,
            Kind.EVEN_PALINDROME: lambda s: len(s) % 2 == 0 and is_palindrome(s)}[kind]
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        s = [bits[p] for p in range(n) if mask >> p & 1]
        if any(test(s[r:] + s[:r]) for r in range(size)):
            best = size
    return best
