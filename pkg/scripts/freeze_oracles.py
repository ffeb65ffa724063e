"""Recompute the brute-force tables stored in tests/data/oracle_values.json.

Only the enumeration oracles are used here, never the dynamic programs they
are meant to check.

    python3 scripts/freeze_oracles.py [--out tests/data/oracle_values.json]
"""

from __future__ import annotations

import argparse
import itertools
import json
from pathlib import Path

from convexmatch.core import Coloring, Mode
from convexmatch.exact import brute_force_matching, brute_force_path
from convexmatch.words import CircularWord, Kind, brute_force_subsequence

MATCH_MAX_N = 10
PATH_MAX_N = 8
WORD_MAX_N = 10


def colorings(max_n: int, min_n: int = 2):
    for n in range(min_n, max_n + 1):
        for bits in itertools.product((0, 1), repeat=n):
            yield Coloring(bits)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/data/oracle_values.json"))
    args = ap.parse_args()
    data = {"matching_bi": {}, "matching_mono": {}, "path": {}, "antipal": {}, "pal_even": {}, "pal_any": {}}
    for c in colorings(MATCH_MAX_N):
        data["matching_bi"][str(c)] = brute_force_matching(c, Mode.BI).optimum
        data["matching_mono"][str(c)] = brute_force_matching(c, Mode.MONO).optimum
    for c in colorings(PATH_MAX_N, 1):
        data["path"][str(c)] = brute_force_path(c).optimum
    for n in range(1, WORD_MAX_N + 1):
        for bits in itertools.product((0, 1), repeat=n):
            w = CircularWord(bits)
            key = str(w)
            data["antipal"][key] = brute_force_subsequence(w, Kind.ANTIPALINDROME)
            data["pal_even"][key] = brute_force_subsequence(w, Kind.EVEN_PALINDROME)
            data["pal_any"][key] = brute_force_subsequence(w, Kind.PALINDROME)
    Path(args.out).write_text(json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n")
    print(f"wrote {args.out}: " + ", ".join(f"{k}={len(v)}" for k, v in data.items()))


if __name__ == "__main__":
    main()
