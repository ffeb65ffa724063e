"""Walk through one instance: exact optimum, every strategy, the word view."""

import argparse

from convexmatch import constructive as cs
from convexmatch import harness as hs
from convexmatch import words as wd
from convexmatch.core import Mode, matching_to_path, validate_matching
from convexmatch.exact import max_separated_matching


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=40, help="number of points (even)")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--kind", default="uniform-balanced", choices=hs.KINDS)
    a = ap.parse_args()

    c = hs.generate(hs.GeneratorSpec(a.kind, a.size, a.seed))
    print(f"coloring  {c}")
    print(f"n = {c.n}, runs = {len(cs.runs(c))}")
    for mode in Mode:
        opt = max_separated_matching(c, mode).optimum if len(c) <= 400 else None
        print(f"\n[{mode.value}] exact optimum: {opt}")
        for name in hs.STRATEGIES:
            if name in ("exact", "general_mono"):
                continue
            try:
                res, _ = hs.run_strategy(name, c, mode)
            except ValueError as exc:
                print(f"  {name:<10} n/a ({exc})")
                continue
            ok = bool(validate_matching(c, res.matching))
            bound = "" if res.guaranteed_bound is None else f"  bound {float(res.guaranteed_bound):.2f}"
            print(f"  {name:<10} {res.size:>4} edges  valid={ok}{bound}")
    best = cs.portfolio(c, Mode.BI)
    path = matching_to_path(c, best.matching)
    print(f"\nportfolio winner {best.trace['winner']}: path on {len(path.vertices)} points")
    w = wd.encode(c)
    length, cert = wd.max_antipalindromic_subsequence(w)
    print(f"word {w}\nlongest circular antipalindrome {length}: "
          f"{''.join(map(str, cert.extract(w)))}")


if __name__ == "__main__":
    main()
