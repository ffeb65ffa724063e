"""Exact optima for separated matchings and alternating paths.

Separated matchings
-------------------
Cut the circle at a gap ``g`` and read the points as a line. A set of
pairwise nested chords on that line is crossed by a line through ``g`` and a
gap just inside the innermost chord, and conversely every separated matching
is a nested chain once the circle is cut at one of its witness gaps. So the
optimum is the best nested chain over all cuts, which is a
palindrome-style interval recurrence evaluated on every circular interval
at once:

    G[len][i] = max(G[len-1][i+1], G[len-1][i], G[len-2][i+1] + ok(i, i+len-1))

and the answer is ``max_i G[N][i]``. This is O(N^2) time and memory.

Alternating paths
-----------------
Fix the vertex set Q of a non-crossing path q_0, ..., q_{l-1}. The chord
q_0 q_1 must have every later vertex on one side, otherwise the path would
have to cross it, so q_0 and q_1 are neighbours in the circular order of Q.
Repeating the argument on Q minus q_0 shows that the visited vertices always
form a contiguous arc of Q whose current endpoint is one of the two ends, and
the next vertex is the first unvisited point of Q just clockwise of the arc
or just counterclockwise of it. Every such zigzag sequence is non-crossing.

In terms of the original points the visited arc spans a circular interval
[L, R] and the path sits at L or R. Extending to a farther point of the same
color than the nearest admissible one only shrinks what remains available,
so each state has two moves: the nearest opposite-colored point clockwise of
R, or the nearest one counterclockwise of L. That gives an O(N^2) table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AlternatingPath,
    Coloring,
    Mode,
    SeparatedMatching,
    canonical_split,
    crosses,
    find_witness,
    make_matching,
)

BRUTE_MATCHING_MAX_N = 14
BRUTE_PATH_MAX_N = 12


@dataclass(frozen=True)
class SolveResult:
    optimum: int
    certificate: SeparatedMatching | AlternatingPath


def _match_mask(c: Coloring, mode: Mode) -> np.ndarray:
    """ok[len][i]: whether points i and i+len-1 may be matched."""
    col = np.asarray(c.colors, dtype=np.int8)
    n = len(col)
    ok = np.zeros((n + 1, n), dtype=bool)
    if n >= 2:
        idx = (np.arange(n)[None, :] + np.arange(1, n)[:, None]) % n
        other = col[idx]
        ok[2:] = (col != other) if mode is Mode.BI else (col == other)
    return ok


def matching_table(c: Coloring, mode: Mode | str = Mode.BI) -> np.ndarray:
    """The table G[len][i] described in the module docstring."""
    mode = Mode(mode)
    n = len(c)
    ok = _match_mask(c, mode)
    table = np.zeros((n + 1, n), dtype=np.int32)
    for length in range(2, n + 1):
        prev, prev2 = table[length - 1], table[length - 2]
        row = table[length]
        row[:-1] = prev2[1:]
        row[-1] = prev2[0]
        row += ok[length]
        np.maximum(row[:-1], prev[1:], out=row[:-1])
        row[-1] = max(row[-1], prev[0])
        np.maximum(row, prev, out=row)
    return table


def _traceback(c: Coloring, mode: Mode, table: np.ndarray, ok: np.ndarray,
               start: int, length: int) -> list[tuple[int, int]]:
    n = len(c)
    chain = []
    i = start
    while length >= 2:
        val = table[length][i]
        if ok[length][i] and table[length - 2][(i + 1) % n] + 1 == val:
            chain.append((i % n, (i + length - 1) % n))
            i, length = (i + 1) % n, length - 2
        elif table[length - 1][i] == val:
            length -= 1
        else:
            i, length = (i + 1) % n, length - 1
    return chain


def _chain_witness(n: int, cut: int, chain: list[tuple[int, int]]):
    if not chain:
        return canonical_split(1, 2, n)
    inner = chain[-1][0]
    return canonical_split(cut, inner + 1, n)


def solve_interval(c: Coloring, mode: Mode, table: np.ndarray, ok: np.ndarray,
                   start: int, length: int) -> SeparatedMatching:
    """Certificate for the chain counted by ``table[length][start]``.

    ``start`` is the cut gap; the interval must not wrap onto itself.
    """
    chain = _traceback(c, mode, table, ok, start, length)
    w = _chain_witness(len(c), start, chain)
    return make_matching(c, chain, mode, w)


def max_separated_matching(c: Coloring, mode: Mode | str = Mode.BI) -> SolveResult:
    """Largest separated matching (bichromatic or monochromatic), O(N^2).

    Ties go to the smallest cut index, then traceback prefers matching the
    interval's end points, then dropping the right end.
    """
    mode = Mode(mode)
    n = len(c)
    if n < 2:
        raise ValueError("need at least 2 points")
    ok = _match_mask(c, mode)
    table = matching_table(c, mode)
    start = int(np.argmax(table[n]))
    m = solve_interval(c, mode, table, ok, start, n)
    return SolveResult(len(m), m)


def _nearest(col: np.ndarray, direction: int) -> np.ndarray:
    """dist[p][x]: smallest d >= 1 with col[p + direction*d] == x, else big."""
    n = len(col)
    big = 2 * n + 2
    dist = np.full((n, 2), big, dtype=np.int64)
    for x in (0, 1):
        last = None
        order = range(2 * n - 1, -1, -1) if direction > 0 else range(2 * n)
        for q in order:
            p = q % n
            if last is not None:
                d = (last - q) * direction
                if 1 <= d < n:
                    dist[p][x] = min(dist[p][x], d)
            if col[p] == x:
                last = q
    return dist


def max_alternating_path(c: Coloring) -> SolveResult:
    """Longest non-crossing alternating path by the zigzag recurrence."""
    n = len(c)
    col = np.asarray(c.colors, dtype=np.int64)
    if n == 1:
        return SolveResult(1, AlternatingPath((0,)))
    dcw = _nearest(col, +1)
    dccw = _nearest(col, -1)
    idx = np.arange(n)
    # h[len, L, side]: vertices still addable; side 0 = at L, 1 = at R.
    h = np.zeros((n + 1, n, 2), dtype=np.int32)
    for length in range(n, 0, -1):
        right = (idx + length - 1) % n
        for side in (0, 1):
            end = idx if side == 0 else right
            opp = 1 - col[end]
            d1 = dcw[right, opp]
            d2 = dccw[idx, opp]
            ok1 = length + d1 <= n
            ok2 = length + d2 <= n
            v1 = np.where(ok1, h[np.where(ok1, length + d1, 0), idx, 1] + 1, 0)
            v2 = np.where(ok2, h[np.where(ok2, length + d2, 0),
                                 (idx - np.where(ok2, d2, 0)) % n, 0] + 1, 0)
            h[length, :, side] = np.maximum(v1, v2)
    start = int(np.argmax(h[1, :, 0]))
    verts = [start]
    L, length, side = start, 1, 0
    while h[length, L, side] > 0:
        right = (L + length - 1) % n
        opp = 1 - col[L if side == 0 else right]
        d1, d2 = int(dcw[right, opp]), int(dccw[L, opp])
        want = h[length, L, side] - 1
        if length + d1 <= n and h[length + d1, L, 1] == want:
            length += d1
            side = 1
            verts.append((L + length - 1) % n)
        else:
            L = (L - d2) % n
            length += d2
            side = 0
            verts.append(L)
    return SolveResult(len(verts), AlternatingPath(tuple(verts)))


def _nested_sets(c: Coloring, mode: Mode, lo: int, hi: int):
    if lo > hi:
        yield []
        return
    yield from _nested_sets(c, mode, lo + 1, hi)
    for q in range(lo + 1, hi + 1):
        if not mode.accepts(c[lo], c[q]):
            continue
        for inner in _nested_sets(c, mode, lo + 1, q - 1):
            for outer in _nested_sets(c, mode, q + 1, hi):
                yield [(lo, q), *inner, *outer]


def brute_force_matching(c: Coloring, mode: Mode | str = Mode.BI) -> SolveResult:
    """Enumerate every non-crossing color-valid edge set; keep separated ones."""
    mode = Mode(mode)
    n = len(c)
    if n < 2:
        raise ValueError("need at least 2 points")
    if n > BRUTE_MATCHING_MAX_N:
        raise ValueError(f"brute force limited to N <= {BRUTE_MATCHING_MAX_N}")
    best: list = []
    best_w = find_witness(n, [])
    for edges in _nested_sets(c, mode, 0, n - 1):
        if len(edges) <= len(best):
            continue
        w = find_witness(n, edges)
        if w is not None:
            best, best_w = edges, w
            if len(best) == n // 2:
                break
    return SolveResult(len(best), make_matching(c, best, mode, best_w))


def brute_force_path(c: Coloring) -> SolveResult:
    """Depth-first enumeration of all alternating non-crossing paths."""
    n = len(c)
    if n > BRUTE_PATH_MAX_N:
        raise ValueError(f"brute force limited to N <= {BRUTE_PATH_MAX_N}")
    best = [(0,)]

    def extend(path: list[int], used: set[int]):
        if len(path) > len(best[0]):
            best[0] = tuple(path)
        last = path[-1]
        for v in range(n):
            if v in used or c[v] == c[last]:
                continue
            new = (last, v)
            if any(crosses(new, (path[j], path[j + 1]), n) for j in range(len(path) - 2)):
                continue
            path.append(v)
            used.add(v)
            extend(path, used)
            used.discard(v)
            path.pop()

    for s in range(n):
        extend([s], {s})
        if len(best[0]) == n:
            break
    return SolveResult(len(best[0]), AlternatingPath(best[0]))
