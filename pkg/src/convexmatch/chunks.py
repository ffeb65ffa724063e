"""k-chunks, (k, lambda)-partitions, k-configurations and their indices.

A k-chunk is a block of consecutive points holding exactly k points of one
color (its majority color) and fewer than k of the other. Its index is the
minority count divided by its majority parameter. All indices and averages
are ``fractions.Fraction`` so the counting identities hold exactly.

Throughout, ``n`` is the number of points per color and ``N = 2n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .core import BLUE, RED, Coloring


class Direction(str, enum.Enum):
    CW = "cw"
    CCW = "ccw"


@dataclass(frozen=True)
class Chunk:
    """A block of consecutive points walked from ``start`` in ``direction``."""

    start: int
    length: int
    color: int
    r_count: int
    b_count: int
    direction: Direction = Direction.CW
    param: int = 0  # majority parameter; 0 means the majority count itself

    @property
    def k(self) -> int:
        return self.param or max(self.r_count, self.b_count)

    @property
    def minority(self) -> int:
        return self.b_count if self.color == RED else self.r_count

    @property
    def majority(self) -> int:
        return self.r_count if self.color == RED else self.b_count

    @property
    def index(self) -> Fraction:
        return Fraction(self.minority, self.k)

    def points(self, n_points: int) -> list[int]:
        step = 1 if self.direction is Direction.CW else -1
        return [(self.start + step * j) % n_points for j in range(self.length)]

    def cw_start(self, n_points: int) -> int:
        """First point of the chunk in clockwise order."""
        if self.direction is Direction.CW:
            return self.start % n_points
        return (self.start - self.length + 1) % n_points

    def as_cw(self, n_points: int) -> "Chunk":
        return Chunk(self.cw_start(n_points), self.length, self.color,
                     self.r_count, self.b_count, Direction.CW, self.param)

    def to_dict(self) -> dict:
        return {"start": self.start, "length": self.length, "color": "RB"[self.color],
                "r": self.r_count, "b": self.b_count, "direction": self.direction.value,
                "k": self.k, "index": str(self.index)}


@dataclass(frozen=True)
class KLambdaPartition:
    n_points: int
    k: int
    lam: int
    lambda_effective: int
    chunks: tuple[Chunk, ...]  # counter-direction (k+3)-chunks first
    uncovered: frozenset[int]
    colors: tuple[int, ...] = field(default=(), repr=False)

    @property
    def uncovered_counts(self) -> tuple[int, int]:
        blue = sum(self.colors[q] for q in self.uncovered)
        return len(self.uncovered) - blue, blue

    @property
    def counter_chunks(self) -> tuple[Chunk, ...]:
        return self.chunks[: self.lambda_effective]

    @property
    def main_chunks(self) -> tuple[Chunk, ...]:
        return self.chunks[self.lambda_effective:]


@dataclass(frozen=True)
class KConfiguration:
    """Chunks in clockwise order covering every point; majority exactly k."""

    n_points: int
    k: int
    chunks: tuple[Chunk, ...]
    middle: tuple[bool, ...] = field(default=())
    colors: tuple[int, ...] = field(default=(), repr=False)

    def chunk_of_point(self) -> list[int]:
        owner = [-1] * self.n_points
        for j, ch in enumerate(self.chunks):
            for p in ch.points(self.n_points):
                owner[p] = j
        return owner


@dataclass(frozen=True)
class IndexSummary:
    avg_red: Fraction
    avg_blue: Fraction
    index: Fraction
    max_color: int
    min_color: int
    n_red_chunks: int
    n_blue_chunks: int


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: Fraction
    rhs: Fraction
    ok: bool

    @property
    def slack(self) -> Fraction:
        return abs(self.lhs - self.rhs) if self.ok else -abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class PropReport:
    checks: tuple[Inequality, ...]

    @property
    def ok(self) -> bool:
        return all(ch.ok for ch in self.checks)

    @property
    def failures(self) -> list[Inequality]:
        return [ch for ch in self.checks if not ch.ok]

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [
            {"name": ch.name, "lhs": str(ch.lhs), "rhs": str(ch.rhs), "ok": ch.ok,
             "slack": str(ch.slack)} for ch in self.checks]}


def _leq(name, a, b) -> Inequality:
    a, b = Fraction(a), Fraction(b)
    return Inequality(name, a, b, a <= b)


def _geq(name, a, b) -> Inequality:
    a, b = Fraction(a), Fraction(b)
    return Inequality(name, a, b, a >= b)


def _gt(name, a, b) -> Inequality:
    a, b = Fraction(a), Fraction(b)
    return Inequality(name, a, b, a > b)


def _eq(name, a, b) -> Inequality:
    a, b = Fraction(a), Fraction(b)
    return Inequality(name, a, b, a == b)


# ---------------------------------------------------------------- greedy chunks

class _ChunkFinder:
    """Shortest clockwise chunks on a fixed linear sequence in O(1) each."""

    def __init__(self, colors: Sequence[int]):
        col = np.asarray(colors, dtype=np.int64)
        self.col = col
        self.n = len(col)
        self.pos = [np.flatnonzero(col == RED), np.flatnonzero(col == BLUE)]
        blue_before = np.concatenate(([0], np.cumsum(col)))
        self.before = [np.arange(self.n + 1) - blue_before, blue_before]

    def end(self, start: int, k: int) -> int | None:
        """Exclusive end of the shortest chunk from ``start``, or None."""
        best = None
        for x in (RED, BLUE):
            j = self.before[x][start] + k - 1
            if j < len(self.pos[x]):
                e = int(self.pos[x][j]) + 1
                best = e if best is None else min(best, e)
        return best

    def sequence(self, k: int, limit: int) -> list[tuple[int, int]]:
        """Consecutive shortest k-chunks from position 0 inside [0, limit)."""
        out = []
        s = 0
        while True:
            e = self.end(s, k)
            if e is None or e > limit:
                return out
            out.append((s, e))
            s = e

    def counts(self, s: int, e: int) -> tuple[int, int]:
        b = int(self.before[BLUE][e] - self.before[BLUE][s])
        return (e - s) - b, b


def _make_chunk(finder: _ChunkFinder, s: int, e: int, param: int,
                direction: Direction, n_points: int) -> Chunk:
    r, b = finder.counts(s, e)
    color = RED if r == param else BLUE
    start = s if direction is Direction.CW else n_points - 1 - s
    return Chunk(start, e - s, color, r, b, direction, param)


class PartitionBuilder:
    """Builds many (k, lambda)-partitions of one coloring cheaply.

    For odd k the k-chunks run clockwise from point 0 and the (k+3)-chunks
    counterclockwise from point N-1; for even k the two directions swap.
    """

    def __init__(self, c: Coloring):
        c.require_balanced()
        self.c = c
        self.N = len(c)
        self.fwd = _ChunkFinder(c.colors)
        self.rev = _ChunkFinder(c.colors[::-1])
        self._seq: dict[tuple[bool, int], list[tuple[int, int]]] = {}

    def _roles(self, k: int):
        if k % 2 == 1:
            return self.fwd, Direction.CW, self.rev, Direction.CCW
        return self.rev, Direction.CCW, self.fwd, Direction.CW

    def _sequence(self, finder: _ChunkFinder, k: int) -> list[tuple[int, int]]:
        key = (finder is self.fwd, k)
        if key not in self._seq:
            self._seq[key] = finder.sequence(k, self.N)
        return self._seq[key]

    def _check(self, k: int, lam: int) -> None:
        if not 1 <= k <= self.c.n:
            raise ValueError(f"k must lie in [1, {self.c.n}], got {k}")
        if lam < 0:
            raise ValueError("lambda must be non-negative")

    def build(self, k: int, lam: int = 0) -> KLambdaPartition:
        self._check(k, lam)
        N = self.N
        main, main_dir, counter, counter_dir = self._roles(k)
        counter_seq = self._sequence(counter, k + 3) if lam > 0 else []
        lam_eff = min(lam, len(counter_seq))
        taken = counter_seq[:lam_eff]
        reserved = taken[-1][1] if taken else 0
        main_seq = [se for se in self._sequence(main, k) if se[1] <= N - reserved]
        chunks = [_make_chunk(counter, s, e, k + 3, counter_dir, N) for s, e in taken]
        chunks += [_make_chunk(main, s, e, k, main_dir, N) for s, e in main_seq]
        covered = np.zeros(N, dtype=bool)
        for ch in chunks:
            covered[ch.points(N)] = True
        uncovered = frozenset(int(p) for p in np.flatnonzero(~covered))
        return KLambdaPartition(N, k, lam, lam_eff, tuple(chunks), uncovered, self.c.colors)

    def configuration(self, k: int) -> KConfiguration | None:
        """The (k, 0)-partition as a configuration when it leaves nothing uncovered."""
        self._check(k, 0)
        main, main_dir, _, _ = self._roles(k)
        seq = self._sequence(main, k)
        if not seq or seq[-1][1] != self.N:
            return None
        chunks = [_make_chunk(main, s, e, k, main_dir, self.N) for s, e in seq]
        return KConfiguration(self.N, k, _cw_sorted(chunks, self.N), colors=self.c.colors)

    def max_lambda(self, k: int) -> int:
        """Largest lambda whose partition still holds a k-chunk (capped by availability)."""
        main, _, counter, _ = self._roles(k)
        ends = [e for _, e in self._sequence(main, k)]
        if not ends:
            return 0
        lam = 0
        for _, e in self._sequence(counter, k + 3) if k + 3 <= self.c.n else []:
            if ends[0] > self.N - e:
                break
            lam += 1
        return lam

    def indices(self, k: int, lam_max: int) -> list[tuple[Fraction, Fraction]]:
        """(avg_red, avg_blue) for lambda = 0..lam_max without building chunks."""
        main, _, counter, _ = self._roles(k)
        N = self.N

        def tallies(finder, seq, param):
            out = [(0, 0, 0, 0)]  # red count, red minority, blue count, blue minority
            for s, e in seq:
                r, b = finder.counts(s, e)
                rc, rm, bc, bm = out[-1]
                out.append((rc + 1, rm + b, bc, bm) if r == param else (rc, rm, bc + 1, bm + r))
            return out

        main_seq = self._sequence(main, k)
        ctr_seq = self._sequence(counter, k + 3) if lam_max > 0 and k + 3 <= self.c.n else []
        mt = tallies(main, main_seq, k)
        ct = tallies(counter, ctr_seq, k + 3)
        ends = np.array([e for _, e in main_seq], dtype=np.int64)
        res = []
        for lam in range(lam_max + 1):
            le = min(lam, len(ctr_seq))
            reserved = ctr_seq[le - 1][1] if le else 0
            m = int(np.searchsorted(ends, N - reserved, side="right"))
            rc1, rm1, bc1, bm1 = mt[m]
            rc2, rm2, bc2, bm2 = ct[le]
            ar = (Fraction(rm1, k) + Fraction(rm2, k + 3)) / (rc1 + rc2) if rc1 + rc2 else Fraction(0)
            ab = (Fraction(bm1, k) + Fraction(bm2, k + 3)) / (bc1 + bc2) if bc1 + bc2 else Fraction(0)
            res.append((ar, ab))
        return res


def build_partition(c: Coloring, k: int, lam: int = 0) -> KLambdaPartition:
    """The greedy (k, lambda)-partition; see ``PartitionBuilder`` for directions."""
    return PartitionBuilder(c).build(k, lam)


# ---------------------------------------------------------------- indices

def summarize(p: KLambdaPartition | KConfiguration | Sequence[Chunk]) -> IndexSummary:
    """Average red and blue indices; ties make red the max-index color."""
    chunks = p if isinstance(p, (list, tuple)) else p.chunks
    red = [ch.index for ch in chunks if ch.color == RED]
    blue = [ch.index for ch in chunks if ch.color == BLUE]
    avg_r = sum(red, Fraction(0)) / len(red) if red else Fraction(0)
    avg_b = sum(blue, Fraction(0)) / len(blue) if blue else Fraction(0)
    top = RED if avg_r >= avg_b else BLUE
    return IndexSummary(avg_r, avg_b, max(avg_r, avg_b), top, 1 - top, len(red), len(blue))


def check_prop_2_2(p: KLambdaPartition) -> PropReport:
    """Uncovered-point and chunk-count bounds of a (k, lambda)-partition."""
    n = Fraction(p.n_points, 2)
    k = p.k
    s = summarize(p)
    R, B = s.n_red_chunks, s.n_blue_chunks
    alpha = s.index
    hi, lo = max(R, B), min(R, B)
    unc_r, unc_b = p.uncovered_counts
    checks = [
        _leq("uncovered <= 2k-2", len(p.uncovered), 2 * k - 2),
        _leq("uncovered red <= k-1", unc_r, k - 1),
        _leq("uncovered blue <= k-1", unc_b, k - 1),
        _leq("R+B <= 2n/k", R + B, 2 * n / k),
        _leq("max(R,B) <= n/k", hi, n / k),
    ]
    f5 = math.floor(2 * n / (2 * k + 5))
    checks += [
        _geq("R+B >= floor(2n/(2k+5))", R + B, f5),
        _gt("floor(2n/(2k+5)) > 2n/(7k)-1", f5, 2 * n / (7 * k) - 1),
        _geq("max(R,B) >= floor(2n/(2k+5))/2", hi, Fraction(f5, 2)),
        _gt("floor(2n/(2k+5))/2 > n/(7k)-1/2", Fraction(f5, 2), n / (7 * k) - Fraction(1, 2)),
        _geq("min(R,B) >= (1-a)/2 floor(2n/(2k+5)) - (k-1)/(k+3)",
             lo, (1 - alpha) / 2 * f5 - Fraction(k - 1, k + 3)),
        _gt("(1-a)/2 floor(2n/(2k+5)) - (k-1)/(k+3) > (1-a)n/(7k)-2",
            (1 - alpha) / 2 * f5 - Fraction(k - 1, k + 3), (1 - alpha) * n / (7 * k) - 2),
    ]
    if p.lam == 0:
        f1 = math.floor(2 * n / (2 * k - 1))
        checks += [
            _geq("R+B >= floor(2n/(2k-1))", R + B, f1),
            _geq("floor(2n/(2k-1)) >= n/k-1", f1, n / k - 1),
            _geq("max(R,B) >= floor(2n/(2k-1))/2", hi, Fraction(f1, 2)),
            _gt("floor(2n/(2k-1))/2 > n/(2k)-1/2", Fraction(f1, 2), n / (2 * k) - Fraction(1, 2)),
            _geq("min(R,B) >= (1-a)/2 floor(2n/(2k-1)) - (k-1)/k",
                 lo, (1 - alpha) / 2 * f1 - Fraction(k - 1, k)),
            _gt("(1-a)/2 floor(2n/(2k-1)) - (k-1)/k > (1-a)n/(2k)-2",
                (1 - alpha) / 2 * f1 - Fraction(k - 1, k), (1 - alpha) * n / (2 * k) - 2),
        ]
    return PropReport(tuple(checks))



# ---------------------------------------------------------------- configurations

def _cw_sorted(chunks: Sequence[Chunk], n_points: int) -> tuple[Chunk, ...]:
    cw = [ch.as_cw(n_points) for ch in chunks]
    return tuple(sorted(cw, key=lambda ch: ch.start))


def to_configuration(p: KLambdaPartition) -> KConfiguration | None:
    """The partition read as a k-configuration, if it is one."""
    if p.lambda_effective or p.uncovered:
        return None
    if any(ch.k != p.k for ch in p.chunks):
        return None
    return KConfiguration(p.n_points, p.k, _cw_sorted(p.chunks, p.n_points), colors=p.colors)


def configuration_from_chunks(colors: Sequence[int], k: int,
                              lengths: Sequence[int], offset: int = 0) -> KConfiguration:
    """Configuration whose chunks have the given lengths clockwise from ``offset``."""
    N = len(colors)
    if sum(lengths) != N:
        raise ValueError("chunk lengths must sum to the number of points")
    chunks = []
    s = offset % N
    for L in lengths:
        pts = [(s + j) % N for j in range(L)]
        b = sum(colors[q] for q in pts)
        r = L - b
        if max(r, b) != k or min(r, b) >= k:
            raise ValueError(f"block at {s} of length {L} is not a {k}-chunk")
        chunks.append(Chunk(s, L, RED if r == k else BLUE, r, b, Direction.CW, k))
        s = (s + L) % N
    return KConfiguration(N, k, tuple(chunks), colors=tuple(colors))


def check_prop_2_3(g: KConfiguration | None = None, *, n=None, k=None, R=None, B=None,
                   alpha=None, beta=None) -> PropReport:
    """Counting identity and bounds of a k-configuration.

    Pass a configuration, or the raw numbers (n, k, R, B, alpha, beta).
    """
    if g is not None:
        s = summarize(g)
        n, k = Fraction(g.n_points, 2), g.k
        R, B, alpha, beta = s.n_red_chunks, s.n_blue_chunks, s.avg_red, s.avg_blue
    n, alpha, beta = Fraction(n), Fraction(alpha), Fraction(beta)
    top = max(alpha, beta)
    checks = [
        _eq("n = kR + beta kB", n, k * R + beta * k * B),
        _eq("n = kB + alpha kR", n, k * B + alpha * k * R),
        _geq("R+B >= n/k", R + B, n / k),
        _geq("max(R,B) >= n/(2k)", max(R, B), n / (2 * k)),
        _geq("min(R,B) >= (1-max(a,b))n/(2k)", min(R, B), (1 - top) * n / (2 * k)),
        Inequality("max(R,B) = R iff alpha >= beta", Fraction(R >= B), Fraction(alpha >= beta),
                   (R >= B) == (alpha >= beta)),
    ]
    if g is not None:
        covered = sorted(q for ch in g.chunks for q in ch.points(g.n_points))
        checks.append(_eq("chunks cover every point once", int(covered == list(range(g.n_points))), 1))
        checks.append(_eq("every chunk has majority k",
                          sum(ch.majority != k or ch.minority >= k for ch in g.chunks), 0))
    return PropReport(tuple(checks))


def subdivide(g: KConfiguration) -> KConfiguration:
    """Split every chunk into three (k/3)-subchunks; middles are tagged."""
    k = g.k
    if k % 3:
        raise ValueError("k must be divisible by 3")
    if any(ch.index >= Fraction(3, 10) for ch in g.chunks):
        raise ValueError("every chunk index must be below 0.3")
    third = k // 3
    N = g.n_points
    colors = g.colors
    out, middle = [], []
    for ch in g.chunks:
        pts = ch.points(N)
        cuts, seen = [], 0
        for j, q in enumerate(pts):
            if colors[q] == ch.color:
                seen += 1
                if seen in (third, 2 * third):
                    cuts.append(j + 1)
        bounds = [0, *cuts, len(pts)]
        for part in range(3):
            seg = pts[bounds[part]:bounds[part + 1]]
            b = sum(colors[q] for q in seg)
            out.append(Chunk(seg[0], len(seg), ch.color, len(seg) - b, b, Direction.CW, third))
            middle.append(part == 1)
    return KConfiguration(N, third, tuple(out), tuple(middle), g.colors)


# ---------------------------------------------------------------- rearrangement

class Rearrangement(NamedTuple):
    """Outcome of moving a few points to turn a cover into a configuration.

    ``origin[i]`` is the original index of the point now at position ``i``.
    ``moved`` holds the original indices of the relocated points; every other
    point keeps its clockwise order relative to the rest.
    """

    coloring: Coloring
    configuration: KConfiguration
    moved: frozenset[int]
    origin: tuple[int, ...]
    max_groups_per_chunk: int = 0
    source: tuple[int, ...] = ()

    @property
    def recolored(self) -> int:
        """Positions whose color differs from the input coloring."""
        return sum(a != b for a, b in zip(self.coloring.colors, self.source))


def _group_cap(k: int) -> int:
    return max(1, k // 1000)


def _assemble(colors: Sequence[int], k: int, pieces: list[list[int]], piece_color: list[int],
              pool: list[int], insert_at: int, fits, offset: int) -> Rearrangement:
    """Rebuild the circle from kept chunk bodies plus the removed points.

    ``pieces`` are chunk bodies in clockwise order, already stripped of the
    points in ``pool``. Removed points of one color are cut into pure k-chunks
    inserted before piece ``insert_at``; the rest go in groups of at most
    ``_group_cap(k)`` onto the cw end of opposite-colored chunks accepted by
    ``fits(majority, minority_after)``.
    """
    by_color = {RED: [q for q in pool if colors[q] == RED],
                BLUE: [q for q in pool if colors[q] == BLUE]}
    fresh = []
    for x in (RED, BLUE):
        while len(by_color[x]) >= k:
            fresh.append((by_color[x][:k], x))
            by_color[x] = by_color[x][k:]
    pieces = pieces[:insert_at] + [f[0] for f in fresh] + pieces[insert_at:]
    piece_color = piece_color[:insert_at] + [f[1] for f in fresh] + piece_color[insert_at:]
    cap = _group_cap(k)
    groups_in = [0] * len(pieces)
    for x in (RED, BLUE):
        rest = by_color[x]
        targets = [j for j, pc in enumerate(piece_color) if pc != x]
        while rest:
            placed = False
            for j in targets:
                if not rest:
                    break
                minority = sum(colors[q] == x for q in pieces[j])
                g = min(cap, len(rest))
                while g and not fits(k, minority + g):
                    g -= 1
                if g:
                    pieces[j] = pieces[j] + rest[:g]
                    rest = rest[g:]
                    groups_in[j] += 1
                    placed = True
            if not placed:
                raise ValueError(
                    f"no room for {len(rest)} leftover {'RB'[x]} points in opposite chunks")
    N = len(colors)
    origin = [0] * N
    chunks = []
    pos = offset
    for body, pc in zip(pieces, piece_color):
        b = sum(colors[q] for q in body)
        chunks.append(Chunk(pos % N, len(body), pc, len(body) - b, b, Direction.CW, k))
        for q in body:
            origin[pos % N] = q
            pos += 1
    new_colors = tuple(colors[q] for q in origin)
    moved = frozenset(q for q in pool)
    config = KConfiguration(N, k, tuple(sorted(chunks, key=lambda ch: ch.start)), colors=new_colors)
    return Rearrangement(Coloring(new_colors), config, moved, tuple(origin),
                         max(groups_in, default=0), tuple(colors))


def rearrange_to_P2(c: Coloring, p: KLambdaPartition) -> Rearrangement:
    """Turn a (k, lambda)-partition into a k-configuration by moving few points.

    Each (k+3)-chunk loses its three clockwise-most majority points, and then
    clockwise-most minority points while its minority count is at least k.
    Those points and the uncovered ones become pure k-chunks where possible and
    small groups on opposite-colored chunks otherwise.
    """
    N, k = len(c), p.k
    colors = c.colors
    segs = []  # (cw start, cw point list, color or None)
    for ch in p.chunks:
        cw = ch.as_cw(N)
        segs.append((cw.start, cw.points(N), ch))
    for q in p.uncovered:
        segs.append((q, [q], None))
    segs.sort(key=lambda s: s[0])
    pieces, piece_color, pool = [], [], []
    insert_at = None
    for _, pts, ch in segs:
        if ch is None:
            if insert_at is None:
                insert_at = len(pieces)
            pool.extend(pts)
            continue
        body = list(pts)
        if ch.k == k + 3:
            if insert_at is None:
                insert_at = len(pieces)
            body = _drop_from_end(colors, body, ch.color, 3, pool)
            other = 1 - ch.color
            extra = sum(colors[q] == other for q in body) - (k - 1)
            if extra > 0:
                body = _drop_from_end(colors, body, other, extra, pool)
        pieces.append(body)
        piece_color.append(ch.color)
    if insert_at is None:
        insert_at = len(pieces)
    return _assemble(colors, k, pieces, piece_color, pool, insert_at,
                     lambda kk, m: m <= kk - 1, segs[0][0])


def _drop_from_end(colors, body: list[int], color: int, count: int, pool: list[int]) -> list[int]:
    keep = list(body)
    dropped = []
    for j in range(len(keep) - 1, -1, -1):
        if len(dropped) == count:
            break
        if colors[keep[j]] == color:
            dropped.append(keep.pop(j))
    pool.extend(reversed(dropped))
    return keep


def rearrange_to_P3(c: Coloring, g: KConfiguration, threshold=Fraction(22, 100)) -> Rearrangement:
    """Strip the minority points out of chunks whose index is at least ``threshold``.

    The stripped points are repacked into pure chunks and small groups so that
    every chunk of the result has index below 0.3.
    """
    N, k = len(c), g.k
    threshold = Fraction(threshold)
    colors = c.colors
    pieces, piece_color, pool = [], [], []
    insert_at = None
    chunks = sorted(g.chunks, key=lambda ch: ch.cw_start(N))
    for ch in chunks:
        body = ch.as_cw(N).points(N)
        if ch.index >= threshold:
            if insert_at is None:
                insert_at = len(pieces)
            body = _drop_from_end(colors, body, 1 - ch.color, ch.minority, pool)
        pieces.append(body)
        piece_color.append(ch.color)
    if insert_at is None:
        insert_at = len(pieces)
    return _assemble(colors, k, pieces, piece_color, pool, insert_at,
                     lambda kk, m: 10 * m < 3 * kk, chunks[0].cw_start(N))


def index_stability_check(c: Coloring, k: int, lam: int) -> dict:
    """Compare the (k, lambda)- and (k, lambda+1)-partitions."""
    g1 = build_partition(c, k, lam)
    g2 = build_partition(c, k, lam + 1)
    s1, s2 = summarize(g1), summarize(g2)
    return {
        "n": c.n, "k": k, "lambda": lam,
        "lambda_effective": (g1.lambda_effective, g2.lambda_effective),
        "d_avg_red": abs(s1.avg_red - s2.avg_red),
        "d_avg_blue": abs(s1.avg_blue - s2.avg_blue),
        "dR": abs(s1.n_red_chunks - s2.n_red_chunks),
        "dB": abs(s1.n_blue_chunks - s2.n_blue_chunks),
        "index_1": s1.index,
        "d_index": abs(s1.index - s2.index),
        "preconditions": c.n >= 210000 * k and s1.index <= Fraction(1, 10),
    }
