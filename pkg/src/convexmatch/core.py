"""Combinatorial model of two-colored point sets in convex position.

Points are p_0, ..., p_{N-1} in clockwise order and all index arithmetic is
modulo N. Because the points are in convex position, whether two segments
cross depends only on the circular order of their endpoints, so no
coordinates are stored anywhere. A separating line is represented by the two
circular gaps where it meets the boundary of the convex hull.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

RED = 0
BLUE = 1

_CHAR_TO_COLOR = {"R": RED, "B": BLUE, "0": RED, "1": BLUE, "r": RED, "b": BLUE}

Edge = tuple[int, int]


class Mode(str, enum.Enum):
    BI = "bi"
    MONO = "mono"

    def accepts(self, c1: int, c2: int) -> bool:
        """Whether an edge between colors ``c1`` and ``c2`` is allowed."""
        return (c1 != c2) if self is Mode.BI else (c1 == c2)


@dataclass(frozen=True)
class Coloring:
    """Circular color sequence; ``colors[i]`` is RED (0) or BLUE (1)."""

    colors: tuple[int, ...]

    def __post_init__(self):
        if len(self.colors) < 1:
            raise ValueError("a coloring needs at least one point")
        if any(c not in (RED, BLUE) for c in self.colors):
            raise ValueError("colors must be 0 (red) or 1 (blue)")

    @classmethod
    def parse(cls, text: str) -> "Coloring":
        """Parse ``RRBB`` or ``0011`` style text (whitespace ignored)."""
        chars = "".join(text.split())
        try:
            return cls(tuple(_CHAR_TO_COLOR[ch] for ch in chars))
        except KeyError as exc:
            raise ValueError(f"unexpected character {exc.args[0]!r} in coloring") from None

    @classmethod
    def from_iter(cls, colors: Iterable[int]) -> "Coloring":
        return cls(tuple(int(c) for c in colors))

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, i: int) -> int:
        return self.colors[i % len(self.colors)]

    def __iter__(self):
        return iter(self.colors)

    def __str__(self) -> str:
        return "".join("RB"[c] for c in self.colors)

    @property
    def n_red(self) -> int:
        return len(self.colors) - sum(self.colors)

    @property
    def n_blue(self) -> int:
        return sum(self.colors)

    @property
    def balanced(self) -> bool:
        return self.n_red == self.n_blue

    @property
    def n(self) -> int:
        """Points per color of a balanced coloring."""
        return len(self.colors) // 2

    def rotate(self, shift: int) -> "Coloring":
        """Coloring whose point ``i`` is this coloring's point ``i + shift``."""
        s = shift % len(self.colors)
        return Coloring(self.colors[s:] + self.colors[:s])

    def require_balanced(self) -> None:
        if not self.balanced:
            raise ValueError(
                f"balanced coloring required, got {self.n_red} red / {self.n_blue} blue"
            )


@dataclass(frozen=True)
class SplitLine:
    """A line crossing the hull boundary at gaps ``g1`` and ``g2``.

    Gap ``g`` sits between points ``g - 1`` and ``g``. Arc A is
    ``[g1, g2)`` clockwise, arc B its complement.
    """

    g1: int
    g2: int

    def span(self, n_points: int) -> int:
        return (self.g2 - self.g1) % n_points

    def in_a(self, p: int, n_points: int) -> bool:
        return (p - self.g1) % n_points < self.span(n_points)

    def separates(self, edge: Edge, n_points: int) -> bool:
        return self.in_a(edge[0], n_points) != self.in_a(edge[1], n_points)

    def valid_for(self, n_points: int) -> bool:
        return (
            0 <= self.g1 < n_points
            and 0 <= self.g2 < n_points
            and self.g1 != self.g2
        )


def canonical_split(g1: int, g2: int, n_points: int) -> SplitLine:
    """Orient a gap pair so that point 0 lies in arc B."""
    line = SplitLine(g1 % n_points, g2 % n_points)
    if line.in_a(0, n_points):
        line = SplitLine(line.g2, line.g1)
    return line


def norm_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class SeparatedMatching:
    n_points: int
    edges: tuple[Edge, ...]
    witness: SplitLine
    mode: Mode = Mode.BI

    @classmethod
    def build(cls, n_points: int, edges: Iterable[Sequence[int]], witness: SplitLine,
              mode: Mode = Mode.BI) -> "SeparatedMatching":
        es = tuple(sorted(norm_edge(int(a), int(b)) for a, b in edges))
        return cls(n_points, es, witness, Mode(mode))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> set[int]:
        return {v for e in self.edges for v in e}

    def to_json(self) -> dict:
        return {
            "n_points": self.n_points,
            "mode": self.mode.value,
            "edges": [list(e) for e in self.edges],
            "witness": [self.witness.g1, self.witness.g2],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "SeparatedMatching":
        if isinstance(data, str):
            data = json.loads(data)
        g1, g2 = data["witness"]
        return cls.build(data["n_points"], data["edges"], SplitLine(g1, g2), Mode(data["mode"]))


@dataclass(frozen=True)
class AlternatingPath:
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> list[Edge]:
        v = self.vertices
        return [(v[i], v[i + 1]) for i in range(len(v) - 1)]

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices)}

    @classmethod
    def from_json(cls, data: dict | str) -> "AlternatingPath":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(int(v) for v in data["vertices"]))


@dataclass(frozen=True)
class Run:
    start: int
    length: int
    color: int


@dataclass(frozen=True)
class Report:
    """Validation outcome. Truthy iff ``ok``."""

    ok: bool
    condition: str | None = None
    detail: str = ""
    items: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.ok


OK = Report(True)


def crosses(e1: Edge, e2: Edge, n_points: int) -> bool:
    """Whether two chords with distinct endpoints cross in convex position."""
    a, b = e1
    c, d = e2
    if len({a, b, c, d}) < 4:
        raise ValueError(f"chords {e1} and {e2} share an endpoint")
    span = (b - a) % n_points

    def inside(x: int) -> bool:
        return 0 < (x - a) % n_points < span

    return inside(c) != inside(d)


def runs(c: Coloring) -> list[Run]:
    """Circular run decomposition, sorted by start index."""
    n = len(c)
    col = np.asarray(c.colors)
    starts = np.flatnonzero(col != np.roll(col, 1)).tolist()
    if not starts:
        return [Run(0, n, int(col[0]))]
    ends = starts[1:] + [starts[0] + n]
    return [Run(s, e - s, int(col[s])) for s, e in zip(starts, ends)]


def run_count(c: Coloring) -> int:
    col = c.colors
    t = sum(a != b for a, b in zip(col, col[-1:] + col[:-1]))
    return t if t else 1


def first_crossing(chords: Sequence[Edge], n_points: int) -> tuple[Edge, Edge] | None:
    """Return a crossing pair of chords, or None if the set is non-crossing.

    Chords may share endpoints; such pairs never count as crossing. Sweeps the
    circle once with a stack of open chords, O(m log m).
    """
    opens: dict[int, list[Edge]] = {}
    closes: dict[int, list[Edge]] = {}
    for e in chords:
        a, b = norm_edge(*e)
        opens.setdefault(a, []).append((a, b))
        closes.setdefault(b, []).append((a, b))
    stack: list[Edge] = []
    for p in sorted(set(opens) | set(closes)):
        for e in sorted(closes.get(p, ()), key=lambda e: -e[0]):
            top = stack.pop()
            if top != e:
                return (e, top)
        for e in sorted(opens.get(p, ()), key=lambda e: -e[1]):
            stack.append(e)
    return None


def _check_edges(c: Coloring, edges: Sequence[Edge]) -> Report:
    n = len(c)
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n) or a == b:
            return Report(False, "index", f"bad edge ({a}, {b}) for {n} points", ((a, b),))
    return OK


def validate_matching(c: Coloring, m: SeparatedMatching) -> Report:
    """Check endpoints, crossings, colors and the witness line, in that order."""
    n = len(c)
    if m.n_points != n:
        return Report(False, "index", f"matching is for {m.n_points} points, coloring has {n}")
    rep = _check_edges(c, m.edges)
    if not rep:
        return rep
    seen = Counter(v for e in m.edges for v in e)
    dup = [v for v, k in seen.items() if k > 1]
    if dup:
        bad = tuple(e for e in m.edges if dup[0] in e)
        return Report(False, "shared_endpoint", f"point {dup[0]} used twice", bad)
    pair = _disjoint_crossing(m.edges)
    if pair is not None:
        return Report(False, "crossing", f"{pair[0]} crosses {pair[1]}", pair)
    col = c.colors
    same = m.mode is Mode.MONO
    for a, b in m.edges:
        if (col[a] == col[b]) != same:
            return Report(False, "color", f"edge ({a}, {b}) violates {m.mode.value} coloring",
                          ((a, b),))
    w = m.witness
    if n < 2 and not m.edges:
        return OK  # a single point admits no line, but nothing needs separating
    if not w.valid_for(n):
        return Report(False, "separation", f"invalid witness {w}")
    g1, span = w.g1, w.span(n)
    for e in m.edges:
        if (((e[0] - g1) % n) < span) == (((e[1] - g1) % n) < span):
            return Report(False, "separation", f"edge {e} not crossed by witness", (e,))
    return OK


def _disjoint_crossing(edges: Sequence[Edge]) -> tuple[Edge, Edge] | None:
    """first_crossing specialised to endpoint-disjoint chords."""
    partner = {}
    for a, b in edges:
        partner[a] = b
        partner[b] = a
    stack: list[int] = []
    for p in sorted(partner):
        q = partner[p]
        if q > p:
            stack.append(p)
        else:
            top = stack.pop()
            if top != q:
                return (norm_edge(q, p), norm_edge(top, partner[top]))
    return None


def validate_path(c: Coloring, p: AlternatingPath) -> Report:
    n = len(c)
    vs = p.vertices
    for v in vs:
        if not 0 <= v < n:
            return Report(False, "index", f"vertex {v} out of range", (v,))
    if len(set(vs)) != len(vs):
        dup = next(v for v, k in Counter(vs).items() if k > 1)
        return Report(False, "distinct", f"vertex {dup} repeated", (dup,))
    for u, v in p.edges:
        if c[u] == c[v]:
            return Report(False, "alternation", f"{u} and {v} have the same color", ((u, v),))
    pair = first_crossing(p.edges, n)
    if pair is not None:
        return Report(False, "crossing", f"{pair[0]} crosses {pair[1]}", pair)
    return OK


def find_witness(c: Coloring | int, edges: Iterable[Sequence[int]]) -> SplitLine | None:
    """Exhaustive scan over gap pairs for a line crossing every edge.

    Scans canonical lines (point 0 in arc B) with arc A = [g1, g2), g1
    ascending then g2 ascending, and returns the first that works.
    """
    n = c if isinstance(c, int) else len(c)
    masks = [(1 << a) | (1 << b) for a, b in edges]
    for g1 in range(1, n):
        arc = 0
        for g2 in range(g1 + 1, n + 1):
            arc |= 1 << (g2 - 1)
            if all(bin(arc & e).count("1") == 1 for e in masks):
                return SplitLine(g1, g2 % n)
    return None


def fast_witness(n_points: int, edges: Sequence[Edge]) -> SplitLine | None:
    """Find a separating line in O(k log k) for endpoint-disjoint edges.

    A line separates all k edges iff some window of k consecutive endpoints
    (in circular order) contains one endpoint of every edge.
    """
    k = len(edges)
    if k == 0:
        return canonical_split(1, 2, n_points)
    ends = sorted((v, i) for i, e in enumerate(edges) for v in e)
    ids = [i for _, i in ends]
    m = len(ids)
    counts: Counter = Counter(ids[:k])
    for t in range(m):
        if len(counts) == k:
            g1 = ends[t][0]
            g2 = ends[(t + k - 1) % m][0] + 1
            return canonical_split(g1, g2, n_points)
        out, inn = ids[t], ids[(t + k) % m]
        counts[out] -= 1
        if not counts[out]:
            del counts[out]
        counts[inn] += 1
    return None


def make_matching(c: Coloring, edges: Iterable[Sequence[int]], mode: Mode,
                  witness: SplitLine | None = None) -> SeparatedMatching:
    """Wrap edges into a SeparatedMatching, computing a witness if absent."""
    es = [norm_edge(int(a), int(b)) for a, b in edges]
    n = len(c)
    if witness is None:
        witness = fast_witness(n, es)
        if witness is None:
            raise ValueError("edges are not separated by any line")
    return SeparatedMatching.build(n, es, witness, mode)


def matching_to_path(c: Coloring, m: SeparatedMatching) -> AlternatingPath:
    """Turn a bichromatic separated matching with k edges into a path on 2k points.

    Edges are ordered along the witness line. Consecutive edges bound a band
    containing no other edge, so any connector inside the band is crossing
    free; the connector is forced by alternation (the entry point of the next
    edge must differ in color from the exit point of the previous one). The
    walk starts from the chain end holding the smallest point index.
    """
    if m.mode is not Mode.BI:
        raise ValueError("matching_to_path needs a bichromatic matching")
    rep = validate_matching(c, m)
    if not rep:
        raise ValueError(f"invalid matching: {rep.condition}: {rep.detail}")
    if not m.edges:
        raise ValueError("matching has no edges")
    n = len(c)
    w = m.witness

    def a_pos(e: Edge) -> int:
        a = e[0] if w.in_a(e[0], n) else e[1]
        return (a - w.g1) % n

    chain = sorted(m.edges, key=a_pos)
    if min(chain[-1]) < min(chain[0]):
        chain.reverse()
    first = chain[0]
    cur = min(first)
    verts = [cur, first[1] if first[0] == cur else first[0]]
    for e in chain[1:]:
        entry = e[0] if c[e[0]] != c[verts[-1]] else e[1]
        verts += [entry, e[1] if e[0] == entry else e[0]]
    return AlternatingPath(tuple(verts))
