"""Constructive strategies for large separated matchings.

Each strategy returns a ``StrategyResult`` whose matching passes
``validate_matching``; a strategy that also proves a lower bound on its
own output reports it in ``guaranteed_bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import chunks as ch
from .core import (
    BLUE,
    RED,
    Coloring,
    Mode,
    SeparatedMatching,
    canonical_split,
    fast_witness,
    make_matching,
    run_count,
    runs,
    validate_matching,
)


@dataclass(frozen=True)
class PipelineConstants:
    """Parameters of the full case analysis.

    ``asymptotic()`` holds the published values; ``desk(n)`` keeps the thresholds
    and shrinks n0, k1 and k2 so every branch is reachable on small inputs.
    """

    n0: int = 10 ** 100
    eps: Fraction = Fraction(1, 10 ** 5)
    k1: int | None = None
    k2: int | None = None
    small_index: Fraction = Fraction(1, 10)
    variance_index: Fraction = Fraction(22, 100)
    cap_index: Fraction = Fraction(3, 10)
    middle_delta: Fraction = Fraction(1, 10 ** 4)
    c1: Fraction = Fraction(1, 32)
    c2: Fraction = Fraction(1, 12800)
    c3: Fraction = Fraction(1, 81)
    c4: Fraction = Fraction(1, 40)
    c5: Fraction = Fraction(1, 4)
    guaranteed: bool = True

    @classmethod
    def asymptotic(cls) -> "PipelineConstants":
        return cls()

    @classmethod
    def desk(cls, n: int | None = None) -> "PipelineConstants":
        return cls(n0=64, k1=3, k2=None, guaranteed=False)

    def k1_for(self, n: int, step: int) -> int:
        if self.k1 is not None:
            return max(step, -(-self.k1 // step) * step)
        bound = 10 ** 3 * self.eps ** -3
        return (math.floor(bound) // step + 1) * step

    def k2_for(self, n: int, step: int) -> int:
        if self.k2 is not None:
            return self.k2
        if not self.guaranteed:
            return max(step, (n // 4) // step * step)
        hi = math.floor(Fraction(1, 10 ** 3) * self.eps ** 3 * n)
        return hi // step * step


@dataclass(frozen=True)
class StrategyResult:
    matching: SeparatedMatching
    strategy: str
    guaranteed_bound: Fraction | None = None
    trace: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.matching)

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "size": self.size,
            "guaranteed_bound": None if self.guaranteed_bound is None else str(self.guaranteed_bound),
            "matching": self.matching.to_json(),
            "trace": _jsonable(self.trace),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def _result(c: Coloring, edges, mode: Mode, name: str, bound=None, trace=None,
            witness=None) -> StrategyResult:
    m = make_matching(c, edges, mode, witness)
    return StrategyResult(m, name, bound, trace or {})


# ---------------------------------------------------------------- parallel matchings

def parallel_matching(i: int, n_points: int) -> list[tuple[int, int]]:
    j = np.arange(n_points)
    partner = (i - j) % n_points
    keep = j < partner
    return list(zip(j[keep].tolist(), partner[keep].tolist()))


def parallel_matchings(n_points: int) -> list[list[tuple[int, int]]]:
    """M_i = all pairs {j, j'} with j + j' = i (mod N), for i = 0..N-1."""
    return [parallel_matching(i, n_points) for i in range(n_points)]


def parallel_witness(i: int, n_points: int):
    """Gaps at ceil(i/2) and ceil((i+N)/2) separate every edge of M_i."""
    return canonical_split(-(-i // 2), -(-(i + n_points) // 2), n_points)


def _circular_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """out[i] = sum_j a[j] * b[(i - j) mod N], exact for 0/1 inputs."""
    n = len(a)
    if n <= 64:
        out = np.zeros(n, dtype=np.int64)
        for j in np.flatnonzero(a):
            out += np.roll(b, j)
        return out
    fa = np.fft.rfft(a.astype(float))
    fb = np.fft.rfft(b.astype(float))
    return np.rint(np.fft.irfft(fa * fb, n)).astype(np.int64)


def _run_ends(c: Coloring) -> tuple[np.ndarray, np.ndarray]:
    """Indicator arrays of run-first and run-last points."""
    col = np.asarray(c.colors, dtype=np.int64)
    first = (col != np.roll(col, 1)).astype(np.int64)
    last = (col != np.roll(col, -1)).astype(np.int64)
    return first, last


def _augmentations(c: Coloring, mode: Mode, i: int) -> list[tuple[int, int]]:
    """Boundary edges p_j p_{k+1} added to the color-valid part of M_i."""
    N = len(c)
    col = c.colors
    out = []
    if run_count(c) < 2:
        return out
    first, last = _run_ends(c)
    rid = _run_id(c)
    used = set()
    for j in np.flatnonzero(first):
        j = int(j)
        k = (i - j) % N
        k1 = (k + 1) % N
        if k == j or k1 == j or not last[k] or j in used or k1 in used:
            continue
        if mode is Mode.BI:
            ok = col[j] == RED and col[k] == RED and rid[j] != rid[k]
        else:
            ok = col[j] != col[k]
        if ok:
            out.append((j, k1))
            used.update((j, k1))
    return out


_RUN_ID_CACHE: dict[tuple[int, ...], list[int]] = {}


def _run_id(c: Coloring) -> list[int]:
    key = c.colors
    ids = _RUN_ID_CACHE.get(key)
    if ids is None:
        col = np.asarray(key)
        first = col != np.roll(col, 1)
        ids = np.cumsum(first) - 1
        if first.any():
            ids[ids < 0] = int(ids.max())  # the wrapping run
        ids = ids.tolist()
        if len(_RUN_ID_CACHE) > 64:
            _RUN_ID_CACHE.clear()
        _RUN_ID_CACHE[key] = ids
    return ids


def runs_bound(c: Coloring) -> Fraction | None:
    t = run_count(c)
    n = c.n
    if t < 4:
        return None
    return Fraction(n, 2) + Fraction(t * (t - 2), 16 * n)


def runs_matching(c: Coloring, mode: Mode | str = Mode.BI) -> StrategyResult:
    """Best augmented parallel matching.

    Scores every M_i by its color-valid edges plus its boundary augmentations
    (computed by circular convolutions), then builds candidates in decreasing
    score order until one validates. An unaugmented M_i' always validates.
    """
    mode = Mode(mode)
    c.require_balanced()
    N = len(c)
    col = np.asarray(c.colors, dtype=np.int64)
    red = (col == RED).astype(np.int64)
    blue = 1 - red
    if mode is Mode.BI:
        base = _circular_conv(red, blue)
    else:
        both = _circular_conv(red, red) + _circular_conv(blue, blue)
        fixed = np.zeros(N, dtype=np.int64)
        np.add.at(fixed, (2 * np.arange(N)) % N, 1)  # j = i - j is not an edge
        base = (both - fixed) // 2
    first, last = _run_ends(c)
    if run_count(c) >= 2:
        if mode is Mode.BI:
            fr, lr = first * red, last * red
            aug = _circular_conv(fr, lr)
            for r in runs(c):
                if r.color == RED:
                    aug[(2 * r.start + r.length - 1) % N] -= 1
        else:
            aug = _circular_conv(first * red, last * blue) + _circular_conv(first * blue, last * red)
    else:
        aug = np.zeros(N, dtype=np.int64)
    score = base + aug
    order = np.argsort(-score, kind="stable")
    bound = runs_bound(c) if mode is Mode.BI else None
    best, best_info = None, None
    i0 = int(np.argmax(base))
    candidates = [int(i) for i in order[: min(N, 8)]]
    if i0 not in candidates:
        candidates.append(i0)
    for i in candidates:
        if best is not None and len(best) >= score[i]:
            continue  # a candidate never beats its own score
        valid = [e for e in parallel_matching(i, N) if mode.accepts(c[e[0]], c[e[1]])]
        extra = _augmentations(c, mode, i)
        m = None
        if extra:
            edges = valid + extra
            w = fast_witness(N, edges)
            if w is not None:
                m = make_matching(c, edges, mode, w)
                if not validate_matching(c, m):
                    m = None
        if m is None:
            extra = []
            m = make_matching(c, valid, mode, parallel_witness(i, N))
        if best is None or len(m) > len(best):
            best = m
            best_info = {"i": i, "score": int(score[i]), "augmented": len(extra)}
    best_info["runs"] = run_count(c)
    return StrategyResult(best, "runs", bound, best_info)


# ---------------------------------------------------------------- chunk matchings

@dataclass(frozen=True)
class ChunkMatching:
    """M_i pairs chunk j with chunk (i - j) mod ell."""

    ell: int
    i: int

    def partner(self, j: int) -> int:
        return (self.i - j) % self.ell

    @property
    def self_paired(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.ell) if self.partner(j) == j)

    def layout(self) -> tuple[list[tuple[int, int]], int | None, int | None, tuple[str, int]]:
        """Pairs ordered from the axis outwards, inner/outer self chunks, outer gap.

        Pairs are (left, right) with left counterclockwise of the axis. The
        outer gap is ("start", chunk) for a chunk boundary or ("self", chunk)
        when it runs through a self-paired chunk.
        """
        ell, i = self.ell, self.i % self.ell
        if ell % 2 == 1:
            s = (i * (ell + 1) // 2) % ell
            pairs = [((s - t) % ell, (s + t) % ell) for t in range(1, (ell - 1) // 2 + 1)]
            return pairs, s, None, ("start", (s + (ell + 1) // 2) % ell)
        if i % 2 == 1:
            s = (i - 1) // 2
            pairs = [((s - t) % ell, (s + 1 + t) % ell) for t in range(ell // 2)]
            return pairs, None, None, ("start", (s + 1 + ell // 2) % ell)
        s = i // 2
        pairs = [((s - t) % ell, (s + t) % ell) for t in range(1, ell // 2)]
        return pairs, s, (s + ell // 2) % ell, ("self", (s + ell // 2) % ell)


class _ChunkData:
    """Per-chunk point lists and color tallies of a configuration."""

    def __init__(self, g: ch.KConfiguration):
        if not g.colors:
            raise ValueError("configuration must carry its coloring")
        self.g = g
        self.N = g.n_points
        self.colors = g.colors
        self.points = [c.as_cw(self.N).points(self.N) for c in g.chunks]
        self.starts = [c.cw_start(self.N) for c in g.chunks]
        self.ell = len(g.chunks)
        self.r = np.array([c.r_count for c in g.chunks], dtype=np.int64)
        self.b = np.array([c.b_count for c in g.chunks], dtype=np.int64)
        self._thirds = None

    def thirds(self) -> np.ndarray:
        """t[j, part, color]: color counts of the three subchunks of chunk j."""
        if self._thirds is None:
            k = self.g.k
            t = np.zeros((self.ell, 3, 2), dtype=np.int64)
            self.third_offsets = []
            for j, chunk in enumerate(self.g.chunks):
                cuts = _third_cuts(self.colors, self.points[j], chunk.color, k)
                self.third_offsets.append(cuts)
                bounds = [0, *cuts, len(self.points[j])]
                for part in range(3):
                    for q in self.points[j][bounds[part]:bounds[part + 1]]:
                        t[j, part, self.colors[q]] += 1
            self._thirds = t
        return self._thirds


def _third_cuts(colors, pts, color, k) -> list[int]:
    cuts, seen = [], 0
    for j, q in enumerate(pts):
        if colors[q] == color:
            seen += 1
            if seen in (k // 3, 2 * (k // 3)):
                cuts.append(j + 1)
    return cuts


def _pair_value(mode: Mode, rl, bl, rr, br):
    """Edges between a left and right point set using one color option."""
    if mode is Mode.BI:
        return np.maximum(np.minimum(rl, br), np.minimum(bl, rr))
    return np.maximum(np.minimum(rl, rr), np.minimum(bl, br))


# A group pairs points of one color on the left with one color on the right;
# an option lists groups from the axis outwards. Parts index subchunks; None
# means the whole chunk.
def _cross_options(mode: Mode):
    opts = []
    for x in (RED, BLUE):
        y = 1 - x
        if mode is Mode.BI:
            # (a): inner X-left(3) vs Y-right(1,2), outer Y-left(1,2) vs X-right(3)
            opts.append([((2,), x, (0, 1), y), ((0, 1), y, (2,), x)])
            # (b): inner Y-left(2,3) vs X-right(1), outer X-left(1) vs Y-right(2,3)
            opts.append([((1, 2), y, (0,), x), ((0,), x, (1, 2), y)])
        else:
            opts.append([((2,), x, (0, 1), x), ((0, 1), y, (2,), y)])
            opts.append([((1, 2), y, (0,), y), ((0,), x, (1, 2), x)])
    return opts


def _basic_options(mode: Mode):
    if mode is Mode.BI:
        return [[(None, RED, None, BLUE)], [(None, BLUE, None, RED)]]
    return [[(None, RED, None, RED)], [(None, BLUE, None, BLUE)]]


def _option_value(opt, t_left, t_right):
    """Vectorized size of an option for tallies of shape (..., 3, 2)."""
    total = 0
    for lp, lc, rp, rc in opt:
        lv = t_left[..., :, lc].sum(-1) if lp is None else t_left[..., list(lp), lc].sum(-1)
        rv = t_right[..., :, rc].sum(-1) if rp is None else t_right[..., list(rp), rc].sum(-1)
        total = total + np.minimum(lv, rv)
    return total


def _self_candidates(data: _ChunkData, j: int, variant: str) -> list[int]:
    """Split offsets to try for a self-paired chunk, in tie-break order."""
    pts = data.points[j]
    L = len(pts)
    if L == 1:
        return [0]
    chunk = data.g.chunks[j]
    maj = [t for t, q in enumerate(pts) if data.colors[q] == chunk.color]
    k = len(maj)
    if k % 2 == 1:
        m = maj[(k - 1) // 2]
        cand = [m, m + 1]
    else:
        cand = list(range(maj[k // 2 - 1] + 1, maj[k // 2] + 1))
    if variant == "cross":
        data.thirds()
        cand = cand + list(data.third_offsets[j])
    out = []
    for s in cand:
        s = min(max(s, 1), L - 1)
        if s not in out:
            out.append(s)
    return out


def _self_value(data: _ChunkData, j: int, s: int, mode: Mode) -> int:
    pts = data.points[j]
    left, right = pts[:s], pts[s:]
    bl = sum(data.colors[q] for q in left)
    br = sum(data.colors[q] for q in right)
    return int(_pair_value(mode, len(left) - bl, bl, len(right) - br, br))


def _best_self(data: _ChunkData, j: int, mode: Mode, variant: str) -> tuple[int, int]:
    best = None
    for s in _self_candidates(data, j, variant):
        v = _self_value(data, j, s, mode)
        if best is None or v > best[0]:
            best = (v, s)
    return best


def _check_variant(g: ch.KConfiguration, mode: Mode, variant: str) -> None:
    if variant not in ("basic", "cross"):
        raise ValueError(f"unknown variant {variant!r}")
    if mode is Mode.MONO and g.k % 2:
        raise ValueError("monochromatic chunk matchings need k even")
    if variant == "cross":
        if g.k % 3:
            raise ValueError("cross variant needs k divisible by 3")
        if any(c.index >= Fraction(3, 10) for c in g.chunks):
            raise ValueError("cross variant needs every chunk index below 0.3")


def _pair_matrix(data: _ChunkData, mode: Mode, variant: str) -> np.ndarray:
    """F[a, b]: edges when chunk a sits left of the axis and b right of it."""
    if variant == "basic":
        r, b = data.r, data.b
        return _pair_value(mode, r[:, None], b[:, None], r[None, :], b[None, :])
    t = data.thirds()
    tl = t[:, None, :, :]
    tr = t[None, :, :, :]
    best = None
    for opt in _basic_options(mode) + _cross_options(mode):
        v = _option_value(opt, np.broadcast_to(tl, (data.ell, data.ell, 3, 2)),
                          np.broadcast_to(tr, (data.ell, data.ell, 3, 2)))
        best = v if best is None else np.maximum(best, v)
    return best


def chunk_matching_sizes(g: ch.KConfiguration, mode: Mode | str = Mode.BI,
                         variant: str = "basic", data: _ChunkData | None = None) -> np.ndarray:
    """Size of the derived matching for every M_i, i = 0..ell-1."""
    mode = Mode(mode)
    _check_variant(g, mode, variant)
    data = data or _ChunkData(g)
    ell = data.ell
    F = _pair_matrix(data, mode, variant)
    selfv = np.array([_best_self(data, j, mode, variant)[0] for j in range(ell)], dtype=np.int64)
    j = np.arange(ell)
    sizes = np.zeros(ell, dtype=np.int64)
    for i in range(ell):
        cm = ChunkMatching(ell, i)
        pairs, s_in, s_out, _ = cm.layout()
        if pairs:
            a = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=len(pairs))
            bb = np.fromiter((p[1] for p in pairs), dtype=np.int64, count=len(pairs))
            sizes[i] = F[a, bb].sum()
        for s in (s_in, s_out):
            if s is not None:
                sizes[i] += selfv[s]
    del j
    return sizes


def _select(data: _ChunkData, j: int, parts, color: int, lin, descending: bool,
            restrict=None) -> list[int]:
    pts = data.points[j] if restrict is None else restrict
    if parts is not None:
        data.thirds()
        cuts = data.third_offsets[j]
        bounds = [0, *cuts, len(data.points[j])]
        chosen = set()
        for part in parts:
            chosen.update(data.points[j][bounds[part]:bounds[part + 1]])
        pts = [q for q in pts if q in chosen]
    pts = [q for q in pts if data.colors[q] == color]
    return sorted(pts, key=lin, reverse=descending)


def _emit(data, groups_spec, a, b, lin, out, left_pts=None, right_pts=None):
    for lp, lc, rp, rc in groups_spec:
        L = _select(data, a, lp, lc, lin, True, left_pts)
        R = _select(data, b, rp, rc, lin, False, right_pts)
        out.extend(zip(L, R))


def derive_from_chunk_matching(g: ch.KConfiguration, cm: ChunkMatching, mode: Mode | str = Mode.BI,
                               variant: str = "basic", data: _ChunkData | None = None,
                               ) -> SeparatedMatching:
    """Separated matching on ``g.colors`` derived from one chunk matching."""
    mode = Mode(mode)
    _check_variant(g, mode, variant)
    data = data or _ChunkData(g)
    N = data.N
    if cm.ell != data.ell:
        raise ValueError("chunk matching and configuration disagree on ell")
    pairs, s_in, s_out, outer = cm.layout()
    split = {}
    for s in (s_in, s_out):
        if s is not None:
            split[s] = _best_self(data, s, mode, variant)[1]
    if s_in is not None:
        inner_gap = (data.starts[s_in] + split[s_in]) % N
    else:
        inner_gap = data.starts[pairs[0][1]]
    kind, oc = outer
    outer_gap = data.starts[oc] if kind == "start" else (data.starts[oc] + split[oc]) % N

    def lin(p):
        return (p - outer_gap) % N

    options = _basic_options(mode) + (_cross_options(mode) if variant == "cross" else [])
    t = data.thirds() if variant == "cross" else None
    edges: list[tuple[int, int]] = []
    if s_in is not None:
        pts = data.points[s_in]
        _emit_self(data, s_in, pts[: split[s_in]], pts[split[s_in]:], mode, lin, edges)
    for a, b in pairs:
        if t is None:
            best = _basic_choice(mode, data, a, b)
        else:
            best, best_v = None, -1
            for opt in options:
                v = int(_option_value(opt, t[a], t[b]))
                if v > best_v:
                    best, best_v = opt, v
        _emit(data, best, a, b, lin, edges)
    if s_out is not None:
        pts = data.points[s_out]
        # past the outer gap comes first in linear order, so it is the left side
        _emit_self(data, s_out, pts[split[s_out]:], pts[: split[s_out]], mode, lin, edges)
    w = canonical_split(inner_gap, outer_gap, N) if edges else None
    return make_matching(Coloring(g.colors), edges, mode, w)


def _basic_choice(mode: Mode, data: _ChunkData, a: int, b: int):
    opts = _basic_options(mode)
    v0 = _option_value(opts[0], _whole(data, a), _whole(data, b))
    v1 = _option_value(opts[1], _whole(data, a), _whole(data, b))
    return opts[0] if v0 >= v1 else opts[1]


def _whole(data: _ChunkData, j: int) -> np.ndarray:
    t = np.zeros((3, 2), dtype=np.int64)
    t[0, RED] = data.r[j]
    t[0, BLUE] = data.b[j]
    return t


def _emit_self(data, j, left, right, mode, lin, out):
    bl = sum(data.colors[q] for q in left)
    br = sum(data.colors[q] for q in right)
    rl, rr = len(left) - bl, len(right) - br
    if mode is Mode.BI:
        spec = (None, RED, None, BLUE) if min(rl, br) >= min(bl, rr) else (None, BLUE, None, RED)
    else:
        spec = (None, RED, None, RED) if min(rl, rr) >= min(bl, br) else (None, BLUE, None, BLUE)
    _emit(data, [spec], j, j, lin, out, left, right)


def chunk_average(g: ch.KConfiguration, mode: Mode | str = Mode.BI, variant: str = "basic") -> Fraction:
    sizes = chunk_matching_sizes(g, mode, variant)
    return Fraction(int(sizes.sum()), len(sizes))


def best_chunk_matching(g: ch.KConfiguration, mode: Mode | str = Mode.BI,
                        variant: str = "basic", name: str | None = None) -> StrategyResult:
    """Largest derived matching over all ell chunk matchings (ties: smallest i)."""
    mode = Mode(mode)
    data = _ChunkData(g)
    sizes = chunk_matching_sizes(g, mode, variant, data)
    i = int(np.argmax(sizes))
    m = derive_from_chunk_matching(g, ChunkMatching(data.ell, i), mode, variant, data)
    avg = Fraction(int(sizes.sum()), len(sizes))
    n = Fraction(g.n_points, 2)
    bound = n / 2 if (mode is Mode.BI or g.k % 2 == 0) else None
    return StrategyResult(m, name or ("cross" if variant == "cross" else "chunk"), bound,
                          {"k": g.k, "ell": data.ell, "i": i, "average": avg,
                           "predicted": int(sizes[i]), "variant": variant})


def subchunk_strategy(g: ch.KConfiguration, mode: Mode | str = Mode.BI) -> StrategyResult:
    """Best chunk matching of the (k/3)-configuration obtained by subdividing."""
    sub = ch.subdivide(g)
    res = best_chunk_matching(sub, mode, "basic", name="subchunk")
    return replace(res, trace={**res.trace, "parent_k": g.k})


# ---------------------------------------------------------------- interval doubling

def _low_index_chunk(p: ch.KLambdaPartition, limit=Fraction(1, 10)):
    for chunk in p.chunks:
        if chunk.index <= limit:
            return chunk
    return None


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def doubling_bound(n: int, k: int) -> Fraction | None:
    if k <= n and 6480 * n <= k * k:
        return Fraction(n, 2) + Fraction(1, 81) * Fraction(k, n) ** 2 * n
    return None


def interval_doubling(c: Coloring, k: int, mode: Mode | str = Mode.BI) -> StrategyResult:
    """Matching from one low-index k-chunk and doubling intervals after it.

    Bichromatic: along intervals F_i of doubling size after the chunk, find
    the first D_i rich in the chunk's minority color, match across the
    boundary of J1 and J2, then match the rest L across the middle of L.
    Monochromatic: pair the chunk's majority points around their median and
    the complement's majority points around theirs.
    """
    mode = Mode(mode)
    c.require_balanced()
    n, N = c.n, len(c)
    part = ch.build_partition(c, k, 0)
    summary = ch.summarize(part)
    chosen = _low_index_chunk(part)
    if chosen is None:
        raise ValueError(f"no chunk of index <= 0.1 in the ({k}, 0)-partition")
    start = chosen.cw_start(N)
    X = chosen.color
    seq = [(start + t) % N for t in range(N)]
    col = [c[q] for q in seq]
    trace = {"k": k, "index": summary.index, "chunk_start": start, "chunk_color": "RB"[X]}
    if mode is Mode.MONO:
        return _mono_doubling(c, chosen, seq, col, trace)

    i0 = 0
    while k * (1 << i0) < 2 * n:
        i0 += 1
    def f(i):  # |F_i|, with f(-1) = |C|
        return _ceil_frac(Fraction(2 * n * (1 << (i + 1)), 1 << i0))
    sizes = [f(i) for i in range(-1, i0)]
    delta = Fraction(k, n)
    i_star = i0
    for i in range(i0):
        lo, hi = f(i - 1), f(i)
        y = sum(1 for t in range(lo, hi) if col[t] != X)
        if y >= (Fraction(1, 2) + delta / 20) * (hi - lo):
            i_star = i
            break
    trace.update({"i0": i0, "F_sizes": sizes[1:], "C_size": sizes[0], "i_star": i_star})
    bound = doubling_bound(n, k) if summary.index <= Fraction(1, 10) else None
    if i_star == i0:
        trace["note"] = "no rich interval found"
        res = runs_matching(c, mode)
        return StrategyResult(res.matching, "doubling", None, {**trace, "fallback": "runs"})
    b1, b2 = f(i_star - 1), f(i_star)
    l2 = b2 - b1
    q = _ceil_frac((Fraction(1, 2) + delta / 40) * l2)
    left = [t for t in range(b1 - 1, -1, -1) if col[t] == X]
    right = [t for t in range(b1, b2) if col[t] != X]
    q = min(q, len(left), len(right))
    edges = [(seq[a], seq[b]) for a, b in zip(left[:q], right[:q])]
    if q:
        t_lo, t_hi = left[q - 1], right[q - 1]
        rest = list(range(t_hi + 1, N)) + list(range(0, t_lo))
    else:
        rest = list(range(b1, N)) + list(range(0, b1))
    half = (len(rest) + 1) // 2
    L1, L2 = rest[:half], rest[half:]
    opt = []
    for x in (X, 1 - X):
        a = [t for t in reversed(L1) if col[t] == x]
        b = [t for t in L2 if col[t] != x]
        opt.append(list(zip(a, b)))
    cross = opt[0] if len(opt[0]) >= len(opt[1]) else opt[1]
    edges += [(seq[a], seq[b]) for a, b in cross]
    g1 = seq[b1]
    if L2:
        g2 = seq[L2[0]]
        w = canonical_split(g1, g2, N) if g1 != g2 else None
    else:
        w = None
    trace.update({"l2": l2, "q": q, "m": n - l2 - 1, "L": len(rest), "L_edges": len(cross)})
    if w is None:
        w = fast_witness(N, edges)
    return StrategyResult(make_matching(c, edges, mode, w), "doubling", bound, trace)


def _median_pairs(points: list[int], col, x) -> tuple[list[tuple[int, int]], int | None]:
    """Nested pairs of color-x points around their median gap (linear positions)."""
    xs = [t for t in points if col[t] == x]
    h = len(xs) // 2
    if h == 0:
        return [], None
    lo, hi = xs[:h][::-1], xs[len(xs) - h:]
    gap_pos = xs[h - 1] + 1 if len(xs) % 2 == 0 else xs[h]
    return list(zip(lo, hi)), gap_pos


def _mono_doubling(c, chosen, seq, col, trace) -> StrategyResult:
    N = len(c)
    L = chosen.length
    inside, gin = _median_pairs(list(range(L)), col, chosen.color)
    comp = list(range(L, N))
    red = sum(1 for t in comp if col[t] == RED)
    y = RED if 2 * red >= len(comp) else BLUE
    outside, gout = _median_pairs(comp, col, y)
    edges = [(seq[a], seq[b]) for a, b in inside + outside]
    if gin is not None and gout is not None:
        w = canonical_split(seq[gin % N], seq[gout % N], N)
    else:
        w = fast_witness(N, edges)
    trace.update({"inside": len(inside), "outside": len(outside), "outside_color": "RB"[y]})
    return StrategyResult(make_matching(c, edges, Mode.MONO, w), "doubling", None, trace)


# ---------------------------------------------------------------- pipeline

def two_run_matching(c: Coloring, mode: Mode | str = Mode.BI) -> StrategyResult:
    """Full matching for R^n B^n up to rotation (nested pairs per run in mono mode)."""
    mode = Mode(mode)
    c.require_balanced()
    rs = runs(c)
    if len(rs) != 2:
        raise ValueError("coloring must have exactly two runs")
    N, n = len(c), c.n
    s = next(r.start for r in rs if r.color == RED)
    if mode is Mode.BI:
        edges = [((s + n - 1 - t) % N, (s + n + t) % N) for t in range(n)]
        w = canonical_split(s % N, (s + n) % N, N) if n < N else None
    else:
        h = n // 2
        edges = [((s + t) % N, (s + n - 1 - t) % N) for t in range(h)]
        edges += [((s + n + t) % N, (s + 2 * n - 1 - t) % N) for t in range(h)]
        w = None
    return _result(c, edges, mode, "pipeline", Fraction(n if mode is Mode.BI else 2 * (n // 2)),
                   {"case": "two_runs"}, w)


def lift_matching(c: Coloring, m: SeparatedMatching, origin: Sequence[int],
                  moved: frozenset[int], mode: Mode) -> tuple[SeparatedMatching, int]:
    """Carry a matching on a rearranged set back, dropping edges on moved points."""
    edges, dropped = [], 0
    for u, v in m.edges:
        a, b = origin[u], origin[v]
        if a in moved or b in moved:
            dropped += 1
        else:
            edges.append((a, b))
    return make_matching(c, edges, mode), dropped


def _sweep(pb: ch.PartitionBuilder, k1: int, k2: int, step: int, limit: Fraction):
    """First (k, lambda) in the order (k1,0), (k1,1), ..., (k2,0) with index > limit."""
    for k in range(k1, k2 + 1, step):
        lam_max = 0 if k == k2 else pb.max_lambda(k)
        for lam, (ar, ab) in enumerate(pb.indices(k, lam_max)):
            if max(ar, ab) > limit:
                return k, lam, max(ar, ab)
    return None


def _middle_minority(g: ch.KConfiguration, color: int) -> int:
    sub = ch.subdivide(g)
    return sum(c.minority for c, mid in zip(sub.chunks, sub.middle) if mid and c.color == color)


def pipeline(c: Coloring, constants: PipelineConstants | None = None,
             mode: Mode | str = Mode.BI, fallback: StrategyResult | None = None) -> StrategyResult:
    """The full case analysis, falling back to runs_matching when a branch
    comes out smaller or one of its preconditions fails.

    ``fallback`` may pass in an already computed runs_matching result.
    """
    mode = Mode(mode)
    c.require_balanced()
    K = constants or PipelineConstants.desk(c.n)
    n = c.n
    trace: dict = {"n": n, "mode": mode.value}
    if run_count(c) <= 2:
        return two_run_matching(c, mode)
    if fallback is None:
        fallback = runs_matching(c, mode)

    def done(res: StrategyResult | None, branch: str, extra=None) -> StrategyResult:
        trace["branch"] = branch
        trace.update(extra or {})
        if res is None or res.size < fallback.size:
            trace["fallback"] = "runs"
            trace["branch_size"] = None if res is None else res.size
            return StrategyResult(fallback.matching, "pipeline", fallback.guaranteed_bound,
                                  {**trace, "runs": fallback.trace})
        return StrategyResult(res.matching, "pipeline", res.guaranteed_bound, trace)

    if n < K.n0:
        return done(None, "small_n")
    step = 6 if mode is Mode.MONO else 3
    k1, k2 = K.k1_for(n, step), K.k2_for(n, step)
    trace.update({"k1": k1, "k2": k2})
    if not (1 <= k1 <= k2 <= n):
        return done(None, "parameter_window_empty")
    pb = ch.PartitionBuilder(c)
    s1 = ch.summarize(pb.build(k1, 0))
    trace["index_k1"] = s1.index
    if s1.index >= K.small_index:
        return done(fallback, "small_chunks")
    s2 = ch.summarize(pb.build(k2, 0))
    trace["index_k2"] = s2.index
    if s2.index <= K.small_index:
        try:
            res = interval_doubling(c, k2, mode)
        except ValueError as exc:
            return done(None, "large_chunks", {"error": str(exc)})
        return done(res, "large_chunks", {"doubling": res.trace})
    hit = _sweep(pb, k1, k2, step, K.small_index)
    if hit is None:
        return done(None, "sweep_no_crossing")
    k, lam, idx = hit
    trace.update({"k_star": k, "lambda_star": lam, "index_star": idx})
    try:
        r2 = ch.rearrange_to_P2(c, pb.build(k, lam))
    except ValueError as exc:
        return done(None, "rearrange_P2_failed", {"error": str(exc)})
    g4 = r2.configuration
    s4 = ch.summarize(g4)
    high = [sum(1 for x in g4.chunks if x.color == col and x.index >= K.variance_index)
            for col in (RED, BLUE)]
    delta = K.eps / 10
    trace.update({"moved_P2": len(r2.moved), "index_gamma4": s4.index, "high_index_chunks": high})
    if max(high) >= delta * Fraction(n, k):
        if mode is Mode.MONO and k % 2:
            return done(None, "variance")
        res = best_chunk_matching(g4, mode, "basic")
        m, dropped = lift_matching(c, res.matching, r2.origin, r2.moved, mode)
        return done(StrategyResult(m, "pipeline"), "variance",
                    {"derived": res.size, "dropped": dropped})
    try:
        r3 = ch.rearrange_to_P3(r2.coloring, g4, K.variance_index)
    except ValueError as exc:
        return done(None, "rearrange_P3_failed", {"error": str(exc)})
    g5 = r3.configuration
    s5 = ch.summarize(g5)
    origin = [r2.origin[q] for q in r3.origin]
    moved = r2.moved | frozenset(r2.origin[q] for q in r3.moved)
    trace.update({"moved_total": len(moved), "index_gamma5": s5.index})
    if k % 3 or any(x.index >= K.cap_index for x in g5.chunks):
        return done(None, "gamma5_precondition")
    mid = _middle_minority(g5, s5.max_color)
    trace["middle_minority"] = mid
    if mid <= K.middle_delta * n:
        if mode is Mode.MONO and (k // 3) % 2:
            return done(None, "small_middles")
        res, branch = subchunk_strategy(g5, mode), "small_middles"
    else:
        res, branch = best_chunk_matching(g5, mode, "cross"), "uniform_middles"
    m, dropped = lift_matching(c, res.matching, origin, moved, mode)
    return done(StrategyResult(m, "pipeline"), branch, {"derived": res.size, "dropped": dropped})


# ---------------------------------------------------------------- general monochromatic

def nested_color_pairing(c: Coloring, color: int) -> StrategyResult:
    """Pair the j-th and (r+1-j)-th points of one color: 2*floor(r/2) vertices."""
    pts = [q for q in range(len(c)) if c[q] == color]
    h = len(pts) // 2
    edges = [(pts[j], pts[-1 - j]) for j in range(h)]
    w = canonical_split(pts[h - 1] + 1, (pts[-1] + 1) % len(c), len(c)) if h else None
    return _result(c, edges, Mode.MONO, "greedy", Fraction(2 * h, 2), {"color": "RB"[color], "r": len(pts)}, w)


def general_monochromatic(c: Coloring, eps: Fraction = Fraction(1, 10 ** 5),
                          config: "PortfolioConfig | None" = None) -> StrategyResult:
    """Monochromatic matching for any coloring; sizes are reported in edges.

    Balanced: the monochromatic portfolio. Slightly unbalanced: drop the
    surplus majority points, solve the balanced rest, lift back. Otherwise
    nest the majority color.
    """
    N = len(c)
    r, b = c.n_red, c.n_blue
    big, small = (RED, BLUE) if r >= b else (BLUE, RED)
    hi, lo = max(r, b), min(r, b)
    if hi == lo:
        res = portfolio(c, Mode.MONO, config)
        return replace(res, trace={"branch": "balanced", "deleted": 0, "inner": res.strategy, **res.trace})
    if hi - lo <= Fraction(eps) ** 2 * N and lo > 0:
        drop = set([q for q in range(N) if c[q] == big][: hi - lo])
        keep = [q for q in range(N) if q not in drop]
        sub = Coloring(tuple(c[q] for q in keep))
        res = portfolio(sub, Mode.MONO, config)
        edges = [(keep[u], keep[v]) for u, v in res.matching.edges]
        return _result(c, edges, Mode.MONO, "general_mono", None,
                       {"branch": "balancing", "deleted": len(drop), "inner": res.strategy})
    res = nested_color_pairing(c, big)
    return replace(res, strategy="general_mono", guaranteed_bound=Fraction(hi // 2),
                   trace={"branch": "greedy", "deleted": 0, **res.trace})


# ---------------------------------------------------------------- portfolio

@dataclass(frozen=True)
class PortfolioConfig:
    """Which strategies the portfolio runs.

    ``max_chunks`` skips configurations with more chunks than this (their
    chunk matchings cost ell^2). ``k=1`` is never needed separately: its chunk
    matchings are the parallel matchings that runs_matching already scans.
    """

    exact_max_points: int = 200
    max_chunks: int = 256
    doubling_divisors: tuple[int, ...] = (1, 2, 4)
    use_pipeline: bool = True
    constants: PipelineConstants | None = None
    threads: int = 1


def portfolio_k_grid(n: int) -> list[int]:
    return [k for k in (1, 2) if k <= n] + list(range(3, n + 1, 3))


def _portfolio_tasks(c: Coloring, mode: Mode, cfg: PortfolioConfig):
    n, N = c.n, len(c)
    base = runs_matching(c, mode)
    tasks = [("runs", lambda: base)]
    if run_count(c) <= 2:
        tasks.append(("two_runs", lambda: two_run_matching(c, mode)))
    pb = ch.PartitionBuilder(c)
    for k in portfolio_k_grid(n):
        if k == 1 or (mode is Mode.MONO and k % 2):
            continue
        if N > cfg.max_chunks * (2 * k - 1):  # a k-chunk has at most 2k-1 points
            continue
        g = pb.configuration(k)
        if g is None or len(g.chunks) > cfg.max_chunks:
            continue
        tasks.append((f"chunk[k={k}]", lambda g=g: best_chunk_matching(g, mode, "basic")))
        if k % 3 == 0 and all(x.index < Fraction(3, 10) for x in g.chunks):
            tasks.append((f"cross[k={k}]", lambda g=g: best_chunk_matching(g, mode, "cross")))
    for d in cfg.doubling_divisors:
        k = max(1, n // d)
        if _low_index_chunk(pb.build(k, 0)) is not None:
            tasks.append((f"doubling[k={k}]", lambda k=k: interval_doubling(c, k, mode)))
    if cfg.use_pipeline:
        tasks.append(("pipeline", lambda: pipeline(c, cfg.constants, mode, base)))
    if N <= cfg.exact_max_points:
        tasks.append(("exact", lambda: _exact_result(c, mode)))
    return tasks


def _exact_result(c: Coloring, mode: Mode) -> StrategyResult:
    from .exact import max_separated_matching
    sol = max_separated_matching(c, mode)
    return StrategyResult(sol.certificate, "exact", Fraction(sol.optimum), {})


def portfolio(c: Coloring, mode: Mode | str = Mode.BI,
              config: PortfolioConfig | None = None) -> StrategyResult:
    """Run every applicable strategy, validate each, keep the largest.

    Ties go to the earliest strategy in the order runs, chunk grid,
    doubling, pipeline, exact.
    """
    mode = Mode(mode)
    c.require_balanced()
    cfg = config or PortfolioConfig()
    tasks = _portfolio_tasks(c, mode, cfg)
    if cfg.threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(cfg.threads) as pool:
            results = list(pool.map(lambda t: t[1](), tasks))
    else:
        results = [fn() for _, fn in tasks]
    sizes, best, best_name = {}, None, None
    for (name, _), res in zip(tasks, results):
        if not validate_matching(c, res.matching):
            sizes[name] = None
            continue
        sizes[name] = res.size
        if best is None or res.size > best.size:
            best, best_name = res, name
    return StrategyResult(best.matching, "portfolio", best.guaranteed_bound,
                          {"winner": best_name, "sizes": sizes, "winner_trace": best.trace})
