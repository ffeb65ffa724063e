"""Instance generators, bound checks and the experiment runner.

Randomness comes from numpy's PCG64 seeded with the 64-bit instance seed,
so a seed names the same coloring on every platform numpy supports.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import chunks as ch
from . import constructive as cs
from .core import BLUE, RED, Coloring, Mode, run_count, validate_matching
from .exact import max_separated_matching

SCHEMA_VERSION = 1
PRNG_NAME = "numpy.PCG64"

# Smallest exact bichromatic optimum over all balanced colorings of N points
# (exhaustive search); the stored coloring is the first minimiser found.
WORST_KNOWN = {
    4: ("RRBB", 2), 6: ("RRRBBB", 3), 8: ("RRRBBRBB", 3), 10: ("RRRRBBRBBB", 4),
    12: ("RRRRRBBRBBBB", 5), 14: ("RRRRRBBBRBRBBB", 5), 16: ("RRRRRRBBBRBRBBBB", 6),
    18: ("RRRRRRRBBBRBRBBBBB", 7), 20: ("RRRRRRRBBBBRBRBRBBBB", 7),
}

KINDS = ("uniform-balanced", "run-lengths", "bernoulli", "chunk-profile", "noisy-blocks",
         "worst-known")


@dataclass(frozen=True)
class ChunkSpec:
    """One chunk of a chunk profile.

    ``split`` is how many majority points precede the minority block; the
    default ``None`` puts the block just before the last majority point.
    """

    color: int
    minority: int
    split: int | None = None


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    size: int | None = None
    seed: int = 0
    lengths: tuple[int, ...] = ()
    p: float = 0.5
    k: int | None = None
    profile: tuple[ChunkSpec, ...] = ()
    noise: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _repair(cols: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Flip uniformly chosen points of the surplus color until balanced."""
    cols = cols.copy()
    n = len(cols) // 2
    surplus = int((cols == RED).sum()) - n
    if surplus:
        color = RED if surplus > 0 else BLUE
        cand = np.flatnonzero(cols == color)
        flip = rng.choice(cand, size=abs(surplus), replace=False)
        cols[flip] = 1 - color
    return cols


def chunk_pattern(k: int, spec: ChunkSpec) -> list[int]:
    if not 0 <= spec.minority < k:
        raise ValueError(f"minority count {spec.minority} infeasible for k={k} (index must be < 1)")
    split = k - 1 if spec.split is None else spec.split
    if not 0 <= split <= k - 1:
        raise ValueError(f"split must lie in [0, {k - 1}]")
    maj, mino = spec.color, 1 - spec.color
    return [maj] * split + [mino] * spec.minority + [maj] * (k - split)


def profile_from_indices(k: int, items: Iterable[tuple[int, Fraction | float | str]]) -> tuple[ChunkSpec, ...]:
    """Chunk specs from (color, index) pairs; the index times k must be an integer."""
    out = []
    for color, idx in items:
        idx = Fraction(idx)
        m = idx * k
        if m.denominator != 1 or not 0 <= idx < 1:
            raise ValueError(f"index {idx} is infeasible for k={k}")
        out.append(ChunkSpec(color, int(m)))
    return tuple(out)


def _chunk_profile(spec: GeneratorSpec) -> Coloring:
    k = spec.k
    if not k or k < 1 or not spec.profile:
        raise ValueError("chunk-profile needs k >= 1 and a non-empty profile")
    seq: list[int] = []
    for item in spec.profile:
        seq.extend(chunk_pattern(k, item))
    if k % 2 == 0:
        seq.reverse()  # even k: the greedy walks counterclockwise from the last point
    c = Coloring(tuple(seq))
    if spec.size is not None and spec.size != len(c):
        raise ValueError(f"profile has {len(c)} points, size {spec.size} requested")
    want = sorted((s.color, Fraction(s.minority, k)) for s in spec.profile)
    if c.balanced:
        g = ch.PartitionBuilder(c).configuration(k)
    else:  # no greedy partition for unbalanced sets; check the blocks themselves
        g = ch.configuration_from_chunks(c.colors, k, [k + s.minority for s in spec.profile])
    got = sorted((x.color, x.index) for x in g.chunks) if g else None
    if got != want:
        raise ValueError("the (k, 0)-partition does not reproduce the requested profile")
    return c


def generate(spec: GeneratorSpec) -> Coloring:
    """Deterministic coloring for a generator spec."""
    rng = _rng(spec.seed)
    kind = spec.kind
    if kind == "chunk-profile":
        return _chunk_profile(spec)
    if kind == "worst-known":
        if spec.size not in WORST_KNOWN:
            raise ValueError(f"worst-known sizes: {sorted(WORST_KNOWN)}")
        return Coloring.parse(WORST_KNOWN[spec.size][0])
    if kind == "run-lengths":
        if not spec.lengths or any(x < 1 for x in spec.lengths):
            raise ValueError("run-lengths needs positive lengths")
        seq = [j % 2 for j, x in enumerate(spec.lengths) for _ in range(x)]
        if spec.size is not None and spec.size != len(seq):
            raise ValueError(f"lengths sum to {len(seq)}, size {spec.size} requested")
        return Coloring(tuple(seq))
    N = spec.size
    if N is None or N < 2 or N % 2:
        raise ValueError(f"{kind} needs an even size >= 2")
    if kind == "uniform-balanced":
        cols = rng.permutation(np.array([RED] * (N // 2) + [BLUE] * (N // 2)))
    elif kind == "bernoulli":
        if not 0 <= spec.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        cols = _repair((rng.random(N) < spec.p).astype(np.int64), rng)
    else:  # noisy-blocks
        lengths = spec.lengths or (N // 2, N // 2)
        if sum(lengths) != N:
            raise ValueError("block lengths must sum to the size")
        cols = np.array([j % 2 for j, x in enumerate(lengths) for _ in range(x)])
        flips = rng.random(N) < spec.noise
        cols = _repair(np.where(flips, 1 - cols, cols), rng)
        cols = np.roll(cols, int(rng.integers(N)))
    return Coloring(tuple(int(x) for x in cols))


# ---------------------------------------------------------------- bounds

@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: Fraction
    achieved: Fraction
    satisfied: bool


def _check(name: str, value, achieved) -> BoundCheck:
    value, achieved = Fraction(value), Fraction(achieved)
    return BoundCheck(name, value, achieved, achieved >= value)


def variance_bound(g: ch.KConfiguration, c4=Fraction(1, 40)) -> Fraction | None:
    n = Fraction(g.n_points, 2)
    s = ch.summarize(g)
    if s.index > Fraction(11, 100):
        return None
    high = max(sum(1 for x in g.chunks if x.color == col and x.index >= Fraction(22, 100))
               for col in (RED, BLUE))
    if not high:
        return None
    delta = high * Fraction(g.k) / n
    return (Fraction(1, 2) + c4 * delta * delta) * n


def _middle_minority(g: ch.KConfiguration) -> int | None:
    if g.k % 3 or any(x.index >= Fraction(3, 10) for x in g.chunks):
        return None
    return cs._middle_minority(g, ch.summarize(g).max_color)


def uniform_middles_bound(g: ch.KConfiguration, c5=Fraction(1, 4)) -> Fraction | None:
    mid = _middle_minority(g)
    if not mid:
        return None
    n = Fraction(g.n_points, 2)
    return (Fraction(1, 2) + c5 * Fraction(mid) / n) * n


def small_middles_bound(g: ch.KConfiguration, delta=Fraction(1, 10 ** 4),
                     eps=Fraction(1, 10 ** 5)) -> Fraction | None:
    mid = _middle_minority(g)
    n = Fraction(g.n_points, 2)
    if mid is None or ch.summarize(g).index < Fraction(9, 100) or mid > delta * n:
        return None
    return (Fraction(1, 2) + eps) * n


def check_bounds(c: Coloring, res: cs.StrategyResult, mode: Mode,
                 g: ch.KConfiguration | None = None) -> list[BoundCheck]:
    """Every bound that applies to this instance and strategy, in exact arithmetic."""
    out: list[BoundCheck] = []
    if not c.balanced:
        return out
    n = c.n
    size = res.size
    name = res.strategy
    bi = mode is Mode.BI
    if bi and name in ("portfolio", "exact", "chunk", "cross", "subchunk"):
        out.append(_check("half_floor", math.ceil(n / 2), size))
    if bi and name == "runs":
        b = cs.runs_bound(c)
        if b is not None:
            out.append(_check("runs_bound", b, size))
        pb = ch.PartitionBuilder(c)
        for k in (2, 3):
            if 8 * k * k <= n and ch.summarize(pb.build(k, 0)).index >= Fraction(1, 10):
                out.append(_check(f"high_index_runs[k={k}]", (Fraction(1, 2) + Fraction(1, 12800 * k ** 4)) * n, size))
    if name in ("chunk", "cross", "subchunk") and "average" in res.trace:
        avg = res.trace["average"]
        if bi or res.trace.get("k", 1) % 2 == 0:
            out.append(_check("chunk_average_mono" if not bi else "chunk_average_bi", Fraction(n, 2), avg))
    if name == "doubling" and res.guaranteed_bound is not None:
        out.append(_check("doubling", res.guaranteed_bound, size))
    if name == "pipeline" and res.trace.get("case") == "two_runs":
        out.append(_check("two_runs_full", n if bi else 2 * (n // 2), size))
    if bi and g is not None:
        if name == "chunk":
            b = variance_bound(g)
            if b is not None:
                out.append(_check("variance", b, size))
        if name == "cross":
            b = uniform_middles_bound(g)
            if b is not None:
                out.append(_check("uniform_middles", b, size))
        if name == "subchunk":
            b = small_middles_bound(g)
            if b is not None:
                out.append(_check("small_middles", b, size))
    return out


# ---------------------------------------------------------------- strategies

STRATEGIES = ("runs", "chunk", "cross", "subchunk", "doubling", "pipeline", "portfolio",
              "exact", "general_mono")


def pick_configuration(c: Coloring, mode: Mode, variant: str, k: int | None = None) -> ch.KConfiguration:
    """The requested k-configuration, or the first grid k that yields a usable one."""
    pb = ch.PartitionBuilder(c)
    grid = [k] if k else [x for x in cs.portfolio_k_grid(c.n) if x > 1] + [1]
    for kk in grid:
        if kk > c.n or (mode is Mode.MONO and kk % 2):
            continue
        if variant != "basic" and (kk % 3 or (variant == "subchunk" and mode is Mode.MONO and (kk // 3) % 2)):
            continue
        g = pb.configuration(kk)
        if g is None:
            continue
        if variant != "basic" and any(x.index >= Fraction(3, 10) for x in g.chunks):
            continue
        return g
    raise ValueError(f"no usable {variant} configuration" + (f" for k={k}" if k else ""))


def run_strategy(name: str, c: Coloring, mode: Mode | str = Mode.BI, k: int | None = None,
                 constants: cs.PipelineConstants | None = None,
                 g: ch.KConfiguration | None = None) -> tuple[cs.StrategyResult, ch.KConfiguration | None]:
    mode = Mode(mode)
    if name == "runs":
        return cs.runs_matching(c, mode), None
    if name in ("chunk", "cross", "subchunk"):
        variant = {"chunk": "basic", "cross": "cross", "subchunk": "subchunk"}[name]
        g = g or pick_configuration(c, mode, variant, k)
        if name == "subchunk":
            return cs.subchunk_strategy(g, mode), g
        return cs.best_chunk_matching(g, mode, variant if name == "cross" else "basic"), g
    if name == "doubling":
        kk = k or c.n
        return cs.interval_doubling(c, kk, mode), None
    if name == "pipeline":
        return cs.pipeline(c, constants, mode), None
    if name == "portfolio":
        return cs.portfolio(c, mode, cs.PortfolioConfig(constants=constants, threads=thread_cap())), None
    if name == "exact":
        return cs._exact_result(c, mode), None
    if name == "general_mono":
        return cs.general_monochromatic(c), None
    raise ValueError(f"unknown strategy {name!r}; expected one of {STRATEGIES}")


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("CONVEXMATCH_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------- experiments

class ConfigError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass
class ExperimentConfig:
    """Key-value experiment description.

    Keys: generator, sizes, seeds (``a..b`` or a list), strategies, modes,
    oracle_max_points, p, lengths, noise, k, constants (desk or asymptotic).
    """

    generator: str = "uniform-balanced"
    sizes: tuple[int, ...] = (16,)
    seeds: tuple[int, ...] = (0,)
    strategies: tuple[str, ...] = ("runs",)
    modes: tuple[str, ...] = ("bi",)
    oracle_max_points: int = 20
    p: float = 0.5
    lengths: tuple[int, ...] = ()
    noise: float = 0.0
    k: int | None = None
    constants: str = "desk"


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        a, b = text.split("..")
        return tuple(range(int(a), int(b) + 1))
    return tuple(int(x) for x in text.replace(",", " ").split())


def parse_config(text: str) -> ExperimentConfig:
    cfg = ExperimentConfig()
    parsers: dict[str, Callable[[str], object]] = {
        "generator": str.strip, "sizes": _int_list, "seeds": _int_list,
        "strategies": lambda s: tuple(x for x in s.replace(",", " ").split()),
        "modes": lambda s: tuple(x for x in s.replace(",", " ").split()),
        "oracle_max_points": int, "p": float, "lengths": _int_list, "noise": float,
        "k": int, "constants": str.strip,
    }
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(no, f"expected 'key = value', got {raw.strip()!r}")
        key, val = (x.strip() for x in line.split("=", 1))
        if key not in parsers:
            raise ConfigError(no, f"unknown key {key!r}")
        try:
            setattr(cfg, key, parsers[key](val))
        except ValueError as exc:
            raise ConfigError(no, f"bad value for {key}: {exc}") from None
    if cfg.generator not in KINDS:
        raise ConfigError(0, f"unknown generator {cfg.generator!r}")
    for s in cfg.strategies:
        if s not in STRATEGIES:
            raise ConfigError(0, f"unknown strategy {s!r}")
    for m in cfg.modes:
        if m not in ("bi", "mono"):
            raise ConfigError(0, f"unknown mode {m!r}")
    if cfg.constants not in ("desk", "asymptotic"):
        raise ConfigError(0, "constants must be desk or asymptotic")
    return cfg


@dataclass
class ExperimentRecord:
    instance_id: int
    kind: str
    seed: int
    n_points: int
    runs: int
    strategy: str
    mode: str
    edges: int | None
    vertices: int | None
    optimum: int | None
    valid: bool | None
    bound_name: str = ""
    bound_value: Fraction | None = None
    satisfied: bool | None = None
    status: str = "ok"
    wall_time: float = 0.0

    def row(self, timing: bool) -> list[str]:
        def s(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "1" if x else "0"
            return str(x)
        out = [s(self.instance_id), self.kind, s(self.seed), s(self.n_points), s(self.runs),
               self.strategy, self.mode, s(self.edges), s(self.vertices), s(self.optimum),
               s(self.valid), self.bound_name, s(self.bound_value), s(self.satisfied), self.status]
        if timing:
            out.append(f"{self.wall_time:.6f}")
        return out


COLUMNS = ["instance_id", "kind", "seed", "n_points", "runs", "strategy", "mode", "edges",
           "vertices", "optimum", "valid", "bound_name", "bound_value", "satisfied", "status"]


def instances(cfg: ExperimentConfig):
    iid = 0
    for size in cfg.sizes:
        for seed in cfg.seeds:
            spec = GeneratorSpec(cfg.generator, size, seed, cfg.lengths, cfg.p, cfg.k, (), cfg.noise)
            yield iid, spec, generate(spec)
            iid += 1


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Cross product of instances, strategies and modes; records sorted by instance id."""
    constants = cs.PipelineConstants.asymptotic() if cfg.constants == "asymptotic" else None
    records = []
    for iid, spec, c in instances(cfg):
        t = run_count(c)
        for mode_name in cfg.modes:
            mode = Mode(mode_name)
            opt = None
            if len(c) <= cfg.oracle_max_points and len(c) >= 2:
                opt = max_separated_matching(c, mode).optimum
            for name in cfg.strategies:
                base = dict(instance_id=iid, kind=spec.kind, seed=spec.seed, n_points=len(c),
                            runs=t, strategy=name, mode=mode_name, optimum=opt)
                t0 = time.perf_counter()
                try:
                    res, g = run_strategy(name, c, mode, cfg.k, constants)
                except ValueError as exc:
                    records.append(ExperimentRecord(**base, edges=None, vertices=None, valid=None,
                                                    status="n/a: " + str(exc).replace(",", ";")))
                    continue
                dt = time.perf_counter() - t0
                ok = bool(validate_matching(c, res.matching))
                status = "ok" if (opt is None or res.size <= opt) else "exceeds_optimum"
                common = dict(base, edges=res.size, vertices=2 * res.size, valid=ok,
                              wall_time=dt, status=status if ok else "invalid")
                checks = check_bounds(c, res, mode, g)
                if not checks:
                    records.append(ExperimentRecord(**common))
                for b in checks:
                    records.append(ExperimentRecord(**common, bound_name=b.name,
                                                    bound_value=b.value, satisfied=b.satisfied))
    return records


def write_csv(records: Sequence[ExperimentRecord], stream, timing: bool = False) -> None:
    stream.write(f"# convexmatch schema={SCHEMA_VERSION} prng={PRNG_NAME}\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(COLUMNS + (["wall_time"] if timing else []))
    for r in records:
        w.writerow(r.row(timing))


def records_to_csv(records: Sequence[ExperimentRecord], timing: bool = False) -> str:
    buf = io.StringIO()
    write_csv(records, buf, timing)
    return buf.getvalue()


def records_to_json(records: Sequence[ExperimentRecord], timing: bool = False) -> str:
    """Same rows as the CSV, as a list of objects with string-valued fields."""
    cols = COLUMNS + (["wall_time"] if timing else [])
    rows = [dict(zip(cols, r.row(timing))) for r in records]
    doc = {"schema": SCHEMA_VERSION, "prng": PRNG_NAME, "columns": cols, "rows": rows}
    return json.dumps(doc, indent=1) + "\n"


def failures(records: Iterable[ExperimentRecord]) -> list[ExperimentRecord]:
    """Rows showing an invalid matching, a broken bound or an impossible size."""
    return [r for r in records
            if r.valid is False or r.satisfied is False or r.status == "exceeds_optimum"]


# ---------------------------------------------------------------- crafted instances

def _balanced_profile(rng: np.random.Generator, red: list[ChunkSpec], blue: list[ChunkSpec]):
    items = red + blue
    order = rng.permutation(len(items))
    return tuple(items[i] for i in order)


CRAFTED_CASES = ("variance", "uniform_middles", "small_middles")


def crafted_instance(case: str, seed: int) -> tuple[Coloring, ch.KConfiguration]:
    """A balanced coloring whose (k, 0)-partition meets the hypotheses of one bound.

    ``case`` names the bound: "variance" (many chunks of index >= 0.22),
    "uniform_middles" (minority points in middle thirds) or "small_middles"
    (index >= 0.09 with empty middle thirds). Red and blue chunks use the same
    multiset of minority counts, which keeps the colors balanced.
    """
    rng = _rng(seed)
    for _ in range(100):
        if case == "variance":
            k = int(rng.choice([10, 20, 30]))
            m = int(rng.integers(20, 60))
            high = int(np.ceil(m * rng.uniform(0.12, 0.3)))
            mins = [int(np.ceil(0.22 * k)) + int(rng.integers(0, k // 5)) for _ in range(high)]
            mins += [int(rng.integers(0, max(1, k // 20) + 1)) for _ in range(m - high)]
            red = [ChunkSpec(RED, x, int(rng.integers(0, k))) for x in mins]
            blue = [ChunkSpec(BLUE, x, int(rng.integers(0, k))) for x in mins]
        elif case in ("uniform_middles", "small_middles"):
            k = 3 * int(rng.choice([3, 4, 5, 10]))
            m = int(rng.integers(10, 40))
            cap = (3 * k - 1) // 10  # index < 0.3
            lo = 0 if case == "uniform_middles" else int(np.ceil(0.09 * k))
            mins = [int(rng.integers(lo, cap + 1)) for _ in range(m)]
            if case == "uniform_middles":
                # red minority inside the middle third
                split = [int(rng.integers(k // 3, 2 * k // 3)) for _ in range(m)]
            else:
                # red minority in the outer thirds only
                split = [int(rng.choice([0, k - 1])) for _ in range(m)]
            red = [ChunkSpec(RED, x, s) for x, s in zip(mins, split)]
            blue = [ChunkSpec(BLUE, x, int(rng.integers(0, k))) for x in mins]
        else:
            raise ValueError(f"case must be one of {CRAFTED_CASES}")
        spec = GeneratorSpec("chunk-profile", seed=seed, k=k,
                             profile=_balanced_profile(rng, red, blue))
        c = generate(spec)
        g = ch.PartitionBuilder(c).configuration(k)
        bound = {"variance": variance_bound, "uniform_middles": uniform_middles_bound,
                 "small_middles": small_middles_bound}[case](g)
        if bound is not None:
            return c, g
    raise RuntimeError(f"could not craft a {case} instance")


def _noisy_chunk(rng, k: int, m: int, color: int) -> list[int]:
    """k points of ``color`` and m others in random order, ending on ``color``."""
    body = np.array([color] * (k - 1) + [1 - color] * m)
    return rng.permutation(body).tolist() + [color]


def doubling_instance(seed: int, n: int = 10 ** 4, k: int = 8100,
                      max_index: Fraction = Fraction(1, 10)) -> Coloring:
    """Balanced coloring whose (k, 0)-partition has index at most ``max_index``.

    Written in walking order of the greedy: one blue and one red noisy
    k-chunk, then a remainder too small to hold another k-chunk.
    """
    if not (k <= n < 2 * k):
        raise ValueError("need k <= n < 2k so exactly one chunk per color fits")
    rng = _rng(seed)
    cap = int(max_index * k)
    cap = min(cap, n - k)
    m_blue, m_red = (int(x) for x in rng.integers(0, cap + 1, size=2))
    walk = _noisy_chunk(rng, k, m_blue, BLUE) + _noisy_chunk(rng, k, m_red, RED)
    rest = np.array([RED] * (n - k - m_blue) + [BLUE] * (n - k - m_red))
    walk += rng.permutation(rest).tolist()
    if k % 2 == 0:
        walk.reverse()  # the walk runs counterclockwise from the last point
    c = Coloring(tuple(int(x) for x in walk))
    s = ch.summarize(ch.build_partition(c, k, 0))
    if s.index > max_index:
        raise RuntimeError("generated instance misses the index target")
    return c
