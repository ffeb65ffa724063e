"""Command line interface: ``convexmatch <subcommand> ...``.

Exit codes: 0 success, 1 a validation or bound failure was found, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import chunks as ch
from . import constructive as cs
from . import harness as hs
from . import words as wd
from .core import Coloring, Mode, SeparatedMatching, matching_to_path, validate_matching, validate_path
from .exact import max_alternating_path, max_separated_matching

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _first_line(text: str) -> str:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line
    raise InputError("input holds no coloring")


def read_coloring(path: str) -> Coloring:
    text = _first_line(_read_text(path))
    try:
        return Coloring.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _constants(name: str) -> cs.PipelineConstants | None:
    return cs.PipelineConstants.asymptotic() if name == "asymptotic" else None


def _parse_profile(text: str, k: int) -> tuple[hs.ChunkSpec, ...]:
    """``R:2,B:1/3`` = red chunk with 2 blue points, blue chunk of index 1/3."""
    out = []
    for item in text.split(","):
        try:
            col, val = item.strip().split(":")
            color = {"R": 0, "B": 1}[col.strip().upper()]
        except (ValueError, KeyError):
            raise InputError(f"bad profile item {item!r}; expected R:<count> or B:<index>") from None
        val = val.strip()
        if "/" in val or "." in val:
            out.extend(hs.profile_from_indices(k, [(color, Fraction(val))]))
        else:
            out.append(hs.ChunkSpec(color, int(val)))
    return tuple(out)


# ---------------------------------------------------------------- subcommands

def cmd_gen(a) -> int:
    profile = _parse_profile(a.profile, a.k or 0) if a.profile else ()
    lengths = tuple(int(x) for x in a.lengths.split(",")) if a.lengths else ()
    spec = hs.GeneratorSpec(a.kind, a.size, a.seed, lengths, a.p, a.k, profile, a.noise)
    c = hs.generate(spec)
    text = str(wd.encode(c)) if a.format == "word" else str(c)
    if a.out and a.out != "-":
        Path(a.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


OBJECTIVE_ALIASES = {"bi-matching": ("matching", "bi"), "mono-matching": ("matching", "mono"),
                     "alt-path": ("path", None)}


def cmd_solve(a) -> int:
    c = read_coloring(a.input)
    obj = a.objective
    if obj in OBJECTIVE_ALIASES:
        obj, mode = OBJECTIVE_ALIASES[obj]
        a.mode = mode or a.mode
    if obj == "matching":
        sol = max_separated_matching(c, a.mode)
        _emit({"objective": obj, "optimum": sol.optimum, "matching": sol.certificate.to_json()}, a.out)
    elif obj == "path":
        sol = max_alternating_path(c)
        _emit({"objective": obj, "optimum": sol.optimum, "path": sol.certificate.to_json()}, a.out)
    else:
        w = wd.encode(c)
        if obj == "antipal":
            length, cert = wd.max_antipalindromic_subsequence(w)
        else:
            length, cert = wd.max_palindromic_subsequence(w, "even" if obj == "pal-even" else "any")
        _emit({"objective": obj, "length": length, "positions": list(cert.positions),
               "subsequence": "".join(map(str, cert.extract(w)))}, a.out)
    return EXIT_OK


def cmd_construct(a) -> int:
    c = read_coloring(a.input)
    res, _ = hs.run_strategy(a.strategy, c, Mode(a.mode), a.k, _constants(a.constants))
    rep = validate_matching(c, res.matching)
    data = res.to_json()
    data["valid"] = bool(rep)
    _emit(data, a.out)
    return EXIT_OK if rep else EXIT_FAIL


def cmd_verify(a) -> int:
    c = read_coloring(a.input)
    try:
        data = json.loads(_read_text(a.result))
    except json.JSONDecodeError as exc:
        raise InputError(f"result is not JSON: {exc}") from None
    if "matching" in data:
        data = data["matching"]
    try:
        if "vertices" in data or "path" in data:
            from .core import AlternatingPath
            path = AlternatingPath.from_json(data.get("path", data))
            rep = validate_path(c, path)
            kind, size = "path", len(path.vertices)
        else:
            m = SeparatedMatching.from_json(data)
            rep = validate_matching(c, m)
            kind, size = "matching", len(m)
            if rep and a.path:
                p = matching_to_path(c, m)
                prep = validate_path(c, p)
                if not prep or len(p.vertices) != 2 * size:
                    rep = prep or rep
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed result: {exc}") from None
    print(json.dumps({"kind": kind, "size": size, "valid": bool(rep),
                      "condition": rep.condition, "detail": rep.detail}))
    return EXIT_OK if rep else EXIT_FAIL


def cmd_bench(a) -> int:
    try:
        cfg = hs.parse_config(_read_text(a.config))
    except hs.ConfigError as exc:
        raise InputError(str(exc)) from None
    if a.seed is not None:
        cfg.seeds = tuple(a.seed + i for i in range(len(cfg.seeds)))
    records = hs.run_experiment(cfg)
    if a.format == "json":
        text = hs.records_to_json(records, a.timing)
    else:
        text = hs.records_to_csv(records, a.timing)
    if a.out and a.out != "-":
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    bad = hs.failures(records)
    if bad:
        print(f"{len(bad)} failing rows", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_convert(a) -> int:
    text = _first_line(_read_text(a.input))
    try:
        if a.to == "word":
            out = str(wd.encode(Coloring.parse(text)))
        else:
            out = str(wd.decode(wd.CircularWord.parse(text)))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(out)
    return EXIT_OK


def cmd_chunks(a) -> int:
    c = read_coloring(a.input)
    p = ch.build_partition(c, a.k, a.lam)
    s = ch.summarize(p)
    rep = ch.check_prop_2_2(p)
    g = ch.to_configuration(p)
    out = {
        "k": a.k, "lambda": a.lam, "lambda_effective": p.lambda_effective,
        "chunks": [x.to_dict() for x in p.chunks], "uncovered": sorted(p.uncovered),
        "avg_red": str(s.avg_red), "avg_blue": str(s.avg_blue), "index": str(s.index),
        "prop_2_2": rep.to_dict(),
        "prop_2_3": ch.check_prop_2_3(g).to_dict() if g is not None else None,
    }
    _emit(out, a.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="convexmatch", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a coloring")
    g.add_argument("--kind", default="uniform-balanced", choices=hs.KINDS)
    g.add_argument("--size", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--lengths", help="comma separated run or block lengths")
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--noise", type=float, default=0.0)
    g.add_argument("--k", type=int)
    g.add_argument("--profile", help="chunk profile such as R:2,B:1/3")
    g.add_argument("--format", choices=("coloring", "word"), default="coloring")
    g.add_argument("--out")
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("solve", help="exact optimum")
    s.add_argument("--input", required=True)
    s.add_argument("--mode", choices=("bi", "mono"), default="bi")
    s.add_argument("--objective", default="matching",
                   choices=("matching", "path", "antipal", "pal", "pal-even", *OBJECTIVE_ALIASES))
    s.add_argument("--out", "--certificate", dest="out")
    s.set_defaults(fn=cmd_solve)

    c = sub.add_parser("construct", help="run a constructive strategy")
    c.add_argument("--strategy", required=True, choices=hs.STRATEGIES)
    c.add_argument("--mode", choices=("bi", "mono"), default="bi")
    c.add_argument("--input", required=True)
    c.add_argument("--out")
    c.add_argument("--k", type=int)
    c.add_argument("--constants", choices=("desk", "asymptotic"), default="desk")
    c.set_defaults(fn=cmd_construct)

    v = sub.add_parser("verify", help="validate a matching or path JSON")
    v.add_argument("--input", required=True, help="coloring file")
    v.add_argument("--result", required=True, help="JSON from solve or construct")
    v.add_argument("--path", action="store_true", help="also check the derived alternating path")
    v.set_defaults(fn=cmd_verify)

    b = sub.add_parser("bench", help="run an experiment config and write CSV")
    b.add_argument("--config", required=True)
    b.add_argument("--out")
    b.add_argument("--seed", type=int, help="shift the config's seeds to start here")
    b.add_argument("--timing", action="store_true", help="add a wall_time column")
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.set_defaults(fn=cmd_bench)

    cv = sub.add_parser("convert", help="coloring <-> binary word")
    cv.add_argument("--to", required=True, choices=("word", "coloring"))
    cv.add_argument("--input", required=True)
    cv.set_defaults(fn=cmd_convert)

    k = sub.add_parser("chunks", help="(k, lambda)-partition with its checks")
    k.add_argument("--input", required=True)
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--lam", type=int, default=0)
    k.add_argument("--out")
    k.set_defaults(fn=cmd_chunks)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return a.fn(a)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
