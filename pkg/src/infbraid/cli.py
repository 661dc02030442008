"""
Command-line front end.

Every subcommand builds a JSON-ready result, optionally a list of flat rows for csv/table output,
and a pass/fail flag. The process exits with 0 iff every requested verdict passed; failures to
run at all print {"error": {...}} and exit with 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from .braid import InfiniteBraidSpec, diagonal_counts, find_diagonals, non_diagonal_positions
from .bracket import BraidWord, WordParseError, bracket, normalized_bracket
from .khovanov import (COEFFICIENTS, DEFAULT_MAX_CROSSINGS, ClosureSpec, ResourceLimitError,
                       khovanov_homology, normalized_homology, stabilization_homology_report)
from .projector import bracket_stabilization, jones_wenzl, jw_series, verify_axioms
from .rewrite import (RewriteError, ledger_monomial, mixed_bracket, multicone_term,
                      pull_turnbacks)

FORMATS = ("json", "csv", "table")


@dataclass
class ExperimentConfig:
    """Everything that determines a run's output. Loaded from --config, overridden by flags."""

    spec: InfiniteBraidSpec | None = None
    max_len: int | None = None
    order: int | None = None
    closure: ClosureSpec = field(default_factory=ClosureSpec.trace)
    coefficients: str = "q"
    format: str = "json"
    seed: int = 0

    @classmethod
    def from_json(cls, obj: dict) -> ExperimentConfig:
        return cls(
            spec=InfiniteBraidSpec.from_json(obj["spec"]) if "spec" in obj else None,
            max_len=obj.get("max_len"),
            order=obj.get("order"),
            closure=ClosureSpec.from_json(obj.get("closure", {"kind": "trace"})),
            coefficients=obj.get("coefficients", "q"),
            format=obj.get("format", "json"),
            seed=int(obj.get("seed", 0)),
        )


class CliError(Exception):
    def __init__(self, kind: str, message: str, **extra):
        super().__init__(message)
        self.kind = kind
        self.extra = extra


# -- output ------------------------------------------------------------------------------------

def _render(result: dict, rows: list[dict] | None, fmt: str) -> str:
    if fmt == "json" or not rows:
        return json.dumps(result, indent=2, sort_keys=True)
    columns = list(rows[0])
    for row in rows[1:]:
        columns += [c for c in row if c not in columns]
    cells = [[_cell(row.get(c, "")) for c in columns] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return buf.getvalue().rstrip("\n")
    widths = [max(len(c), *(len(r[k]) for r in cells)) for k, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join(line.rstrip() for line in lines)


def _cell(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def _tl_rows(x) -> list[dict]:
    return [{"matching": m.pairs(), "coeff": str(x.terms[m])}
            for m in sorted(x.terms, key=lambda m: m.pairs())]


def _homology_rows(h) -> list[dict]:
    return [{"i": i, "j": j, "rank": h.rank(i, j), "torsion": list(h.torsion.get((i, j), ()))}
            for i, j in h.groups()]


# -- argument helpers --------------------------------------------------------------------------

def _word(args) -> BraidWord:
    if args.n is None:
        raise CliError("usage", "--n is required")
    try:
        return BraidWord.parse(args.n, args.word or "")
    except WordParseError as exc:
        raise CliError("parse", str(exc), position=exc.position) from exc


def _spec(args, cfg: ExperimentConfig) -> InfiniteBraidSpec:
    if args.spec:
        with open(args.spec) as fh:
            return InfiniteBraidSpec.from_json(json.load(fh))
    if args.n is not None:
        kind = args.kind or "torus"
        base = [int(t) for t in args.base.replace(",", " ").split()] if args.base else []
        seed = args.seed if args.seed is not None else cfg.seed
        return InfiniteBraidSpec(args.n, kind, tuple(base), seed)
    if cfg.spec is not None:
        return cfg.spec
    raise CliError("usage", "give --spec FILE, --n with --kind/--base, or a config with a spec")


def _closure(args, cfg: ExperimentConfig) -> ClosureSpec:
    if args.closure in (None, "trace"):
        return cfg.closure if args.closure is None else ClosureSpec.trace()
    try:
        return ClosureSpec.from_json(json.loads(args.closure))
    except (ValueError, KeyError) as exc:
        raise CliError("closure", f"bad closure: {exc}") from exc


def _pick(value, fallback, name: str):
    out = value if value is not None else fallback
    if out is None:
        raise CliError("usage", f"--{name} is required")
    return out


# -- commands ----------------------------------------------------------------------------------

def cmd_bracket(args, cfg):
    w = _word(args)
    x = normalized_bracket(w) if args.normalized else bracket(w)
    result = {"word": w.to_ints(), "n": w.n, "normalized": bool(args.normalized),
              "bracket": x.to_json(), "text": str(x)}
    return result, _tl_rows(x), True


def cmd_jw(args, cfg):
    n = args.n
    if n is None:
        raise CliError("usage", "--n is required")
    order = _pick(args.order, cfg.order, "order")
    x = jw_series(n, order)
    result = {"n": n, "order": order, "series": {str(m): str(c) for m, c in sorted(x.terms.items())}}
    ok = True
    if args.verify:
        rep = verify_axioms(jones_wenzl(n))
        rep.pop("turnback_detail")
        result["axioms"] = rep
        ok = rep["passed"]
    rows = [{"matching": m.pairs(), "coeff": str(c)}
            for m, c in sorted(x.terms.items(), key=lambda t: t[0].pairs())]
    return result, rows, ok


def cmd_diagonals(args, cfg):
    if args.word is not None:
        w = _word(args)
        d = find_diagonals(w)
        result = {"word": w.to_ints(), **d.to_json(w.n),
                  "non_diagonal": non_diagonal_positions(w, d)}
        rows = [{"diagonal": k, "positions": list(p)} for k, p in enumerate(d.diagonals)]
        return result, rows, True
    spec = _spec(args, cfg)
    L = _pick(args.len, cfg.max_len, "len")
    counts = diagonal_counts(spec, range(1, L + 1))
    return {"spec": spec.to_json(), "counts": counts}, counts, True


def cmd_multicone(args, cfg):
    w = _word(args)
    d = find_diagonals(w)
    if args.index is None:
        raise CliError("usage", "--index is required")
    try:
        t = multicone_term(w, d, args.index)
    except ValueError as exc:
        raise CliError("index", str(exc)) from exc
    result = {"word": w.to_ints(), "index": args.index, "y": d.y, "term": t.to_json(),
              "text": str(t)}
    ok = True
    if args.pull:
        try:
            out, ledger = pull_turnbacks(t, d.y, schedule=args.schedule)
        except RewriteError as exc:
            raise CliError("rewrite", str(exc)) from exc
        before = mixed_bracket(t)
        after = mixed_bracket(out)
        preserved = before == after.scale(ledger_monomial(ledger))
        result.update({
            "pulled": out.to_json(), "pulled_text": str(out), "ledger": ledger.to_json(),
            "bracket_before": before.to_json(), "bracket_after": after.to_json(),
            "bracket_preserved": preserved,
            "bound_holds": ledger.s_q >= ledger.s_h >= d.y,
        })
        ok = preserved and result["bound_holds"]
        rows = ledger.moves
    else:
        rows = [{"slice": k, "kind": kind, "i": i} for k, (kind, i) in enumerate(t.slices)]
    return result, rows, ok


def cmd_stabilize(args, cfg):
    spec = _spec(args, cfg)
    L = _pick(args.len, cfg.max_len, "len")
    order = _pick(args.order, cfg.order, "order")
    rep = bracket_stabilization(spec, L, order)
    return rep, rep["rows"], rep["verdict"] == "converged"


def _coeffs(args, cfg) -> str:
    c = args.coeffs or cfg.coefficients
    if c not in COEFFICIENTS:
        raise CliError("usage", f"--coeffs must be one of {COEFFICIENTS}")
    return c


def cmd_kh(args, cfg):
    w = _word(args)
    closure = _closure(args, cfg)
    fn = normalized_homology if args.normalized else khovanov_homology
    h = fn(w, closure, _coeffs(args, cfg), args.max_crossings, args.imax)
    result = {"word": w.to_ints(), "n": w.n, "closure": closure.to_json(), **h.to_json()}
    return result, _homology_rows(h), True


def cmd_stabilize_kh(args, cfg):
    spec = _spec(args, cfg)
    L = _pick(args.len, cfg.max_len, "len")
    rep = stabilization_homology_report(spec, _closure(args, cfg), L, args.imax,
                                        _coeffs(args, cfg), max_crossings=args.max_crossings,
                                        threads=args.threads)
    rows = []
    for key, vals in sorted(rep["series"]["braid"].items(),
                            key=lambda kv: tuple(int(t) for t in kv[0].split(","))):
        i, j = key.split(",")
        rows.append({"i": int(i), "j": int(j), **{f"l{k + 1}": v for k, v in enumerate(vals)}})
    return rep, rows, rep["verdict"] == "match"


def cmd_compare_torus(args, cfg):
    rep, _, ok = cmd_stabilize_kh(args, cfg)
    rows = [{"i": r["i"], "j": r["j"],
             "braid_value": r["braid"]["value"], "braid_l_star": r["braid"]["l_star"],
             "torus_value": r["torus"]["value"], "torus_l_star": r["torus"]["l_star"],
             "match": r["match"]} for r in rep["rows"]]
    return rep, rows, ok


COMMANDS = {
    "bracket": cmd_bracket,
    "jw": cmd_jw,
    "diagonals": cmd_diagonals,
    "multicone": cmd_multicone,
    "stabilize": cmd_stabilize,
    "kh": cmd_kh,
    "stabilize-kh": cmd_stabilize_kh,
    "compare-torus": cmd_compare_torus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--seed", type=int, default=None,
                        help="seed for random specs (Python's random.Random, MT19937)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker processes for per-prefix homology; output does not depend on it")
    common.add_argument("--max-crossings", type=int, default=DEFAULT_MAX_CROSSINGS,
                        help="cube size limit: at most 2^k resolution states")
    common.add_argument("--config", default=None, help="JSON experiment config")

    # the shared flags go on each subcommand, after its name
    parser = argparse.ArgumentParser(prog="infbraid", description="Infinite braids, projectors "
                                     "and Khovanov homology stabilization.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    def word_args(p):
        p.add_argument("--n", type=int, help="number of strands")
        p.add_argument("--word", help='signed generator indices, e.g. "1 2 -1"')

    def spec_args(p):
        p.add_argument("--spec", help="JSON file with an infinite braid spec")
        p.add_argument("--n", type=int)
        p.add_argument("--kind", choices=("periodic", "random", "torus"))
        p.add_argument("--base", help="periodic base word")
        p.add_argument("--len", type=int, help="largest prefix length L")

    p = add("bracket", "Kauffman bracket of a braid word")
    word_args(p)
    p.add_argument("--normalized", action="store_true")

    p = add("jw", "Jones-Wenzl projector as truncated power series")
    p.add_argument("--n", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--verify", action="store_true", help="also check the projector axioms")

    p = add("diagonals", "diagonals of a word, or y/z counts of a spec's prefixes")
    spec_args(p)
    p.add_argument("--word", help="a single word instead of a spec")

    p = add("multicone", "multicone term of a right-handed word, optionally simplified")
    word_args(p)
    p.add_argument("--index", type=int)
    p.add_argument("--pull", action="store_true")
    p.add_argument("--schedule", choices=("zones", "zones-strict", "greedy"), default="zones")

    p = add("stabilize", "normalized bracket of prefixes against the projector series")
    spec_args(p)
    p.add_argument("--order", type=int)

    p = add("kh", "Khovanov homology of a braid closure")
    word_args(p)
    p.add_argument("--closure", default=None, help='"trace" or a JSON matched closure')
    p.add_argument("--coeffs", choices=COEFFICIENTS)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--imax", type=int, default=None)

    for name, text in (("stabilize-kh", "per-(i, j) stabilization of normalized homology"),
                       ("compare-torus", "stabilized homology of a braid next to the torus braid")):
        p = add(name, text)
        spec_args(p)
        p.add_argument("--closure", default=None)
        p.add_argument("--coeffs", choices=COEFFICIENTS)
        p.add_argument("--imax", type=int, default=2)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = "json"
    try:
        cfg = ExperimentConfig()
        if args.config:
            with open(args.config) as fh:
                cfg = ExperimentConfig.from_json(json.load(fh))
        fmt = args.format or cfg.format
        result, rows, ok = COMMANDS[args.command](args, cfg)
    except CliError as exc:
        return _fail(exc.kind, str(exc), exc.extra)
    except ResourceLimitError as exc:
        return _fail("resource", str(exc), {})
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _fail("input", str(exc), {})
    print(_render(result, rows, fmt))
    return 0 if ok else 1


def _fail(kind: str, message: str, extra: dict) -> int:
    print(json.dumps({"error": {"type": kind, "message": message, **extra}}, sort_keys=True))
    return 2


if __name__ == "__main__":
    sys.exit(main())
