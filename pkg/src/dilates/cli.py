"""Command-line entry point: ``python -m dilates`` or ``dilates``.

Exit codes: 0 success, 1 a verifier reported a violation (always a bug, since
every checked statement is a theorem), 2 usage or input error, 3 resource cap
exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import compression, constructions, oracles, search
from .core import (
    DEFAULT_CAP,
    PointSet,
    dilate_sum,
    minkowski,
    read_set,
    serialize_set,
)
from .errors import CapExceeded, CoordinateOverflow, DilatesError

LEDGER_ENV = "DILATES_LEDGER"

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _index_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--out", default=dflt(None), help="output path (search: ledger to append to)")
    p.add_argument("--format", choices=["text", "jsonl", "csv"], default=dflt("text"))
    p.add_argument("--seed", type=int, default=dflt(0))
    p.add_argument("--workers", type=int, default=dflt(1))
    p.add_argument("--cap", type=int, default=dflt(None),
                   help=f"max pairs per sumset (default {DEFAULT_CAP})")
    p.add_argument("--config", default=dflt(None), help="key=value file (t0, cooling, t_min, budget, cap)")
    p.add_argument("--timing", action="store_true", default=dflt(False),
                   help="include wall time in search records")
    return p


def build_parser() -> argparse.ArgumentParser:
    leaf = [_global_flags(suppress=True)]
    parser = argparse.ArgumentParser(prog="dilates", parents=[_global_flags(suppress=False)],
                                     description="Sums of dilates A + lambda*A for transcendental lambda.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sumset", parents=leaf, help="Minkowski sum of two .pts files")
    p.add_argument("A")
    p.add_argument("B")
    for name, helptext in [("dilate", "A + phi(A)"), ("compress", "full compression"),
                           ("reduce", "compression plus dimension reduction")]:
        p = sub.add_parser(name, parents=leaf, help=helptext)
        p.add_argument("A")

    ver = sub.add_parser("verify", help="exact verifiers").add_subparsers(dest="check", required=True)
    for name, args in [("discbm", ["A", "B"]), ("hdsums", ["A", "B"]),
                       ("triangle", ["X", "Y", "Z"]), ("prchain", ["A"]), ("trace", ["A"])]:
        p = ver.add_parser(name, parents=leaf)
        for a in args:
            p.add_argument(a)
    p = ver.add_parser("projbound", parents=leaf)
    p.add_argument("A")
    p.add_argument("--index", type=_index_list, default=None, help="e.g. 1,2 (default: all)")
    p = ver.add_parser("injection", parents=leaf)
    p.add_argument("A")
    p.add_argument("--j1", type=_index_list, required=True)
    p.add_argument("--j2", type=_index_list, required=True)
    p = ver.add_parser("alphacount", parents=leaf)
    p.add_argument("m", type=int)

    con = sub.add_parser("construct", help="generators").add_subparsers(dest="family", required=True)
    p = con.add_parser("grid", parents=leaf)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = con.add_parser("ap", parents=leaf)
    p.add_argument("--n", type=int, required=True)
    p = con.add_parser("ideal", parents=leaf)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    sea = sub.add_parser("search", help="extremal search").add_subparsers(dest="mode", required=True)
    p = sea.add_parser("exact", parents=leaf)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dmax", type=int, default=search.ENUM_MAX_D)
    p.add_argument("--witness", help="write the witness set here")
    p = sea.add_parser("local", parents=leaf)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--init", help=".pts file with a downward-closed start set")
    p.add_argument("--witness", help="write the witness set here")
    p = sea.add_parser("table", parents=leaf)
    p.add_argument("--n-list", type=_index_list, required=True)
    p.add_argument("--c", type=float, default=0.1)
    p.add_argument("--cprime", type=float, default=search.DEFAULT_CPRIME)
    p.add_argument("--dmax", type=int, default=search.ENUM_MAX_D)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--ledger-in", help="reuse records from this ledger")

    p = sub.add_parser("bound", parents=leaf, help="exp(c sqrt(ln n)) * n")
    p.add_argument("n", type=int)
    p.add_argument("c", type=float)
    return parser


# -- output helpers -----------------------------------------------------------------

class _Sink:
    def __init__(self, path, stdout):
        self.path, self.stdout, self.buf = path, stdout, io.StringIO()

    def write(self, text: str) -> None:
        self.buf.write(text)

    def close(self) -> None:
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(self.buf.getvalue())
        else:
            self.stdout.write(self.buf.getvalue())


def _emit_set(A: PointSet, fmt: str, sink) -> None:
    if fmt == "jsonl":
        sink.write(json.dumps({"size": len(A), "dim": A.dim,
                               "points": [list(p) for p in A.tuples()]}) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(A.tuples())
        sink.write(buf.getvalue())
    else:
        sink.write(serialize_set(A))


def _flatten(reports):
    for r in reports:
        yield r
        yield from _flatten(r.steps)


def _emit_reports(reports, fmt: str, sink) -> None:
    if fmt == "jsonl":
        for r in _flatten(reports):
            d = r.to_dict()
            d.pop("steps", None)
            sink.write(json.dumps(d) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["claim", "passed", "lhs", "relation", "rhs", "slack", "exact", "review"])
        for r in _flatten(reports):
            d = r.to_dict()
            w.writerow([d["claim"], d["passed"], d["lhs"], d["relation"], d["rhs"], d["slack"],
                        d["exact"], d["review"]])
        sink.write(buf.getvalue())
    else:
        for r in reports:
            sink.write(r.to_text() + "\n")


def _load_cfg(args) -> dict:
    return search.load_config(args.config) if args.config else {}


def _cap(args, cfg) -> int | None:
    if args.cap is not None:
        return args.cap
    return int(cfg.get("cap", DEFAULT_CAP))


# -- command handlers ----------------------------------------------------------------

def _run_verify(args, cap, sink, stderr) -> int:
    c = args.check
    if c == "discbm":
        reports = [oracles.check_discbm(read_set(args.A), read_set(args.B), cap=cap)]
    elif c == "hdsums":
        reports = [oracles.check_hdsums(read_set(args.A), read_set(args.B), cap=cap)]
    elif c == "triangle":
        reports = [oracles.check_ruzsa_triangle(read_set(args.X), read_set(args.Y),
                                                read_set(args.Z), cap=cap)]
    elif c == "prchain":
        reports = [oracles.check_pr_chain(read_set(args.A), cap=cap)]
    elif c == "projbound":
        reports = [oracles.check_projection_bound(read_set(args.A), args.index, cap=cap)]
    elif c == "injection":
        reports = [oracles.check_injection_claim(read_set(args.A), args.j1, args.j2, cap=cap)]
    elif c == "alphacount":
        reports = [oracles.count_by_alpha(args.m)[1]]
    else:
        reports = oracles.theorem_trace(read_set(args.A), cap=cap)
    _emit_reports(reports, args.format, sink)
    if not all(r.passed for r in reports):
        print("error: verifier reported a violation; the checked statements are theorems, "
              "so this signals an implementation bug", file=stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _run_search(args, cfg, stdout) -> int:
    schedule = search.AnnealSchedule.from_config(cfg)
    budget = args.budget if getattr(args, "budget", None) is not None else int(cfg.get("budget", 2000))
    if args.mode == "table":
        records = search.read_ledger(args.ledger_in) if args.ledger_in else []
        rows = search.bounds_table(args.n_list, args.c, args.cprime, records=records,
                                   d_max=args.dmax, budget=budget, seed=args.seed,
                                   schedule=schedule)
        sink = _Sink(args.out, stdout)
        if args.format == "jsonl":
            for r in rows:
                sink.write(json.dumps(r) + "\n")
        else:
            sink.write(search.table_to_csv(rows))
        sink.close()
        return EXIT_OK
    if args.mode == "exact":
        rec = search.exact_min(args.n, args.dmax, max_d=max(args.dmax, search.ENUM_MAX_D))
    else:
        init = read_set(args.init) if args.init else None
        rec = search.local_search(args.n, args.d, budget=budget, seed=args.seed,
                                  schedule=schedule, init=init, workers=args.workers)
    line = rec.to_json(timing=args.timing)
    ledger = args.out or os.environ.get(LEDGER_ENV)
    if ledger:
        search.append_record(ledger, rec, timing=args.timing)
    if args.format == "jsonl" or not ledger:
        stdout.write(line + "\n")
    else:
        stdout.write(f"n={rec.n} best={rec.best_value} d={rec.d} method={rec.method} "
                     f"proven_optimal={rec.proven_optimal} -> {ledger}\n")
    if args.witness:
        with open(args.witness, "w", encoding="utf-8") as fh:
            fh.write(serialize_set(rec.witness))
    return EXIT_OK


def _dispatch(args, stdout, stderr) -> int:
    cfg = _load_cfg(args)
    cap = _cap(args, cfg)
    cmd = args.command
    if cmd == "search":
        return _run_search(args, cfg, stdout)
    sink = _Sink(args.out, stdout)
    code = EXIT_OK
    if cmd == "sumset":
        _emit_set(minkowski(read_set(args.A), read_set(args.B), cap=cap), args.format, sink)
    elif cmd == "dilate":
        _emit_set(dilate_sum(read_set(args.A), cap=cap), args.format, sink)
    elif cmd == "compress":
        _emit_set(compression.compress_full(read_set(args.A)), args.format, sink)
    elif cmd == "reduce":
        _emit_set(compression.reduce_dim(read_set(args.A)), args.format, sink)
    elif cmd == "verify":
        code = _run_verify(args, cap, sink, stderr)
    elif cmd == "construct":
        if args.family == "grid":
            A = constructions.kl_grid(args.n, args.m)
        elif args.family == "ap":
            A = constructions.ap(args.n)
        else:
            A = constructions.random_ideal(args.n, args.d, args.seed)
        _emit_set(A, args.format, sink)
    elif cmd == "bound":
        v = oracles.lower_bound_value(args.n, args.c)
        if args.format == "jsonl":
            sink.write(json.dumps({"n": args.n, "c": args.c, "value": v, "exact": False}) + "\n")
        else:
            sink.write(f"{v!r}\n")
    sink.close()
    return code


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return _dispatch(args, stdout, stderr)
    except (CapExceeded, CoordinateOverflow) as e:
        print(f"error: resource cap exceeded: {e}", file=stderr)
        return EXIT_CAP
    except (DilatesError, ValueError, OSError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
