"""Command-line front end.

Exit status: 0 success, 1 counterexample or violation found, 2 usage or input error.
The CLI is the only place that starts worker processes; machine-readable output
is byte-identical for identical arguments unless ``--timings`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from ._config import CapacityError
from .cospectral import (
    DEFAULT_BUDGET,
    CensusError,
    CensusStore,
    classify_shard,
    census_bytes,
    census_path,
    determination_status,
    mates_report,
    merge_censuses,
    _check_budget,
)
from .enumeration import GraphFilter, WorkPartition, enumerate_graphs
from .graph import Graph
from .graph6 import Graph6Error, decode_graph6, encode_graph6
from .invariants import to_csv, to_jsonl, summarize_poly
from .linalg import KINDS, graph_char_poly
from .suites import SUITE_NAMES, run_suites
from .theorems import THEOREM_IDS, HypothesisError, run_theorem

THREADS_ENV = "QSPECTRA_THREADS"
CACHE_ENV = "QSPECTRA_CACHE_DIR"
SPECTRUM_SCHEMA = "qspectra.spectrum/1"
CENSUS_SCHEMA = "qspectra.census-summary/1"
LEMMAS_SCHEMA = "qspectra.lemmas/1"
STATUS_SCHEMA = "qspectra.status/1"

EXIT_OK, EXIT_FOUND, EXIT_ERROR = 0, 1, 2


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        return max(1, int(raw))
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def default_cache_dir() -> Path:
    raw = os.environ.get(CACHE_ENV)
    return Path(raw) if raw else Path.home() / ".cache" / "qspectra"


class ParallelBuilder:
    """Census builder that fans shards out over worker processes."""

    def __init__(self, threads: int, shards: int | None = None, allow_large: bool = False):
        self.threads = threads
        self.shards = shards or threads
        self.allow_large = allow_large

    def __call__(self, n: int, kinds: Sequence[str]) -> dict:
        _check_budget(n, self.allow_large)
        parts = WorkPartition.all_shards(self.shards)
        if self.threads == 1 or self.shards == 1:
            results = [classify_shard(n, kinds, p) for p in parts]
        else:
            with ProcessPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(classify_shard, [n] * len(parts), [tuple(kinds)] * len(parts), parts))
        return {k: merge_censuses([r[k] for r in results]) for k in kinds}


def _store(args) -> CensusStore:
    cache = None if args.no_cache else (args.cache_dir or default_cache_dir())
    builder = ParallelBuilder(args.threads, getattr(args, "shards", None), args.allow_large)
    return CensusStore(cache, allow_large=args.allow_large, builder=builder)


def _read_graphs(items: Sequence[str]) -> list[Graph]:
    if not items or items == ["-"]:
        items = [line.strip() for line in sys.stdin if line.strip()]
    return [decode_graph6(s) for s in items]


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- subcommands ---------------------------------------------------------------

def cmd_spectrum(args, out) -> int:
    records = []
    for g in _read_graphs(args.graph6):
        p = graph_char_poly(g, args.kind)
        s = summarize_poly(p, args.kind, args.tol)
        digits = max(0, -int(f"{args.tol:e}".split("e")[1]))
        records.append({
            "schema": SPECTRUM_SCHEMA,
            "graph6": encode_graph6(g),
            "kind": args.kind,
            "char_poly": p.serialize(),
            "det": s.det,
            "moments": list(s.moments),
            "edges": s.edge_count,
            "zero_multiplicity": s.zero_mult,
            "pseudo_det": s.pseudo_det,
            "largest_root": round(s.largest_root, digits),
            "regular": s.regular_from_spectrum,
        })
    if args.format == "json":
        out.write("".join(_dump(r) + "\n" for r in records))
    elif args.format == "csv":
        cols = ("graph6", "kind", "char_poly", "det", "moments", "edges",
                "zero_multiplicity", "pseudo_det", "largest_root", "regular")
        out.write(_csv(cols, ([r[c] if c != "moments" else " ".join(map(str, r[c])) for c in cols]
                              for r in records)))
    else:
        for r in records:
            out.write(f"{r['graph6']}  {r['kind']}-spectrum\n"
                      f"  char_poly (constant first): {r['char_poly']}\n"
                      f"  det: {r['det']}\n"
                      f"  moments T0..T3: {r['moments']}\n"
                      f"  edges: {r['edges']}  zero multiplicity: {r['zero_multiplicity']}  "
                      f"pseudo-det: {r['pseudo_det']}\n"
                      f"  largest root: {r['largest_root']}  regular: {r['regular']}\n")
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    filt = GraphFilter(args.filter, args.min_edges, args.max_edges)
    part = WorkPartition(args.shard_index, args.shard_count)
    count = 0
    for g in enumerate_graphs(args.n, filt, part):
        if not args.count:
            out.write(encode_graph6(g) + "\n")
        count += 1
    if args.count:
        out.write(f"{count}\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    kinds = args.kind
    started = time.perf_counter()
    store = _store(args)
    censuses = store.get_many(args.n, kinds)
    elapsed = time.perf_counter() - started
    rows = []
    for kind in kinds:
        c = censuses[kind]
        if args.output:
            path = Path(args.output)
            if len(kinds) > 1:
                path = census_path(path, args.n, kind)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(census_bytes(c))
        elif store.cache_dir:
            path = census_path(store.cache_dir, args.n, kind)
        else:
            path = None
        rows.append({
            "schema": CENSUS_SCHEMA,
            "n": c.n,
            "kind": kind,
            "graph_count": c.graph_count,
            "class_count": c.class_count,
            "cospectral_graphs": sum(len(v) for v in c.cospectral_classes()),
            "histogram": {str(k): v for k, v in c.histogram().items()},
            "path": str(path) if path else None,
        })
    if args.timings:
        for r in rows:
            r["runtime_seconds"] = round(elapsed, 3)
    if args.format == "json":
        out.write("".join(_dump(r) + "\n" for r in rows))
    elif args.format == "csv":
        out.write(_csv(("n", "kind", "class_size", "classes"),
                       ((r["n"], r["kind"], size, cnt) for r in rows for size, cnt in r["histogram"].items())))
    else:
        for r in rows:
            out.write(f"order {r['n']} {r['kind']}-census: {r['graph_count']} graphs, "
                      f"{r['class_count']} classes, {r['cospectral_graphs']} graphs with a mate\n")
            out.write("  class size   classes\n")
            for size, cnt in r["histogram"].items():
                out.write(f"  {size:>10} {cnt:>9}\n")
            if r["path"]:
                out.write(f"  saved: {r['path']}\n")
        if args.timings:
            out.write(f"  elapsed: {elapsed:.2f} s\n")
    return EXIT_OK


def cmd_mates(args, out) -> int:
    store = _store(args)
    reports = [mates_report(g, args.kind, store.get(g.n, args.kind)) for g in _read_graphs(args.graph6)]
    if args.format == "json":
        out.write("".join(_dump(r) + "\n" for r in reports))
    elif args.format == "csv":
        out.write(_csv(("graph6", "kind", "mate"), ((r["graph6"], r["kind"], m) for r in reports for m in r["mates"])))
    else:
        for r in reports:
            verdict = "determined" if not r["mates"] else f"{len(r['mates'])} mate(s)"
            out.write(f"{r['graph6']}  {r['kind']}-spectrum: {verdict}\n")
            for m in r["mates"]:
                out.write(f"  {m}\n")
    return EXIT_OK


def cmd_status(args, out) -> int:
    store = _store(args)
    records = []
    for g in _read_graphs(args.graph6):
        st = determination_status(g, store)
        records.append({"schema": STATUS_SCHEMA, "graph6": encode_graph6(g), **st.to_dict()})
    if args.format == "json":
        out.write("".join(_dump(r) + "\n" for r in records))
    elif args.format == "csv":
        out.write(_csv(("graph6", "das", "dls", "dqs"), ((r["graph6"], r["das"], r["dls"], r["dqs"]) for r in records)))
    else:
        for r in records:
            out.write(f"{r['graph6']}  DAS={r['das']} DLS={r['dls']} DQS={r['dqs']}\n")
    return EXIT_OK


def cmd_lemmas(args, out) -> int:
    store = _store(args)
    started = time.perf_counter()
    results = run_suites(args.n, store, args.suite or SUITE_NAMES, seed=args.seed, samples=args.samples)
    elapsed = time.perf_counter() - started
    findings = [f for r in results for f in r.findings]
    violations = [v for r in results for v in r.violations]
    if args.findings:
        Path(args.findings).write_text(to_jsonl(findings))
    if args.format == "json":
        doc = {
            "schema": LEMMAS_SCHEMA,
            "max_order": args.n,
            "seed": args.seed,
            "suites": [r.summary() for r in results],
            "violations": [v.to_dict() for v in violations],
            "findings": [f.to_dict() for f in findings],
        }
        if args.timings:
            doc["runtime_seconds"] = round(elapsed, 3)
        out.write(json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n")
    elif args.format == "csv":
        out.write(to_csv(violations + findings))
    else:
        for r in results:
            s = r.summary()
            tag = "ok" if r.ok else "VIOLATED"
            out.write(f"{s['suite']:<10} order<={s['max_order']:<3} checked={s['checked']:<7} "
                      f"violations={s['violations']} findings={s['findings']}  {tag}\n")
        for v in violations:
            out.write(f"  VIOLATION {v.lemma} {v.graph6} lhs={v.lhs} rhs={v.rhs}\n")
        for f in findings[: args.show]:
            out.write(f"  FINDING {f.lemma} {f.graph6} det={f.lhs} {_dump(f.details)}\n")
        if len(findings) > args.show:
            out.write(f"  ... {len(findings) - args.show} more findings\n")
        if args.timings:
            out.write(f"elapsed: {elapsed:.2f} s\n")
    return EXIT_FOUND if violations else EXIT_OK


def cmd_verify(args, out) -> int:
    report = run_theorem(args.theorem, args.budget, _store(args), force_s=args.force_s)
    if args.format == "json":
        out.write(report.to_json(args.timings) + "\n")
    elif args.format == "csv":
        out.write(_csv(("theorem", "base", "r", "s", "union", "mates"),
                       ((args.theorem, c["base"], c["r"], c["s"], c["union"], " ".join(c["mates"]))
                        for c in report.counterexamples)))
    else:
        out.write(report.to_text() + "\n")
        if args.timings:
            out.write(f"elapsed: {report.runtime_seconds:.2f} s\n")
    # exploratory probes report outcomes without asserting them
    return EXIT_FOUND if report.counterexamples and not report.exploratory else EXIT_OK


# -- parser ------------------------------------------------------------------------

def _kinds(text: str) -> list[str]:
    kinds = [k.strip().upper() for k in text.split(",") if k.strip()]
    bad = [k for k in kinds if k not in KINDS]
    if bad or not kinds:
        raise argparse.ArgumentTypeError(f"kinds must be drawn from {','.join(KINDS)}")
    return kinds


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("--threads", type=_positive, default=None,
                        help=f"worker processes (default: ${THREADS_ENV} or available CPUs)")
    common.add_argument("--cache-dir", type=Path, default=None,
                        help=f"census cache (default: ${CACHE_ENV} or ~/.cache/qspectra)")
    common.add_argument("--no-cache", action="store_true", help="build censuses in memory only")
    common.add_argument("--allow-large", action="store_true", help="permit order-10 censuses")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings to the output")

    p = argparse.ArgumentParser(prog="qspectra", description="Exact graph spectra, cospectral censuses and "
                                "exhaustive spectral-characterisation checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    sp = sub.add_parser("spectrum", parents=[common], help="characteristic polynomial and spectral summary")
    sp.add_argument("graph6", nargs="*", help="graph6 strings ('-' or none: read stdin)")
    sp.add_argument("--kind", choices=KINDS, default="Q")
    sp.add_argument("--tol", type=float, default=1e-9, help="largest-root tolerance")
    sp.set_defaults(func=cmd_spectrum, fmt="text")

    sp = sub.add_parser("enumerate", parents=[common], help="stream all graphs of order n as graph6")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--filter", choices=GraphFilter.KINDS, default="all")
    sp.add_argument("--min-edges", type=int)
    sp.add_argument("--max-edges", type=int)
    sp.add_argument("--shard-index", type=int, default=0)
    sp.add_argument("--shard-count", type=_positive, default=1)
    sp.add_argument("--count", action="store_true", help="print only the number of graphs")
    sp.set_defaults(func=cmd_enumerate, fmt="text")

    sp = sub.add_parser("classify", parents=[common], help="build and persist a cospectral census")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--kind", type=_kinds, default=["Q"], help="A, L, Q or a comma list")
    sp.add_argument("--shards", type=_positive, default=None, help="work shards (default: one per thread)")
    sp.add_argument("-o", "--output", help="write the census here instead of only the cache")
    sp.set_defaults(func=cmd_classify, fmt="text")

    sp = sub.add_parser("mates", parents=[common], help="graphs sharing the spectrum of a graph")
    sp.add_argument("graph6", nargs="*")
    sp.add_argument("--kind", choices=KINDS, default="Q")
    sp.set_defaults(func=cmd_mates, fmt="text")

    sp = sub.add_parser("status", parents=[common], help="DAS / DLS / DQS flags of a graph")
    sp.add_argument("graph6", nargs="*")
    sp.set_defaults(func=cmd_status, fmt="text")

    sp = sub.add_parser("lemmas", parents=[common], help="run the structural identity suites")
    sp.add_argument("-n", type=int, required=True, help="largest order to sweep")
    sp.add_argument("--suite", action="append", choices=SUITE_NAMES)
    sp.add_argument("--seed", type=int, default=0, help="seed for the random union-identity samples")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--findings", help="write FINDING records here as JSON lines")
    sp.add_argument("--show", type=int, default=10, help="findings to list in text output")
    sp.set_defaults(func=cmd_lemmas, fmt="text")

    sp = sub.add_parser("verify", parents=[common], help="exhaustively check a union theorem")
    sp.add_argument("theorem", choices=THEOREM_IDS)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest total order")
    sp.add_argument("--force-s", type=int, default=None, help="only instances with this s")
    sp.set_defaults(func=cmd_verify, fmt="json")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.format = args.format or args.fmt
    if args.threads is None:
        args.threads = default_threads()
    try:
        return args.func(args, out)
    except (Graph6Error, CapacityError, CensusError, HypothesisError, ValueError, LookupError) as exc:
        print(f"qspectra: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
