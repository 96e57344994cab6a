"""Command-line entry point: ``zflow <subcommand> ...``.

Exit codes: 0 answered (including "no certificate"), 1 usage error,
2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import gadgets, harness
from .cutcensus import THEOREMS, enumerate_cuts
from .errors import HypothesisError, InvalidArgument, ParseError, ResourceLimitError
from .flowsolve import (
    count_nz_zk_flows,
    find_beta_orientation,
    find_mod3_orientation,
    find_nz3_flow,
    flow_polynomial,
    z3_connected,
)
from .multigraph import Multigraph

SCHEMA = "zflow/1"

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: error: {message}")


def _read_graph(path: str) -> Multigraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return Multigraph.parse(text)


def _parse_beta(text: str | None, n: int) -> tuple[int, ...]:
    if text is None:
        raise InvalidArgument("--beta is required for this mode")
    try:
        beta = tuple(int(x) % 3 for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise InvalidArgument(f"--beta: {exc}") from None
    if len(beta) != n:
        raise InvalidArgument(f"--beta has {len(beta)} entries, graph has {n} vertices")
    if sum(beta) % 3:
        raise InvalidArgument("--beta is not a Z3-boundary (sum must be 0 mod 3)")
    return beta


def _dump(doc: dict[str, Any]) -> str:
    return json.dumps({"schema": SCHEMA, **doc}, separators=(",", ":"))


def _orientation_lines(arcs) -> list[str]:
    return [f"{e} {t} {h}" for e, t, h in arcs]


def _cmd_census(args) -> list[str]:
    g = _read_graph(args.file)
    census = enumerate_cuts(g, args.max_size)
    if args.json:
        return [_dump(census.to_json())]
    lines = [f"edge_connectivity {census.edge_connectivity}"]
    lines += [f"cuts_of_size {k} {v}" for k, v in sorted(census.counts_by_size.items())]
    lines += [
        f"cut {' '.join(map(str, sorted(c.edges)))} | side {' '.join(map(str, c.witness))}" for c in census.cuts
    ]
    return lines


def _cmd_solve(args) -> list[str]:
    g = _read_graph(args.file)
    mode = args.mode
    if mode == "flowpoly":
        value = flow_polynomial(g, args.k)
        if args.json:
            return [_dump({"mode": mode, "k": args.k, "value": value})]
        return [str(value)]
    if mode == "count":
        value = count_nz_zk_flows(g, args.k)
        if args.json:
            return [_dump({"mode": mode, "k": args.k, "value": value})]
        return [str(value)]
    if mode == "mod3":
        doc = find_mod3_orientation(g).to_json()
    elif mode == "nz3":
        doc = find_nz3_flow(g).to_json()
    elif mode == "beta":
        doc = find_beta_orientation(g, _parse_beta(args.beta, g.n)).to_json()
    else:
        doc = z3_connected(g).to_json()
    if args.json:
        return [_dump({"mode": mode, **doc})]
    lines = [f"exists {str(doc['exists']).lower()}", f"kind {doc['kind']}", f"nodes_searched {doc['nodes_searched']}"]
    if "z3_connected" in doc:
        lines.append(f"z3_connected {str(doc['z3_connected']).lower()}")
        lines.append(f"boundaries_checked {doc['boundaries_checked']}")
    if "counterexample" in doc:
        lines.append("counterexample " + ",".join(map(str, doc["counterexample"])))
    if "orientation" in doc:
        lines += _orientation_lines(doc["orientation"])
    if "flow" in doc:
        lines += [f"{e} {val}" for e, val in doc["flow"]]
    return lines


def _cmd_gadget(args) -> list[str]:
    g = _read_graph(args.file)
    if args.op == "glue-k7":
        glued, copies = gadgets.glue_k7(g)
        doc = {"op": args.op, "graph": glued.serialize(), "copies": [list(c) for c in copies]}
        return [_dump(doc)] if args.json else glued.serialize().splitlines()
    if args.op == "z0-3flow":
        aug = gadgets.z0_augment_3flow(g)
    else:
        beta = _parse_beta(args.beta, g.n) if args.beta is not None else (0,) * g.n
        aug = gadgets.z0_augment_z3(g, beta)
    doc = {"op": args.op, **aug.to_json()}
    if args.sidecar:
        side = {k: v for k, v in doc.items() if k != "graph"}
        Path(args.sidecar).write_text(_dump(side) + "\n")
    return [_dump(doc)] if args.json else aug.graph.serialize().splitlines()


def _cmd_verify(args) -> list[str]:
    if args.graph is not None:
        g = _read_graph(args.graph)
        reports = [harness.verify_theorem(g, args.theorem, args.strategy, reduce=not args.no_reduce, repair=args.repair_gap)]
        summary = None
    else:
        result = harness.run_campaign(
            args.theorem,
            args.count,
            seed=args.seed,
            strategy=args.strategy,
            reduce=not args.no_reduce,
            repair=args.repair_gap,
            workers=args.workers,
            archive_dir=args.archive,
        )
        reports, summary = result.reports, result.summary()
    if args.csv:
        out = _CsvLines()
        writer = csv.writer(out, lineterminator="")
        writer.writerow(list(harness.TheoremReport.CSV_FIELDS) + ["lemma_violations"])
        for r in reports:
            writer.writerow(r.csv_row())
        return out.lines
    if args.json:
        doc: dict[str, Any] = {"reports": [r.to_json(timing=args.timing) for r in reports]}
        if summary is not None:
            doc = {"summary": summary, **doc}
        return [_dump(doc)]
    lines = [f"{r.theorem} {r.graph_hash} n={r.n} m={r.m} verdict={r.verdict}" for r in reports]
    if summary is not None:
        lines += [f"{k} {json.dumps(v)}" for k, v in summary.items()]
    return lines


class _CsvLines:
    def __init__(self):
        self.lines: list[str] = []

    def write(self, s: str):
        self.lines.append(s)


def _cmd_generate(args) -> list[str]:
    lam = args.min_connectivity
    if lam is None:
        lam = harness.MIN_CONNECTIVITY.get(args.theorem, 2) if args.theorem else 2
    spec = harness.GenSpec(args.kind, args.n, args.theorem, lam, args.max_edges, args.seed, args.retries)
    g = harness.generate(spec)
    if args.json:
        return [_dump({"spec": spec.to_json(), "graph": g.serialize()})]
    return g.serialize().splitlines()


def _cmd_controls(args) -> list[str]:
    reports = harness.negative_controls()
    if args.json:
        return [_dump({"controls": [r.to_json() for r in reports]})]
    return [
        f"{r.name} expect_flow={str(r.expect_flow).lower()} exists={str(r.exists).lower()} "
        f"{r.oracle}={r.oracle_count} {'PASS' if r.passed else 'FAIL'}"
        for r in reports
    ]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zflow", description="Nowhere-zero 3-flow, modulo-3 orientation and Z3-connectivity toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("census", help="enumerate small edge-cuts")
    c.add_argument("file", help="graph file in canonical text format, or - for stdin")
    c.add_argument("--max-size", type=int, default=5)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_census)

    s = sub.add_parser("solve", help="search for orientations, flows, or count flows")
    s.add_argument("file")
    s.add_argument("--mode", choices=("mod3", "nz3", "beta", "z3", "flowpoly", "count"), required=True)
    s.add_argument("--beta", help="comma-separated boundary values, one per vertex")
    s.add_argument("--k", type=int, default=3, help="group order for flowpoly and count")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_solve)

    gd = sub.add_parser("gadget", help="apply a graph augmentation")
    gd.add_argument("file")
    gd.add_argument("--op", choices=("glue-k7", "z0-3flow", "z0-z3"), required=True)
    gd.add_argument("--beta", help="boundary for z0-z3 (default all zero)")
    gd.add_argument("--json", action="store_true")
    gd.add_argument("--sidecar", help="write pre-orientation and beta as JSON to this path")
    gd.set_defaults(func=_cmd_gadget)

    v = sub.add_parser("verify", help="check a theorem on one graph or a generated campaign")
    v.add_argument("--theorem", choices=THEOREMS, required=True)
    v.add_argument("--count", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--strategy", choices=harness.STRATEGIES, default="both")
    fmt = v.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    v.add_argument("--graph", help="verify this graph instead of generating instances")
    v.add_argument("--archive", help="directory to store generated instances")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--no-reduce", action="store_true", help="skip cut-splitting and contraction reductions")
    v.add_argument("--repair-gap", action="store_true", help="use the anchored augmentation when |P'|=|Q'|=1")
    v.add_argument("--timing", action="store_true", help="include wall time in JSON reports")
    v.set_defaults(func=_cmd_verify)

    gn = sub.add_parser("generate", help="draw a random instance")
    gn.add_argument("--kind", choices=harness.KINDS, default="uniform")
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--theorem", choices=THEOREMS)
    gn.add_argument("--min-connectivity", type=int)
    gn.add_argument("--max-edges", type=int, default=30)
    gn.add_argument("--retries", type=int, default=2000)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--json", action="store_true")
    gn.set_defaults(func=_cmd_generate)

    ct = sub.add_parser("controls", help="run the negative control suite")
    ct.add_argument("--json", action="store_true")
    ct.set_defaults(func=_cmd_controls)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        lines = args.func(args)
    except ResourceLimitError as exc:
        print(f"zflow: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except harness.GenerationFailure as exc:
        print(f"zflow: generation failed: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ParseError, InvalidArgument, HypothesisError, OSError, UnicodeDecodeError) as exc:
        print(f"zflow: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for line in lines:
        print(line)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
