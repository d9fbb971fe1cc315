"""Command-line front end: ``clstrata <command> [options]``."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from . import __version__
from .catalog import catalog, load_entry
from .cl_structures import DEFAULT_GENERATORS, classify, parse_generators
from .export import dumps, ribbon_to_dataframe, ribbon_to_dot, ribbon_to_json
from .multigraph import (
    GraphError,
    Multigraph,
    bridges,
    cycle_rank,
    cyclic_part,
    enumerate_cubic_q4,
    enumerate_multigraphs,
    subset_edges,
    two_connected_components,
)
from .parse import ParseError, format_graph, format_ribbon, read_ribbon, write_graph
from .realizability import ConstructionError, KnownBadCatalog, decide, screen_loop_deg3, screen_odd_q
from .ribbon import RibbonError, RibbonStructure
from .verify import FULL_MAX_EDGES, FULL_SWEEP_EDGES, rows_to_dataframe, run_acceptance

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

EXPORT_FORMATS = ("dot", "json")


def _load(path: str) -> RibbonStructure:
    """Read a ribbon file; a bare graph file gets the sorted-dart rotation and no twists."""
    return read_ribbon(path, require_rotation=False)


def _emit(text: str, output: Optional[str] = None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)
        logger.info(f"Wrote {output}")


def _analysis(g: Multigraph) -> dict:
    part = cyclic_part(g) if g.is_connected else None
    screens = {}
    if part is not None:
        for name, screen in (("odd_q", screen_odd_q), ("loop_at_degree_3", screen_loop_deg3)):
            screens[name] = screen(g) is not None
    return {
        "n": g.n,
        "m": g.m,
        "q": cycle_rank(g) if g.is_connected else None,
        "connected": g.is_connected,
        "bridges": subset_edges(bridges(g)),
        "two_connected_components": [subset_edges(c) for c in two_connected_components(g)],
        "cyclic_part": None if part is None else {
            "n": part.graph.n,
            "m": part.graph.m,
            "edges": [list(edge) for edge in part.graph.edges],
            "edge_origin": [list(path) for path in part.edge_origin],
        },
        "screens": screens,
    }


def cmd_analyze(args: argparse.Namespace) -> int:
    report = _analysis(_load(args.graph).graph)
    if args.json:
        _emit(dumps(report))
        return EXIT_OK
    summary = pd.DataFrame(
        [
            ("n", report["n"]),
            ("m", report["m"]),
            ("q(G)=m(G)-n(G)+1", report["q"]),
            ("bridges", len(report["bridges"])),
            ("2-connected components", len(report["two_connected_components"])),
        ],
        columns=["quantity", "value"],
    )
    lines = [summary.to_string(index=False)]
    lines.append(f"bridge edges: {report['bridges']}")
    for i, component in enumerate(report["two_connected_components"]):
        lines.append(f"component {i}: edges {component}")
    part = report["cyclic_part"]
    if part is None:
        lines.append("cyclic part: graph is not connected")
    elif part["m"] == 0:
        lines.append("cyclic part: single vertex")
    else:
        lines.append(f"cyclic part: n={part['n']} m={part['m']} edges={part['edges']}")
    for name, hit in report["screens"].items():
        lines.append(f"screen {name}: {'not orientably realizable' if hit else 'passes'}")
    _emit("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.vertices is None and args.edges is None:
        graphs = enumerate_cubic_q4()
    elif args.vertices is None or args.edges is None:
        raise ValueError("--vertices and --edges must be given together")
    else:
        graphs = enumerate_multigraphs(args.vertices, args.edges, loops=not args.no_loops,
                                       min_degree=args.min_degree)
    logger.info(f"Enumerated {len(graphs)} graphs")
    if args.output_dir is not None:
        directory = Path(args.output_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for i, g in enumerate(graphs):
            write_graph(g, directory / f"graph-{i:03d}.graph")
    if args.json:
        _emit(dumps({"count": len(graphs), "graphs": [[list(edge) for edge in g.edges] for g in graphs]}))
    else:
        _emit("".join(f"# graph {i}\n{format_graph(g)}" for i, g in enumerate(graphs)))
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    r = _load(args.graph)
    report = classify(r.graph, r.rotation, parse_generators(args.generators), name=Path(args.graph).stem)
    if args.json:
        _emit(dumps(report.to_dict(include_non_orientable=args.non_orientable)))
        return EXIT_OK
    lines = [
        f"{report.graph}: n={report.n} m={report.m} q={report.q}",
        f"strips: {report.raw_strips} ({report.orientable_raw} orientable)",
        f"classes under {','.join(report.generators) or 'none'}: "
        f"{len(report.orientable_classes)} orientable, {len(report.non_orientable_classes)} non-orientable",
    ]
    if report.classes:
        lines.append(report.to_dataframe().to_string(index=False))
    _emit("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_realizable(args: argparse.Namespace) -> int:
    g = _load(args.graph).graph
    known_bad = KnownBadCatalog(args.known_bad) if args.known_bad else None
    report = decide(g, known_bad=known_bad, use_oracle=not args.no_oracle)
    if args.json:
        _emit(dumps(report.to_dict()))
        return EXIT_OK
    lines = [f"verdict: {report.verdict} ({report.criterion})"]
    lines.extend(f"  {note}" for note in report.details)
    if report.witness is not None:
        lines.append("witness:")
        lines.append(format_ribbon(report.witness).rstrip("\n"))
    _emit("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.action == "list":
        entries = catalog()
        if args.json:
            _emit(dumps({name: {"tags": sorted(e.tags), "description": e.description,
                                "n": e.graph.n, "m": e.graph.m} for name, e in entries.items()}))
        else:
            frame = pd.DataFrame(
                [(name, e.graph.n, e.graph.m, ",".join(sorted(e.tags)), e.description) for name, e in entries.items()],
                columns=["name", "n", "m", "tags", "description"],
            )
            _emit(frame.to_string(index=False) + "\n")
        return EXIT_OK
    if args.name is None:
        raise ValueError("catalog write needs an entry name")
    try:
        entry = load_entry(args.name)
    except KeyError:
        raise ValueError(f"Unknown catalog entry {args.name!r}")
    _emit(format_ribbon(entry.structure), args.output)
    return EXIT_OK


def cmd_verify_paper(args: argparse.Namespace) -> int:
    if args.full:
        max_edges, sweep_edges = FULL_MAX_EDGES, FULL_SWEEP_EDGES
    else:
        max_edges, sweep_edges = args.max_edges, None
    rows = run_acceptance(max_edges=max_edges, seed=args.seed, samples=args.samples, sweep_edges=sweep_edges)
    frame = rows_to_dataframe(rows)
    if args.json:
        _emit(dumps({"rows": json.loads(frame.to_json(orient="records")), "passed": bool(frame["passed"].all())}))
    else:
        _emit(frame[["status", "criterion", "expected", "computed"]].to_string(index=False) + "\n")
    failed = int((~frame["passed"]).sum())
    if failed:
        logger.warning(f"{failed} of {len(frame)} acceptance rows failed")
        return EXIT_FAILED
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    r = read_ribbon(args.ribbon)
    if args.format == "dot":
        text = ribbon_to_dot(r, name=Path(args.ribbon).stem)
    elif args.format == "json":
        text = dumps(ribbon_to_json(r))
    else:
        raise ValueError(f"Unknown export format {args.format!r}; expected one of {', '.join(EXPORT_FORMATS)}")
    if args.verbose:
        logger.debug("\n" + ribbon_to_dataframe(r).to_string(index=False))
    _emit(text, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clstrata", description="Cut-locus structures as ribbon structures on graphs")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    p = commands.add_parser("analyze", help="report n, m, q, bridges and the cyclic part of a graph")
    p.add_argument("graph", help="graph or ribbon file")
    p.set_defaults(func=cmd_analyze)

    p = commands.add_parser("enumerate", help="list graphs up to isomorphism (default: the cubic q=4 census)")
    p.add_argument("--vertices", type=int, default=None, help="number of vertices")
    p.add_argument("--edges", type=int, default=None, help="number of edges")
    p.add_argument("--no-loops", action="store_true", help="exclude loops")
    p.add_argument("--min-degree", type=int, default=1, help="minimum vertex degree")
    p.add_argument("--output-dir", default=None, help="also write one graph file per result here")
    p.set_defaults(func=cmd_enumerate)

    p = commands.add_parser("classify", help="classify the strips over the file's rotation")
    p.add_argument("graph", help="graph or ribbon file")
    p.add_argument("--generators", default=",".join(DEFAULT_GENERATORS),
                   help="comma-separated subset of flips,auto,complement")
    p.add_argument("--non-orientable", action="store_true",
                   help="also list non-orientable classes in the JSON report")
    p.set_defaults(func=cmd_classify)

    p = commands.add_parser("realizable", help="decide orientable realizability")
    p.add_argument("graph", help="graph or ribbon file")
    p.add_argument("--known-bad", default=None, metavar="DIR", help="directory of known non-realizable graph files")
    p.add_argument("--no-oracle", action="store_true", help="use screens and constructors only")
    p.set_defaults(func=cmd_realizable)

    p = commands.add_parser("catalog", help="list or write the shipped structures")
    p.add_argument("action", choices=("list", "write"))
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    p.set_defaults(func=cmd_catalog)

    p = commands.add_parser("verify-paper", help="run the acceptance checks and print a PASS/FAIL table")
    p.add_argument("--max-edges", type=int, default=6, help="edge bound for exhaustive sweeps")
    p.add_argument("--full", action="store_true",
                   help=f"sweep up to {FULL_MAX_EDGES} edges with the oracle and {FULL_SWEEP_EDGES} for structures")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized constructor checks")
    p.add_argument("--samples", type=int, default=200, help="random constructor inputs per constructor")
    p.set_defaults(func=cmd_verify_paper)

    p = commands.add_parser("export", help="write a ribbon file as DOT or JSON")
    p.add_argument("ribbon", help="ribbon file")
    p.add_argument("--format", default="dot", help="dot or json")
    p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    p.set_defaults(func=cmd_export)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except (ParseError, GraphError, RibbonError, ConstructionError, OSError, ValueError) as exc:
        logger.debug("Command failed", exc_info=True)
        print(f"clstrata: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
