"""Functions for reading and writing graph and ribbon text files."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .multigraph import GraphError, Multigraph, bitstring, new_graph, parse_bitstring
from .ribbon import RibbonError, RibbonStructure, new_ribbon

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class ParseError(ValueError):
    """Raised for malformed input files; `line` is 1-based (0 when unknown)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            lines.append((number, stripped))
    return lines


def _ints(line: str, number: int, count: Optional[int] = None) -> List[int]:
    try:
        values = [int(token) for token in line.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {line!r}", number)
    if count is not None and len(values) != count:
        raise ParseError(f"expected {count} integers, got {len(values)}", number)
    return values


def _parse_graph_block(lines: List[Tuple[int, str]]) -> Tuple[Multigraph, int]:
    if not lines:
        raise ParseError("empty input: expected a header line 'n m'")
    number, header = lines[0]
    n, m = _ints(header, number, 2)
    if n < 1 or m < 0:
        raise ParseError(f"invalid header n={n} m={m}", number)
    if len(lines) < 1 + m:
        last = lines[-1][0]
        raise ParseError(f"expected {m} edge lines, found {len(lines) - 1}", last)
    endpoints = []
    for number, line in lines[1:1 + m]:
        u, v = _ints(line, number, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}", number)
        endpoints.append((u, v))
    try:
        g = new_graph(n, endpoints)
    except GraphError as exc:
        raise ParseError(str(exc), number)
    return g, 1 + m


def parse_graph(text: str) -> Multigraph:
    """
    Parse the graph file format.

    The first non-comment line is ``n m``, followed by m lines ``u v``;
    edge indices follow line order and ``#`` starts a comment line.

    Args:
        text: File contents

    Returns:
        The parsed Multigraph

    Raises:
        ParseError: With the offending line number
    """
    lines = _content_lines(text)
    g, used = _parse_graph_block(lines)
    if used < len(lines):
        raise ParseError("unexpected content after the edge list", lines[used][0])
    return g


def parse_ribbon(text: str, require_rotation: bool = True) -> RibbonStructure:
    """
    Parse the ribbon file format: a graph block, rotation lines, twists.

    Rotation lines read ``rotation v: d d d`` and list the darts at v in
    cyclic order; the final line reads ``twists: <bitstring>`` with edge 0
    first.

    Args:
        text: File contents
        require_rotation: If False, a bare graph file is accepted and gets
            the sorted-dart rotation with no twists

    Returns:
        The parsed RibbonStructure

    Raises:
        ParseError: With the offending line number
    """
    lines = _content_lines(text)
    g, used = _parse_graph_block(lines)
    rest = lines[used:]
    if not rest and not require_rotation:
        return new_ribbon(g)
    rotation: Dict[int, Tuple[int, ...]] = {}
    twists: Optional[int] = None
    last = lines[-1][0]
    for number, line in rest:
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'rotation v:' or 'twists:', got {line!r}", number)
        key = key.strip()
        if twists is not None:
            raise ParseError("unexpected content after the twists line", number)
        if key.startswith("rotation"):
            vertex = _ints(key[len("rotation"):], number, 1)[0]
            if not 0 <= vertex < g.n:
                raise ParseError(f"rotation for unknown vertex {vertex}", number)
            if vertex in rotation:
                raise ParseError(f"duplicate rotation for vertex {vertex}", number)
            rotation[vertex] = tuple(_ints(value, number))
        elif key == "twists":
            bits = value.strip()
            if len(bits) != g.m:
                raise ParseError(f"twists has {len(bits)} bits, graph has {g.m} edges", number)
            try:
                twists = parse_bitstring(bits)
            except GraphError as exc:
                raise ParseError(str(exc), number)
        else:
            raise ParseError(f"unknown section {key!r}", number)
    missing = [v for v in range(g.n) if v not in rotation]
    if missing:
        raise ParseError(f"missing rotation for vertices {missing}", last)
    if twists is None:
        raise ParseError("missing 'twists:' line", last)
    try:
        return new_ribbon(g, [rotation[v] for v in range(g.n)], twists)
    except RibbonError as exc:
        raise ParseError(str(exc), last)


def format_graph(g: Multigraph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def format_ribbon(r: RibbonStructure) -> str:
    """Inverse of :func:`parse_ribbon` for comment-free input."""
    lines = [format_graph(r.graph).rstrip("\n")]
    for v, cycle in enumerate(r.rotation):
        lines.append(f"rotation {v}: " + " ".join(map(str, cycle)) if cycle else f"rotation {v}:")
    lines.append(f"twists: {bitstring(r.twists, r.m)}".rstrip())
    return "\n".join(lines) + "\n"


def read_graph(path: PathLike) -> Multigraph:
    logger.debug(f"Reading graph file {path}")
    return parse_graph(Path(path).read_text())


def read_ribbon(path: PathLike, require_rotation: bool = True) -> RibbonStructure:
    logger.debug(f"Reading ribbon file {path}")
    return parse_ribbon(Path(path).read_text(), require_rotation=require_rotation)


def write_graph(g: Multigraph, path: PathLike) -> None:
    Path(path).write_text(format_graph(g))


def write_ribbon(r: RibbonStructure, path: PathLike) -> None:
    Path(path).write_text(format_ribbon(r))
