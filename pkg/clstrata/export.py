"""Functions for exporting ribbon structures as Graphviz DOT and JSON."""

import copy
import json
from typing import Dict, Optional

import pandas as pd

from .multigraph import bitstring, new_graph, parse_bitstring
from .ribbon import RibbonStructure, new_ribbon

TWISTED_LABEL = "x"
UNTWISTED_LABEL = "="

# Base template for the JSON form of a structure
RIBBON_JSON_TEMPLATE: Dict = {
    "format": "clstrata-ribbon",
    "version": 1,
    "n": 0,
    "edges": [],
    "rotation": [],
    "twists": "",
}

DEFAULT_GRAPH_ATTRIBUTES = {"layout": "neato", "overlap": "false"}


def edge_label(r: RibbonStructure, e: int) -> str:
    """'x' for a twisted band, '=' for an untwisted one."""
    return TWISTED_LABEL if r.twist(e) else UNTWISTED_LABEL


def ribbon_to_dot(r: RibbonStructure, name: str = "ribbon",
                  graph_attributes: Optional[Dict[str, str]] = None) -> str:
    """
    Render a structure as an undirected DOT multigraph.

    Each edge is drawn once and labeled with its twist mark; the edge index
    is kept in the ``id`` attribute. Output is byte-deterministic.

    Args:
        r: The structure to draw
        name: DOT graph name
        graph_attributes: Graph-level attributes; defaults to a neato layout

    Returns:
        DOT source text
    """
    attributes = dict(DEFAULT_GRAPH_ATTRIBUTES if graph_attributes is None else graph_attributes)
    lines = [f'graph "{name}" {{']
    for key in sorted(attributes):
        lines.append(f'  {key}="{attributes[key]}";')
    for v, cycle in enumerate(r.rotation):
        order = " ".join(map(str, cycle))
        lines.append(f'  {v} [label="{v}", rotation="{order}"];')
    for e, (u, v) in enumerate(r.graph.edges):
        lines.append(f'  {u} -- {v} [id="e{e}", label="{edge_label(r, e)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def ribbon_to_json(r: RibbonStructure) -> Dict:
    """Convert a structure to a JSON-serializable dictionary."""
    data = copy.deepcopy(RIBBON_JSON_TEMPLATE)
    data["n"] = r.n
    data["edges"] = [[u, v] for u, v in r.graph.edges]
    data["rotation"] = [list(cycle) for cycle in r.rotation]
    data["twists"] = bitstring(r.twists, r.m)
    return data


def ribbon_from_json(data: Dict) -> RibbonStructure:
    """
    Inverse of :func:`ribbon_to_json`.

    Raises:
        ValueError: If the dictionary is not a ribbon document
    """
    if data.get("format") != RIBBON_JSON_TEMPLATE["format"]:
        raise ValueError(f"Expected a {RIBBON_JSON_TEMPLATE['format']} document, got {data.get('format')!r}")
    g = new_graph(data["n"], data["edges"])
    return new_ribbon(g, data["rotation"], parse_bitstring(data["twists"]))


def dumps(data: Dict) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def ribbon_to_dataframe(r: RibbonStructure) -> pd.DataFrame:
    """One row per edge with endpoints, twist bit and drawn label."""
    rows = [
        {"edge": e, "u": u, "v": v, "twist": r.twist(e), "label": edge_label(r, e)}
        for e, (u, v) in enumerate(r.graph.edges)
    ]
    return pd.DataFrame(rows, columns=["edge", "u", "v", "twist", "label"])
