"""Library for enumerating and classifying cut-locus structures as twisted ribbon structures on graphs."""

__version__ = "0.1.0"

from .multigraph import Multigraph, new_graph, cyclic_part, enumerate_cubic_q4
from .ribbon import RibbonStructure, new_ribbon, boundary, is_strip, is_orientable, closed_euler
from .cl_structures import classify, enumerate_strips, equivalence_orbit
from .realizability import decide, oracle_orientably_realizable, compose_tree, connect_two, join_trees
from .parse import read_graph, read_ribbon
from .export import ribbon_to_dot, ribbon_to_json
