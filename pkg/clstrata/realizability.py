"""
Orientable realizability of graphs as cut loci.

A graph is orientably realizable iff its cyclic part carries an orientable
strip. Cheap screens and constructive criteria are tried first; an
exhaustive oracle over rotation systems settles the rest within budget.
"""

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .catalog import load_entry
from .cycle_space import vertex_cut
from .multigraph import (
    BudgetExceededError,
    GraphError,
    Multigraph,
    are_isomorphic,
    bridges,
    canonical_form,
    cycle_rank,
    cyclic_part,
    edge_subset,
    new_graph,
    subset_edges,
)
from .parallel import chunk_ranges, ordered_map, worker_count
from .parse import format_graph, read_graph
from .ribbon import (
    RibbonStructure,
    Rotation,
    add_edge_strip,
    disjoint_union,
    face_count,
    is_orientable,
    is_strip,
    lift_to_graph,
    new_ribbon,
    orientation_signs,
    rotation_count,
    rotation_systems,
    transport,
    untwist,
)

logger = logging.getLogger(__name__)

YES = "yes"
NO = "no"
UNKNOWN = "unknown"

ORACLE_BUDGET = 1 << 26
ARRANGEMENT_BUDGET = 1 << 14
BUILTIN_KNOWN_BAD = ("necklace",)


class ConstructionError(ValueError):
    """Raised when a constructor's preconditions fail or no strip arrangement exists."""
    pass


@dataclass
class RealizabilityReport:
    """
    Verdict on orientable realizability.

    Attributes:
        verdict: YES, NO or UNKNOWN
        criterion: Name of the rule that decided
        witness: An orientable strip on the graph when the verdict is YES
        details: Human-readable notes
    """
    verdict: str
    criterion: str
    witness: Optional[RibbonStructure] = None
    details: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.verdict == YES:
            if self.witness is None:
                raise ConstructionError(f"Positive verdict from {self.criterion} without a witness")
            _check_witness(self.witness, self.criterion)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "criterion": self.criterion,
            "witness": self.witness.describe() if self.witness is not None else None,
            "details": list(self.details),
        }


def _check_witness(r: RibbonStructure, origin: str) -> None:
    if not (is_strip(r) and is_orientable(r)):
        raise ConstructionError(f"{origin} produced a structure that is not an orientable strip: {r.describe()}")


def _disc(g: Multigraph) -> RibbonStructure:
    return new_ribbon(g)


def _require_connected(g: Multigraph, operation: str) -> None:
    if not g.is_connected:
        raise GraphError(f"{operation} requires a connected graph")


def _oracle_chunk(task: Tuple[Multigraph, Tuple[Rotation, ...], Tuple[int, ...]]) -> Optional[RibbonStructure]:
    h, rotations, cuts = task
    for rotation in rotations:
        base = RibbonStructure(h, rotation, 0)
        for s in cuts:
            candidate = base.with_twists(s)
            if face_count(candidate) == 1:
                return candidate
    return None


def oracle_orientably_realizable(g: Multigraph, budget: int = ORACLE_BUDGET) -> RealizabilityReport:
    """
    Exhaustive search for an orientable strip on the cyclic part of g.

    Rotations are surveyed one per vertex-reversal class; for each, the
    orientable twist assignments (vertex cuts) are tried in canonical order.

    Raises:
        BudgetExceededError: If rotations x 2^m exceeds the budget
    """
    _require_connected(g, "oracle_orientably_realizable")
    part = cyclic_part(g)
    h = part.graph
    if h.m == 0:
        return RealizabilityReport(YES, "oracle", lift_to_graph(_disc(h), part, g), ["cyclic part is a point"])
    cost = rotation_count(h) << h.m
    if cost > budget:
        raise BudgetExceededError(f"Oracle needs {cost} checks on the cyclic part (budget {budget})")
    cuts = tuple(sorted({vertex_cut(h, [v for v in range(1, h.n) if mask >> (v - 1) & 1])
                         for mask in range(1 << (h.n - 1))}))
    rotations = list(rotation_systems(h))
    workers = worker_count()
    tasks = [(h, tuple(rotations[a:b]), cuts) for a, b in chunk_ranges(len(rotations), 4 * workers)]
    logger.debug(f"Oracle: {len(rotations)} rotations x {len(cuts)} orientable twist assignments")
    # A single worker scans lazily and stops at the first witness
    results = map(_oracle_chunk, tasks) if workers <= 1 else ordered_map(_oracle_chunk, tasks)
    for witness in results:
        if witness is not None:
            lifted = lift_to_graph(witness, part, g)
            return RealizabilityReport(YES, "oracle", lifted, [f"cyclic part witness: {witness.describe()}"])
    return RealizabilityReport(NO, "oracle", None, [f"searched {len(rotations)} rotations"])


def screen_odd_q(g: Multigraph) -> Optional[RealizabilityReport]:
    """NO when the number of generating cycles is odd."""
    q = cycle_rank(g)
    if q % 2:
        return RealizabilityReport(NO, "odd-q", None, [f"q = {q} is odd"])
    return None


def screen_loop_deg3(g: Multigraph) -> Optional[RealizabilityReport]:
    """NO when the cyclic part has a loop at a vertex of degree three."""
    h = cyclic_part(g).graph
    for e in subset_edges(h.loops):
        v = h.edges[e][0]
        if h.degree(v) == 3:
            return RealizabilityReport(NO, "loop-at-degree-3", None, ["loop at a degree-3 vertex of the cyclic part"])
    return None


@dataclass(frozen=True)
class Part:
    """A witness strip placed on global vertices: witness vertex i is vertices[i]."""
    vertices: Tuple[int, ...]
    witness: RibbonStructure


def compose_tree(parts: Sequence[Part]) -> RibbonStructure:
    """
    Merge orientable strips whose incidence graph is a tree.

    Parts are glued at shared vertices by concatenating their cyclic orders
    after untwisting each witness; edges are numbered part by part.

    Raises:
        ConstructionError: If a witness is not an orientable strip, two parts
            share more than one vertex, or the incidence graph is not a tree
    """
    if not parts:
        raise ConstructionError("compose_tree needs at least one part")
    incidence = nx.Graph()
    incidence.add_nodes_from(range(len(parts)))
    for i, part in enumerate(parts):
        if len(set(part.vertices)) != part.witness.n:
            raise ConstructionError(f"Part {i} needs {part.witness.n} distinct vertex labels")
        if not (is_strip(part.witness) and is_orientable(part.witness)):
            raise ConstructionError(f"Part {i} is not an orientable strip")
    for i, j in itertools.combinations(range(len(parts)), 2):
        shared = set(parts[i].vertices) & set(parts[j].vertices)
        if len(shared) > 1:
            raise ConstructionError(f"Parts {i} and {j} share {len(shared)} vertices")
        if shared:
            incidence.add_edge(i, j)
    if not nx.is_tree(incidence):
        raise ConstructionError("The incidence graph of the parts is not a tree")
    labels = sorted({v for part in parts for v in part.vertices})
    if labels != list(range(len(labels))):
        raise ConstructionError("Part vertices must cover 0..N-1")

    edges: List[Tuple[int, int]] = []
    rotation: List[List[int]] = [[] for _ in labels]
    for part in parts:
        flat = untwist(part.witness)
        offset = 2 * len(edges)
        edges.extend((part.vertices[u], part.vertices[v]) for u, v in flat.graph.edges)
        for v, cycle in enumerate(flat.rotation):
            rotation[part.vertices[v]].extend(d + offset for d in cycle)
    result = RibbonStructure(new_graph(len(labels), edges), tuple(tuple(c) for c in rotation), 0)
    _check_witness(result, "compose_tree")
    return result


def _anchor_choices(r: RibbonStructure, v: int) -> List[Optional[int]]:
    cycle = r.rotation[v]
    return list(cycle) if cycle else [None]


def link_arrangements(r1: RibbonStructure, r2: RibbonStructure, links: Sequence[Tuple[int, int]],
                      twists: Sequence[int]) -> Iterator[RibbonStructure]:
    """
    Every way of attaching the link bands to the disjoint union of r1 and r2.

    Link j joins vertex links[j][0] of r1 to vertex links[j][1] of r2; the
    new bands follow the edges of r1 and r2 in link order. Arrangements are
    produced depth-first by insertion anchor.
    """
    union = disjoint_union(r1, r2)

    def extend(current: RibbonStructure, j: int) -> Iterator[RibbonStructure]:
        if j == len(links):
            yield current
            return
        u, v = links[j][0], links[j][1] + r1.n
        for after_u in _anchor_choices(current, u):
            for after_v in _anchor_choices(current, v):
                yield from extend(add_edge_strip(current, u, v, twists[j], after_u, after_v), j + 1)

    yield from extend(union, 0)


def _first_strip(arrangements: Iterator[RibbonStructure], what: str) -> RibbonStructure:
    for count, candidate in enumerate(arrangements):
        if count >= ARRANGEMENT_BUDGET:
            raise BudgetExceededError(f"{what}: no strip within {ARRANGEMENT_BUDGET} arrangements")
        if face_count(candidate) == 1:
            logger.debug(f"{what}: strip found after {count + 1} arrangements")
            return candidate
    raise ConstructionError(f"{what}: no arrangement of the link bands gives a strip")


def _check_links(r1: RibbonStructure, r2: RibbonStructure, links: Sequence[Tuple[int, int]],
                 distinct_ends: bool) -> None:
    for u, v in links:
        if not (0 <= u < r1.n and 0 <= v < r2.n):
            raise ConstructionError(f"Link ({u}, {v}) has an endpoint outside its side")
    if not distinct_ends:
        return
    for side, name in ((0, "first"), (1, "second")):
        ends = [link[side] for link in links]
        if len(set(ends)) < len(ends):
            logger.warning(f"Rejecting links that share an endpoint on the {name} side: {ends}")
            raise ConstructionError(f"Links share an endpoint on the {name} side: {ends}")


def connection_parities(r1: RibbonStructure, r2: RibbonStructure,
                        links: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """
    Twist parities of the side paths of the cycles through links (1,2) and (2,3).

    In an orientable structure the parity of a path depends only on its ends,
    so it is read off the orientation signs.
    """
    o1, o2 = orientation_signs(r1), orientation_signs(r2)
    if o1 is None or o2 is None:
        raise ConstructionError("Both sides must be orientable")

    def parity(a: Tuple[int, int], b: Tuple[int, int]) -> int:
        return o1[a[0]] ^ o1[b[0]] ^ o2[a[1]] ^ o2[b[1]]

    return parity(links[0], links[1]), parity(links[1], links[2])


def three_link_twists(epsilon: int, epsilon_prime: int) -> Tuple[int, int, int]:
    """Twists of links (e1, e2, e3) making both connecting cycles even."""
    if epsilon == 0 and epsilon_prime == 0:
        return 1, 1, 1
    if epsilon == 0:
        return 1, 1, 0
    if epsilon_prime == 0:
        return 0, 1, 1
    return 1, 0, 1


def connect_two(r1: RibbonStructure, r2: RibbonStructure, links: Sequence[Tuple[int, int]]) -> RibbonStructure:
    """
    Join two orientable strips by one or three link bands.

    One link is an untwisted band. For three links the twists are chosen
    from the parities of the two connecting cycles so that the result is
    orientable, then insertion positions are searched for a strip.

    Args:
        r1: Orientable strip on the first side
        r2: Orientable strip on the second side
        links: (vertex of r1, vertex of r2) per link

    Returns:
        Orientable strip on the union; r2's vertices follow r1's and the
        links are the last edges

    Raises:
        ConstructionError: If k is not 1 or 3, a side is not an orientable strip,
            or two links share an endpoint on the same side
    """
    k = len(links)
    if k not in (1, 3):
        raise ConstructionError(f"connect_two supports 1 or 3 links, got {k}")
    for name, r in (("first", r1), ("second", r2)):
        if not (is_strip(r) and is_orientable(r)):
            raise ConstructionError(f"The {name} side is not an orientable strip")
    _check_links(r1, r2, links, distinct_ends=True)
    if k == 1:
        twists: Tuple[int, ...] = (0,)
    else:
        epsilon, epsilon_prime = connection_parities(r1, r2, links)
        twists = three_link_twists(epsilon, epsilon_prime)
        logger.debug(f"Connecting cycle parities {epsilon}, {epsilon_prime}: link twists {twists}")
    result = _first_strip(link_arrangements(r1, r2, links, twists), "connect_two")
    _check_witness(result, "connect_two")
    return result


def _is_tree(t: Multigraph) -> bool:
    return t.is_connected and t.m == t.n - 1


def join_trees(t1: Multigraph, t2: Multigraph, links: Sequence[Tuple[int, int]]) -> RibbonStructure:
    """
    Join two trees by an odd number of twisted link bands.

    Links may share endpoints; two single vertices joined by k links give
    the k-edge dipole.

    Raises:
        ConstructionError: If k is even or an input is not a tree
    """
    k = len(links)
    if k % 2 == 0:
        raise ConstructionError(f"join_trees needs an odd number of links, got {k}")
    for name, t in (("first", t1), ("second", t2)):
        if not _is_tree(t):
            raise ConstructionError(f"The {name} graph is not a tree")
    r1, r2 = _disc(t1), _disc(t2)
    _check_links(r1, r2, links, distinct_ends=False)
    result = _first_strip(link_arrangements(r1, r2, links, (1,) * k), "join_trees")
    _check_witness(result, "join_trees")
    return result


class KnownBadCatalog:
    """
    Graphs known not to be orientably realizable, optionally persisted.

    The shipped ring of three 2-cycles is always a member unless builtin is
    False; it is never written out. With a directory, members are stored one
    graph file each and new members are written as they are added.
    """

    def __init__(self, directory: Optional[Union[str, Path]] = None, seeds: Sequence[Multigraph] = (),
                 builtin: bool = True):
        self.directory = Path(directory) if directory is not None else None
        self.graphs: List[Multigraph] = [load_entry(name).graph for name in BUILTIN_KNOWN_BAD] if builtin else []
        if self.directory is not None and self.directory.is_dir():
            paths = sorted(self.directory.glob("*.graph"))
            self.graphs.extend(read_graph(path) for path in paths)
            logger.info(f"Loaded {len(paths)} known non-realizable graphs from {self.directory}")
        for g in seeds:
            self.add(g)

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def contains(self, g: Multigraph) -> bool:
        h = cyclic_part(g).graph
        for bad in self.graphs:
            try:
                if are_isomorphic(h, cyclic_part(bad).graph):
                    return True
            except BudgetExceededError:
                logger.debug(f"Skipping comparison beyond the matching budget ({h.n} vertices)")
        return False

    def add(self, g: Multigraph) -> bool:
        """Add a graph unless an isomorphic one is present; returns True if added."""
        if self.contains(g):
            return False
        self.graphs.append(g)
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            digest = abs(hash(canonical_form(g))) % (1 << 32)
            path = self.directory / f"bad-{g.n}-{g.m}-{digest:08x}.graph"
            path.write_text(format_graph(g))
            logger.info(f"Recorded non-realizable graph in {path}")
        return True


def _bridge_sides(g: Multigraph, e: int) -> Tuple[Tuple[Multigraph, Tuple[int, ...], Tuple[int, ...]], ...]:
    """The two sides of bridge e as (subgraph, vertex origin, edge origin)."""
    u, v = g.edges[e]
    graph = g.to_networkx()
    graph.remove_edge(u, v, key=e)
    sides = []
    for root in (u, v):
        vertices = nx.node_connected_component(graph, root)
        mask = edge_subset(k for k, (a, b) in enumerate(g.edges) if k != e and a in vertices)
        sides.append(g.subgraph(mask, vertices))
    return tuple(sides)


def screen_bridge_nonrealizable(g: Multigraph,
                                known_bad: Optional[KnownBadCatalog] = None) -> Optional[RealizabilityReport]:
    """
    NO when one side of a bridge matches a known non-realizable graph.

    Without a catalog the built-in members are used.
    """
    if known_bad is None:
        known_bad = KnownBadCatalog()
    for e in subset_edges(bridges(g)):
        for side, _, _ in _bridge_sides(g, e):
            if known_bad.contains(side):
                return RealizabilityReport(NO, "bridge-side-known-bad", None,
                                           [f"a side of bridge {e} is known non-realizable"])
    return None


def _split_at_bridge(h: Multigraph, e: int, known_bad: KnownBadCatalog,
                     use_oracle: bool, budget: int) -> RealizabilityReport:
    (g1, v1, e1), (g2, v2, e2) = _bridge_sides(h, e)
    reports = [decide(side, known_bad, use_oracle, budget) for side in (g1, g2)]
    for side, report in zip((g1, g2), reports):
        if report.verdict == NO:
            known_bad.add(side)
            return RealizabilityReport(NO, "bridge-side", None, [f"side via {report.criterion}"])
    if any(report.verdict != YES for report in reports):
        return RealizabilityReport(UNKNOWN, "bridge-side", None, ["a bridge side is undecided"])
    a, b = h.edges[e]
    if a not in v1:
        a, b = b, a
    joined = connect_two(reports[0].witness, reports[1].witness, [(v1.index(a), v2.index(b))])
    vertex_map = list(v1) + list(v2)
    edge_map = list(e1) + list(e2) + [e]
    witness = transport(joined, h, vertex_map, edge_map)
    return RealizabilityReport(YES, "bridge-join", witness, ["both bridge sides are orientably realizable"])


def decide(g: Multigraph, known_bad: Optional[KnownBadCatalog] = None, use_oracle: bool = True,
           budget: int = ORACLE_BUDGET) -> RealizabilityReport:
    """
    Decide orientable realizability, cheapest rule first.

    Order: odd q, loop at a degree-3 vertex, known-bad bridge side, tree,
    bridge splitting, two-vertex dipole with an odd number of edges, then
    the oracle when allowed and within budget. Without a catalog a fresh one
    holding the built-in members is used and collects the NO results.
    """
    _require_connected(g, "decide")
    if known_bad is None:
        known_bad = KnownBadCatalog()
    for screen in (screen_odd_q, screen_loop_deg3):
        report = screen(g)
        if report is not None:
            return report
    report = screen_bridge_nonrealizable(g, known_bad)
    if report is not None:
        return report

    part = cyclic_part(g)
    h = part.graph
    if h.m == 0:
        return RealizabilityReport(YES, "tree", lift_to_graph(_disc(h), part, g))

    result: Optional[RealizabilityReport] = None
    cut_edges = subset_edges(bridges(h))
    if cut_edges:
        result = _split_at_bridge(h, cut_edges[0], known_bad, use_oracle, budget)
    elif h.n == 2 and not h.loops and h.m % 2:
        joined = join_trees(new_graph(1, []), new_graph(1, []), [(0, 0)] * h.m)
        result = RealizabilityReport(YES, "two-trees", transport(joined, h, [0, 1], list(range(h.m))))
    if result is not None and result.verdict != UNKNOWN:
        witness = lift_to_graph(result.witness, part, g) if result.witness is not None else None
        return RealizabilityReport(result.verdict, result.criterion, witness, result.details)

    if not use_oracle:
        return RealizabilityReport(UNKNOWN, "criteria", None, ["no criterion applies"])
    try:
        report = oracle_orientably_realizable(g, budget)
    except BudgetExceededError as exc:
        logger.info(f"Oracle skipped: {exc}")
        return RealizabilityReport(UNKNOWN, "criteria", None, [str(exc)])
    if report.verdict == NO:
        known_bad.add(g)
    return report
