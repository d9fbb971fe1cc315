"""Multigraphs with loops and parallel edges, encoded by darts (half-edges)."""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

logger = logging.getLogger(__name__)

# Edge subsets are bitmasks over edge indices; bit i is edge i.
EdgeSubset = int

MAX_EDGES = 64
AUTOMORPHISM_VERTEX_BUDGET = 12
CANONICAL_LABELING_BUDGET = 3628800  # 10!


class GraphError(ValueError):
    """Raised for malformed graphs or graphs violating an operation's precondition."""
    pass


class BudgetExceededError(GraphError):
    """Raised when a brute-force search would exceed its budget."""
    pass


def mate(dart: int) -> int:
    """Return the other dart of the same edge."""
    return dart ^ 1


def edge_of(dart: int) -> int:
    return dart >> 1


def edge_subset(edges: Iterable[int]) -> EdgeSubset:
    """Build a bitmask from edge indices."""
    mask = 0
    for e in edges:
        mask |= 1 << e
    return mask


def subset_edges(mask: EdgeSubset) -> List[int]:
    """Return the edge indices set in a bitmask, in increasing order."""
    edges = []
    i = 0
    while mask:
        if mask & 1:
            edges.append(i)
        mask >>= 1
        i += 1
    return edges


def bitstring(mask: EdgeSubset, m: int) -> str:
    """Render a subset as a bitstring, least-significant bit (edge 0) first."""
    return "".join("1" if mask >> i & 1 else "0" for i in range(m))


def parse_bitstring(text: str) -> EdgeSubset:
    """Inverse of :func:`bitstring`."""
    if any(c not in "01" for c in text):
        raise GraphError(f"Invalid bitstring {text!r}")
    return sum(1 << i for i, c in enumerate(text) if c == "1")


@dataclass(frozen=True)
class Multigraph:
    """
    Undirected multigraph on vertices 0..n-1.

    Edge i joins ``edges[i][0]`` and ``edges[i][1]`` and owns darts 2i (at
    the first endpoint) and 2i+1 (at the second). Loops and parallel edges
    are allowed.
    """
    n: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"A graph needs at least one vertex, got n={self.n}")
        if len(self.edges) > MAX_EDGES:
            raise GraphError(f"At most {MAX_EDGES} edges are supported, got {len(self.edges)}")
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"Edge {i} = ({u}, {v}) has an endpoint outside 0..{self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def endpoint(self, dart: int) -> int:
        return self.edges[dart >> 1][dart & 1]

    def is_loop(self, e: int) -> bool:
        u, v = self.edges[e]
        return u == v

    @cached_property
    def loops(self) -> EdgeSubset:
        return edge_subset(e for e in range(self.m) if self.is_loop(e))

    @cached_property
    def _darts_by_vertex(self) -> Tuple[Tuple[int, ...], ...]:
        darts: List[List[int]] = [[] for _ in range(self.n)]
        for d in range(2 * self.m):
            darts[self.endpoint(d)].append(d)
        return tuple(tuple(ds) for ds in darts)

    def darts_at(self, v: int) -> Tuple[int, ...]:
        """Darts at vertex v in increasing order (a loop contributes both darts)."""
        return self._darts_by_vertex[v]

    def degree(self, v: int) -> int:
        return len(self._darts_by_vertex[v])

    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(ds) for ds in self._darts_by_vertex)

    def to_networkx(self) -> nx.MultiGraph:
        """Convert to a networkx MultiGraph keyed by edge index."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n))
        for i, (u, v) in enumerate(self.edges):
            graph.add_edge(u, v, key=i)
        return graph

    @cached_property
    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx())

    def subgraph(self, edges: EdgeSubset, vertices: Optional[Iterable[int]] = None
                 ) -> Tuple["Multigraph", Tuple[int, ...], Tuple[int, ...]]:
        """
        Extract the subgraph spanned by an edge subset (plus extra vertices).

        Returns:
            Tuple of (subgraph, vertex_origin, edge_origin) where the origin
            tuples map new indices back to indices in this graph.
        """
        chosen = subset_edges(edges)
        verts = set(vertices or ())
        for e in chosen:
            verts.update(self.edges[e])
        vertex_origin = tuple(sorted(verts))
        if not vertex_origin:
            raise GraphError("Cannot take the subgraph of an empty selection")
        index = {v: i for i, v in enumerate(vertex_origin)}
        sub = Multigraph(len(vertex_origin), tuple((index[self.edges[e][0]], index[self.edges[e][1]]) for e in chosen))
        return sub, vertex_origin, tuple(chosen)


def new_graph(n: int, endpoints: Sequence[Sequence[int]]) -> Multigraph:
    """
    Build a multigraph; edge i gets darts 2i and 2i+1.

    Args:
        n: Number of vertices (vertices are 0..n-1)
        endpoints: Sequence of (u, v) pairs, one per edge

    Returns:
        The constructed Multigraph
    """
    pairs = []
    for pair in endpoints:
        if len(pair) != 2:
            raise GraphError(f"Expected a vertex pair, got {pair!r}")
        pairs.append((int(pair[0]), int(pair[1])))
    return Multigraph(int(n), tuple(pairs))


def _require_connected(g: Multigraph, operation: str) -> None:
    if not g.is_connected:
        raise GraphError(f"{operation} requires a connected graph")


def cycle_rank(g: Multigraph) -> int:
    """Number of generating cycles q = m - n + 1 of a connected graph."""
    _require_connected(g, "cycle_rank")
    return g.m - g.n + 1


def bridges(g: Multigraph) -> EdgeSubset:
    """Edges whose removal increases the number of connected components."""
    graph = g.to_networkx()
    graph.remove_edges_from([(u, v, e) for e, (u, v) in enumerate(g.edges) if u == v])
    mask = 0
    for u, v in nx.bridges(graph):
        keys = list(graph[u][v])
        # nx.bridges skips parallel pairs, so the key is unique
        mask |= 1 << keys[0]
    return mask


def two_connected_components(g: Multigraph) -> Tuple[EdgeSubset, ...]:
    """
    Edge sets of the non-vertex components of G minus its bridges.

    Returns:
        Tuple of disjoint edge masks ordered by lowest edge index
    """
    bridge_mask = bridges(g)
    graph = g.to_networkx()
    graph.remove_edges_from([(u, v, e) for e, (u, v) in enumerate(g.edges) if bridge_mask >> e & 1])
    components = []
    for vertices in nx.connected_components(graph):
        mask = 0
        for _, _, key in graph.subgraph(vertices).edges(keys=True):
            mask |= 1 << key
        if mask:
            components.append(mask)
    components.sort(key=lambda c: (c & -c))
    return tuple(components)


@dataclass(frozen=True)
class CyclicPart:
    """
    Result of :func:`cyclic_part`.

    Attributes:
        graph: The reduced graph
        edge_origin: For each reduced edge, the original edges it absorbed, in
            order from its first endpoint to its second
        vertex_origin: Original index of each reduced vertex
        dart_origin: Original dart corresponding to each reduced dart
        dart_paths: For each reduced edge, the original darts departing along
            its path from its first endpoint
    """
    graph: Multigraph
    edge_origin: Tuple[Tuple[int, ...], ...]
    vertex_origin: Tuple[int, ...]
    dart_origin: Tuple[int, ...]
    dart_paths: Tuple[Tuple[int, ...], ...] = ()


def _reverse_path(path: List[int]) -> List[int]:
    return [mate(d) for d in reversed(path)]


def cyclic_part(g: Multigraph) -> CyclicPart:
    """
    Reduce a connected graph to its cyclic part.

    Degree-1 vertices are deleted with their edge until none remain, then
    each degree-2 vertex not carrying a loop is smoothed by merging its two
    incident edges. A pure cycle ends as one vertex with one loop; a tree
    ends as a single vertex.
    """
    _require_connected(g, "cyclic_part")
    # edge id -> [first endpoint, second endpoint, departing darts along the path]
    work: Dict[int, list] = {i: [u, v, [2 * i]] for i, (u, v) in enumerate(g.edges)}
    alive = set(range(g.n))

    def incidences(v: int) -> List[Tuple[int, int]]:
        found = []
        for eid in sorted(work):
            a, b, _ = work[eid]
            if a == v:
                found.append((eid, 0))
            if b == v:
                found.append((eid, 1))
        return found

    pruned = True
    while pruned:
        pruned = False
        for v in sorted(alive):
            inc = incidences(v)
            if len(inc) == 1 and len(alive) > 1:
                del work[inc[0][0]]
                alive.remove(v)
                pruned = True
                break

    smoothed = True
    while smoothed:
        smoothed = False
        for v in sorted(alive):
            inc = incidences(v)
            if len(inc) != 2 or inc[0][0] == inc[1][0]:
                continue
            (e1, _), (e2, _) = inc
            a1, b1, p1 = work[e1]
            if b1 == v:
                head, first = a1, p1
            else:
                head, first = b1, _reverse_path(p1)
            a2, b2, p2 = work[e2]
            if a2 == v:
                tail, second = b2, p2
            else:
                tail, second = a2, _reverse_path(p2)
            del work[e1], work[e2]
            work[min(e1, e2)] = [head, tail, first + second]
            alive.remove(v)
            smoothed = True
            logger.debug(f"Smoothed vertex {v}: edges {e1} and {e2} merged")
            break

    vertex_origin = tuple(sorted(alive))
    index = {v: i for i, v in enumerate(vertex_origin)}
    edges, edge_origin, dart_origin, dart_paths = [], [], [], []
    for eid in sorted(work):
        a, b, path = work[eid]
        edges.append((index[a], index[b]))
        edge_origin.append(tuple(edge_of(d) for d in path))
        dart_origin.extend([path[0], mate(path[-1])])
        dart_paths.append(tuple(path))
    reduced = Multigraph(len(vertex_origin), tuple(edges))
    return CyclicPart(reduced, tuple(edge_origin), vertex_origin, tuple(dart_origin), tuple(dart_paths))


def _check_automorphism_budget(*graphs: Multigraph) -> None:
    for g in graphs:
        if g.n > AUTOMORPHISM_VERTEX_BUDGET:
            raise BudgetExceededError(
                f"Graph with {g.n} vertices is too large for brute-force matching "
                f"(limit {AUTOMORPHISM_VERTEX_BUDGET})"
            )


def _edge_classes(g: Multigraph) -> Dict[Tuple[int, int], List[int]]:
    classes: Dict[Tuple[int, int], List[int]] = {}
    for e, (u, v) in enumerate(g.edges):
        classes.setdefault((min(u, v), max(u, v)), []).append(e)
    return classes


def vertex_automorphisms(g: Multigraph) -> List[Tuple[int, ...]]:
    """Vertex permutations preserving edge multiplicities (loops included)."""
    _check_automorphism_budget(g)
    graph = g.to_networkx()
    matcher = isomorphism.MultiGraphMatcher(graph, graph)
    perms = sorted(tuple(mapping[v] for v in range(g.n)) for mapping in matcher.isomorphisms_iter())
    logger.debug(f"Found {len(perms)} vertex automorphisms on {g.n} vertices")
    return perms


def automorphisms(g: Multigraph) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    All automorphisms as (vertex permutation, edge permutation) pairs.

    Parallel edges (and loops at one vertex) may permute among themselves,
    so every vertex automorphism contributes the product of the factorials
    of its edge-class sizes.
    """
    classes = _edge_classes(g)
    result = []
    for vperm in vertex_automorphisms(g):
        choices = []
        for (u, v), members in classes.items():
            a, b = vperm[u], vperm[v]
            targets = classes[(min(a, b), max(a, b))]
            choices.append((members, list(itertools.permutations(targets))))
        for picks in itertools.product(*(perms for _, perms in choices)):
            eperm = [0] * g.m
            for (members, _), images in zip(choices, picks):
                for e, image in zip(members, images):
                    eperm[e] = image
            result.append((vperm, tuple(eperm)))
    return result


def dart_automorphisms(g: Multigraph) -> List[Tuple[int, ...]]:
    """
    Automorphisms acting on darts, commuting with mate and endpoint.

    Each loop may additionally be mapped with its two darts exchanged.
    """
    loops = subset_edges(g.loops)
    result = []
    for vperm, eperm in automorphisms(g):
        for flips in itertools.product((0, 1), repeat=len(loops)):
            reversed_loops = {e for e, f in zip(loops, flips) if f}
            dperm = [0] * (2 * g.m)
            for e, (u, _) in enumerate(g.edges):
                image = eperm[e]
                if g.is_loop(e):
                    swap = e in reversed_loops
                else:
                    swap = g.edges[image][0] != vperm[u]
                dperm[2 * e] = 2 * image + swap
                dperm[2 * e + 1] = 2 * image + (not swap)
            result.append(tuple(dperm))
    return result


def are_isomorphic(g: Multigraph, h: Multigraph) -> bool:
    """True iff an endpoint-preserving bijection of vertices and edges exists."""
    _check_automorphism_budget(g, h)
    if g.n != h.n or g.m != h.m:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    if bin(g.loops).count("1") != bin(h.loops).count("1"):
        return False
    return nx.is_isomorphic(g.to_networkx(), h.to_networkx())


def _vertex_invariant(g: Multigraph, v: int) -> Tuple:
    loops = sum(1 for e in range(g.m) if g.is_loop(e) and g.edges[e][0] == v)
    neighbours = sorted(g.degree(g.endpoint(mate(d))) for d in g.darts_at(v))
    return (g.degree(v), loops, tuple(neighbours))


def _canonical_search(g: Multigraph) -> Tuple[Tuple, Tuple[int, ...]]:
    invariants = [_vertex_invariant(g, v) for v in range(g.n)]
    groups: Dict[Tuple, List[int]] = {}
    for v in range(g.n):
        groups.setdefault(invariants[v], []).append(v)
    ordered = [groups[key] for key in sorted(groups)]
    labelings = 1
    for members in ordered:
        for k in range(2, len(members) + 1):
            labelings *= k
    if labelings > CANONICAL_LABELING_BUDGET:
        raise BudgetExceededError(f"Canonical form needs {labelings} labelings (limit {CANONICAL_LABELING_BUDGET})")

    best = None
    best_label: Tuple[int, ...] = ()
    for arrangement in itertools.product(*(itertools.permutations(members) for members in ordered)):
        label = [0] * g.n
        position = 0
        for block in arrangement:
            for v in block:
                label[v] = position
                position += 1
        code = tuple(sorted(
            (min(label[u], label[v]), max(label[u], label[v])) for u, v in g.edges
        ))
        if best is None or code < best:
            best = code
            best_label = tuple(label)
    return (g.n, g.m, best), best_label


def canonical_form(g: Multigraph) -> Tuple:
    """
    Isomorphism-invariant encoding of a graph.

    The minimum sorted endpoint-pair list over all relabelings that order the
    vertices by a degree-based invariant.
    """
    return _canonical_search(g)[0]


def canonical_graph(g: Multigraph) -> Multigraph:
    """Relabel a graph into its canonical form (edges sorted)."""
    (n, _, code), _ = _canonical_search(g)
    return Multigraph(n, code)


def _cubic_candidates(n: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    residual = [3] * n
    chosen: List[Tuple[int, int]] = []

    def extend(last: Tuple[int, int]) -> Iterator[Tuple[Tuple[int, int], ...]]:
        u = next((v for v in range(n) if residual[v]), None)
        if u is None:
            yield tuple(chosen)
            return
        for v in range(u + 1, n):
            if not residual[v] or (u, v) < last:
                continue
            residual[u] -= 1
            residual[v] -= 1
            chosen.append((u, v))
            yield from extend((u, v))
            chosen.pop()
            residual[u] += 1
            residual[v] += 1

    yield from extend((-1, -1))


def enumerate_cubic_q4() -> List[Multigraph]:
    """
    Connected loopless cubic multigraphs with four generating cycles.

    Such graphs have n=6 and m=9. Candidates are generated as multisets of
    endpoint pairs and deduplicated by canonical form.

    Returns:
        One canonical representative per isomorphism class, sorted by
        canonical form
    """
    seen: Dict[Tuple, Multigraph] = {}
    candidates = 0
    for edges in _cubic_candidates(6):
        candidates += 1
        g = Multigraph(6, edges)
        if not g.is_connected:
            continue
        key = canonical_form(g)
        if key not in seen:
            seen[key] = canonical_graph(g)
    logger.info(f"Cubic q=4 census: {candidates} labeled candidates, {len(seen)} isomorphism classes")
    return [seen[key] for key in sorted(seen)]


def enumerate_multigraphs(n: int, m: int, loops: bool = True, min_degree: int = 1,
                          connected: bool = True) -> List[Multigraph]:
    """
    All multigraphs with n vertices and m edges up to isomorphism.

    Args:
        n: Number of vertices
        m: Number of edges
        loops: Whether loops are allowed
        min_degree: Minimum vertex degree (loops count 2)
        connected: Keep connected graphs only

    Returns:
        Canonical representatives sorted by canonical form
    """
    pairs = [(u, v) for u in range(n) for v in range(u, n) if loops or u != v]
    seen: Dict[Tuple, Multigraph] = {}
    for edges in itertools.combinations_with_replacement(pairs, m):
        degree = [0] * n
        for u, v in edges:
            degree[u] += 1
            degree[v] += 1
        if min(degree) < min_degree:
            continue
        g = Multigraph(n, edges)
        if connected and not g.is_connected:
            continue
        key = canonical_form(g)
        if key not in seen:
            seen[key] = canonical_graph(g)
    return [seen[key] for key in sorted(seen)]


def theta_graph(k: int = 3) -> Multigraph:
    """Two vertices joined by k parallel edges."""
    return new_graph(2, [(0, 1)] * k)


def bouquet(k: int) -> Multigraph:
    """One vertex carrying k loops."""
    return new_graph(1, [(0, 0)] * k)


def cycle_graph(k: int) -> Multigraph:
    return new_graph(k, [(i, (i + 1) % k) for i in range(k)])


def path_graph(k: int) -> Multigraph:
    """Path on k vertices."""
    return new_graph(k, [(i, i + 1) for i in range(k - 1)])


def petersen_graph() -> Multigraph:
    """Outer 5-cycle, inner pentagram, five spokes."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return new_graph(10, outer + inner + spokes)
