"""GF(2) linear algebra over edge subsets: cycle space, cut space and spans."""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np

from .multigraph import EdgeSubset, GraphError, Multigraph, bitstring, cycle_rank, mate, subset_edges

logger = logging.getLogger(__name__)

CycleVector = EdgeSubset

SIMPLE_CYCLE_RANK_BUDGET = 20


class CycleSpaceError(ValueError):
    """Raised when an edge subset is not a cycle vector where one is required."""
    pass


@dataclass(frozen=True)
class CycleBasis:
    """
    Fundamental cycle basis of a connected graph.

    Attributes:
        tree: Spanning tree edges
        cotree: Non-tree edges, increasing; cotree[i] is the unique
            non-tree edge of cycles[i]
        cycles: One fundamental cycle per non-tree edge
    """
    tree: EdgeSubset
    cotree: Tuple[int, ...]
    cycles: Tuple[CycleVector, ...]

    def __len__(self) -> int:
        return len(self.cycles)

    def format(self, m: int) -> List[str]:
        return [bitstring(c, m) for c in self.cycles]


def _spanning_tree(g: Multigraph) -> Tuple[EdgeSubset, List[int], List[int]]:
    """Breadth-first tree from vertex 0, scanning darts in increasing order."""
    parent_edge = [-1] * g.n
    depth = [-1] * g.n
    depth[0] = 0
    tree = 0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for d in g.darts_at(v):
            w = g.endpoint(mate(d))
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                parent_edge[w] = d >> 1
                tree |= 1 << (d >> 1)
                queue.append(w)
    return tree, parent_edge, depth


def fundamental_basis(g: Multigraph) -> CycleBasis:
    """
    Fundamental cycles with respect to a deterministic spanning tree.

    Args:
        g: A connected multigraph

    Returns:
        CycleBasis with q(G) = m - n + 1 vectors

    Raises:
        GraphError: If g is disconnected
    """
    q = cycle_rank(g)
    tree, parent_edge, depth = _spanning_tree(g)
    cotree, cycles = [], []
    for e, (u, v) in enumerate(g.edges):
        if tree >> e & 1:
            continue
        vector = 1 << e
        a, b = u, v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            pe = parent_edge[a]
            vector ^= 1 << pe
            x, y = g.edges[pe]
            a = y if x == a else x
        cotree.append(e)
        cycles.append(vector)
    if len(cycles) != q:
        raise GraphError(f"Basis size {len(cycles)} does not match cycle rank {q}")
    logger.debug(f"Fundamental basis: tree {bitstring(tree, g.m)}, {q} cycles")
    return CycleBasis(tree, tuple(cotree), tuple(cycles))


def sym_diff(a: CycleVector, b: CycleVector) -> CycleVector:
    """Symmetric difference, the addition of the cycle space."""
    return a ^ b


def is_cycle_vector(g: Multigraph, s: EdgeSubset) -> bool:
    """True iff every vertex meets an even number of darts of s."""
    parity = [0] * g.n
    for e in subset_edges(s):
        if e >= g.m:
            return False
        u, v = g.edges[e]
        parity[u] ^= 1
        parity[v] ^= 1
    return not any(parity)


def vertex_cut(g: Multigraph, vs: Iterable[int]) -> EdgeSubset:
    """Edges with exactly one endpoint in vs (loops never qualify)."""
    side = set(vs)
    mask = 0
    for e, (u, v) in enumerate(g.edges):
        if (u in side) != (v in side):
            mask |= 1 << e
    return mask


def to_matrix(vectors: Sequence[EdgeSubset], m: int) -> np.ndarray:
    """Stack edge subsets into a 0/1 matrix, one row per vector."""
    matrix = np.zeros((len(vectors), m), dtype=np.uint8)
    for row, vector in enumerate(vectors):
        for e in subset_edges(vector):
            matrix[row, e] = 1
    return matrix


def _rref_pivots(matrix: np.ndarray) -> List[int]:
    a = (np.asarray(matrix) & 1).astype(np.uint8, copy=True)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.where(a[r:, c] == 1)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p], :] = a[[p, r], :]
        ones = np.where(a[:, c] == 1)[0]
        ones = ones[ones != r]
        if ones.size:
            a[ones, :] ^= a[r, :]
        pivots.append(c)
        r += 1
    return pivots


def gf2_rank(vectors: Sequence[EdgeSubset], m: int) -> int:
    """Rank over GF(2) of a family of edge subsets."""
    if not vectors:
        return 0
    return len(_rref_pivots(to_matrix(vectors, m)))


def in_span(vectors: Sequence[EdgeSubset], target: EdgeSubset, m: int) -> bool:
    """True iff target is a GF(2) combination of vectors."""
    if not target:
        return True
    return gf2_rank(list(vectors) + [target], m) == gf2_rank(vectors, m)


def span(vectors: Sequence[EdgeSubset]) -> List[EdgeSubset]:
    """All 2^k combinations of k vectors (duplicates removed, sorted)."""
    members = {0}
    for vector in vectors:
        members |= {x ^ vector for x in members}
    return sorted(members)


def simple_cycles(g: Multigraph) -> List[CycleVector]:
    """
    Edge sets of all simple cycles (loops and 2-cycles included).

    A member of the cycle space is a simple cycle iff its edges form a
    connected subgraph in which every vertex has degree two.
    """
    basis = fundamental_basis(g)
    if len(basis) > SIMPLE_CYCLE_RANK_BUDGET:
        raise GraphError(f"Cycle rank {len(basis)} too large to list simple cycles")
    found = []
    for vector in span(basis.cycles):
        if not vector:
            continue
        degree = [0] * g.n
        graph = nx.MultiGraph()
        for e in subset_edges(vector):
            u, v = g.edges[e]
            degree[u] += 1
            degree[v] += 1
            graph.add_edge(u, v, key=e)
        if all(d in (0, 2) for d in degree) and nx.is_connected(graph):
            found.append(vector)
    return found


def cycles_of_length(g: Multigraph, length: int) -> List[CycleVector]:
    return [c for c in simple_cycles(g) if bin(c).count("1") == length]


def cut_space(g: Multigraph) -> List[EdgeSubset]:
    """All vertex cuts; subsets not containing vertex 0 suffice."""
    cuts = set()
    for bits in itertools.product((0, 1), repeat=g.n - 1):
        cuts.add(vertex_cut(g, [v for v, bit in zip(range(1, g.n), bits) if bit]))
    return sorted(cuts)
