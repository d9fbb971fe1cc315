"""
Twisted ribbon structures: a rotation system plus one twist bit per edge.

A structure is the combinatorial form of a patch around a graph. Vertex
discs are glued to edge bands; a twist bit of 1 marks a half-twisted band.
Boundary walks run over signed darts ``(dart, side)`` where side 0 is ``+``
and side 1 is ``-``.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .cycle_space import CycleSpaceError, CycleVector, fundamental_basis, is_cycle_vector
from .multigraph import (
    CyclicPart,
    EdgeSubset,
    GraphError,
    Multigraph,
    bitstring,
    edge_of,
    mate,
    new_graph,
    subset_edges,
)

logger = logging.getLogger(__name__)

Rotation = Tuple[Tuple[int, ...], ...]
SignedDart = Tuple[int, int]

SAME = "same"
OPPOSITE = "opposite"


class RibbonError(ValueError):
    """Raised for malformed rotations or operations applied outside their domain."""
    pass


class InvariantViolation(RuntimeError):
    """Raised when internal topological bookkeeping disagrees with itself."""
    pass


def _cycle_start(cycle: Sequence[int]) -> Tuple[int, ...]:
    if not cycle:
        return ()
    i = cycle.index(min(cycle))
    return tuple(cycle[i:]) + tuple(cycle[:i])


def rotation_key(rotation: Rotation) -> Tuple[Tuple[int, ...], ...]:
    """Encoding of a rotation with every cycle started at its smallest dart."""
    return tuple(_cycle_start(cycle) for cycle in rotation)


@dataclass(frozen=True)
class RibbonStructure:
    """
    A multigraph with a cyclic dart order at each vertex and twisted edges.

    Attributes:
        graph: Underlying multigraph
        rotation: rotation[v] lists the darts at v in cyclic order
        twists: Bitmask of half-twisted edges
    """
    graph: Multigraph
    rotation: Rotation
    twists: EdgeSubset = 0

    def __post_init__(self):
        g = self.graph
        if len(self.rotation) != g.n:
            raise RibbonError(f"Rotation lists {len(self.rotation)} vertices, graph has {g.n}")
        seen = set()
        for v, cycle in enumerate(self.rotation):
            for d in cycle:
                if not 0 <= d < 2 * g.m:
                    raise RibbonError(f"Dart {d} at vertex {v} does not exist")
                if d in seen:
                    raise RibbonError(f"Dart {d} appears twice in the rotation")
                if g.endpoint(d) != v:
                    raise RibbonError(f"Dart {d} belongs to vertex {g.endpoint(d)}, listed at {v}")
                seen.add(d)
        if len(seen) != 2 * g.m:
            missing = sorted(set(range(2 * g.m)) - seen)
            raise RibbonError(f"Rotation is missing darts {missing}")
        if self.twists >> g.m:
            raise RibbonError(f"Twist mask has bits beyond edge {g.m - 1}")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    def twist(self, e: int) -> int:
        return self.twists >> e & 1

    @cached_property
    def _neighbours(self) -> Tuple[List[int], List[int]]:
        succ = [0] * (2 * self.m)
        pred = [0] * (2 * self.m)
        for cycle in self.rotation:
            k = len(cycle)
            for i, d in enumerate(cycle):
                succ[d] = cycle[(i + 1) % k]
                pred[d] = cycle[(i - 1) % k]
        return succ, pred

    def succ(self, dart: int) -> int:
        return self._neighbours[0][dart]

    def pred(self, dart: int) -> int:
        return self._neighbours[1][dart]

    def with_twists(self, twists: EdgeSubset) -> "RibbonStructure":
        return RibbonStructure(self.graph, self.rotation, twists)

    def key(self) -> Tuple[Tuple[Tuple[int, ...], ...], str]:
        """Sort key: (rotation encoding, twist bitstring)."""
        return rotation_key(self.rotation), bitstring(self.twists, self.m)

    def describe(self) -> str:
        cycles = " ".join("(" + " ".join(map(str, c)) + ")" for c in self.rotation)
        return f"rotation {cycles} twists {bitstring(self.twists, self.m)}"


def default_rotation(g: Multigraph) -> Rotation:
    """Darts at each vertex in increasing order."""
    return tuple(g.darts_at(v) for v in range(g.n))


def new_ribbon(g: Multigraph, rotation: Optional[Sequence[Sequence[int]]] = None,
               twists: EdgeSubset = 0) -> RibbonStructure:
    """Build a ribbon structure, defaulting to the sorted-dart rotation."""
    if rotation is None:
        rot = default_rotation(g)
    else:
        rot = tuple(tuple(int(d) for d in cycle) for cycle in rotation)
    return RibbonStructure(g, rot, twists)


def _step(r: RibbonStructure, dart: int, side: int) -> SignedDart:
    other = mate(dart)
    side ^= r.twist(edge_of(dart))
    if side == 0:
        return r.succ(other), 0
    return r.pred(other), 1


def reverse_state(r: RibbonStructure, dart: int, side: int) -> SignedDart:
    """The signed dart running the same band side the other way."""
    return mate(dart), side ^ r.twist(edge_of(dart)) ^ 1


def _orbits(r: RibbonStructure) -> List[List[SignedDart]]:
    visited = [False] * (4 * r.m)
    orbits = []
    for start in range(4 * r.m):
        if visited[start]:
            continue
        walk = []
        dart, side = start >> 1, start & 1
        while not visited[2 * dart + side]:
            visited[2 * dart + side] = True
            walk.append((dart, side))
            dart, side = _step(r, dart, side)
        orbits.append(walk)
    return orbits


def face_count(r: RibbonStructure) -> int:
    """Number of boundary components b, without materialising walks."""
    if r.m == 0:
        return r.n
    step_succ, step_pred = r._neighbours
    twists = r.twists
    visited = bytearray(4 * r.m)
    orbits = 0
    for start in range(4 * r.m):
        if visited[start]:
            continue
        orbits += 1
        state = start
        while not visited[state]:
            visited[state] = 1
            dart = state >> 1
            side = (state & 1) ^ (twists >> (dart >> 1) & 1)
            other = dart ^ 1
            state = 2 * step_succ[other] if side == 0 else 2 * step_pred[other] + 1
    if orbits % 2:
        raise InvariantViolation(f"Odd number of boundary orbits ({orbits})")
    return orbits // 2


@dataclass(frozen=True)
class BoundaryReport:
    """
    Boundary walks of a ribbon structure.

    Attributes:
        components: All walks; each walk is a cyclic sequence of signed darts
        representatives: Index of one walk per reversed pair
        directions: Per edge, SAME if both traversals within the
            representatives depart from the same dart, else OPPOSITE
    """
    components: Tuple[Tuple[SignedDart, ...], ...]
    representatives: Tuple[int, ...]
    directions: Tuple[str, ...]

    @property
    def b(self) -> int:
        return max(len(self.representatives), 1)

    def walks(self) -> List[Tuple[SignedDart, ...]]:
        return [self.components[i] for i in self.representatives]


def boundary(r: RibbonStructure) -> BoundaryReport:
    """
    Trace the boundary of a connected ribbon structure.

    From (d, side) the walk crosses d's band to its mate, switching side when
    the band is twisted, and continues with the rotation successor of the
    mate on side + or its predecessor on side -.

    Returns:
        BoundaryReport with b = (number of walks) / 2
    """
    if not r.graph.is_connected:
        raise GraphError("boundary requires a connected graph")
    orbits = _orbits(r)
    where: Dict[SignedDart, int] = {}
    for i, walk in enumerate(orbits):
        for state in walk:
            where[state] = i
    paired = [-1] * len(orbits)
    representatives = []
    for i, walk in enumerate(orbits):
        partner = where[reverse_state(r, *walk[0])]
        if partner == i:
            raise InvariantViolation(f"Boundary walk {i} is its own reverse")
        if paired[i] < 0:
            representatives.append(i)
            paired[i], paired[partner] = partner, i
    departures: List[List[int]] = [[] for _ in range(r.m)]
    for i in representatives:
        for dart, _ in orbits[i]:
            departures[edge_of(dart)].append(dart)
    directions = []
    for e, darts in enumerate(departures):
        if len(darts) != 2:
            raise InvariantViolation(f"Edge {e} traversed {len(darts)} times by the boundary")
        directions.append(SAME if darts[0] == darts[1] else OPPOSITE)
    return BoundaryReport(tuple(tuple(w) for w in orbits), tuple(representatives), tuple(directions))


def is_strip(r: RibbonStructure) -> bool:
    """True iff the structure has exactly one boundary circle."""
    if not r.graph.is_connected:
        raise GraphError("is_strip requires a connected graph")
    return face_count(r) == 1


def orientation_signs(r: RibbonStructure) -> Optional[Tuple[int, ...]]:
    """
    Vertex signs o with twist(e) = o(u) xor o(v) for every edge.

    Returns:
        The assignment with o(0) = 0, or None when none exists
    """
    g = r.graph
    if not g.is_connected:
        raise GraphError("orientation requires a connected graph")
    if r.twists & g.loops:
        return None
    sign = [-1] * g.n
    sign[0] = 0
    stack = [0]
    while stack:
        v = stack.pop()
        for d in g.darts_at(v):
            w = g.endpoint(mate(d))
            wanted = sign[v] ^ r.twist(edge_of(d))
            if sign[w] < 0:
                sign[w] = wanted
                stack.append(w)
            elif sign[w] != wanted:
                return None
    return tuple(sign)


def is_orientable(r: RibbonStructure) -> bool:
    """True iff the twist mask lies in the cut space."""
    return orientation_signs(r) is not None


def cycle_parity(r: RibbonStructure, c: CycleVector) -> int:
    """
    XOR of the twist bits over a cycle vector.

    Raises:
        CycleSpaceError: If c is not a cycle vector of the graph
    """
    if not is_cycle_vector(r.graph, c):
        raise CycleSpaceError(f"{bitstring(c, r.m)} is not a cycle vector")
    return bin(c & r.twists).count("1") & 1


def is_orientable_by_parity(r: RibbonStructure) -> bool:
    """Orientability as even twist parity on every fundamental cycle."""
    return all(cycle_parity(r, c) == 0 for c in fundamental_basis(r.graph).cycles)


class ClosedSurface(NamedTuple):
    """Closed surface obtained by capping each boundary circle with a disc."""
    chi: int
    orientable: bool
    count: int  # genus if orientable, crosscap number otherwise

    def name(self) -> str:
        if self.orientable:
            return "sphere" if self.count == 0 else f"orientable genus {self.count}"
        return f"non-orientable crosscap {self.count}"


def closed_euler(r: RibbonStructure) -> ClosedSurface:
    """
    Euler characteristic and genus or crosscap number of the capped surface.

    Raises:
        InvariantViolation: If chi is inconsistent with the orientability verdict
    """
    b = face_count(r)
    chi = r.n - r.m + b
    orientable = is_orientable(r)
    if chi > 2:
        raise InvariantViolation(f"Euler characteristic {chi} exceeds 2")
    if orientable:
        if chi % 2:
            raise InvariantViolation(f"Orientable surface with odd Euler characteristic {chi}")
        return ClosedSurface(chi, True, (2 - chi) // 2)
    if chi == 2:
        raise InvariantViolation("Non-orientable surface with Euler characteristic 2")
    return ClosedSurface(chi, False, 2 - chi)


def same_direction_edges(r: RibbonStructure) -> EdgeSubset:
    """
    Edges traversed twice from the same dart by the boundary of a strip.

    Raises:
        RibbonError: If r is not a strip
    """
    report = boundary(r)
    if report.b != 1:
        raise RibbonError(f"same_direction_edges needs a strip, structure has {report.b} boundary components")
    mask = 0
    for e, verdict in enumerate(report.directions):
        if verdict == SAME:
            mask |= 1 << e
    return mask


def vertex_flip(r: RibbonStructure, v: int) -> RibbonStructure:
    """Reverse the rotation at v and toggle the twist of each non-loop edge at v."""
    g = r.graph
    rotation = list(r.rotation)
    rotation[v] = tuple(reversed(r.rotation[v]))
    twists = r.twists
    for d in g.darts_at(v):
        e = edge_of(d)
        if not g.is_loop(e):
            twists ^= 1 << e
    return RibbonStructure(g, tuple(rotation), twists)


def flip_vertices(r: RibbonStructure, vertices) -> RibbonStructure:
    for v in vertices:
        r = vertex_flip(r, v)
    return r


def mirror(r: RibbonStructure) -> RibbonStructure:
    """Flip every vertex: all rotations reversed, twists unchanged."""
    return RibbonStructure(r.graph, tuple(tuple(reversed(c)) for c in r.rotation), r.twists)


def untwist(r: RibbonStructure) -> RibbonStructure:
    """
    Flip the negative vertices of an orientable structure so no edge is twisted.

    Raises:
        RibbonError: If r is not orientable
    """
    signs = orientation_signs(r)
    if signs is None:
        raise RibbonError("Only orientable structures can be untwisted")
    result = flip_vertices(r, [v for v, s in enumerate(signs) if s])
    if result.twists:
        raise InvariantViolation(f"Flipping by orientation signs left twists {bitstring(result.twists, r.m)}")
    return result


def contract_edge_strip(r: RibbonStructure, e: int) -> RibbonStructure:
    """
    Contract a non-loop edge band into its endpoints.

    A twisted band is first untwisted by flipping its smaller endpoint. The
    merged vertex takes the smaller index, later vertices shift down by one
    and edges after e are renumbered.

    Raises:
        RibbonError: If e is a loop
    """
    g = r.graph
    if not 0 <= e < g.m:
        raise RibbonError(f"Edge {e} does not exist")
    if g.is_loop(e):
        raise RibbonError(f"Edge {e} is a loop and cannot be contracted")
    u, v = g.edges[e]
    if r.twist(e):
        r = vertex_flip(r, min(u, v))

    def after(cycle: Tuple[int, ...], dart: int) -> List[int]:
        i = cycle.index(dart)
        return list(cycle[i + 1:] + cycle[:i])

    merged = after(r.rotation[u], 2 * e) + after(r.rotation[v], 2 * e + 1)
    keep, gone = min(u, v), max(u, v)

    def vertex(x: int) -> int:
        if x == gone:
            x = keep
        return x - 1 if x > gone else x

    def dart(d: int) -> int:
        k = edge_of(d)
        return d - 2 if k > e else d

    edges = [(vertex(a), vertex(b)) for k, (a, b) in enumerate(g.edges) if k != e]
    rotation: List[Tuple[int, ...]] = []
    for x in range(g.n):
        if x == gone:
            continue
        cycle = merged if x == keep else list(r.rotation[x])
        rotation.append(tuple(dart(d) for d in cycle))
    low = r.twists & ((1 << e) - 1)
    twists = low | (r.twists >> (e + 1)) << e
    return RibbonStructure(new_graph(g.n - 1, edges), tuple(rotation), twists)


def relabel(r: RibbonStructure, dart_perm: Sequence[int]) -> RibbonStructure:
    """
    Transport a structure along a dart automorphism of its graph.

    The cycle at v moves to the vertex carrying the images of its darts;
    the twist of edge e moves to the image edge.
    """
    g = r.graph
    rotation: List[Tuple[int, ...]] = [()] * g.n
    for cycle in r.rotation:
        if not cycle:
            continue
        image = tuple(dart_perm[d] for d in cycle)
        rotation[g.endpoint(image[0])] = image
    twists = 0
    for e in subset_edges(r.twists):
        twists |= 1 << edge_of(dart_perm[2 * e])
    return RibbonStructure(g, tuple(rotation), twists)


def rotation_count(g: Multigraph, modulo_reversal: bool = True) -> int:
    """Number of rotation systems, optionally counting each vertex's reversal once."""
    total = 1
    for v in range(g.n):
        d = g.degree(v)
        orders = 1
        for k in range(2, d):
            orders *= k
        if modulo_reversal and d >= 3:
            orders //= 2
        total *= orders
    return total


def _vertex_orders(darts: Tuple[int, ...], modulo_reversal: bool) -> List[Tuple[int, ...]]:
    if len(darts) <= 1:
        return [darts]
    first, rest = darts[0], darts[1:]
    orders = []
    for perm in itertools.permutations(rest):
        if modulo_reversal and len(perm) >= 2 and perm[0] > perm[-1]:
            continue
        orders.append((first,) + perm)
    return orders


def rotation_systems(g: Multigraph, modulo_reversal: bool = True) -> Iterator[Rotation]:
    """
    All rotation systems of g in a canonical order.

    Each vertex's cycle starts with its smallest dart; with modulo_reversal
    only one of each pair of mutually reversed cycles is produced.
    """
    choices = [_vertex_orders(g.darts_at(v), modulo_reversal) for v in range(g.n)]
    for rotation in itertools.product(*choices):
        yield tuple(rotation)


def disjoint_union(r1: RibbonStructure, r2: RibbonStructure) -> RibbonStructure:
    """Place r2 beside r1; r2's vertices, edges and darts are shifted after r1's."""
    n1, m1 = r1.n, r1.m
    edges = list(r1.graph.edges) + [(u + n1, v + n1) for u, v in r2.graph.edges]
    rotation = r1.rotation + tuple(tuple(d + 2 * m1 for d in c) for c in r2.rotation)
    g = new_graph(n1 + r2.n, edges)
    return RibbonStructure(g, rotation, r1.twists | r2.twists << m1)


def _insert_after(cycle: Tuple[int, ...], anchor: Optional[int], dart: int) -> Tuple[int, ...]:
    if anchor is None or not cycle:
        return cycle + (dart,)
    i = cycle.index(anchor)
    return cycle[:i + 1] + (dart,) + cycle[i + 1:]


def add_edge_strip(r: RibbonStructure, u: int, v: int, twist: int = 0,
                   after_u: Optional[int] = None, after_v: Optional[int] = None) -> RibbonStructure:
    """
    Attach a new band from u to v.

    The new edge gets index m with darts 2m (at u) and 2m+1 (at v), inserted
    after the given anchor darts or at the end of each cycle. For a new loop
    without after_v, dart 2m+1 follows 2m directly.
    """
    g = r.graph
    m = g.m
    if u == v and after_v is None:
        after_v = 2 * m
    edges = list(g.edges) + [(u, v)]
    rotation = list(r.rotation)
    rotation[u] = _insert_after(rotation[u], after_u, 2 * m)
    rotation[v] = _insert_after(rotation[v], after_v, 2 * m + 1)
    return RibbonStructure(new_graph(g.n, edges), tuple(rotation), r.twists | (twist & 1) << m)


def merge_vertices(r: RibbonStructure, u: int, v: int) -> RibbonStructure:
    """
    Glue the discs of u and v into one vertex (index min(u, v)).

    The merged cycle is u's cycle followed by v's; on untwisted structures
    this is a one-point union and joins two boundary circles into one.
    """
    if u == v:
        return r
    g = r.graph
    keep, gone = min(u, v), max(u, v)

    def vertex(x: int) -> int:
        if x == gone:
            x = keep
        return x - 1 if x > gone else x

    merged = r.rotation[keep] + r.rotation[gone]
    rotation = [merged if x == keep else r.rotation[x] for x in range(g.n) if x != gone]
    edges = [(vertex(a), vertex(b)) for a, b in g.edges]
    return RibbonStructure(new_graph(g.n - 1, edges), tuple(rotation), r.twists)


def restrict_to_cyclic_part(r: RibbonStructure, part: CyclicPart) -> RibbonStructure:
    """
    Carry a structure on G down to its cyclic part.

    Cyclic orders are inherited by filtering; each reduced edge takes the
    XOR of the twists along the path it absorbed.
    """
    origin = {d: i for i, d in enumerate(part.dart_origin)}
    rotation = []
    for x in part.vertex_origin:
        rotation.append(tuple(origin[d] for d in r.rotation[x] if d in origin))
    twists = 0
    for k, path in enumerate(part.edge_origin):
        parity = 0
        for e in path:
            parity ^= r.twist(e)
        twists |= parity << k
    return RibbonStructure(part.graph, tuple(rotation), twists)


def lift_to_graph(r: RibbonStructure, part: CyclicPart, g: Multigraph) -> RibbonStructure:
    """
    Rebuild a structure on G from one on its cyclic part.

    Subdivision vertices and pendant trees get untwisted bands; the twist
    of a reduced edge goes to the first original edge of its path. Darts
    of pruned edges are appended to each cycle in increasing order.
    """
    placed: List[List[int]] = [[] for _ in range(g.n)]
    for k, x in enumerate(part.vertex_origin):
        placed[x] = [part.dart_origin[d] for d in r.rotation[k]]
    twists = 0
    for k, path in enumerate(part.edge_origin):
        twists |= r.twist(k) << path[0]
    seen = {d for cycle in placed for d in cycle}
    for darts in part.dart_paths:
        for i in range(len(darts) - 1):
            arriving, leaving = mate(darts[i]), darts[i + 1]
            y = g.endpoint(leaving)
            placed[y].extend([arriving, leaving])
            seen.update((arriving, leaving))
    for x in range(g.n):
        placed[x].extend(d for d in g.darts_at(x) if d not in seen)
    return RibbonStructure(g, tuple(tuple(c) for c in placed), twists)


def transport(r: RibbonStructure, target: Multigraph, vertex_map: Sequence[int],
              edge_map: Sequence[int]) -> RibbonStructure:
    """
    Move a structure onto a graph with renumbered vertices and edges.

    Edge e of r becomes edge edge_map[e] of target, whose endpoints must be
    the images of e's endpoints; a dart keeps its vertex. Vertices of target
    not hit by vertex_map get an empty cycle.

    Raises:
        RibbonError: If the maps do not preserve endpoints
    """
    g = r.graph
    dart_map = [0] * (2 * g.m)
    for e, (u, v) in enumerate(g.edges):
        image = edge_map[e]
        a, b = target.edges[image]
        if (vertex_map[u], vertex_map[v]) == (a, b):
            dart_map[2 * e], dart_map[2 * e + 1] = 2 * image, 2 * image + 1
        elif (vertex_map[v], vertex_map[u]) == (a, b):
            dart_map[2 * e], dart_map[2 * e + 1] = 2 * image + 1, 2 * image
        else:
            raise RibbonError(f"Edge {e} does not map onto edge {image} of the target")
    rotation: List[Tuple[int, ...]] = [()] * target.n
    for v, cycle in enumerate(r.rotation):
        rotation[vertex_map[v]] = tuple(dart_map[d] for d in cycle)
    twists = 0
    for e in subset_edges(r.twists):
        twists |= 1 << edge_map[e]
    return RibbonStructure(target, tuple(rotation), twists)
