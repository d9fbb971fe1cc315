"""
Enumeration and classification of CL-structures.

A CL-structure on a graph is a twist assignment whose ribbon structure is a
strip. Structures are compared up to a group generated by vertex flips,
graph automorphisms and, optionally, complementing the twists on one
2-connected component.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import pandas as pd

from .cycle_space import cycles_of_length, vertex_cut
from .multigraph import (
    BudgetExceededError,
    EdgeSubset,
    GraphError,
    Multigraph,
    bitstring,
    cycle_rank,
    dart_automorphisms,
    edge_of,
    subset_edges,
    two_connected_components,
)
from .parallel import chunk_ranges, ordered_map, worker_count
from .ribbon import (
    ClosedSurface,
    RibbonStructure,
    Rotation,
    closed_euler,
    face_count,
    is_orientable,
    relabel,
    rotation_key,
    vertex_flip,
)

logger = logging.getLogger(__name__)

FLIPS = "flips"
AUTOMORPHISMS = "auto"
COMPLEMENT = "complement"
ALL_GENERATORS = (FLIPS, AUTOMORPHISMS, COMPLEMENT)
FLIPS_AND_AUTO = (FLIPS, AUTOMORPHISMS)
DEFAULT_GENERATORS = ALL_GENERATORS

TWIST_SCAN_EDGE_BUDGET = 24
ORBIT_BUDGET = 1 << 20


def parse_generators(text: str) -> Tuple[str, ...]:
    """Parse a comma-separated generator list such as ``flips,auto``."""
    names = {part.strip() for part in text.split(",") if part.strip()}
    unknown = sorted(names - set(ALL_GENERATORS))
    if unknown:
        raise ValueError(f"Unknown generators {unknown}; choose from {', '.join(ALL_GENERATORS)}")
    return tuple(x for x in ALL_GENERATORS if x in names)


def _scan_chunk(task: Tuple[Multigraph, Rotation, int, int]) -> List[EdgeSubset]:
    g, rotation, start, stop = task
    base = RibbonStructure(g, rotation, 0)
    return [s for s in range(start, stop) if face_count(base.with_twists(s)) == 1]


def enumerate_strips(g: Multigraph, rotation: Rotation) -> List[EdgeSubset]:
    """
    Twist assignments over a fixed rotation whose structure is a strip.

    Args:
        g: A connected multigraph with at most 24 edges
        rotation: Rotation system of g

    Returns:
        Strip twist masks in increasing numeric order

    Raises:
        BudgetExceededError: If 2^m assignments exceed the scan budget
    """
    if not g.is_connected:
        raise GraphError("enumerate_strips requires a connected graph")
    if g.m > TWIST_SCAN_EDGE_BUDGET:
        raise BudgetExceededError(f"2^{g.m} twist assignments exceed the scan budget (m <= {TWIST_SCAN_EDGE_BUDGET})")
    RibbonStructure(g, rotation, 0)
    total = 1 << g.m
    tasks = [(g, rotation, start, stop) for start, stop in chunk_ranges(total, 4 * worker_count())]
    strips = [s for chunk in ordered_map(_scan_chunk, tasks) for s in chunk]
    logger.debug(f"Scanned {total} twist assignments, {len(strips)} strips")
    return strips


def _component_complements(g: Multigraph) -> List[EdgeSubset]:
    return list(two_connected_components(g))


def equivalence_orbit(r: RibbonStructure, generators: Sequence[str] = ALL_GENERATORS) -> Set[RibbonStructure]:
    """
    Closure of a structure under the chosen generators.

    Structures are compared with cyclic orders normalised to start at their
    smallest dart, so rotations equal as cyclic sequences coincide.

    Raises:
        BudgetExceededError: If the orbit grows beyond ORBIT_BUDGET
    """
    g = r.graph
    autos = dart_automorphisms(g) if AUTOMORPHISMS in generators else []
    complements = _component_complements(g) if COMPLEMENT in generators else []

    def normal(x: RibbonStructure) -> RibbonStructure:
        return RibbonStructure(g, rotation_key(x.rotation), x.twists)

    start = normal(r)
    orbit = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        images = []
        if FLIPS in generators:
            images.extend(vertex_flip(x, v) for v in range(g.n))
        images.extend(relabel(x, a) for a in autos)
        images.extend(x.with_twists(x.twists ^ c) for c in complements)
        for image in images:
            image = normal(image)
            if image not in orbit:
                orbit.add(image)
                queue.append(image)
                if len(orbit) > ORBIT_BUDGET:
                    raise BudgetExceededError(f"Orbit exceeds {ORBIT_BUDGET} structures")
    return orbit


def _cyclic_relation(image: Tuple[int, ...], target: Tuple[int, ...]) -> Optional[bool]:
    """False if image equals target cyclically, True if it equals its reverse, else None."""
    key = rotation_key((image,))[0]
    if key == rotation_key((target,))[0]:
        return False
    if key == rotation_key((tuple(reversed(target)),))[0]:
        return True
    return None


@dataclass(frozen=True)
class SliceAction:
    """A group element restricted to a fixed rotation: s -> perm(s) xor offset."""
    edge_perm: Tuple[int, ...]
    offset: EdgeSubset

    def apply(self, s: EdgeSubset) -> EdgeSubset:
        image = 0
        for e in subset_edges(s):
            image |= 1 << self.edge_perm[e]
        return image ^ self.offset


def slice_actions(g: Multigraph, rotation: Rotation,
                  generators: Sequence[str] = DEFAULT_GENERATORS) -> Tuple[List[SliceAction], List[EdgeSubset]]:
    """
    Group elements that keep the rotation fixed, acting on twist masks.

    Returns:
        (actions, kernel) where every element maps s to
        ``action.apply(s) ^ h`` for h in the span of kernel
    """
    base = RibbonStructure(g, rotation, 0)
    identity = tuple(range(g.m))
    actions = [SliceAction(identity, 0)]
    kernel: List[EdgeSubset] = []
    if FLIPS in generators:
        for v in range(g.n):
            if g.degree(v) <= 2 and vertex_cut(g, [v]):
                kernel.append(vertex_cut(g, [v]))
    if COMPLEMENT in generators:
        kernel.extend(_component_complements(g))
    if AUTOMORPHISMS in generators:
        for dperm in dart_automorphisms(g):
            image = relabel(base, dperm)
            flipped = []
            for v in range(g.n):
                relation = _cyclic_relation(image.rotation[v], rotation[v])
                if relation is None:
                    break
                if relation and g.degree(v) > 2:
                    flipped.append(v)
            else:
                if flipped and FLIPS not in generators:
                    continue
                edge_perm = tuple(edge_of(dperm[2 * e]) for e in range(g.m))
                actions.append(SliceAction(edge_perm, vertex_cut(g, flipped)))
    actions = sorted(set(actions), key=lambda a: (a.edge_perm, a.offset))
    logger.debug(f"{len(actions)} slice actions, kernel of {len(kernel)} generators")
    return actions, kernel


def _kernel_span(kernel: Sequence[EdgeSubset]) -> List[EdgeSubset]:
    members = {0}
    for k in kernel:
        members |= {x ^ k for x in members}
    return sorted(members)


def slice_orbit(s: EdgeSubset, actions: Sequence[SliceAction],
                kernel_span: Sequence[EdgeSubset]) -> FrozenSet[EdgeSubset]:
    """All twist masks equivalent to s within the fixed rotation."""
    return frozenset(a.apply(s) ^ h for a in actions for h in kernel_span)


@dataclass(frozen=True)
class CLStructureClass:
    """
    One equivalence class of CL-structures.

    Attributes:
        representative: Member on the surveyed rotation with the
            lexicographically least twist bitstring
        orbit_size: Number of strip twist masks of the class on that rotation
        orientable: Orientability shared by all members
        surface: Closed surface type shared by all members
    """
    representative: RibbonStructure
    orbit_size: int
    orientable: bool
    surface: ClosedSurface

    @property
    def twists(self) -> str:
        return bitstring(self.representative.twists, self.representative.m)


@dataclass
class ClassificationReport:
    """Result of :func:`classify`; classes are ordered by representative."""
    graph: str
    n: int
    m: int
    q: int
    rotation: Rotation
    generators: Tuple[str, ...]
    raw_strips: int
    orientable_raw: int
    classes: List[CLStructureClass] = field(default_factory=list)

    @property
    def orientable_classes(self) -> List[CLStructureClass]:
        return [c for c in self.classes if c.orientable]

    @property
    def non_orientable_classes(self) -> List[CLStructureClass]:
        return [c for c in self.classes if not c.orientable]

    def to_dict(self, include_non_orientable: bool = False) -> Dict:
        """
        The JSON report. Non-orientable classes are an optional extra key,
        placed before generators_used when requested.
        """
        data = {
            "graph": self.graph,
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "raw_strips": self.raw_strips,
            "orientable_raw": self.orientable_raw,
            "orientable_classes": [
                {"twists": c.twists, "genus": c.surface.count, "orbit_size": c.orbit_size}
                for c in self.orientable_classes
            ],
        }
        if include_non_orientable:
            data["non_orientable_classes"] = [
                {"twists": c.twists, "crosscaps": c.surface.count, "orbit_size": c.orbit_size}
                for c in self.non_orientable_classes
            ]
        data["generators_used"] = list(self.generators)
        return data

    def to_dataframe(self) -> pd.DataFrame:
        """One row per class."""
        rows = [
            {
                "twists": c.twists,
                "orientable": c.orientable,
                "chi": c.surface.chi,
                "genus_or_crosscaps": c.surface.count,
                "orbit_size": c.orbit_size,
            }
            for c in self.classes
        ]
        return pd.DataFrame(rows, columns=["twists", "orientable", "chi", "genus_or_crosscaps", "orbit_size"])


def _least_bitstring(masks: Iterable[EdgeSubset], m: int) -> EdgeSubset:
    return min(masks, key=lambda s: bitstring(s, m))


def classify(g: Multigraph, rotation: Rotation, generators: Sequence[str] = DEFAULT_GENERATORS,
             name: str = "") -> ClassificationReport:
    """
    Partition the strips over a fixed rotation into equivalence classes.

    Classes of orientable and non-orientable strips are formed separately,
    as the orbit of a strip intersected with the strips of its own
    orientability.

    Args:
        g: A connected multigraph
        rotation: The surveyed rotation system
        generators: Any of "flips", "auto", "complement"
        name: Label used in reports

    Returns:
        ClassificationReport with classes sorted by representative
    """
    generators = tuple(x for x in ALL_GENERATORS if x in generators)
    strips = enumerate_strips(g, rotation)
    base = RibbonStructure(g, rotation, 0)
    orientable = {s for s in strips if is_orientable(base.with_twists(s))}
    non_orientable = set(strips) - orientable
    actions, kernel = slice_actions(g, rotation, generators)
    span = _kernel_span(kernel)

    classes = []
    assigned: Set[EdgeSubset] = set()
    for s in strips:
        if s in assigned:
            continue
        pool = orientable if s in orientable else non_orientable
        members = slice_orbit(s, actions, span) & pool
        assigned |= members
        rep = base.with_twists(_least_bitstring(members, g.m))
        classes.append(CLStructureClass(rep, len(members), s in orientable, closed_euler(rep)))
    classes.sort(key=lambda c: (not c.orientable, c.twists))
    report = ClassificationReport(
        graph=name,
        n=g.n,
        m=g.m,
        q=cycle_rank(g),
        rotation=rotation,
        generators=generators,
        raw_strips=len(strips),
        orientable_raw=len(orientable),
        classes=classes,
    )
    logger.info(
        f"Classified {name or 'graph'}: {len(strips)} strips, {len(orientable)} orientable, "
        f"{len(report.orientable_classes)} orientable classes under {','.join(generators) or 'no generators'}"
    )
    return report


def complement_effect(g: Multigraph, rotation: Rotation) -> Tuple[int, int]:
    """Orientable class counts without and with the component complement generator."""
    without = len(classify(g, rotation, FLIPS_AND_AUTO).orientable_classes)
    with_complement = len(classify(g, rotation, ALL_GENERATORS).orientable_classes)
    return without, with_complement


def short_cycle_violations(report: ClassificationReport) -> List[Tuple[str, str]]:
    """
    Short cycles breaking the twist pattern forced on orientable strips.

    Each 2-edge cycle must have both edges twisted and each 3-edge cycle
    exactly two.

    Returns:
        (representative twists, offending cycle bitstring) pairs
    """
    if not report.orientable_classes:
        return []
    g = report.orientable_classes[0].representative.graph
    required = {2: 2, 3: 2}
    violations = []
    for length, wanted in required.items():
        for cycle in cycles_of_length(g, length):
            for c in report.orientable_classes:
                if bin(cycle & c.representative.twists).count("1") != wanted:
                    violations.append((c.twists, bitstring(cycle, g.m)))
    return violations


def verify_cor_2v(report: ClassificationReport) -> bool:
    """True iff every orientable representative has the forced short-cycle twists."""
    return not short_cycle_violations(report)
