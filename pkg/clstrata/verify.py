"""
Acceptance harness: recomputes the published counts and structural claims.

Every check yields one or more rows of expected versus computed values.
Sweeps run over reduced graphs (connected, minimum degree three, plus the
one-loop graph): every connected graph's cyclic part is one of them.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .catalog import census_entries, load_entry
from .cl_structures import classify, complement_effect, short_cycle_violations
from .cycle_space import cycles_of_length
from .multigraph import (
    BudgetExceededError,
    Multigraph,
    are_isomorphic,
    bouquet,
    bridges,
    cyclic_part,
    enumerate_cubic_q4,
    enumerate_multigraphs,
    new_graph,
    path_graph,
)
from .realizability import (
    NO,
    UNKNOWN,
    YES,
    ConstructionError,
    Part,
    compose_tree,
    connect_two,
    decide,
    join_trees,
    link_arrangements,
    oracle_orientably_realizable,
)
from .ribbon import (
    InvariantViolation,
    RibbonStructure,
    closed_euler,
    face_count,
    is_orientable,
    is_orientable_by_parity,
    is_strip,
    new_ribbon,
    rotation_count,
    rotation_systems,
    same_direction_edges,
    vertex_flip,
)

logger = logging.getLogger(__name__)

PUBLISHED_CENSUS = 7
PUBLISHED_CLASS_COUNTS = (1, 0, 5, 4, 4, 6, 2)
PUBLISHED_TOTAL = 22
STRUCTURE_SWEEP_BUDGET = 1 << 14
FULL_MAX_EDGES = 7
FULL_SWEEP_EDGES = 8


@dataclass
class Row:
    criterion: str
    expected: str
    computed: str
    passed: bool


def reduced_graphs(max_edges: int) -> Iterator[Multigraph]:
    """Connected graphs with minimum degree 3 and at most max_edges edges, plus one loop."""
    yield bouquet(1)
    for m in range(1, max_edges + 1):
        for n in range(1, 2 * m // 3 + 1):
            yield from enumerate_multigraphs(n, m, loops=True, min_degree=3)


def _within_sweep_budget(g: Multigraph, budget: int = STRUCTURE_SWEEP_BUDGET) -> bool:
    return rotation_count(g) << g.m <= budget


def _structures(g: Multigraph) -> Iterator[RibbonStructure]:
    for rotation in rotation_systems(g):
        base = RibbonStructure(g, rotation, 0)
        for s in range(1 << g.m):
            yield base.with_twists(s)


def check_census() -> List[Row]:
    graphs = enumerate_cubic_q4()
    distinct = all(not are_isomorphic(a, b) for a, b in itertools.combinations(graphs, 2))
    entries = census_entries()
    matched = all(any(are_isomorphic(g, e.graph) for e in entries) for g in graphs) and len(entries) == len(graphs)
    return [
        Row("cubic q=4 census size", str(PUBLISHED_CENSUS), str(len(graphs)), len(graphs) == PUBLISHED_CENSUS),
        Row("census pairwise non-isomorphic", "True", str(distinct), distinct),
        Row("census matches stored catalog", "True", str(matched), matched),
    ]


def check_classification() -> List[Row]:
    counts = {}
    for entry in census_entries():
        report = classify(entry.graph, entry.rotation, name=entry.name)
        counts[entry.name] = len(report.orientable_classes)
    computed = tuple(sorted(counts.values()))
    expected = tuple(sorted(PUBLISHED_CLASS_COUNTS))
    total = sum(counts.values())
    detail = ", ".join(f"{name}={count}" for name, count in counts.items())
    return [
        Row("orientable class multiset", str(list(expected)), f"{list(computed)} ({detail})", computed == expected),
        Row("orientable class total", str(PUBLISHED_TOTAL), str(total), total == PUBLISHED_TOTAL),
    ]


def check_anchors() -> List[Row]:
    rows = []
    entries = census_entries()
    with_bridge = [e for e in entries if bridges(e.graph)]
    bridge_entry = load_entry("bridge")
    bridge_classes = len(classify(bridge_entry.graph, bridge_entry.rotation).orientable_classes)
    rows.append(Row(
        "unique bridged census graph has 1 class",
        "bridge: 1",
        f"{[e.name for e in with_bridge]}: {bridge_classes}",
        [e.name for e in with_bridge] == ["bridge"] and bridge_classes == 1,
    ))
    three_digons = [e for e in entries if len(cycles_of_length(e.graph, 2)) == 3]
    necklace = load_entry("necklace")
    necklace_classes = len(classify(necklace.graph, necklace.rotation).orientable_classes)
    digon_edges = 0
    for cycle in cycles_of_length(necklace.graph, 2):
        digon_edges |= cycle
    b = face_count(necklace.structure.with_twists(digon_edges))
    rows.append(Row(
        "unique three-digon graph has 0 classes",
        "necklace: 0",
        f"{[e.name for e in three_digons]}: {necklace_classes}",
        [e.name for e in three_digons] == ["necklace"] and necklace_classes == 0,
    ))
    rows.append(Row("necklace with all digon edges twisted", "b=3", f"b={b}", b == 3))
    return rows


def check_petersen() -> List[Row]:
    entry = load_entry("petersen")
    verdict = oracle_orientably_realizable(entry.graph).verdict
    classes = len(classify(entry.graph, entry.rotation, name="petersen").orientable_classes)
    return [
        Row("Petersen oracle", YES, verdict, verdict == YES),
        Row("Petersen orientable classes", ">= 2", str(classes), classes >= 2),
    ]


def check_torus() -> List[Row]:
    torus = load_entry("torus").structure
    surface = closed_euler(torus)
    ok = is_strip(torus) and is_orientable(torus) and surface.orientable and surface.count == 1
    return [Row("torus bouquet", "strip, orientable, genus 1",
                f"strip={is_strip(torus)}, orientable={is_orientable(torus)}, genus={surface.count}", ok)]


def _has_loop_at_degree_three(g: Multigraph) -> bool:
    h = cyclic_part(g).graph
    return any(h.is_loop(e) and h.degree(h.edges[e][0]) == 3 for e in range(h.m))


def _oracle_verdict(g: Multigraph) -> Optional[str]:
    """The oracle verdict, or None when g is beyond the oracle budget."""
    try:
        return oracle_orientably_realizable(g).verdict
    except BudgetExceededError as exc:
        logger.debug(f"Sweep skips edges {g.edges}: {exc}")
        return None


def check_loop_obstruction(max_edges: int) -> List[Row]:
    checked, skipped, bad = 0, 0, []
    for g in reduced_graphs(max_edges):
        if not _has_loop_at_degree_three(g):
            continue
        verdict = _oracle_verdict(g)
        if verdict is None:
            skipped += 1
            continue
        checked += 1
        if verdict != NO:
            bad.append(g.edges)
    return [Row(f"loop at degree 3 never realizable (m <= {max_edges}, {skipped} over budget)",
                "0 counterexamples", f"{len(bad)} of {checked}", not bad)]


def check_structure_sweep(max_edges: int) -> List[Row]:
    """Orientability routes, Euler bookkeeping and bridge traversal over all small structures."""
    mismatches = euler = bridge_hits = structures = skipped = 0
    for g in reduced_graphs(max_edges):
        if not _within_sweep_budget(g):
            skipped += 1
            continue
        bridge_mask = bridges(g)
        for r in _structures(g):
            structures += 1
            signs = is_orientable(r)
            if signs != is_orientable_by_parity(r):
                mismatches += 1
            b = face_count(r)
            try:
                surface = closed_euler(r)
            except InvariantViolation:
                euler += 1
            else:
                if surface.chi != r.n - r.m + b or surface.orientable != signs:
                    euler += 1
            if b == 1:
                same = same_direction_edges(r)
                if (same == 0) != signs:
                    mismatches += 1
                if same & bridge_mask:
                    bridge_hits += 1
    label = f"m <= {max_edges}, {structures} structures, {skipped} graphs over budget"
    return [
        Row(f"orientability routes agree ({label})", "0 mismatches", str(mismatches), mismatches == 0),
        Row(f"Euler bookkeeping ({label})", "0 violations", str(euler), euler == 0),
        Row(f"bridges never same-direction ({label})", "0 violations", str(bridge_hits), bridge_hits == 0),
    ]


def check_genus_two() -> List[Row]:
    wrong = 0
    for entry in census_entries():
        for c in classify(entry.graph, entry.rotation).classes:
            if c.surface.chi != -2:
                wrong += 1
    return [Row("census strips have chi = -2 (genus 2 / crosscap 4)", "0 violations", str(wrong), wrong == 0)]


def check_short_cycles() -> List[Row]:
    violations = []
    for entry in census_entries():
        if "planar" not in entry.tags:
            continue
        report = classify(entry.graph, entry.rotation, name=entry.name)
        violations.extend((entry.name,) + v for v in short_cycle_violations(report))
    return [Row("short-cycle twist pattern on planar census graphs", "0 violations",
                str(len(violations)), not violations)]


def check_complement() -> List[Row]:
    rows = []
    for entry in census_entries():
        without, with_complement = complement_effect(entry.graph, entry.rotation)
        rows.append(Row(f"complement generator on {entry.name} (informational)", "recorded",
                        f"{without} -> {with_complement}", True))
    return rows


def _strip_pool() -> List[RibbonStructure]:
    theta = load_entry("theta").structure
    return [
        new_ribbon(new_graph(1, [])),
        new_ribbon(new_graph(2, [(0, 1)])),
        theta,
        vertex_flip(theta, 0),
        load_entry("torus").structure,
        new_ribbon(path_graph(3)),
        compose_tree([Part((0, 1), theta), Part((1, 2), vertex_flip(theta, 1))]),
    ]


def _random_tree(rng: np.random.Generator, size: int) -> Multigraph:
    return new_graph(size, [(int(rng.integers(0, v)), v) for v in range(1, size)])


def _random_compose(rng: np.random.Generator, pool: Sequence[RibbonStructure]) -> RibbonStructure:
    parts: List[Part] = []
    owners: dict = {}
    next_label = 0
    for _ in range(int(rng.integers(1, 5))):
        witness = pool[int(rng.integers(0, len(pool)))]
        private = sorted(v for v, count in owners.items() if count == 1)
        if parts and not private:
            break
        shared_at = int(rng.integers(0, witness.n)) if parts else -1
        labels = []
        for x in range(witness.n):
            if x == shared_at:
                labels.append(private[int(rng.integers(0, len(private)))])
            else:
                labels.append(next_label)
                next_label += 1
        for v in labels:
            owners[v] = owners.get(v, 0) + 1
        parts.append(Part(tuple(labels), witness))
    return compose_tree(parts)


def _random_connect(rng: np.random.Generator, pool: Sequence[RibbonStructure]) -> RibbonStructure:
    r1 = pool[int(rng.integers(0, len(pool)))]
    r2 = pool[int(rng.integers(0, len(pool)))]
    # Three links need three distinct endpoints on each side
    k = int(rng.choice([1, 3])) if min(r1.n, r2.n) >= 3 else 1
    ends1 = rng.choice(r1.n, size=k, replace=False)
    ends2 = rng.choice(r2.n, size=k, replace=False)
    return connect_two(r1, r2, [(int(u), int(v)) for u, v in zip(ends1, ends2)])


def _random_join(rng: np.random.Generator) -> RibbonStructure:
    t1, t2 = _random_tree(rng, int(rng.integers(1, 4))), _random_tree(rng, int(rng.integers(1, 4)))
    k = int(rng.choice([1, 3, 5]))
    links = [(int(rng.integers(0, t1.n)), int(rng.integers(0, t2.n))) for _ in range(k)]
    return join_trees(t1, t2, links)


def check_constructors(seed: int, samples: int) -> List[Row]:
    rng = np.random.default_rng(seed)
    pool = _strip_pool()
    makers: List[Callable[[], RibbonStructure]] = [
        lambda: _random_compose(rng, pool),
        lambda: _random_connect(rng, pool),
        lambda: _random_join(rng),
    ]
    failures = 0
    for i in range(samples):
        try:
            r = makers[i % len(makers)]()
            if not (is_strip(r) and is_orientable(r)):
                failures += 1
        except ConstructionError as exc:
            logger.error(f"Constructor sample {i} failed: {exc}")
            failures += 1
    double = load_entry("double-link").structure
    torus = load_entry("torus").structure
    strips = sum(
        face_count(r) == 1
        for twists in ((1, 1), (0, 0))
        for r in link_arrangements(torus, torus, [(0, 0), (0, 0)], twists)
    )
    double_b = face_count(double)
    return [
        Row(f"constructors sound ({samples} samples, seed {seed})", "0 failures", str(failures), failures == 0),
        Row("two links between torus strips", "b >= 2, no strip arrangement",
            f"b={double_b}, strip arrangements={strips}", double_b >= 2 and strips == 0),
    ]


def check_criteria_vs_oracle(max_edges: int) -> List[Row]:
    contradictions, decided, graphs, skipped = 0, 0, 0, 0
    for g in reduced_graphs(max_edges):
        truth = _oracle_verdict(g)
        if truth is None:
            skipped += 1
            continue
        graphs += 1
        verdict = decide(g, use_oracle=False).verdict
        if verdict != UNKNOWN:
            decided += 1
            if verdict != truth:
                contradictions += 1
                logger.error(f"Criteria say {verdict}, oracle says {truth} for edges {g.edges}")
    return [Row(f"criteria agree with oracle (m <= {max_edges}, {graphs} graphs, {decided} decided, "
                f"{skipped} over budget)",
                "0 contradictions", str(contradictions), contradictions == 0)]


def run_acceptance(max_edges: int = 6, seed: int = 0, samples: int = 200,
                   sweep_edges: Optional[int] = None) -> List[Row]:
    """
    Run every check.

    The oracle sweeps cover reduced graphs with at most max_edges edges and
    the structure sweep those with at most sweep_edges (default max_edges).
    Graphs beyond a sweep budget are counted in the row, not failed.
    """
    if sweep_edges is None:
        sweep_edges = max_edges
    checks: List[Tuple[str, Callable[[], List[Row]]]] = [
        ("census", check_census),
        ("classification", check_classification),
        ("anchors", check_anchors),
        ("petersen", check_petersen),
        ("torus", check_torus),
        ("loop obstruction", lambda: check_loop_obstruction(max_edges)),
        ("structure sweep", lambda: check_structure_sweep(sweep_edges)),
        ("genus two", check_genus_two),
        ("short cycles", check_short_cycles),
        ("complement", check_complement),
        ("constructors", lambda: check_constructors(seed, samples)),
        ("criteria vs oracle", lambda: check_criteria_vs_oracle(max_edges)),
    ]
    rows: List[Row] = []
    for name, check in checks:
        logger.info(f"Running acceptance check: {name}")
        rows.extend(check())
    return rows


def rows_to_dataframe(rows: Sequence[Row]) -> pd.DataFrame:
    frame = pd.DataFrame([row.__dict__ for row in rows], columns=["criterion", "expected", "computed", "passed"])
    frame["status"] = frame["passed"].map({True: "PASS", False: "FAIL"})
    return frame
