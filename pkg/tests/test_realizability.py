"""Tests for the realizability module."""

import logging

import pytest

from clstrata import realizability
from clstrata.catalog import load_entry
from clstrata.multigraph import (
    BudgetExceededError,
    GraphError,
    bouquet,
    cycle_graph,
    new_graph,
    path_graph,
    petersen_graph,
    theta_graph,
)
from clstrata.parse import read_graph
from clstrata.realizability import (
    NO,
    UNKNOWN,
    YES,
    ConstructionError,
    KnownBadCatalog,
    Part,
    RealizabilityReport,
    compose_tree,
    connect_two,
    decide,
    join_trees,
    link_arrangements,
    oracle_orientably_realizable,
    screen_bridge_nonrealizable,
    screen_loop_deg3,
    screen_odd_q,
    three_link_twists,
)
from clstrata.ribbon import closed_euler, face_count, is_orientable, is_strip, new_ribbon

HANDCUFF = new_graph(2, [(0, 0), (0, 1), (1, 1)])


def assert_orientable_strip(r):
    assert is_strip(r)
    assert is_orientable(r)


def test_report_requires_witness():
    """Test that a positive verdict must carry an orientable strip."""
    with pytest.raises(ConstructionError):
        RealizabilityReport(YES, "test")
    with pytest.raises(ConstructionError):
        RealizabilityReport(YES, "test", load_entry("handcuff").structure)
    report = RealizabilityReport(NO, "test", None, ["note"])
    assert report.to_dict() == {"verdict": NO, "criterion": "test", "witness": None, "details": ["note"]}


def test_screens():
    """Test the cheap negative screens."""
    assert screen_odd_q(bouquet(1)).verdict == NO
    assert screen_odd_q(theta_graph()) is None
    assert screen_loop_deg3(HANDCUFF).verdict == NO
    assert screen_loop_deg3(bouquet(2)) is None
    # Both loops sit on degree-3 vertices only after the tails are pruned
    tailed = new_graph(4, [(0, 0), (0, 1), (1, 1), (0, 2), (1, 3)])
    assert screen_loop_deg3(tailed).verdict == NO


def test_oracle():
    """Test the exhaustive oracle on small graphs."""
    report = oracle_orientably_realizable(theta_graph())
    assert report.verdict == YES
    assert_orientable_strip(report.witness)
    assert oracle_orientably_realizable(HANDCUFF).verdict == NO
    assert oracle_orientably_realizable(bouquet(2)).verdict == YES
    assert oracle_orientably_realizable(bouquet(1)).verdict == NO


def test_oracle_lifts_witness():
    """Test that the oracle witness lives on the input graph."""
    g = new_graph(4, [(0, 1), (0, 1), (0, 1), (1, 2), (2, 3)])
    report = oracle_orientably_realizable(g)
    assert report.verdict == YES
    assert report.witness.graph == g
    assert_orientable_strip(report.witness)


def test_oracle_budget():
    """Test that the oracle refuses searches beyond its budget."""
    with pytest.raises(BudgetExceededError):
        oracle_orientably_realizable(petersen_graph(), budget=1 << 10)


def test_oracle_stops_at_first_witness(monkeypatch):
    """Test that a serial oracle scan stops at the first chunk holding a strip."""
    monkeypatch.delenv("CLSTRATA_THREADS", raising=False)
    scanned = []
    scan_chunk = realizability._oracle_chunk

    def recording_chunk(task):
        result = scan_chunk(task)
        scanned.append(result)
        return result

    monkeypatch.setattr(realizability, "_oracle_chunk", recording_chunk)
    report = oracle_orientably_realizable(bouquet(4))
    assert report.verdict == YES
    assert scanned
    assert scanned[-1] is not None
    assert all(result is None for result in scanned[:-1])


def test_compose_tree(theta_strip, torus_strip):
    """Test gluing strips along a tree of shared vertices."""
    r = compose_tree([Part((0, 1), theta_strip), Part((1, 2), theta_strip), Part((2,), torus_strip)])
    assert r.n == 3
    assert r.m == 3 + 3 + 2
    assert_orientable_strip(r)
    assert closed_euler(r).count == 3


def test_compose_tree_rejects_bad_parts(theta_strip, planar_theta):
    """Test the preconditions of compose_tree."""
    with pytest.raises(ConstructionError):
        compose_tree([])
    with pytest.raises(ConstructionError):
        compose_tree([Part((0, 1), planar_theta)])
    with pytest.raises(ConstructionError):
        compose_tree([Part((0, 1), theta_strip), Part((0, 1), theta_strip)])
    # Three parts pairwise sharing a vertex form a cycle
    with pytest.raises(ConstructionError):
        compose_tree([Part((0, 1), theta_strip), Part((1, 2), theta_strip), Part((2, 0), theta_strip)])
    with pytest.raises(ConstructionError):
        compose_tree([Part((0, 2), theta_strip)])


def test_three_link_twists():
    """Test that each link twist choice makes both connecting cycles even."""
    for epsilon in (0, 1):
        for epsilon_prime in (0, 1):
            t1, t2, t3 = three_link_twists(epsilon, epsilon_prime)
            assert (epsilon + t1 + t2) % 2 == 0
            assert (epsilon_prime + t2 + t3) % 2 == 0


def test_connect_two_one_link(theta_strip, torus_strip):
    """Test joining two strips by a single band."""
    r = connect_two(theta_strip, torus_strip, [(1, 0)])
    assert r.n == 3
    assert r.graph.edges[-1] == (1, 2)
    assert not r.twist(r.m - 1)
    assert_orientable_strip(r)


def test_connect_two_three_links(theta_strip):
    """Test joining two three-vertex strips by three bands with distinct ends."""
    chain = compose_tree([Part((0, 1), theta_strip), Part((1, 2), theta_strip)])
    path = new_ribbon(path_graph(3))
    r = connect_two(chain, path, [(0, 0), (1, 1), (2, 2)])
    assert r.n == 6
    assert r.m == 6 + 2 + 3
    assert [r.graph.edges[e] for e in range(8, 11)] == [(0, 3), (1, 4), (2, 5)]
    assert_orientable_strip(r)


def test_connect_two_rejects(theta_strip, planar_theta, handcuff_strip):
    """Test the preconditions of connect_two."""
    with pytest.raises(ConstructionError):
        connect_two(theta_strip, theta_strip, [(0, 0), (1, 1)])
    with pytest.raises(ConstructionError):
        connect_two(theta_strip, planar_theta, [(0, 0)])
    with pytest.raises(ConstructionError):
        connect_two(theta_strip, handcuff_strip, [(0, 0)])
    with pytest.raises(ConstructionError):
        connect_two(theta_strip, theta_strip, [(0, 5)])


def test_connect_two_rejects_shared_endpoints(theta_strip, caplog):
    """Test that links sharing an endpoint on one side are logged and rejected."""
    with caplog.at_level(logging.WARNING, logger="clstrata.realizability"):
        with pytest.raises(ConstructionError, match="share an endpoint on the first side"):
            connect_two(theta_strip, theta_strip, [(0, 0), (0, 1), (1, 1)])
    assert "Rejecting links" in caplog.text
    chain = compose_tree([Part((0, 1), theta_strip), Part((1, 2), theta_strip)])
    with pytest.raises(ConstructionError, match="second side"):
        connect_two(chain, theta_strip, [(0, 0), (1, 0), (2, 1)])


def test_join_trees():
    """Test joining two trees by an odd number of twisted bands."""
    single = new_graph(1, [])
    theta = join_trees(single, single, [(0, 0)] * 3)
    assert theta.twists == 0b111
    assert_orientable_strip(theta)

    r = join_trees(path_graph(3), path_graph(2), [(0, 0), (2, 1), (1, 0)])
    assert r.n == 5
    assert_orientable_strip(r)

    with pytest.raises(ConstructionError):
        join_trees(single, single, [(0, 0)] * 2)
    with pytest.raises(ConstructionError):
        join_trees(cycle_graph(3), single, [(0, 0)])


def test_two_links_never_give_a_strip(torus_strip):
    """Test that two link bands between torus strips always leave two or more circles."""
    for twists in ((0, 0), (1, 1)):
        for r in link_arrangements(torus_strip, torus_strip, [(0, 0), (0, 0)], twists):
            assert is_orientable(r)
            assert face_count(r) >= 2
    assert face_count(load_entry("double-link").structure) >= 2


def test_decide_screens():
    """Test decisions made by the negative screens."""
    assert decide(bouquet(1)).criterion == "odd-q"
    assert decide(cycle_graph(4)).verdict == NO
    assert decide(HANDCUFF).criterion == "loop-at-degree-3"
    assert decide(theta_graph(4)).verdict == NO


def test_decide_constructive():
    """Test decisions made by constructors, each with a witness on the input."""
    tree = decide(path_graph(4))
    assert tree.verdict == YES
    assert tree.criterion == "tree"
    assert tree.witness.graph == path_graph(4)

    dipole = decide(theta_graph())
    assert dipole.criterion == "two-trees"
    assert_orientable_strip(dipole.witness)

    # Two thetas joined by a bridge, with a pendant edge
    g = new_graph(5, [(0, 1), (0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (2, 3), (3, 4)])
    report = decide(g, use_oracle=False)
    assert report.verdict == YES
    assert report.criterion == "bridge-join"
    assert report.witness.graph == g
    assert_orientable_strip(report.witness)


def test_decide_oracle_fallback():
    """Test the oracle fallback and the criteria-only mode."""
    report = decide(bouquet(2))
    assert report.verdict == YES
    assert report.criterion == "oracle"
    assert decide(bouquet(2), use_oracle=False).verdict == UNKNOWN


def test_decide_requires_connected():
    """Test that disconnected graphs are rejected."""
    with pytest.raises(GraphError):
        decide(new_graph(2, []))


def test_known_bad_catalog(tmp_path):
    """Test recording and reloading non-realizable graphs."""
    necklace = load_entry("necklace").graph
    catalog = KnownBadCatalog(tmp_path / "bad")
    assert len(catalog) == 1
    assert catalog.contains(necklace)
    assert not catalog.add(necklace)
    assert not (tmp_path / "bad").exists()
    assert catalog.add(HANDCUFF)
    assert not catalog.add(new_graph(2, [(1, 1), (1, 0), (0, 0)]))
    files = list((tmp_path / "bad").glob("*.graph"))
    assert len(files) == 1
    assert read_graph(files[0]) == HANDCUFF

    reloaded = KnownBadCatalog(tmp_path / "bad")
    assert len(reloaded) == 2
    # Subdividing an edge does not change the cyclic part
    assert reloaded.contains(new_graph(3, [(0, 0), (0, 2), (2, 1), (1, 1)]))
    assert not reloaded.contains(theta_graph())

    assert len(KnownBadCatalog(builtin=False)) == 0


def hang(g, pendant):
    """g with pendant attached by a bridge from vertex 0 of g to vertex 0 of pendant."""
    edges = list(g.edges) + [(0, g.n)] + [(u + g.n, v + g.n) for u, v in pendant.edges]
    return new_graph(g.n + pendant.n, edges)


def test_known_bad_bridge_side():
    """Test the screen for a bridge with a known non-realizable side."""
    catalog = KnownBadCatalog(seeds=[HANDCUFF])
    # A handcuff hanging off a theta by a bridge
    g = new_graph(4, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 3), (2, 3), (2, 3)])
    report = screen_bridge_nonrealizable(g, catalog)
    assert report is not None
    assert report.verdict == NO
    assert screen_bridge_nonrealizable(g, KnownBadCatalog()) is None
    assert screen_bridge_nonrealizable(g, None) is None


def test_necklace_is_known_bad_by_default():
    """Test that the ring of three 2-cycles screens bridge sides without a catalog."""
    necklace = load_entry("necklace").graph
    with_triangle = hang(necklace, cycle_graph(3))
    report = screen_bridge_nonrealizable(with_triangle)
    assert report is not None
    assert report.verdict == NO
    assert report.criterion == "bridge-side-known-bad"

    # q = 4 + 2 is even, so only the bridge screen can answer
    with_theta = hang(necklace, theta_graph())
    report = decide(with_theta, use_oracle=False)
    assert report.verdict == NO
    assert report.criterion == "bridge-side-known-bad"
    assert screen_bridge_nonrealizable(with_theta, KnownBadCatalog(builtin=False)) is None
