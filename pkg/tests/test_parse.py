"""Tests for the parse module."""

import pytest

from clstrata.multigraph import theta_graph
from clstrata.parse import (
    ParseError,
    format_graph,
    format_ribbon,
    parse_graph,
    parse_ribbon,
    read_graph,
    read_ribbon,
    write_graph,
    write_ribbon,
)
from clstrata.ribbon import face_count

THETA_GRAPH = """\
# theta graph
2 3
0 1
0 1
0 1
"""

THETA_RIBBON = THETA_GRAPH + """\
rotation 0: 0 2 4
rotation 1: 1 5 3
twists: 111
"""


def test_parse_graph():
    """Test the graph format with comments and blank lines."""
    g = parse_graph(THETA_GRAPH + "\n# trailing comment\n")
    assert g == theta_graph()


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 0),
        ("2\n", 1),
        ("2 3\n0 1\n0 1\n", 3),
        ("2 1\n0 2\n", 2),
        ("2 1\n0 x\n", 2),
        ("2 1\n0 1\n1 1\n", 3),
    ],
)
def test_parse_graph_errors(text, line):
    """Test that malformed graph files report the offending line."""
    with pytest.raises(ParseError) as exc_info:
        parse_graph(text)
    assert exc_info.value.line == line
    if line:
        assert str(exc_info.value).startswith(f"line {line}: ")


def test_parse_ribbon():
    """Test the ribbon format on the twisted theta."""
    r = parse_ribbon(THETA_RIBBON)
    assert r.rotation == ((0, 2, 4), (1, 5, 3))
    assert r.twists == 0b111
    assert face_count(r) == 1


def test_parse_ribbon_rotation_order():
    """Test that rotation lines may appear in any vertex order."""
    text = THETA_GRAPH + "rotation 1: 1 5 3\nrotation 0: 0 2 4\ntwists: 100\n"
    r = parse_ribbon(text)
    assert r.rotation == ((0, 2, 4), (1, 5, 3))
    assert r.twists == 0b001


def test_parse_ribbon_without_rotation():
    """Test that a bare graph is accepted only when asked for."""
    with pytest.raises(ParseError):
        parse_ribbon(THETA_GRAPH)
    r = parse_ribbon(THETA_GRAPH, require_rotation=False)
    assert r.rotation == ((0, 2, 4), (1, 3, 5))
    assert r.twists == 0


@pytest.mark.parametrize(
    "tail, message",
    [
        ("rotation 0: 0 2 4\nrotation 1: 1 5 3\n", "missing 'twists:'"),
        ("rotation 0: 0 2 4\ntwists: 111\n", "missing rotation"),
        ("rotation 0: 0 2 4\nrotation 1: 1 5 3\ntwists: 11\n", "bits"),
        ("rotation 0: 0 2 4\nrotation 0: 0 2 4\n", "duplicate"),
        ("rotation 2: 0\n", "unknown vertex"),
        ("faces: 1\n", "unknown section"),
        ("rotation 0: 0 2 4\nrotation 1: 1 3\ntwists: 111\n", "line"),
    ],
)
def test_parse_ribbon_errors(tail, message):
    """Test that malformed ribbon sections are reported."""
    with pytest.raises(ParseError) as exc_info:
        parse_ribbon(THETA_GRAPH + tail)
    assert message in str(exc_info.value)


def test_format_round_trip(theta_strip, handcuff_strip):
    """Test that formatted text parses back to the same structure."""
    assert parse_graph(format_graph(theta_graph())) == theta_graph()
    for r in (theta_strip, handcuff_strip):
        text = format_ribbon(r)
        assert text.endswith("\n")
        assert parse_ribbon(text) == r


def test_read_and_write(tmp_path, theta_strip):
    """Test the file helpers."""
    graph_path = tmp_path / "theta.graph"
    ribbon_path = tmp_path / "theta.ribbon"
    write_graph(theta_strip.graph, graph_path)
    write_ribbon(theta_strip, ribbon_path)
    assert read_graph(graph_path) == theta_graph()
    assert read_ribbon(ribbon_path) == theta_strip
    assert read_ribbon(graph_path, require_rotation=False).graph == theta_graph()
