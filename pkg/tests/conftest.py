"""Pytest configuration for clstrata tests."""

from pathlib import Path
from typing import Optional, Sequence, Tuple

import pytest

from clstrata.catalog import load_entry
from clstrata.multigraph import Multigraph, new_graph
from clstrata.ribbon import RibbonStructure, new_ribbon


@pytest.fixture
def theta_strip() -> RibbonStructure:
    """Theta graph with all three bands twisted: an orientable strip."""
    return load_entry("theta").structure


@pytest.fixture
def planar_theta() -> RibbonStructure:
    """Theta graph on its planar rotation with no twists (three boundary circles)."""
    g = new_graph(2, [(0, 1)] * 3)
    return new_ribbon(g, [(0, 2, 4), (1, 5, 3)], 0)


@pytest.fixture
def torus_strip() -> RibbonStructure:
    """Two untwisted loops with interleaved ends."""
    return load_entry("torus").structure


@pytest.fixture
def handcuff_strip() -> RibbonStructure:
    """Two twisted loops joined by an untwisted edge."""
    return load_entry("handcuff").structure


@pytest.fixture
def make_ribbon():
    """Build ribbon structures from plain edge lists."""
    def _make_ribbon(n: int, edges: Sequence[Tuple[int, int]],
                     rotation: Optional[Sequence[Sequence[int]]] = None,
                     twists: str = "") -> RibbonStructure:
        """
        Create a ribbon structure.

        Args:
            n: Number of vertices
            edges: (u, v) per edge
            rotation: Dart cycles per vertex; sorted darts when omitted
            twists: Bitstring with edge 0 first; all zero when empty

        Returns:
            The RibbonStructure
        """
        g = new_graph(n, edges)
        mask = sum(1 << i for i, c in enumerate(twists) if c == "1")
        return new_ribbon(g, rotation, mask)

    return _make_ribbon


@pytest.fixture
def lollipop() -> Multigraph:
    """Triangle 0-1-2 with a pendant edge from 2 to 3."""
    return new_graph(4, [(0, 1), (1, 2), (2, 0), (2, 3)])


@pytest.fixture
def write_text(tmp_path: Path):
    """Write text files into a temporary directory and return their paths."""
    def _write_text(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write_text
