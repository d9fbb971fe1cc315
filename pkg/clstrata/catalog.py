"""Named ribbon structures shipped with the package."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, List, Tuple

from .parse import read_ribbon
from .ribbon import RibbonStructure

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"

Q4_CUBIC = "q4-cubic"
PLANAR = "planar"
EXAMPLE = "example"

# name -> (tags, description)
ENTRIES: Dict[str, Tuple[Tuple[str, ...], str]] = {
    "bridge": ((Q4_CUBIC, PLANAR), "two triangles with a doubled edge each, joined by a bridge"),
    "necklace": ((Q4_CUBIC, PLANAR), "three 2-cycles joined in a ring"),
    "two-digon": ((Q4_CUBIC, PLANAR), "two 2-cycles on a bridgeless frame"),
    "k4-digon": ((Q4_CUBIC, PLANAR), "K4 with one edge replaced by a 2-cycle gadget"),
    "prism": ((Q4_CUBIC, PLANAR), "triangular prism"),
    "k33": ((Q4_CUBIC,), "complete bipartite graph K3,3"),
    "torus": ((EXAMPLE,), "two loops with interleaved ends, untwisted"),
    "petersen": ((EXAMPLE,), "Petersen graph"),
    "theta": ((EXAMPLE,), "orientable theta strip, all bands twisted"),
    "handcuff": ((EXAMPLE,), "non-orientable handcuff strip"),
    "handcuff-theta": ((EXAMPLE,), "handcuff strip bridged to the theta strip"),
    "double-link": ((EXAMPLE,), "two torus strips joined by two twisted links"),
}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    structure: RibbonStructure
    tags: FrozenSet[str]
    description: str

    @property
    def graph(self):
        return self.structure.graph

    @property
    def rotation(self):
        return self.structure.rotation


@lru_cache(maxsize=None)
def load_entry(name: str) -> CatalogEntry:
    """
    Load one catalog structure from the package data.

    Raises:
        KeyError: If the name is not in the catalog
    """
    tags, description = ENTRIES[name]
    structure = read_ribbon(DATA_DIR / f"{name}.ribbon")
    return CatalogEntry(name, structure, frozenset(tags), description)


def catalog() -> Dict[str, CatalogEntry]:
    """All catalog entries in a fixed order."""
    entries = {name: load_entry(name) for name in ENTRIES}
    logger.debug(f"Loaded {len(entries)} catalog entries")
    return entries


def tagged(tag: str) -> List[CatalogEntry]:
    return [entry for entry in catalog().values() if tag in entry.tags]


def census_entries() -> List[CatalogEntry]:
    """The cubic graphs with four generating cycles, with their stored rotations."""
    return tagged(Q4_CUBIC)
