"""
Named braid presentations of small knots and links.

A leading "m" selects the mirror image, e.g. "m3_1" is the left-handed trefoil.
"""
from typing import Dict, List, Tuple

from knots.braid_model import parse_braid
from schemas.braid import BraidWord
from workflows.error_handler import BraidParseError

# name -> (strands, braid text)
CATALOG: Dict[str, Tuple[int, str]] = {
    "0_1": (1, ""),
    "U2": (2, ""),
    "2_2^1": (2, "1 1"),
    "3_1": (2, "1 1 1"),
    "4_1": (3, "1 -2 1 -2"),
    "5_1": (2, "1 1 1 1 1"),
    "5_2": (3, "1 1 1 2 -1 2"),
}

# pairs of presentations of the same link
EQUIVALENT_PAIRS: List[Tuple[str, Tuple[int, str], Tuple[int, str]]] = [
    ("markov stabilisation", (2, "1 1 1"), (3, "1 1 1 2")),
    ("second move", (2, "1 -1"), (2, "")),
    ("third move", (3, "1 2 1"), (3, "2 1 2")),
    ("conjugation", (3, "1 -2 1 -2"), (3, "-2 1 -2 1")),
]


def names() -> List[str]:
    return sorted(CATALOG)


def lookup(name: str) -> BraidWord:
    mirror = name.startswith("m") and name[1:] in CATALOG
    key = name[1:] if mirror else name
    if key not in CATALOG:
        raise BraidParseError(f"unknown knot {name!r}; known: {', '.join(names())}")
    strands, text = CATALOG[key]
    word = parse_braid(text, strands)
    return word.mirror() if mirror else word
