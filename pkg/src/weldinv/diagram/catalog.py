"""Built-in diagrams.

Most entries are closures of short braid words (classical and virtual
letters); the ``...arc`` variants cut the leftmost strand of the closure open
at the bottom and the top.  ``S`` is the trivial 1-handle added to the
trefoil arc.
"""

import re

from .events import MorseDiagram, braid_events, validate
from .transform import add_handle, canonicalize

# name -> (strands, word, is_arc, components)
_BRAIDS = {
    "O": (1, [], False),
    "O2": (2, [], False),
    "L": (2, [1, "v1"], False),
    "H": (2, [1, 1], False),
    "HA": (2, [1, 1], True),
    "T31": (2, [1, 1, 1], False),
    "T31arc": (2, [1, 1, 1], True),
    "F41": (3, [1, -2, 1, -2], False),
    "F41arc": (3, [1, -2, 1, -2], True),
    "K51": (2, [1] * 5, False),
    "K51arc": (2, [1] * 5, True),
    "K52": (3, [1, 1, 1, 2, -1, 2], False),
    "K52arc": (3, [1, 1, 1, 2, -1, 2], True),
    # three-component virtual links whose knot groups all agree
    "Q1": (3, [1, 1, 2, 2], False),
    "Q2": (3, [1, 1, "v2", 2], False),
    "Q3": (3, ["v1", 1, 2, "v2"], False),
    # a knotted virtual arc with trivial closure
    "VA": (2, [1, 1, "v1"], True),
}

_FAMILIES = {
    "Kn": lambda n: (2, [1] * n, False),
    "An": lambda n: (2, [1] * n, True),
    "Pn": lambda n: (2, [1] * (2 * n), False),
    "PnArc": lambda n: (2, [1] * (2 * n), True),
}

_ALIASES = {"P": ("Pn", 3), "P'": ("PnArc", 3), "Pprime": ("PnArc", 3)}

CATALOG_NAMES = tuple(_BRAIDS) + ("S",) + tuple(_FAMILIES)


class CatalogError(ValueError):
    pass


def braid_diagram(n, word, arc=False):
    """Canonical diagram of the (arc-)closure of a braid word."""
    return canonicalize(MorseDiagram(tuple(braid_events(n, word, arc))))


def braid_word(name, n=None):
    """(strands, word, arc) behind a braid-based catalog entry."""
    name, n = _split(name, n)
    if name in _BRAIDS:
        if n is not None:
            raise CatalogError(f"{name} takes no parameter")
        return _BRAIDS[name]
    if name in _FAMILIES:
        if n is None:
            raise CatalogError(f"{name} needs an odd parameter n")
        if n < 1 or n % 2 == 0:
            raise CatalogError(f"{name} needs an odd positive n, got {n}")
        return _FAMILIES[name](n)
    raise CatalogError(f"{name} is not a braid closure")


def catalog(name, n=None):
    """Diagram for a catalog name.  Parameterised names accept ``n`` or the
    string form ``"Kn(5)"``."""
    name, n = _split(name, n)
    if name == "S":
        if n is not None:
            raise CatalogError("S takes no parameter")
        return add_handle(catalog("T31arc"))
    if name not in _BRAIDS and name not in _FAMILIES:
        raise CatalogError(f"unknown catalog name {name!r}; known: {', '.join(CATALOG_NAMES)}")
    d = braid_diagram(*braid_word(name, n))
    problems = validate(d)
    assert not problems, problems
    return d


def _split(name, n):
    name = name.strip()
    if name in _ALIASES:
        if n is not None:
            raise CatalogError(f"{name} takes no parameter")
        return _ALIASES[name]
    m = re.fullmatch(r"(\w+)\s*[,]?\s*\(\s*(-?\d+)\s*\)", name)
    if m:
        if n is not None:
            raise CatalogError("parameter given twice")
        return m.group(1), int(m.group(2))
    return name, n
