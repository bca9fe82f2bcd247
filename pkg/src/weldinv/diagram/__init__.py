from .catalog import CATALOG_NAMES, CatalogError, braid_diagram, braid_word, catalog
from .events import *  # noqa: F401,F403
from .moves import (
    BACKWARD,
    FORWARD,
    GRAPH_MOVES,
    MoveError,
    MoveKind,
    apply_move,
    enumerate_sites,
    move_kinds_for,
    random_equivalent,
)
from .transform import add_handle, canonicalize, crossing_sign, insert_bubble, mirror
from .wirtinger import FinitePresentation, arcs, wirtinger_presentation
