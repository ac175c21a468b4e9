"""Search engine for edge-dense unit-distance graphs on the Moser lattice."""

from .canonical import (
    DEFAULT_SEED,
    MAX_COEF,
    OutOfBoundsError,
    ZobristTable,
    apply_symmetry,
    canonize_batch,
    canonize_one,
    normalize_translation,
    point_code,
    zobrist_hash,
)
from .genealogy import (
    GraphSet,
    children,
    children_op1,
    children_op2,
    children_op3,
    edge_count,
    edge_counts,
    graph_set,
    parents,
    unit_adjacency,
)
from .isoclass import canonical_label, count_iso_classes, minkowski_sum, to_abstract
from .lattice import (
    MOSER_SPINDLE,
    UNIT_EDGE,
    UNIT_TRIANGLE,
    UNIT_TRIANGLE_ALT,
    embed,
    enumerate_units,
    is_unit,
    is_unit_distance,
    quad_form_x6,
)
from .search import (
    Beam,
    BestTable,
    EmptyFrontier,
    SearchConfig,
    SearchState,
    VisitationStore,
    backward,
    chunked_map,
    forward_step,
    prune,
    run_search,
    score,
)
from .store import GraphRecord, GraphStore, StoreError

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
