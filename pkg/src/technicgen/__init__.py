"""technicgen: sketch-to-Technic-layout engine.

Turns annotated 3D line sketches into coherently connected beam models via a
two-stage annealing search, with connection synthesis, model analysis, and a
grid benchmark harness.
"""

from .catalog import (
    Brick,
    Catalog,
    CatalogError,
    ConnectionMechanism,
    MechanismPose,
    default_catalog,
    enumerate_mechanism_poses,
    load_catalog,
    pin_head_ratio,
)
from .engine import AnnealParams, initialize_layout, modify_layout, refine
from .objective import (
    IncrementalObjective,
    ObjectiveBreakdown,
    ObjectiveWeights,
    eval_full,
    eval_simplified,
    incremental_update,
)
from .orientation import (
    SAParams,
    anneal_orientations,
    decompose_components,
    initial_assignment,
    orientation_objective,
    solve_orientations,
)
from .pipeline import generate, model_document, report_document
from .placements import index_placements, placements_covering, revalidate_orientation
from .sketch import (
    Diagnostic,
    GuidingGraph,
    Sketch,
    SketchError,
    SymmetryIndex,
    build_guiding_graph,
    expand_symmetry,
    parse_sketch,
    validate_sketch,
)

__all__ = [
    "AnnealParams",
    "initialize_layout",
    "modify_layout",
    "refine",
    "IncrementalObjective",
    "ObjectiveBreakdown",
    "ObjectiveWeights",
    "eval_full",
    "eval_simplified",
    "incremental_update",
    "SAParams",
    "anneal_orientations",
    "decompose_components",
    "initial_assignment",
    "orientation_objective",
    "solve_orientations",
    "generate",
    "model_document",
    "report_document",
    "index_placements",
    "placements_covering",
    "revalidate_orientation",
    "Brick",
    "Catalog",
    "CatalogError",
    "ConnectionMechanism",
    "MechanismPose",
    "default_catalog",
    "enumerate_mechanism_poses",
    "load_catalog",
    "pin_head_ratio",
    "Diagnostic",
    "GuidingGraph",
    "Sketch",
    "SketchError",
    "SymmetryIndex",
    "build_guiding_graph",
    "expand_symmetry",
    "parse_sketch",
    "validate_sketch",
]

__version__ = "0.1.0"
