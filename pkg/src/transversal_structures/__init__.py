from .bijection import (
    FourOrientation,
    PartialFigure,
    closure,
    complete_closure,
    four_orientation,
    generate,
    local_closure,
    minimal_partition,
    opening,
    partial_closure,
)
from .builder import PlanarMapBuilder, RotationSystem
from .drawing import (
    GridDrawing,
    SvgStyle,
    compact,
    emit_svg,
    fast_coordinates,
    separating_path,
    transversal_draw,
    verify_drawing,
)
from .errors import (
    ExperimentError,
    FormatError,
    MapError,
    Report,
    StructureError,
    TransversalError,
    TreeError,
)
from .planar_map import IrreducibleTriangulation, PlanarMap, build_map, validate_irreducible
from .ternary_tree import BicoloredTernaryTree, TernaryTree
from .transversal import (
    AlternatingFourCycle,
    Alpha0Orientation,
    EdgePartition,
    EssentialCircuit,
    TransversalStructure,
    enumerate_structures,
    find_alpha0,
    find_essential_circuits,
    flip,
    minimalize,
    psi,
    sweep_preimage,
    verify_structure,
)

__all__ = [
    "AlternatingFourCycle",
    "Alpha0Orientation",
    "BicoloredTernaryTree",
    "EdgePartition",
    "EssentialCircuit",
    "ExperimentError",
    "FormatError",
    "FourOrientation",
    "GridDrawing",
    "IrreducibleTriangulation",
    "MapError",
    "PartialFigure",
    "PlanarMap",
    "PlanarMapBuilder",
    "Report",
    "RotationSystem",
    "StructureError",
    "SvgStyle",
    "TernaryTree",
    "TransversalError",
    "TransversalStructure",
    "TreeError",
    "build_map",
    "closure",
    "compact",
    "complete_closure",
    "emit_svg",
    "enumerate_structures",
    "fast_coordinates",
    "find_alpha0",
    "find_essential_circuits",
    "flip",
    "four_orientation",
    "generate",
    "local_closure",
    "minimal_partition",
    "minimalize",
    "opening",
    "partial_closure",
    "psi",
    "separating_path",
    "sweep_preimage",
    "transversal_draw",
    "validate_irreducible",
    "verify_drawing",
    "verify_structure",
]
