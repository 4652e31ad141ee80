"""Exact planar Steiner trees for small terminal sets and the self-similar
ladder networks on an angle, with their interval-contraction dynamics."""

from .analysis import (
    ValidityReport,
    WindRose,
    block_decompose,
    classify,
    is_decomposable,
    local_min_gradient,
    maxwell_length,
    trees_mirror_equal,
    validate_steiner_geometry,
    wind_rose,
)
from .dynamics import (
    DynamicsParams,
    Orbit,
    derive_params,
    forward_map,
    inverse_map,
    iterate,
    orbit_from_tree,
    periodic_points,
    tree_from_orbit,
)
from .errors import (
    DegenerateInputError,
    EscapeError,
    ForbiddenPointError,
    ParameterError,
)
from .geometry import (
    HexCoord,
    HexFrame,
    Point,
    angle_at,
    equilateral_third,
    fermat_point,
    from_hex,
    to_hex,
)
from .ladder import (
    LadderParams,
    build_input,
    build_ladder_tree_A0,
    build_ladder_tree_A1,
    build_triangle_tree,
    closed_form_length_A0,
    closed_form_length_A1,
    condition_holds,
    homothety,
    length_by_J,
    self_similarity_defect,
    separation_gap,
    separation_predicate,
    x_point,
)
from .solver import (
    SteinerSolution,
    minimal_full_tree,
    minimum_spanning_tree,
    realize_full_topology,
    solve_exact,
    steiner_ratio,
)
from .topology import (
    BlockDecomposition,
    Topology,
    count_full_topologies,
    enumerate_block_decompositions,
    enumerate_full_topologies,
)
from .trees import EmbeddedTree, TerminalSet

__version__ = "0.1.0"

__all__ = [
    "BlockDecomposition",
    "DegenerateInputError",
    "DynamicsParams",
    "EmbeddedTree",
    "EscapeError",
    "ForbiddenPointError",
    "HexCoord",
    "HexFrame",
    "LadderParams",
    "Orbit",
    "ParameterError",
    "Point",
    "SteinerSolution",
    "TerminalSet",
    "Topology",
    "ValidityReport",
    "WindRose",
    "angle_at",
    "block_decompose",
    "build_input",
    "build_ladder_tree_A0",
    "build_ladder_tree_A1",
    "build_triangle_tree",
    "classify",
    "closed_form_length_A0",
    "closed_form_length_A1",
    "condition_holds",
    "count_full_topologies",
    "derive_params",
    "enumerate_block_decompositions",
    "enumerate_full_topologies",
    "equilateral_third",
    "fermat_point",
    "forward_map",
    "from_hex",
    "homothety",
    "inverse_map",
    "is_decomposable",
    "iterate",
    "length_by_J",
    "local_min_gradient",
    "maxwell_length",
    "minimal_full_tree",
    "minimum_spanning_tree",
    "orbit_from_tree",
    "periodic_points",
    "realize_full_topology",
    "self_similarity_defect",
    "separation_gap",
    "separation_predicate",
    "solve_exact",
    "steiner_ratio",
    "to_hex",
    "tree_from_orbit",
    "trees_mirror_equal",
    "validate_steiner_geometry",
    "wind_rose",
    "x_point",
]
