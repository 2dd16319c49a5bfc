"""Exact inference on transporter chain event graphs.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._core import (  # noqa: F401
    InstanceTooLargeError,
    InvalidPathError,
    IoError,
    Observation,
    ParameterError,
    ProbabilityTree,
    TransporterCeg,
    ValidationError,
    ZeroProbabilityError,
    __version__,
    bench,
    brute_force_condition,
    build_ceg,
    check_compatibility,
    compute_positions,
    conditional_atom_probability,
    conditional_reach_probability,
    example_ceg,
    example_observation_edges,
    example_tree,
    export_dot,
    minimize,
    model_selection_ceg,
    observation_paths,
    parse_model,
    parse_observation,
    propagate,
    random_observation,
    random_tree,
    reduce,
    serialize_ceg_model,
    serialize_tree_model,
)
