"""Heterogeneous task allocation solvers."""

from htap._core import (
    Allocation,
    ArgumentError,
    Error,
    Instance,
    InvariantViolation,
    LimitExceeded,
    ParseError,
    SearchFailure,
    ValidationError,
    allocation_to_json,
    checked_split_count,
    christofides_tour,
    cycle_split,
    exact_minmax,
    generate_euclidean,
    generate_paper_example,
    held_karp_tour,
    hetero_minmax_split,
    hetero_split,
    instance_from_json,
    load_instance,
    naive_allocation,
    splitour,
    validate,
    verify_allocation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
