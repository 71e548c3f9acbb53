"""Convolutional codes: analysis, state graphs, encoding, distance and slope."""

from .convcode import (
    MAX_DEGREE,
    ConvCode,
    CodewordSeq,
    StateGraph,
    analyze,
    build_state_graph,
    encode,
    encode_batch,
    iter_rate_1_generators,
)
from .distance import (
    SlopeBound,
    free_distance,
    free_distance_bruteforce,
    slope,
    slope_by_cycles,
    slope_bound_check,
    zero_run_check,
)

__all__ = [
    "MAX_DEGREE",
    "ConvCode",
    "CodewordSeq",
    "StateGraph",
    "analyze",
    "build_state_graph",
    "encode",
    "encode_batch",
    "iter_rate_1_generators",
    "SlopeBound",
    "free_distance",
    "free_distance_bruteforce",
    "slope",
    "slope_by_cycles",
    "slope_bound_check",
    "zero_run_check",
]
