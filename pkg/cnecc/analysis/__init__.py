"""Exact sink-error statistics and transfer-function BER bounds."""

from .errspec import (
    SinkErrorSpectrum,
    SinkErrorDist,
    ThresholdReport,
    compute_spectrum,
    exact_dist,
    single_edge_bounds,
    proposition_threshold,
    dominance_holds,
    empirical_threshold,
    dominance_curves,
    bernoulli_bound_check,
)
from .transfer import (
    FlowGraph,
    BhattacharyyaTable,
    BerBound,
    build_flow_graph,
    eval_T,
    classical_T,
    bhattacharyya,
    ber_bound,
)

__all__ = [
    "SinkErrorSpectrum",
    "SinkErrorDist",
    "ThresholdReport",
    "compute_spectrum",
    "exact_dist",
    "single_edge_bounds",
    "proposition_threshold",
    "dominance_holds",
    "empirical_threshold",
    "dominance_curves",
    "bernoulli_bound_check",
    "FlowGraph",
    "BhattacharyyaTable",
    "BerBound",
    "build_flow_graph",
    "eval_T",
    "classical_T",
    "bhattacharyya",
    "ber_bound",
]
