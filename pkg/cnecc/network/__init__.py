"""Network model, network code and network-error propagation."""

from .model import (
    Edge,
    Network,
    NetworkCode,
    TransferSet,
    Check,
    Diagnostics,
    validate,
    compute_transfer,
    sink_error,
    propagate,
)
from .butterfly import builtin_butterfly
from .loader import load_network, parse_network, to_json

__all__ = [
    "Edge",
    "Network",
    "NetworkCode",
    "TransferSet",
    "Check",
    "Diagnostics",
    "validate",
    "compute_transfer",
    "sink_error",
    "propagate",
    "builtin_butterfly",
    "load_network",
    "parse_network",
    "to_json",
]
