"""
Hard-decision Viterbi decoding on a controller-canonical trellis.

Frames are decoded together: path metrics have shape (frames, states) and
each step takes, for every state, the best of its 2^b incoming branches.
Candidates are ordered by (predecessor state, input), and argmin keeps the
first minimum, so ties go to the lexicographically smaller predecessor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from ..codes.convcode import ConvCode, StateGraph, build_state_graph
from ..errors import SimulationError

logger = logging.getLogger(__name__)

Metric = Literal["hamming", "ml"]

_ML_FLOOR = 1e-300


@dataclass(frozen=True)
class TrellisDecoder:
    """Trellis of one code with a branch-cost table cost[r, v]."""
    code: ConvCode
    graph: StateGraph
    metric: Metric
    cost: np.ndarray = field(repr=False)  # (2^c, 2^c)
    pred_state: np.ndarray = field(repr=False)  # (states, 2^b)
    pred_input: np.ndarray = field(repr=False)
    pred_output: np.ndarray = field(repr=False)


def make_decoder(
    code: ConvCode,
    metric: Metric = "hamming",
    error_probs: Optional[np.ndarray] = None,
    require_minimal: bool = True
) -> TrellisDecoder:
    """Build a decoder for one code.

    Args:
        code: Analyzed generator matrix
        metric: "hamming" (distance between received and branch n-tuples) or
            "ml" (-log p(r + v) from the sink's error distribution)
        error_probs: p[e] for every error n-tuple e, required for "ml"
        require_minimal: Passed to build_state_graph
    """
    graph = build_state_graph(code, require_minimal=require_minimal)
    size = 1 << code.c
    r = np.arange(size)
    diff = r[:, None] ^ r[None, :]
    if metric == "hamming":
        popcount = np.array([e.bit_count() for e in range(size)], dtype=np.int64)
        cost = popcount[diff]
    elif metric == "ml":
        if error_probs is None or np.shape(error_probs) != (size,):
            raise SimulationError("E502", f"ml metric needs {size} error probabilities")
        cost = -np.log(np.maximum(np.asarray(error_probs, dtype=np.float64), _ML_FLOOR))[diff]
    else:
        raise SimulationError("E502", f"unknown metric {metric!r}")

    pred = graph.predecessors()
    U = graph.num_inputs
    pred_state, pred_input = np.divmod(pred, U)
    pred_output = graph.output.reshape(-1)[pred]
    for a in (cost, pred_state, pred_input, pred_output):
        a.setflags(write=False)
    return TrellisDecoder(code, graph, metric, cost, pred_state, pred_input, pred_output)


def pack_tuples(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis of a 0/1 array into ints, first component most significant."""
    bits = np.asarray(bits, dtype=np.int64)
    weights = 1 << np.arange(bits.shape[-1] - 1, -1, -1)
    return bits @ weights


def unpack_tuples(values: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1)
    return ((np.asarray(values)[..., None] >> shifts) & 1).astype(np.uint8)


def viterbi_decode_batch(
    dec: TrellisDecoder,
    received: np.ndarray,
    info_length: Optional[int] = None
) -> np.ndarray:
    """Decode terminated frames.

    Args:
        dec: Trellis decoder
        received: (frames, L + nu_max, c) array of received bits
        info_length: Expected L, checked against the received length

    Returns:
        (frames, L, b) decoded information bits

    Raises:
        SimulationError: E501 if the received shape does not fit the code
    """
    code = dec.code
    received = np.asarray(received)
    if received.ndim != 3 or received.shape[2] != code.c:
        raise SimulationError("E501", f"expected (frames, steps, {code.c}) received bits, got {received.shape}")
    T = received.shape[1]
    L = T - code.nu_max
    if L < 1 or (info_length is not None and L != info_length):
        raise SimulationError(
            "E501",
            f"{T} received blocks do not match L + nu_max"
            + (f" = {info_length + code.nu_max}" if info_length is not None else f" with nu_max = {code.nu_max}")
        )

    F, S = received.shape[0], dec.graph.num_states
    r = pack_tuples(received)
    big = np.inf if dec.cost.dtype.kind == "f" else np.int64(1) << 40
    metric = np.full((F, S), big, dtype=dec.cost.dtype)
    metric[:, 0] = 0
    survivors = np.empty((T, F, S), dtype=np.int16)
    for t in range(T):
        cand = metric[:, dec.pred_state] + dec.cost[r[:, t][:, None, None], dec.pred_output[None]]
        choice = np.argmin(cand, axis=2)
        metric = np.take_along_axis(cand, choice[..., None], axis=2)[..., 0]
        survivors[t] = choice

    frames = np.arange(F)
    state = np.zeros(F, dtype=np.int64)
    inputs = np.empty((F, T), dtype=np.int64)
    for t in range(T - 1, -1, -1):
        c = survivors[t, frames, state]
        inputs[:, t] = dec.pred_input[state, c]
        state = dec.pred_state[state, c]
    return unpack_tuples(inputs[:, :L], code.b)


def viterbi_decode(
    dec: TrellisDecoder,
    received: Sequence[Sequence[int]],
    info_length: Optional[int] = None
) -> list[tuple[int, ...]]:
    """Decode one terminated frame of received n-tuples into information b-tuples."""
    arr = np.asarray(received, dtype=np.uint8)
    if arr.ndim != 2:
        raise SimulationError("E501", f"expected a list of {dec.code.c}-tuples")
    out = viterbi_decode_batch(dec, arr[None], info_length)[0]
    return [tuple(int(x) for x in row) for row in out]
