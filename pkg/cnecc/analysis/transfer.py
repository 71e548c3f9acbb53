"""
Modified augmented generating function of a convolutional encoder and the
bit-error-probability bound it yields at a sink.

Every branch of the state diagram carries a placeholder D_v for its output
n-tuple v (zero-output branches carry none) and I^i for its input weight i.
The generating function T sums branch-gain products over all paths that
leave the zero state and first return to it. T is evaluated numerically: with
x_s the total gain of paths from the zero state to intermediate state s,

    x = M x + b,    T = d + sum_s g_s x_s

where M holds gains between nonzero states, b gains out of the zero state,
g gains back into it and d direct zero-to-zero branches.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from ..algebra.f2 import vec_label
from ..codes.convcode import ConvCode, StateGraph, build_state_graph
from ..config import get_default_config
from ..errors import AlgebraError, AnalysisError, DivergenceError
from .errspec import SinkErrorDist, Side

logger = logging.getLogger(__name__)

ZValues = Union[np.ndarray, Mapping[int, float]]


@dataclass(frozen=True)
class FlowGraph:
    """State diagram with the zero state split into a source and a target.

    Arc k runs src[k] -> dst[k] with output v[k] and input weight i[k]; an
    arc leaving state 0 starts at the source, an arc entering 0 ends at the
    target. The zero-state u=0 self-loop is not an arc.
    """
    num_states: int
    c: int
    src: np.ndarray = field(repr=False)
    dst: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    i: np.ndarray = field(repr=False)

    @property
    def num_arcs(self) -> int:
        return int(self.src.shape[0])


@dataclass(frozen=True)
class BhattacharyyaTable:
    """Z[v] = sum_y sqrt(p(y) p(y + v)) for every v at one sink."""
    sink: str
    side: Side
    p_e: float
    Z: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        n = int(self.Z.shape[0]).bit_length() - 1
        return {vec_label(v, n): float(z) for v, z in enumerate(self.Z)}


@dataclass(frozen=True)
class BerBound:
    """Union bound on the bit-error probability at one sink and p_e."""
    sink: str
    side: Side
    p_e: float
    epsilon: float
    value: float
    diverged: bool


def build_flow_graph(sg: StateGraph) -> FlowGraph:
    """Split the zero state and drop its u=0 self-loop."""
    S, U = sg.num_states, sg.num_inputs
    src = np.repeat(np.arange(S), U)
    keep = np.ones(S * U, dtype=bool)
    keep[0] = False
    arcs = [src[keep], sg.next_state.reshape(-1)[keep], sg.output.reshape(-1)[keep],
            np.tile(sg.input_weight, S)[keep]]
    for a in arcs:
        a.setflags(write=False)
    return FlowGraph(S, sg.code.c, *arcs)


def _z_array(Z: ZValues, c: int) -> np.ndarray:
    if isinstance(Z, Mapping):
        arr = np.zeros(1 << c)
        for v, z in Z.items():
            arr[v] = z
    else:
        arr = np.array(Z, dtype=np.float64)
        if arr.shape != (1 << c,):
            raise AlgebraError("E101", f"need {1 << c} Z values for c = {c}, got {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise AnalysisError("E404", "Z values must be finite and nonnegative")
    return arr


def _solve(fg: FlowGraph, gain: np.ndarray, residual_tol: float) -> float:
    S = fg.num_states
    from_zero = fg.src == 0
    to_zero = fg.dst == 0
    d = float(gain[from_zero & to_zero].sum())
    if S == 1:
        return d

    inner = ~from_zero & ~to_zero
    M = np.zeros((S - 1, S - 1))
    np.add.at(M, (fg.dst[inner] - 1, fg.src[inner] - 1), gain[inner])
    b = np.zeros(S - 1)
    out = from_zero & ~to_zero
    np.add.at(b, fg.dst[out] - 1, gain[out])
    g = np.zeros(S - 1)
    back = ~from_zero & to_zero
    np.add.at(g, fg.src[back] - 1, gain[back])

    radius = float(np.max(np.abs(np.linalg.eigvals(M))))
    if radius >= 1.0:
        raise DivergenceError("E404", f"series diverges: spectral radius {radius:.6g} >= 1")
    A = np.eye(S - 1) - M
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as e:
        raise DivergenceError("E404", "singular flow-graph system") from e
    res = float(np.max(np.abs(A @ x - b), initial=0.0))
    T = d + float(g @ x)
    if not math.isfinite(T) or T < 0 or np.any(x < -1e-12) or res > residual_tol:
        raise DivergenceError("E404", f"flow-graph solve unreliable (T={T}, residual={res:.3g})")
    return T


def eval_T(fg: FlowGraph, Z: ZValues, I: float, residual_tol: Optional[float] = None) -> float:
    """Numeric value of T(D_v = Z[v], I).

    Raises:
        DivergenceError: E404 if the series does not converge at this point
    """
    if I < 1:
        raise AnalysisError("E404", f"I must be >= 1, got {I}")
    tol = get_default_config().divergence_residual if residual_tol is None else residual_tol
    z = _z_array(Z, fg.c)
    z[0] = 1.0
    gain = z[fg.v] * np.power(float(I), fg.i)
    return _solve(fg, gain, tol)


def classical_T(sg: StateGraph, D: float, I: float, residual_tol: Optional[float] = None) -> float:
    """Classical T(D, I) with branch gains D^w_H(v) I^i, built straight from the state graph."""
    tol = get_default_config().divergence_residual if residual_tol is None else residual_tol
    S, U = sg.num_states, sg.num_inputs
    weights = sg.output_weight().reshape(-1)
    gains = np.power(float(D), weights) * np.power(float(I), np.tile(sg.input_weight, S))
    keep = np.ones(S * U, dtype=bool)
    keep[0] = False
    fg = FlowGraph(
        S, sg.code.c,
        np.repeat(np.arange(S), U)[keep],
        sg.next_state.reshape(-1)[keep],
        sg.output.reshape(-1)[keep],
        np.tile(sg.input_weight, S)[keep],
    )
    return _solve(fg, gains[keep], tol)


def bhattacharyya(dist: SinkErrorDist) -> BhattacharyyaTable:
    """Pairwise Bhattacharyya parameters of the sink's vector channel."""
    root = np.sqrt(dist.probs)
    ys = np.arange(dist.probs.shape[0])
    Z = root[ys[None, :] ^ ys[:, None]] @ root
    Z.setflags(write=False)
    return BhattacharyyaTable(sink=dist.sink, side=dist.side, p_e=dist.p_e, Z=Z)


def ber_bound(
    code: ConvCode,
    dist: SinkErrorDist,
    epsilon: Optional[float] = None,
    graph: Optional[StateGraph] = None
) -> BerBound:
    """(1/b) (T(Z, 1 + eps) - T(Z, 1)) / eps with D_v = Z_v at the sink.

    A divergent series is reported with diverged=True and value inf.
    """
    eps = get_default_config().epsilon if epsilon is None else epsilon
    if not 0 < eps <= 0.01:
        raise AnalysisError("E404", f"epsilon must be in (0, 0.01], got {eps}")
    if 1 << code.c != dist.probs.shape[0]:
        raise AlgebraError("E101", f"code has c = {code.c} but the sink distribution has n = {dist.n}")
    fg = build_flow_graph(graph if graph is not None else build_state_graph(code))
    Z = bhattacharyya(dist).Z
    try:
        value = (eval_T(fg, Z, 1.0 + eps) - eval_T(fg, Z, 1.0)) / (eps * code.b)
        diverged = False
    except DivergenceError as e:
        logger.info("Bound diverges at %s, p_e=%g: %s", dist.sink, dist.p_e, e.message)
        value, diverged = math.inf, True
    return BerBound(sink=dist.sink, side=dist.side, p_e=dist.p_e, epsilon=eps,
                    value=value, diverged=diverged)
