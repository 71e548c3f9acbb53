"""
Distance properties of a minimal encoder: free distance, slope and the
zero-run property of its state diagram.

Slope is the minimum mean output weight over cycles of the state diagram
with the zero-state u=0 self-loop removed, computed exactly with Karp's
recurrence. Each function also has a brute-force counterpart used as a test
oracle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Union

import networkx as nx
import numpy as np

from .convcode import ConvCode, StateGraph, build_state_graph, encode

logger = logging.getLogger(__name__)

Slope = Union[Fraction, float]  # float only for the math.inf sentinel

_INF = 1 << 40


def _graph(code: ConvCode, graph: Optional[StateGraph]) -> StateGraph:
    return graph if graph is not None else build_state_graph(code)


def free_distance(code: ConvCode, graph: Optional[StateGraph] = None) -> int:
    """Minimum weight of a nonzero codeword.

    Shortest path from a split copy of the zero state, leaving on a nonzero
    input, back to the zero state.
    """
    sg = _graph(code, graph)
    w = sg.output_weight()
    g = nx.DiGraph()
    for s, u, s2, _ in sg.transitions():
        if s == 0 and u == 0:
            continue
        tail = "start" if s == 0 else s
        wt = int(w[s, u])
        if not g.has_edge(tail, s2) or g[tail][s2]["weight"] > wt:
            g.add_edge(tail, s2, weight=wt)
    return int(nx.dijkstra_path_length(g, "start", 0))


def free_distance_bruteforce(code: ConvCode, max_len: int = 10) -> int:
    """Minimum terminated codeword weight over nonzero inputs of up to max_len blocks."""
    best = math.inf
    for L in range(1, max_len + 1):
        for bits in product((0, 1), repeat=code.b * L):
            u = np.array(bits, dtype=np.int64).reshape(L, code.b)
            if not u[0].any():
                continue
            best = min(best, encode(code, u, terminate=True).weight)
    return int(best)


def slope(code: ConvCode, graph: Optional[StateGraph] = None) -> Slope:
    """Minimum normalized cycle weight, exact, or math.inf for a degree-0 code.

    Karp's minimum cycle mean over walks of exactly k branches from any
    start state: D_0 = 0 everywhere, D_k(v) = min over branches (s -> v) of
    D_{k-1}(s) + w. Then

        mu = min_v max_{k<N} (D_N(v) - D_k(v)) / (N - k)
    """
    if code.degree == 0:
        return math.inf
    sg = _graph(code, graph)
    N = sg.num_states
    w = sg.output_weight().reshape(-1).copy()
    w[0] = _INF  # zero-state u=0 self-loop
    src = np.repeat(np.arange(N), sg.num_inputs)
    pred = sg.predecessors()
    pred_src, pred_w = src[pred], w[pred]

    def step(d: np.ndarray) -> np.ndarray:
        return np.minimum((d[pred_src] + pred_w).min(axis=1), _INF)

    d = np.zeros(N, dtype=np.int64)
    for _ in range(N):
        d = step(d)
    d_n = d
    finite_n = d_n < _INF
    if not finite_n.any():
        return math.inf

    best_num = np.zeros(N, dtype=np.int64)
    best_den = np.zeros(N, dtype=np.int64)
    have = np.zeros(N, dtype=bool)
    d = np.zeros(N, dtype=np.int64)
    for k in range(N):
        num = d_n - d
        den = N - k
        valid = finite_n & (d < _INF)
        better = valid & (~have | (num * best_den > best_num * den))
        best_num = np.where(better, num, best_num)
        best_den = np.where(better, den, best_den)
        have |= better
        d = step(d)

    result = min(Fraction(int(n), int(m)) for n, m, h in zip(best_num, best_den, have) if h)
    logger.debug("Slope of %s: %s", code.G, result)
    return result


def slope_by_cycles(code: ConvCode, graph: Optional[StateGraph] = None) -> Slope:
    """Slope by enumerating every simple cycle of the state diagram."""
    if code.degree == 0:
        return math.inf
    g = _graph(code, graph).weighted_digraph(drop_zero_loop=True)
    best: Slope = math.inf
    for cycle in nx.simple_cycles(g):
        hops = zip(cycle, cycle[1:] + cycle[:1])
        weight = sum(g[a][b]["weight"] for a, b in hops)
        best = min(best, Fraction(weight, len(cycle)))
    return best


@dataclass(frozen=True)
class SlopeBound:
    """Slope against the lower bound 1/(delta+1)."""
    slope: Slope
    bound: Fraction
    passed: bool


def slope_bound_check(code: ConvCode, graph: Optional[StateGraph] = None) -> SlopeBound:
    alpha = slope(code, graph)
    bound = Fraction(1, code.degree + 1)
    return SlopeBound(slope=alpha, bound=bound, passed=alpha >= bound)


def zero_run_check(code: ConvCode, graph: Optional[StateGraph] = None) -> bool:
    """True iff every path of degree+1 all-zero output blocks visits the zero state."""
    sg = _graph(code, graph)
    run = code.degree + 1
    zero_moves = [
        [int(sg.next_state[s, u]) for u in range(sg.num_inputs) if sg.output[s, u] == 0]
        for s in range(sg.num_states)
    ]

    def avoids_zero(state: int, remaining: int) -> bool:
        # some zero-output path of `remaining` more steps never touches state 0
        if state == 0:
            return False
        if remaining == 0:
            return True
        return any(avoids_zero(nxt, remaining - 1) for nxt in zero_moves[state])

    return not any(avoids_zero(s, run) for s in range(1, sg.num_states))
