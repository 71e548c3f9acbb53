"""
Convolutional codes: structural analysis, controller-canonical state graph
and encoding.

State layout: row i of G(z) owns nu_i memory cells holding
(u_{i,t-1}, ..., u_{i,t-nu_i}). The state vector sigma concatenates the rows
and is packed with its first component most significant, so integer order on
states is lexicographic order on sigma. Inputs u in GF(2)^b and outputs v in
GF(2)^c are packed the same way ("10" -> 2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from ..algebra.f2 import BinPoly, BinPolyMatrix, int_to_vec, poly_gcd, rank, vec_to_int
from ..errors import AlgebraError, CodeError

logger = logging.getLogger(__name__)

MAX_DEGREE = 16


@dataclass(frozen=True)
class ConvCode:
    """Polynomial generator matrix with its structural metrics."""
    G: BinPolyMatrix
    row_degrees: tuple[int, ...]
    degree: int
    nu_max: int
    reduced: bool  # highest-degree coefficient matrix has full rank
    basic: bool    # gcd of maximal minors is 1 (polynomial right inverse)

    @property
    def b(self) -> int:
        return self.G.rows

    @property
    def c(self) -> int:
        return self.G.cols

    @property
    def minimal_basic(self) -> bool:
        return self.reduced and self.basic

    def summary(self) -> dict:
        return {
            "G": str(self.G),
            "b": self.b,
            "c": self.c,
            "row_degrees": list(self.row_degrees),
            "degree": self.degree,
            "nu_max": self.nu_max,
            "reduced": self.reduced,
            "basic": self.basic,
            "minimal_basic": self.minimal_basic,
        }


def analyze(G: BinPolyMatrix) -> ConvCode:
    """Row degrees, degree and minimal-basic flags of a generator matrix.

    Raises:
        AlgebraError: E103 if G does not have rank b over GF(2)(z)
    """
    if G.rows > G.cols:
        raise AlgebraError("E103", f"{G.rows}x{G.cols} generator cannot have full row rank")
    minors = G.maximal_minors()
    if all(m.is_zero() for m in minors):
        raise AlgebraError("E103", f"generator {G} is rank deficient over GF(2)(z)")
    degs = tuple(G.row_degrees())
    gcd = reduce(poly_gcd, minors, BinPoly(0))
    reduced = rank(G.highest_coefficient_matrix()) == G.rows
    return ConvCode(
        G=G,
        row_degrees=degs,
        degree=sum(degs),
        nu_max=max(degs),
        reduced=reduced,
        basic=gcd.bits == 1,
    )


@dataclass(frozen=True)
class CodewordSeq:
    """Output blocks v_0, v_1, ... of an encoder run from the zero state."""
    blocks: tuple[tuple[int, ...], ...]

    @property
    def weight(self) -> int:
        return sum(sum(v) for v in self.blocks)

    def to_array(self) -> np.ndarray:
        return np.array(self.blocks, dtype=np.uint8).reshape(len(self.blocks), -1)


def _row_taps(code: ConvCode) -> list[list[int]]:
    """taps[i][k] = packed output contribution of u_{i,t-k}."""
    return [
        [vec_to_int(code.G.row_coefficient(i, k)) for k in range(max(nu, 0) + 1)]
        for i, nu in enumerate(code.row_degrees)
    ]


def encode(code: ConvCode, u: Sequence[Sequence[int]] | np.ndarray, terminate: bool = True) -> CodewordSeq:
    """v(z) = u(z) G(z) for information blocks u_t in GF(2)^b.

    Args:
        code: Analyzed generator matrix
        u: L information b-tuples
        terminate: Append nu_max zero blocks so the encoder returns to zero

    Returns:
        L (+ nu_max) output c-tuples
    """
    U = np.asarray(u, dtype=np.int64).reshape(1, -1, code.b)
    V = encode_batch(code, U, terminate)[0]
    return CodewordSeq(tuple(tuple(int(x) for x in row) for row in V))


def encode_batch(code: ConvCode, U: np.ndarray, terminate: bool = True) -> np.ndarray:
    """Encode frames at once: U has shape (frames, L, b), result (frames, L', c) uint8."""
    U = np.asarray(U, dtype=np.uint8)
    if terminate:
        pad = np.zeros((U.shape[0], code.nu_max, code.b), dtype=np.uint8)
        U = np.concatenate([U, pad], axis=1)
    L = U.shape[1]
    V = np.zeros((U.shape[0], L, code.c), dtype=np.uint8)
    for i, nu in enumerate(code.row_degrees):
        for k in range(min(nu + 1, L)):
            g = code.G.row_coefficient(i, k)
            V[:, k:] ^= U[:, : L - k, i, None] & g
    return V


@dataclass(frozen=True)
class StateGraph:
    """State transition diagram of the controller-canonical encoder.

    next_state[s, u] and output[s, u] are indexed by packed state and input.
    """
    code: ConvCode
    next_state: np.ndarray
    output: np.ndarray
    input_weight: np.ndarray = field(repr=False)

    @property
    def num_states(self) -> int:
        return self.next_state.shape[0]

    @property
    def num_inputs(self) -> int:
        return self.next_state.shape[1]

    def output_weight(self) -> np.ndarray:
        """Hamming weight of every branch output, shape (states, inputs)."""
        table = np.array([v.bit_count() for v in range(1 << self.code.c)], dtype=np.int64)
        return table[self.output]

    def transitions(self) -> Iterator[tuple[int, int, int, int]]:
        """(state, input, next state, output) for every branch."""
        for s in range(self.num_states):
            for u in range(self.num_inputs):
                yield s, u, int(self.next_state[s, u]), int(self.output[s, u])

    def predecessors(self) -> np.ndarray:
        """pred[s2] = flat branch indices s * 2^b + u entering s2, ascending by (s, u)."""
        flat = self.next_state.reshape(-1)
        order = np.argsort(flat, kind="stable")
        return order.reshape(self.num_states, -1)

    def weighted_digraph(self, drop_zero_loop: bool = True) -> nx.DiGraph:
        """Simple digraph keeping the lightest branch between each state pair."""
        w = self.output_weight()
        g = nx.DiGraph()
        g.add_nodes_from(range(self.num_states))
        for s, u, s2, _ in self.transitions():
            if drop_zero_loop and s == 0 and u == 0:
                continue
            wt = int(w[s, u])
            if not g.has_edge(s, s2) or g[s][s2]["weight"] > wt:
                g.add_edge(s, s2, weight=wt)
        return g


def build_state_graph(code: ConvCode, require_minimal: bool = True) -> StateGraph:
    """Controller-canonical realization with 2^delta states and 2^b branches each.

    Args:
        code: Analyzed generator matrix
        require_minimal: Reject non-minimal-basic generators (needed for
            slope, free distance and transfer functions). When False the
            graph is still built, with a warning.

    Raises:
        CodeError: E301 for a non-minimal-basic generator when required,
            E302 if the degree exceeds MAX_DEGREE
    """
    if code.degree > MAX_DEGREE:
        raise CodeError("E302", f"degree {code.degree} exceeds the cap of {MAX_DEGREE}")
    if not code.minimal_basic:
        if require_minimal:
            raise CodeError(
                "E301",
                f"generator {code.G} is not minimal-basic",
                hint="slope and distance are defined on a minimal encoder"
            )
        logger.warning("Building the state graph of non-minimal-basic generator %s", code.G)

    taps = _row_taps(code)
    nus = [max(nu, 0) for nu in code.row_degrees]
    delta = sum(nus)
    S, U = 1 << delta, 1 << code.b

    # cell positions, MSB first: row i occupies bits [off_i, off_i + nu_i)
    offsets = np.cumsum([0] + nus[:-1]).tolist()

    def cells(s: int) -> list[list[int]]:
        sigma = int_to_vec(s, delta)
        return [list(sigma[o:o + nu]) for o, nu in zip(offsets, nus)]

    next_state = np.zeros((S, U), dtype=np.int64)
    output = np.zeros((S, U), dtype=np.int64)
    for s in range(S):
        rows = cells(s)
        mem_out = 0
        for i, row in enumerate(rows):
            for k, bit in enumerate(row, start=1):
                if bit:
                    mem_out ^= taps[i][k]
        for u in range(U):
            ubits = int_to_vec(u, code.b)
            v = mem_out
            new_sigma: list[int] = []
            for i, row in enumerate(rows):
                if ubits[i]:
                    v ^= taps[i][0]
                if nus[i]:
                    new_sigma.extend([ubits[i]] + row[:-1])
            next_state[s, u] = vec_to_int(new_sigma) if new_sigma else 0
            output[s, u] = v

    input_weight = np.array([u.bit_count() for u in range(U)], dtype=np.int64)
    for arr in (next_state, output, input_weight):
        arr.setflags(write=False)
    logger.debug("Built state graph for %s: %d states, %d branches each", code.G, S, U)
    return StateGraph(code=code, next_state=next_state, output=output, input_weight=input_weight)


def iter_rate_1_generators(c: int, max_degree: int) -> Iterator[BinPolyMatrix]:
    """Every 1 x c polynomial generator with row degree 1..max_degree."""
    for nu in range(1, max_degree + 1):
        for polys in product(range(1 << (nu + 1)), repeat=c):
            if max(p.bit_length() for p in polys) - 1 != nu:
                continue
            yield BinPolyMatrix([[BinPoly(p) for p in polys]])
