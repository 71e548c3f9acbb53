"""
Acyclic multigraph network with an n-dimensional binary network code.

An edge carries one GF(2) symbol per network use. The code is described by
the source matrix A (n x |E|), the local encoding matrix K (|E| x |E|,
K[e, f] = coefficient from edge e into edge f) and, per sink T, the matrix
B^T (|E| x n). The global transfer is F = sum_i K^i and the sink transfer
matrix is M_T = A F B^T.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Sequence

import networkx as nx
import numpy as np

from ..algebra.f2 import BinMatrix, BinPolyMatrix, mat_inverse, mat_mul, polymat_eval_compose, rank, vec_mat
from ..errors import AlgebraError, NetworkError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    """Directed unit-capacity edge."""
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Network:
    """Acyclic directed multigraph with one source and a set of sinks."""
    n: int
    edges: tuple[Edge, ...]
    source: str
    sinks: tuple[str, ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_index(self, edge_id: str) -> int:
        for i, e in enumerate(self.edges):
            if e.id == edge_id:
                return i
        raise NetworkError("E203", f"unknown edge {edge_id!r}")

    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_node(self.source)
        g.add_nodes_from(self.sinks)
        for i, e in enumerate(self.edges):
            g.add_edge(e.tail, e.head, key=i, id=e.id)
        return g

    def topological_edge_order(self) -> list[int]:
        """Edge indices ordered so every edge follows the edges entering its tail."""
        order = {node: k for k, node in enumerate(nx.topological_sort(self.graph()))}
        return sorted(range(self.num_edges), key=lambda i: (order[self.edges[i].tail], i))


@dataclass(frozen=True)
class NetworkCode:
    """Binary linear network code: source matrix A, local encoding K, sink maps B^T."""
    A: BinMatrix
    K: BinMatrix
    B: Mapping[str, BinMatrix]

    def __post_init__(self):
        object.__setattr__(self, "B", MappingProxyType(dict(self.B)))


@dataclass
class Check:
    """Outcome of one validation check."""
    name: str
    passed: bool
    detail: str = ""
    subject: Optional[str] = None  # offending edge or sink


@dataclass
class Diagnostics:
    """Structured pass/fail report from validate()."""
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self, name: Optional[str] = None) -> List[Check]:
        return [c for c in self.checks if not c.passed and (name is None or c.name == name)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail, "subject": c.subject}
                for c in self.checks
            ],
        }


@dataclass(frozen=True)
class TransferSet:
    """Global transfer F and per-sink matrices M_T = A F B^T."""
    F: BinMatrix
    M: Mapping[str, BinMatrix]
    sink_maps: Mapping[str, BinMatrix]  # F B^T per sink, |E| x n

    @property
    def num_edges(self) -> int:
        return self.F.rows

    @property
    def n(self) -> int:
        return next(iter(self.M.values())).rows

    def sinks(self) -> list[str]:
        return list(self.M)

    def invertible(self, sink: str) -> bool:
        return rank(self._m(sink)) == self._m(sink).rows

    def M_inv(self, sink: str) -> BinMatrix:
        try:
            return mat_inverse(self._m(sink))
        except AlgebraError as e:
            raise NetworkError("E204", f"transfer matrix of sink {sink!r} is singular", hint=e.hint) from e

    def output_code(self, g: BinPolyMatrix, sink: str) -> BinPolyMatrix:
        """G_O,T(z) = G_I(z) M_T."""
        return polymat_eval_compose(g, self._m(sink))

    def _m(self, sink: str) -> BinMatrix:
        if sink not in self.M:
            raise NetworkError("E205", f"unknown sink {sink!r}", hint=f"sinks: {list(self.M)}")
        return self.M[sink]


def _dimension_checks(net: Network, code: NetworkCode) -> List[Check]:
    E, n = net.num_edges, net.n
    checks = [
        Check("dimensions", net.n >= 1, f"n = {net.n}"),
        Check("dimensions", code.A.rows == n and code.A.cols == E,
              f"A is {code.A.rows}x{code.A.cols}, expected {n}x{E}", "A"),
        Check("dimensions", code.K.rows == E and code.K.cols == E,
              f"K is {code.K.rows}x{code.K.cols}, expected {E}x{E}", "K"),
        Check("dimensions", len({e.id for e in net.edges}) == E, "edge ids are unique"),
    ]
    for sink in net.sinks:
        b = code.B.get(sink)
        if b is None:
            checks.append(Check("dimensions", False, "no B^T matrix for sink", sink))
        else:
            checks.append(Check("dimensions", b.rows == E and b.cols == n,
                                f"B^T is {b.rows}x{b.cols}, expected {E}x{n}", sink))
    return checks


def validate(net: Network, code: NetworkCode) -> Diagnostics:
    """Check acyclicity, adjacency of A/K/B^T, dimensions, nilpotency and sink ranks.

    Never raises for a malformed code; every failed check names the
    offending edge, matrix or sink.
    """
    diag = Diagnostics(_dimension_checks(net, code))
    if not diag.ok:
        return diag

    g = net.graph()
    if nx.is_directed_acyclic_graph(g):
        diag.checks.append(Check("acyclic", True))
    else:
        cycle = nx.find_cycle(g)
        path = " -> ".join(str(u) for u, *_ in cycle)
        diag.checks.append(Check("acyclic", False, f"cycle through {path}", str(cycle[0][0])))

    K = code.K.array
    bad = [
        (net.edges[e], net.edges[f])
        for e, f in zip(*np.nonzero(K))
        if net.edges[e].head != net.edges[f].tail
    ]
    for e, f in bad:
        diag.checks.append(Check("adjacency", False,
                                 f"K[{e.id},{f.id}] = 1 but head({e.id}) != tail({f.id})", e.id))
    if not bad:
        diag.checks.append(Check("adjacency", True, "K respects edge adjacency"))

    for j in np.nonzero(code.A.array.any(axis=0))[0]:
        e = net.edges[j]
        if e.tail != net.source:
            diag.checks.append(Check("adjacency", False, f"A feeds edge {e.id} not leaving the source", e.id))

    for sink in net.sinks:
        for i in np.nonzero(code.B[sink].array.any(axis=1))[0]:
            e = net.edges[i]
            if e.head != sink:
                diag.checks.append(Check("adjacency", False, f"B^T of {sink} reads edge {e.id} not entering it", e.id))

    P = code.K
    for _ in range(net.num_edges - 1):
        P = mat_mul(P, code.K)
    diag.checks.append(Check("nilpotent", P.is_zero(), "K^|E| = 0"))

    if diag.ok:
        tf = _transfer(net, code)
        for sink in net.sinks:
            r = rank(tf.M[sink])
            diag.checks.append(Check("rank", r == net.n, f"rank(M_T) = {r}, need {net.n}", sink))
    return diag


def _transfer(net: Network, code: NetworkCode) -> TransferSet:
    E = net.num_edges
    F = BinMatrix.identity(E)
    P = BinMatrix.identity(E)
    for _ in range(E):
        P = mat_mul(P, code.K)
        if P.is_zero():
            break
        F = F + P
    AF = mat_mul(code.A, F)
    M = {sink: mat_mul(AF, code.B[sink]) for sink in net.sinks}
    sink_maps = {sink: mat_mul(F, code.B[sink]) for sink in net.sinks}
    return TransferSet(F=F, M=MappingProxyType(M), sink_maps=MappingProxyType(sink_maps))


def compute_transfer(net: Network, code: NetworkCode) -> TransferSet:
    """F as the finite geometric series of nilpotent K, and M_T per sink.

    Rank deficiency is not an error here; it shows up in TransferSet.invertible.

    Raises:
        NetworkError: If any validation check other than rank fails
    """
    diag = validate(net, code)
    codes = {"dimensions": "E203", "acyclic": "E201", "adjacency": "E202", "nilpotent": "E201"}
    for c in diag.failures():
        if c.name != "rank":
            raise NetworkError(codes[c.name], c.detail, hint=f"subject: {c.subject}")
    tf = _transfer(net, code)
    logger.debug("Computed transfer for %d edges, sinks %s", net.num_edges, list(tf.M))
    return tf


def sink_error(w: Sequence[int] | np.ndarray, tf: TransferSet, sink: str) -> np.ndarray:
    """Error seen at a sink, y = w F B^T. Accepts a batch along leading axes."""
    if sink not in tf.sink_maps:
        raise NetworkError("E205", f"unknown sink {sink!r}")
    return vec_mat(w, tf.sink_maps[sink])


def propagate(
    net: Network,
    code: NetworkCode,
    x: Sequence[int],
    w: Optional[Sequence[int]] = None
) -> Dict[str, np.ndarray]:
    """Edge-by-edge transmission of one network use.

    Walks edges in topological order, each edge XOR-combining its source
    injection and upstream edges, then flipping if w marks it in error.

    Returns:
        Mapping sink -> received n-vector
    """
    E = net.num_edges
    w = np.zeros(E, dtype=np.uint8) if w is None else np.asarray(w, dtype=np.uint8)
    x = np.asarray(x, dtype=np.int64)
    A, K = code.A.array, code.K.array
    sym = np.zeros(E, dtype=np.uint8)
    for e in net.topological_edge_order():
        s = int(x @ A[:, e]) & 1
        for f in np.nonzero(K[:, e])[0]:
            s ^= int(sym[f])
        sym[e] = s ^ int(w[e])
    return {sink: vec_mat(sym, code.B[sink]) for sink in net.sinks}
