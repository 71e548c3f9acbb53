"""
Builtin 9-edge butterfly network with a binary network code.

Edge numbering (canonical for tests):

    e1: s  -> v1     e4: v1 -> v3     e7: v3 -> v4
    e2: s  -> v2     e5: v2 -> v3     e8: v4 -> T1
    e3: v1 -> T1     e6: v2 -> T2     e9: v4 -> T2

Source symbols x1, x2 enter on e1, e2; v3 forwards x1 + x2 on the bottleneck
e7. T1 reads (e3, e8) = (x1, x1 + x2) and T2 reads (e9, e6) = (x1 + x2, x2),
giving M_T1 = [[1,1],[0,1]] and M_T2 = [[1,0],[1,1]].
"""

from ..algebra.f2 import BinMatrix
from .model import Edge, Network, NetworkCode

BUTTERFLY_EDGES = (
    ("e1", "s", "v1"),
    ("e2", "s", "v2"),
    ("e3", "v1", "T1"),
    ("e4", "v1", "v3"),
    ("e5", "v2", "v3"),
    ("e6", "v2", "T2"),
    ("e7", "v3", "v4"),
    ("e8", "v4", "T1"),
    ("e9", "v4", "T2"),
)

# (from edge, into edge) pairs with local coefficient 1
BUTTERFLY_COEFFICIENTS = (
    ("e1", "e3"), ("e1", "e4"),
    ("e2", "e5"), ("e2", "e6"),
    ("e4", "e7"), ("e5", "e7"),
    ("e7", "e8"), ("e7", "e9"),
)

# sink -> edge read into each output coordinate
BUTTERFLY_SINK_INPUTS = {
    "T1": ("e3", "e8"),
    "T2": ("e9", "e6"),
}


def builtin_butterfly() -> tuple[Network, NetworkCode]:
    """The standard 2-dimensional butterfly network and its network code."""
    net = Network(
        n=2,
        edges=tuple(Edge(i, t, h) for i, t, h in BUTTERFLY_EDGES),
        source="s",
        sinks=("T1", "T2"),
    )
    E = net.num_edges
    idx = {e.id: k for k, e in enumerate(net.edges)}

    A = [[0] * E for _ in range(net.n)]
    A[0][idx["e1"]] = 1
    A[1][idx["e2"]] = 1

    K = [[0] * E for _ in range(E)]
    for e, f in BUTTERFLY_COEFFICIENTS:
        K[idx[e]][idx[f]] = 1

    B = {}
    for sink, reads in BUTTERFLY_SINK_INPUTS.items():
        bt = [[0] * net.n for _ in range(E)]
        for col, edge_id in enumerate(reads):
            bt[idx[edge_id]][col] = 1
        B[sink] = BinMatrix(bt)

    return net, NetworkCode(A=BinMatrix(A), K=BinMatrix(K), B=B)
