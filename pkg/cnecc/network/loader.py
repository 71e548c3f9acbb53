"""
Network JSON files.

    {
      "n": 2,
      "edges": [{"id": "e1", "tail": "s", "head": "v1"}, ...],
      "source": "s",
      "sinks": ["T1", "T2"],
      "A": [[...], ...],            # n x |E|
      "K": [[...], ...],            # |E| x |E|
      "B": {"T1": [[...], ...]}     # per sink, |E| x n
    }
"""

import hashlib
import json
from pathlib import Path
from typing import Dict, List, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from ..algebra.f2 import BinMatrix
from ..errors import ParseError
from .model import Edge, Network, NetworkCode

Bit = int


def _check_bits(rows: List[List[int]]) -> List[List[int]]:
    widths = sorted({len(r) for r in rows})
    if len(widths) > 1:
        raise ValueError(f"rows must have equal length, got lengths {widths}")
    for r in rows:
        for v in r:
            if v not in (0, 1):
                raise ValueError(f"entry {v} is not 0 or 1")
    return rows


class EdgeModel(BaseModel):
    id: Union[str, int]
    tail: Union[str, int]
    head: Union[str, int]


class NetworkFile(BaseModel):
    n: int = Field(ge=1)
    edges: List[EdgeModel] = Field(min_length=1)
    source: Union[str, int]
    sinks: List[Union[str, int]] = Field(min_length=1)
    A: List[List[Bit]]
    K: List[List[Bit]]
    B: Dict[str, List[List[Bit]]]

    @field_validator("A", "K")
    @classmethod
    def check_binary(cls, rows: List[List[int]]) -> List[List[int]]:
        return _check_bits(rows)

    @field_validator("B")
    @classmethod
    def check_binary_maps(cls, maps: Dict[str, List[List[int]]]) -> Dict[str, List[List[int]]]:
        for rows in maps.values():
            _check_bits(rows)
        return maps


def parse_network(text: str) -> tuple[Network, NetworkCode]:
    """Parse network JSON text.

    Raises:
        ParseError: E001 for malformed JSON (with line/column), E003 for
            schema violations (with the field path)
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("E001", f"invalid JSON: {e.msg}", loc=(e.lineno, e.colno)) from e
    try:
        doc = NetworkFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        path = ".".join(str(p) for p in first["loc"])
        raise ParseError("E003", f"network file field {path}: {first['msg']}",
                         hint=f"{e.error_count()} schema error(s)") from e

    net = Network(
        n=doc.n,
        edges=tuple(Edge(str(e.id), str(e.tail), str(e.head)) for e in doc.edges),
        source=str(doc.source),
        sinks=tuple(str(s) for s in doc.sinks),
    )
    E = net.num_edges
    code = NetworkCode(
        A=BinMatrix(doc.A, cols=E),
        K=BinMatrix(doc.K, cols=E),
        B={s: BinMatrix(rows, cols=net.n) for s, rows in doc.B.items()},
    )
    return net, code


def load_network(path: Union[str, Path]) -> tuple[Network, NetworkCode]:
    """Load a network JSON file."""
    return parse_network(Path(path).read_text())


def to_json(net: Network, code: NetworkCode) -> dict:
    """Serializable form accepted by parse_network."""
    return {
        "n": net.n,
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in net.edges],
        "source": net.source,
        "sinks": list(net.sinks),
        "A": code.A.to_list(),
        "K": code.K.to_list(),
        "B": {s: code.B[s].to_list() for s in net.sinks if s in code.B},
    }


def text_digest(text: str) -> str:
    """Short content hash recorded in run manifests."""
    return hashlib.sha256(text.encode()).hexdigest()[:16]
