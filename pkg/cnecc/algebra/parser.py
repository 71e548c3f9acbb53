from functools import lru_cache
from pathlib import Path

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from ..errors import ParseError
from .f2 import BinPoly, BinPolyMatrix

GRAMMAR_PATH = Path(__file__).resolve().parents[1] / "spec" / "code_grammar.lark"


class _Scalar(int):
    """A bare 0/1 constant: a coefficient inside a list, or a constant polynomial."""


class _List(list):
    loc: tuple[int, int] | None = None


class ToValues(Transformer):
    def const(self, items):
        return _Scalar(int(items[0].value))

    def zpow(self, items):
        power = int(items[0].value) if items else 1
        return BinPoly.monomial(power)

    def expr(self, items):
        if len(items) == 1:
            return items[0]
        acc = BinPoly(0)
        for it in items:
            acc = acc + (BinPoly(int(it)) if isinstance(it, _Scalar) else it)
        return acc

    @v_args(meta=True)
    def list(self, meta, items):
        out = _List(items)
        if not meta.empty:
            out.loc = (meta.line, meta.column)
        return out


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(GRAMMAR_PATH.read_text(), start="start", parser="lalr", propagate_positions=True)


def _parse(text: str):
    try:
        tree = _parser().parse(text)
    except UnexpectedInput as e:
        raise ParseError(
            "E001",
            f"unexpected input at line {e.line}, column {e.column}",
            loc=(e.line, e.column),
            hint="polynomials are [1,1,1] or 1+z+z^2; codes are lists of rows"
        ) from e
    try:
        return ToValues().transform(tree)
    except VisitError as e:
        raise ParseError("E002", str(e.orig_exc)) from e


def _is_poly_like(node) -> bool:
    if isinstance(node, (_Scalar, BinPoly)):
        return True
    return isinstance(node, list) and all(isinstance(x, _Scalar) for x in node)


def _to_poly(node) -> BinPoly:
    if isinstance(node, _Scalar):
        return BinPoly(int(node))
    if isinstance(node, BinPoly):
        return node
    return BinPoly.from_coeffs(int(x) for x in node)


def _to_row(node: list) -> list[BinPoly]:
    if not node or not all(_is_poly_like(x) for x in node):
        raise ParseError(
            "E002",
            "a row must be a non-empty list of polynomials",
            loc=getattr(node, "loc", None)
        )
    return [_to_poly(x) for x in node]


def parse_poly(text: str) -> BinPoly:
    """Parse one polynomial, e.g. "[1,1,1]" or "1+z+z^2" (both 1+z+z^2).

    Raises:
        ParseError: E001 on bad syntax, E002 on a nested list
    """
    node = _parse(text)
    if not _is_poly_like(node):
        raise ParseError("E002", "expected a single polynomial", loc=getattr(node, "loc", None))
    return _to_poly(node)


def parse_code(text: str) -> BinPolyMatrix:
    """Parse a generator matrix.

    A list whose items are all polynomials is a single row; a list of such
    lists is a matrix. A list of bare 0/1 values is a polynomial wherever a
    polynomial is expected, but at the top level it is read as one row of
    constants.

    Examples:
        >>> parse_code("[[ [1,1,1],[1,0,1] ]]")   # [1+z+z^2, 1+z^2]
        >>> parse_code("[ [1,1],[1] ]")            # [1+z, 1]
        >>> parse_code("[1, z]")                   # [1, z]
    """
    node = _parse(text)
    if not isinstance(node, list):
        raise ParseError("E002", "a code must be written as a list", hint="wrap it in [ ]")
    if all(isinstance(x, _Scalar) for x in node) and node:
        return BinPolyMatrix([[_to_poly(x) for x in node]])
    if node and all(_is_poly_like(x) for x in node):
        return BinPolyMatrix([_to_row(node)])
    if node and all(isinstance(x, list) and not _is_poly_like(x) for x in node):
        rows = [_to_row(x) for x in node]
        if len({len(r) for r in rows}) != 1:
            raise ParseError("E002", "rows have different lengths", loc=node.loc)
        return BinPolyMatrix(rows)
    raise ParseError("E002", "inconsistent nesting depth", loc=getattr(node, "loc", None))


def format_code(g: BinPolyMatrix) -> str:
    """Canonical coefficient-list text, inverse of parse_code for matrices."""
    rows = ", ".join(
        "[" + ",".join("[" + ",".join(str(c) for c in (p.coeffs or [0])) + "]" for p in r) + "]"
        for r in g.entries
    )
    return f"[{rows}]"
