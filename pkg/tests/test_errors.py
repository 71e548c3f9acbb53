"""
Tests for the CNECC error taxonomy.
"""

import pytest
from cnecc.errors import (
    CNECCError,
    ParseError,
    AlgebraError,
    NetworkError,
    CodeError,
    AnalysisError,
    DivergenceError,
    SimulationError,
)


def test_error_has_code():
    """Error has code attribute and includes it in string representation."""
    err = ParseError("E001", "test message")
    assert err.code == "E001"
    assert "[E001]" in str(err)


def test_error_has_message():
    """Error has message attribute."""
    err = ParseError("E001", "test message")
    assert err.message == "test message"
    assert "test message" in str(err)


def test_error_with_location():
    """Error can store location information."""
    err = ParseError("E001", "test", loc=(5, 10))
    assert err.loc == (5, 10)


def test_error_with_hint():
    """Error can store hint for fixing."""
    err = CodeError("E301", "test", hint="Use a minimal-basic generator")
    assert err.hint == "Use a minimal-basic generator"


def test_error_with_all_fields():
    """Error can have code, message, location, and hint."""
    err = ParseError(
        code="E001",
        message="unexpected input",
        loc=(1, 4),
        hint="polynomials are [1,1,1] or 1+z+z^2"
    )
    assert err.code == "E001"
    assert err.message == "unexpected input"
    assert err.loc == (1, 4)
    assert err.hint == "polynomials are [1,1,1] or 1+z+z^2"


def test_error_defaults():
    """Location and hint default to None."""
    err = AlgebraError("E102", "singular")
    assert err.loc is None
    assert err.hint is None


@pytest.mark.parametrize("cls", [
    ParseError, AlgebraError, NetworkError, CodeError, AnalysisError, SimulationError
])
def test_every_error_is_cnecc_error(cls):
    """Each family inherits from CNECCError and Exception."""
    err = cls("E000", "test")
    assert isinstance(err, CNECCError)
    assert isinstance(err, Exception)


def test_divergence_error_is_analysis_error():
    """DivergenceError is caught by AnalysisError handlers."""
    err = DivergenceError("E404", "series diverges")
    assert isinstance(err, AnalysisError)
    assert isinstance(err, CNECCError)


def test_can_raise_and_catch():
    """Errors can be raised and caught by the base class."""
    with pytest.raises(CNECCError) as exc_info:
        raise NetworkError("E204", "transfer matrix is singular")
    assert exc_info.value.code == "E204"
    assert isinstance(exc_info.value, NetworkError)
