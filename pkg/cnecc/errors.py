"""
Error taxonomy for the CNECC toolkit.

Error code ranges:
- E001-E099: Parse errors (polynomial/code text, network JSON, manifests)
- E100-E199: GF(2) algebra errors
- E200-E299: Network model and network code errors
- E300-E399: Convolutional code errors
- E400-E499: Error-statistics and transfer-function analysis errors
- E500-E599: Simulation errors
"""


class CNECCError(Exception):
    """Base class for all CNECC errors."""

    def __init__(
        self,
        code: str,
        message: str,
        loc: tuple[int, int] | None = None,
        hint: str | None = None
    ):
        """
        Initialize CNECC error.

        Args:
            code: Error code (e.g., "E001")
            message: Human-readable error message
            loc: Optional (line, column) location in the offending text
            hint: Optional suggestion for fixing the error
        """
        self.code = code
        self.message = message
        self.loc = loc
        self.hint = hint
        super().__init__(f"[{code}] {message}")


class ParseError(CNECCError):
    """Malformed polynomial, code or network text (E001-E099)."""
    pass


class AlgebraError(CNECCError):
    """GF(2) arithmetic errors (E100-E199)."""
    pass


class NetworkError(CNECCError):
    """Network model and network code errors (E200-E299)."""
    pass


class CodeError(CNECCError):
    """Convolutional code errors (E300-E399)."""
    pass


class AnalysisError(CNECCError):
    """Error statistics and bound evaluation errors (E400-E499)."""
    pass


class DivergenceError(AnalysisError):
    """Generating function series does not converge (E404)."""
    pass


class SimulationError(CNECCError):
    """Monte Carlo simulation errors (E500-E599)."""
    pass


# Specific error codes:
#
# E001: Unexpected character or token in polynomial/code text
# E002: Coefficient other than 0/1, or inconsistent nesting depth
# E003: Network JSON failed schema validation
# E004: Manifest failed schema validation
#
# E101: Dimension mismatch
# E102: Singular matrix
# E103: Generator matrix is rank deficient
#
# E201: Network graph has a cycle
# E202: Local encoding coefficient between non-adjacent edges
# E203: Matrix dimensions inconsistent with the network
# E204: Sink transfer matrix is singular
# E205: Unknown sink
#
# E301: Generator matrix is not minimal-basic
# E302: Degree exceeds the state-graph cap
#
# E401: Enumeration cap exceeded
# E402: p_e out of range
# E403: lambda must be positive
# E404: Generating function diverges at this point
# E405: Too few edges for the threshold formula
#
# E501: Received sequence length mismatch
# E502: Invalid simulation configuration
