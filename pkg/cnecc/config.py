"""
CNECC Configuration Module

Centralized numeric and runtime settings for the analyses and the simulator.
Loads settings from environment variables with sensible defaults.
"""

import os
from dataclasses import dataclass
from typing import Optional


@dataclass
class CNECCConfig:
    """Configuration for exact enumeration, bound evaluation and simulation.

    Every field has a default that reproduces the documented behaviour;
    environment variables only override them.
    """

    # ====================
    # Exact error statistics
    # ====================

    enumeration_cap: int = 1 << 24
    """Largest number of network-error vectors enumerated exactly.

    Full distributions need all 2^|E| vectors; beyond the cap only
    weight-limited spectra are offered.
    """

    bisection_tolerance: float = 1e-6
    """Absolute tolerance on p_e when bisecting for dominance thresholds."""

    bisection_max_iter: int = 100
    """Iteration cap for threshold bisection."""

    # ====================
    # Transfer-function bound
    # ====================

    epsilon: float = 1e-4
    """Step of the forward difference approximating dT/dI at I = 1."""

    divergence_residual: float = 1e-6
    """Linear-solve residual above which the series is declared divergent."""

    # ====================
    # Simulation
    # ====================

    frame_length: int = 1000
    """Information b-tuples per simulated frame (before termination)."""

    max_errors: int = 200
    """Stop a sweep point once every sink has this many bit errors."""

    chunk_size: int = 64
    """Frames simulated together in one vectorized batch."""

    threads: int = 1
    """Worker threads for simulation chunks."""

    rng: str = "PCG64"
    """numpy bit generator pinned for reproducible streams."""

    @classmethod
    def from_env(cls) -> "CNECCConfig":
        """Load configuration from environment variables.

        Environment variables:
          CNECC_ENUMERATION_CAP - Max vectors for exact enumeration
          CNECC_BISECTION_TOL - Threshold bisection tolerance
          CNECC_BISECTION_MAX_ITER - Threshold bisection iteration cap
          CNECC_EPSILON - Forward-difference step for the BER bound
          CNECC_DIVERGENCE_RESIDUAL - Residual that flags divergence
          CNECC_FRAME_LENGTH - Default frame length in b-tuples
          CNECC_MAX_ERRORS - Early-stop bit error count
          CNECC_CHUNK_SIZE - Frames per vectorized batch
          CNECC_THREADS - Default worker thread count

        Returns:
            CNECCConfig instance with values from environment
        """
        return cls(
            enumeration_cap=int(os.getenv("CNECC_ENUMERATION_CAP", str(1 << 24))),
            bisection_tolerance=float(os.getenv("CNECC_BISECTION_TOL", "1e-6")),
            bisection_max_iter=int(os.getenv("CNECC_BISECTION_MAX_ITER", "100")),
            epsilon=float(os.getenv("CNECC_EPSILON", "1e-4")),
            divergence_residual=float(os.getenv("CNECC_DIVERGENCE_RESIDUAL", "1e-6")),
            frame_length=int(os.getenv("CNECC_FRAME_LENGTH", "1000")),
            max_errors=int(os.getenv("CNECC_MAX_ERRORS", "200")),
            chunk_size=int(os.getenv("CNECC_CHUNK_SIZE", "64")),
            threads=int(os.getenv("CNECC_THREADS", "1")),
        )

    def validate(self) -> None:
        """Validate configuration settings.

        Raises:
            ValueError: If configuration is invalid
        """
        if self.enumeration_cap < 1:
            raise ValueError(
                f"enumeration_cap must be >= 1, got {self.enumeration_cap}"
            )

        if not (0.0 < self.bisection_tolerance < 0.5):
            raise ValueError(
                f"bisection_tolerance must be in (0, 0.5), got {self.bisection_tolerance}"
            )

        if self.bisection_max_iter < 1:
            raise ValueError(
                f"bisection_max_iter must be >= 1, got {self.bisection_max_iter}"
            )

        if not (0.0 < self.epsilon <= 0.01):
            raise ValueError(f"epsilon must be in (0, 0.01], got {self.epsilon}")

        if self.frame_length < 1:
            raise ValueError(f"frame_length must be >= 1, got {self.frame_length}")

        if self.max_errors < 1:
            raise ValueError(f"max_errors must be >= 1, got {self.max_errors}")

        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")

        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")

        if self.rng != "PCG64":
            raise ValueError(f"only the PCG64 generator is supported, got {self.rng}")

    def get_summary(self) -> str:
        """Get human-readable configuration summary.

        Returns:
            Formatted string describing current configuration
        """
        lines = [
            "CNECC Configuration Summary",
            "=" * 50,
            "",
            "Exact statistics:",
            f"  Enumeration cap: {self.enumeration_cap}",
            f"  Bisection: tol={self.bisection_tolerance}, max_iter={self.bisection_max_iter}",
            "",
            "BER bound:",
            f"  Epsilon: {self.epsilon}",
            f"  Divergence residual: {self.divergence_residual}",
            "",
            "Simulation:",
            f"  Frame length: {self.frame_length}",
            f"  Max errors/point: {self.max_errors}",
            f"  Chunk size: {self.chunk_size}",
            f"  Threads: {self.threads}",
            f"  RNG: {self.rng}",
        ]
        return "\n".join(lines)


# Default configuration instance (lazy-loaded from environment)
_default_config: Optional[CNECCConfig] = None


def get_default_config() -> CNECCConfig:
    """Get default configuration instance (singleton pattern).

    Returns:
        Default CNECCConfig loaded from environment
    """
    global _default_config
    if _default_config is None:
        _default_config = CNECCConfig.from_env()
        _default_config.validate()
    return _default_config


def set_default_config(config: Optional[CNECCConfig]) -> None:
    """Install (or with None, forget) the default configuration instance."""
    global _default_config
    if config is not None:
        config.validate()
    _default_config = config
