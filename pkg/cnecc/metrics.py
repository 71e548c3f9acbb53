"""
CNECC Metrics Collection

Tracks wall time, decoded volume and early stops for Monte Carlo sweeps.
"""

import statistics
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List


@dataclass
class PointMetrics:
    """Metrics for one (sink, side, p_e) sweep point."""
    sink: str
    side: str
    p_e: float
    frames: int
    bits: int
    bit_errors: int
    wall_ms: float
    early_stop: bool
    timestamp: float = field(default_factory=time.time)


class SimMetrics:
    """Metrics collection for simulation sweeps.

    Tracks:
    - Frames and information bits decoded per point
    - Wall time per point (P50, P95)
    - How many points stopped early on the error target

    Example:
        metrics = SimMetrics()
        metrics.record_point(sink="T1", side="input", p_e=0.01, frames=64,
                             bits=64000, bit_errors=210, wall_ms=812.0,
                             early_stop=True)
        print(metrics.get_summary())
    """

    def __init__(self):
        """Initialize metrics collector."""
        self.points: List[PointMetrics] = []

        self.counters = {
            "points_total": 0,
            "points_early_stop": 0,
            "frames_total": 0,
            "bits_total": 0,
        }

        self.histograms = {
            "wall_ms": [],
        }

        self.by_sink = defaultdict(lambda: {"count": 0, "bits": 0, "bit_errors": 0})

    def record_point(
        self,
        sink: str,
        side: str,
        p_e: float,
        frames: int,
        bits: int,
        bit_errors: int,
        wall_ms: float,
        early_stop: bool = False
    ):
        """Record one finished sweep point.

        Args:
            sink: Sink id
            side: Decode side ("input" or "output")
            p_e: Edge crossover probability
            frames: Frames simulated
            bits: Information bits decoded
            bit_errors: Information bit errors
            wall_ms: Wall time in milliseconds
            early_stop: Whether the error target ended the point
        """
        self.points.append(PointMetrics(sink, side, p_e, frames, bits, bit_errors, wall_ms, early_stop))

        self.counters["points_total"] += 1
        self.counters["frames_total"] += frames
        self.counters["bits_total"] += bits
        if early_stop:
            self.counters["points_early_stop"] += 1

        self.histograms["wall_ms"].append(wall_ms)

        key = f"{sink}/{side}"
        self.by_sink[key]["count"] += 1
        self.by_sink[key]["bits"] += bits
        self.by_sink[key]["bit_errors"] += bit_errors

    def get_p50_wall(self) -> float:
        walls = self.histograms["wall_ms"]
        return statistics.median(walls) if walls else 0.0

    def get_p95_wall(self) -> float:
        walls = sorted(self.histograms["wall_ms"])
        if not walls:
            return 0.0
        idx = int(len(walls) * 0.95)
        return walls[idx] if idx < len(walls) else walls[-1]

    def get_total_wall(self) -> float:
        return sum(self.histograms["wall_ms"])

    def get_early_stop_rate(self) -> float:
        total = self.counters["points_total"]
        return self.counters["points_early_stop"] / total if total else 0.0

    def to_dict(self) -> Dict[str, object]:
        """Serializable totals, recorded in run manifests."""
        return {
            **self.counters,
            "wall_ms_total": self.get_total_wall(),
            "wall_ms_p50": self.get_p50_wall(),
            "wall_ms_p95": self.get_p95_wall(),
            "by_sink": {k: dict(v) for k, v in self.by_sink.items()},
        }

    def get_summary(self) -> str:
        """Get human-readable metrics summary.

        Returns:
            Formatted string with key metrics
        """
        if self.counters["points_total"] == 0:
            return "No metrics collected yet"

        lines = [
            "CNECC Simulation Metrics",
            "=" * 60,
            f"\nPoints: {self.counters['points_total']}"
            f"  (early stop {self.get_early_stop_rate() * 100:5.1f}%)",
            f"Frames: {self.counters['frames_total']}",
            f"Bits:   {self.counters['bits_total']}",
            "",
            "Wall time:",
            f"  P50 per point: {self.get_p50_wall():8.1f} ms",
            f"  P95 per point: {self.get_p95_wall():8.1f} ms",
            f"  Total:         {self.get_total_wall() / 1000:8.2f} s",
        ]

        lines.append("\nPer-Sink Breakdown:")
        for key, stats in sorted(self.by_sink.items()):
            ber = stats["bit_errors"] / stats["bits"] if stats["bits"] else 0.0
            lines.append(f"  {key}: {stats['count']} points, {stats['bits']} bits, pooled BER {ber:.3e}")

        return "\n".join(lines)

    def reset(self):
        """Reset all metrics (for testing)."""
        self.points = []
        self.counters = {k: 0 for k in self.counters}
        self.histograms = {k: [] for k in self.histograms}
        self.by_sink = defaultdict(lambda: {"count": 0, "bits": 0, "bit_errors": 0})
