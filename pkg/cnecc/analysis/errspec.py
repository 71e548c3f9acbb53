"""
Exact network-error statistics at a sink when every edge is an independent
binary symmetric channel with crossover probability p_e.

A weight-i network error w reaches sink T as y = w F B^T. The spectrum
a[i][y] counts such w; everything else (exact distribution, single-edge
bounds, dominance thresholds) is evaluated from those integer counts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from typing import Dict, Iterable, List, Literal, Optional

import numpy as np

from ..algebra.f2 import BinMatrix, mat_inverse, vec_label, vec_mat, vec_to_int, int_to_vec
from ..config import get_default_config
from ..errors import AlgebraError, AnalysisError, NetworkError
from ..network.model import TransferSet

logger = logging.getLogger(__name__)

Side = Literal["input", "output"]

_BATCH = 1 << 16


@dataclass(frozen=True)
class SinkErrorSpectrum:
    """Counts a[i][y] of weight-i network errors producing sink error y."""
    sink: str
    num_edges: int
    n: int
    counts: np.ndarray = field(repr=False)  # shape (max_weight + 1, 2^n), int64

    @property
    def max_weight(self) -> int:
        return self.counts.shape[0] - 1

    @property
    def full(self) -> bool:
        return self.max_weight == self.num_edges

    def a(self, i: int, y: int) -> int:
        return int(self.counts[i, y])

    def single_edge_support(self) -> List[int]:
        """Nonzero y reachable by a single edge error (a[1][y] != 0)."""
        if self.max_weight < 1:
            return []
        return [y for y in range(1, 1 << self.n) if self.counts[1, y]]

    def to_rows(self) -> List[Dict[str, object]]:
        return [
            {"weight": i, "y": vec_label(y, self.n), "count": int(self.counts[i, y])}
            for i in range(self.max_weight + 1)
            for y in range(1 << self.n)
        ]


@dataclass(frozen=True)
class SinkErrorDist:
    """Exact probability p[y] of each sink error y at one p_e."""
    sink: str
    p_e: float
    side: Side
    probs: np.ndarray = field(repr=False)  # shape (2^n,)

    @property
    def n(self) -> int:
        return int(self.probs.shape[0]).bit_length() - 1

    def p(self, y: int) -> float:
        return float(self.probs[y])


@dataclass
class ThresholdReport:
    """Per-error-vector dominance thresholds at one sink."""
    sink: str
    lam: float
    proposition_bound: Optional[float]
    thresholds: Dict[str, float]

    @property
    def minimum(self) -> float:
        return min(self.thresholds.values()) if self.thresholds else 0.5

    def to_dict(self) -> Dict[str, object]:
        return {
            "sink": self.sink,
            "lambda": self.lam,
            "proposition_bound": self.proposition_bound,
            "thresholds": dict(self.thresholds),
            "min_threshold": self.minimum,
        }


def _packed_rows(m: BinMatrix) -> np.ndarray:
    return np.array([vec_to_int(row) for row in m.array], dtype=np.int64)


def _batches(items: Iterable[tuple], size: int) -> Iterable[list]:
    it = iter(items)
    while chunk := list(islice(it, size)):
        yield chunk


def compute_spectrum(
    tf: TransferSet,
    sink: str,
    max_weight: Optional[int] = None,
    cap: Optional[int] = None
) -> SinkErrorSpectrum:
    """Count a[i][y] by enumerating every network error of weight <= max_weight.

    Raises:
        AnalysisError: E401 if the enumeration exceeds the cap
    """
    E = tf.num_edges
    max_weight = E if max_weight is None else max_weight
    if not 0 <= max_weight <= E:
        raise AnalysisError("E401", f"max_weight {max_weight} outside 0..{E}")
    cap = get_default_config().enumeration_cap if cap is None else cap
    size = sum(math.comb(E, i) for i in range(max_weight + 1))
    if size > cap:
        raise AnalysisError(
            "E401",
            f"{size} error vectors exceed the enumeration cap {cap}",
            hint="lower --max-weight"
        )

    if sink not in tf.sink_maps:
        raise NetworkError("E205", f"unknown sink {sink!r}", hint=f"sinks: {list(tf.sink_maps)}")
    rows = _packed_rows(tf.sink_maps[sink])
    n = tf.n
    counts = np.zeros((max_weight + 1, 1 << n), dtype=np.int64)
    counts[0, 0] = 1
    for i in range(1, max_weight + 1):
        for chunk in _batches(combinations(range(E), i), _BATCH):
            y = np.bitwise_xor.reduce(rows[np.array(chunk)], axis=1)
            counts[i] += np.bincount(y, minlength=1 << n)
    logger.debug("Spectrum at %s: %d vectors up to weight %d", sink, size, max_weight)
    counts.setflags(write=False)
    return SinkErrorSpectrum(sink=sink, num_edges=E, n=n, counts=counts)


def _check_pe(p_e: float) -> None:
    if not 0.0 <= p_e < 0.5:
        raise AnalysisError("E402", f"p_e = {p_e} outside [0, 0.5)")


def _check_lambda(lam: float, allow_zero: bool = False) -> None:
    if lam < 0 or (lam == 0 and not allow_zero):
        raise AnalysisError("E403", f"lambda must be {'>= 0' if allow_zero else '> 0'}, got {lam}")


def _weight_probs(E: int, top: int, p_e):
    """p^i (1-p)^(E-i) for i = 0..top; exact when p_e is a Fraction."""
    return [p_e ** i * (1 - p_e) ** (E - i) for i in range(top + 1)]


def exact_dist(
    spec: SinkErrorSpectrum,
    p_e: float,
    side: Side = "input",
    M: Optional[BinMatrix] = None
) -> SinkErrorDist:
    """p[y] = sum_i a[i][y] p_e^i (1-p_e)^(|E|-i).

    On the input side the distribution is re-indexed by y -> y M_T^-1, the
    error the decoder sees after inverting the network transfer matrix.

    Raises:
        AnalysisError: E401 without a full-weight spectrum, E402 for p_e
            outside [0, 0.5)
        NetworkError: E204 for an input-side request without an
            invertible M_T
    """
    _check_pe(p_e)
    if not spec.full:
        raise AnalysisError("E401", "exact distribution needs the full-weight spectrum")
    weights = np.array(_weight_probs(spec.num_edges, spec.num_edges, float(p_e)))
    probs = weights @ spec.counts.astype(np.float64)
    if side == "input":
        if M is None:
            raise NetworkError("E204", "input-side distribution needs the sink transfer matrix")
        try:
            Minv = mat_inverse(M)
        except AlgebraError as e:
            raise NetworkError("E204", f"transfer matrix of {spec.sink} is singular") from e
        ys = np.array([int_to_vec(y, spec.n) for y in range(1 << spec.n)], dtype=np.int64)
        mapped = np.array([vec_to_int(r) for r in vec_mat(ys, Minv)], dtype=np.int64)
        reindexed = np.zeros_like(probs)
        reindexed[mapped] = probs
        probs = reindexed
    probs.setflags(write=False)
    return SinkErrorDist(sink=spec.sink, p_e=float(p_e), side=side, probs=probs)


def single_edge_bounds(spec: SinkErrorSpectrum, p_e: float, lam: float) -> Dict[int, float]:
    """Upper bounds on p[y] valid while single-edge errors dominate.

    y != 0 with a[1][y] != 0: a[1][y] (1 + 1/lam) p_e (1-p_e)^(|E|-1)
    y == 0:                   1 - sum of a[1][y] p_e (1-p_e)^(|E|-1) over those y
    """
    _check_lambda(lam)
    _check_pe(p_e)
    unit = p_e * (1 - p_e) ** (spec.num_edges - 1)
    support = spec.single_edge_support()
    bounds = {y: spec.a(1, y) * (1 + 1 / lam) * unit for y in support}
    bounds[0] = 1 - sum(spec.a(1, y) * unit for y in support)
    return bounds


def proposition_threshold(num_edges: int, lam: float) -> float:
    """Sufficient p_e for lam-dominance at every sink: 1/((|E|-1)(lam |E| - lam + 1))."""
    if num_edges < 2:
        raise AnalysisError("E405", f"need at least 2 edges, got {num_edges}")
    _check_lambda(lam)
    return 1.0 / ((num_edges - 1) * (lam * num_edges - lam + 1))


def _masses(spec: SinkErrorSpectrum, y: int, p_e):
    """Single-edge and multiple-edge probability mass of sink error y."""
    probs = _weight_probs(spec.num_edges, spec.max_weight, p_e)
    single = spec.a(1, y) * probs[1]
    multi = sum(spec.a(i, y) * probs[i] for i in range(2, spec.max_weight + 1))
    return single, multi


def dominance_holds(spec: SinkErrorSpectrum, p_e, lam: float, y: Optional[int] = None) -> bool:
    """Whether single-edge mass >= lam x multi-edge mass for y (or every y with a[1][y] != 0).

    Passing p_e as a fractions.Fraction makes the comparison exact.
    """
    if not spec.full:
        raise AnalysisError("E401", "dominance check needs the full-weight spectrum")
    targets = spec.single_edge_support() if y is None else [y]
    if isinstance(p_e, Fraction):
        lam = Fraction(lam)
    for t in targets:
        single, multi = _masses(spec, t, p_e)
        if single < lam * multi:
            return False
    return True


def empirical_threshold(
    spec: SinkErrorSpectrum,
    lam: float,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None
) -> ThresholdReport:
    """Largest p_e < 0.5 at which each sink error y stays lam-dominated, by bisection."""
    _check_lambda(lam, allow_zero=True)
    cfg = get_default_config()
    tol = cfg.bisection_tolerance if tol is None else tol
    max_iter = cfg.bisection_max_iter if max_iter is None else max_iter
    if not spec.full:
        raise AnalysisError("E401", "threshold search needs the full-weight spectrum")

    thresholds: Dict[str, float] = {}
    for y in spec.single_edge_support():
        lo, hi = 0.0, 0.5
        if dominance_holds(spec, hi, lam, y):
            thresholds[vec_label(y, spec.n)] = hi
            continue
        steps = 0
        while steps < max_iter and hi - lo > tol:
            mid = (lo + hi) / 2
            if dominance_holds(spec, mid, lam, y):
                lo = mid
            else:
                hi = mid
            steps += 1
        logger.debug("Threshold for y=%s at %s: %.8f after %d steps",
                     vec_label(y, spec.n), spec.sink, lo, steps)
        thresholds[vec_label(y, spec.n)] = lo

    prop = proposition_threshold(spec.num_edges, lam) if lam > 0 and spec.num_edges >= 2 else None
    return ThresholdReport(sink=spec.sink, lam=lam, proposition_bound=prop, thresholds=thresholds)


def dominance_curves(spec: SinkErrorSpectrum, lam: float, grid: Iterable[float]) -> List[Dict[str, object]]:
    """Single-edge probability against lam x multiple-edge probability per y over a p_e grid."""
    if not spec.full:
        raise AnalysisError("E401", "dominance curves need the full-weight spectrum")
    rows = []
    for p in grid:
        for y in spec.single_edge_support():
            single, multi = _masses(spec, y, float(p))
            rows.append({
                "sink": spec.sink,
                "y": vec_label(y, spec.n),
                "p_e": float(p),
                "single": single,
                "lambda_multi": lam * multi,
            })
    return rows


def bernoulli_bound_check(m: int, p: float) -> bool:
    """(1-p)^m >= 1 - m p, up to floating-point rounding."""
    return (1 - p) ** m >= 1 - m * p - 1e-12
