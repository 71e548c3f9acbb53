"""
Monte Carlo BER simulation of a convolutional code over a network whose
edges are independent binary symmetric channels.

One frame: draw L information b-tuples, encode terminated, send each output
n-tuple as one network use (x M_T at sink T, plus w F B^T for the edge
errors w of that use), then decode at every sink on either the input code's
trellis (after multiplying by M_T^-1) or the output code's trellis.

Frames are simulated in chunks. Chunk j of sweep point k draws from
PCG64(SeedSequence(seed, spawn_key=(k, j))), chunks are merged in index
order and a point stops after the first chunk at which every decoded
(sink, side) has reached max_errors, so results do not depend on the
number of worker threads.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from ..algebra.f2 import BinPolyMatrix, vec_mat
from ..algebra.parser import format_code
from ..analysis.errspec import Side, compute_spectrum, exact_dist
from ..codes.convcode import ConvCode, analyze, encode_batch
from ..config import get_default_config
from ..errors import SimulationError
from ..metrics import SimMetrics
from ..network.model import Network, NetworkCode, TransferSet, compute_transfer
from .viterbi import Metric, TrellisDecoder, make_decoder, viterbi_decode_batch

logger = logging.getLogger(__name__)

Key = Tuple[str, str]  # (sink, side)

_Z975 = float(norm.ppf(0.975))


@dataclass
class SimConfig:
    """Everything a sweep needs; validate() before use."""
    network: Network
    network_code: NetworkCode
    generator: BinPolyMatrix
    pe_grid: Sequence[float]
    trials: int = 20000
    frame_length: int = 1000
    sinks: Optional[Sequence[str]] = None
    sides: Sequence[Side] = ("input",)
    seed: int = 0
    max_errors: int = 200
    metric: Metric = "hamming"
    threads: int = 1
    chunk_size: int = 64
    record_errors: bool = False

    @classmethod
    def with_defaults(cls, network: Network, network_code: NetworkCode,
                      generator: BinPolyMatrix, pe_grid: Sequence[float], **kwargs) -> "SimConfig":
        """Fill frame length, error target, chunking and threads from CNECCConfig."""
        cfg = get_default_config()
        defaults = {
            "frame_length": cfg.frame_length,
            "max_errors": cfg.max_errors,
            "chunk_size": cfg.chunk_size,
            "threads": cfg.threads,
        }
        defaults.update(kwargs)
        return cls(network, network_code, generator, pe_grid, **defaults)

    def resolved_sinks(self) -> List[str]:
        return list(self.sinks) if self.sinks else list(self.network.sinks)

    def validate(self) -> None:
        """Raises SimulationError E502 on an unusable configuration."""
        problems = []
        if not self.pe_grid:
            problems.append("empty p_e grid")
        problems += [f"p_e {p} outside [0, 0.5)" for p in self.pe_grid if not 0 <= p < 0.5]
        if self.trials < 1:
            problems.append(f"trials must be >= 1, got {self.trials}")
        if self.frame_length < 1:
            problems.append(f"frame length must be >= 1, got {self.frame_length}")
        if self.max_errors < 1:
            problems.append(f"max_errors must be >= 1, got {self.max_errors}")
        if self.threads < 1 or self.chunk_size < 1:
            problems.append("threads and chunk_size must be >= 1")
        if self.metric not in ("hamming", "ml"):
            problems.append(f"unknown metric {self.metric!r}")
        problems += [f"unknown side {s!r}" for s in self.sides if s not in ("input", "output")]
        problems += [f"unknown sink {s!r}" for s in self.resolved_sinks() if s not in self.network.sinks]
        if self.generator.cols != self.network.n:
            problems.append(
                f"code length c = {self.generator.cols} differs from network dimension n = {self.network.n}"
            )
        if problems:
            raise SimulationError("E502", "; ".join(problems))

    def to_dict(self) -> Dict[str, object]:
        """Resolved settings, without the network itself."""
        return {
            "generator": format_code(self.generator),
            "pe_grid": [float(p) for p in self.pe_grid],
            "trials": self.trials,
            "frame_length": self.frame_length,
            "sinks": self.resolved_sinks(),
            "sides": list(self.sides),
            "seed": self.seed,
            "max_errors": self.max_errors,
            "metric": self.metric,
            "chunk_size": self.chunk_size,
            "rng": "PCG64",
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass(frozen=True)
class BerPoint:
    p_e: float
    bits: int
    bit_errors: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    @property
    def ci95(self) -> float:
        """Half-width of the normal-approximation 95% binomial interval."""
        if not self.bits:
            return math.inf
        return _Z975 * math.sqrt(self.ber * (1 - self.ber) / self.bits)


@dataclass
class BerCurve:
    """BER against p_e at one sink for one decode side."""
    sink: str
    side: Side
    points: List[BerPoint] = field(default_factory=list)


@dataclass
class ChunkTrace:
    """Debug record of one chunk: inputs, edge errors and what each sink received."""
    x: np.ndarray  # (frames, steps, n)
    w: np.ndarray  # (frames, steps, |E|)
    received: Dict[str, np.ndarray]  # sink -> (frames, steps, n)


@dataclass
class PointResult:
    """Counts for one p_e across every decoded (sink, side)."""
    p_e: float
    frames: int
    counts: Dict[Key, Tuple[int, int]]  # (bit_errors, bits)
    early_stop: bool
    traces: List[ChunkTrace] = field(default_factory=list)


class Simulator:
    """Precomputed transfer matrices and decoders for one configuration."""

    def __init__(self, cfg: SimConfig, tf: Optional[TransferSet] = None):
        cfg.validate()
        self.cfg = cfg
        self.tf = tf if tf is not None else compute_transfer(cfg.network, cfg.network_code)
        self.code: ConvCode = analyze(cfg.generator)
        self.sinks = cfg.resolved_sinks()
        self.M_inv = {s: self.tf.M_inv(s) for s in self.sinks}
        self.output_codes: Dict[str, ConvCode] = {}
        for s in self.sinks:
            if "output" in cfg.sides:
                oc = analyze(self.tf.output_code(cfg.generator, s))
                if not oc.minimal_basic:
                    logger.warning(
                        "Output code %s at %s is not minimal-basic; decoding on its "
                        "controller-canonical trellis", oc.G, s
                    )
                self.output_codes[s] = oc
        self._spectra = (
            {s: compute_spectrum(self.tf, s) for s in self.sinks} if cfg.metric == "ml" else {}
        )
        self._hamming: Dict[Key, TrellisDecoder] = {}
        if cfg.metric == "hamming":
            for key in self.keys():
                self._hamming[key] = self._decoder(key, None)

    def keys(self) -> List[Key]:
        return [(s, side) for s in self.sinks for side in self.cfg.sides]

    def _decoder(self, key: Key, p_e: Optional[float]) -> TrellisDecoder:
        sink, side = key
        code = self.code if side == "input" else self.output_codes[sink]
        probs = None
        if self.cfg.metric == "ml":
            probs = exact_dist(self._spectra[sink], p_e, side, self.tf.M[sink]).probs
        return make_decoder(code, self.cfg.metric, probs, require_minimal=False)

    def decoders(self, p_e: float) -> Dict[Key, TrellisDecoder]:
        if self.cfg.metric == "hamming":
            return self._hamming
        return {key: self._decoder(key, p_e) for key in self.keys()}

    def run_chunk(
        self,
        p_e: float,
        point: int,
        chunk: int,
        frames: int,
        decoders: Dict[Key, TrellisDecoder]
    ) -> Tuple[Dict[Key, Tuple[int, int]], Optional[ChunkTrace]]:
        cfg, code = self.cfg, self.code
        ss = np.random.SeedSequence(cfg.seed, spawn_key=(point, chunk))
        rng = np.random.Generator(np.random.PCG64(ss))
        L, E = cfg.frame_length, self.tf.num_edges

        u = rng.integers(0, 2, size=(frames, L, code.b), dtype=np.uint8)
        x = encode_batch(code, u, terminate=True)
        w = (rng.random((frames, x.shape[1], E)) < p_e).astype(np.uint8)

        counts: Dict[Key, Tuple[int, int]] = {}
        received: Dict[str, np.ndarray] = {}
        for sink in self.sinks:
            y = vec_mat(x, self.tf.M[sink]) ^ vec_mat(w, self.tf.sink_maps[sink])
            received[sink] = y
            for side in cfg.sides:
                r = vec_mat(y, self.M_inv[sink]) if side == "input" else y
                u_hat = viterbi_decode_batch(decoders[(sink, side)], r, L)
                counts[(sink, side)] = (int(np.count_nonzero(u_hat != u)), int(u.size))
        trace = ChunkTrace(x=x, w=w, received=received) if cfg.record_errors else None
        return counts, trace


def run_point(
    cfg: SimConfig,
    p_e: float,
    point: int = 0,
    sim: Optional[Simulator] = None,
    metrics: Optional[SimMetrics] = None
) -> PointResult:
    """Simulate up to cfg.trials frames at one p_e.

    Args:
        cfg: Validated configuration
        p_e: Edge crossover probability
        point: Index of this point in the sweep (part of the seed)
        sim: Reusable precomputation for cfg
        metrics: Collector for wall time and volume
    """
    if not 0 <= p_e < 0.5:
        raise SimulationError("E502", f"p_e {p_e} outside [0, 0.5)")
    sim = sim if sim is not None else Simulator(cfg)
    decoders = sim.decoders(p_e)
    keys = sim.keys()
    totals = {k: [0, 0] for k in keys}
    traces: List[ChunkTrace] = []
    n_chunks = -(-cfg.trials // cfg.chunk_size)
    sizes = [min(cfg.chunk_size, cfg.trials - j * cfg.chunk_size) for j in range(n_chunks)]

    started = time.perf_counter()
    frames = 0
    early = False
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        j = 0
        while j < n_chunks and not early:
            wave = range(j, min(j + cfg.threads, n_chunks))
            futures = [pool.submit(sim.run_chunk, p_e, point, k, sizes[k], decoders) for k in wave]
            for k, fut in zip(wave, futures):
                counts, trace = fut.result()
                frames += sizes[k]
                for key, (errs, bits) in counts.items():
                    totals[key][0] += errs
                    totals[key][1] += bits
                if trace is not None:
                    traces.append(trace)
                logger.debug("p_e=%g chunk %d merged: %s", p_e, k, totals)
                if all(totals[key][0] >= cfg.max_errors for key in keys):
                    early = True
                    break
            for fut in futures:
                fut.cancel()
            j += len(wave)

    wall_ms = (time.perf_counter() - started) * 1000
    result = PointResult(p_e=p_e, frames=frames,
                         counts={k: (v[0], v[1]) for k, v in totals.items()},
                         early_stop=early, traces=traces)
    if metrics is not None:
        for (sink, side), (errs, bits) in result.counts.items():
            metrics.record_point(sink, side, p_e, frames, bits, errs, wall_ms / len(keys), early)
    logger.info("p_e=%g done: %d frames%s", p_e, frames, " (early stop)" if early else "")
    return result


def run_sweep(cfg: SimConfig, metrics: Optional[SimMetrics] = None) -> Dict[Key, BerCurve]:
    """run_point over the p_e grid; deterministic for a fixed seed."""
    sim = Simulator(cfg)
    curves = {key: BerCurve(sink=key[0], side=key[1]) for key in sim.keys()}
    for idx, p_e in enumerate(cfg.pe_grid):
        res = run_point(cfg, float(p_e), point=idx, sim=sim, metrics=metrics)
        for key, (errs, bits) in res.counts.items():
            curves[key].points.append(BerPoint(p_e=float(p_e), bits=bits, bit_errors=errs))
    return curves


CSV_COLUMNS = ("sink", "side", "p_e", "bits", "bit_errors", "ber", "ci95")


def write_curves_csv(curves: Dict[Key, BerCurve], out: IO[str], header: Dict[str, object]) -> None:
    """CSV with '# key: value' header comments; floats use round-trip repr."""
    for k, v in header.items():
        out.write(f"# {k}: {v}\n")
    out.write(",".join(CSV_COLUMNS) + "\n")
    for curve in curves.values():
        for pt in curve.points:
            row = (curve.sink, curve.side, repr(pt.p_e), pt.bits, pt.bit_errors, repr(pt.ber), repr(pt.ci95))
            out.write(",".join(str(x) for x in row) + "\n")
