"""Monte Carlo BER simulation with hard-decision Viterbi decoding."""

from .viterbi import (
    TrellisDecoder,
    make_decoder,
    pack_tuples,
    unpack_tuples,
    viterbi_decode,
    viterbi_decode_batch,
)
from .runner import (
    CSV_COLUMNS,
    BerCurve,
    BerPoint,
    ChunkTrace,
    PointResult,
    SimConfig,
    Simulator,
    run_point,
    run_sweep,
    write_curves_csv,
)

__all__ = [
    "TrellisDecoder",
    "make_decoder",
    "pack_tuples",
    "unpack_tuples",
    "viterbi_decode",
    "viterbi_decode_batch",
    "CSV_COLUMNS",
    "BerCurve",
    "BerPoint",
    "ChunkTrace",
    "PointResult",
    "SimConfig",
    "Simulator",
    "run_point",
    "run_sweep",
    "write_curves_csv",
]
