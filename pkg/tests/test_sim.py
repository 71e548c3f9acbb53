"""
Tests for the Monte Carlo BER harness.

Tests marked slow reproduce the regime and decode-side properties and take
minutes; deselect them with -m "not slow".
"""

import io

import numpy as np
import pytest

from cnecc.algebra import parse_code, vec_mat
from cnecc.analysis import ber_bound, compute_spectrum, exact_dist
from cnecc.codes import analyze, encode_batch
from cnecc.errors import SimulationError
from cnecc.metrics import SimMetrics
from cnecc.network import builtin_butterfly, compute_transfer, propagate, sink_error
from cnecc.sim import (
    CSV_COLUMNS,
    BerPoint,
    SimConfig,
    Simulator,
    make_decoder,
    run_point,
    run_sweep,
    viterbi_decode_batch,
    write_curves_csv,
)

C1 = "[1+z, 1]"
C2 = "[1+z+z^2, 1+z^2]"


@pytest.fixture(scope="module")
def butterfly():
    return builtin_butterfly()


def make_cfg(butterfly, code_text=C2, pe_grid=(0.01,), **kwargs):
    net, code = butterfly
    defaults = dict(trials=64, frame_length=50, chunk_size=16, seed=42)
    defaults.update(kwargs)
    return SimConfig(net, code, parse_code(code_text), list(pe_grid), **defaults)


# configuration

def test_config_validates(butterfly):
    """A small sweep config is valid."""
    make_cfg(butterfly).validate()


@pytest.mark.parametrize("overrides", [
    {"pe_grid": (0.5,)},
    {"pe_grid": ()},
    {"trials": 0},
    {"frame_length": 0},
    {"sides": ("middle",)},
    {"sinks": ("T9",)},
    {"metric": "soft"},
    {"threads": 0},
])
def test_config_rejects(butterfly, overrides):
    """Invalid sweep settings raise E502."""
    cfg = make_cfg(butterfly, **overrides)
    with pytest.raises(SimulationError) as exc_info:
        cfg.validate()
    assert exc_info.value.code == "E502"


def test_code_length_must_match_network(butterfly):
    """A code whose width differs from n is rejected."""
    cfg = make_cfg(butterfly, code_text="[[1+z, z, 1], [z, 1, 0]]")
    with pytest.raises(SimulationError):
        cfg.validate()


def test_digest_depends_on_seed(butterfly):
    """The config digest is stable and depends on the seed."""
    a = make_cfg(butterfly, seed=1)
    b = make_cfg(butterfly, seed=2)
    assert a.digest() != b.digest()
    assert a.digest() == make_cfg(butterfly, seed=1).digest()


def test_with_defaults_reads_config(butterfly):
    """with_defaults fills unset fields from the default config."""
    net, code = butterfly
    cfg = SimConfig.with_defaults(net, code, parse_code(C2), [0.01], threads=2)
    assert cfg.frame_length == 1000
    assert cfg.max_errors == 200
    assert cfg.threads == 2


# statistics

def test_ber_point():
    """BER and the normal-approximation 95% interval."""
    pt = BerPoint(p_e=0.1, bits=10_000, bit_errors=100)
    assert pt.ber == 0.01
    assert pt.ci95 == pytest.approx(1.959964 * (0.01 * 0.99 / 10_000) ** 0.5, rel=1e-6)
    assert BerPoint(p_e=0.1, bits=0, bit_errors=0).ci95 == float("inf")


def test_ci_shrinks_with_more_bits():
    """Doubling the bits at equal BER shrinks the interval by sqrt(2)."""
    a = BerPoint(p_e=0.1, bits=10_000, bit_errors=500)
    b = BerPoint(p_e=0.1, bits=20_000, bit_errors=1000)
    assert b.ci95 / a.ci95 == pytest.approx(2 ** -0.5)


# runs

def test_error_free_channel(butterfly):
    """At p_e = 0 every sink and side decodes without errors."""
    cfg = make_cfg(butterfly, pe_grid=(0.0,), sides=("input", "output"))
    res = run_point(cfg, 0.0)
    assert set(res.counts) == {("T1", "input"), ("T1", "output"), ("T2", "input"), ("T2", "output")}
    for errs, bits in res.counts.values():
        assert errs == 0
        assert bits == 64 * 50


@pytest.mark.parametrize("code_text", [C1, C2, "[1, z]"])
def test_identity_without_errors_for_every_code(butterfly, code_text):
    """Every code decodes error-free at p_e = 0."""
    cfg = make_cfg(butterfly, code_text=code_text, pe_grid=(0.0,), sides=("input", "output"))
    curves = run_sweep(cfg)
    assert all(pt.bit_errors == 0 for c in curves.values() for pt in c.points)


def test_same_seed_same_counts(butterfly):
    """Equal seeds give equal error counts."""
    cfg = make_cfg(butterfly, pe_grid=(0.02, 0.1))
    a = run_sweep(cfg)
    b = run_sweep(make_cfg(butterfly, pe_grid=(0.02, 0.1)))
    assert [p.bit_errors for c in a.values() for p in c.points] == \
           [p.bit_errors for c in b.values() for p in c.points]


def test_thread_count_does_not_change_results(butterfly):
    """Results do not depend on the thread count."""
    serial = run_point(make_cfg(butterfly, threads=1), 0.05)
    parallel = run_point(make_cfg(butterfly, threads=3), 0.05)
    assert serial.counts == parallel.counts
    assert serial.frames == parallel.frames


def test_different_seeds_differ(butterfly):
    """Different seeds give different counts."""
    a = run_point(make_cfg(butterfly, seed=1), 0.1)
    b = run_point(make_cfg(butterfly, seed=2), 0.1)
    assert a.counts != b.counts


def test_early_stop(butterfly):
    """A point stops at the first chunk where every sink has reached max_errors."""
    cfg = make_cfg(butterfly, trials=640, max_errors=1)
    res = run_point(cfg, 0.2)
    assert res.early_stop
    assert res.frames == 16


def test_early_stop_is_thread_independent(butterfly):
    """Early stopping lands on the same chunk for any thread count."""
    a = run_point(make_cfg(butterfly, trials=640, max_errors=300, threads=1), 0.08)
    b = run_point(make_cfg(butterfly, trials=640, max_errors=300, threads=4), 0.08)
    assert a.frames == b.frames
    assert a.counts == b.counts


def test_received_sequence_decomposes(butterfly):
    """Recorded sink sequences equal x M_T + w F B^T and edge-by-edge propagation."""
    net, code = butterfly
    tf = compute_transfer(net, code)
    cfg = make_cfg(butterfly, trials=4, frame_length=10, chunk_size=2, record_errors=True)
    res = run_point(cfg, 0.1)
    assert len(res.traces) == 2
    for trace in res.traces:
        for sink in net.sinks:
            expected = vec_mat(trace.x, tf.M[sink]) ^ sink_error(trace.w, tf, sink)
            assert np.array_equal(trace.received[sink], expected)
        f, t = 1, 3
        by_edges = propagate(net, code, trace.x[f, t], trace.w[f, t])
        for sink in net.sinks:
            assert np.array_equal(by_edges[sink], trace.received[sink][f, t])


def test_single_edge_errors_are_corrected(butterfly):
    """A single edge error at any time is corrected after inverting M_T."""
    net, code = butterfly
    tf = compute_transfer(net, code)
    G = parse_code(C2)
    conv = analyze(G)
    L = 8
    rng = np.random.default_rng(3)
    u = rng.integers(0, 2, size=(1, L, 1), dtype=np.uint8)
    x = encode_batch(conv, u)
    steps = x.shape[1]
    for sink in net.sinks:
        dec = make_decoder(conv)
        for e in range(net.num_edges):
            w = np.zeros((steps, steps, net.num_edges), dtype=np.uint8)
            w[np.arange(steps), np.arange(steps), e] = 1
            y = vec_mat(np.repeat(x, steps, axis=0), tf.M[sink]) ^ sink_error(w, tf, sink)
            r = vec_mat(y, tf.M_inv(sink))
            assert np.array_equal(viterbi_decode_batch(dec, r, L), np.repeat(u, steps, axis=0))


def test_ml_metric_runs(butterfly):
    """The exact-distribution metric decodes every frame at every sink and side."""
    cfg = make_cfg(butterfly, metric="ml", sides=("input", "output"), max_errors=10**9)
    res = run_point(cfg, 0.05)
    assert res.frames == 64
    assert not res.early_stop
    assert all(bits == 64 * 50 for _, bits in res.counts.values())


def test_metrics_are_recorded(butterfly):
    """Each (sink, side, p_e) point lands in the collector."""
    metrics = SimMetrics()
    run_sweep(make_cfg(butterfly, pe_grid=(0.01, 0.05), max_errors=10**9), metrics)
    assert metrics.counters["points_total"] == 2 * 2
    assert metrics.counters["bits_total"] == 4 * 64 * 50
    assert "T1/input" in metrics.by_sink


def test_simulator_reuse(butterfly):
    """A reused Simulator gives the same counts as a fresh one."""
    cfg = make_cfg(butterfly)
    sim = Simulator(cfg)
    assert run_point(cfg, 0.05, sim=sim).counts == run_point(cfg, 0.05).counts


def test_point_rejects_bad_crossover(butterfly):
    """Crossovers outside [0, 0.5) are rejected."""
    with pytest.raises(SimulationError):
        run_point(make_cfg(butterfly), 0.6)


def test_csv_is_bit_identical_for_same_seed(butterfly):
    """CSV output is byte-identical for the same seed."""
    def render():
        cfg = make_cfg(butterfly, pe_grid=(0.02, 0.08), sides=("input", "output"))
        buf = io.StringIO()
        write_curves_csv(run_sweep(cfg), buf, {"seed": cfg.seed, "config_digest": cfg.digest()})
        return buf.getvalue()

    first = render()
    assert first == render()
    lines = first.splitlines()
    assert lines[0] == "# seed: 42"
    assert lines[2] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3 + 2 * 2 * 2


# acceptance runs

def _ber(butterfly, code_text, p_e, sink="T1", sides=("input",), **kwargs):
    cfg = make_cfg(butterfly, code_text=code_text, pe_grid=(p_e,), sinks=(sink,), sides=sides,
                   frame_length=1000, chunk_size=64, **kwargs)
    curves = run_sweep(cfg)
    return {side: curves[(sink, side)].points[0] for side in sides}


@pytest.mark.slow
def test_regimes_cross_over(butterfly):
    """The larger free distance wins at low p_e, the larger slope at high p_e."""
    low1 = _ber(butterfly, C1, 0.005, trials=8000, max_errors=200)["input"]
    low2 = _ber(butterfly, C2, 0.005, trials=8000, max_errors=200)["input"]
    assert low2.ber + low2.ci95 < low1.ber - low1.ci95

    high1 = _ber(butterfly, C1, 0.3, trials=16_000, max_errors=10**9)["input"]
    high2 = _ber(butterfly, C2, 0.3, trials=16_000, max_errors=10**9)["input"]
    assert high1.bits == high2.bits == 16_000 * 1000
    assert high1.ber + high1.ci95 < high2.ber - high2.ci95


@pytest.mark.slow
@pytest.mark.parametrize("code_text", [C1, C2])
def test_simulation_below_bound(butterfly, code_text):
    """Simulated BER stays below the analytic bound."""
    net, code = butterfly
    tf = compute_transfer(net, code)
    spec = compute_spectrum(tf, "T1")
    conv = analyze(parse_code(code_text))
    for p_e in (0.001, 0.002, 0.005):
        bound = ber_bound(conv, exact_dist(spec, p_e, "input", tf.M["T1"]))
        assert not bound.diverged
        sim = _ber(butterfly, code_text, p_e, trials=2000, max_errors=200)["input"]
        assert sim.ber <= bound.value


@pytest.mark.slow
@pytest.mark.parametrize("p_e", [0.01, 0.1, 0.2])
def test_input_side_decoding_at_t2(butterfly, p_e):
    """At T2, [1+z, 1] decoded after inverting M_T does no worse than on [z, 1]."""
    points = _ber(butterfly, C1, p_e, sink="T2", sides=("input", "output"),
                  trials=2000, max_errors=2000)
    inp, out = points["input"], points["output"]
    assert inp.ber <= out.ber + inp.ci95 + out.ci95
