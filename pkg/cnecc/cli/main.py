"""
cnecc command line.

Every command that takes -o/--out also writes <out>.manifest.json so the run
can be checked later with `cnecc replay`.
"""

import functools
import io
import json
import logging
import sys
import tempfile
from pathlib import Path

import click
import numpy as np

from .. import __version__
from ..algebra.parser import format_code, parse_code
from ..analysis.errspec import (
    compute_spectrum,
    dominance_holds,
    empirical_threshold,
    exact_dist,
    dominance_curves,
    proposition_threshold,
)
from ..analysis.transfer import ber_bound
from ..codes.convcode import analyze, build_state_graph, iter_rate_1_generators
from ..codes.distance import free_distance, slope_bound_check, slope_by_cycles
from ..config import CNECCConfig, get_default_config, set_default_config
from ..errors import CNECCError, ParseError
from ..metrics import SimMetrics
from ..network.butterfly import builtin_butterfly
from ..network.loader import parse_network, text_digest, to_json
from ..network.model import compute_transfer, validate
from ..sim.runner import SimConfig, run_sweep, write_curves_csv
from .manifest import RunManifest, file_digest, load_manifest

logger = logging.getLogger(__name__)

BUILTIN = "butterfly"


class GridType(click.ParamType):
    """p_e grids: "a:b:step" (inclusive), "a:b:logN" (N log-spaced points) or "p1,p2,..."."""
    name = "grid"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return [float(v) for v in value]
        try:
            if ":" in value:
                a, b, step = value.split(":")
                lo, hi = float(a), float(b)
                if step.startswith("log"):
                    return [float(p) for p in np.geomspace(lo, hi, int(step[3:]))]
                n = int(round((hi - lo) / float(step))) + 1
                return [round(lo + i * float(step), 12) for i in range(n)]
            return [float(v) for v in value.split(",")]
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a p_e grid", param, ctx)


GRID = GridType()


def reports_errors(fn):
    """Exit 2 on malformed input, 1 on any other CNECC failure."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as e:
            where = f" at line {e.loc[0]}, column {e.loc[1]}" if e.loc else ""
            click.echo(f"Error{where}: {e}", err=True)
            if e.hint:
                click.echo(f"  hint: {e.hint}", err=True)
            sys.exit(2)
        except CNECCError as e:
            click.echo(f"Error: {e}", err=True)
            if e.hint:
                click.echo(f"  hint: {e.hint}", err=True)
            sys.exit(1)
    return wrapper


def _read_network_text(source: str) -> str:
    if source == BUILTIN:
        return json.dumps(to_json(*builtin_butterfly()))
    if source == "-":
        return click.get_text_stream("stdin").read()
    path = Path(source)
    if not path.exists():
        raise click.BadParameter(f"no such file: {source}", param_hint="NETWORK")
    return path.read_text()


def _load(source: str):
    text = _read_network_text(source)
    net, code = parse_network(text)
    return net, code, text


def _matrix_lines(name: str, m) -> list:
    return [f"{name} ="] + ["  " + " ".join(str(int(x)) for x in row) for row in m.array]


def _fmt_slope(value) -> str:
    return "inf" if value == float("inf") else str(value)


def _emit(text: str, out, subcommand: str, inputs: dict, seed=None, metrics=None) -> None:
    """Print to stdout, or write --out and its manifest."""
    if out is None:
        click.echo(text, nl=False)
        return
    Path(out).write_text(text)
    manifest = RunManifest(
        subcommand=subcommand,
        params=dict(click.get_current_context().params),
        inputs=inputs,
        outputs={Path(out).name: file_digest(out)},
        seed=seed,
        metrics=metrics,
    )
    manifest.write(out)
    click.echo(f"Wrote {out}", err=True)


def _inputs(source: str, text: str) -> dict:
    return {source: text_digest(text)}


@click.group()
@click.version_option(__version__, prog_name="cnecc")
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debug detail")
def cli(verbose: int):
    """Convolutional network-error correcting codes over BSC-edge networks."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr, force=True)


@cli.command()
@click.option("-o", "--out", default=None, help="Write the network JSON to a file")
@reports_errors
def butterfly(out):
    """Emit the builtin 9-edge butterfly network as JSON."""
    text = json.dumps(to_json(*builtin_butterfly()), indent=2) + "\n"
    _emit(text, out, "butterfly", {})


@cli.command("net-info")
@click.argument("network")
@click.option("--code", "code_text", default=None, help="Input code; prints G_I M_T per sink")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output")
@click.option("-o", "--out", default=None)
@reports_errors
def net_info(network, code_text, as_json, out):
    """Transfer matrices and validation diagnostics of a network code.

    NETWORK is a JSON file, "-" for stdin, or "butterfly".
    """
    net, code, text = _load(network)
    diag = validate(net, code)
    G = parse_code(code_text) if code_text else None
    tf = None
    if all(c.name == "rank" for c in diag.failures()):
        tf = compute_transfer(net, code)

    if as_json:
        doc = {"edges": net.num_edges, "n": net.n, "sinks": list(net.sinks), "diagnostics": diag.to_dict()}
        if tf is not None:
            doc["F"] = tf.F.to_list()
            doc["M"] = {s: tf.M[s].to_list() for s in net.sinks}
            if G is not None:
                doc["output_codes"] = {
                    s: format_code(tf.output_code(G, s)) for s in net.sinks if tf.invertible(s)
                }
        body = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [f"Network: {net.num_edges} edges, n = {net.n}, source {net.source}, "
                 f"sinks {', '.join(net.sinks)}"]
        if tf is not None:
            lines += _matrix_lines("F", tf.F)
            for s in net.sinks:
                lines += _matrix_lines(f"M_{s}", tf.M[s])
            if G is not None:
                for s in net.sinks:
                    if tf.invertible(s):
                        lines.append(f"G_O,{s} = {tf.output_code(G, s)}")
        lines.append("Diagnostics:")
        for c in diag.checks:
            subject = f" [{c.subject}]" if c.subject else ""
            lines.append(f"  {'PASS' if c.passed else 'FAIL'} {c.name}{subject}: {c.detail}")
        body = "\n".join(lines) + "\n"

    _emit(body, out, "net-info", _inputs(network, text))
    if not diag.ok:
        sys.exit(1)


@cli.command("code-analyze")
@click.argument("code_text", metavar="CODE")
@click.option("--json", "as_json", is_flag=True)
@click.option("-o", "--out", default=None)
@reports_errors
def code_analyze(code_text, as_json, out):
    """Degree, minimal-basic flag, free distance and slope of a generator matrix.

    CODE is a list of rows of polynomials, e.g. "[[ [1,1,1],[1,0,1] ]]" or
    "[1+z+z^2, 1+z^2]".
    """
    code = analyze(parse_code(code_text))
    doc = code.summary()
    if code.minimal_basic:
        sg = build_state_graph(code)
        check = slope_bound_check(code, sg)
        doc.update({
            "free_distance": free_distance(code, sg),
            "slope": _fmt_slope(check.slope),
            "slope_bound": str(check.bound),
            "slope_bound_pass": check.passed,
        })

    if as_json:
        body = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [
            f"G = {code.G}",
            f"b = {code.b}, c = {code.c}",
            f"row degrees = {', '.join(str(d) for d in code.row_degrees)}",
            f"degree = {code.degree}, nu_max = {code.nu_max}",
            f"minimal-basic = {'yes' if code.minimal_basic else 'no'}"
            f" (reduced {'yes' if code.reduced else 'no'}, basic {'yes' if code.basic else 'no'})",
        ]
        if code.minimal_basic:
            lines += [
                f"d_free = {doc['free_distance']}",
                f"slope = {doc['slope']}",
                f"slope bound = {doc['slope_bound']}",
                f"bound check = {'pass' if doc['slope_bound_pass'] else 'FAIL'}",
            ]
        body = "\n".join(lines) + "\n"

    _emit(body, out, "code-analyze", {})
    if not code.minimal_basic or not doc["slope_bound_pass"]:
        sys.exit(1)


@cli.command("error-spectrum")
@click.argument("network")
@click.option("--sink", required=True)
@click.option("--max-weight", type=int, default=None, help="Largest network-error weight enumerated")
@click.option("-o", "--out", default=None)
@reports_errors
def error_spectrum(network, sink, max_weight, out):
    """Counts a_{i,y} of weight-i network errors producing sink error y (CSV)."""
    net, code, text = _load(network)
    tf = compute_transfer(net, code)
    spec = compute_spectrum(tf, sink, max_weight)
    buf = io.StringIO()
    buf.write("sink,weight,y,count\n")
    for row in spec.to_rows():
        buf.write(f"{sink},{row['weight']},{row['y']},{row['count']}\n")
    _emit(buf.getvalue(), out, "error-spectrum", _inputs(network, text))


@cli.command("pe-threshold")
@click.argument("network")
@click.option("--lambda", "lam", type=float, required=True, help="Dominance factor lambda")
@click.option("--sink", "sinks", multiple=True, help="Restrict to these sinks (repeatable)")
@click.option("--grid", type=GRID, default="0.0005:0.03:0.0005", show_default=True,
              help="p_e grid for the dominance curves")
@click.option("-o", "--out", default=None, help="CSV of single vs lambda x multiple-edge curves")
@reports_errors
def pe_threshold(network, lam, sinks, grid, out):
    """Proposition bound and empirical single-edge dominance thresholds (JSON)."""
    net, code, text = _load(network)
    tf = compute_transfer(net, code)
    chosen = list(sinks) or list(net.sinks)
    bound = proposition_threshold(net.num_edges, lam)
    reports, curves = {}, []
    holds = True
    for s in chosen:
        spec = compute_spectrum(tf, s)
        reports[s] = empirical_threshold(spec, lam).to_dict()
        holds = holds and dominance_holds(spec, bound, lam)
        curves += dominance_curves(spec, lam, grid)

    doc = {
        "lambda": lam,
        "num_edges": net.num_edges,
        "proposition_bound": bound,
        "dominance_at_bound": holds,
        "sinks": reports,
        "min_threshold": min(r["min_threshold"] for r in reports.values()),
    }
    click.echo(json.dumps(doc, indent=2))
    if out is not None:
        buf = io.StringIO()
        buf.write("sink,y,p_e,single,lambda_multi\n")
        for r in curves:
            buf.write(f"{r['sink']},{r['y']},{r['p_e']!r},{r['single']!r},{r['lambda_multi']!r}\n")
        _emit(buf.getvalue(), out, "pe-threshold", _inputs(network, text))
    if not holds:
        sys.exit(1)


@cli.command("ber-bound")
@click.argument("network")
@click.argument("code_text", metavar="CODE")
@click.option("--sink", default=None, help="Sink (default: first sink)")
@click.option("--pe-grid", type=GRID, required=True)
@click.option("--side", type=click.Choice(["input", "output"]), default="input", show_default=True)
@click.option("--epsilon", type=float, default=None, help="Forward-difference step (default from config)")
@click.option("-o", "--out", default=None)
@reports_errors
def ber_bound_cmd(network, code_text, sink, pe_grid, side, epsilon, out):
    """Transfer-function upper bound on BER at a sink (CSV: p_e, bound, diverged)."""
    net, code, text = _load(network)
    tf = compute_transfer(net, code)
    sink = sink or net.sinks[0]
    G = parse_code(code_text)
    conv = analyze(G if side == "input" else tf.output_code(G, sink))
    sg = build_state_graph(conv)
    spec = compute_spectrum(tf, sink)
    buf = io.StringIO()
    buf.write(f"# sink: {sink}\n# side: {side}\n# code: {format_code(conv.G)}\n")
    buf.write("p_e,bound,diverged\n")
    for p in pe_grid:
        dist = exact_dist(spec, p, side, tf.M[sink])
        bb = ber_bound(conv, dist, epsilon, graph=sg)
        buf.write(f"{p!r},{bb.value!r},{str(bb.diverged).lower()}\n")
    _emit(buf.getvalue(), out, "ber-bound", _inputs(network, text))


@cli.command("ber-sim")
@click.argument("network")
@click.option("--code", "code_text", required=True, help="Input convolutional code")
@click.option("--sinks", default=None, help="Comma-separated sinks (default: all)")
@click.option("--side", default="input", show_default=True, help="input, output or input,output")
@click.option("--pe", "pe_grid", type=GRID, required=True, help="e.g. 0.001:0.3:log20")
@click.option("--trials", type=int, default=20000, show_default=True, help="Max frames per point")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--frame-length", type=int, default=None, help="Information b-tuples per frame")
@click.option("--max-errors", type=int, default=None, help="Early-stop bit errors per sink")
@click.option("--threads", type=int, default=None, help="Worker threads (default CNECC_THREADS)")
@click.option("--metric", type=click.Choice(["hamming", "ml"]), default="hamming", show_default=True)
@click.option("-o", "--out", default=None)
@reports_errors
def ber_sim(network, code_text, sinks, side, pe_grid, trials, seed, frame_length,
            max_errors, threads, metric, out):
    """Monte Carlo BER with Viterbi decoding at each sink (CSV)."""
    net, code, text = _load(network)
    G = parse_code(code_text)
    sides = tuple(s.strip() for s in side.split(","))
    overrides = {
        k: v for k, v in {
            "frame_length": frame_length, "max_errors": max_errors, "threads": threads,
        }.items() if v is not None
    }
    cfg = SimConfig.with_defaults(
        net, code, G, pe_grid,
        trials=trials,
        sinks=[s.strip() for s in sinks.split(",")] if sinks else None,
        sides=sides,
        seed=seed,
        metric=metric,
        **overrides,
    )
    metrics = SimMetrics()
    curves = run_sweep(cfg, metrics)
    buf = io.StringIO()
    write_curves_csv(curves, buf, {
        "seed": seed,
        "code": format_code(G),
        "config_digest": cfg.digest(),
        "rng": "PCG64",
        "tool_version": __version__,
    })
    if logger.isEnabledFor(logging.INFO):
        click.echo(metrics.get_summary(), err=True)
    _emit(buf.getvalue(), out, "ber-sim", _inputs(network, text), seed=seed, metrics=metrics.to_dict())


@cli.command("slope-sweep")
@click.option("--c", "c", type=int, default=2, show_default=True, help="Code length (rate 1/c)")
@click.option("--max-degree", type=int, default=3, show_default=True)
@click.option("-o", "--out", default=None)
@reports_errors
def slope_sweep(c, max_degree, out):
    """Slope against 1/(degree+1) for every minimal-basic rate-1/c generator (CSV)."""
    buf = io.StringIO()
    buf.write("G,degree,slope,bound,pass,matches_cycles\n")
    failures = 0
    for G in iter_rate_1_generators(c, max_degree):
        code = analyze(G)
        if not code.minimal_basic:
            continue
        sg = build_state_graph(code)
        check = slope_bound_check(code, sg)
        agrees = check.slope == slope_by_cycles(code, sg)
        failures += (not check.passed) + (not agrees)
        buf.write(f"\"{format_code(G)}\",{code.degree},{_fmt_slope(check.slope)},{check.bound},"
                  f"{str(check.passed).lower()},{str(agrees).lower()}\n")
    _emit(buf.getvalue(), out, "slope-sweep", {})
    if failures:
        sys.exit(1)


@cli.command()
@click.argument("manifest_path", metavar="MANIFEST")
@click.pass_context
@reports_errors
def replay(ctx, manifest_path):
    """Re-run a manifest and check its output digest."""
    manifest = load_manifest(manifest_path)
    command = cli.commands[manifest.subcommand]
    for source, digest in manifest.inputs.items():
        if source not in (BUILTIN, "-") and Path(source).exists() and file_digest(source) != digest:
            click.echo(f"Warning: input {source} changed since the recorded run", err=True)
        if source == "-":
            raise ParseError("E004", "runs that read the network from stdin cannot be replayed")

    previous = get_default_config()
    set_default_config(CNECCConfig(**manifest.config))
    try:
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "replay.out"
            params = dict(manifest.params, out=str(out))
            try:
                ctx.invoke(command, **params)
            except SystemExit as e:
                if e.code not in (0, None):
                    raise
            digest = file_digest(out)
    finally:
        set_default_config(previous)

    (name, expected), = manifest.outputs.items()
    if digest == expected:
        click.echo(f"OK: {name} reproduced ({digest})")
    else:
        click.echo(f"MISMATCH: {name} recorded {expected}, replay {digest}")
        sys.exit(1)


if __name__ == "__main__":
    cli()
