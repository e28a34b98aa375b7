"""Command-line entry point.

Exit codes: 0 success, 1 identity or verification failure, 2 configuration or
parse error, 3 numeric convergence failure.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import sys
import warnings

import click

from .. import combinatorics as comb
from ..asymptotics import constant_term_fit, phi_log
from .config import ConfigError, load_config
from .experiment import VERIFY_KINDS, run_szego_experiment, run_verify_suite
from .expr import parse_symbol_expr
from .report import report_csv, report_json, residual_svg, verify_json, write_text

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
U64 = click.IntRange(0, 2**64 - 1)


def _guarded(fn):
    """Map library errors onto the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ArithmeticError as exc:
            click.echo(f"numeric failure: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)
        except (ConfigError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)

    return wrapper


@click.group()
def cli():
    """Szegő-type asymptotics of truncated operators and the Hunt--Dyson identities."""


def _parse_caps(items) -> dict:
    caps = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--cap expects key=value, got {item!r}")
        try:
            caps[key.strip()] = int(value)
        except ValueError as exc:
            raise ConfigError(f"--cap {key}: {exc}") from exc
    return caps


@cli.command()
@click.argument("kind", type=click.Choice(VERIFY_KINDS))
@click.option("--seed", type=U64, default=0, show_default=True)
@click.option("--cap", "caps", multiple=True, help="size override, e.g. --cap m_max=6 --cap trials=100")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), help="write the report as JSON")
@_guarded
def verify(kind, seed, caps, json_path):
    """Check one identity: hd, ghd, bst, rw, trace-identity or commutation."""
    report = run_verify_suite(kind, seed, _parse_caps(caps))
    if json_path:
        write_text(json_path, verify_json(report))
    for line in report.counterexamples[:20]:
        click.echo(f"counterexample: {line}")
    status = "ok" if report.passed else "FAILED"
    click.echo(f"{kind}: {report.checked} cases, {len(report.counterexamples)} counterexamples [{status}]")
    sys.exit(EXIT_OK if report.passed else EXIT_FAILED)


@cli.group()
def szego():
    """Determinant asymptotics of P_n (T(b0) + T(bsub) D) P_n."""


@szego.command("run")
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "csv_path", type=click.Path(dir_okay=False), help="per-n CSV")
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
@click.option("--plot", "svg_path", type=click.Path(dir_okay=False), help="SVG of residual*n^2 vs n")
@click.option("--tol", type=float, default=None, help="override the matrix-series tolerance")
@_guarded
def szego_run(config, csv_path, json_path, svg_path, tol):
    cfg = load_config(config)
    if tol is not None:
        cfg = dataclasses.replace(cfg, series_tol=tol)
    report = run_szego_experiment(cfg)
    if csv_path:
        write_text(csv_path, report_csv(report))
    if json_path:
        write_text(json_path, report_json(report))
    if svg_path:
        write_text(svg_path, residual_svg(report))
    click.echo(f"{'coefficient':>12} {'measured':>22} {'predicted':>22} {'delta':>12}")
    for label, row in report.coefficients.items():
        m = "unfit" if row["measured"] is None else f"{row['measured']:.15g}"
        d = "" if row["delta"] is None else f"{row['delta']:.3e}"
        click.echo(f"{label:>12} {m:>22} {row['predicted']:>22.15g} {d:>12}")
    diag = report.diagnostics
    click.echo(
        f"fit condition {diag['fit_condition']:.3g}; max |residual| n^2: prediction "
        f"{diag['prediction_max_residual_n2']:.3g}, theorem {diag['theorem_max_residual_n2']:.3g}"
    )


@cli.group()
def phi():
    """The Phi[log] kernel."""


@phi.command("eval", context_settings={"ignore_unknown_options": True})
@click.argument("y1", type=float)
@click.argument("y2", type=float)
@click.argument("y3", type=float)
@click.option("--tol", type=float, default=1e-13, show_default=True)
@click.option("--reading", type=click.Choice(["y3", "u3"]), default="y3", show_default=True)
@_guarded
def phi_eval(y1, y2, y3, tol, reading):
    click.echo(repr(phi_log(y1, y2, y3, tol=tol, reading=reading)))


@cli.group()
def rw():
    """Moments of the maximum of a random walk."""


@rw.command("moments")
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
@_guarded
def rw_moments(config, json_path):
    """E[max(0, S_1..S_m)^n] by the gHD recursion, checked against path enumeration."""
    walk = load_config(config).walk
    dist = walk.distribution()
    rows, mismatches = [], 0
    for m in range(1, walk.m + 1):
        for n in range(1, walk.n + 1):
            value = comb.rw_max_moment(dist, m, n)
            try:
                oracle = comb.rw_max_moment_oracle(dist, m, n)
            except comb.EnumerationCapError:
                oracle = None
            ok = oracle is None or oracle == value
            mismatches += not ok
            rows.append({"m": m, "n": n, "moment": str(value), "float": float(value),
                         "oracle": None if oracle is None else str(oracle), "agree": ok})
            click.echo(f"m={m} n={n}  {value}  ({float(value):.12g})" + ("" if ok else f"  != oracle {oracle}"))
    if json_path:
        write_text(json_path, json.dumps({"support": [str(s) for s in dist.support],
                                          "probs": [str(p) for p in dist.probs], "moments": rows},
                                         sort_keys=True, indent=2) + "\n")
    sys.exit(EXIT_FAILED if mismatches else EXIT_OK)


@cli.group()
def probe():
    """Constant-term probe of Tr P_n log(I - D^(1/2) C1 D^(1/2)) P_n."""


@probe.command("constant")
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
@click.option("--tol", type=float, default=1e-14, show_default=True)
@_guarded
def probe_constant(config, json_path, tol):
    pc = load_config(config).probe
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fit = constant_term_fit(parse_symbol_expr(pc.c1), pc.n_grid, pc.buffer, tol=tol)
    click.echo(repr(fit["1"]))
    if json_path:
        payload = {"c1": pc.c1, "n_grid": list(pc.n_grid), "buffer": pc.buffer,
                   "coefficients": fit.coefficients, "condition": fit.condition,
                   "max_residual_n2": fit.max_residual_n2}
        write_text(json_path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def main(argv=None):
    cli.main(args=argv, prog_name="szego-lab")


if __name__ == "__main__":
    main()
