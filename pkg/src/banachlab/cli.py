"""``lab``: command-line front door to the laboratory.

Every subcommand builds an :class:`ExperimentManifest` and runs it, so the
command line, manifest files and the acceptance suite share one code path.
Arguments that take a space or a vector accept inline JSON or a file path.
"""

from __future__ import annotations

import json
import os
import sys
from typing import Optional

import click

from . import acceptance
from .lab import (EXIT_OK, EXIT_PARSE, EXIT_VIOLATION, ExperimentManifest, ManifestError,
                  emit_report, run_experiment)


def _load(arg: Optional[str]):
    if arg is None:
        return None
    if os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
    else:
        text = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.exceptions.Exit(_fail(f"cannot parse {arg!r}: {exc}", EXIT_PARSE))


def _fail(msg: str, code: int) -> int:
    click.echo(msg, err=True)
    return code


def _run(name: str, operation: str, params: dict, seed: int, out: Optional[str], fmt: str,
         tolerances: Optional[dict] = None):
    params = {k: v for k, v in params.items() if v is not None}
    m = ExperimentManifest(name, operation, params, seed, tolerances or {}, out)
    outcome = run_experiment(m)
    if outcome.message:
        click.echo(outcome.message, err=True)
    if outcome.records:
        click.echo(emit_report(outcome.records, fmt), nl=False)
    sys.exit(outcome.status)


_seed = click.option("--seed", type=int, required=True, help="Seed for every random draw.")
_out = click.option("--out", "out", default=None, help="Append records to this CSV (or write JSON).")
_fmt = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json")


@click.group()
def main():
    """Numerical laboratory for the geometry of sequence spaces."""


@main.command("run")
@click.argument("manifest")
@click.option("--seed", type=int, default=None, help="Override the manifest seed.")
@_out
@_fmt
def run_cmd(manifest, seed, out, fmt):
    """Run a JSON manifest; flags override file values."""
    try:
        m = ExperimentManifest.from_json(_load(manifest))
    except ManifestError as exc:
        sys.exit(_fail(str(exc), EXIT_PARSE))
    if seed is not None:
        m.seed = seed
    if out is not None:
        m.output = out
    _run(m.name, m.operation, m.parameters, m.seed, m.output, fmt, m.tolerances)


@main.command("norm")
@click.option("--space", required=True)
@click.option("--v", "v", required=True)
@_out
@_fmt
def norm_cmd(space, v, out, fmt):
    """Norm of a vector."""
    _run("norm", "norm", {"space": _load(space), "v": _load(v)}, 0, out, fmt)


@main.command("dualnorm")
@click.option("--space", required=True)
@click.option("--f", "f", required=True)
@click.option("--restarts", type=int, default=8)
@_seed
@_out
@_fmt
def dualnorm_cmd(space, f, restarts, seed, out, fmt):
    """Dual norm of a functional."""
    _run("dualnorm", "dualnorm", {"space": _load(space), "f": _load(f), "restarts": restarts},
         seed, out, fmt)


@main.group()
def tsirelson():
    """Exact Tsirelson norms and the blocking/lower-estimate checks."""


@tsirelson.command("norm")
@click.option("--v", "v", required=True)
@click.option("--rule", type=click.Choice(["min-after-n", "per-index"]), default="min-after-n")
@click.option("--growth", type=click.Choice(["power", "linear"]), default="power")
@_out
@_fmt
def t_norm_cmd(v, rule, growth, out, fmt):
    _run("tsirelson.norm", "tsirelson.norm", {"v": _load(v), "rule": rule, "growth": growth},
         0, out, fmt)


@tsirelson.command("lowerq")
@click.option("--q", type=float, required=True)
@click.option("--p", type=float, default=1.0)
@click.option("--trials", type=int, default=1000)
@click.option("--tail-start", type=int, default=None)
@_seed
@_out
@_fmt
def t_lowerq_cmd(q, p, trials, tail_start, seed, out, fmt):
    _run("tsirelson.lowerq", "tsirelson.lowerq",
         {"q": q, "p": p, "trials": trials, "tail_start": tail_start}, seed, out, fmt)


@tsirelson.command("lemma54")
@click.option("--m", "m", default=None, help="JSON list of block starts.")
@click.option("--a", "a", default=None, help="JSON list of nonincreasing values.")
@click.option("--q", type=float, default=None)
@click.option("--instances", type=int, default=1000)
@_seed
@_out
@_fmt
def t_lemma54_cmd(m, a, q, instances, seed, out, fmt):
    params = {"instances": instances}
    if m is not None:
        params.update({"m": _load(m), "a": _load(a), "q": q})
    _run("tsirelson.lemma54", "tsirelson.lemma54", params, seed, out, fmt)


@main.group()
def mazur():
    """Extremal vectors and generalized Mazur maps."""


@mazur.command("solve")
@click.option("--space", required=True)
@click.option("--b", "b", required=True)
@_out
@_fmt
def mazur_solve_cmd(space, b, out, fmt):
    _run("mazur.solve", "mazur.solve", {"space": _load(space), "b": _load(b)}, 0, out, fmt)


@mazur.command("map")
@click.option("--from", "src", required=True)
@click.option("--to", "dst", required=True)
@click.option("--x", "x", required=True)
@_out
@_fmt
def mazur_map_cmd(src, dst, x, out, fmt):
    _run("mazur.map", "mazur.map", {"from": _load(src), "to": _load(dst), "x": _load(x)}, 0, out, fmt)


@main.group()
def verify():
    """Sampled checks of the midpoint, interpolation and factorization statements."""


@verify.command("lemma15")
@click.option("--map", "map_", required=True, help='{"from": space, "to": space, "radius": r|null}')
@click.option("--x", "x", required=True)
@click.option("--y", "y", required=True)
@click.option("--d", type=float, required=True)
@click.option("--delta", type=float, required=True)
@click.option("--epsilon", type=float, default=None)
@click.option("--samples", type=int, default=500)
@_seed
@_out
@_fmt
def verify15(map_, x, y, d, delta, epsilon, samples, seed, out, fmt):
    _run("verify.lemma15", "verify.lemma15",
         {"map": _load(map_), "x": _load(x), "y": _load(y), "d": d, "delta": delta,
          "epsilon": epsilon, "samples": samples}, seed, out, fmt)


@verify.command("lemma16")
@click.option("--space", required=True)
@click.option("--p", type=float, required=True)
@click.option("--direction", type=click.Choice(["upper", "lower"]), default="upper")
@click.option("--x", "x", required=True)
@click.option("--delta", type=float, required=True)
@click.option("--samples", type=int, default=1000)
@click.option("--scale", type=click.Choice(["relative", "literal"]), default="relative")
@click.option("--bound", type=click.Choice(["literal", "sharp"]), default="literal")
@_seed
@_out
@_fmt
def verify16(space, p, direction, x, delta, samples, scale, bound, seed, out, fmt):
    _run("verify.lemma16", "verify.lemma16",
         {"space": _load(space), "p": p, "direction": direction, "x": _load(x), "delta": delta,
          "samples": samples, "scale": scale, "bound": bound}, seed, out, fmt)


@verify.command("lemma42")
@click.option("--Y", "Y", required=True)
@click.option("--Z", "Z", required=True)
@click.option("--theta", type=float, required=True)
@click.option("--trials", type=int, default=10)
@_seed
@_out
@_fmt
def verify42(Y, Z, theta, trials, seed, out, fmt):
    _run("verify.lemma42", "verify.lemma42",
         {"Y": _load(Y), "Z": _load(Z), "theta": theta, "trials": trials}, seed, out, fmt)


@verify.command("cor43")
@click.option("--X", "X", required=True)
@click.option("--theta", type=float, required=True)
@click.option("--trials", type=int, default=10)
@_seed
@_out
@_fmt
def verify43(X, theta, trials, seed, out, fmt):
    _run("verify.cor43", "verify.cor43", {"X": _load(X), "theta": theta, "trials": trials},
         seed, out, fmt)


@verify.command("lemma44")
@click.option("--X", "X", required=True)
@click.option("--p", type=float, required=True)
@click.option("--r", type=float, required=True)
@click.option("--trials", type=int, default=10)
@_seed
@_out
@_fmt
def verify44(X, p, r, trials, seed, out, fmt):
    _run("verify.lemma44", "verify.lemma44", {"X": _load(X), "p": p, "r": r, "trials": trials},
         seed, out, fmt)


@main.group()
def scan():
    """Empirical moduli of continuity."""


@scan.command("modulus")
@click.option("--map", "map_", required=True, help='{"from": space, "to": space, "radius": r|null}')
@click.option("--scales", required=True, help="Comma-separated increasing scales.")
@click.option("--samples", type=int, default=200)
@_seed
@_out
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def scan_modulus(map_, scales, samples, seed, out, fmt):
    ts = [float(t) for t in scales.split(",") if t.strip()]
    _run("scan.modulus", "scan.modulus", {"map": _load(map_), "scales": ts, "samples": samples},
         seed, out, fmt)


@main.command("accept")
@click.option("--suite", type=click.Choice(sorted(acceptance.SUITES)), default="all")
@click.option("--seed", type=int, default=7)
@click.option("--payload-out", default=None, help="Write the seed-determined payload here.")
@click.option("--quiet", is_flag=True)
def accept_cmd(suite, seed, payload_out, quiet):
    """Run the acceptance suite; exit status 1 if any criterion fails."""
    report = None if quiet else (lambda r: click.echo(r.line()))
    results = acceptance.run_suite(seed, suite, report=report)
    if payload_out:
        with open(payload_out, "w") as fh:
            fh.write(acceptance.payload_document(results))
    failed = [r.number for r in results if not r.passed]
    if not quiet:
        click.echo(f"{len(results) - len(failed)}/{len(results)} criteria passed"
                   + (f"; failing: {failed}" if failed else ""))
    sys.exit(EXIT_VIOLATION if failed else EXIT_OK)


if __name__ == "__main__":
    main()
