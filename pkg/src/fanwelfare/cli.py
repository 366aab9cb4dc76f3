"""Command-line interface.

Fans are given either as shorthand

    utilitarian | rawlsian | contamination:<rho> | step:<c*> | file:<path>

with <rho> one of ``identity``, ``pow:<p>``, or ``pl:<v,r;v,r;...>``
(knot pairs separated by semicolons), or as a JSON document loaded from a
file. All numeric output is printed with 12 significant digits, locale
independent, so identical inputs and seeds produce byte-identical output.

Exit codes: 0 success, 1 axiom violations found, 2 usage or validation
error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from functools import wraps

import click

from .axioms import run_axiom_battery
from .core import MonotoneFunction, UtilityVector, WelfareError
from .fans import Fan, ContaminationFan, Rawlsian, StepFan, Utilitarian, fan_from_json, fan_to_dict
from .ineq import AtkinsonParams, atkinson_ede
from .oracle import brute_welfare
from .solver import SolverConfig, rank, welfare
from .triage import (
    TriageParams,
    load_triage_params,
    optimal_policy_threshold,
    policy_region_grid,
    write_region_csv,
)

def _canonical_triage() -> TriageParams:
    # gamma * H sits exactly on the admissible boundary here, so building
    # these lazily keeps the boundary warning out of unrelated commands.
    return TriageParams(L=0.1, H=0.5, gamma=2.0)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _parse_rho(text: str) -> MonotoneFunction:
    if text == "identity":
        return MonotoneFunction.identity()
    if text.startswith("pow:"):
        return MonotoneFunction.power(float(text[4:]))
    if text.startswith("pl:"):
        knots = []
        for pair in text[3:].split(";"):
            v, r = pair.split(",")
            knots.append((float(v), float(r)))
        return MonotoneFunction.piecewise_linear(knots)
    raise click.UsageError(
        f"unknown aversion spec {text!r}; expected identity, pow:<p>, or pl:<knots>"
    )


def parse_fan(text: str) -> Fan:
    """Resolve the --fan shorthand grammar (see module docstring)."""
    if text == "utilitarian":
        return Utilitarian()
    if text == "rawlsian":
        return Rawlsian()
    if text.startswith("contamination:"):
        return ContaminationFan(_parse_rho(text.split(":", 1)[1]))
    if text.startswith("step:"):
        return StepFan(float(text.split(":", 1)[1]))
    if text.startswith("file:"):
        path = text.split(":", 1)[1]
        with open(path, "r", encoding="utf-8") as fh:
            return fan_from_json(fh.read())
    raise click.UsageError(f"unknown fan spec {text!r}")


def _parse_vector(text: str) -> UtilityVector:
    try:
        return UtilityVector([float(part) for part in text.split(",") if part != ""])
    except ValueError as exc:
        raise click.UsageError(f"could not parse vector {text!r}: {exc}") from exc


def _load_params(path: str | None) -> TriageParams:
    if path is None:
        return _canonical_triage()
    with open(path, "r", encoding="utf-8") as fh:
        return load_triage_params(json.load(fh))


def _domain_errors_exit_2(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except WelfareError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


@click.group()
def main():
    """Fan social welfare toolkit: evaluation, axioms, triage, inequality."""


@main.command("eval")
@click.option("--fan", "fan_spec", required=True, help="Fan shorthand or file:<path>.")
@click.option("--x", "x_text", required=True, help="Comma-separated utilities.")
@click.option("--tol", default=1e-10, show_default=True, help="Fixed-point tolerance.")
@_domain_errors_exit_2
def cmd_eval(fan_spec, x_text, tol):
    """Welfare of one profile, printed as a JSON result document."""
    fan = parse_fan(fan_spec)
    result = welfare(fan, _parse_vector(x_text), SolverConfig(tol_abs=tol))
    doc = result.to_dict()
    doc["value"] = float(_fmt(doc["value"]))
    doc["residual"] = float(_fmt(doc["residual"]))
    doc["witness"] = [float(_fmt(w)) for w in doc["witness"]]
    click.echo(json.dumps(doc))


@main.command("rank")
@click.option("--fan", "fan_spec", required=True)
@click.option("--x", "x_text", required=True)
@click.option("--y", "y_text", required=True)
@click.option("--tol", default=1e-10, show_default=True)
@_domain_errors_exit_2
def cmd_rank(fan_spec, x_text, y_text, tol):
    """Compare two profiles: x_preferred, y_preferred, or indifferent."""
    fan = parse_fan(fan_spec)
    verdict = rank(fan, _parse_vector(x_text), _parse_vector(y_text),
                   SolverConfig(tol_abs=tol))
    click.echo(verdict)


@main.command("axioms")
@click.option("--fan", "fan_spec", required=True)
@click.option("--trials", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--tol", default=1e-10, show_default=True)
@click.option("--out", default=None, help="Write the JSON report here instead of stdout.")
@_domain_errors_exit_2
def cmd_axioms(fan_spec, trials, seed, tol, out):
    """Run the axiom battery; exit 1 when any violation is found."""
    fan = parse_fan(fan_spec)
    reports = run_axiom_battery(fan, trials, seed=seed, cfg=SolverConfig(tol_abs=tol))
    doc = {
        "fan": fan_to_dict(fan),
        "trials": trials,
        "seed": seed,
        "reports": [r.to_dict() for r in reports],
    }
    _emit(json.dumps(doc, indent=2) + "\n", out)
    if any(r.violations for r in reports):
        sys.exit(1)


@main.command("triage-threshold")
@click.option("--k", "k_text", default=None,
              help="Comma-separated supply levels; falls back to 'k' in --params.")
@click.option("--params", "params_path", default=None,
              help="JSON triage parameters (default: L=0.1, H=0.5, gamma=2, identity rho).")
@click.option("--tol", default=1e-9, show_default=True)
@click.option("--out", default=None)
@_domain_errors_exit_2
def cmd_triage_threshold(k_text, params_path, tol, out):
    """CSV of the fair-to-efficient switching threshold per supply level."""
    params = _load_params(params_path)
    if k_text is None and params_path is not None:
        with open(params_path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if "k" in raw:
            k_text = str(raw["k"])
    if k_text is None:
        raise click.UsageError("no supply levels given (use --k or put 'k' in --params)")
    lines = ["k,alpha_star"]
    for part in k_text.split(","):
        k = float(part)
        lines.append(f"{k:.12g},{optimal_policy_threshold(k, params, tol):.12g}")
    _emit("\n".join(lines) + "\n", out)


@main.command("triage-grid")
@click.option("--steps", default=101, show_default=True)
@click.option("--k-min", default=0.01, show_default=True)
@click.option("--k-max", default=0.99, show_default=True)
@click.option("--alpha-min", default=0.01, show_default=True)
@click.option("--alpha-max", default=0.99, show_default=True)
@click.option("--params", "params_path", default=None)
@click.option("--out", default=None, help="CSV output path (default stdout).")
@_domain_errors_exit_2
def cmd_triage_grid(steps, k_min, k_max, alpha_min, alpha_max, params_path, out):
    """Sweep (k, alpha) and write the policy-region CSV."""
    params = _load_params(params_path)
    cells = policy_region_grid((k_min, k_max), (alpha_min, alpha_max), steps, params)
    buf = io.StringIO()
    write_region_csv(cells, buf)
    _emit(buf.getvalue(), out)


@main.command("ineq")
@click.option("--csv", "csv_path", default=None,
              help="CSV of income distributions, one per row.")
@click.option("--x", "x_text", default=None, help="Inline distribution instead of a file.")
@click.option("--epsilon", default=0.5, show_default=True)
@click.option("--out", default=None)
@_domain_errors_exit_2
def cmd_ineq(csv_path, x_text, epsilon, out):
    """Atkinson equally-distributed-equivalent income per distribution."""
    params = AtkinsonParams(epsilon)
    rows: list[UtilityVector] = []
    if csv_path is not None:
        with open(csv_path, "r", encoding="utf-8", newline="") as fh:
            for record in csv.reader(fh):
                if record:
                    rows.append(UtilityVector([float(cell) for cell in record]))
    if x_text is not None:
        rows.append(_parse_vector(x_text))
    if not rows:
        raise click.UsageError("nothing to evaluate (use --csv or --x)")
    lines = ["row,ede"]
    for i, row in enumerate(rows):
        lines.append(f"{i},{atkinson_ede(row, params):.12g}")
    _emit("\n".join(lines) + "\n", out)


@main.command("oracle", hidden=True)
@click.option("--fan", "fan_spec", required=True)
@click.option("--x", "x_text", required=True)
@click.option("--v-resolution", default=10000, show_default=True)
@click.option("--simplex-m", default=None, type=int)
@_domain_errors_exit_2
def cmd_oracle(fan_spec, x_text, v_resolution, simplex_m):
    """Brute-force welfare value (slow reference path, for example generation)."""
    fan = parse_fan(fan_spec)
    value = brute_welfare(fan, _parse_vector(x_text), v_resolution, simplex_m)
    click.echo(_fmt(value))


if __name__ == "__main__":
    main()
