"""Command-line driver: ``sheun verify | table | spectrum | heun | debug-op``."""

from __future__ import annotations

import csv
import io
import json
import time
from fractions import Fraction
from typing import Dict, List, Sequence

import click
from click.core import ParameterSource

from .families import BigQJacobi, ContinuousHahn, Jacobi
from .generators import build_basis
from .heun import HeunCombo, NoFactorization, assemble, closed_form, factorize
from .operators import CONTINUUM, LINEAR, QLINEAR, OperatorSyntaxError, continuum, linear, monomial, parse_operator, qlinear
from .report import Report, render
from .scalars import PoleError, format_scalar, parse_scalar
from .suites import GRIDS, MAX_NMAX, SUITES, run_suite
from .truncation import TriDiag, spectrum

FLOAT_FMT = ".12g"
SEED_BOUND = 2 ** 64


class Rational(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, (Fraction, int)):
            return Fraction(value)
        try:
            v = parse_scalar(str(value))
        except ValueError:
            self.fail(f"{value!r} is not a rational of the form p/q", param, ctx)
        if not isinstance(v, Fraction):
            self.fail(f"{value!r} is not real", param, ctx)
        return v


class RationalList(click.ParamType):
    name = "rationals"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        return tuple(Rational().convert(v, param, ctx) for v in str(value).split(","))


RAT = Rational()
FORMATS = click.Choice(["json", "md", "csv"])


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _read_config(path: str) -> Dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            values[k.replace("-", "_")] = v
    return values


def _apply_config(ctx: click.Context, params: dict, path: str | None) -> dict:
    """Fill parameters left at their defaults from a key=value file."""
    if not path:
        return params
    by_name = {p.name: p for p in ctx.command.params}
    for key, raw in _read_config(path).items():
        if key not in by_name or key == "config":
            raise click.UsageError(f"unknown config key {key!r}")
        if ctx.get_parameter_source(key) != ParameterSource.DEFAULT:
            continue
        p = by_name[key]
        if p.is_flag:
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            try:
                value = p.type.convert(raw, p, ctx)
            except click.BadParameter as exc:
                raise click.UsageError(f"config {key}: {exc.message}") from None
        params[key] = value
    return params


@click.group()
def main():
    """Exact verification of S-Heun operator identities."""


# -- verify ----------------------------------------------------------------------


@main.command()
@click.option("--grid", type=click.Choice(list(GRIDS) + ["all"]), default="all", show_default=True)
@click.option("--suite", type=click.Choice(list(SUITES) + ["all"]), default="all", show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--seed", type=click.IntRange(-SEED_BOUND // 2, SEED_BOUND - 1), default=0, show_default=True)
@click.option("--nmax", type=click.IntRange(0, MAX_NMAX), default=8, show_default=True)
@click.option("--format", "format", type=FORMATS, default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="key=value file; explicit flags take precedence.")
@click.option("--timing/--no-timing", default=False, help="Include elapsed_ms (breaks byte-identical output).")
@click.pass_context
def verify(ctx, **params):
    """Run verification suites and emit a report; exit 1 if any check fails."""
    p = _apply_config(ctx, params, params.get("config"))
    start = time.perf_counter()
    checks = run_suite(p["suite"], p["grid"], p["seed"], p["trials"], p["nmax"])
    report = Report(p["suite"], p["grid"], p["seed"], p["trials"], checks,
                    int((time.perf_counter() - start) * 1000))
    report.validate()
    _write(render(report, p["format"], p["timing"]), p["out"])
    failed, found = len(report.failed), len(report.findings)
    if failed:
        click.echo(f"FAILED: {failed} of {len(checks)} checks", err=True)
        ctx.exit(1)
    if found:
        click.echo(f"no failures; {found} finding(s) reported", err=True)


# -- tables ----------------------------------------------------------------------

FAMILIES = ["para-krawtchouk", "q-para-krawtchouk", "jacobi", "continuous-hahn", "big-q-jacobi"]


def _need(values: dict, names: Sequence[str], family: str):
    missing = [n for n in names if values.get(n) is None]
    if missing:
        raise click.UsageError(f"--family {family} needs {', '.join('--' + m for m in missing)}")


def _emit_rows(header: List[str], rows: List[List[str]], fmt: str, meta: dict, out: str | None):
    if fmt == "json":
        text = json.dumps({**meta, "rows": [dict(zip(header, r)) for r in rows]}, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        text = "\n".join(lines) + "\n"
    _write(text, out)


def _para_rows(grid: str, N: int, shift, q):
    td = TriDiag.para(grid, N, shift, q)
    return [[str(n), format_scalar(a), format_scalar(d), format_scalar(c)]
            for n, (a, d, c) in enumerate(zip(td.A, td.diag, td.C))]


def _poly_rows(fam, n: int):
    polys = [fam.series(k) for k in range(n + 1)]
    width = n + 1
    return [[str(k)] + [format_scalar(p[m]) for m in range(width)] for k, p in enumerate(polys)], width


def _family_option(f):
    for name in ("a", "b", "c", "d", "alpha", "beta", "gamma", "c3", "q"):
        f = click.option(f"--{name}", type=RAT, default=None)(f)
    return f


@main.command()
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--N", "N", type=click.IntRange(min=1), default=None, help="Truncation size (para families).")
@click.option("--n", "n", type=click.IntRange(0, MAX_NMAX), default=None, help="Largest degree (polynomial families).")
@_family_option
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def table(family, N, n, fmt, out, **fp):
    """Recurrence coefficients (para families) or polynomial coefficients (others)."""
    try:
        if family in ("para-krawtchouk", "q-para-krawtchouk"):
            if N is None:
                raise click.UsageError(f"--family {family} needs --N")
            if family == "para-krawtchouk":
                _need(fp, ["gamma"], family)
                rows = _para_rows(LINEAR, N, fp["gamma"], None)
                meta = {"family": family, "N": N, "gamma": format_scalar(fp["gamma"])}
            else:
                _need(fp, ["c3", "q"], family)
                rows = _para_rows(QLINEAR, N, fp["c3"], fp["q"])
                meta = {"family": family, "N": N, "c3": format_scalar(fp["c3"]), "q": format_scalar(fp["q"])}
            _emit_rows(["n", "A", "B", "C"], rows, fmt, meta, out)
            return
        if n is None:
            raise click.UsageError(f"--family {family} needs --n")
        if family == "jacobi":
            fam = Jacobi(fp["alpha"] or Fraction(0), fp["beta"] or Fraction(0))
            var = "x"
        elif family == "continuous-hahn":
            _need(fp, ["a", "b", "c", "d"], family)
            fam, var = ContinuousHahn(fp["a"], fp["b"], fp["c"], fp["d"]), "x"
        else:
            _need(fp, ["alpha", "beta", "gamma", "q"], family)
            fam, var = BigQJacobi(fp["alpha"], fp["beta"], fp["gamma"], fp["q"]), "z"
        rows, width = _poly_rows(fam, n)
    except PoleError as exc:
        raise click.UsageError(f"parameters hit a pole: {exc}") from None
    meta = {"family": family, "n": n, "variable": var}
    meta.update({k: format_scalar(v) for k, v in fp.items() if v is not None})
    _emit_rows(["n"] + [f"{var}^{m}" for m in range(width)], rows, fmt, meta, out)


# -- spectrum --------------------------------------------------------------------


def _floats(seq) -> List[str]:
    return [format(float(v), FLOAT_FMT) for v in seq]


@main.command("spectrum")
@click.option("--family", type=click.Choice(FAMILIES[:2]), required=True)
@click.option("--N", "N", type=click.IntRange(min=1), required=True)
@click.option("--gamma", type=RAT, default=None)
@click.option("--c3", type=RAT, default=None)
@click.option("--q", type=RAT, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def spectrum_cmd(family, N, gamma, c3, q, fmt, out):
    """Eigenvalues of the truncated Jacobi matrix and their two-lattice fit."""
    if family == "para-krawtchouk":
        _need({"gamma": gamma}, ["gamma"], family)
        grid, shift = LINEAR, gamma
    else:
        _need({"c3": c3, "q": q}, ["c3", "q"], family)
        grid, shift = QLINEAR, c3
    try:
        sp = spectrum(grid, N, shift, q)
    except PoleError as exc:
        raise click.UsageError(f"parameters hit a pole: {exc}") from None
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "eigenvalue", "lattice"])
        for k, v in enumerate(_floats(sp.eigenvalues)):
            w.writerow([k, v, "even" if k % 2 == 0 else "odd"])
        _write(buf.getvalue(), out)
        return
    doc = {
        "family": family,
        "N": N,
        "shift": format_scalar(shift),
        "method": sp.method,
        "eigenvalues": _floats(sp.eigenvalues),
        "even": _floats(sp.even),
        "odd": _floats(sp.odd),
        "step": None if sp.step is None else format(sp.step, FLOAT_FMT),
        "offset": None if sp.offset is None else format(sp.offset, FLOAT_FMT),
        "parity_residual": format(sp.residual, FLOAT_FMT),
        "single_residual": format(sp.single_residual, FLOAT_FMT),
        "residue_classes": [_floats(c) for c in sp.residue_classes],
        "residue_residual": format(sp.residue_residual, FLOAT_FMT),
    }
    if q is not None:
        doc["q"] = format_scalar(q)
    _write(json.dumps(doc, indent=2) + "\n", out)


# -- heun ------------------------------------------------------------------------


def _grid_for(kind: str, q):
    if kind == CONTINUUM:
        return continuum()
    if kind == LINEAR:
        return linear()
    return qlinear(q)


@main.command()
@click.option("--grid", type=click.Choice(list(GRIDS)), required=True)
@click.option("--alpha", type=RationalList(), default=None, help="Six comma-separated rationals (default zeros).")
@click.option("--beta", type=RationalList(), default=None, help="Three comma-separated rationals (default zeros).")
@click.option("--q", type=RAT, default=None, help="Base on the q-linear grid (symbolic if omitted).")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help='JSON file {"alpha": [...], "beta": [...], "q": "p/q"}; flags take precedence.')
@click.option("--factorize/--no-factorize", "do_factor", default=True, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def heun(grid, alpha, beta, q, input_path, do_factor, out):
    """Assemble a quadratic combination and report its Heun coefficients."""
    if input_path:
        with open(input_path, encoding="utf-8") as fh:
            try:
                doc_in = json.load(fh)
            except json.JSONDecodeError as exc:
                raise click.UsageError(f"{input_path}: {exc}") from None
        to_rat = lambda vs: tuple(RAT.convert(str(v), None, None) for v in vs)
        alpha = alpha if alpha is not None else to_rat(doc_in.get("alpha", ()))
        beta = beta if beta is not None else to_rat(doc_in.get("beta", ()))
        if q is None and doc_in.get("q") is not None:
            q = RAT.convert(str(doc_in["q"]), None, None)
    if not alpha and not beta:
        raise click.UsageError("give --alpha, --beta or --input")
    alpha = alpha if alpha else (Fraction(0),) * 6
    beta = beta if beta else (Fraction(0),) * 3
    if len(alpha) != 6 or len(beta) != 3:
        raise click.UsageError("--alpha takes six values and --beta three")
    g = _grid_for(grid, q)
    combo = HeunCombo(g, alpha, beta)
    W, form = assemble(combo)
    want = closed_form(combo)
    doc = {
        "grid": grid,
        "alpha": [format_scalar(v) for v in alpha],
        "beta": [format_scalar(v) for v in beta],
        "coefficients": {k: str(v) for k, v in form.parts.items()},
        "matches_closed_form": all(form[k] == want[k] for k in want.parts),
    }
    if grid == QLINEAR:
        doc["q"] = "q" if q is None else format_scalar(q)
    if do_factor and not (grid == QLINEAR and q is None):
        try:
            f = factorize(W)
            doc["factorization"] = {"xi": [format_scalar(v) for v in f.xi], "eta": [format_scalar(v) for v in f.eta],
                                    "kappa": format_scalar(f.kappa)}
        except NoFactorization:
            doc["factorization"] = None
    _write(json.dumps(doc, indent=2) + "\n", out)


# -- debug-op --------------------------------------------------------------------


@main.command("debug-op")
@click.argument("expr")
@click.option("--grid", type=click.Choice(list(GRIDS)), required=True)
@click.option("--q", type=RAT, default=None, help="Base on the q-linear grid (symbolic if omitted).")
@click.option("--apply", "apply_n", type=click.IntRange(0, MAX_NMAX), default=None,
              help="Also print the image of the n-th monomial.")
def debug_op(expr, grid, q, apply_n):
    """Parse an operator literal (basis names L, M1, M2, R1, R2 allowed) and print it."""
    g = _grid_for(grid, q)
    try:
        op = parse_operator(expr, g, build_basis(g).named())
    except OperatorSyntaxError as exc:
        raise click.UsageError(str(exc)) from None
    click.echo(str(op))
    if apply_n is not None:
        click.echo(f"{g.var}^{apply_n} -> {op.apply(monomial(g, apply_n))}")


if __name__ == "__main__":
    main()
