"""Command-line front end.

Every subcommand writes one table, as CSV (17 significant digits) or as a
human-readable table (10 significant digits), to stdout or ``--out``.
Exit codes: 0 success, 1 computation failure or failed consistency check,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import spectrum as sp
from . import weyl
from .domains import Kind, make_domain
from .errors import ParameterOutOfRange, SumRuleError, UnsupportedCombination
from .sumrules import (Combo, SumRuleTask, annulus_closed_form, cardioid_even_odd,
                       partial_wave_zeta, partial_wave_zeta_status, sumrule_exact,
                       sumrule_trace)
from .quadrature import PowerLaw, sum_series

USAGE_ERROR = 2
FAILURE = 1

# absolute slack for comparing two routes that are both exact to rounding
ROUNDOFF = 64 * np.finfo(float).eps


class UsageError(Exception):
    pass


@dataclass
class Table:
    header: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    ok: bool = True


# --------------------------------------------------------------------------
# output

def _fmt(value, digits: int) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits}g}"
    return str(value)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_fmt(v, 17) for v in row])
    return buf.getvalue()


def read_csv(text: str) -> tuple[list[str], list[list[str]]]:
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def to_text(table: Table) -> str:
    cells = [table.header] + [[_fmt(v, 10) for v in row] for row in table.rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(table.header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines + table.notes) + "\n"


def _emit(table: Table, args) -> None:
    text = to_csv(table) if args.format == "csv" else to_text(table)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.format == "csv":
        for note in table.notes:
            print(note, file=sys.stderr)


# --------------------------------------------------------------------------
# helpers

def _domain(args):
    if args.domain is None:
        raise UsageError("--domain is required")
    params = {}
    if args.domain == "rectangle":
        if args.a is None or args.b is None:
            raise UsageError("rectangle needs --a and --b")
        params = {"a": args.a, "b": args.b}
    elif args.domain == "annulus":
        if args.r0 is None:
            raise UsageError("annulus needs --r0")
        params = {"r0": args.r0}
    elif args.domain == "cardioid":
        params = {"lam": 0.0 if args.lam is None else args.lam}
    return make_domain(args.domain, **params)


def _positive(value, name: str) -> int:
    if value is None or value < 1:
        raise UsageError(f"--{name} must be a positive integer")
    return value


def _class_spectra(dom, bc: str, count: int, basis: int | None):
    """Even and odd spectra of a domain's reflection classes."""
    if dom.kind is Kind.RECTANGLE:
        # parity about the horizontal axis, the one the closed form refers to
        return (sp.rectangle_spectrum(dom.a, dom.b, "even", count, axis="horizontal"),
                sp.rectangle_spectrum(dom.a, dom.b, "odd", count, axis="horizontal"))
    if dom.kind is Kind.DISK:
        return sp.disk_spectrum(bc, "even", count), sp.disk_spectrum(bc, "odd", count)
    if dom.kind is Kind.ANNULUS:
        if not bc.startswith("d"):
            raise UnsupportedCombination("annulus spectra are Dirichlet only")
        return sp.annulus_spectrum(dom.r0, "even", count), sp.annulus_spectrum(dom.r0, "odd", count)
    basis = basis or _default_basis(count)
    return (sp.cardioid_spectrum(dom.lam, bc, "even", basis, count, error_estimate=False),
            sp.cardioid_spectrum(dom.lam, bc, "odd", basis, count, error_estimate=False))


def _default_basis(count: int) -> int:
    return 4 * count + 4


# --------------------------------------------------------------------------
# commands

def cmd_sumrule(args) -> Table:
    dom = _domain(args)
    task = SumRuleTask(dom, Combo(args.combo))
    exact = sumrule_exact(task)
    table = Table(["domain", "combo", "exact", "trace", "difference", "error_estimate"])
    try:
        trace = sumrule_trace(task)
    except UnsupportedCombination as exc:
        table.rows.append([dom.label, task.combo.value, exact.value, "n/a", "n/a", exact.error_estimate])
        table.notes.append(f"trace unavailable: {exc}")
        return table
    diff = trace.value - exact.value
    allowed = exact.error_estimate + trace.error_estimate + ROUNDOFF * max(1.0, abs(exact.value))
    table.rows.append([dom.label, task.combo.value, exact.value, trace.value, diff, allowed])
    table.ok = abs(diff) <= allowed
    table.notes.append("check: " + ("pass" if table.ok else "FAIL") + " (|difference| <= error_estimate)")
    return table


def cmd_spectrum(args) -> Table:
    dom = _domain(args)
    count = _positive(args.count, "count")
    sym = args.klass
    if dom.kind is Kind.RECTANGLE:
        if sym == "none":
            raise UsageError("rectangle spectra need --class even or odd")
        spec = sp.rectangle_spectrum(dom.a, dom.b, sym, count, axis="horizontal")
    elif dom.kind is Kind.DISK:
        spec = sp.disk_spectrum(args.bc, sym, count)
    elif dom.kind is Kind.ANNULUS:
        spec = sp.annulus_spectrum(dom.r0, sym, count)
    else:
        spec = sp.cardioid_spectrum(dom.lam, args.bc, None if sym == "none" else sym,
                                    args.basis or _default_basis(count), count)
    table = Table(["index", "eigenvalue", "symmetry", "bc", "rel_error_estimate"])
    for e in spec.entries:
        table.rows.append([e.index, e.eigenvalue, e.symmetry.value, e.bc.value, e.rel_error_estimate])
    return table


def table1_rows(count: int = 500, rows: int = 10) -> list[list[float]]:
    """Annulus rows r0 = 2^-j: exact, partial zeta over ``count`` roots, plus Weyl tail.

    The even-minus-odd annulus sum reduces to the order-0 roots alone. The
    partial sum stops between the count-th and next root, so the tail is the
    Weyl integral above the energy where the class counts differ by count + 1/2.
    """
    out = []
    for j in range(1, rows + 1):
        r0 = 2.0 ** -j
        dom = make_domain("annulus", r0=r0)
        zeros = sp.bessel_zeros(sp.CrossProduct(0, r0), count).zeros
        partial = float(np.sum((r0 / zeros) ** 2))
        even, odd = weyl.class_models(dom, "dirichlet")
        tail = weyl.tail_difference(even, odd, e_cut=weyl.midpoint_energy_cut(even, odd, count))
        out.append([r0, float(annulus_closed_form(r0)), partial, partial + tail])
    return out


def cmd_table1(args) -> Table:
    count = _positive(args.count or 500, "count")
    table = Table(["r0", "exact", "numerical", "numerical+Weyl"])
    table.rows = table1_rows(count)
    return table


def table2_row(lam: float, count: int = 500, basis: int = 2000) -> list[float]:
    """Cardioid even-minus-odd Dirichlet: exact, partial sum per class, plus Weyl tail."""
    dom = make_domain("cardioid", lam=lam)
    even, odd = _class_spectra(dom, "dirichlet", count, basis)
    partial = float(np.sum(1.0 / even.values - 1.0 / odd.values))
    m_even, m_odd = weyl.class_models(dom, "dirichlet")
    tail = weyl.tail_difference(m_even, m_odd, n_cut=count)
    exact = float(cardioid_even_odd(repr(float(lam))))
    return [lam, exact, partial, partial + tail]


def cmd_table2(args) -> Table:
    count = _positive(args.count or 500, "count")
    basis = args.basis or 2000
    table = Table(["lambda", "exact", "numerical", "numerical+Weyl"])
    for i in range(6):
        table.rows.append(table2_row(round(0.1 * i, 1), count, basis))
    return table


_DEFAULT_CONVERGENCE_COUNT = {"rectangle": 10_000, "disk": 2000, "annulus": 2000, "cardioid": 500}


def cmd_convergence(args) -> Table:
    dom = _domain(args)
    count = args.count if args.count is not None else _DEFAULT_CONVERGENCE_COUNT[args.domain]
    if count < 1:
        raise SumRuleError("empty spectrum: nothing to sum")
    bc = args.bc
    even, odd = _class_spectra(dom, bc, count, args.basis)
    partial = np.cumsum(1.0 / even.values - 1.0 / odd.values)
    m_even, m_odd = weyl.class_models(dom, bc)
    n = np.arange(1, count + 1)
    tails = np.array([weyl.tail_difference(m_even, m_odd, n_cut=int(k)) for k in n])
    table = Table(["N", "S_N", "S_N+tail"])
    table.rows = [[int(k), float(s), float(s + t)] for k, s, t in zip(n, partial, tails)]
    fit_points = min(10_000, count // 2)
    data = np.column_stack([n, partial])[-fit_points:]
    s_inf, c = weyl.extrapolate_sqrt(data)
    table.notes.append(f"fit: S_N = {s_inf:.10g} - {c:.10g}/sqrt(N) over the last {fit_points} sums")
    if args.plot:
        _plot(args.plot, n, partial, partial + tails, s_inf, c, dom.label)
    return table


def _plot(path, n, partial, corrected, s_inf, c, label) -> None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        x = 1.0 / np.sqrt(n)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(x, partial, lw=1, label="partial sums")
        ax.plot(x, corrected, lw=1, label="with Weyl tail")
        ax.plot(x, s_inf - c * x, "--", lw=1, label="sqrt fit")
        ax.set_xlabel("1/sqrt(N)")
        ax.set_ylabel("S_N")
        ax.set_title(label)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
    except Exception as exc:  # plotting must never fail the run
        warnings.warn(f"plot not written: {exc}")


def cmd_zeta(args) -> Table:
    """Partial-wave zeta values from computed zeros with power-law completion."""
    count = _positive(args.count or 2000, "count")
    if count < 64:
        raise UsageError("--count must be at least 64 for the power-law completion")
    l_max = args.l_max
    table = Table(["bc", "l", "numerical", "formula", "difference", "status"])
    bcs = ["dirichlet", "neumann"] if args.bc == "both" else [args.bc]
    for bc in bcs:
        for l in range(l_max + 1):
            value = zeta_from_zeros(bc, l, count)
            formula = float(partial_wave_zeta(bc, l))
            diff = value - formula
            table.rows.append([bc, l, value, formula, diff, partial_wave_zeta_status(bc, l)])
            table.ok &= abs(diff) <= args.tol
    table.notes.append("check: " + ("pass" if table.ok else "FAIL") + f" (|difference| <= {args.tol:g})")
    return table


def zeta_from_zeros(bc: str, l: int, count: int = 2000) -> float:
    """sum_m 1/k_lm^2 over ``count`` zeros, completed by Richardson extrapolation."""
    kind = sp.J(l) if bc.startswith("d") else sp.Jprime(l)
    zeros = sp.bessel_zeros(kind, count).zeros
    terms = 1.0 / zeros ** 2
    # three or more doublings, the smallest holding at least ~125 zeros when possible
    levels = max(3, int(math.log2(max(count // 125, 1))) + 1)
    result = sum_series(lambda m: terms[np.asarray(m) - 1], PowerLaw(2), target=1e-16,
                        min_terms=count // 2 ** (levels - 1), max_terms=count)
    return float(result.value)


# --------------------------------------------------------------------------
# argument handling

COMMANDS = {
    "sumrule": cmd_sumrule,
    "spectrum": cmd_spectrum,
    "table1": cmd_table1,
    "table2": cmd_table2,
    "convergence": cmd_convergence,
    "zeta": cmd_zeta,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="billiard-sumrules",
        description="Order-one spectral sum rules for 2D billiards, with spectral cross-checks.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="file of key=value lines; command-line flags win")
    parser.add_argument("--domain", choices=[k.value for k in Kind])
    parser.add_argument("--lambda", dest="lam", type=float, help="cardioid parameter, 0..1/2")
    parser.add_argument("--r0", type=float, help="annulus inner radius, 0 < r0 < 1")
    parser.add_argument("--a", type=float, help="rectangle width")
    parser.add_argument("--b", type=float, help="rectangle height")
    parser.add_argument("--combo", choices=[c.value for c in Combo], default="even-odd-dirichlet")
    parser.add_argument("--bc", choices=["dirichlet", "neumann", "both"], default="dirichlet")
    parser.add_argument("--class", dest="klass", choices=["even", "odd", "none"], default="even")
    parser.add_argument("--count", type=int, help="eigenvalues or zeros per class")
    parser.add_argument("--basis", type=int, help="Rayleigh-Ritz basis size per class")
    parser.add_argument("--l-max", dest="l_max", type=int, default=10)
    parser.add_argument("--tol", type=float, default=1e-7, help="tolerance of the zeta check")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--plot", help="image file for the convergence plot")
    parser.add_argument("--format", choices=["csv", "table"], default="table")
    return parser


def read_config(path: str) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            config = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        aliases = {"lambda": "lam", "class": "klass"}
        actions = {a.dest: a for a in parser._actions}
        defaults = {}
        for key, raw in config.items():
            dest = aliases.get(key, key)
            if dest not in actions or dest in ("command", "config"):
                raise UsageError(f"unknown config key {key!r}")
            action = actions[dest]
            value = action.type(raw) if action.type else raw
            if action.choices and value not in action.choices:
                raise UsageError(f"config value {raw!r} not allowed for {key}")
            defaults[dest] = value
        parser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return USAGE_ERROR if exc.code else 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        table = COMMANDS[args.command](args)
    except (UsageError, ParameterOutOfRange, UnsupportedCombination) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (SumRuleError, ArithmeticError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return FAILURE
    try:
        _emit(table, args)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return FAILURE
    return 0 if table.ok else FAILURE


if __name__ == "__main__":
    sys.exit(main())
