"""Command-line entry point.

Exit codes: 0 success, 1 a check found a violation, 2 usage or input error,
3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from . import analytic, bounds, extremal, formats, graph, optimize, oracle
from .errors import CliqueDensityError, DivergenceError, DomainError, LimitError

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


class _Out:
    """Printer with a fixed number of significant digits."""

    def __init__(self, stream, digits: int):
        self.stream = stream
        self.digits = digits

    def num(self, v) -> str:
        if isinstance(v, Fraction):
            return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return format(float(v), f".{self.digits}g")

    def line(self, *parts) -> None:
        print(" ".join(p if isinstance(p, str) else self.num(p) for p in parts), file=self.stream)


def _real(text: str):
    """Decimal or p/q; rationals stay exact."""
    try:
        return Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_csv(path: Optional[str], header: Sequence[str], rows, out: _Out) -> None:
    if not path:
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else out.num(c) for c in row])


# ---------------------------------------------------------------------------
# subcommands

def cmd_bound(args, out: _Out) -> int:
    gamma = Fraction(args.gamma) if args.exact else args.gamma
    value = bounds.clique_bound(args.r, gamma)
    d = bounds.decompose_density(gamma)
    out.line("value", value)
    out.line("s", d.s)
    out.line("alpha", d.alpha)
    if d.t_alias is not None:
        out.line("alias", d.t_alias[0], d.t_alias[1])
    if args.r >= 3:
        lo, hi = bounds.one_sided_slopes(args.r, float(gamma))
        out.line("slope_left", lo)
        out.line("slope_right", hi)
    return EXIT_OK


def cmd_bound_inverse(args, out: _Out) -> int:
    out.line("gamma", bounds.clique_bound_inverse(args.r, float(args.y), tol=args.tol))
    return EXIT_OK


def cmd_ls_bound(args, out: _Out) -> int:
    gamma = Fraction(args.gamma) if args.exact else args.gamma
    ls = bounds.ls_bound(args.r, gamma)
    out.line("value", ls)
    out.line("clique_bound", bounds.clique_bound(args.r, gamma))
    return EXIT_OK


def _load_weighted(path: str) -> graph.WeightedGraph:
    return formats.parse_weighted(_read(path))


def cmd_eval(args, out: _Out) -> int:
    g = _load_weighted(args.input)
    top = args.max_rho or g.n
    prof = graph.clique_profile(g, top)
    rows = [(rho, prof[rho - 1]) for rho in range(1, top + 1)]
    out.line("n", g.n)
    for rho, val in rows:
        out.line("K", rho, val)
    _write_csv(args.csv, ["rho", "density"], rows, out)
    return EXIT_OK


def cmd_deficit(args, out: _Out) -> int:
    g = _load_weighted(args.input)
    gamma = graph.edge_density(g)
    val = graph.deficit(g, args.r)
    out.line("gamma", gamma)
    out.line("clique_density", graph.clique_density(g, args.r))
    out.line("bound", bounds.clique_bound(args.r, gamma))
    out.line("deficit", val)
    if val < -args.tol:
        out.line("VIOLATION deficit below", -args.tol)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_check_identities(args, out: _Out) -> int:
    ok = True
    if args.input:
        g = _load_weighted(args.input)
        ident = graph.second_step_identity(g)
        tol_id = args.tol * g.n ** 3
        out.line("second_step lhs", ident.lhs, "rhs", ident.rhs, "residual", ident.residual,
                 "pass" if ident.residual <= tol_id else "FAIL")
        ok &= ident.residual <= tol_id
        chain = graph.cauchy_chain_check(g, args.r, tol=args.tol)
        out.line("cauchy_chain lhs", chain.lhs, "rhs", chain.rhs, "pass" if chain.ok else "FAIL")
        out.line("weight_sum_residual", chain.weight_sum_residual)
        out.line("eta_sum_residual", chain.eta_sum_residual)
        ok &= chain.ok and max(chain.weight_sum_residual, chain.eta_sum_residual) <= args.tol
        return EXIT_OK if ok else EXIT_VIOLATION
    rep = graph.check_local_inequalities(args.r, args.mode, samples=args.samples, seed=args.seed)
    for res in rep.results:
        out.line(res.claim, res.scope.replace(" ", ","), "pass" if res.passed else "FAIL",
                 "points", res.points, "worst_slack", res.worst_slack)
        if res.witness:
            out.line("witness", res.witness)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            rep.to_csv(fh, digits=out.digits)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_verify_analytic(args, out: _Out) -> int:
    p = analytic.make_params(args.r, args.s, args.m)
    rep = analytic.verify_analytic_claims(p, grid_points=args.grid)
    text = rep.to_csv(digits=out.digits)
    out.stream.write(text)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_extremal(args, out: _Out) -> int:
    g = extremal.extremal_weighted(args.gamma)
    if args.blowup is not None:
        text = formats.format_simple(extremal.blowup(g, args.blowup))
    else:
        text = formats.format_weighted(g, digits=17)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.stream.write(text)
    return EXIT_OK


def cmd_count(args, out: _Out) -> int:
    sg = formats.parse_simple(_read(args.input))
    out.line("count", extremal.count_cliques(sg, args.r))
    return EXIT_OK


def cmd_oracle(args, out: _Out) -> int:
    res = oracle.min_cliques(args.n, args.m, args.r, method=args.method, workers=args.workers)
    n, r = args.n, args.r
    bound = float(n) if r == 1 else float(bounds.clique_bound(r, args.m / n ** 2)) * n ** r
    out.line("minimum", res.minimum)
    out.line("bound", bound)
    out.line("slack", res.minimum - bound)
    out.stream.write(formats.format_simple(res.witness))
    return EXIT_OK if res.minimum - bound >= -args.tol else EXIT_VIOLATION


def cmd_oracle_sweep(args, out: _Out) -> int:
    rows = oracle.sweep(args.n, args.r, workers=args.workers, method=args.method)
    table = [(row.n, row.m, row.r, row.minimum, row.bound, row.slack) for row in rows]
    header = ["n", "m", "r", "minimum", "bound", "slack"]
    out.line(",".join(header))
    for row in table:
        out.line(",".join(out.num(c) for c in row))
    _write_csv(args.csv, header, table, out)
    bad = [row for row in rows if row.slack < -args.tol]
    for row in bad:
        out.line("VIOLATION m", row.m, "slack", row.slack)
    return EXIT_VIOLATION if bad else EXIT_OK


def _report_block(out: _Out, rep: Optional[optimize.StationarityReport]) -> None:
    if rep is None:
        out.line("report unavailable")
        return
    for ln in rep.lines(out.digits):
        out.line(ln)


def cmd_optimize(args, out: _Out) -> int:
    if args.init:
        init = _load_weighted(args.init)
    elif args.gamma is not None:
        rng = np.random.default_rng(args.seed)
        init = extremal.extremal_weighted(args.gamma)
        if init.n > args.n:
            raise DomainError(f"the extremal graph at gamma={args.gamma} has order {init.n} > n={args.n}")
        init = optimize.split_to_order(optimize.perturb(init, rng, args.perturb), args.n)
    else:
        init = args.seed
    res = optimize.minimize_deficit(args.n, args.r, init, steps=args.steps, step_size=args.step_size,
                                    gtol=args.gtol)
    _write_csv(args.csv, ["step", "gamma", "deficit"], res.trace, out)
    out.line("steps", res.steps)
    out.line("converged", str(res.converged).lower())
    out.line("deficit", res.deficit)
    out.line("min_deficit_seen", res.min_deficit_seen)
    if res.note:
        out.line("note", res.note)
    _report_block(out, res.report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(formats.format_weighted(res.graph))
    return EXIT_OK if res.min_deficit_seen >= -args.tol else EXIT_VIOLATION


def cmd_stationarity(args, out: _Out) -> int:
    g = _load_weighted(args.input)
    rep = optimize.stationarity_report(g, args.r)
    _report_block(out, rep)
    rows = [(i + 1, float(g.x[i]), rep.vertex_residuals[i], rep.eta[i]) for i in range(g.n)]
    _write_csv(args.csv, ["vertex", "weight", "residual", "eta"], rows, out)
    if args.chain:
        ch = optimize.conditional_chain_check(g, args.r, rep, stationary_tol=args.stationary_tol)
        out.line("chain lhs", ch.lhs, "rhs", ch.rhs, "pass" if ch.ok else "FAIL")
        if ch.skipped:
            out.line("vertex bounds skipped:", ch.skipped)
        for vb in ch.vertex_bounds:
            out.line("vertex_bound", vb.vertex + 1, "lhs", vb.lhs, "rhs", vb.rhs, "pass" if vb.ok else "FAIL")
        return EXIT_OK if ch.all_ok else EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--digits", type=int, default=15, help="significant digits printed")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="cliquedensity", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("bound", cmd_bound, "evaluate F_r(gamma)")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--gamma", type=_real, required=True)
    sp.add_argument("--exact", action="store_true", help="rational arithmetic")

    sp = add("bound-inverse", cmd_bound_inverse, "edge density with F_r(gamma) = y")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--y", type=_real, required=True)
    sp.add_argument("--tol", type=float, default=1e-14)

    sp = add("ls-bound", cmd_ls_bound, "product lower bound")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--gamma", type=_real, required=True)
    sp.add_argument("--exact", action="store_true")

    sp = add("eval", cmd_eval, "clique densities of a weighted graph")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--max-rho", type=int, default=None)
    sp.add_argument("--csv")

    sp = add("deficit", cmd_deficit, "G(K_r) - F_r(G(K_2))")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("check-identities", cmd_check_identities, "local inequalities or identities on a graph")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--mode", choices=["exhaustive01", "random_fractional"], default="exhaustive01")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--in", dest="input", default=None, help="check the identities on this graph instead")
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--csv")

    sp = add("verify-analytic", cmd_verify_analytic, "grid checks of the one-variable inequalities")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--m", type=float, required=True)
    sp.add_argument("--grid", type=int, default=101)
    sp.add_argument("--csv")

    sp = add("extremal", cmd_extremal, "extremal weighted graph or its blow-up")
    sp.add_argument("--gamma", type=_real, required=True)
    sp.add_argument("--blowup", type=int, default=None)
    sp.add_argument("--out")

    sp = add("count", cmd_count, "count r-cliques of a simple graph")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--r", type=int, required=True)

    sp = add("oracle", cmd_oracle, "exact minimum r-clique count for (n, m)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--method", choices=["pruned", "full"], default="pruned")
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("oracle-sweep", cmd_oracle_sweep, "exact minima for every m, compared with n^r F_r")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--method", choices=["pruned", "full"], default="full")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--csv")

    sp = add("optimize", cmd_optimize, "projected-gradient descent on the deficit")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--init")
    grp.add_argument("--gamma", type=float)
    sp.add_argument("--perturb", type=float, default=0.01)
    sp.add_argument("--steps", type=int, default=50_000)
    sp.add_argument("--step-size", type=float, default=0.1)
    sp.add_argument("--gtol", type=float, default=1e-12)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--csv", help="trace file (step, gamma, deficit)")
    sp.add_argument("--out", help="write the final graph here")

    sp = add("stationarity", cmd_stationarity, "first-order conditions at a weighted graph")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--chain", action="store_true", help="also run the stationary-point inequalities")
    sp.add_argument("--stationary-tol", type=float, default=1e-6)
    sp.add_argument("--csv")
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except _Usage as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(stderr)
        return EXIT_USAGE
    out = _Out(stdout, args.digits)
    try:
        return args.func(args, out)
    except LimitError as exc:
        print(f"limit: {exc}", file=stderr)
        return EXIT_LIMIT
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=stderr)
        return EXIT_USAGE
    except (CliqueDensityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
