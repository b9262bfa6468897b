"""Command-line front end.

Commands: ``weights``, ``spectrum``, ``bound``, ``smooth``, ``design``.
Every command is deterministic; floats are written with 12 significant
digits except bound summaries, which use 4 decimals.

Exit status is 0 on success, 1 on usage or configuration errors and 2 on
numerical failures; errors print a single line ``error: <kind>: <message>``.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import algebra, design, filters, smoother, spectral
from .filters import KernelSpec, LocalPolySpec, SingularSystemError
from .smoother import BoundaryPolicy, TimeSeries

__all__ = ["main", "build_parser", "read_series", "ConfigError"]


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".12g")


@dataclass(frozen=True)
class Cutoff:
    mode: str
    value: float | None = None

    @classmethod
    def parse(cls, text: str) -> "Cutoff":
        if text == "auto":
            return cls("auto")
        key, sep, val = text.partition("=")
        if not sep or key not in ("k", "xi", "period"):
            raise ConfigError(f"cutoff must be auto, k=<int>, xi=<real> or period=<real>, got {text!r}")
        try:
            num = int(val) if key == "k" else float(val)
        except ValueError:
            raise ConfigError(f"bad cutoff value {val!r} for {key}") from None
        if key != "k" and not math.isfinite(num):
            raise ConfigError(f"cutoff {key} must be finite")
        return cls(key, num)

    def design(self, xi) -> design.CutoffDesign:
        n = len(xi)
        if self.mode == "auto":
            return design.select_cutoff(xi)
        if self.mode == "k":
            if not 1 <= self.value <= n:
                raise ConfigError(f"cutoff k={self.value} outside 1..{n}")
            return design.design_from_k(xi, int(self.value))
        if self.mode == "xi":
            return design.design_from_threshold(xi, self.value)
        if self.value <= 2:
            raise ConfigError(f"cutoff period must exceed 2, got {self.value}")
        return design.design_from_k(xi, design.cutoff_from_period(n, self.value))


def _add_common(p, scope_default):
    p.add_argument("--filter", choices=("henderson", "uniform"), default="henderson")
    p.add_argument("--h", type=int, default=6)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--n", type=int, default=51)
    p.add_argument("--boundary", choices=("lpr", "lc", "ql", "cq", "reflecting"), default="lpr")
    p.add_argument("--noise-ratio", type=float, default=filters.MUSGRAVE_NOISE_RATIO)
    p.add_argument("--algebra", choices=("tau11", "circulant"), default="tau11")
    p.add_argument("--cutoff", default=None)
    p.add_argument("--replace-scope", choices=("realtime", "all"), default=scope_default)
    p.add_argument("--fill", choices=("reflecting", "circulant"), default="reflecting",
                   help="rows outside the replaced real-time rows")
    p.add_argument("--input", default=None)
    p.add_argument("--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trendspectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    for name, help_ in [
        ("weights", "symmetric and boundary filter weights"),
        ("spectrum", "analytic eigenvalues and gain at the algebra's nodes"),
        ("bound", "eigenvalue perturbation bound delta"),
        ("smooth", "trend of a series read from --input"),
    ]:
        _add_common(sub.add_parser(name, help=help_), "all")
    p = sub.add_parser("design", help="eigenvalue-cutoff smoother and diagnostics")
    _add_common(p, "realtime")
    p.add_argument("--report", default=None, help="per-time-point variance CSV")
    return parser


def _config(args):
    if args.h < 0:
        raise ConfigError(f"h must be non-negative, got {args.h}")
    if args.p < 0:
        raise ConfigError(f"p must be non-negative, got {args.p}")
    if args.p > 2 * args.h:
        raise ConfigError(f"degree p={args.p} violates p <= 2h = {2 * args.h}")
    if args.noise_ratio < 0 or not math.isfinite(args.noise_ratio):
        raise ConfigError("noise-ratio must be a finite non-negative number")
    lp = LocalPolySpec(args.h, args.p, KernelSpec(args.filter, args.h))
    sym = filters.symmetric_filter(lp)
    scope = "realtime_row_only" if args.replace_scope == "realtime" else "all_boundary_rows"
    policy = BoundaryPolicy(args.boundary, noise_ratio=args.noise_ratio, lpr=lp,
                            replace_scope=scope, fill=args.fill)
    cutoff = Cutoff.parse(args.cutoff) if args.cutoff is not None else None
    return lp, sym, policy, cutoff


def _check_n(n, h):
    if n <= 2 * h:
        raise ConfigError(f"dimension n={n} must exceed 2h={2 * h}")


@contextlib.contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def read_series(path) -> TimeSeries:
    """Read a ``t,value`` CSV; ``t`` is an opaque label."""
    labels, values = [], []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or [c.strip() for c in header[:2]] != ["t", "value"]:
            raise ConfigError(f"{path}:1: expected header 't,value'")
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ConfigError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                v = float(row[1])
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: value {row[1]!r} is not a number") from None
            if not math.isfinite(v):
                raise ConfigError(f"{path}:{lineno}: value {row[1]!r} is not finite")
            labels.append(row[0].strip())
            values.append(v)
    return TimeSeries(tuple(labels), np.array(values))


def cmd_weights(args):
    _, sym, policy, _ = _config(args)
    h = sym.h
    lags = list(range(-h, h + 1))
    with _sink(args.output) as fh:
        out = _writer(fh)
        out.writerow(["filter", "q"] + [f"lag{j}" for j in lags])
        out.writerow(["symmetric", h] + [fmt(x) for x in sym.weights])
        if h > 0:
            bf = smoother.boundary_filters(sym, policy)
            for q, f in enumerate(bf):
                if f is None:
                    continue
                cells = [fmt(x) for x in f.weights] + [""] * (h - q)
                out.writerow([f.family.lower(), q] + cells)
            out.writerow([args.boundary, h] + [fmt(x) for x in sym.weights])
    return 0


def cmd_spectrum(args):
    _, sym, _, _ = _config(args)
    _check_n(args.n, sym.h)
    if args.algebra == "tau11":
        nodes = algebra.tau_nodes(args.n)
        vals = algebra.tau_eigenvalues(sym, args.n)
    else:
        nodes = algebra.circulant_nodes(args.n)
        vals = algebra.circulant_eigenvalues(sym, args.n)
    gain = np.abs(algebra.transfer_function(sym, nodes))
    with _sink(args.output) as fh:
        out = _writer(fh)
        out.writerow(["index", "node", "eigenvalue", "gain_at_node"])
        for i, (nu, v, g) in enumerate(zip(nodes, vals, gain), start=1):
            out.writerow([i, fmt(nu), fmt(v), fmt(g)])
    return 0


def cmd_bound(args):
    _, sym, policy, _ = _config(args)
    _check_n(args.n, sym.h)
    S = smoother.build_smoother(sym, policy, args.n)
    rep = spectral.perturbation_report(S, args.algebra)
    print(f"algebra={args.algebra} boundary={args.boundary} scope={args.replace_scope} "
          f"n={args.n} delta={rep.delta:.4f} containment={str(rep.containment).lower()} "
          f"violations={rep.violations} max_imag={rep.max_imag:.4f}")
    if args.output is not None:
        order = np.lexsort((rep.smoother_values.imag, -rep.smoother_values.real))
        with _sink(args.output) as fh:
            out = _writer(fh)
            out.writerow(["lambda_real", "lambda_imag", "nearest_index", "nearest_reference",
                          "distance", "contained"])
            for k in order:
                lam = rep.smoother_values[k]
                j = rep.nearest_index[k]
                d = rep.match_distances[k]
                out.writerow([fmt(lam.real), fmt(lam.imag), j + 1, fmt(rep.reference_values[j]),
                              fmt(d), int(d <= rep.delta + 1e-9)])
    return 0


def cmd_smooth(args):
    _, sym, policy, cutoff = _config(args)
    if args.input is None:
        raise ConfigError("smooth needs --input")
    y = read_series(args.input)
    n = len(y)
    if n <= 2 * sym.h:
        raise ConfigError(f"series length {n} must exceed 2h={2 * sym.h}")
    S = smoother.build_smoother(sym, policy, n)
    trend = smoother.apply(S, y).values
    header = ["t", "value", "trend"]
    cols = [trend]
    if cutoff is not None:
        H = algebra.tau_operator(sym, n)
        dsg = cutoff.design(H.eigenvalues())
        Sk = design.designed_smoother(H, dsg, policy)
        cols.append(Sk.final @ y.values)
        header.append("trend_k")
    with _sink(args.output) as fh:
        out = _writer(fh)
        out.writerow(header)
        for i, t in enumerate(y.timestamps):
            out.writerow([t, fmt(y.values[i])] + [fmt(c[i]) for c in cols])
    return 0


def cmd_design(args):
    _, sym, policy, cutoff = _config(args)
    _check_n(args.n, sym.h)
    n = args.n
    H = algebra.tau_operator(sym, n)
    xi = H.eigenvalues()
    auto = design.select_cutoff(xi)
    dsg = auto if cutoff is None else cutoff.design(xi)
    Sk = design.designed_smoother(H, dsg, policy)
    S = smoother.build_smoother(sym, policy, n)
    var = design.variance_diagnostics(S, Sk)
    bias = design.bias_discrepancy(xi, dsg)
    mode = "auto" if cutoff is None else args.cutoff
    print(f"n={n} cutoff={mode} k_auto={auto.k} k={dsg.k} xi_k={fmt(dsg.threshold)} "
          f"bias_discrepancy={fmt(bias)}")
    if args.output is not None:
        with _sink(args.output) as fh:
            out = _writer(fh)
            out.writerow(["t"] + [f"c{j}" for j in range(1, n + 1)])
            for t in range(n):
                out.writerow([t + 1] + [fmt(x) for x in Sk.final[t]])
    if args.report is not None:
        with _sink(args.report) as fh:
            out = _writer(fh)
            out.writerow(["t", "variance_original", "variance_designed", "interior_reduction"])
            for t in range(n):
                out.writerow([t + 1, fmt(var.original[t]), fmt(var.designed[t]),
                              fmt(var.interior_reduction[t])])
    return 0


_COMMANDS = {
    "weights": cmd_weights,
    "spectrum": cmd_spectrum,
    "bound": cmd_bound,
    "smooth": cmd_smooth,
    "design": cmd_design,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError, OSError) as exc:
        if isinstance(exc, SingularSystemError):
            print(f"error: numerical: {exc}", file=sys.stderr)
            return 2
        print(f"error: config: {exc}", file=sys.stderr)
        return 1
    except (spectral.ConvergenceError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
