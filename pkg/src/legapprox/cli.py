"""Command-line entry point: ``legapprox <subcommand> ...``."""

import argparse
import csv
import math
import re
import sys
import warnings

import numpy as np

from . import harness
from .bestapprox import equioscillation_check, remez_best
from .bounds import BoundReport, cheb_analytic_bound, ellipse_max_abs, leg_projection_bound, lebesgue_constant
from .errors import ConvergenceError, DomainError, OutputError
from .peano import peano_properties_report
from .projections import (
    Analytic,
    FunctionSpec,
    PiecewiseAnalytic,
    assessment_grid,
    chebyshev_coeffs,
    legendre_coeffs,
    locate_max_error,
    max_error,
)

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- expressions ------------------------------------------------------------------

_FUNCTIONS = {
    "abs": np.abs,
    "exp": np.exp,
    "ln": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "arccos": lambda v: np.arccos(np.clip(v, -1.0, 1.0)),
    "pospart": lambda v: np.maximum(v, 0.0),
}
NONSMOOTH = frozenset({"abs", "arccos", "pospart"})
_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", float(num)))
        elif name is not None:
            tokens.append(("name", name))
        elif op.strip():
            if op not in "+-*/^()":
                raise DomainError(f"unexpected character {op!r} in expression")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    """expr := term (('+'|'-') term)*;  term := unary (('*'|'/') unary)*;
    unary := ('+'|'-') unary | power;  power := atom ['^' unary];
    atom := number | x | pi | name '(' expr ')' | '(' expr ')'.

    Produces a closure over numpy arrays; also records which functions were used and
    whether any power had a non-integer exponent.
    """

    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0
        self.used = set()
        self.fractional_power = False

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise DomainError(f"expected {want}, found {tok[1] if tok[0] else 'end of input'}")
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek()[0] is not None:
            raise DomainError(f"unexpected {self.peek()[1]!r} after expression")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            node = (lambda a, b: lambda x: a(x) + b(x))(node, rhs) if op == "+" else \
                   (lambda a, b: lambda x: a(x) - b(x))(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            node = (lambda a, b: lambda x: a(x) * b(x))(node, rhs) if op == "*" else \
                   (lambda a, b: lambda x: a(x) / b(x))(node, rhs)
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            return lambda x: -inner(x)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() != ("op", "^"):
            return base
        self.take()
        exponent_start = self.i
        exponent = self.unary()
        const = self.tokens[exponent_start:self.i]
        if not (len(const) == 1 and const[0][0] == "num" and float(const[0][1]).is_integer()):
            self.fractional_power = True
        return lambda x: base(x) ** exponent(x)

    def atom(self):
        kind, value = self.take()
        if kind == "num":
            return lambda x: np.full_like(x, value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.take("op", ")")
            return node
        if kind == "name":
            if value == "x":
                return lambda x: x
            if value == "pi":
                return lambda x: np.full_like(x, math.pi)
            if value in _FUNCTIONS:
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                self.used.add(value)
                fn = _FUNCTIONS[value]
                return lambda x: fn(arg(x))
            raise DomainError(f"unknown name {value!r}")
        raise DomainError(f"unexpected {value!r}")


def parse_expression(text, breakpoints=()):
    """FunctionSpec for an expression in x such as ``exp(x^5)`` or ``pospart(x-0.5)^3``.

    Without breakpoints and without abs, pospart, arccos or non-integer powers the
    function is treated as analytic.
    """
    p = _Parser(text)
    node = p.parse()

    def evaluate(x):
        x = np.asarray(x)
        with np.errstate(all="ignore"):
            return node(x.astype(complex) if np.iscomplexobj(x) else x.astype(float))

    smooth = not breakpoints and not (p.used & NONSMOOTH) and not p.fractional_power
    smoothness = Analytic(math.nan) if smooth else PiecewiseAnalytic()
    return FunctionSpec(evaluate, tuple(sorted(breakpoints)), smoothness, text)


def resolve_function(name, breakpoints=None):
    """Catalog entry label or key, else an expression."""
    try:
        spec = harness.get_entry(name).spec
    except DomainError:
        return parse_expression(name, breakpoints or ())
    if breakpoints:
        spec = FunctionSpec(spec.evaluator, tuple(sorted(breakpoints)), spec.smoothness, spec.label)
    return spec


# --- subcommands ------------------------------------------------------------------


def _coeffs(args, out):
    f = resolve_function(args.function, args.breakpoints)
    compute = legendre_coeffs if args.basis == "legendre" else chebyshev_coeffs
    s = compute(f, args.degree)
    rows = [(k, "%.17g" % c) for k, c in enumerate(s.coeffs)]
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(("k", "coeff"))
                w.writerows(rows)
        except OSError as exc:
            raise OutputError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
        print(f"wrote {len(rows)} coefficients to {args.out}", file=out)
    else:
        w = csv.writer(out)
        w.writerow(("k", "coeff"))
        w.writerows(rows)


def _project(args, out):
    f = resolve_function(args.function, args.breakpoints)
    grid = assessment_grid(f.breakpoints, base=args.grid)
    compute = legendre_coeffs if args.basis == "legendre" else chebyshev_coeffs
    err, where = locate_max_error(f, compute(f, args.degree), grid)
    print(f"function: {f.label}", file=out)
    print(f"basis: {args.basis}  degree: {args.degree}", file=out)
    print(f"max_error: {err:.17g}", file=out)
    print(f"argmax: {where:.17g}", file=out)


def _remez(args, out):
    f = resolve_function(args.function, args.breakpoints)
    r = remez_best(f, args.degree)
    cert = equioscillation_check(f, r)
    print(f"function: {f.label}", file=out)
    print(f"degree: {args.degree}", file=out)
    print(f"levelled_error: {r.levelled_error:.17g}", file=out)
    print(f"max_error: {r.max_error:.17g}", file=out)
    print(f"status: {r.status}  iterations: {r.iterations}", file=out)
    print(f"equioscillation: {'pass' if cert.passed else 'fail'} "
          f"({cert.alternation}/{cert.required} alternations, spread {cert.level_spread:.3g})", file=out)
    print("reference: " + " ".join("%.17g" % x for x in r.reference), file=out)


def _bounds(args, out):
    f = resolve_function(args.function, args.breakpoints)
    n = args.degree
    grid = assessment_grid(f.breakpoints)
    err_p = max_error(f, legendre_coeffs(f, n), grid)
    err_t = max_error(f, chebyshev_coeffs(f, n), grid)
    reports = []
    if args.rho is not None:
        if not isinstance(f.smoothness, Analytic):
            raise DomainError(f"{f.label} is not analytic; --rho bounds do not apply")
        rho_max = f.smoothness.rho_est
        if not math.isnan(rho_max) and args.rho >= rho_max:
            raise DomainError(f"{f.label} is analytic only inside rho < {rho_max:.6g}")
        m = ellipse_max_abs(f, args.rho)
        if not math.isfinite(m):
            raise DomainError(f"{f.label} is not finite on the ellipse rho = {args.rho}")
        params = {"rho": args.rho, "M": m, "n": n}
        reports.append(BoundReport("legendre_analytic", leg_projection_bound(args.rho, m, n), params).against(err_p))
        reports.append(BoundReport("chebyshev_analytic", cheb_analytic_bound(m, args.rho, n), params).against(err_t))
    if n <= harness.MAX_SWEEP_DEGREE:
        best = remez_best(f, n, grid)
        lam = lebesgue_constant(n)
        tol = 1e-9 + 1e-6 * best.max_error
        params = {"lebesgue": lam, "err_B": best.max_error, "n": n}
        reports.append(BoundReport("lebesgue_best", (1.0 + lam) * best.max_error, params).against(err_p, tol))
    print(f"function: {f.label}  degree: {n}", file=out)
    print(f"measured err_P: {err_p:.6e}  err_T: {err_t:.6e}", file=out)
    for r in reports:
        verdict = "satisfied" if r.satisfied else "VIOLATED"
        print(f"{r.name}: bound {r.value:.6e}  measured {r.measured:.6e}  {verdict}", file=out)
    return EXIT_OK


def _sweep(args, out):
    f = resolve_function(args.function, args.breakpoints)
    try:
        entry = harness.get_entry(args.function)
    except DomainError:
        entry = f
    report = harness.sweep(entry, args.nmin, args.nmax, args.stride)
    harness.emit(report, args.format, args.out)
    print(f"wrote {args.out}", file=out)
    for name in ("P", "T", "B"):
        slope, resid = getattr(report, f"slope_{name}")
        print(f"slope_{name}: {slope:.4f} (rms residual {resid:.3g})", file=out)
    if report.flagged:
        print(f"Remez failed at n = {report.flagged}", file=out)
        return EXIT_CONVERGENCE
    return EXIT_OK


def _figure(args, out):
    for path in harness.figure(args.id, args.out):
        print(path, file=out)


def _peano(args, out):
    r = peano_properties_report(args.m, args.degree)
    print(f"m: {r.m}  n: {r.n}", file=out)
    print(f"kernel at t = +-1 (max): {r.endpoint_max:.3e}", file=out)
    print(f"orthogonality residual (max): {r.orthogonality_max:.3e}", file=out)
    print(f"dK_m/dt + K_(m-1) residual (max): {r.derivative_residual_max:.3e}", file=out)
    print(f"sup|K_m| decay slope over n in [{r.sweep_degrees[0]}, {r.sweep_degrees[-1]}]: "
          f"{r.decay_slope:.4f} (expected {r.claimed_slope:g})", file=out)


# --- argument parsing -------------------------------------------------------------


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _breakpoints(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad breakpoint list {text!r}") from exc


def build_parser():
    p = _ArgParser(prog="legapprox", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def fn(sp, expr_ok=True):
        sp.add_argument("--function", required=True,
                        help="catalog key or label" + (", or an expression in x" if expr_ok else ""))
        sp.add_argument("--breakpoints", type=_breakpoints, default=None,
                        help="comma-separated interior points where f is not smooth")

    sp = sub.add_parser("coeffs", help="projection coefficients")
    fn(sp)
    sp.add_argument("--basis", choices=("legendre", "chebyshev"), default="legendre")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(run=_coeffs)

    sp = sub.add_parser("project", help="max error of a projection and where it occurs")
    fn(sp)
    sp.add_argument("--basis", choices=("legendre", "chebyshev"), default="legendre")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--grid", type=int, default=8192, help="base number of assessment points")
    sp.set_defaults(run=_project)

    sp = sub.add_parser("remez", help="minimax approximation")
    fn(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp.set_defaults(run=_remez)

    sp = sub.add_parser("bounds", help="error bounds against measured errors")
    fn(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--rho", type=float, default=None, help="Bernstein ellipse parameter (analytic f)")
    sp.set_defaults(run=_bounds)

    sp = sub.add_parser("sweep", help="errors, ratios and rates over a degree range")
    fn(sp)
    sp.add_argument("--nmin", type=int, required=True)
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    sp.add_argument("--out", required=True)
    sp.set_defaults(run=_sweep)

    sp = sub.add_parser("figure", help="data files for one benchmark figure")
    sp.add_argument("--id", type=int, choices=(1, 2, 3, 4, 5), required=True)
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(run=_figure)

    sp = sub.add_parser("peano", help="numerical checks of the Peano kernel")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.set_defaults(run=_peano)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            code = args.run(args, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"did not converge: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
