"""Command-line interface.

Every subcommand writes CSV (comma separated, header row, ``\\n`` line
endings, floats with 17 significant digits) to standard output or to
``--out``. Diagnostics go to standard error; errors exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from katugampola.approx import approx_left, approx_right
from katugampola.core import (
    Grid,
    OperatorParams,
    SampledFunction,
    make_params,
    make_uniform_grid,
    sample,
)
from katugampola.errors import DomainError, KatugampolaError
from katugampola.exact import (
    PowerFunction,
    exact_left_power,
    exact_right_power,
    exact_testfn_integral,
)
from katugampola.oracle import oracle_left, oracle_right
from katugampola.solver import (
    IntegralEquationProblem,
    paper_problem,
    solve_integral_equation,
)

# {{{ formatting


def fmt(value: float | None) -> str:
    """Render a float losslessly; ``None`` becomes an empty field."""
    if value is None:
        return ""
    value = float(value)
    if value == 0:
        return "0"
    return f"{value:.17g}"


def write_rows(stream: io.TextIOBase, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if not isinstance(v, str) else v for v in row])


# }}}

# {{{ function specs


@dataclass(frozen=True)
class FunctionSpec:
    """A built-in or sampled integrand chosen on the command line."""

    name: str
    func: Callable[[np.ndarray], np.ndarray] | None
    closed_form: Callable[[OperatorParams, float], float] | None = None
    sampled: SampledFunction | None = None

    def on_grid(self, grid: Grid) -> SampledFunction:
        if self.sampled is not None:
            return self.sampled
        assert self.func is not None
        return sample(self.func, grid)

    @property
    def integrand(self) -> Callable[[np.ndarray], np.ndarray] | SampledFunction:
        if self.sampled is not None:
            return self.sampled
        assert self.func is not None
        return self.func


def read_sampled(path: str, params: OperatorParams) -> SampledFunction:
    """Read a two-column ``t,x`` CSV file (with header) as a sampled function.

    The ``t`` column must be a uniform grid from ``a`` to ``b``.
    """
    try:
        with open(path, newline="") as infile:
            rows = list(csv.reader(infile))
    except OSError as exc:
        raise DomainError(f"cannot read {path!r}: {exc.strerror}", "fn") from exc

    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if len(rows) < 3:
        raise DomainError(f"{path!r}: need a header and at least 2 data rows", "fn")

    try:
        data = np.array([[float(cell) for cell in row] for row in rows[1:]])
    except ValueError as exc:
        raise DomainError(f"{path!r}: malformed number ({exc})", "fn") from exc
    if data.ndim != 2 or data.shape[1] != 2:
        raise DomainError(f"{path!r}: expected exactly two columns t,x", "fn")

    t, values = data[:, 0], data[:, 1]
    if not (math.isclose(t[0], params.a, abs_tol=1e-12) and math.isclose(t[-1], params.b, abs_tol=1e-12)):
        raise DomainError(
            f"{path!r}: t column spans [{t[0]}, {t[-1]}], expected [{params.a}, {params.b}]",
            "fn",
        )

    grid = make_uniform_grid(params.a, params.b, t.size)
    if np.max(np.abs(grid.points - t)) > 1e-9 * max(1.0, params.b):
        raise DomainError(f"{path!r}: t column is not a uniform grid", "fn")

    return SampledFunction(grid, values)


def parse_function(spec: str, params: OperatorParams, side: str) -> FunctionSpec:
    """Resolve ``power:<v>``, ``testfn``, ``cos``, ``zero`` or ``csv:<path>``."""
    name, _, arg = spec.partition(":")
    rho = params.rho

    if name == "power":
        try:
            v = float(arg)
        except ValueError as exc:
            raise DomainError(f"invalid exponent in function spec {spec!r}", "fn") from exc
        power = PowerFunction(v, side)  # type: ignore[arg-type]
        a, b = params.a, params.b

        def func(t: np.ndarray) -> np.ndarray:
            with np.errstate(divide="ignore"):
                if side == "left":
                    return np.maximum(t**rho - a**rho, 0.0) ** v
                return np.maximum(b**rho - t**rho, 0.0) ** v

        return FunctionSpec(spec, func, power.integral)

    if arg:
        if name == "csv":
            return FunctionSpec(spec, None, None, read_sampled(arg, params))
        raise DomainError(f"unknown function spec {spec!r}", "fn")

    if name == "testfn":
        closed = exact_testfn_integral if side == "left" and params.a == 0 else None
        return FunctionSpec(spec, lambda t: np.asarray(t) ** (2 * rho), closed)
    if name == "cos":
        return FunctionSpec(spec, np.cos)
    if name == "zero":
        return FunctionSpec(spec, np.zeros_like, lambda p, t: 0.0)

    raise DomainError(f"unknown function spec {spec!r}", "fn")


# }}}

# {{{ commands


@dataclass
class Comparison:
    t: np.ndarray
    reference: list[float | None]
    approx: np.ndarray
    envelope: np.ndarray | None


def _run_approx(
    params: OperatorParams,
    fn: FunctionSpec,
    side: str,
    N: int,
    points: int,
    M: float | None,
    rule: str,
):
    grid = fn.sampled.grid if fn.sampled is not None else make_uniform_grid(params.a, params.b, points)
    x = fn.on_grid(grid)
    approx = approx_left if side == "left" else approx_right
    return approx(params, x, N, M, rule)  # type: ignore[arg-type]


def _compare(
    params: OperatorParams,
    fn: FunctionSpec,
    side: str,
    N: int,
    points: int,
    M: float | None,
    rule: str,
    use_oracle: bool,
) -> Comparison:
    result = _run_approx(params, fn, side, N, points, M, rule)
    t = result.grid.points

    if fn.closed_form is not None and not use_oracle:
        reference = [fn.closed_form(params, float(ti)) for ti in t]
    else:
        oracle = oracle_left if side == "left" else oracle_right
        reference = [oracle(params, fn.integrand, float(ti)) for ti in t]

    return Comparison(t, reference, result.values, result.error_envelope)


def cmd_exact(args: argparse.Namespace, out: io.TextIOBase) -> None:
    params = make_params(args.alpha, args.rho, args.a, args.b)
    exact = exact_left_power if args.side == "left" else exact_right_power
    rows = [(t, exact(params, args.v, t)) for t in args.t]
    write_rows(out, ("t", "value"), rows)


def cmd_approx(args: argparse.Namespace, out: io.TextIOBase) -> None:
    params = make_params(args.alpha, args.rho, args.a, args.b)
    fn = parse_function(args.fn, params, args.side)
    result = _run_approx(params, fn, args.side, args.N, args.points, args.M, args.rule)

    if result.error_envelope is None:
        write_rows(out, ("t", "approx"), zip(result.grid.points, result.values))
    else:
        write_rows(
            out,
            ("t", "approx", "envelope"),
            zip(result.grid.points, result.values, result.error_envelope),
        )


def cmd_compare(args: argparse.Namespace, out: io.TextIOBase) -> None:
    params = make_params(args.alpha, args.rho, args.a, args.b)
    fn = parse_function(args.fn, params, args.side)
    cmp = _compare(params, fn, args.side, args.N, args.points, args.M, args.rule, args.oracle)

    rows = []
    for i, t in enumerate(cmp.t):
        ref = cmp.reference[i]
        envelope = None if cmp.envelope is None else cmp.envelope[i]
        rows.append((t, ref, cmp.approx[i], abs(cmp.approx[i] - ref), envelope))

    write_rows(out, ("t", "exact", "approx", "abs_err", "envelope"), rows)


def cmd_solve(args: argparse.Namespace, out: io.TextIOBase) -> None:
    params = make_params(args.alpha, args.rho, 0.0, args.b)
    if args.rhs == "paper":
        problem = paper_problem(params)
        solution = lambda t: t ** (2 * params.rho)  # noqa: E731
    else:
        problem = IntegralEquationProblem(params, lambda t: 0.0, 0.0)
        solution = lambda t: 0.0 * t  # noqa: E731

    grid = make_uniform_grid(0.0, args.b, args.points)
    sol = solve_integral_equation(problem, grid, args.N, args.rule)
    write_rows(out, ("t", "x", "exact"), zip(grid.points, sol.x, solution(grid.points)))


# }}}

# {{{ sweep


class ConfigError(DomainError):
    """A sweep configuration file could not be parsed."""


@dataclass
class SweepCase:
    case_id: str
    params: OperatorParams
    Ns: list[int]
    points: int = 501
    fn: str = "testfn"
    side: str = "left"
    M: float | None = None
    oracle: bool = False
    rule: str = "quadratic"
    line: int = 0


@dataclass
class _Stanza:
    line: int
    values: dict[str, tuple[int, str]] = field(default_factory=dict)


_KEYS = {"case", "alpha", "rho", "a", "b", "N", "points", "fn", "side", "M", "oracle", "rule"}


def parse_config(text: str) -> list[SweepCase]:
    """Parse ``key=value`` stanzas separated by blank lines.

    Recognized keys: ``case``, ``alpha``, ``rho``, ``a`` (default 0), ``b``
    (default 0.5), ``N`` (comma-separated list), ``points`` (default 501),
    ``fn`` (default ``testfn``), ``side`` (default ``left``), ``M``,
    ``oracle`` (``true``/``false``) and ``rule``. Lines starting with ``#``
    are comments.
    """
    stanzas: list[_Stanza] = []
    current: _Stanza | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if not raw.strip().startswith("#"):
                current = None
            continue

        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw.strip()!r}")
        if key not in _KEYS:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")

        if current is None:
            current = _Stanza(lineno)
            stanzas.append(current)
        if key in current.values:
            raise ConfigError(f"config line {lineno}: duplicate key {key!r}")
        current.values[key] = (lineno, value)

    return [_build_case(i, stanza) for i, stanza in enumerate(stanzas, start=1)]


def _build_case(index: int, stanza: _Stanza) -> SweepCase:
    values = stanza.values
    case_id = values.get("case", (0, f"case{index}"))[1]
    where = f"stanza {index} ({case_id}, line {stanza.line})"

    def get(key: str, convert: Callable[[str], object], default: object = None) -> object:
        if key not in values:
            if default is None:
                raise ConfigError(f"{where}: missing key {key!r}", key)
            return default
        lineno, text = values[key]
        try:
            return convert(text)
        except ValueError as exc:
            raise ConfigError(f"config line {lineno}: invalid value for {key!r}: {text!r}", key) from exc

    def as_bool(text: str) -> bool:
        if text.lower() in ("true", "yes", "1"):
            return True
        if text.lower() in ("false", "no", "0"):
            return False
        raise ValueError(text)

    try:
        params = make_params(
            get("alpha", float), get("rho", float), get("a", float, 0.0), get("b", float, 0.5)
        )
        Ns = get("N", lambda s: [int(n) for n in s.split(",")])
        M = get("M", float, math.nan)
        case = SweepCase(
            case_id=case_id,
            params=params,
            Ns=Ns,  # type: ignore[arg-type]
            points=get("points", int, 501),  # type: ignore[arg-type]
            fn=get("fn", str, "testfn"),  # type: ignore[arg-type]
            side=get("side", str, "left"),  # type: ignore[arg-type]
            M=None if math.isnan(M) else M,  # type: ignore[arg-type]
            oracle=get("oracle", as_bool, False),  # type: ignore[arg-type]
            rule=get("rule", str, "quadratic"),  # type: ignore[arg-type]
            line=stanza.line,
        )
    except ConfigError:
        raise
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}", exc.field) from exc

    if case.side not in ("left", "right"):
        raise ConfigError(f"{where}: side must be 'left' or 'right'", "side")
    if any(N < 1 for N in case.Ns):
        raise ConfigError(f"{where}: N values must be >= 1", "N")

    return case


def run_case(case: SweepCase) -> tuple[list[tuple[object, ...]], list[tuple[int, float]]]:
    """Evaluate one sweep case; returns rows and per-N max abs errors."""
    fn = parse_function(case.fn, case.params, case.side)
    p = case.params
    rows: list[tuple[object, ...]] = []
    summary: list[tuple[int, float]] = []

    reference = None
    for N in case.Ns:
        cmp = _compare(p, fn, case.side, N, case.points, case.M, case.rule, case.oracle)
        # the reference does not depend on N
        reference = reference or cmp.reference
        errors = [abs(a - r) for a, r in zip(cmp.approx, reference)]
        for i, t in enumerate(cmp.t):
            envelope = None if cmp.envelope is None else cmp.envelope[i]
            rows.append((case.case_id, p.alpha, p.rho, N, t, reference[i], cmp.approx[i], errors[i], envelope))
        summary.append((N, max(errors)))

    return rows, summary


def cmd_sweep(args: argparse.Namespace, out: io.TextIOBase) -> None:
    try:
        with open(args.config) as infile:
            text = infile.read()
    except OSError as exc:
        raise DomainError(f"cannot read {args.config!r}: {exc.strerror}", "config") from exc

    cases = parse_config(text)
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(run_case, cases))

    header = ("case_id", "alpha", "rho", "N", "t", "exact", "approx", "abs_err", "envelope")
    write_rows(out, header, (row for rows, _ in results for row in rows))

    parts = [
        f"{case.case_id} N={N} max_abs_err={fmt(err)}"
        for case, (_, summary) in zip(cases, results)
        for N, err in summary
    ]
    print("summary: " + ("; ".join(parts) if parts else "no cases"), file=sys.stderr)


# }}}

# {{{ parser


def _add_operator_args(parser: argparse.ArgumentParser, with_a: bool = True) -> None:
    parser.add_argument("--alpha", type=float, required=True, help="fractional order")
    parser.add_argument("--rho", type=float, required=True, help="deformation parameter")
    if with_a:
        parser.add_argument("--a", type=float, default=0.0, help="left endpoint")
    parser.add_argument("--b", type=float, required=True, help="right endpoint")


def _add_series_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N", type=int, required=True, help="truncation order")
    parser.add_argument("--points", type=int, default=501, help="number of grid points")
    parser.add_argument("--rule", choices=("quadratic", "trapezoid"), default="quadratic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="katugampola", description="Katugampola fractional integrals and equations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        return p

    p = add("exact", "closed-form integrals of power functions")
    _add_operator_args(p)
    p.add_argument("--v", type=float, required=True, help="exponent, v > -1")
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--t", type=float, nargs="+", required=True, help="evaluation points")
    p.set_defaults(handler=cmd_exact)

    for name, help, handler in (
        ("approx", "truncated-series approximation on a grid", cmd_approx),
        ("compare", "approximation against the closed form or the oracle", cmd_compare),
    ):
        p = add(name, help)
        _add_operator_args(p)
        _add_series_args(p)
        p.add_argument("--fn", required=True, help="power:<v>, testfn, cos, zero or csv:<path>")
        p.add_argument("--side", choices=("left", "right"), default="left")
        p.add_argument("--M", type=float, default=None, help="bound on |x'| for the error envelope")
        if name == "compare":
            p.add_argument("--oracle", action="store_true", help="use quadrature as the reference")
        p.set_defaults(handler=handler)

    p = add("solve", "solve I x + x = f, x(0) = 0")
    _add_operator_args(p, with_a=False)
    _add_series_args(p)
    p.add_argument("--rhs", choices=("paper", "zero"), default="paper")
    p.set_defaults(handler=cmd_solve)

    p = add("sweep", "run a convergence sweep from a config file")
    p.add_argument("config", help="path to a key=value stanza file")
    p.add_argument("--jobs", type=int, default=1, help="cases evaluated concurrently")
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    buffer = io.StringIO()
    try:
        args.handler(args, buffer)
    except (KatugampolaError, ArithmeticError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2

    if args.out is None:
        sys.stdout.write(buffer.getvalue())
        sys.stdout.flush()
    else:
        try:
            with open(args.out, "w", newline="") as outfile:
                outfile.write(buffer.getvalue())
        except OSError as exc:
            print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
            return 2

    return 0


# }}}

if __name__ == "__main__":
    sys.exit(main())
