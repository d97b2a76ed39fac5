"""Command-line front end.

    tfspectral solve --method post --n 200 --max-iter 85 --precision-digits 120
    tfspectral table --load solution.json --xs 0.5,3,10
    tfspectral residual-scan --method pre --n-list 25,50,75,100
    tfspectral benchmark --n-list 50,70,100 --iter-list 20,30,40

Solutions are written as JSON documents; tables and scans as CSV.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass

import gmpy2
from gmpy2 import mpfr

from .frg import FrgBasis, collocation_nodes
from .numeric import Precision, parse, render, to_rational, working_precision
from .solver_post import PostNewtonConfig, solve_post_newton
from .solver_pre import PreNewtonConfig, SolveReport, solve_pre_newton
from .tfmodel import SeriesApproximant, eval_series, initial_slope, tf_residual

SCHEMA = 1
METHODS = ("pre", "post")
METHOD_DEFAULTS = {
    "pre": {"n": 100, "l": "3", "max_iter": 40},
    "post": {"n": 200, "l": "2.828", "max_iter": 85},
}
TABLE_XS = ("0.5", "3", "10", "50", "200", "5000")
NORM_DIGITS = 20


@dataclass(frozen=True)
class RunConfig:
    method: str = "post"
    n: int | None = None
    l: str | None = None
    alpha: str = "1/2"
    a: str = "1/2"
    precision_digits: int | None = None
    max_iter: int | None = None
    step_tol: str | None = None
    boundary: str = "auto"

    def resolved(self) -> "RunConfig":
        """Fill method-dependent defaults (N, L, iteration count, digits)."""
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        d = METHOD_DEFAULTS[self.method]
        n = d["n"] if self.n is None else self.n
        if n < 2:
            raise ValueError("n must be at least 2")
        digits = self.precision_digits or Precision.default_for(n).decimal_digits
        cfg = RunConfig(
            method=self.method,
            n=n,
            l=d["l"] if self.l is None else self.l,
            alpha=self.alpha,
            a=self.a,
            precision_digits=digits,
            max_iter=d["max_iter"] if self.max_iter is None else self.max_iter,
            step_tol=self.step_tol,
            boundary=self.boundary,
        )
        cfg.basis()
        Precision(digits)
        for text in filter(None, (cfg.step_tol, None if cfg.boundary == "auto" else cfg.boundary)):
            if not to_rational(text) > 0:
                raise ValueError(f"expected a positive number, got {text!r}")
        if cfg.max_iter < 0:
            raise ValueError("max-iter must be nonnegative")
        return cfg

    def basis(self) -> FrgBasis:
        return FrgBasis(self.a, self.alpha, self.l, self.n)

    def precision(self) -> Precision:
        return Precision(self.precision_digits)

    def solver_config(self):
        boundary = None if self.boundary == "auto" else to_rational(self.boundary)
        common = dict(
            basis=self.basis(),
            precision=self.precision(),
            max_iterations=self.max_iter,
            step_tolerance=self.step_tol,
            boundary_point=boundary,
        )
        if self.method == "pre":
            return PreNewtonConfig(**common)
        return PostNewtonConfig(**common)


def run_solver(cfg: RunConfig) -> SolveReport:
    solver_cfg = cfg.solver_config()
    if cfg.method == "pre":
        return solve_pre_newton(solver_cfg)
    return solve_post_newton(solver_cfg)


def solution_document(cfg: RunConfig, report: SolveReport) -> dict:
    digits = cfg.precision_digits
    with working_precision(cfg.precision()):
        lam = initial_slope(report.solution)
        return {
            "schema": SCHEMA,
            "config": asdict(cfg),
            "lambda": render(lam, digits),
            "coefficients": [render(c, digits) for c in report.solution.coeffs],
            "boundary_point": render(report.boundary_point, digits),
            "initial_residual_sq_norm": render(report.initial_residual_sq_norm, NORM_DIGITS),
            "iterations": [
                {
                    "iteration": i + 1,
                    "step_norm": render(r.step_norm, NORM_DIGITS),
                    "residual_sq_norm": render(r.residual_sq_norm, NORM_DIGITS),
                    "damping": render(r.damping, NORM_DIGITS),
                    "wall_seconds": round(r.wall_seconds, 6),
                }
                for i, r in enumerate(report.per_iteration)
            ],
            "iterations_run": report.iterations_run,
            "converged": report.converged,
        }


def load_solution(doc: dict):
    """``(RunConfig, SeriesApproximant)`` from a solution document.

    Call inside ``working_precision(cfg.precision())`` when the coefficients
    are going to be used; they are parsed at the ambient precision.
    """
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    cfg = RunConfig(**doc["config"]).resolved()
    with working_precision(cfg.precision()):
        coeffs = tuple(parse(c) for c in doc["coefficients"])
        return cfg, SeriesApproximant(cfg.basis(), coeffs)


def table_rows(doc: dict, xs=TABLE_XS) -> list[tuple[str, str, str]]:
    """``(x, y, y')`` rendered at the document's working digits."""
    cfg, solution = load_solution(doc)
    digits = cfg.precision_digits
    rows = []
    with working_precision(cfg.precision()):
        for text in xs:
            x = parse(text)
            if x == 0:
                # the stored lambda comes from the unrounded coefficients
                rows.append((text, "1", doc["lambda"]))
                continue
            y, yp = eval_series(solution, x), eval_series(solution, x, 1)
            rows.append((text, render(y, digits), render(yp, digits)))
    return rows


def probe_grid(nodes, count: int, lo: float = -2.0, hi: float = 4.0) -> list[mpfr]:
    """Log-spaced probes in ``[10**lo, 10**hi]``, nudged off any collocation node."""
    probes = []
    for k in range(count):
        x = mpfr(10) ** mpfr((lo + (hi - lo) * k / max(count - 1, 1)))
        for node in nodes:
            if abs(x - node) <= abs(node) * mpfr("1e-6"):
                x = x * mpfr("1.001")
        probes.append(x)
    return probes


def residual_scan(cfg: RunConfig, n_list, probes: int) -> list[dict]:
    out = []
    for n in n_list:
        try:
            cell = RunConfig(**{**asdict(cfg), "n": n, "precision_digits": cfg.precision_digits}).resolved()
            report = run_solver(cell)
            with working_precision(cell.precision()):
                nodes = collocation_nodes(cell.basis(), cell.precision())
                for x in probe_grid(nodes, probes):
                    r = abs(tf_residual(report.solution, x, extend=True))
                    value = float(gmpy2.log10(r)) if r > 0 else -math.inf
                    out.append({"n": n, "x": render(x, 12), "log10_abs_residual": f"{value:.6f}",
                                "status": "ok" if report.converged else "max_iter"})
        except Exception as exc:  # recorded per cell, scan continues
            out.append({"n": n, "x": "", "log10_abs_residual": "", "status": f"error: {exc}"})
    return out


def benchmark(n_list, iter_list, precision_digits: int | None = None) -> list[dict]:
    """Wall time of both solvers over the ``(N, iterations)`` grid.

    Early stopping is disabled so every cell runs its full iteration count.
    Node construction is timed separately and excluded from ``wall_seconds``.
    """
    out = []
    for n in n_list:
        for iters in iter_list:
            for method in METHODS:
                row = {"n": n, "iterations": iters, "method": method}
                try:
                    cfg = RunConfig(method=method, n=n, max_iter=iters, step_tol="1e-100000",
                                    precision_digits=precision_digits).resolved()
                    start = time.perf_counter()
                    collocation_nodes(cfg.basis(), cfg.precision())
                    node_seconds = time.perf_counter() - start
                    start = time.perf_counter()
                    report = run_solver(cfg)
                    wall = time.perf_counter() - start
                    row.update(wall_seconds=f"{wall:.6f}", node_seconds=f"{node_seconds:.6f}",
                               precision_digits=cfg.precision_digits,
                               iterations_run=report.iterations_run, status="ok")
                except Exception as exc:  # recorded per cell, run continues
                    row.update(wall_seconds="", node_seconds="", precision_digits="",
                               iterations_run="", status=f"error: {exc}")
                out.append(row)
    return out


def _csv(rows, fields) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _str_list(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_config(args) -> RunConfig:
    return RunConfig(
        method=args.method,
        n=args.n,
        l=args.l,
        alpha=args.alpha,
        a=args.a,
        precision_digits=args.precision_digits,
        max_iter=args.max_iter,
        step_tol=args.step_tol,
        boundary=args.boundary,
    ).resolved()


def cmd_solve(args) -> int:
    cfg = _run_config(args)
    report = run_solver(cfg)
    doc = solution_document(cfg, report)
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0 if report.converged else 2


def cmd_table(args) -> int:
    if args.load:
        with open(args.load, encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        cfg = _run_config(args)
        doc = solution_document(cfg, run_solver(cfg))
    xs = _str_list(args.xs) if args.xs else TABLE_XS
    rows = [dict(zip(("x", "y", "yprime"), r)) for r in table_rows(doc, xs)]
    _emit(_csv(rows, ["x", "y", "yprime"]), args.out)
    return 0 if doc["converged"] else 2


def cmd_residual_scan(args) -> int:
    cfg = _run_config(args)
    rows = residual_scan(cfg, _int_list(args.n_list), args.probes)
    _emit(_csv(rows, ["n", "x", "log10_abs_residual", "status"]), args.out)
    return 0


def cmd_benchmark(args) -> int:
    rows = benchmark(_int_list(args.n_list), _int_list(args.iter_list), args.precision_digits)
    fields = ["n", "iterations", "method", "wall_seconds", "node_seconds",
              "precision_digits", "iterations_run", "status"]
    _emit(_csv(rows, fields), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tfspectral", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--method", choices=METHODS, default="post")
        p.add_argument("--n", type=int)
        p.add_argument("--l", help="map scale L (default 3 for pre, 2.828 for post)")
        p.add_argument("--alpha", default="1/2")
        p.add_argument("--a", default="1/2")
        p.add_argument("--precision-digits", type=int)
        p.add_argument("--max-iter", type=int)
        p.add_argument("--step-tol")
        p.add_argument("--boundary", default="auto", help="'auto' (largest node) or a decimal")
        p.add_argument("--out")

    p = sub.add_parser("solve", help="solve and emit a solution JSON document")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="y and y' on a grid of x values (CSV)")
    common(p)
    p.add_argument("--load", help="solution JSON written by 'solve'")
    p.add_argument("--xs", help="comma-separated x values")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("residual-scan", help="log10|Res| on off-node probes for several N (CSV)")
    common(p)
    p.add_argument("--n-list", default="25,50,75,100")
    p.add_argument("--probes", type=int, default=40)
    p.set_defaults(func=cmd_residual_scan)

    p = sub.add_parser("benchmark", help="wall time of both methods (CSV)")
    p.add_argument("--n-list", default="50,70,100")
    p.add_argument("--iter-list", default="20,30,40")
    p.add_argument("--precision-digits", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        first = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"tfspectral: error: {first}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
