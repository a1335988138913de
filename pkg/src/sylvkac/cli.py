"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
If ``SYLVKAC_OUTPUT_DIR`` is set, relative ``--output`` paths resolve under it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from .dynamics import ProbabilityVector, SpectralPropagator, time_series_csv
from .exact import as_fraction, format_fraction
from .matrices import ModelParams, build_generator, build_krawtchouk, build_sylvester_kac
from .simulator import SimConfig, estimate_Qk
from .spectral import decompose_generator
from .verify import SUITES, run_suites

OUTPUT_DIR_ENV = "SYLVKAC_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _time(text: str) -> float:
    try:
        t = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad time {text!r}") from exc
    if t < 0 or math.isnan(t):
        raise argparse.ArgumentTypeError("times must be >= 0")
    return t


def _times(values: list[str]) -> list[float]:
    out = []
    for v in values:
        out.extend(_time(x) for x in v.split(",") if x)
    return out


def _params(args) -> ModelParams:
    try:
        return ModelParams(args.n, args.alpha, args.beta)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="number of cells")
    p.add_argument("--alpha", type=_rational, required=True, help="fill rate, e.g. 1, 7/3 or 0.25")
    p.add_argument("--beta", type=_rational, required=True, help="empty rate")


def cmd_eigen(args) -> int:
    d = decompose_generator(_params(args))
    if args.format == "json":
        _emit(d.to_json(indent=2) + "\n", args.output)
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "eigenvalue"] + [f"u{l}" for l in range(d.n + 1)])
    for k, (lam, u) in enumerate(zip(d.eigenvalues, d.vectors)):
        w.writerow([k, format_fraction(lam)] + [format_fraction(x) for x in u])
    _emit(buf.getvalue(), args.output)
    return 0


def cmd_matrix(args) -> int:
    try:
        if args.kind == "generator":
            T = build_generator(_params(args))
        elif args.kind == "sylvester-kac":
            T = build_sylvester_kac(args.n, args.scale)
        else:
            if args.p is None:
                raise UsageError("--p is required for the krawtchouk matrix")
            T = build_krawtchouk(args.p, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(json.dumps(T.to_dict(), indent=2) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be >= 1")
    try:
        results = run_suites(args.suite, args.max_n)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    ok = all(r.passed for r in results if r.mandatory)
    report = {"max_n": args.max_n, "passed": ok, "checks": [r.to_dict() for r in results]}
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    for r in results:
        tag = "info" if not r.mandatory else ("PASS" if r.passed else "FAIL")
        print(f"[{tag}] {r.name} ({r.cases} cases)", file=sys.stderr)
    return 0 if ok else 1


def _initial_vector(spec: str, n: int) -> list[Fraction]:
    if spec == "empty":
        return [Fraction(int(i == 0)) for i in range(n + 1)]
    if spec == "full":
        return [Fraction(int(i == n)) for i in range(n + 1)]
    if spec.startswith("k="):
        try:
            m = int(spec[2:])
        except ValueError as exc:
            raise UsageError(f"malformed --init {spec!r}") from exc
        if not 0 <= m <= n:
            raise UsageError(f"--init occupancy {m} outside 0..{n}")
        return [Fraction(int(i == m)) for i in range(n + 1)]
    path = Path(spec[5:] if spec.startswith("file:") else spec)
    if not path.is_file():
        raise UsageError(f"malformed --init {spec!r}: expected empty, full, k=<m> or a file")
    try:
        raw = json.loads(path.read_text())
        vec = [as_fraction(x if not isinstance(x, float) else repr(x)) for x in raw]
        ProbabilityVector(tuple(vec))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad initial vector in {path}: {exc}") from exc
    if len(vec) != n + 1:
        raise UsageError(f"initial vector needs {n + 1} entries")
    return vec


def cmd_evolve(args) -> int:
    params = _params(args)
    q0 = _initial_vector(args.init, params.n)
    times = _times(args.t)
    if args.precision == "exact":
        prop = SpectralPropagator(params, q0)
        lines = ["t," + ",".join(f"Q{k}" for k in range(params.n + 1)) + ",sum,coverage"]
        for t in times:
            if t not in (0.0, math.inf):
                raise UsageError("exact precision only supports t = 0 and t = inf")
            q = prop(t).entries
            row = [repr(t)] + [format_fraction(x) for x in q]
            row += [format_fraction(sum(q, Fraction(0))), format_fraction(sum((k * x for k, x in enumerate(q)), Fraction(0)))]
            lines.append(",".join(row))
        _emit("# precision=exact rationals\n" + "\n".join(lines) + "\n", args.output)
        return 0
    step = args.step if args.oracle == "rk4" else None
    _emit(time_series_csv(params, q0, times, oracle_step=step), args.output)
    return 0


def cmd_simulate(args) -> int:
    params = _params(args)
    init = args.init
    if init.startswith("k="):
        try:
            init = int(init[2:])
        except ValueError as exc:
            raise UsageError(f"malformed --init {args.init!r}") from exc
    try:
        cfg = SimConfig(params, args.trials, args.seed, tuple(_times(args.t)), args.mode, args.workers)
        emp = estimate_Qk(cfg, init)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(emp.to_json() + "\n" if args.format == "json" else emp.to_csv(), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sylvkac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigen", help="closed-form eigenpairs of the generator")
    _add_model_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("matrix", help="dump one of the tridiagonal matrices as JSON")
    p.add_argument("kind", choices=("generator", "sylvester-kac", "krawtchouk"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_rational, default=Fraction(1))
    p.add_argument("--beta", type=_rational, default=Fraction(1))
    p.add_argument("--scale", type=_rational, default=Fraction(1))
    p.add_argument("--p", type=_rational)
    p.add_argument("--output")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", help="exact verification sweeps")
    p.add_argument("--suite", action="append", choices=["all", *SUITES], help="repeatable; default all")
    p.add_argument("--max-n", type=int, default=25)
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("evolve", help="Q(t) by spectral expansion")
    _add_model_args(p)
    p.add_argument("--init", default="empty", help="empty, full, k=<m> or a JSON file of n+1 probabilities")
    p.add_argument("--t", action="append", required=True, help="time(s); repeat or comma-separate; 'inf' allowed")
    p.add_argument("--oracle", choices=("none", "rk4"), default="none")
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--precision", choices=("float", "exact"), default="float")
    p.add_argument("--output")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("simulate", help="Monte Carlo occupancy histograms")
    _add_model_args(p)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--t", action="append", required=True)
    p.add_argument("--init", default="empty", help="empty, full, k=<m>, equilibrium or bernoulli:<q>")
    p.add_argument("--mode", choices=("count", "cell"), default="count")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "suite", "unset") is None:
        args.suite = ["all"]
    if args.command == "evolve" and args.step <= 0:
        parser.error("--step must be > 0")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
