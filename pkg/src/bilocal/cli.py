"""Command-line front end: ``bilocal {eval,optimize,audit,scan}``.

Exit codes: 0 success, 2 usage or input error, 3 constraint violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .correlations import (
    ConstraintViolation,
    MeasurementStrategy,
    eval_bloch_general,
    eval_paper_formula,
    eval_trace,
    eval_werner_prime,
    pq_threshold,
    s_value,
)
from .experiments import REPORTED_SPRIME, audit_reported, run_paper_experiment, scan_pq, scan_to_csv
from .optimizer import PsoConfig
from .qstate import bloch_decompose, werner

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONSTRAINT = 3


class UsageError(Exception):
    pass


def _num(x: float) -> float:
    return float(f"{x:.12g}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _unit_interval(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= val <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return val


def _u64(text: str) -> int:
    try:
        val = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return val


def _positive_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if val < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return val


def _load_strategy(path) -> MeasurementStrategy:
    try:
        with open(path) as fh:
            return MeasurementStrategy.from_json(json.load(fh))
    except (OSError, ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"cannot read strategy {path}: {exc}") from exc


def _write(path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def cmd_eval(args) -> int:
    strategy = _load_strategy(args.strategy)
    check = not args.no_project_audit
    if check:
        strategy.validate()
    rho_ab, rho_bc = werner(args.p), werner(args.q)
    bf_ab, bf_bc = bloch_decompose(rho_ab), bloch_decompose(rho_bc)
    routes = {
        "trace": eval_trace(strategy, rho_ab, rho_bc, check=False),
        "bloch_general": eval_bloch_general(strategy, bf_ab, bf_bc, check=False),
        "paper_formula": eval_paper_formula(strategy, bf_ab, bf_bc, check=False),
    }
    Ip, Jp, Sp = eval_werner_prime(strategy, check=False)
    out = {"p": args.p, "q": args.q}
    out.update({name: res.to_json() for name, res in routes.items()})
    out["werner_prime"] = {"Iprime": _num(Ip), "Jprime": _num(Jp), "Sprime": _num(Sp)}
    if args.format == "csv":
        lines = ["route,I,J,S"]
        for name, res in routes.items():
            r = res.to_json()
            lines.append(f"{name},{r['I']!r},{r['J']!r},{r['S']!r}")
        print("\n".join(lines))
    else:
        print(_dump(out))
    return EXIT_OK


def cmd_optimize(args) -> int:
    try:
        config = PsoConfig.load(args.config) if args.config else PsoConfig()
        changes = {}
        if args.seed is not None:
            changes["seed"] = args.seed
        if args.iterations is not None:
            changes["iterations"] = args.iterations
        if changes:
            config = config.replace(**changes)
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"bad config: {exc}") from exc

    strategy, value, trace = run_paper_experiment(config)
    threshold = pq_threshold(value) if value > 0 else float("inf")
    csv_text = trace.to_csv()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write(out / "convergence.csv", csv_text)
        _write(out / "best_strategy.json", _dump(strategy.to_json()) + "\n")
    if args.format == "csv":
        sys.stdout.write(csv_text)
    else:
        print(_dump({"seed": config.seed, "iterations": config.iterations, "best_strategy": strategy.to_json()}))
    print(f"S'max = {value:.12g}  pq threshold = {threshold:.12g}")
    return EXIT_OK


def cmd_audit(args) -> int:
    report = audit_reported(args.p, args.q)
    print(_dump(report.to_json()))
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not args.sprime > 0:
        raise UsageError("--sprime must be positive")
    strategy = _load_strategy(args.strategy) if args.strategy else None
    cells = scan_pq(args.sprime, args.steps, strategy)
    if args.format == "json":
        text = _dump([c.to_json() for c in cells]) + "\n"
    else:
        text = scan_to_csv(cells)
    n_mixed = sum(c.violates_paper and c.ab_entangled and not c.bc_entangled for c in cells)
    summary = (
        f"cells={len(cells)} violates_paper={sum(c.violates_paper for c in cells)} "
        f"violates_trace={sum(c.violates_trace for c in cells)} "
        f"entangled_x_separable_violating={n_mixed}"
    )
    if args.out:
        _write(args.out, text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bilocal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("eval", help="evaluate a strategy on a Werner pair by every route")
    p.add_argument("--strategy", metavar="PATH", required=True)
    p.add_argument("--p", type=_unit_interval, default=1.0)
    p.add_argument("--q", type=_unit_interval, default=1.0)
    p.add_argument("--no-project-audit", action="store_true", help="skip the admissibility check")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("optimize", help="swarm search for the largest S'")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--seed", type=_u64)
    p.add_argument("--iterations", type=_positive_int)
    common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("audit", help="recompute the published optimum")
    p.add_argument("--p", type=_unit_interval, default=1.0)
    p.add_argument("--q", type=_unit_interval, default=1.0)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("scan", help="classify a (p, q) grid")
    p.add_argument("--sprime", type=float, default=REPORTED_SPRIME)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--strategy", metavar="PATH")
    common(p, fmt_default="csv")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ConstraintViolation as exc:
        print(f"constraint violation: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
