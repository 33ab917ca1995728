"""Command-line surface: evaluation, search, verification, bounds, reports.

Exit codes: 0 when the queried property holds (or a report was produced),
1 for mathematically meaningful negative results (violated inequality,
failed verification, missing inverse in a code), 2 for unusable input.
Every command prints a human-readable account followed by a
machine-readable ``key=value`` block; ``--format json`` prints only the
machine data, as JSON.  Exact rationals are printed as ``p/q``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import entropy as ent
from . import expressions as ex
from . import matroid as mat
from . import network as net
from . import search as sr
from .gf import PrimeField, ShapeError
from .subspace import (UnboundVariableError, format_assignment,
                       parse_assignment)

WORKERS_ENV = "RANKINEQ_WORKERS"

_CODE_NAME = re.compile(r"^(?P<base>[a-z0-9-]+)-gf(?P<p>\d+)$")


class InputError(ValueError):
    """CLI-level unusable input; maps to exit code 2."""


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise InputError(f"{WORKERS_ENV} must be >= 1, got {value}")
    return value


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _resolve_ineq(spec: str) -> ex.RankExpression:
    if spec.startswith("file:"):
        return ex.parse_expression(_read(spec[len("file:"):]),
                                   name=Path(spec[len("file:"):]).stem)
    if spec in ex.BUILTIN_NAMES:
        return ex.builtin(spec)
    if Path(spec).exists():
        return ex.parse_expression(_read(spec), name=Path(spec).stem)
    raise InputError(f"no builtin inequality or file named {spec!r}")


def _resolve_network(spec: str) -> net.Network:
    if spec.startswith("file:"):
        return net.parse_network(_read(spec[len("file:"):]))
    if spec in net.BUILTIN_NETWORKS:
        return net.builtin_network(spec)
    if Path(spec).exists():
        return net.parse_network(_read(spec))
    raise InputError(f"no builtin network or file named {spec!r}")


def _resolve_code(spec: str, network: net.Network) -> net.LinearCode:
    if spec.startswith("file:"):
        return net.parse_code(_read(spec[len("file:"):]), network)
    m = _CODE_NAME.match(spec)
    if m and m.group("base") in net.BUILTIN_NETWORKS:
        return net.builtin_code(m.group("base"), int(m.group("p")))
    if Path(spec).exists():
        return net.parse_code(_read(spec), network)
    raise InputError(f"no builtin code or file named {spec!r} "
                     f"(builtins look like t8-gf3)")


def _resolve_distribution(spec: str) -> ent.JointDistribution:
    if spec.startswith("file:"):
        return ent.parse_distribution(_read(spec[len("file:"):]))
    if spec in ent.BUILTIN_DISTRIBUTIONS:
        return ent.builtin_distribution(spec)
    if Path(spec).exists():
        return ent.parse_distribution(_read(spec))
    raise InputError(f"no builtin distribution or file named {spec!r}")


def _emit(args, prose: list[str], machine: dict) -> None:
    if args.format == "json":
        print(json.dumps(machine, indent=2))
        return
    for line in prose:
        print(line)
    for key, value in machine.items():
        print(f"{key}={value}")


# --- subcommands ---------------------------------------------------------

def _cmd_ineq_eval(args) -> int:
    expr = _resolve_ineq(args.ineq)
    ctx = parse_assignment(_read(args.assignment))
    residual = ex.evaluate(expr, ctx)
    verdict = "holds" if residual >= 0 else "violated"
    _emit(args, [f"{expr.name} on {args.assignment}: residual {residual} "
                 f"({verdict})"],
          {"residual": str(residual), "verdict": verdict})
    return 0 if residual >= 0 else 1


def _cmd_ineq_search(args) -> int:
    expr = _resolve_ineq(args.ineq)
    field = PrimeField(args.char)
    if args.strategy == "exhaustive-1dim":
        strategy = sr.ExhaustiveOneDim()
    elif args.strategy == "random":
        strategy = sr.RandomSearch(seed=args.seed, trials=args.trials,
                                   max_dim=args.max_dim)
    else:
        raise InputError(f"unknown strategy {args.strategy!r}")
    found = sr.search_violation(expr, field, args.dim, strategy,
                                workers=_workers())
    if found is None:
        _emit(args, [f"no violation of {expr.name} found over GF({args.char})^"
                     f"{args.dim} with {args.strategy}"],
              {"found": "none"})
        return 0
    residual = ex.evaluate(expr, found)
    text = format_assignment(found)
    _emit(args, [f"violation of {expr.name} (residual {residual}):", text],
          {"found": "violation", "residual": str(residual),
           "assignment": text})
    return 1


def _cmd_net_verify(args) -> int:
    network = _resolve_network(args.network)
    try:
        code = _resolve_code(args.code, network)
    except net.MissingInverseError as exc:
        _emit(args, [f"cannot build code: {exc}"],
              {"verified": "false", "error": "missing-inverse",
               "detail": str(exc)})
        return 1
    verdict = net.verify_solution(network, code)
    prose = []
    for d in verdict.demands:
        if d.ok:
            prose.append(f"demand {d.label}: {d.target} decoded ok")
        else:
            prose.append(f"demand {d.label}: FAILED, residual matrix "
                         f"[{' '.join(str(e) for e in d.residual.entries)}]")
    machine = {"verified": "true" if verdict.ok else "false"}
    for d in verdict.demands:
        machine[f"demand.{d.label}"] = "ok" if d.ok else "fail"
    if not verdict.ok:
        machine["failing"] = ",".join(verdict.failing())
    _emit(args, prose, machine)
    return 0 if verdict.ok else 1


def _cmd_net_bound(args) -> int:
    network = _resolve_network(args.network)
    if (args.ineq is None) == (not args.cut):
        raise InputError("choose exactly one of --ineq or --cut")
    if args.cut:
        if args.demand is not None:
            bound = net.dependency_cut_bound(network, args.demand)
        else:
            bound = net.network_cut_bound(network)
    else:
        expr = _resolve_ineq(args.ineq)
        var_map = {}
        if args.map:
            for pair in args.map.split(","):
                if "=" not in pair:
                    raise InputError(f"bad --map entry {pair!r}; use VAR=NAME")
                k, v = pair.split("=", 1)
                var_map[k.strip()] = v.strip()
        bound = net.capacity_bound_from_inequality(network, expr, var_map)
    prose = [f"linear capacity bound: k/n <= {bound.value} "
             f"({bound.provenance}; {bound.applicability})"]
    prose.extend("  " + line for line in bound.trace)
    _emit(args, prose, {"bound": str(bound.value),
                        "provenance": bound.provenance,
                        "applicability": str(bound.applicability)})
    return 0


def _cmd_matroid_info(args) -> int:
    matroid = mat.builtin_matroid(args.name, args.char)
    report = mat.matroid_report(matroid)
    circuits = ";".join("{" + ",".join(c) + "}" for c in report["circuits"])
    prose = [f"matroid {args.name} over GF({args.char})",
             f"  ground set: {', '.join(report['ground'])}",
             f"  rank: {report['rank']}",
             f"  bases: {report['base_count']}",
             f"  circuits: {circuits or '(none)'}"]
    _emit(args, prose, {"ground": ",".join(report["ground"]),
                        "rank": str(report["rank"]),
                        "bases": str(report["base_count"]),
                        "circuits": circuits})
    return 0


def _cmd_entropy_eval(args) -> int:
    dist = _resolve_distribution(args.dist)
    expr = _resolve_ineq(args.expr)
    residual = ent.evaluate_on_distribution(expr, dist, base=args.base)
    verdict = "violated" if residual < -1e-12 else "holds"
    _emit(args, [f"{expr.name} on {args.dist}: residual {residual!r} "
                 f"({verdict})"],
          {"residual": repr(residual), "verdict": verdict})
    return 0 if verdict == "holds" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankineq",
        description="linear rank inequalities, matroids, and network-coding "
                    "bounds over prime fields")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    top = parser.add_subparsers(dest="group", required=True)

    ineq = top.add_parser("ineq", help="rank inequality evaluation and search")
    ineq_sub = ineq.add_subparsers(dest="command", required=True)
    p = ineq_sub.add_parser("eval", help="evaluate on a subspace assignment")
    p.add_argument("--ineq", required=True, metavar="NAME|FILE")
    p.add_argument("--assignment", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_ineq_eval)
    p = ineq_sub.add_parser("search", help="look for a violating assignment")
    p.add_argument("--ineq", required=True, metavar="NAME|FILE")
    p.add_argument("--char", required=True, type=int)
    p.add_argument("--dim", required=True, type=int)
    p.add_argument("--strategy", required=True,
                   choices=("exhaustive-1dim", "random"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-dim", type=int, default=None)
    p.set_defaults(func=_cmd_ineq_search)

    netp = top.add_parser("net", help="network code verification and bounds")
    net_sub = netp.add_subparsers(dest="command", required=True)
    p = net_sub.add_parser("verify", help="check a linear code solves a network")
    p.add_argument("--network", required=True, metavar="NAME|FILE")
    p.add_argument("--code", required=True, metavar="NAME|FILE")
    p.set_defaults(func=_cmd_net_verify)
    p = net_sub.add_parser("bound", help="derive a linear capacity bound")
    p.add_argument("--network", required=True, metavar="NAME|FILE")
    p.add_argument("--ineq", metavar="NAME|FILE")
    p.add_argument("--cut", action="store_true")
    p.add_argument("--demand", metavar="LABEL")
    p.add_argument("--map", metavar="VAR=NAME,...")
    p.set_defaults(func=_cmd_net_bound)

    matp = top.add_parser("matroid", help="vector matroid reports")
    mat_sub = matp.add_subparsers(dest="command", required=True)
    p = mat_sub.add_parser("info", help="ground set, rank, bases, circuits")
    p.add_argument("--name", required=True)
    p.add_argument("--char", required=True, type=int)
    p.set_defaults(func=_cmd_matroid_info)

    entp = top.add_parser("entropy", help="Shannon entropies of distributions")
    ent_sub = entp.add_subparsers(dest="command", required=True)
    p = ent_sub.add_parser("eval", help="evaluate an expression on a pmf")
    p.add_argument("--dist", required=True, metavar="NAME|FILE")
    p.add_argument("--expr", required=True, metavar="NAME|FILE")
    p.add_argument("--base", type=float, default=None)
    p.set_defaults(func=_cmd_entropy_eval)

    return parser


_INPUT_ERRORS = (
    InputError,
    ex.ExpressionSyntaxError,
    ex.UnknownNameError,
    ent.UnknownNameError,
    mat.UnknownLabelError,
    mat.SizeLimitError,
    UnboundVariableError,
    net.NetworkFormatError,
    net.UnjustifiedTermError,
    net.NegativeEdgeCoefficientError,
    net.NonpositiveDenominatorError,
    net.DegenerateDemandError,
    sr.StrategyError,
    ShapeError,
    ValueError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
