r"""Implement the ``posetlab`` command line.

Every command prints a human-readable listing, or a JSON document with
``--json``. The exit status is 0 on success, 1 on a domain error or a
failed verification and 2 on a usage error.
"""

from __future__ import annotations

__all__ = ["build_parser", "main", "run"]

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any

from posetlab.builders import butterfly, chain, vee
from posetlab.cache import CacheEntry, ResultCache, resolve_cache_dir
from posetlab.constants import CACHE_DIR_ENV, DEFAULT_MAX_NODES, DEFAULT_MAX_SECONDS, VERSION
from posetlab.dsl import parse
from posetlab.embedding import contains_subposet, family_contains
from posetlab.errors import PosetLabError
from posetlab.expr import canonical_text, elaborate, format_expr
from posetlab.lattice import Family
from posetlab.params import e_of, interval_records, la_n, lambda_n, pi_evidence
from posetlab.search import SearchBudget, check_bounded, scan_lower_lbound, scan_upper_lbound
from posetlab.suites import SUITES, run_suite
from posetlab.utils.serialization import dump_json, format_rational, parse_rational

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"


class _UsageError(Exception):
    pass


##################
#     Parser     #
##################


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        msg = f"invalid rational value: {text!r}"
        raise argparse.ArgumentTypeError(msg) from exc


def _common_options() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--json", action="store_true", help="print machine-readable JSON")
    parser.add_argument(
        "--cache-dir",
        default=None,
        help=f"directory of the result cache (default: ${CACHE_DIR_ENV}, no cache if unset)",
    )
    parser.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    parser.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    parser.add_argument("--max-seconds", type=float, default=DEFAULT_MAX_SECONDS)
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    r"""Return the argument parser of the command line."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="posetlab",
        description="Exact computations on forbidden subposets of the Boolean lattice.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("eval", parents=[common], help="build a poset from an expression")
    sub.add_argument("expr")

    sub = commands.add_parser("e", parents=[common], help="compute e(P)")
    sub.add_argument("expr")
    sub.add_argument("--n-max", type=int, default=None, help="search ceiling")

    for name, text in (("la", "compute La(n, P)"), ("lambda", "compute lambda_n(P)")):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("expr")
        sub.add_argument("--n", type=int, required=True)
        sub.add_argument("--all-maximizers", action="store_true")

    sub = commands.add_parser(
        "lbound", parents=[common], help="check a Lubell bound on sizes [m, n - m]"
    )
    sub.add_argument("expr")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--m", type=int, default=0)
    sub.add_argument("--bound", type=_rational, default=None, help="default: e(P)")
    sub.add_argument("--n-max", type=int, default=None, help="search ceiling of e(P)")

    sub = commands.add_parser("intervals", parents=[common], help="list the intervals and e")
    sub.add_argument("expr")
    sub.add_argument("--n-max", type=int, default=None)

    sub = commands.add_parser("embed", parents=[common], help="search a copy of a pattern")
    sub.add_argument("pattern")
    host = sub.add_mutually_exclusive_group(required=True)
    host.add_argument("--host", help="host poset expression")
    host.add_argument("--family", type=Path, help="host family JSON file")

    for name, option in (("scan-lower", "--beta"), ("scan-upper", "--alpha")):
        sub = commands.add_parser(
            name, parents=[common], help=f"maximize the Lubell value, sizes set by {option[2:]}"
        )
        sub.add_argument("expr")
        sub.add_argument(option, type=_rational, required=True)
        sub.add_argument("--n", type=int, nargs="+", required=True)

    sub = commands.add_parser("verify", parents=[common], help="run verification suites")
    sub.add_argument(
        "suites", nargs="*", help="suite names or dotted paths (default: every registered suite)"
    )

    sub = commands.add_parser("report", parents=[common], help="write a JSON evidence report")
    sub.add_argument("out", type=Path)

    commands.add_parser("compact-cache", parents=[common], help="compact the result cache")
    return parser


####################
#     Commands     #
####################


class _Context:
    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.budget = SearchBudget(max_nodes=args.max_nodes, max_seconds=args.max_seconds)
        directory = None if args.no_cache else resolve_cache_dir(args.cache_dir)
        self.cache = ResultCache(directory)

    def cached(
        self,
        expr_text: str,
        operation: str,
        key_args: tuple,
        compute: Callable[[], dict],
        labelled: bool = False,
    ) -> dict[str, Any]:
        # Payloads with element indices are only valid for the labelling
        # of the expression as written.
        expr = parse(expr_text)
        key = format_expr(expr) if labelled else canonical_text(expr)
        entry = self.cache.get(key, operation, key_args)
        if entry is not None:
            return entry.value
        # Fresh and cached payloads must render identically.
        payload = json.loads(dump_json(compute()))
        status = payload.get("status")
        if status != "lower_bound_only":
            self.cache.put(CacheEntry(key, operation, key_args, payload, status=status))
        return payload


def _poset(text: str, n_max: int | None = None) -> Any:
    return elaborate(parse(text), n_max=n_max)


def _cmd_eval(ctx: _Context) -> dict[str, Any]:
    expr = parse(ctx.args.expr)
    poset = elaborate(expr)
    return {
        "expr": canonical_text(expr),
        "size": poset.size,
        "height": poset.height(),
        "has_hat0": poset.has_hat0(),
        "has_hat1": poset.has_hat1(),
        "poset": poset.to_dict(),
    }


def _cmd_e(ctx: _Context) -> dict[str, Any]:
    n_max = ctx.args.n_max

    def compute() -> dict[str, Any]:
        return e_of(_poset(ctx.args.expr, n_max), n_max=n_max).to_dict()

    return ctx.cached(ctx.args.expr, "e", (n_max,), compute, labelled=True)


def _cmd_extremal(ctx: _Context) -> dict[str, Any]:
    function = la_n if ctx.args.command == "la" else lambda_n
    args = ctx.args

    def compute() -> dict[str, Any]:
        result = function(
            _poset(args.expr), args.n, budget=ctx.budget, all_maximizers=args.all_maximizers
        )
        return result.to_dict()

    return ctx.cached(args.expr, args.command, (args.n, args.all_maximizers), compute)


def _cmd_lbound(ctx: _Context) -> dict[str, Any]:
    args = ctx.args

    def compute() -> dict[str, Any]:
        pattern = _poset(args.expr, args.n_max)
        bound = args.bound if args.bound is not None else e_of(pattern, n_max=args.n_max).value
        verdict = check_bounded(pattern, args.n, args.m, bound, ctx.budget)
        payload = {"m": args.m, **verdict.to_dict()}
        if args.m > 0:
            previous = check_bounded(pattern, args.n, args.m - 1, bound, ctx.budget)
            payload["previous_m"] = {"m": args.m - 1, **previous.to_dict()}
        return payload

    bound = None if args.bound is None else str(args.bound)
    return ctx.cached(args.expr, "lbound", (args.n, args.m, bound, args.n_max), compute)


def _cmd_intervals(ctx: _Context) -> dict[str, Any]:
    n_max = ctx.args.n_max

    def compute() -> dict[str, Any]:
        poset = _poset(ctx.args.expr, n_max)
        records = interval_records(poset, n_max=n_max)
        return {
            "labels": list(poset.labels),
            "intervals": [record.to_dict() for record in records],
            "large": [list(record.endpoints) for record in records if record.is_large],
        }

    return ctx.cached(ctx.args.expr, "intervals", (n_max,), compute, labelled=True)


def _cmd_embed(ctx: _Context) -> dict[str, Any]:
    pattern = _poset(ctx.args.pattern)
    if ctx.args.family is not None:
        host_name = str(ctx.args.family)
        embedding = family_contains(Family.load(ctx.args.family), pattern)
    else:
        host_name = canonical_text(parse(ctx.args.host))
        embedding = contains_subposet(_poset(ctx.args.host), pattern)
    return {
        "host": host_name,
        "contained": embedding is not None,
        "embedding": None if embedding is None else embedding.to_dict(),
    }


def _cmd_scan(ctx: _Context) -> dict[str, Any]:
    args = ctx.args
    pattern = _poset(args.expr)
    if args.command == "scan-lower":
        rows = scan_lower_lbound(pattern, args.beta, args.n, ctx.budget)
        ratio = {"beta": format_rational(args.beta)}
    else:
        rows = scan_upper_lbound(pattern, args.alpha, args.n, ctx.budget)
        ratio = {"alpha": format_rational(args.alpha)}
    return {**ratio, "rows": [row.to_dict() for row in rows]}


def _suite_names(names: Sequence[str]) -> list[str]:
    return list(names) or sorted(SUITES.registered_names())


def _cmd_verify(ctx: _Context) -> dict[str, Any]:
    reports = [run_suite(name, ctx.budget) for name in _suite_names(ctx.args.suites)]
    return {
        "passed": all(report.passed for report in reports),
        "suites": [report.to_dict() for report in reports],
    }


def _cmd_report(ctx: _Context) -> dict[str, Any]:
    suites = [run_suite(name, ctx.budget) for name in _suite_names(())]
    evidence = {}
    for text, poset in (
        ("chain(2)", chain(2)),
        ("v(2)", vee(2)),
        ("butterfly", butterfly()),
    ):
        evidence[text] = [row.to_dict() for row in pi_evidence(poset, [2, 3, 4], ctx.budget)]
    payload = {
        "version": VERSION,
        "passed": all(report.passed for report in suites),
        "suites": [report.to_dict() for report in suites],
        "pi_evidence": evidence,
    }
    try:
        ctx.args.out.parent.mkdir(parents=True, exist_ok=True)
        ctx.args.out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        msg = f"Cannot write the report {ctx.args.out}: {exc}"
        raise _UsageError(msg) from exc
    logger.info(f"Report written to {ctx.args.out}")
    return {"out": str(ctx.args.out), "passed": payload["passed"]}


def _cmd_compact_cache(ctx: _Context) -> dict[str, Any]:
    if not ctx.cache.enabled:
        msg = f"No cache directory: use --cache-dir or set ${CACHE_DIR_ENV}"
        raise _UsageError(msg)
    before, after = ctx.cache.compact()
    return {"path": str(ctx.cache.path), "entries_before": before, "entries_after": after}


_COMMANDS: dict[str, Callable[[_Context], dict[str, Any]]] = {
    "eval": _cmd_eval,
    "e": _cmd_e,
    "la": _cmd_extremal,
    "lambda": _cmd_extremal,
    "lbound": _cmd_lbound,
    "intervals": _cmd_intervals,
    "embed": _cmd_embed,
    "scan-lower": _cmd_scan,
    "scan-upper": _cmd_scan,
    "verify": _cmd_verify,
    "report": _cmd_report,
    "compact-cache": _cmd_compact_cache,
}


##################
#     Output     #
##################


def _is_family(value: Any) -> bool:
    return isinstance(value, dict) and set(value) == {"n", "sets"}


def _format_family(value: dict[str, Any]) -> str:
    sets = ", ".join("{" + ",".join(str(x) for x in elements) + "}" for elements in value["sets"])
    return f"[n={value['n']}] {sets}"


def _pretty_lines(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if _is_family(item):
                lines.append(f"{pad}{key}: {_format_family(item)}")
            elif isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_pretty_lines(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {item}")
    elif isinstance(value, list):
        for item in value:
            if _is_family(item):
                lines.append(f"{pad}- {_format_family(item)}")
            elif isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_pretty_lines(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def render(payload: dict[str, Any], as_json: bool) -> str:
    r"""Render a command result as JSON or as an indented listing."""
    if as_json:
        return dump_json(payload)
    return "\n".join(_pretty_lines(payload))


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:  # noqa: PLR2004
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def run(argv: Sequence[str] | None = None) -> int:
    r"""Run the command line and return the exit status.

    Args:
        argv: Specifies the arguments without the program name.
            ``None`` means ``sys.argv[1:]``.

    Returns:
        0 on success, 1 on a domain error or a failed verification,
        2 on a usage error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _configure_logging(args.verbose)
    try:
        payload = _COMMANDS[args.command](_Context(args))
    except PosetLabError as exc:
        _print_error(exc, args.json)
        return 1
    except (_UsageError, ValueError) as exc:
        _print_error(exc, args.json)
        return 2
    print(render(payload, args.json))  # noqa: T201
    if args.command in {"verify", "report"} and not payload["passed"]:
        return 1
    return 0


def _print_error(exc: Exception, as_json: bool) -> None:
    if as_json:
        print(dump_json({"error": type(exc).__name__, "message": str(exc)}))  # noqa: T201
    else:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)  # noqa: T201


def main() -> None:
    r"""Run the command line and exit with its status."""
    sys.exit(run())

