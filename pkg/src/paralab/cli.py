"""Command-line front end.

Subcommands mirror the library: prove, check-proof, find-model,
check-model, enumerate, experiment, export-tptp.  Exit codes separate
"definitively yes" (0) from "definitively no" (1) from "ran out of
budget" (2); anything wrong with the invocation itself is 64.

The PARALAB_MAX_SECONDS environment variable caps every time budget,
including explicit --max-seconds values larger than it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .experiments import EXPERIMENTS, ExperimentConfig, experiment2
from .formulas import Formula, parse
from .models import FiniteModel, check_model, model_from_json, model_to_json
from .prover import Exhausted as ProverExhausted
from .prover import ProverConfig, check_proof, derive, parse_transcript
from .search import Exhausted as SearchExhausted
from .search import SearchConfig, enumerate_models, find_model
from .theories import Theory, theory_from_name
from .tptp import export_tptp

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse, but usage failures exit 64 instead of 2."""

    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    top = _Parser(prog="paralab", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", metavar="command")

    def common_search(p):
        p.add_argument("--max-size", type=int, default=None)
        p.add_argument("--min-size", type=int, default=None)
        p.add_argument("--max-seconds", type=float, default=None)
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("prove", help="derive a goal schema from a theory")
    p.add_argument("--theory", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--max-generated", type=int, default=None)
    p.add_argument("--max-seconds", type=float, default=None)

    p = sub.add_parser("check-proof", help="validate a proof transcript")
    p.add_argument("--theory", required=True)
    p.add_argument("transcript", help="path to a transcript, or - for stdin")

    p = sub.add_parser("find-model", help="first model of a theory in a size range")
    p.add_argument("--theory", required=True)
    common_search(p)

    p = sub.add_parser("check-model", help="check a model file against a theory")
    p.add_argument("--theory", required=True)
    p.add_argument("--model", required=True, help="path to an interchange-format model")

    p = sub.add_parser("enumerate", help="all models of a theory, one JSON per line")
    p.add_argument("--theory", required=True)
    common_search(p)
    p.add_argument("--enumerate-all", action="store_true",
                   help="accepted for symmetry; enumeration always walks every model")

    p = sub.add_parser("experiment", help="run one experiment of the battery")
    p.add_argument("id", choices=sorted(EXPERIMENTS))
    p.add_argument("--theory", default=None)
    common_search(p)
    p.add_argument("--max-generated", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("export-tptp", help="emit the theory as a TPTP FOF problem")
    p.add_argument("--theory", required=True)
    p.add_argument("--goal", default=None)
    p.add_argument("--negate-conjecture", action="store_true")

    return top


# ---------------------------------------------------------------------------
# option plumbing


def _env_cap() -> Optional[float]:
    raw = os.environ.get("PARALAB_MAX_SECONDS")
    if raw is None or raw == "":
        return None
    try:
        cap = float(raw)
    except ValueError:
        raise _UsageError(f"PARALAB_MAX_SECONDS is not a number: {raw!r}")
    if cap <= 0:
        raise _UsageError("PARALAB_MAX_SECONDS must be positive")
    return cap


def _capped_seconds(requested: Optional[float]) -> Optional[float]:
    cap = _env_cap()
    if requested is None:
        return cap
    return requested if cap is None else min(requested, cap)


def _theory(name: str) -> Theory:
    try:
        return theory_from_name(name)
    except (ValueError, KeyError) as exc:
        raise _UsageError(str(exc))


def _formula(text: str) -> Formula:
    try:
        return parse(text)
    except ValueError as exc:
        raise _UsageError(f"bad formula {text!r}: {exc}")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(str(exc))


def _search_config(args, default_max: int = 4) -> SearchConfig:
    try:
        return SearchConfig(
            min_size=args.min_size if args.min_size is not None else 1,
            max_size=args.max_size if args.max_size is not None else default_max,
            max_seconds=_capped_seconds(args.max_seconds),
            workers=args.workers,
        )
    except ValueError as exc:
        raise _UsageError(str(exc))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_prove(args) -> int:
    t = _theory(args.theory)
    goal = _formula(args.goal)
    try:
        cfg = ProverConfig(
            max_generated=args.max_generated if args.max_generated is not None else 1_000_000,
            max_seconds=_capped_seconds(args.max_seconds),
        )
    except ValueError as exc:
        raise _UsageError(str(exc))
    result = derive(t, goal, cfg)
    if isinstance(result, ProverExhausted):
        print(f"exhausted: {result.reason}", file=sys.stderr)
        print(json.dumps(result.stats.to_dict()), file=sys.stderr)
        if result.reason == "saturated" and result.stats.oversize == 0:
            # true saturation with nothing discarded: the goal is not derivable
            return EXIT_NO
        return EXIT_UNKNOWN
    print(result.transcript())
    return EXIT_OK


def _cmd_check_proof(args) -> int:
    t = _theory(args.theory)
    try:
        proof = parse_transcript(_read_text(args.transcript))
    except ValueError as exc:
        print(f"malformed transcript: {exc}", file=sys.stderr)
        return EXIT_NO
    res = check_proof(t, proof)
    if res.ok:
        print("valid")
        return EXIT_OK
    where = "" if res.line is None else f" at line {res.line + 1}"
    print(f"invalid{where}: {res.reason}")
    return EXIT_NO


def _cmd_find_model(args) -> int:
    t = _theory(args.theory)
    cfg = _search_config(args)
    result = find_model(t, (), cfg)
    if isinstance(result, FiniteModel):
        print(model_to_json(result))
        return EXIT_OK
    print(json.dumps(result.stats.to_dict()), file=sys.stderr)
    return EXIT_UNKNOWN if result.stats.timed_out else EXIT_NO


def _cmd_check_model(args) -> int:
    t = _theory(args.theory)
    try:
        m = model_from_json(_read_text(args.model))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise _UsageError(f"bad model file: {exc}")
    res = check_model(m, t)
    if res.ok:
        print("ok")
        return EXIT_OK
    for v in res.violations:
        print(v)
    print(f"{res.total_violations} violations")
    return EXIT_NO


def _cmd_enumerate(args) -> int:
    t = _theory(args.theory)
    base = _search_config(args, default_max=2)
    cfg = SearchConfig(
        min_size=base.min_size, max_size=base.max_size,
        max_seconds=base.max_seconds, workers=base.workers,
        enumerate_all=True,
    )
    from .search import SearchStats

    stats = SearchStats()
    for m in enumerate_models(t, cfg, stats):
        print(model_to_json(m))
    print(json.dumps(stats.to_dict()), file=sys.stderr)
    return EXIT_UNKNOWN if stats.timed_out else EXIT_OK


def _cmd_experiment(args) -> int:
    kwargs = {}
    if args.max_size is not None:
        kwargs["max_size"] = args.max_size
    if args.max_generated is not None:
        kwargs["max_generated"] = args.max_generated
    if args.seed is not None:
        kwargs["seed"] = args.seed
    capped = _capped_seconds(args.max_seconds)
    if capped is not None:
        kwargs["max_seconds"] = capped
    kwargs["workers"] = args.workers
    try:
        cfg = ExperimentConfig(**kwargs)
    except ValueError as exc:
        raise _UsageError(str(exc))

    runner = EXPERIMENTS[args.id]
    if runner is experiment2:
        if args.theory is not None:
            raise _UsageError("experiment 2 is pinned to c1+explosion")
        report = runner(cfg)
    elif args.theory is not None:
        _theory(args.theory)  # validate before launching a long run
        report = runner(cfg, theory_name=args.theory)
    else:
        report = runner(cfg)

    print(report.to_json())
    if report.verdict in ("Established", "Evidence"):
        return EXIT_OK
    if report.verdict == "Refuted":
        return EXIT_NO
    return EXIT_UNKNOWN


def _cmd_export_tptp(args) -> int:
    t = _theory(args.theory)
    goal = _formula(args.goal) if args.goal is not None else None
    if args.negate_conjecture and goal is None:
        raise _UsageError("--negate-conjecture requires --goal")
    sys.stdout.write(export_tptp(t, goal, negate=args.negate_conjecture))
    return EXIT_OK


_COMMANDS = {
    "prove": _cmd_prove,
    "check-proof": _cmd_check_proof,
    "find-model": _cmd_find_model,
    "check-model": _cmd_check_model,
    "enumerate": _cmd_enumerate,
    "experiment": _cmd_experiment,
    "export-tptp": _cmd_export_tptp,
}


def run(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required")
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"paralab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))
