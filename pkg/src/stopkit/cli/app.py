"""Command line front end: every library capability as a subcommand."""

import argparse
import os
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from .. import __version__
from ..config import StopkitConfig, default_config
from ..exceptions import InvalidCutoffsError, ManifestError
from ..gm import gm_single_k_asymptote
from ..probability import outcome_table
from ..simulation import compare_strategies, compare_to_prediction, simulate
from ..strategy import (
    StrategyKind,
    StrategySpec,
    cutoffs_for,
    optimal_single_k,
    optimize_cutoffs,
)
from ..types import CutoffVector
from .manifest import load_manifest
from .output import read_cutoff_file, resolve_output, table_csv, to_json, write_text
from .plots import FIGURES, plot_data

logger = logging.getLogger("stopkit.cli")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_CONVERGED = 2
EXIT_DISAGREEMENT = 3

DEFAULT_COMPARE = ("naive", "gm", "optimal", "approx")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _config(args: argparse.Namespace) -> StopkitConfig:
    shared = default_config()
    budget = getattr(args, "max_iterations", None)
    return StopkitConfig(
        kv=shared.kv,
        output_dir=shared.output_dir,
        workers=args.workers,
        chunk_size=args.chunk_size,
        max_iterations=shared.max_iterations if budget is None else budget,
    )


def _emit(args: argparse.Namespace, config: StopkitConfig, text: str) -> None:
    path = resolve_output(args.output, config.output_dir)
    write_text(path, text)
    if path is not None:
        logger.info(f"wrote {path}")


def _spec(name: str, n: Optional[int], args: argparse.Namespace) -> StrategySpec:
    kind = StrategyKind.parse(name)
    if kind is StrategyKind.EXPLICIT:
        if not args.k_file:
            raise InvalidCutoffsError("the explicit strategy needs --k-file")
        return StrategySpec.explicit(read_cutoff_file(args.k_file))
    if n is None:
        raise UsageError("-n is required for this strategy")
    return StrategySpec(kind, n, k=args.k)


def _resolve_cutoffs(
    args: argparse.Namespace, config: StopkitConfig
) -> tuple[str, CutoffVector]:
    if args.k_file and args.strategy in (None, "explicit"):
        cutoffs = read_cutoff_file(args.k_file)
        if args.n is not None and args.n != cutoffs.n:
            raise InvalidCutoffsError(
                f"-n {args.n} does not match the {cutoffs.n} cutoffs in {args.k_file}"
            )
        return "explicit", cutoffs
    if args.strategy is None:
        raise UsageError("give a strategy or --k-file")
    spec = _spec(args.strategy, args.n, args)
    return spec.label, cutoffs_for(spec, config)


def cmd_cutoffs(args: argparse.Namespace, config: StopkitConfig) -> int:
    label, cutoffs = _resolve_cutoffs(args, config)
    if args.format == "json":
        text = to_json({"strategy": label, "n": cutoffs.n, "cutoffs": list(cutoffs)})
    else:
        text = table_csv(
            ("r", "k"), [(r, k) for r, k in enumerate(cutoffs, start=1)], display=("k",)
        )
    _emit(args, config, text)
    return EXIT_OK


def cmd_probs(args: argparse.Namespace, config: StopkitConfig) -> int:
    label, cutoffs = _resolve_cutoffs(args, config)
    table = outcome_table(cutoffs.n, cutoffs)
    if args.format == "json":
        text = to_json(
            {
                "strategy": label,
                "n": table.n,
                "cutoffs": list(cutoffs),
                "rows": table.to_rows(),
                "pw_total": table.pw_total,
                "pfp_total": table.pfp_total,
                "pfn_total": table.pfn_total,
                "notes": list(cutoffs.notes),
            }
        )
    else:
        text = table_csv(
            ("r", "pw", "pfp", "pfn", "pc"),
            [(row.r, row.pw, row.pfp, row.pfn, row.pc) for row in table.rows],
            display=("pw", "pfp", "pfn", "pc"),
        )
    _emit(args, config, text)
    return EXIT_OK


def _parse_init(value: Optional[str]) -> Optional[list[float]]:
    if value is None:
        return None
    if not os.path.exists(value):
        try:
            return [float(v) for v in value.split(",") if v.strip()]
        except ValueError:
            raise InvalidCutoffsError(f"bad --init list {value!r}") from None
    return list(read_cutoff_file(value, permissive=True))


def cmd_optimize(args: argparse.Namespace, config: StopkitConfig) -> int:
    if args.n is None:
        raise UsageError("-n is required")
    result = optimize_cutoffs(
        args.n,
        init=_parse_init(args.init),
        tol=args.tol,
        monotone=args.monotone,
        config=config,
    )
    _emit(args, config, to_json(result.to_dict()))
    if args.cutoffs_output:
        rows = [(r, k) for r, k in enumerate(result.cutoffs, start=1)]
        write_text(
            resolve_output(args.cutoffs_output, config.output_dir),
            table_csv(("r", "k"), rows, display=("k",)),
        )
    if not result.converged:
        logger.error(
            f"optimizer did not converge for n={args.n} "
            f"(gradient norm {result.gradient_norm:.3e})"
        )
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _require_seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        raise UsageError("--seed is required; simulations never pick a seed on their own")
    return args.seed


def cmd_simulate(args: argparse.Namespace, config: StopkitConfig) -> int:
    seed = _require_seed(args)
    label, cutoffs = _resolve_cutoffs(args, config)
    tally = simulate(cutoffs, args.runs, seed, config)
    tally.strategy = label
    report = compare_to_prediction(tally, outcome_table(cutoffs.n, cutoffs))
    if args.format == "json":
        text = to_json({"tally": tally.to_dict(), "report": report.to_dict()})
    else:
        text = report.to_csv()
    _emit(args, config, text)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, config: StopkitConfig) -> int:
    seed = _require_seed(args)
    if args.n is None:
        raise UsageError("-n is required")
    specs = [_spec(name, args.n, args) for name in args.strategies]
    reports = compare_strategies(specs, args.n, args.runs, seed, config)

    if args.format == "json":
        text = to_json([report.to_dict() for report in reports.values()])
    else:
        parts = [report.to_csv() for report in reports.values()]
        text = parts[0] + "".join(part.split("\n", 1)[1] for part in parts[1:])
    _emit(args, config, text)

    for label, report in reports.items():
        logger.info(
            f"{label}: predicted {report.predicted_win_total:.4f} "
            f"realized {report.realized_win_total:.4f} max|z| {report.max_abs_z:.2f}"
        )
    failing = [label for label, r in reports.items() if not r.agrees(args.threshold)]
    if failing:
        logger.warning(f"|z| above {args.threshold} for {', '.join(failing)}")
        if args.strict:
            return EXIT_DISAGREEMENT
    return EXIT_OK


def cmd_asymptote(args: argparse.Namespace, config: StopkitConfig) -> int:
    asymptote = gm_single_k_asymptote()
    k, pw = optimal_single_k(args.check_n)
    payload = {
        "mu": asymptote.mu,
        "value": asymptote.value,
        "series_terms": asymptote.terms,
        "last_term": asymptote.last_term,
        "single_k_check": {"n": args.check_n, "k": k, "pw": pw},
    }
    _emit(args, config, to_json(payload))
    return EXIT_OK


def cmd_plot_data(args: argparse.Namespace, config: StopkitConfig) -> int:
    if args.n is None:
        raise UsageError("-n is required")
    specs = [_spec(name, args.n, args) for name in args.strategies]
    rows = plot_data(args.figure, args.n, specs, config, points=args.points)
    if args.format == "json":
        text = to_json([{"series": s, "x": x, "y": y} for s, x, y in rows])
    else:
        text = table_csv(("series", "x", "y"), rows)
    _emit(args, config, text)
    return EXIT_OK


def cmd_run(args: argparse.Namespace, config: StopkitConfig) -> int:
    manifest = load_manifest(args.manifest)
    logger.info(f"running {len(manifest.jobs)} jobs from {args.manifest}")

    def run_job(argv: list[str]) -> int:
        logger.debug(f"job: stopkit {' '.join(argv)}")
        return _dispatch(argv)

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        shared = ["--workers", str(args.workers), "--chunk-size", str(args.chunk_size)]
        codes = list(pool.map(run_job, [job.to_argv() + shared for job in manifest.jobs]))
    return max(codes, default=EXIT_OK)


def _common(parser: argparse.ArgumentParser, fmt: bool = True) -> None:
    parser.add_argument("-o", "--output", default=None, help="output file, '-' for stdout")
    if fmt:
        parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--workers", type=int, default=1, help="threads for sharded work")
    parser.add_argument("--chunk-size", type=int, default=16384, help="runs per shard")


def _strategy_args(parser: argparse.ArgumentParser, positional: bool = True) -> None:
    if positional:
        parser.add_argument("strategy", nargs="?", default=None)
    parser.add_argument("-n", type=int, default=None)
    parser.add_argument("--k", type=float, default=None, help="cutoff for single-k")
    parser.add_argument("--k-file", default=None, help="explicit cutoffs, one per line")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stopkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0)
    verbosity.add_argument("-q", "--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cutoffs", help="cutoff vector of a strategy")
    _strategy_args(p)
    _common(p)
    p.set_defaults(handler=cmd_cutoffs)

    p = sub.add_parser("probs", help="per-round W/FP/FN/C probabilities")
    _strategy_args(p)
    _common(p)
    p.set_defaults(handler=cmd_probs)

    p = sub.add_parser("optimize", help="maximize the total win probability")
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--init", default=None, help="comma list or cutoff file")
    p.add_argument("--monotone", choices=("enforce", "emergent"), default="enforce")
    p.add_argument(
        "--max-iterations", type=int, default=None, help="objective evaluation budget"
    )
    p.add_argument("--cutoffs-output", default=None)
    _common(p, fmt=False)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(handler=cmd_optimize)

    for name, handler in (("simulate", cmd_simulate), ("compare", cmd_compare)):
        p = sub.add_parser(name, help=f"{name} against the closed forms")
        _strategy_args(p, positional=name == "simulate")
        if name == "compare":
            p.add_argument("--strategies", nargs="+", default=list(DEFAULT_COMPARE))
            p.add_argument("--strict", action="store_true")
            p.add_argument("--threshold", type=float, default=4.0)
        p.add_argument("--runs", type=int, default=1_000_000)
        p.add_argument("--seed", type=int, default=None)
        _common(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("asymptote", help="large-n single-k limit")
    p.add_argument("--check-n", type=int, default=10_000)
    _common(p, fmt=False)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(handler=cmd_asymptote)

    p = sub.add_parser("plot-data", help="tidy CSV behind a chart")
    p.add_argument("figure", choices=sorted(FIGURES))
    _strategy_args(p, positional=False)
    p.add_argument("--strategies", nargs="+", default=list(DEFAULT_COMPARE))
    p.add_argument("--points", type=int, default=None)
    _common(p)
    p.set_defaults(handler=cmd_plot_data)

    p = sub.add_parser("run", help="execute a TOML manifest")
    p.add_argument("manifest")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--chunk-size", type=int, default=16384)
    p.set_defaults(handler=cmd_run)

    return parser


def _run(args: argparse.Namespace) -> int:
    try:
        return args.handler(args, _config(args))
    except (InvalidCutoffsError, ManifestError, ValueError, OSError) as exc:
        logger.error(str(exc))
        return EXIT_INVALID


def _dispatch(argv: Sequence[str]) -> int:
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        logger.error(str(exc))
        return EXIT_INVALID
    return _run(args)


def _log_level(args: argparse.Namespace) -> int:
    if args.quiet:
        return logging.ERROR
    if args.verbose >= 2:
        return logging.DEBUG
    return logging.INFO if args.verbose else logging.WARNING


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(
        level=_log_level(args), format="%(levelname)s %(name)s: %(message)s"
    )
    return _run(args)
