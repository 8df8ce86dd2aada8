"""Command-line entry point: generate, replay, compare, oracle-check, solve, mc-test, size."""

from __future__ import annotations

import argparse
import logging
from collections.abc import Callable, Sequence
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler

from tailcache._version import __version__
from tailcache.cli.formatter import ReportFormatter
from tailcache.exceptions import ConfigurationError, TailCacheError
from tailcache.metrics import GIB, bytes_to_gib, capacity_blocks_for_memory, kv_cache_bytes
from tailcache.models import (
    CachingMode,
    LatencyModel,
    OracleBounds,
    PolicyConfig,
    PolicyFamily,
    SyntheticParams,
    Trace,
)
from tailcache.oracle import load_instance, save_solution, solve_hindsight_tel
from tailcache.sim import (
    compare,
    load_trace,
    monte_carlo_policy_test,
    oracle_check,
    plot_comparison,
    policy_for_model,
    replay,
    write_comparison_csv,
    write_improvements_csv,
    write_json,
    write_records_csv,
)
from tailcache.utils import friendly_error
from tailcache.workload import (
    fit_prompt_distribution,
    generate_synthetic,
    load_conversations,
    load_policy_config,
    load_run_config,
    load_synthetic_params,
    sharegpt_preset,
    wildchat_like_preset,
    write_trace,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 1
EXIT_ERROR = 2

PRESETS: dict[str, Callable[..., SyntheticParams]] = {
    "sharegpt": sharegpt_preset,
    "wildchat": wildchat_like_preset,
}

_FAMILIES = [family.value for family in PolicyFamily]
_MODES = [mode.value for mode in CachingMode]


def setup_logging(level: str) -> None:
    """Route all library logging through a Rich handler on stderr."""
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True)],
        force=True,
    )


def _workload(args: argparse.Namespace) -> SyntheticParams:
    """SyntheticParams from --config or --preset, with --seed/--max-events applied."""
    if args.config is not None:
        params = load_synthetic_params(args.config)
    else:
        params = PRESETS[args.preset]()
    updates: dict[str, object] = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.max_events is not None:
        updates["max_events"] = args.max_events
    return params.model_copy(update=updates) if updates else params


def cmd_generate(args: argparse.Namespace, fmt: ReportFormatter) -> int:
    params = _workload(args)
    trace = generate_synthetic(params)
    path = write_trace(trace, args.output)
    fmt.print_trace_summary(trace, title=f"Synthetic trace (seed {params.seed})")
    fmt.print_written([path])
    return EXIT_OK


def _replay_policy(args: argparse.Namespace, model: LatencyModel, trace: Trace) -> PolicyConfig:
    """PolicyConfig from --policy, or from --family and its flags."""
    if args.policy is not None:
        policy = load_policy_config(args.policy)
        if args.xi_ms is not None:
            policy = policy.model_copy(update={"xi_blocks": model.xi_blocks(args.xi_ms)})
        return policy

    values: dict[str, object] = {
        "family": PolicyFamily(args.family),
        "xi_blocks": model.xi_blocks(args.xi_ms or 0.0),
        "q_hat_blocks": args.q_hat,
        "caching_mode": CachingMode(args.mode),
        "cache_threshold_blocks": args.cache_threshold,
    }
    if values["family"] == PolicyFamily.ETLRU:
        if args.death_rate is None:
            raise ConfigurationError(
                "ETLRU needs a conversation death rate",
                "death_rate",
                suggestion="Pass --death-rate",
            )
        values.update(
            death_rate=args.death_rate,
            nominal_turn_rate=args.turn_rate,
            prompt_dist=fit_prompt_distribution(trace),
        )
    return PolicyConfig.model_validate(values)


def cmd_replay(args: argparse.Namespace, fmt: ReportFormatter) -> int:
    model = LatencyModel(alpha_ms_per_block=args.alpha, block_size=args.block_size)
    trace = load_conversations(args.trace, model.block_size, max_turns=args.max_turns)
    policy = _replay_policy(args, model, trace)
    result = replay(
        trace,
        policy,
        args.capacity,
        model,
        xi_ms=args.xi_ms,
        slo_ms=args.slo_ms or (200.0,),
    )
    output = Path(args.output_dir)
    written = [
        write_records_csv(result.records, output / "records.csv"),
        write_json(result.report, output / "report.json"),
    ]
    fmt.print_report(result.report, title=f"{policy.name}, C={args.capacity} blocks")
    fmt.print_written(written)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, fmt: ReportFormatter) -> int:
    config = load_run_config(args.config)
    updates: dict[str, object] = {}
    if args.capacity:
        updates["capacities"] = args.capacity
    if args.xi_ms:
        updates["xi_ms"] = args.xi_ms
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.max_turns is not None:
        updates["max_turns"] = args.max_turns
    if args.output_dir is not None:
        updates["output_dir"] = Path(args.output_dir)
    if args.charts:
        updates["charts"] = True
    if updates:
        config = config.model_copy(update=updates)

    trace = load_trace(config)
    table = compare(config, trace)
    output = config.output_dir
    written = [
        write_comparison_csv(table, output / "comparison.csv"),
        write_improvements_csv(table, output / "improvements.csv"),
        write_json(table, output / "comparison.json"),
    ]
    if config.charts:
        written.extend(plot_comparison(table, output / "charts"))
    fmt.print_trace_summary(trace)
    fmt.print_comparison(table)
    fmt.print_written(written)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace, fmt: ReportFormatter) -> int:
    bounds = OracleBounds(
        max_conversations=args.max_conversations,
        max_steps=args.max_steps,
        max_capacity=args.max_capacity,
        max_turn_blocks=args.max_turn_blocks,
        max_xi_blocks=args.max_xi_blocks,
    )
    report = oracle_check(args.count, bounds, seed=args.seed, mode=CachingMode(args.mode))
    fmt.print_oracle_report(report)
    if args.output is not None:
        fmt.print_written([write_json(report, args.output)])
    if args.assert_ and not report.is_clean:
        return EXIT_ASSERTION_FAILED
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, fmt: ReportFormatter) -> int:
    instance = load_instance(args.instance)
    solution = solve_hindsight_tel(instance)
    fmt.print_result(
        f"optimal TEL: {solution.tel_blocks} blocks over {instance.num_steps} arrivals\n"
        f"schedule: {solution.schedule}",
        title="Hindsight optimum",
    )
    if args.output is not None:
        fmt.print_written([save_solution(solution, args.output)])
    return EXIT_OK


def cmd_mc_test(args: argparse.Namespace, fmt: ReportFormatter) -> int:
    params = _workload(args)
    policies = [
        policy_for_model(PolicyFamily(family), params, args.xi_blocks) for family in args.policies
    ]
    report = monte_carlo_policy_test(
        params,
        policies,
        args.capacity,
        args.xi_blocks,
        args.runs,
        reference=args.reference,
    )
    fmt.print_monte_carlo(report)
    if args.output is not None:
        fmt.print_written([write_json(report, args.output)])
    if args.assert_ and not report.all_hold:
        return EXIT_ASSERTION_FAILED
    return EXIT_OK


def cmd_size(args: argparse.Namespace, fmt: ReportFormatter) -> int:
    per_context = kv_cache_bytes(args.tokens)
    blocks = capacity_blocks_for_memory(int(args.memory_gib * GIB), args.block_size)
    fmt.print_result(
        f"{args.tokens:,} tokens of KV cache: {per_context:,} bytes "
        f"({bytes_to_gib(per_context):.4f} GiB)\n"
        f"{args.memory_gib:g} GiB holds {blocks:,} blocks of {args.block_size} tokens",
        title="KV sizing (vicuna-7b)",
    )
    return EXIT_OK


def _add_workload_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", type=Path, help="SyntheticParams JSON file")
    source.add_argument(
        "--preset", choices=sorted(PRESETS), default="sharegpt", help="Built-in workload"
    )
    parser.add_argument("--seed", type=int, default=None, help="Override the root seed")
    parser.add_argument("--max-events", type=int, default=None, help="Override the turn count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailcache",
        description="Tail-latency-aware KV-cache eviction simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
        help="Logging level (default: WARNING)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="Write a synthetic trace")
    _add_workload_arguments(generate)
    generate.add_argument("-o", "--output", type=Path, required=True, help="NDJSON trace path")
    generate.set_defaults(handler=cmd_generate)

    replay_cmd = commands.add_parser("replay", help="Replay a trace through one policy")
    replay_cmd.add_argument("trace", type=Path, help="Canonical NDJSON trace")
    replay_cmd.add_argument("--capacity", type=int, required=True, help="Cache size in blocks")
    policy_source = replay_cmd.add_mutually_exclusive_group()
    policy_source.add_argument("--policy", type=Path, help="PolicyConfig JSON file")
    policy_source.add_argument("--family", choices=_FAMILIES, default=PolicyFamily.LRU.value)
    replay_cmd.add_argument("--xi-ms", type=float, default=None, help="TEL threshold (ms)")
    replay_cmd.add_argument("--q-hat", type=int, default=None, help="Next-prompt estimate")
    replay_cmd.add_argument("--mode", choices=_MODES, default=CachingMode.OPTIONAL.value)
    replay_cmd.add_argument("--cache-threshold", type=int, default=1024)
    replay_cmd.add_argument("--death-rate", type=float, default=None, help="mu for ETLRU")
    replay_cmd.add_argument("--turn-rate", type=float, default=1.0, help="lambda-bar for ETLRU")
    replay_cmd.add_argument("--alpha", type=float, default=1.0, help="ms per uncached block")
    replay_cmd.add_argument("--block-size", type=int, default=1, help="Tokens per block")
    replay_cmd.add_argument("--max-turns", type=int, default=None)
    replay_cmd.add_argument("--slo-ms", type=float, action="append", help="Repeatable")
    replay_cmd.add_argument("--output-dir", default="results")
    replay_cmd.set_defaults(handler=cmd_replay)

    compare_cmd = commands.add_parser("compare", help="Policy x capacity x threshold grid")
    compare_cmd.add_argument("config", type=Path, help="Run configuration JSON")
    compare_cmd.add_argument("--capacity", type=int, action="append", help="Repeatable")
    compare_cmd.add_argument("--xi-ms", type=float, action="append", help="Repeatable")
    compare_cmd.add_argument("--seed", type=int, default=None)
    compare_cmd.add_argument("--max-turns", type=int, default=None)
    compare_cmd.add_argument("--output-dir", default=None)
    compare_cmd.add_argument("--charts", action="store_true", help="Write SVG charts")
    compare_cmd.set_defaults(handler=cmd_compare)

    oracle_cmd = commands.add_parser(
        "oracle-check", help="Certify Tail-Optimized Belady on random micro-instances"
    )
    defaults = OracleBounds()
    oracle_cmd.add_argument("--count", type=int, default=200)
    oracle_cmd.add_argument("--seed", type=int, default=0)
    oracle_cmd.add_argument("--mode", choices=_MODES, default=CachingMode.OPTIONAL.value)
    oracle_cmd.add_argument("--max-conversations", type=int, default=defaults.max_conversations)
    oracle_cmd.add_argument("--max-steps", type=int, default=defaults.max_steps)
    oracle_cmd.add_argument("--max-capacity", type=int, default=defaults.max_capacity)
    oracle_cmd.add_argument("--max-turn-blocks", type=int, default=defaults.max_turn_blocks)
    oracle_cmd.add_argument("--max-xi-blocks", type=int, default=defaults.max_xi_blocks)
    oracle_cmd.add_argument("--output", type=Path, default=None, help="Report JSON path")
    oracle_cmd.add_argument("--assert", dest="assert_", action="store_true")
    oracle_cmd.set_defaults(handler=cmd_oracle_check)

    solve_cmd = commands.add_parser("solve", help="Exact hindsight optimum of one instance")
    solve_cmd.add_argument("instance", type=Path, help="HindsightInstance JSON")
    solve_cmd.add_argument("-o", "--output", type=Path, default=None, help="Solution JSON path")
    solve_cmd.set_defaults(handler=cmd_solve)

    mc_cmd = commands.add_parser("mc-test", help="Paired Monte-Carlo TEL comparison")
    _add_workload_arguments(mc_cmd)
    mc_cmd.add_argument("--capacity", type=int, required=True)
    mc_cmd.add_argument("--xi-blocks", type=int, required=True)
    mc_cmd.add_argument("--runs", type=int, default=1000)
    mc_cmd.add_argument(
        "--policies",
        nargs="+",
        choices=_FAMILIES,
        default=[
            PolicyFamily.ETLRU.value,
            PolicyFamily.LRU.value,
            PolicyFamily.THRESHOLD_LRU.value,
        ],
    )
    mc_cmd.add_argument("--reference", default=None, help="Defaults to the first policy")
    mc_cmd.add_argument("--output", type=Path, default=None, help="Report JSON path")
    mc_cmd.add_argument("--assert", dest="assert_", action="store_true")
    mc_cmd.set_defaults(handler=cmd_mc_test)

    size_cmd = commands.add_parser("size", help="KV-cache bytes and block capacity")
    size_cmd.add_argument("--tokens", type=int, default=10_000)
    size_cmd.add_argument("--memory-gib", type=float, default=40.0)
    size_cmd.add_argument("--block-size", type=int, default=16)
    size_cmd.set_defaults(handler=cmd_size)

    return parser


def main(argv: Sequence[str] | None = None, *, console: Console | None = None) -> int:
    """Run one command and return its exit status.

    0 on success, 1 when an --assert check fails, 2 on any error.
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    fmt = ReportFormatter(console)

    try:
        return int(args.handler(args, fmt))
    except TailCacheError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        fmt.print_error(friendly_error(e))
        return EXIT_ERROR
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}")
        fmt.print_error(friendly_error(e))
        return EXIT_ERROR
