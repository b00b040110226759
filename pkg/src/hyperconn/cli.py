"""Command line interface: ``hyperconn {sample,analyze,theory,run,scenario}``.

Exit codes: 0 success, 2 config/validation error, 3 every grid point
exhausted its rejection-sampling budget.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .harness import ExperimentConfig, run, scenario, write_results
from .harness.config import FORMATS
from .harness.runner import _json_safe, constant_size
from .model import Hypergraph, ModelSpec, ValidationError
from .sampling import RetryBudgetExceeded, RngStream, sample_model
from .structure import component_sizes, is_connected, isolated_nodes
from .theory import disconnect_upper_bound, isolated_sandwich, threshold_report

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SAMPLER = 3


def _load_json_arg(value: str):
    """Inline JSON if it looks like an object, otherwise a path ('-' for stdin)."""
    try:
        if value.lstrip().startswith("{"):
            return json.loads(value)
        if value == "-":
            return json.load(sys.stdin)
        return json.loads(Path(value).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read JSON from {value!r}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_sample(args) -> int:
    spec = ModelSpec.from_json(_load_json_arg(args.spec))
    try:
        h = sample_model(spec, RngStream(args.seed, args.stream), args.max_attempts)
    except RetryBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SAMPLER
    _emit(json.dumps(h.to_json()) + "\n", args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    h = Hypergraph.from_json(_load_json_arg(args.hypergraph))
    isolated = sorted(isolated_nodes(h))
    sizes = component_sizes(h)
    doc = {
        "n": h.n,
        "m": h.m,
        "connected": is_connected(h),
        "isolated_count": len(isolated),
        "isolated_nodes": isolated,
        "component_count": len(sizes),
        "component_sizes": sizes,
    }
    _emit(json.dumps(doc) + "\n", args.out)
    return EXIT_OK


def cmd_theory(args) -> int:
    spec = ModelSpec.from_json(_load_json_arg(args.spec))
    doc = threshold_report(spec).to_json()
    d = constant_size(spec)
    if d is not None and d >= 2:
        doc["disconnect_bound"] = disconnect_upper_bound(spec.n, spec.m, d)
    if spec.variant in ("intersection-graph", "shotgun", "regular-shotgun"):
        doc["isolated_sandwich"] = list(isolated_sandwich(spec))
    _emit(json.dumps(_json_safe(doc), indent=2) + "\n", args.out)
    return EXIT_OK


def _apply_run_flags(config: ExperimentConfig, args) -> None:
    if args.seed is not None:
        config.master_seed = args.seed
    if args.trials is not None:
        config.trials = args.trials
    if args.format is not None:
        config.format = args.format
    if args.out is not None:
        config.output_path = args.out
    config.__post_init__()


def _execute(config: ExperimentConfig, workers: int) -> int:
    summaries = run(config, workers=workers)
    text = write_results(summaries, config)
    if not config.output_path:
        sys.stdout.write(text)
    if all(s.error for s in summaries):
        return EXIT_SAMPLER
    return EXIT_OK


def cmd_run(args) -> int:
    config = ExperimentConfig.from_json(_load_json_arg(args.config))
    _apply_run_flags(config, args)
    return _execute(config, args.workers)


def _parse_override(item: str):
    key, sep, raw = item.partition("=")
    if not sep:
        raise ValidationError(f"override {item!r} is not key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    if isinstance(value, dict):
        value = {int(k): v for k, v in value.items()}
    return key, value


def cmd_scenario(args) -> int:
    overrides = dict(_parse_override(item) for item in args.set)
    config = scenario(args.name, overrides)
    _apply_run_flags(config, args)
    if not args.run:
        _emit(json.dumps(config.to_json(), indent=2) + "\n", None)
        return EXIT_OK
    return _execute(config, args.workers)


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=FORMATS, default=None)
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperconn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample one hypergraph as JSON")
    p.add_argument("spec", help="ModelSpec JSON (inline, file path, or '-')")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0, help="stream index")
    p.add_argument("--max-attempts", type=int, default=1000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("analyze", help="connectivity/isolation/components of a hypergraph JSON")
    p.add_argument("hypergraph", nargs="?", default="-")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("theory", help="closed-form thresholds for a ModelSpec")
    p.add_argument("spec")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("run", help="execute an experiment config")
    p.add_argument("config")
    _add_run_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("scenario", help="expand (and optionally run) a preset")
    p.add_argument("name")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override, e.g. n=4096 or c=[-3,0,3]")
    p.add_argument("--run", action="store_true")
    _add_run_flags(p)
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
