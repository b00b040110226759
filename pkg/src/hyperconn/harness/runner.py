"""Monte Carlo engine: per-trial sampling and analysis, ordered reduction."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .. import __version__
from ..model import ModelSpec
from ..sampling import RNG_ALGORITHM, RetryBudgetExceeded, RngStream, sample_model
from ..structure import summarize
from ..theory import (
    EXACT_BINOMIAL_MAX_N,
    disconnect_upper_bound,
    isolated_sandwich,
    threshold_report,
)
from .config import CSV_COLUMNS, ExperimentConfig, GridPoint
from .stats import RunningStats, wilson_ci

log = logging.getLogger(__name__)

SHOTGUN_VARIANTS = ("intersection-graph", "shotgun", "regular-shotgun")


@dataclass
class TrialSummary:
    scenario: str
    variant: str
    n: int
    m: int
    d_or_dist: str
    c_offset: float | None
    trials: int
    seed: int
    spec: dict
    connected_count: int | None = None
    connected_rate: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    isolated_mean: float | None = None
    isolated_variance: float | None = None
    no_isolated_count: int | None = None
    no_isolated_rate: float | None = None
    component_count_mean: float | None = None
    lambda_: float | None = None
    mu: float | None = None
    expected_isolated: float | None = None
    gap_bound: float | None = None
    disconnect_bound: float | None = None
    sandwich_low: float | None = None
    sandwich_high: float | None = None
    error: str | None = None

    def row(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lambda_")
        return out


def constant_size(spec: ModelSpec) -> int | None:
    """The common hyperedge size of a shotgun model with one size, if any."""
    if spec.variant == "regular-shotgun":
        return spec.d
    if spec.variant in SHOTGUN_VARIANTS:
        sizes = set(spec.profile.sizes) if spec.profile is not None else set(spec.dist.support())
        if len(sizes) == 1:
            return sizes.pop()
    return None


def theory_fields(spec: ModelSpec) -> dict:
    report = threshold_report(spec)
    out = {
        "lambda_": report.lambda_,
        "mu": report.mu,
        "expected_isolated": report.expected_isolated,
        "gap_bound": report.gap_bound,
    }
    d = constant_size(spec)
    if d is not None and d >= 2:
        out["disconnect_bound"] = disconnect_upper_bound(spec.n, spec.m, d)
    if spec.variant in SHOTGUN_VARIANTS:
        out["sandwich_low"], out["sandwich_high"] = isolated_sandwich(spec)
    return out


def run_trials(spec_json: dict, master_seed: int, start: int, stop: int, max_attempts: int):
    """Trials ``start..stop-1``; returns an (k, 3) int array of
    (connected, isolated count, component count) and an error message."""
    spec = ModelSpec.from_json(spec_json)
    rows = np.zeros((stop - start, 3), dtype=np.int64)
    for i, t in enumerate(range(start, stop)):
        try:
            h = sample_model(spec, RngStream(master_seed, t), max_attempts)
        except RetryBudgetExceeded as exc:
            return rows[:i], f"trial {t}: {exc}"
        s = summarize(h)
        rows[i] = (s.connected, s.isolated_count, s.component_count)
    return rows, None


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(trials / (4 * workers)))
    return [(a, min(a + size, trials)) for a in range(0, trials, size)]


def _summarize_point(point: GridPoint, config: ExperimentConfig, parts) -> TrialSummary:
    spec = point.spec
    summary = TrialSummary(
        scenario=point.scenario or config.name,
        variant=spec.variant,
        n=spec.n,
        m=spec.m,
        d_or_dist=spec.size_label(),
        c_offset=point.c_offset,
        trials=config.trials,
        seed=config.master_seed,
        spec=spec.to_json(),
        **theory_fields(spec),
    )
    connected = no_isolated = 0
    isolated = RunningStats()
    components = RunningStats()
    for rows, error in parts:
        for conn, iso, comp in rows.tolist():
            connected += conn
            no_isolated += iso == 0
            isolated.push(iso)
            components.push(comp)
        if error is not None:
            summary.error = error
            return summary
    summary.connected_count = connected
    summary.connected_rate = connected / config.trials
    summary.ci_low, summary.ci_high = wilson_ci(connected, config.trials, config.confidence)
    summary.isolated_mean = isolated.mean
    summary.isolated_variance = isolated.variance
    summary.no_isolated_count = no_isolated
    summary.no_isolated_rate = no_isolated / config.trials
    summary.component_count_mean = components.mean
    return summary


def run(config: ExperimentConfig, workers: int = 1) -> list[TrialSummary]:
    """One ``TrialSummary`` per grid point.

    Trial ``t`` of every grid point draws from ``RngStream(master_seed, t)``;
    chunk results are reduced in trial order, so output does not depend on
    ``workers``.  Retry-budget failures are recorded per point.
    """
    chunks = _chunks(config.trials, max(1, workers))
    jobs = [
        (p.spec.to_json(), config.master_seed, a, b, config.max_attempts)
        for p in config.points
        for a, b in chunks
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_trials, *zip(*jobs)))
    else:
        results = [run_trials(*job) for job in jobs]
    summaries = []
    for i, point in enumerate(config.points):
        parts = results[i * len(chunks):(i + 1) * len(chunks)]
        summary = _summarize_point(point, config, parts)
        if summary.error:
            log.warning("grid point %s failed: %s", point.spec.to_json(), summary.error)
        summaries.append(summary)
    return summaries


def metadata(config: ExperimentConfig) -> dict:
    return {
        "package_version": __version__,
        "rng_algorithm": RNG_ALGORITHM,
        "exact_binomial_max_n": EXACT_BINOMIAL_MAX_N,
        "master_seed": config.master_seed,
        "trials": config.trials,
        "confidence": config.confidence,
    }


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_csv(summaries: list[TrialSummary], columns=CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for s in summaries:
        row = s.row()
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def format_json(summaries: list[TrialSummary], config: ExperimentConfig) -> str:
    doc = {"metadata": metadata(config), "results": [s.row() for s in summaries]}
    return json.dumps(_json_safe(doc), indent=2) + "\n"


def render(summaries: list[TrialSummary], config: ExperimentConfig) -> str:
    if config.format == "json":
        return format_json(summaries, config)
    return format_csv(summaries, config.outputs)


def write_results(summaries: list[TrialSummary], config: ExperimentConfig) -> str:
    """Write to ``config.output_path`` when set; CSV output gets a
    ``.meta.json`` sidecar carrying the RNG metadata."""
    text = render(summaries, config)
    if config.output_path:
        with open(config.output_path, "w", newline="") as fh:
            fh.write(text)
        if config.format == "csv":
            with open(config.output_path + ".meta.json", "w") as fh:
                json.dump(metadata(config), fh, indent=2)
                fh.write("\n")
    return text
