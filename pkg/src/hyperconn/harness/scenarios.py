"""Preset experiments around the connectivity thresholds.

``regular-threshold``  constant size d, m = ceil(n (log n + c) / d)
``rig-threshold``      i.i.d. sizes from f, m = ceil(n (log n + c) / (f)_1)
``large-hyperedges``   m = floor(log^1.5 n), w = log n / sqrt(m),
                       d = floor((n/m)(log n - w)); lambda falls while mu rises
``small-and-full``     f = (1-p) delta_2 + p delta_n with p = 1 - n^(-1/(2m)):
                       connected whp although the isolated-node mean diverges

Grid defaults (n in 2^10, 2^12, 2^14; 1000 trials) are engineering choices
sized for minutes of desk time, not derived from any finite-n theory.
"""
from __future__ import annotations

import math
from typing import Any, Mapping

from ..model import ModelSpec, SizeDistribution, ValidationError
from .config import DEFAULT_N_GRID, DEFAULT_TRIALS, ExperimentConfig, GridPoint, expand_sweep

SCENARIOS = ("regular-threshold", "rig-threshold", "large-hyperedges", "small-and-full")
DEFAULT_C_GRID = (-3, -1, 0, 1, 3)
DEFAULT_RIG_WEIGHTS = {2: 0.5, 4: 0.5}
OVERRIDE_KEYS = {"n", "c", "d", "m", "variant", "weights", "trials", "seed", "format", "out"}


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def large_hyperedge_params(n: int) -> tuple[int, int, float]:
    """``(m, d, omega)`` for the large-hyperedge regime at size ``n``."""
    log_n = math.log(n)
    m = math.floor(log_n**1.5)
    omega = log_n / math.sqrt(m)
    d = math.floor(n / m * (log_n - omega))
    return m, d, omega


def small_and_full_distribution(n: int, m: int) -> SizeDistribution:
    p = -math.expm1(-math.log(n) / (2 * m))
    return SizeDistribution(n, {2: 1.0 - p, n: p})


def scenario(name: str, overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    """Expand a preset into a full ``ExperimentConfig``."""
    overrides = dict(overrides or {})
    unknown = set(overrides) - OVERRIDE_KEYS
    if unknown:
        raise ValidationError(f"unknown scenario overrides {sorted(unknown)}")
    if name not in SCENARIOS:
        raise ValidationError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}")
    n_grid = _as_list(overrides.get("n", DEFAULT_N_GRID))
    extra: dict = {}

    if name == "regular-threshold":
        base = {"variant": overrides.get("variant", "regular-shotgun"), "d": overrides.get("d", 3)}
        points = expand_sweep(
            {"base": base, "axes": {"n": n_grid, "c": _as_list(overrides.get("c", DEFAULT_C_GRID))}}, name
        )
    elif name == "rig-threshold":
        weights = overrides.get("weights", DEFAULT_RIG_WEIGHTS)
        base = {"variant": overrides.get("variant", "intersection-graph"), "weights": weights}
        points = expand_sweep(
            {"base": base, "axes": {"n": n_grid, "c": _as_list(overrides.get("c", DEFAULT_C_GRID))}}, name
        )
    elif name == "large-hyperedges":
        variant = overrides.get("variant", "regular-shotgun")
        points = []
        extra["omega"] = {}
        for n in n_grid:
            m, d, omega = large_hyperedge_params(n)
            spec = ModelSpec.from_json({"variant": variant, "n": n, "m": m, "d": d})
            points.append(GridPoint(spec, name))
            extra["omega"][str(n)] = omega
    else:
        variant = overrides.get("variant", "intersection-graph")
        points = []
        for n in n_grid:
            for m in _as_list(overrides.get("m", 1000)):
                dist = small_and_full_distribution(n, m)
                spec = (
                    ModelSpec.intersection_graph(dist, m)
                    if variant == "intersection-graph"
                    else ModelSpec.shotgun_iid(dist, m)
                )
                points.append(GridPoint(spec, name))

    return ExperimentConfig(
        points=points,
        trials=overrides.get("trials", DEFAULT_TRIALS),
        master_seed=overrides.get("seed", 0),
        format=overrides.get("format", "csv"),
        output_path=overrides.get("out"),
        name=name,
        extra=extra,
    )
