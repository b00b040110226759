"""Experiment configuration: grid points, trial counts, output settings."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from ..model import ModelSpec, ValidationError, moment

CSV_COLUMNS = (
    "scenario",
    "variant",
    "n",
    "m",
    "d_or_dist",
    "c_offset",
    "trials",
    "connected_rate",
    "ci_low",
    "ci_high",
    "isolated_mean",
    "no_isolated_rate",
    "lambda",
    "mu",
    "expected_isolated",
    "disconnect_bound",
    "seed",
)
FORMATS = ("csv", "json")
DEFAULT_TRIALS = 1000
DEFAULT_CONFIDENCE = 0.95
DEFAULT_N_GRID = (2**10, 2**12, 2**14)


@dataclass(frozen=True)
class GridPoint:
    spec: ModelSpec
    scenario: str = ""
    c_offset: float | None = None

    def to_json(self) -> dict:
        out = {"spec": self.spec.to_json()}
        if self.scenario:
            out["scenario"] = self.scenario
        if self.c_offset is not None:
            out["c"] = self.c_offset
        return out


@dataclass
class ExperimentConfig:
    points: list[GridPoint]
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    outputs: tuple[str, ...] = CSV_COLUMNS
    output_path: str | None = None
    format: str = "csv"
    confidence: float = DEFAULT_CONFIDENCE
    max_attempts: int = 1000
    name: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        problems = []
        if not self.points:
            problems.append("config has no grid points")
        if not isinstance(self.trials, int) or self.trials < 1:
            problems.append(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            problems.append(f"seed must be a 64-bit unsigned integer, got {self.master_seed!r}")
        if self.format not in FORMATS:
            problems.append(f"format must be one of {FORMATS}, got {self.format!r}")
        unknown = [c for c in self.outputs if c not in CSV_COLUMNS]
        if unknown:
            problems.append(f"unknown output columns {unknown}")
        if problems:
            raise ValidationError(problems)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "seed": self.master_seed,
            "format": self.format,
            "out": self.output_path,
            "confidence": self.confidence,
            "max_attempts": self.max_attempts,
            "outputs": list(self.outputs),
            "points": [p.to_json() for p in self.points],
            **({"extra": self.extra} if self.extra else {}),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ExperimentConfig":
        name = obj.get("name", "")
        if "points" in obj:
            points = [
                GridPoint(ModelSpec.from_json(p["spec"]), p.get("scenario", name), p.get("c"))
                for p in obj["points"]
            ]
        elif "sweep" in obj:
            points = expand_sweep(obj["sweep"], name)
        elif "spec" in obj:
            points = [GridPoint(ModelSpec.from_json(obj["spec"]), name)]
        else:
            raise ValidationError("config needs one of 'spec', 'sweep' or 'points'")
        return cls(
            points=points,
            trials=obj.get("trials", DEFAULT_TRIALS),
            master_seed=obj.get("seed", 0),
            outputs=tuple(obj.get("outputs", CSV_COLUMNS)),
            output_path=obj.get("out"),
            format=obj.get("format", "csv"),
            confidence=obj.get("confidence", DEFAULT_CONFIDENCE),
            max_attempts=obj.get("max_attempts", 1000),
            name=name,
            extra=dict(obj.get("extra", {})),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_json(obj)


def threshold_m(n: int, c: float, mean_size: float) -> int:
    """``ceil(n (log n + c) / mean_size)``, at least 1."""
    return max(1, math.ceil(n * (math.log(n) + c) / mean_size))


def expand_sweep(sweep: Mapping[str, Any], scenario: str = "") -> list[GridPoint]:
    """Cartesian product of ``sweep["axes"]`` applied on top of ``sweep["base"]``.

    A ``c`` axis sets ``m = ceil(n (log n + c) / s)`` with ``s`` the constant
    size ``d`` or the restricted mean size of the distribution.
    """
    base = dict(sweep.get("base", {}))
    axes = dict(sweep.get("axes", {}))
    if not axes or any(not isinstance(v, list) or not v for v in axes.values()):
        raise ValidationError("sweep axes must be non-empty lists")
    names = list(axes)
    points = []
    for values in itertools.product(*(axes[a] for a in names)):
        raw = {**base, **dict(zip(names, values))}
        c = raw.pop("c", None)
        if c is not None:
            raw["m"] = threshold_m(raw["n"], c, _mean_size(raw))
        points.append(GridPoint(ModelSpec.from_json(raw), scenario, c))
    return points


def _mean_size(raw: Mapping) -> float:
    if raw.get("d") is not None:
        return float(raw["d"])
    if "weights" in raw:
        probe = ModelSpec.from_json({**raw, "m": 1})
        mean = moment(probe.dist, 1)
        if mean > 0:
            return mean
    raise ValidationError("a 'c' axis needs 'd' or 'weights' with mass on sizes ≥ 2")
