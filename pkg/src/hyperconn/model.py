"""Domain types: size distributions, size counts/profiles, hypergraphs, model specs."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from numbers import Integral, Real
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

MASS_TOLERANCE = 1e-9

VARIANTS = (
    "given-sizes",
    "intersection-graph",
    "shotgun",
    "regular-hypergraph",
    "regular-shotgun",
)


class ValidationError(ValueError):
    """Raised when a parameter set violates a model invariant."""

    def __init__(self, violations: Sequence[str] | str):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _is_int(v: Any) -> bool:
    return isinstance(v, Integral) and not isinstance(v, bool)


def _check_n(n: Any) -> list[str]:
    if not _is_int(n) or n < 1:
        return [f"n must be a positive integer, got {n!r}"]
    return []


# -- size distribution --------------------------------------------------------


def _weights_vector(n: int, weights: Sequence[Real] | Mapping[int, Real]) -> tuple[list[float], list[str]]:
    problems = []
    if isinstance(weights, Mapping):
        vec = [0.0] * (n + 1)
        for key, w in weights.items():
            x = int(key)
            if x < 0 or x > n:
                problems.append(f"size {x} outside support [0, {n}]")
                continue
            vec[x] += float(w)
        return vec, problems
    vec = [float(w) for w in weights]
    if len(vec) > n + 1:
        problems.append(f"weight index {len(vec) - 1} exceeds n = {n}")
    return vec + [0.0] * (n + 1 - len(vec)), problems


def distribution_violations(n: Any, weights: Any) -> list[str]:
    problems = _check_n(n)
    if problems:
        return problems
    try:
        vec, problems = _weights_vector(n, weights)
    except (TypeError, ValueError) as exc:
        return [f"weights not numeric: {exc}"]
    if any(not math.isfinite(w) for w in vec):
        problems.append("weights must be finite")
        return problems
    if any(w < 0 for w in vec):
        problems.append("weights must be non-negative")
    total = math.fsum(vec)
    if abs(total - 1.0) > MASS_TOLERANCE:
        problems.append(f"mass ≠ 1 (sum of weights = {total!r})")
    return problems


@dataclass(frozen=True)
class SizeDistribution:
    """Probability mass function on hyperedge sizes ``0..n``.

    ``weights`` may be a sequence indexed by size or a ``{size: mass}``
    mapping; it is stored as a tuple of length ``n + 1``.  Mass must sum
    to 1 within ``MASS_TOLERANCE``; nothing is renormalized.
    """

    n: int
    weights: tuple[float, ...]

    def __post_init__(self):
        problems = distribution_violations(self.n, self.weights)
        if problems:
            raise ValidationError(problems)
        vec, _ = _weights_vector(self.n, self.weights)
        object.__setattr__(self, "weights", tuple(vec))

    @classmethod
    def point_mass(cls, n: int, d: int) -> "SizeDistribution":
        return cls(n, {d: 1.0})

    def support(self) -> list[int]:
        return [x for x, w in enumerate(self.weights) if w > 0]

    def items(self) -> list[tuple[int, float]]:
        return [(x, w) for x, w in enumerate(self.weights) if w > 0]

    def label(self) -> str:
        return "|".join(f"{x}:{w!r}" for x, w in self.items())


# -- exact size counts --------------------------------------------------------


@dataclass(frozen=True)
class SizeCounts:
    """Exact number of hyperedges of each size, ``{x: m_x}``.

    Infeasible counts (``m_x > C(n, x)``) are representable; samplers
    refuse them, while ``distinct_probability`` reports probability 0.
    """

    n: int
    counts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        problems = _check_n(self.n)
        raw = self.counts.items() if isinstance(self.counts, Mapping) else self.counts
        merged: dict[int, int] = {}
        for key, mx in raw:
            if not _is_int(mx) or mx < 0:
                problems.append(f"count for size {key} must be a non-negative integer, got {mx!r}")
                continue
            x = int(key)
            if not problems and not 0 <= x <= self.n:
                problems.append(f"size {x} outside support [0, {self.n}]")
                continue
            merged[x] = merged.get(x, 0) + int(mx)
        if problems:
            raise ValidationError(problems)
        normalized = tuple(sorted((x, mx) for x, mx in merged.items() if mx > 0))
        if not normalized:
            raise ValidationError("at least one hyperedge required (m ≥ 1)")
        object.__setattr__(self, "counts", normalized)

    @classmethod
    def from_distribution(cls, dist: SizeDistribution, m: int) -> "SizeCounts":
        """Convert ``m * f(x)`` to integers; non-integral products are an error."""
        counts = {}
        for x, w in dist.items():
            mx = m * w
            k = round(mx)
            if abs(mx - k) > MASS_TOLERANCE * max(1, m):
                raise ValidationError(f"m·f({x}) = {mx!r} is not an integer")
            counts[x] = int(k)
        return cls(dist.n, counts)

    @property
    def m(self) -> int:
        return sum(mx for _, mx in self.counts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def violations(self) -> list[str]:
        out = []
        for x, mx in self.counts:
            cap = math.comb(self.n, x)
            if mx > cap:
                out.append(f"m_{x} = {mx} > C({self.n},{x}) = {cap}")
        return out

    @property
    def feasible(self) -> bool:
        return not self.violations()

    def sizes(self) -> list[int]:
        return [x for x, mx in self.counts for _ in range(mx)]

    def to_profile(self) -> "SizeProfile":
        return SizeProfile(self.n, tuple(self.sizes()))

    def label(self) -> str:
        return "|".join(f"{x}x{mx}" for x, mx in self.counts)


@dataclass(frozen=True)
class SizeProfile:
    """Explicit per-hyperedge sizes ``(x_1, ..., x_m)``."""

    n: int
    sizes: tuple[int, ...]

    def __post_init__(self):
        problems = _check_n(self.n)
        sizes = tuple(self.sizes)
        if not sizes:
            problems.append("profile must contain at least one size (m ≥ 1)")
        for x in sizes:
            if not _is_int(x):
                problems.append(f"size {x!r} is not an integer")
            elif not problems and not 0 <= x <= self.n:
                problems.append(f"size {x} outside [0, {self.n}]")
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "sizes", tuple(int(x) for x in sizes))

    @classmethod
    def constant(cls, n: int, m: int, d: int) -> "SizeProfile":
        return cls(n, (d,) * m)

    @property
    def m(self) -> int:
        return len(self.sizes)

    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.sizes).items()))

    def label(self) -> str:
        return "|".join(f"{x}x{c}" for x, c in self.histogram().items())


def moment(dist: SizeDistribution | SizeCounts | SizeProfile, r: int) -> float:
    """Restricted moment ``sum_{x>=2} x**r f(x)``; sizes 0 and 1 contribute nothing."""
    if not _is_int(r) or r < 0:
        raise ValidationError(f"moment order must be a non-negative integer, got {r!r}")
    if isinstance(dist, SizeDistribution):
        return math.fsum(x**r * w for x, w in dist.items() if x >= 2)
    if isinstance(dist, SizeCounts):
        return math.fsum(x**r * mx for x, mx in dist.counts if x >= 2) / dist.m
    if isinstance(dist, SizeProfile):
        return math.fsum(x**r * c for x, c in dist.histogram().items() if x >= 2) / dist.m
    raise TypeError(f"cannot take a moment of {type(dist).__name__}")


# -- hypergraphs --------------------------------------------------------------


def canonicalize(n: int, edges: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    """Sort node ids within each edge and drop repeats; edge order is kept."""
    out = []
    for e in edges:
        nodes = tuple(sorted({int(v) for v in e}))
        if nodes and (nodes[0] < 1 or nodes[-1] > n):
            raise ValidationError(f"edge {list(nodes)} has node ids outside [1, {n}]")
        out.append(nodes)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """Node count plus an edge *list* stored in CSR form (1-based node ids).

    ``nodes[offsets[k]:offsets[k+1]]`` is edge ``k`` in strictly increasing
    order. Duplicate edges and empty edges may occur in the list;
    ``dedupe()`` gives the hyperedge set.
    """

    n: int
    offsets: np.ndarray
    nodes: np.ndarray
    _edges: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        for arr in (self.offsets, self.nodes):
            arr.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        if _check_n(n):
            raise ValidationError(_check_n(n))
        canon = canonicalize(n, edges)
        lengths = np.fromiter((len(e) for e in canon), dtype=np.int64, count=len(canon))
        offsets = np.zeros(len(canon) + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        nodes = np.fromiter((v for e in canon for v in e), dtype=np.int64, count=int(offsets[-1]))
        return cls(n, offsets, nodes, canon)

    @property
    def m(self) -> int:
        return len(self.offsets) - 1

    @property
    def edges(self) -> tuple[tuple[int, ...], ...]:
        if self._edges is None:
            flat = self.nodes.tolist()
            off = self.offsets.tolist()
            object.__setattr__(
                self, "_edges", tuple(tuple(flat[a:b]) for a, b in zip(off[:-1], off[1:]))
            )
        return self._edges

    @property
    def edge_sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    def dedupe(self) -> frozenset[tuple[int, ...]]:
        """Hyperedge set: distinct, nonempty edges."""
        return frozenset(e for e in self.edges if e)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Hypergraph":
        if "n" not in obj or "edges" not in obj:
            raise ValidationError("hypergraph JSON needs 'n' and 'edges'")
        return cls.from_edges(obj["n"], obj["edges"])

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.nodes, other.nodes)
        )

    def __hash__(self):
        return hash((self.n, self.offsets.tobytes(), self.nodes.tobytes()))

    def __repr__(self):
        return f"Hypergraph(n={self.n}, m={self.m})"


# -- model specifications -----------------------------------------------------


def regular_violations(n: Any, m: Any, d: Any) -> list[str]:
    problems = _check_n(n)
    if not _is_int(m) or m < 1:
        problems.append(f"m must be a positive integer, got {m!r}")
    if not _is_int(d):
        problems.append(f"d must be an integer, got {d!r}")
    elif not problems and not 2 <= d <= n:
        problems.append(f"d = {d} outside [2, n = {n}]")
    return problems


@dataclass(frozen=True)
class ModelSpec:
    """Which random model to sample, with its parameters.

    Build instances with the named constructors; ``from_json`` parses the
    config-file form.
    """

    variant: str
    n: int
    m: int
    d: int | None = None
    counts: SizeCounts | None = None
    dist: SizeDistribution | None = None
    profile: SizeProfile | None = None

    @classmethod
    def given_sizes(cls, counts: SizeCounts) -> "ModelSpec":
        if counts.violations():
            raise ValidationError(counts.violations())
        return cls("given-sizes", counts.n, counts.m, counts=counts)

    @classmethod
    def intersection_graph(cls, dist: SizeDistribution, m: int) -> "ModelSpec":
        if not _is_int(m) or m < 1:
            raise ValidationError(f"m must be a positive integer, got {m!r}")
        return cls("intersection-graph", dist.n, m, dist=dist)

    @classmethod
    def shotgun(cls, profile: SizeProfile) -> "ModelSpec":
        return cls("shotgun", profile.n, profile.m, profile=profile)

    @classmethod
    def shotgun_iid(cls, dist: SizeDistribution, m: int) -> "ModelSpec":
        if not _is_int(m) or m < 1:
            raise ValidationError(f"m must be a positive integer, got {m!r}")
        return cls("shotgun", dist.n, m, dist=dist)

    @classmethod
    def regular_hypergraph(cls, n: int, m: int, d: int) -> "ModelSpec":
        problems = regular_violations(n, m, d)
        if problems:
            raise ValidationError(problems)
        return cls("regular-hypergraph", n, m, d=d)

    @classmethod
    def regular_shotgun(cls, n: int, m: int, d: int) -> "ModelSpec":
        problems = regular_violations(n, m, d)
        if problems:
            raise ValidationError(problems)
        return cls("regular-shotgun", n, m, d=d)

    def size_label(self) -> str:
        if self.d is not None:
            return str(self.d)
        if self.counts is not None:
            return self.counts.label()
        if self.profile is not None:
            return self.profile.label()
        return self.dist.label()

    def to_json(self) -> dict:
        out: dict[str, Any] = {"variant": self.variant, "n": self.n, "m": self.m}
        if self.d is not None:
            out["d"] = self.d
        if self.counts is not None:
            out["counts"] = {str(x): mx for x, mx in self.counts.counts}
        if self.dist is not None:
            out["weights"] = {str(x): w for x, w in self.dist.items()}
        if self.profile is not None:
            out["sizes"] = list(self.profile.sizes)
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "ModelSpec":
        problems = spec_violations(obj)
        if problems:
            raise ValidationError(problems)
        variant = obj["variant"]
        n = obj["n"]
        if variant == "given-sizes":
            return cls.given_sizes(SizeCounts(n, _int_keys(obj["counts"])))
        if variant in ("regular-hypergraph", "regular-shotgun"):
            ctor = cls.regular_hypergraph if variant == "regular-hypergraph" else cls.regular_shotgun
            return ctor(n, obj["m"], obj["d"])
        if variant == "shotgun" and "sizes" in obj:
            return cls.shotgun(SizeProfile(n, tuple(obj["sizes"])))
        dist = SizeDistribution(n, _weights_arg(obj["weights"]))
        if variant == "shotgun":
            return cls.shotgun_iid(dist, obj["m"])
        return cls.intersection_graph(dist, obj["m"])


def _int_keys(mapping: Mapping) -> dict[int, Any]:
    return {int(k): v for k, v in mapping.items()}


def _weights_arg(weights):
    return _int_keys(weights) if isinstance(weights, Mapping) else list(weights)


def spec_violations(obj: Mapping) -> list[str]:
    variant = obj.get("variant")
    if variant not in VARIANTS:
        return [f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}"]
    n = obj.get("n")
    problems = _check_n(n)
    if problems:
        return problems
    m = obj.get("m")
    if variant == "given-sizes":
        if "counts" not in obj:
            return ["given-sizes requires 'counts'"]
        try:
            counts = SizeCounts(n, _int_keys(obj["counts"]))
        except ValidationError as exc:
            return exc.violations
        problems = counts.violations()
        if m is not None and m != counts.m:
            problems.append(f"m = {m!r} disagrees with total count {counts.m}")
        return problems
    if variant in ("regular-hypergraph", "regular-shotgun"):
        return regular_violations(n, m, obj.get("d"))
    if variant == "shotgun" and "sizes" in obj:
        try:
            profile = SizeProfile(n, tuple(obj["sizes"]))
        except ValidationError as exc:
            return exc.violations
        if m is not None and m != profile.m:
            return [f"m = {m!r} disagrees with len(sizes) = {profile.m}"]
        return []
    if "weights" not in obj:
        return [f"{variant} requires 'weights' (or 'sizes' for shotgun)"]
    if not _is_int(m) or m < 1:
        problems.append(f"m must be a positive integer, got {m!r}")
    problems += distribution_violations(n, _weights_arg(obj["weights"]))
    return problems


def validate(obj: ModelSpec | SizeDistribution | SizeCounts | SizeProfile | Mapping) -> list[str]:
    """Return the list of violated rules; an empty list means valid.

    Typed objects reject most problems at construction, so mappings (the
    JSON config form) are where violations usually surface.
    """
    if isinstance(obj, Mapping):
        if "variant" not in obj and "weights" in obj:
            return distribution_violations(obj.get("n"), _weights_arg(obj["weights"]))
        return spec_violations(obj)
    if isinstance(obj, SizeCounts):
        return obj.violations()
    if isinstance(obj, ModelSpec) and obj.counts is not None:
        return obj.counts.violations()
    if isinstance(obj, ModelSpec) and obj.d is not None:
        return regular_violations(obj.n, obj.m, obj.d)
    return []
