"""Uniform subset sampling and samplers for the shotgun, intersection-graph
and given-sizes models."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels
from .model import Hypergraph, ModelSpec, SizeCounts, SizeDistribution, SizeProfile, ValidationError

RNG_ALGORITHM = "numpy.random.Philox keyed by SeedSequence(master_seed, spawn_key=(stream_index,))"
DEFAULT_MAX_ATTEMPTS = 1000
LOW_ACCEPTANCE_WARNING = 0.01


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream identified by ``(master_seed, stream_index)``."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValidationError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.stream_index < 0:
            raise ValidationError(f"stream_index must be non-negative, got {self.stream_index}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.Philox(seq))


class RetryBudgetExceeded(RuntimeError):
    """Rejection sampling ran out of attempts."""

    def __init__(self, attempts: int, acceptance_lower_bound: float, acceptance_upper_bound: float):
        self.attempts = attempts
        self.acceptance_lower_bound = acceptance_lower_bound
        self.acceptance_upper_bound = acceptance_upper_bound
        super().__init__(
            f"no distinct hyperedge list in {attempts} attempts; per-attempt acceptance "
            f"probability lies in [{max(acceptance_lower_bound, 0.0):.3g}, {acceptance_upper_bound:.3g}]"
        )


class LowAcceptanceWarning(UserWarning):
    pass


def as_generator(rng: RngStream | np.random.Generator) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def _sample_csr(n: int, sizes: np.ndarray, gen: np.random.Generator) -> Hypergraph:
    sizes = np.asarray(sizes, dtype=np.int64)
    eff = np.minimum(sizes, n - sizes)
    offsets = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    total = int(eff.sum())
    starts = np.cumsum(eff) - eff
    # swap target for position i of an edge is uniform on [i, n)
    lows = np.arange(total, dtype=np.int64) - np.repeat(starts, eff)
    draws = gen.integers(lows, n) if total else np.zeros(0, dtype=np.int64)
    perm = np.arange(1, n + 1, dtype=np.int64)
    nodes = np.empty(int(offsets[-1]), dtype=np.int64)
    _kernels.fill_subsets(n, sizes, draws, perm, offsets, nodes)
    return Hypergraph(n, offsets, nodes)


def sample_subset(n: int, x: int, rng: RngStream | np.random.Generator) -> tuple[int, ...]:
    """Uniform ``x``-subset of ``{1..n}`` in sorted order."""
    if not 0 <= x <= n:
        raise ValidationError(f"subset size {x} outside [0, {n}]")
    h = _sample_csr(n, np.array([x]), as_generator(rng))
    return tuple(h.nodes.tolist())


def sample_shotgun(profile: SizeProfile, rng: RngStream | np.random.Generator) -> Hypergraph:
    """Independent uniform subsets with the given sizes; duplicates kept."""
    return _sample_csr(profile.n, np.asarray(profile.sizes), as_generator(rng))


def sample_shotgun_iid(dist: SizeDistribution, m: int, rng: RngStream | np.random.Generator) -> Hypergraph:
    """Sizes drawn i.i.d. from ``dist``, then uniform subsets of those sizes."""
    if m < 1:
        raise ValidationError(f"m must be positive, got {m}")
    gen = as_generator(rng)
    cdf = np.cumsum(dist.weights)
    sizes = np.searchsorted(cdf, gen.random(m) * cdf[-1], side="right")
    # guards against a zero-mass tail being selected through round-off
    sizes = np.minimum(sizes, max(dist.support()))
    return _sample_csr(dist.n, sizes, gen)


def acceptance_constant(counts: SizeCounts) -> float:
    """``c = sum_x C(m_x, 2) / C(n, x)`` from the birthday bound."""
    return math.fsum(math.comb(mx, 2) / math.comb(counts.n, x) for x, mx in counts.counts)


def _classes_distinct(h: Hypergraph, counts: SizeCounts) -> bool:
    start = 0
    for x, mx in counts.counts:
        if mx > 1 and x > 0:
            block = h.nodes[h.offsets[start]:h.offsets[start + mx]].reshape(mx, x)
            if h.n <= 64:
                keys = np.bitwise_or.reduce(np.left_shift(np.uint64(1), (block - 1).astype(np.uint64)), axis=1)
                if np.unique(keys).size != mx:
                    return False
            elif np.unique(block, axis=0).shape[0] != mx:
                return False
        start += mx
    return True


def sample_given_sizes(
    counts: SizeCounts,
    rng: RngStream | np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> tuple[Hypergraph, int]:
    """Uniform hypergraph with exactly ``m_x`` distinct hyperedges of each size.

    Samples the whole size list as independent uniform subsets and rejects
    until every pair of same-size edges differs; conditioning on that event
    makes the result uniform over the class.  Returns ``(hypergraph, attempts)``.
    """
    if counts.violations():
        raise ValidationError(counts.violations())
    if max_attempts < 1:
        raise ValidationError(f"max_attempts must be ≥ 1, got {max_attempts}")
    c = acceptance_constant(counts)
    if math.exp(-c) < LOW_ACCEPTANCE_WARNING:
        warnings.warn(
            f"acceptance probability per attempt is at most e^-c = {math.exp(-c):.3g}; "
            "rejection sampling will likely stall",
            LowAcceptanceWarning,
            stacklevel=2,
        )
    gen = as_generator(rng)
    sizes = np.asarray(counts.sizes(), dtype=np.int64)
    for attempt in range(1, max_attempts + 1):
        h = _sample_csr(counts.n, sizes, gen)
        if _classes_distinct(h, counts):
            return h, attempt
    raise RetryBudgetExceeded(max_attempts, 1.0 - c, math.exp(-c))


def sample_model(spec: ModelSpec, rng: RngStream | np.random.Generator, max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> Hypergraph:
    """Dispatch on ``spec.variant`` and return the sampled hypergraph."""
    gen = as_generator(rng)
    if spec.variant == "given-sizes":
        return sample_given_sizes(spec.counts, gen, max_attempts)[0]
    if spec.variant == "regular-hypergraph":
        return sample_given_sizes(SizeCounts(spec.n, {spec.d: spec.m}), gen, max_attempts)[0]
    if spec.variant == "regular-shotgun":
        return _sample_csr(spec.n, np.full(spec.m, spec.d, dtype=np.int64), gen)
    if spec.profile is not None:
        return sample_shotgun(spec.profile, gen)
    return sample_shotgun_iid(spec.dist, spec.m, gen)


def two_section(h: Hypergraph) -> frozenset[tuple[int, int]]:
    """Node pairs ``(i, j)``, ``i < j``, that share some hyperedge."""
    pairs = set()
    for e in h.edges:
        pairs.update(combinations(e, 2))
    return frozenset(pairs)
