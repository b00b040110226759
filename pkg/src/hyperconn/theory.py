"""Closed-form thresholds, isolation and cut probabilities, and the
elementary inequalities they rest on.

Binomial coefficients are exact integers for ``n <= EXACT_BINOMIAL_MAX_N``
(results come back as ``Fraction``) and log-gamma above that.  Products of
probabilities are accumulated as sums of logs; ``-inf`` is a legal value
for ``lambda`` whenever a full hyperedge is certain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import mpmath

from .model import ModelSpec, SizeCounts, SizeDistribution, SizeProfile, ValidationError

EXACT_BINOMIAL_MAX_N = 64

# rational lower bound for e; truncating the series keeps it strictly below e
E_LOWER = sum(Fraction(1, math.factorial(j)) for j in range(40))


# -- per-edge size laws --------------------------------------------------------

Law = tuple[tuple[tuple[int, float], ...], int]


def _edge_laws(source, m: int | None = None) -> tuple[int, list[Law]]:
    """Normalize any size source to ``(n, [(items, multiplicity), ...])``.

    ``items`` is the support of one per-edge law as ``(size, mass)`` pairs.
    Accepts a profile, size counts, a distribution with ``m``, a sequence
    of per-edge distributions, or a ``ModelSpec``.
    """
    if isinstance(source, ModelSpec):
        if source.d is not None:
            return source.n, [(((source.d, 1.0),), source.m)]
        if source.counts is not None:
            return _edge_laws(source.counts)
        if source.profile is not None:
            return _edge_laws(source.profile)
        return _edge_laws(source.dist, source.m)
    if isinstance(source, SizeProfile):
        return source.n, [(((x, 1.0),), c) for x, c in source.histogram().items()]
    if isinstance(source, SizeCounts):
        return source.n, [(((x, 1.0),), mx) for x, mx in source.counts]
    if isinstance(source, SizeDistribution):
        if m is None or m < 1:
            raise ValidationError("a size distribution needs a hyperedge count m ≥ 1")
        return source.n, [(tuple(source.items()), m)]
    dists = list(source)
    if not dists or not all(isinstance(f, SizeDistribution) for f in dists):
        raise TypeError("expected a profile, counts, distribution + m, or per-edge distributions")
    n = dists[0].n
    if any(f.n != n for f in dists):
        raise ValidationError("per-edge distributions disagree on n")
    return n, [(tuple(f.items()), 1) for f in dists]


def _mean_effective(items) -> float:
    """Mean of ``X 1(X >= 2)``."""
    return math.fsum(x * w for x, w in items if x >= 2)


def _log_or_neg_inf(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


# -- thresholds ----------------------------------------------------------------


def lambda_(source, m: int | None = None) -> float:
    """Log of the expected isolated-node count in the shotgun model."""
    n, laws = _edge_laws(source, m)
    terms = [math.log(n)]
    for items, mult in laws:
        t = _mean_effective(items) / n
        if t >= 1.0:
            return -math.inf
        terms.append(mult * math.log1p(-t))
    return math.fsum(terms)


def mu(source, m: int | None = None) -> float:
    """``log n - (m/n) (F)_1``."""
    n, laws = _edge_laws(source, m)
    return math.log(n) - math.fsum(mult * _mean_effective(items) for items, mult in laws) / n


def mu_lambda_gap_bound(source, m: int | None = None) -> float:
    """Upper bound ``n^-2 sum_k xt_k^2 / (1 - xt_k/n)`` on ``mu - lambda``.

    ``xt_k`` is the mean of ``X_k 1(X_k >= 2)``; infinite if some ``xt_k = n``.
    """
    n, laws = _edge_laws(source, m)
    terms = []
    for items, mult in laws:
        xt = _mean_effective(items)
        if xt >= n:
            return math.inf
        terms.append(mult * xt * xt / (1.0 - xt / n))
    return math.fsum(terms) / n**2


def _phi1(x: int, n: int) -> float:
    return 1.0 - x / n if x >= 2 else 1.0


def _phi2(x: int, n: int) -> float:
    return (1.0 - x / n) * (1.0 - x / (n - 1)) if x >= 2 else 1.0


def log_isolation_probabilities(source, m: int | None = None) -> tuple[float, float]:
    """``(log P1, log P2)``: one fixed node / two fixed nodes isolated."""
    n, laws = _edge_laws(source, m)
    log_p1 = []
    log_p2 = []
    for items, mult in laws:
        log_p1.append(mult * _log_or_neg_inf(math.fsum(w * _phi1(x, n) for x, w in items)))
        log_p2.append(mult * _log_or_neg_inf(math.fsum(w * _phi2(x, n) for x, w in items)))
    return _sum_logs(log_p1), _sum_logs(log_p2)


def _sum_logs(terms: list[float]) -> float:
    return -math.inf if -math.inf in terms else math.fsum(terms)


def isolation_probabilities(source, m: int | None = None) -> tuple[float, float]:
    lp1, lp2 = log_isolation_probabilities(source, m)
    return math.exp(lp1), math.exp(lp2)


def pair_ratio_bound(source, m: int | None = None) -> float:
    """``sum_k Var(phi1(X_k)) / (E phi1(X_k))^2``, an upper bound on ``log(P2 / P1^2)``."""
    n, laws = _edge_laws(source, m)
    terms = []
    for items, mult in laws:
        mean = math.fsum(w * _phi1(x, n) for x, w in items)
        if mean <= 0:
            raise ValidationError("E phi1(X) = 0: a full hyperedge is certain, ratio undefined")
        var = math.fsum(w * (_phi1(x, n) - mean) ** 2 for x, w in items)
        terms.append(mult * var / mean**2)
    return math.fsum(terms)


def isolated_sandwich(source, m: int | None = None) -> tuple[float, float]:
    """Bounds on P(no isolated nodes): ``1 - e^lam`` and ``e^-lam + exp(ratio) - 1``.

    The lower bound is Markov's inequality on the isolated count.
    """
    lam = lambda_(source, m)
    lower = -math.expm1(lam)
    if lam == -math.inf:
        return lower, math.inf
    return lower, math.exp(-lam) + math.expm1(pair_ratio_bound(source, m))


@dataclass(frozen=True)
class ThresholdReport:
    lambda_: float
    mu: float
    expected_isolated: float
    gap_bound: float | None

    def to_json(self) -> dict:
        return {
            "lambda": _json_float(self.lambda_),
            "mu": self.mu,
            "expected_isolated": self.expected_isolated,
            "gap_bound": self.gap_bound,
        }


def _json_float(v: float):
    return v if math.isfinite(v) else str(v)


def threshold_report(source, m: int | None = None) -> ThresholdReport:
    lam = lambda_(source, m)
    gap = mu_lambda_gap_bound(source, m)
    return ThresholdReport(lam, mu(source, m), math.exp(lam), gap if math.isfinite(gap) else None)


# -- binomials -----------------------------------------------------------------


def log_binom(n: int, k: int) -> float:
    if not 0 <= k <= n:
        return -math.inf
    return math.fsum([math.lgamma(n + 1), -math.lgamma(k + 1), -math.lgamma(n - k + 1)])


def binom_ratio(a: int, b: int, x: int, n: int):
    """``C(a, x) / C(b, x)``; exact when ``n`` is small, float otherwise."""
    if n <= EXACT_BINOMIAL_MAX_N:
        return Fraction(math.comb(a, x), math.comb(b, x))
    if x > a:
        return 0.0
    return math.exp(log_binom(a, x) - log_binom(b, x))


# -- cut probabilities -----------------------------------------------------------


def _check_cut(n: int, r: int, x: int) -> None:
    if not 1 <= r or 2 * r > n:
        raise ValidationError(f"r = {r} outside [1, n/2] for n = {n}")
    if not 0 <= x <= n:
        raise ValidationError(f"x = {x} outside [0, {n}]")


def q_exact(n: int, r: int, x: int):
    """Probability that a uniform ``x``-subset stays inside ``[r]`` or inside its complement."""
    _check_cut(n, r, x)
    one = Fraction(1) if n <= EXACT_BINOMIAL_MAX_N else 1.0
    if x <= 1:
        return one
    if x > n - r:
        return one * 0
    outside = binom_ratio(n - r, n, x, n)
    if x <= r:
        return binom_ratio(r, n, x, n) + outside
    return outside


def q_bounds(n: int, r: int, x: int):
    """``((1 + (r/(n-r))^x)(1 - x/n)^r, 1 - 2(r/n)(1 - r/n))``, both above ``q_exact``."""
    _check_cut(n, r, x)
    if x < 2:
        raise ValidationError(f"cut bounds need x ≥ 2, got {x}")
    if n <= EXACT_BINOMIAL_MAX_N:
        rn = Fraction(r, n)
        shotgun = (1 + Fraction(r, n - r) ** x) * (1 - Fraction(x, n)) ** r
    else:
        rn = r / n
        shotgun = (1 + (r / (n - r)) ** x) * math.exp(r * math.log1p(-x / n)) if x < n else 0.0
    return shotgun, 1 - 2 * rn * (1 - rn)


def expected_q_exact(dist: SizeDistribution, n: int, r: int) -> float:
    return math.fsum(w * float(q_exact(n, r, x)) for x, w in dist.items())


def expected_q_bounds(dist: SizeDistribution, n: int, r: int) -> tuple[float, float]:
    """The moment bound and the mass bound on ``E q_r(X)``."""
    _check_cut(n, r, 0)
    if dist.n != n:
        raise ValidationError(f"distribution is on n = {dist.n}, expected {n}")
    items = dist.items()
    big = math.fsum(w for x, w in items if x >= 2)
    small = math.fsum(w for x, w in items if x < 2)
    mean = _mean_effective(items)
    second = math.fsum(x * x * w for x, w in items if x >= 2)
    moment_bound = math.fsum(
        [1.0, -r / n * mean, (r / (n - r)) ** 2 * big, 0.5 * (r / n) ** 2 * second]
    )
    mass_bound = small + math.exp(-2 * (r / n) * (1 - r / n)) * big
    return moment_bound, mass_bound


def disconnect_upper_bound(n: int, m: int, d: int) -> float:
    """``e^lam + sum_{r>=1} e^{(lam+5) r} + (2/e)^n`` for constant size ``d``."""
    if not 2 <= d <= n or m < 1:
        raise ValidationError(f"need 2 ≤ d ≤ n and m ≥ 1, got n={n}, m={m}, d={d}")
    lam = math.log(n) + m * math.log1p(-d / n) if d < n else -math.inf
    return disconnect_bound_from_lambda(lam, n)


def disconnect_bound_from_lambda(lam: float, n: int) -> float:
    """The disconnection bound with the geometric series summed in closed form."""
    a = lam + 5
    if a >= 0:
        return math.inf
    return math.exp(lam) - math.exp(a) / math.expm1(a) + math.exp(n * (math.log(2) - 1))


# -- elementary inequalities -----------------------------------------------------


class DistinctProbability(NamedTuple):
    exact: float | Fraction
    lower: float | Fraction
    upper: float
    c: float | Fraction


def distinct_probability(counts: SizeCounts) -> DistinctProbability:
    """Probability that independent uniform subsets with sizes ``counts`` are distinct.

    ``exact`` is the birthday product, sandwiched by ``1 - c <= p <= e^-c``.
    """
    n = counts.n
    if n <= EXACT_BINOMIAL_MAX_N:
        c = Fraction(0)
        num = den = 1
        for x, mx in counts.counts:
            total = math.comb(n, x)
            c += Fraction(math.comb(mx, 2), total)
            for k in range(1, mx):
                num *= max(total - k, 0)
                den *= total
        exact = Fraction(num, den)
        return DistinctProbability(exact, 1 - c, math.exp(-c), c)
    c = 0.0
    logs = []
    for x, mx in counts.counts:
        log_total = log_binom(n, x)
        c += math.exp(math.log(math.comb(mx, 2)) - log_total) if mx > 1 else 0.0
        if mx > 1 and math.log(mx - 1) >= log_total:
            logs.append(-math.inf)
            continue
        total = math.exp(log_total)
        logs.extend(math.log1p(-k / total) for k in range(1, mx))
    return DistinctProbability(math.exp(_sum_logs(logs)), 1 - c, math.exp(-c), c)


def shotgun_probability(n: int, d: int, r: int):
    """``(p, (1 - r/n)^d, (1 - d/n)^r)`` with ``p = C(n-r, d)/C(n, d)``.

    In exact mode the swap identity ``p = C(n-d, r)/C(n, r)`` and both
    dominations are checked; a failure raises ``ArithmeticError``.
    """
    if min(n, d, r) < 0 or d + r > n:
        raise ValidationError(f"need d, r ≥ 0 and d + r ≤ n, got n={n}, d={d}, r={r}")
    if n <= EXACT_BINOMIAL_MAX_N:
        p = Fraction(math.comb(n - r, d), math.comb(n, d))
        bound_r = (1 - Fraction(r, n)) ** d if n else Fraction(1)
        bound_d = (1 - Fraction(d, n)) ** r if n else Fraction(1)
        if p != Fraction(math.comb(n - d, r), math.comb(n, r)):
            raise ArithmeticError(f"swap identity fails at n={n}, d={d}, r={r}")
        if p > bound_r or p > bound_d:
            raise ArithmeticError(f"shotgun bound fails at n={n}, d={d}, r={r}")
        return p, bound_r, bound_d
    p = math.exp(log_binom(n - r, d) - log_binom(n, d))
    return p, math.exp(d * math.log1p(-r / n)), math.exp(r * math.log1p(-d / n))


def binom_ratio_bound(n: int, d1: int, d2: int) -> tuple[Fraction, Fraction]:
    """``(C(n,d1)/C(n,d2), (d2/(n-d2+1))^(d2-d1))`` with the first at most the second."""
    if not 0 <= d1 <= d2 <= n:
        raise ValidationError(f"need 0 ≤ d1 ≤ d2 ≤ n, got {d1}, {d2}, {n}")
    return (
        Fraction(math.comb(n, d1), math.comb(n, d2)),
        Fraction(d2, n - d2 + 1) ** (d2 - d1),
    )


def binom_bounds(n: int, k: int) -> tuple[Fraction, int, Fraction, Fraction]:
    """``((n/k)^k, C(n,k), n^k/k!, (e n/k)^k)`` in increasing order.

    The last entry uses ``E_LOWER`` in place of ``e``; it is therefore a
    rational lower bound of the true value, which makes an exact check of
    the final inequality conservative.
    """
    if not 1 <= k <= n:
        raise ValidationError(f"need 1 ≤ k ≤ n, got k={k}, n={n}")
    return (
        Fraction(n, k) ** k,
        math.comb(n, k),
        Fraction(n**k, math.factorial(k)),
        (E_LOWER * Fraction(n, k)) ** k,
    )


def log_taylor_bounds(t: float) -> tuple[float, float, float, float]:
    """``(-t/(1-t), -t, -t - t^2/(1-t), -t - t^2/2)``.

    ``log(1-t)`` lies between the first two and between the last two.
    """
    if not 0 < t < 1:
        raise ValidationError(f"t must lie in (0, 1), got {t}")
    return -t / (1 - t), -t, -t - t * t / (1 - t), -t - 0.5 * t * t


@dataclass
class BoundCheck:
    name: str
    checked: int = 0
    violations: list = None

    def __post_init__(self):
        self.violations = [] if self.violations is None else self.violations

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.violations


def elementary_bounds_suite(max_n: int = 60, grid: int = 10_000, shotgun_max_n: int = 40) -> dict[str, BoundCheck]:
    """Exhaustively verify the binomial and logarithm inequalities.

    Binomial checks are exact rationals.  The logarithm bounds are checked
    on ``t = i/(grid+1)`` at 50-digit precision, requiring a strictly
    positive margin on every grid point.
    """
    results = {key: BoundCheck(key) for key in ("distinct", "shotgun", "binom_ratio", "binom_bounds", "log_taylor")}

    for n in range(0, shotgun_max_n + 1):
        for d in range(0, n + 1):
            for r in range(0, n - d + 1):
                results["shotgun"].checked += 1
                try:
                    shotgun_probability(n, d, r)
                except ArithmeticError as exc:
                    results["shotgun"].violations.append(str(exc))

    with mpmath.workdps(50):
        for n in range(1, max_n + 1):
            for x in range(0, n + 1):
                total = math.comb(n, x)
                for mx in _count_grid(total):
                    res = distinct_probability(SizeCounts(n, {x: mx})) if mx else None
                    if res is None:
                        continue
                    results["distinct"].checked += 1
                    upper = mpmath.exp(-mpmath.mpf(res.c.numerator) / res.c.denominator)
                    exact = mpmath.mpf(res.exact.numerator) / res.exact.denominator
                    if not (res.lower <= res.exact and exact <= upper):
                        results["distinct"].violations.append((n, x, mx))
                    if (res.exact > 0) != (mx <= total):
                        results["distinct"].violations.append((n, x, mx, "support"))

        for n in range(0, max_n + 1):
            for d2 in range(0, n + 1):
                for d1 in range(0, d2 + 1):
                    lhs, rhs = binom_ratio_bound(n, d1, d2)
                    results["binom_ratio"].checked += 1
                    if lhs > rhs:
                        results["binom_ratio"].violations.append((n, d1, d2))
            for k in range(1, n + 1):
                a, b, c, e = binom_bounds(n, k)
                results["binom_bounds"].checked += 1
                if not a <= b <= c <= e:
                    results["binom_bounds"].violations.append((n, k))

        for i in range(1, grid + 1):
            t = mpmath.mpf(i) / (grid + 1)
            log = mpmath.log1p(-t)
            lo1, hi1 = -t / (1 - t), -t
            lo2, hi2 = -t - t * t / (1 - t), -t - t * t / 2
            results["log_taylor"].checked += 1
            if not (lo1 < log < hi1 and lo2 < log < hi2):
                results["log_taylor"].violations.append(i)
    return results


def _count_grid(total: int) -> Iterable[int]:
    """Counts m_x to probe: 0..9, powers of 3 below 300, and C(n, x) +- 1 when small."""
    seen = set(range(min(total + 2, 10)))
    for v in (total - 1, total, total + 1):
        if 0 <= v <= 300:
            seen.add(v)
    step = 1
    while step < min(total, 300):
        seen.add(step)
        step *= 3
    return sorted(seen)
