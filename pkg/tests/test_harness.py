import csv
import io
import json
import math
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperconn.harness import ExperimentConfig, run, scenario, wilson_ci
from hyperconn.harness.config import CSV_COLUMNS, GridPoint, expand_sweep, threshold_m
from hyperconn.harness.runner import format_csv, format_json, write_results
from hyperconn.harness.scenarios import large_hyperedge_params, small_and_full_distribution
from hyperconn.harness.stats import RunningStats
from hyperconn.model import Hypergraph, ModelSpec, SizeCounts, SizeProfile, ValidationError
from hyperconn.theory import isolation_probabilities, lambda_, mu
from oracles import all_subsets, partition_connected


def wilson_oracle(k, n, conf):
    with mpmath.workdps(40):
        z = mpmath.sqrt(2) * mpmath.erfinv(mpmath.mpf(conf))
        p = mpmath.mpf(k) / n
        denom = 1 + z**2 / n
        center = (p + z**2 / (2 * n)) / denom
        half = z / denom * mpmath.sqrt(p * (1 - p) / n + z**2 / (4 * n * n))
        return center - half, center + half


def config_for(spec, trials, seed=0, **kw):
    return ExperimentConfig([GridPoint(spec)], trials=trials, master_seed=seed, **kw)


# -- statistics ---------------------------------------------------------------


def test_wilson_edges():
    assert wilson_ci(0, 17)[0] == 0.0
    assert wilson_ci(17, 17)[1] == 1.0


def test_wilson_half():
    low, high = wilson_ci(50, 100, 0.95)
    ref_low, ref_high = wilson_oracle(50, 100, 0.95)
    assert low == pytest.approx(0.4038315303659956270829232080838104403839, abs=1e-14)
    assert high == pytest.approx(0.5961684696340043729170767919161895596161, abs=1e-14)
    assert float(ref_low) == pytest.approx(low, abs=1e-14) and float(ref_high) == pytest.approx(high, abs=1e-14)
    assert (0.5 - low) == pytest.approx(high - 0.5, abs=1e-14)


@given(st.integers(1, 5000).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))),
       st.sampled_from([0.8, 0.9, 0.95, 0.99]))
def test_wilson_matches_oracle(args, conf):
    k, n = args
    low, high = wilson_ci(k, n, conf)
    ref_low, ref_high = wilson_oracle(k, n, conf)
    assert 0 <= low <= k / n <= high <= 1
    assert low == pytest.approx(float(max(ref_low, 0)), abs=1e-12)
    assert high == pytest.approx(float(min(ref_high, 1)), abs=1e-12)


def test_wilson_rejects_bad_input():
    with pytest.raises(ValueError):
        wilson_ci(3, 2)
    with pytest.raises(ValueError):
        wilson_ci(0, 0)


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=200))
def test_running_stats(values):
    acc = RunningStats()
    for v in values:
        acc.push(v)
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)
    assert acc.mean == pytest.approx(mean, abs=1e-6)
    assert acc.variance == pytest.approx(var, rel=1e-7, abs=1e-6)


# -- config -------------------------------------------------------------------


def test_config_validation():
    spec = ModelSpec.regular_shotgun(10, 3, 2)
    with pytest.raises(ValidationError):
        config_for(spec, 0)
    with pytest.raises(ValidationError):
        config_for(spec, 5, format="xml")
    with pytest.raises(ValidationError):
        ExperimentConfig([], trials=5)
    with pytest.raises(ValidationError):
        config_for(spec, 5, seed=-1)
    with pytest.raises(ValidationError):
        expand_sweep({"base": {"variant": "regular-shotgun", "d": 2}, "axes": {"n": []}})


def test_config_json_round_trip():
    config = scenario("regular-threshold", {"n": [64, 128], "trials": 7, "seed": 9})
    again = ExperimentConfig.from_json(json.loads(json.dumps(config.to_json())))
    assert again.to_json() == config.to_json()
    assert [p.c_offset for p in again.points] == [p.c_offset for p in config.points]


def test_config_from_sweep_and_spec():
    sweep = {
        "name": "mine",
        "trials": 3,
        "sweep": {"base": {"variant": "regular-shotgun", "d": 2}, "axes": {"n": [20, 40], "c": [0, 1]}},
    }
    config = ExperimentConfig.from_json(sweep)
    assert [(p.spec.n, p.c_offset) for p in config.points] == [(20, 0), (20, 1), (40, 0), (40, 1)]
    assert config.points[1].spec.m == threshold_m(20, 1, 2) == math.ceil(20 * (math.log(20) + 1) / 2)
    single = ExperimentConfig.from_json({"spec": ModelSpec.regular_shotgun(9, 2, 3).to_json()})
    assert len(single.points) == 1 and single.trials == 1000
    with pytest.raises(ValidationError):
        ExperimentConfig.from_json({"trials": 3})


def test_sweep_c_axis_on_distribution():
    points = expand_sweep(
        {"base": {"variant": "intersection-graph", "weights": {"2": 0.5, "4": 0.5}}, "axes": {"n": [50], "c": [0]}}
    )
    assert points[0].spec.m == math.ceil(50 * math.log(50) / 3)


# -- scenarios ------------------------------------------------------------------


def test_regular_threshold_expansion():
    config = scenario("regular-threshold", {"d": 3, "c": 0})
    assert [p.spec.n for p in config.points] == [2**10, 2**12, 2**14]
    for p in config.points:
        assert p.spec.d == 3 and p.c_offset == 0
        assert p.spec.m == math.ceil(p.spec.n * math.log(p.spec.n) / 3)
    assert config.trials == 1000 and config.format == "csv"


def test_rig_threshold_expansion():
    config = scenario("rig-threshold", {"n": 1000, "c": [-1, 1]})
    assert [p.spec.variant for p in config.points] == ["intersection-graph"] * 2
    assert config.points[0].spec.m == math.ceil(1000 * (math.log(1000) - 1) / 3)


def test_unknown_scenario_and_override():
    with pytest.raises(ValidationError):
        scenario("nope")
    with pytest.raises(ValidationError):
        scenario("regular-threshold", {"colour": 1})


def test_large_hyperedges_lambda_down_mu_up():
    grid = [2**k for k in range(10, 200, 10)]
    config = scenario("large-hyperedges", {"n": grid})
    lams = [lambda_(p.spec) for p in config.points]
    mus = [mu(p.spec) for p in config.points]
    assert all(a > b for a, b in zip(lams, lams[1:]))
    assert all(a < b for a, b in zip(mus, mus[1:]))
    assert lams[-1] < -2 and mus[-1] > 3
    m, d, omega = large_hyperedge_params(2**40)
    assert m == math.floor(math.log(2**40) ** 1.5)
    assert config.extra["omega"][str(2**40)] == omega


def test_small_and_full_parameters():
    n, m = 10**4, 10**3
    f = small_and_full_distribution(n, m)
    p = 1 - n ** (-1 / (2 * m))
    assert f.weights[n] == pytest.approx(p, rel=1e-12)
    # probability of at least one full edge is 1 - n^(-1/2)
    assert 1 - (1 - f.weights[n]) ** m == pytest.approx(1 - n**-0.5, rel=1e-12)
    p1, _ = isolation_probabilities(f, m)
    assert n * p1 > 10
    config = scenario("small-and-full", {"n": n, "m": m})
    assert config.points[0].spec.dist == f


# -- run ------------------------------------------------------------------------


def test_full_edge_always_connected():
    [s] = run(config_for(ModelSpec.shotgun(SizeProfile(12, (12,))), 50))
    assert s.connected_count == 50 and s.connected_rate == 1.0
    assert s.no_isolated_count == 50 and s.isolated_mean == 0.0
    assert s.ci_high == 1.0 and s.ci_low <= 1.0


def _enumerated_rate(n, k):
    classes = list(combinations(all_subsets(n, 2), k))
    return Fraction(sum(partition_connected(n, es) for es in classes), len(classes)), len(classes)


@pytest.mark.slow
def test_given_sizes_two_pairs_never_connected():
    rate, size = _enumerated_rate(4, 2)
    assert size == 15 and rate == 0
    [s] = run(config_for(ModelSpec.given_sizes(SizeCounts(4, {2: 2})), 100_000))
    assert s.connected_count == 0


@pytest.mark.slow
def test_given_sizes_three_pairs_rate():
    rate, size = _enumerated_rate(4, 3)
    assert size == 20 and rate == Fraction(4, 5)
    trials = 20_000
    [s] = run(config_for(ModelSpec.given_sizes(SizeCounts(4, {2: 3})), trials, seed=5))
    sd = math.sqrt(0.8 * 0.2 / trials)
    assert abs(s.connected_rate - 0.8) < 3 * sd
    assert s.ci_low <= s.connected_rate <= s.ci_high


def test_summary_invariants_and_theory_fields():
    spec = ModelSpec.regular_shotgun(200, 300, 3)
    [s] = run(config_for(spec, 200, seed=1))
    assert 0 <= s.connected_count <= s.trials
    assert 0 <= s.ci_low <= s.connected_rate <= s.ci_high <= 1
    assert s.lambda_ == pytest.approx(lambda_(spec))
    assert s.expected_isolated == pytest.approx(math.exp(s.lambda_))
    assert s.sandwich_low is not None and s.disconnect_bound is not None
    assert s.component_count_mean >= 1
    [g] = run(config_for(ModelSpec.given_sizes(SizeCounts(20, {3: 4})), 5))
    assert g.sandwich_low is None and g.disconnect_bound is None


def test_workers_do_not_change_results():
    config = scenario("regular-threshold", {"n": [200, 400], "c": [-1, 1], "trials": 37, "seed": 11})
    one = format_csv(run(config, workers=1))
    two = format_csv(run(config, workers=2))
    assert one == two
    assert format_csv(run(config, workers=1)) == one


def test_trial_streams_shared_across_points():
    spec = ModelSpec.regular_shotgun(50, 60, 2)
    config = ExperimentConfig([GridPoint(spec), GridPoint(spec)], trials=20, master_seed=3)
    a, b = run(config)
    assert a.row() == b.row()


def test_retry_errors_are_per_point(caplog):
    hard = ModelSpec.given_sizes(SizeCounts(4, {2: 6}))
    easy = ModelSpec.regular_shotgun(10, 5, 2)
    config = ExperimentConfig([GridPoint(hard), GridPoint(easy)], trials=10, max_attempts=2)
    bad, good = run(config)
    assert "failed" in caplog.text
    assert bad.error and "trial 0" in bad.error and bad.connected_rate is None
    assert good.error is None and good.connected_count is not None


def test_csv_columns_and_sidecar(tmp_path):
    out = tmp_path / "res.csv"
    config = config_for(ModelSpec.regular_shotgun(30, 40, 3), 10, output_path=str(out))
    text = write_results(run(config), config)
    assert out.read_text() == text
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 2 and rows[1][CSV_COLUMNS.index("d_or_dist")] == "3"
    meta = json.loads((tmp_path / "res.csv.meta.json").read_text())
    assert meta["master_seed"] == 0 and "rng_algorithm" in meta


def test_json_output_is_strict_json():
    spec = ModelSpec.regular_shotgun(8, 2, 8)
    config = config_for(spec, 5, format="json")
    doc = json.loads(format_json(run(config), config))
    [row] = doc["results"]
    assert row["lambda"] == "-inf" and row["connected_rate"] == 1.0
    assert doc["metadata"]["trials"] == 5


def test_analyze_round_trip_of_run_sample():
    h = Hypergraph.from_edges(5, [[1, 2], [2, 3, 4]])
    assert Hypergraph.from_json(json.loads(json.dumps(h.to_json()))) == h
