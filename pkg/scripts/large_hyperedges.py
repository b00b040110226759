#!/usr/bin/env python3
"""lambda and mu along the large-hyperedge regime.

m = floor(log^1.5 n), d = floor((n/m)(log n - w)) with w = log n / sqrt(m).
lambda drifts to -inf while mu drifts to +inf, so a first-moment criterion
built on mu gives the wrong answer.  Theory only by default; pass
--simulate to add Monte Carlo rates for the smaller grid points.
"""
import argparse
import csv
import sys

from hyperconn.harness import ExperimentConfig, run, scenario
from hyperconn.harness.scenarios import large_hyperedge_params
from hyperconn.theory import lambda_, mu


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--log2-n", type=int, nargs="+", default=list(range(10, 201, 10)))
    p.add_argument("--simulate", action="store_true", help="Monte Carlo for n <= --max-sim-n")
    p.add_argument("--max-sim-n", type=int, default=2**16)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    config = scenario("large-hyperedges", {"n": [2**k for k in args.log2_n]})
    rates = {}
    if args.simulate:
        small = [pt for pt in config.points if pt.spec.n <= args.max_sim_n]
        if small:
            sim = ExperimentConfig(small, trials=args.trials, master_seed=args.seed)
            rates = {s.n: s.connected_rate for s in run(sim)}

    out = csv.writer(sys.stdout)
    out.writerow(["log2_n", "m", "d", "omega", "lambda", "mu", "connected_rate"])
    for pt, k in zip(config.points, args.log2_n):
        m, d, omega = large_hyperedge_params(pt.spec.n)
        out.writerow([k, m, d, omega, lambda_(pt.spec), mu(pt.spec), rates.get(pt.spec.n, "")])


if __name__ == "__main__":
    main()
