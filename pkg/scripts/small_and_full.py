#!/usr/bin/env python3
"""Mostly-pairs hypergraphs with a rare full hyperedge.

f = (1-p) delta_2 + p delta_n with p = 1 - n^(-1/(2m)).  The graph is
connected whenever a full hyperedge appears, which happens with
probability 1 - n^(-1/2), while the expected isolated count n P1 grows.
"""
import argparse
import csv
import sys

from hyperconn.harness import run, scenario
from hyperconn.model import ModelSpec
from hyperconn.theory import isolation_probabilities


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[1000, 10_000, 100_000])
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args(argv)

    config = scenario("small-and-full", {"n": args.n, "m": args.m, "trials": args.trials, "seed": args.seed})
    out = csv.writer(sys.stdout)
    out.writerow(["n", "m", "connected_rate", "ci_low", "full_edge_prob", "n_P1", "isolated_mean"])
    for s in run(config, workers=args.workers):
        p1, _ = isolation_probabilities(ModelSpec.from_json(s.spec))
        out.writerow([s.n, s.m, s.connected_rate, s.ci_low, 1 - s.n**-0.5, s.n * p1, s.isolated_mean])


if __name__ == "__main__":
    main()
