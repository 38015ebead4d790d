#!/usr/bin/env python3
"""Sweep the random-set expansion experiment across primes and densities.

Reports, per (p, c), the fraction of uniformly sampled (n+2)-point sets
whose ceil(c*p)-fold sumset covers F_p^n, with two-standard-error bars.
This is the pilot driver that fixed the frozen statistics used by the
acceptance suite.
"""

import argparse
import math

from sumsetcert.randexp import TrialConfig, proof_replay, random_expansion_trial


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, nargs="+", default=[11, 31, 101])
    ap.add_argument("--c", type=float, nargs="+", default=[0.5])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--replay", action="store_true",
                    help="print step diagnostics for the first trial")
    args = ap.parse_args()

    print(f"{'p':>5} {'c':>5} {'folds':>6} {'rate':>6} {'2se':>6} "
          f"{'min-cover':>10} {'max-cover':>10}")
    for c in args.c:
        for p in args.p:
            cfg = TrialConfig(p=p, n=args.n, c=c, trials=args.trials,
                              seed=args.seed)
            res = random_expansion_trial(cfg)
            covered = [r["covered"] for r in res.records]
            se2 = 2 * math.sqrt(max(res.rate * (1 - res.rate), 1e-12)
                                / args.trials)
            print(f"{p:>5} {c:>5.2f} {res.folds:>6} {res.rate:>6.2f} "
                  f"{se2:>6.3f} {min(covered):>10} {max(covered):>10}")
            if args.replay:
                rep = proof_replay(p, args.n, c, res.records[0]["points"])
                for step in rep["steps"]:
                    mark = "ok " if step["pass"] else "FAIL"
                    print(f"        [{mark}] {step['step']}: {step['detail']}")


if __name__ == "__main__":
    main()
