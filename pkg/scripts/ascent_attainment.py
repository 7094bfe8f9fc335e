#!/usr/bin/env python3
"""How many random restarts does the flag QP ascent need in practice?

Builds a seeded pool of above-threshold instances, runs the multi-start
ascent once per instance with the largest requested budget, and reports,
for each prefix budget, the fraction of instances whose best-so-far value
is within --tol of the exact supremum.  Uses the fact that restart r of a
fixed-seed run is the same regardless of the total budget, so one trace
per instance covers every prefix.

    python3 scripts/ascent_attainment.py
    python3 scripts/ascent_attainment.py --ms 4 5 6 --per-m 10 --budgets 1 5 25 50
"""

from __future__ import annotations

import argparse
import sys
import time

from manired.corpus import feasibility_signatures, sample_graphs
from manired.graphs import clique_number
from manired.reductions import build_flag_qp, flag_qp_value, threshold_k
from manired.riemannian import AscentConfig, ascend


def instance_pool(ms, per_m, seed):
    pool = []
    for m in ms:
        picked = 0
        for gid, g in sample_graphs(m, 10 * per_m, seed=seed + m):
            if picked >= per_m:
                break
            omega, _ = clique_number(g)
            for sig in feasibility_signatures(m):
                if omega > threshold_k(sig):
                    pool.append((gid, g, sig))
                    picked += 1
                    break
    return pool


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ms", type=int, nargs="*", default=[3, 4, 5])
    ap.add_argument("--per-m", type=int, default=8)
    ap.add_argument("--budgets", type=int, nargs="*", default=[1, 2, 5, 10, 25, 50])
    ap.add_argument("--seed", type=int, default=1200)
    ap.add_argument("--tol", type=float, default=1e-4)
    args = ap.parse_args(argv)

    budgets = sorted(set(args.budgets))
    pool = instance_pool(args.ms, args.per_m, args.seed)
    print(f"{len(pool)} instances, budgets {budgets}", file=sys.stderr)

    t0 = time.perf_counter()
    prefix_best = []
    for idx, (gid, g, sig) in enumerate(pool):
        exact = float(flag_qp_value(g, sig))
        trace = ascend(
            build_flag_qp(g, sig),
            AscentConfig(restarts=budgets[-1], seed=5000 + idx),
        )
        # restart r draws from derive(seed, r), so its result is the same
        # under any total budget; prefix maxima give best-so-far per budget
        best = []
        cur = float("-inf")
        for r in trace.restarts:
            cur = max(cur, r.final_value)
            best.append(cur)
        prefix_best.append((exact, best))
        if trace.best_value > exact + 1e-6:
            print(f"WARNING {gid}: ascent beat the exact value", file=sys.stderr)

    print("budget,attained,fraction,mean_gap")
    for b in budgets:
        gaps = [exact - best[b - 1] for exact, best in prefix_best]
        hit = sum(1 for gap in gaps if gap <= args.tol)
        mean_gap = sum(max(g, 0.0) for g in gaps) / len(gaps)
        print(f"{b},{hit},{hit / len(gaps):.3f},{mean_gap:.3e}")
    print(f"done in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
