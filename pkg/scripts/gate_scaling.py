"""Oracle size against clause count for random 3-SAT, with a linear fit.

    python scripts/gate_scaling.py --n 12 --max-m 200
"""

import argparse

import numpy as np

from doomsday_sim.cnf import random_cnf
from doomsday_sim.oracle import compile_oracle, gate_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--max-m", type=int, default=200)
    ap.add_argument("--step", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    ms = np.arange(args.step, args.max_m + 1, args.step)
    rows = []
    for m in ms:
        rep = gate_report(compile_oracle(random_cnf(args.n, int(m), rng=rng)))
        rows.append((rep.total, rep.control_count, rep.by_arity))
        print(f"m={m:>4}  gates={rep.total:>5}  controls={rep.control_count:>5}  by_arity={rep.by_arity}")
    slope, intercept = np.polyfit(ms, [r[0] for r in rows], 1)
    print(f"fit: gates = {slope:.3f} * m + {intercept:.3f}")


if __name__ == "__main__":
    main()
