"""Dead branches per surviving run as n grows, for unique-solution instances.

    python scripts/body_count_sweep.py --max-n 12 --trials 2000
"""

import argparse

from doomsday_sim.cnf import CnfFormula
from doomsday_sim.pipeline import RunConfig, monte_carlo


def unique_instance(n: int) -> CnfFormula:
    # s* = 1010...; one unit clause per variable
    return CnfFormula.from_lists(n, [[i + 1] if i % 2 == 0 else [-(i + 1)] for i in range(n)])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'n':>3} {'2^n-1':>8} {'dead/trial':>12} {'mean runs':>10} {'expected':>9} {'censored':>8}")
    for n in range(1, args.max_n + 1):
        cfg = RunConfig(unique_instance(n), mode="montecarlo", trials=args.trials, seed=args.seed,
                        max_runs_per_trial=1000 * 2**n)
        rep = monte_carlo(cfg)
        print(f"{n:>3} {2**n - 1:>8} {rep.dead_branch_total / rep.trials:>12.2f} "
              f"{rep.mean_runs_to_survival:>10.2f} {rep.expected_runs:>9.1f} {rep.censored_trials:>8}")


if __name__ == "__main__":
    main()
