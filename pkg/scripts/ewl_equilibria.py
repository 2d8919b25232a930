"""Pure Nash profiles of the EWL prisoner's dilemma over a strategy grid, per entanglement level.

    python scripts/ewl_equilibria.py --gammas 0 0.7853981633974483 1.5707963267948966 --out ewl_nash.csv
"""
import argparse
import csv
import math
import sys
from itertools import product

from qgames import games
from qgames.equilibrium import nash_profiles
from qgames.gates import StrategyParams


def strategy_grid(n_theta: int, n_phase: int) -> list[StrategyParams]:
    thetas = [math.pi * i / (n_theta - 1) for i in range(n_theta)]
    phases = [math.pi / 2 * i / (n_phase - 1) for i in range(n_phase)] if n_phase > 1 else [0.0]
    return [StrategyParams(t, f) for t, f in product(thetas, phases)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gammas", type=float, nargs="+", default=[0.0, math.pi / 4, math.pi / 2])
    ap.add_argument("--n-theta", type=int, default=5)
    ap.add_argument("--n-phase", type=int, default=3)
    ap.add_argument("--out", help="CSV path (default: stdout)")
    args = ap.parse_args(argv)

    grid = strategy_grid(args.n_theta, args.n_phase)
    rows = []
    for g in args.gammas:
        def payoff(a, b, g=g):
            return games.expected_payoff_quantum(games.ewl_final_state(g, a, b))

        for p in nash_profiles(payoff, grid, grid):
            sa, sb = grid[p.strategy_a], grid[p.strategy_b]
            rows.append({
                "gamma": g, "theta_a": sa.theta, "phi_a": sa.phi, "theta_b": sb.theta, "phi_b": sb.phi,
                "payoff_a": p.payoffs[0], "payoff_b": p.payoffs[1], "pareto_optimal": p.is_pareto_optimal,
            })

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else ["gamma"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        fh.close()
        print(f"{len(rows)} Nash profiles over {len(grid)}x{len(grid)} grid -> {args.out}")


if __name__ == "__main__":
    main()
