"""Entangled-payoff prisoner's dilemma under random quantum strategies.

Reports the outcome statistics once players use arbitrary single-qubit gates
instead of I / X, including the asymmetric outcomes (5,0) and (0,5).

    python scripts/entangled_pd_quantum_moves.py --pairs 2000 --seed 1
"""
import argparse
import math

import numpy as np

from qgames import games
from qgames.gates import StrategyParams


def random_params(rng):
    return StrategyParams(rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi))


def main(argv=None):
    ap = argparse.ArgumentParser(description="asymmetric-outcome rate under quantum moves")
    ap.add_argument("--pairs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    asym, pareto, nash = [], [], []
    for _ in range(args.pairs):
        dist = games.entangled_pd_play(random_params(rng), random_params(rng)).payoff_distribution
        asym.append(dist.get((5.0, 0.0), 0.0) + dist.get((0.0, 5.0), 0.0))
        pareto.append(dist.get((3.0, 3.0), 0.0))
        nash.append(dist.get((1.0, 1.0), 0.0))

    print(f"pairs={args.pairs} seed={args.seed}")
    for name, xs in (("P(3,3)", pareto), ("P(1,1)", nash), ("P(5,0)+P(0,5)", asym)):
        xs = np.asarray(xs)
        print(f"{name:>14}: mean {xs.mean():.4f}  min {xs.min():.4f}  max {xs.max():.4f}")
    print(f"classical uniform mix: {games.entangled_pd_uniform_mix()}")


if __name__ == "__main__":
    main()
