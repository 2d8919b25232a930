"""Pure-strategy equilibria and Pareto optimality over finite strategy grids."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

TIE_TOL = 1e-9

PayoffFn = Callable[[Any, Any], tuple[float, float]]


@dataclass(frozen=True)
class EquilibriumProfile:
    strategy_a: int
    strategy_b: int
    payoffs: tuple[float, float]
    is_pareto_optimal: bool


def _check_grid(grid: Sequence, name: str = "grid") -> Sequence:
    if len(grid) == 0:
        raise ValueError(f"{name} must not be empty")
    try:
        distinct = len(set(grid)) == len(grid)
    except TypeError:  # unhashable entries such as raw matrices
        distinct = True
    if not distinct:
        raise ValueError(f"{name} contains duplicate strategies")
    return grid


def _argmax_set(values: Sequence[float]) -> set[int]:
    best = max(values)
    return {i for i, v in enumerate(values) if v >= best - TIE_TOL}


def best_response(payoff_fn: PayoffFn, player: str, opponent_strategy, grid: Sequence) -> set[int]:
    """Indices of ``grid`` maximizing ``player``'s payoff against a fixed opponent move."""
    _check_grid(grid)
    if player == "A":
        values = [payoff_fn(s, opponent_strategy)[0] for s in grid]
    elif player == "B":
        values = [payoff_fn(opponent_strategy, s)[1] for s in grid]
    else:
        raise ValueError(f"player must be 'A' or 'B', got {player!r}")
    return _argmax_set(values)


def payoff_matrix(payoff_fn: PayoffFn, grid_a: Sequence, grid_b: Sequence) -> np.ndarray:
    """Array of shape (len(grid_a), len(grid_b), 2)."""
    return np.array([[payoff_fn(sa, sb) for sb in grid_b] for sa in grid_a], dtype=float)


def pareto_optimal(outcomes: Sequence[tuple[float, float]]) -> list[bool]:
    """True for outcomes no other outcome weakly beats in both coordinates and strictly in one."""
    pts = np.asarray(outcomes, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("outcomes must be a non-empty list of payoff pairs")
    mask = []
    for p in pts:
        geq = np.all(pts >= p - TIE_TOL, axis=1)
        gt = np.any(pts > p + TIE_TOL, axis=1)
        mask.append(not bool(np.any(geq & gt)))
    return mask


def nash_profiles(payoff_fn: PayoffFn, grid_a: Sequence, grid_b: Sequence) -> list[EquilibriumProfile]:
    _check_grid(grid_a, "grid_a")
    _check_grid(grid_b, "grid_b")
    pay = payoff_matrix(payoff_fn, grid_a, grid_b)
    na, nb = pay.shape[:2]
    optimal = np.array(pareto_optimal(pay.reshape(-1, 2))).reshape(na, nb)

    profiles = []
    for i in range(na):
        for j in range(nb):
            a_best = pay[i, j, 0] >= pay[:, j, 0].max() - TIE_TOL
            b_best = pay[i, j, 1] >= pay[i, :, 1].max() - TIE_TOL
            if a_best and b_best:
                profiles.append(EquilibriumProfile(
                    i, j, (float(pay[i, j, 0]), float(pay[i, j, 1])), bool(optimal[i, j])))
    return profiles


def table_payoff_fn(table) -> PayoffFn:
    """Payoff function over move labels ("C"/"D" or "S1"/"S2") of a 2x2 table."""
    def fn(sa: str, sb: str) -> tuple[float, float]:
        return table[sa + sb]
    return fn
