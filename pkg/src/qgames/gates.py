"""Gate constructors: player strategy gates, the entangler J, standard gates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .qcore import as_unitary

# slack on domain endpoints so values like math.pi / 2 parsed from text are accepted
_RANGE_EPS = 1e-12


class DomainError(ValueError):
    """A gate parameter lies outside its allowed range."""


def _check_range(name: str, value: float, lo: float, hi: float) -> float:
    value = float(value)
    if not math.isfinite(value) or not lo - _RANGE_EPS <= value <= hi + _RANGE_EPS:
        raise DomainError(f"{name}={value!r} outside [{lo:.6g}, {hi:.6g}]")
    return value


@dataclass(frozen=True)
class StrategyParams:
    """Angles of a player's single-qubit strategy.

    theta in [0, pi] moves the player from cooperate (0) to defect (pi);
    phi and psi in [-pi, pi] are quantum phases.
    """

    theta: float = 0.0
    phi: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_range("theta", self.theta, 0.0, math.pi))
        object.__setattr__(self, "phi", _check_range("phi", self.phi, -math.pi, math.pi))
        object.__setattr__(self, "psi", _check_range("psi", self.psi, -math.pi, math.pi))


def check_gamma(gamma: float) -> float:
    return _check_range("gamma", gamma, 0.0, math.pi / 2)


def strategy_gate(p: StrategyParams) -> np.ndarray:
    """U(theta, phi, psi) = [[e^{-i phi} c, i e^{i psi} s], [i e^{-i psi} s, e^{i phi} c]].

    c = cos(theta/2), s = sin(theta/2).  U(theta, 0, 0) = exp(i theta X / 2),
    which commutes with the X (x) X generator of the entangler; U(pi, 0, 0) = iX.
    """
    if not isinstance(p, StrategyParams):
        p = StrategyParams(*p)
    c, s = math.cos(p.theta / 2), math.sin(p.theta / 2)
    ephi, epsi = np.exp(1j * p.phi), np.exp(1j * p.psi)
    return as_unitary(
        [
            [c / ephi, 1j * epsi * s],
            [1j * s / epsi, ephi * c],
        ],
        tol=1e-12,
    )


_SQ2 = 1 / math.sqrt(2)
_NAMED = {
    "I": [[1, 0], [0, 1]],
    "X": [[0, 1], [1, 0]],
    "Y": [[0, -1j], [1j, 0]],
    "Z": [[1, 0], [0, -1]],
    "H": [[_SQ2, _SQ2], [_SQ2, -_SQ2]],
    # control is the first (most significant) qubit of the pair
    "CNOT": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    "SWAP": [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
}


@lru_cache(maxsize=None)
def named_gate(name: str) -> np.ndarray:
    try:
        return as_unitary(_NAMED[name])
    except KeyError:
        raise KeyError(f"unknown gate {name!r}; known: {', '.join(_NAMED)}") from None


def entangler(gamma: float) -> np.ndarray:
    """J(gamma) = exp(i gamma/2 X(x)X) = cos(gamma/2) I + i sin(gamma/2) X(x)X."""
    gamma = check_gamma(gamma)
    xx = np.kron(named_gate("X"), named_gate("X"))
    return as_unitary(math.cos(gamma / 2) * np.eye(4) + 1j * math.sin(gamma / 2) * xx, tol=1e-12)


def entangler_decomposed(gamma: float) -> np.ndarray:
    """CNOT . (exp(i gamma X / 2) (x) I) . CNOT."""
    gamma = check_gamma(gamma)
    rx = math.cos(gamma / 2) * np.eye(2) + 1j * math.sin(gamma / 2) * named_gate("X")
    cnot = named_gate("CNOT")
    return as_unitary(cnot @ np.kron(rx, np.eye(2)) @ cnot, tol=1e-12)


Strategy = Union[StrategyParams, str, np.ndarray]


def strategy_unitary(s: Strategy) -> np.ndarray:
    """Resolve a player's move: angles, a named gate ("I", "X", ...) or a 2x2 unitary."""
    if isinstance(s, StrategyParams):
        return strategy_gate(s)
    if isinstance(s, str):
        U = named_gate(s)
    else:
        U = as_unitary(s)
    if U.shape != (2, 2):
        raise ValueError(f"strategy must be a single-qubit gate, got shape {U.shape}")
    return U
