import math

import numpy as np
from hypothesis import strategies as st

from qgames.gates import StrategyParams

angles_theta = st.floats(0.0, math.pi, allow_nan=False)
angles_phase = st.floats(-math.pi, math.pi, allow_nan=False)
strategy_params = st.builds(StrategyParams, angles_theta, angles_phase, angles_phase)
gammas = st.floats(0.0, math.pi / 2, allow_nan=False)


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def full_operator(U: np.ndarray, targets: list[int], n: int) -> np.ndarray:
    """Brute-force embedding of U on ``targets`` into an n-qubit operator, one matrix element at a time."""
    dim = 2**n
    M = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - i)) & 1 for i in range(1, n + 1)]
        local_in = int("".join(str(bits[t - 1]) for t in targets), 2)
        for local_out in range(U.shape[0]):
            out_bits = list(bits)
            for k, t in enumerate(targets):
                out_bits[t - 1] = (local_out >> (len(targets) - 1 - k)) & 1
            row = int("".join(map(str, out_bits)), 2)
            M[row, col] += U[local_out, local_in]
    return M
