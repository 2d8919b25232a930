"""Dense state-vector machinery.

Qubits are numbered 1..n from the left of a ket.  Basis state |b1 b2 ... bn>
lives at amplitude index sum(b_i * 2**(n - i)), so qubit 1 is the most
significant bit: in a 2-qubit register |01> is index 1 and |10> is index 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 12
NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
# amplitudes below this magnitude are treated as zero when picking a phase reference
PHASE_REF_TOL = 1e-9
# marginal probabilities below this are numerical dust and are not reported
PROB_DUST = 1e-15


class DimensionError(ValueError):
    """Register size, matrix shape or qubit index is inconsistent."""


class ConsistencyError(ValueError):
    """Inputs violate an algebraic precondition (orthonormality, unitarity)."""


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise DimensionError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 2**self.n_qubits:
            raise DimensionError(
                f"{self.n_qubits} qubits need {2**self.n_qubits} amplitudes, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ConsistencyError(f"state is not normalized (|psi|^2 = {norm!r})")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Iterable[complex], normalize: bool = False) -> "StateVector":
        amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                          dtype=np.complex128).reshape(-1)
        n = int(round(np.log2(amps.shape[0]))) if amps.shape[0] > 0 else 0
        if amps.shape[0] == 0 or 2**n != amps.shape[0]:
            raise DimensionError(f"amplitude count {amps.shape[0]} is not a power of two")
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ConsistencyError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(n, amps)

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        """Computational basis state, e.g. ``StateVector.basis("0101")``."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {bits!r}")
        amps = np.zeros(2 ** len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits}, amplitudes={self.amplitudes!r})"


def make_state(n_qubits: int) -> StateVector:
    """Return |0...0> on ``n_qubits`` qubits."""
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_QUBITS:
        raise DimensionError(f"n_qubits must be an integer in 1..{MAX_QUBITS}, got {n_qubits!r}")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(int(n_qubits), amps)


def _check_targets(targets: Sequence[int], n_qubits: int) -> list[int]:
    targets = [int(t) for t in targets]
    if not targets:
        raise DimensionError("at least one qubit index is required")
    if len(set(targets)) != len(targets):
        raise DimensionError(f"duplicate qubit index in {targets}")
    for t in targets:
        if not 1 <= t <= n_qubits:
            raise DimensionError(f"qubit {t} out of range 1..{n_qubits}")
    return targets


def apply_unitary(state: StateVector, U: np.ndarray, targets: Sequence[int]) -> StateVector:
    """Apply ``U`` to the listed qubits (first target = most significant bit of U)."""
    U = np.asarray(U, dtype=np.complex128)
    n = state.n_qubits
    targets = _check_targets(targets, n)
    k = len(targets)
    if U.shape != (2**k, 2**k):
        raise DimensionError(f"{U.shape} matrix cannot act on {k} qubit(s)")

    axes = [t - 1 for t in targets]
    psi = state.amplitudes.reshape([2] * n)
    psi = np.moveaxis(psi, axes, range(k)).reshape(2**k, -1)
    psi = (U @ psi).reshape([2] * n)
    psi = np.moveaxis(psi, range(k), axes).reshape(-1)
    return StateVector(n, psi)


def outcome_probabilities(state: StateVector, subset: Sequence[int]) -> dict[str, float]:
    """Born-rule marginal over ``subset``, keyed by bitstring in subset order.

    Outcomes with probability below 1e-15 are omitted.
    """
    if len(subset) == 0:
        raise DimensionError("subset must not be empty")
    subset = _check_targets(subset, state.n_qubits)
    n, k = state.n_qubits, len(subset)
    probs = np.abs(state.amplitudes) ** 2
    probs = np.moveaxis(probs.reshape([2] * n), [t - 1 for t in subset], range(k))
    marginal = probs.reshape(2**k, -1).sum(axis=1)
    return {
        format(i, f"0{k}b"): float(p)
        for i, p in enumerate(marginal)
        if p > PROB_DUST
    }


def inner_product(a: StateVector, b: StateVector) -> complex:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"cannot contract {a.n_qubits}- and {b.n_qubits}-qubit states")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def check_unitary(M: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        return False
    return bool(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[0]))) <= tol)


def as_unitary(M, tol: float = UNITARY_TOL) -> np.ndarray:
    """Validate ``M`` as a power-of-two unitary and return it as a read-only array."""
    M = np.array(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 2 or M.shape[0] & (M.shape[0] - 1):
        raise DimensionError(f"unitary must be square with power-of-two dimension, got {M.shape}")
    if not check_unitary(M, tol):
        raise ConsistencyError("matrix is not unitary")
    M.setflags(write=False)
    return M


def tensor_product(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return as_unitary(np.kron(A, B))


def _vector(v) -> np.ndarray:
    if isinstance(v, StateVector):
        return v.amplitudes
    return np.asarray(v, dtype=np.complex128).reshape(-1)


def _extend_orthonormal(vectors: list[np.ndarray], dim: int) -> list[np.ndarray]:
    # canonical basis vectors in index order, projected twice against the running basis
    basis = list(vectors)
    for j in range(dim):
        if len(basis) == dim:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[j] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - b * np.vdot(b, v)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            basis.append(v / norm)
    return basis


def complete_unitary(pairs: Sequence[tuple]) -> np.ndarray:
    """Unitary W with W @ inp = out for every (inp, out) pair.

    Both the input and output sets are extended to full orthonormal bases by
    projecting canonical basis vectors out in index order; extension vectors
    are paired in the order produced.  The result is deterministic.
    """
    if not pairs:
        raise ConsistencyError("need at least one (input, output) pair")
    ins = [_vector(p[0]) for p in pairs]
    outs = [_vector(p[1]) for p in pairs]
    dim = ins[0].shape[0]
    if dim < 2 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of two")
    if any(v.shape[0] != dim for v in ins + outs):
        raise DimensionError("all vectors must share one dimension")
    for name, vs in (("inputs", ins), ("outputs", outs)):
        gram = np.array([[np.vdot(a, b) for b in vs] for a in vs])
        if np.max(np.abs(gram - np.eye(len(vs)))) > UNITARY_TOL:
            raise ConsistencyError(f"{name} are not orthonormal")

    full_in = np.column_stack(_extend_orthonormal(ins, dim))
    full_out = np.column_stack(_extend_orthonormal(outs, dim))
    return as_unitary(full_out @ full_in.conj().T)


def align_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible amplitude is real-positive."""
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    nz = np.flatnonzero(np.abs(amps) > PHASE_REF_TOL)
    if nz.size == 0:
        return amps.copy()
    ref = amps[nz[0]]
    out = amps * (abs(ref) / ref)
    out[nz[0]] = abs(ref)
    return out


def states_close(a, b, atol: float = 1e-10) -> bool:
    """Componentwise equality up to global phase."""
    x, y = align_phase(_vector(a)), align_phase(_vector(b))
    return x.shape == y.shape and bool(np.max(np.abs(x - y)) <= atol)
