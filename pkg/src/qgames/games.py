"""Game engines.

* EWL prisoner's dilemma: J^dag (U_A (x) U_B) J |CC>, payoffs from a 2x2 table.
* Classical mixed-strategy baseline and the quantum/classical payoff match.
* Prisoner's dilemma with an entangled payoff register (4 qubits).
* Bipartite zero-sum game on two shared Bell-type pairs (4 qubits).
* Zero-sum game with an entangled payoff register (6 qubits).

Strategy register bits: 0 = cooperate / S1, 1 = defect / S2.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Mapping, NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from .gates import Strategy, entangler, named_gate, strategy_unitary
from .qcore import (
    ConsistencyError,
    DimensionError,
    StateVector,
    apply_unitary,
    as_unitary,
    complete_unitary,
    make_state,
    outcome_probabilities,
    tensor_product,
)

Payoff = tuple[float, float]
PROFILES = ("00", "01", "10", "11")


@dataclass(frozen=True)
class PayoffTable:
    """2x2 bimatrix.  ``entries[row][col] = (payA, payB)``; row is A's move."""

    entries: tuple[tuple[Payoff, Payoff], tuple[Payoff, Payoff]]
    labels: tuple[str, str] = ("C", "D")

    def __post_init__(self):
        rows = tuple(tuple((float(a), float(b)) for a, b in row) for row in self.entries)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("payoff table must be 2x2")
        if not all(math.isfinite(x) for row in rows for pair in row for x in pair):
            raise ValueError("payoff entries must be finite")
        object.__setattr__(self, "entries", rows)

    def __getitem__(self, profile: str) -> Payoff:
        """Payoff for a profile given as labels ("CD") or bits ("01")."""
        if profile in PROFILES:
            return self.entries[int(profile[0])][int(profile[1])]
        keys = self.keys()
        if profile not in keys:
            raise KeyError(profile)
        i = keys.index(profile)
        return self.entries[i // 2][i % 2]

    def keys(self) -> list[str]:
        return [a + b for a, b in product(self.labels, repeat=2)]

    def outcome_map(self) -> dict[str, Payoff]:
        return {bits: self[bits] for bits in PROFILES}

    @classmethod
    def from_mapping(cls, data: Mapping[str, Sequence[float]], labels=("C", "D")) -> "PayoffTable":
        keys = [a + b for a, b in product(labels, repeat=2)]
        missing = [k for k in keys if k not in data]
        if missing or len(data) != 4:
            raise ValueError(f"payoff table needs exactly the keys {keys}")
        pairs = []
        for k in keys:
            v = data[k]
            if len(v) != 2:
                raise ValueError(f"entry {k} must be an [a, b] pair")
            pairs.append((v[0], v[1]))
        return cls(((pairs[0], pairs[1]), (pairs[2], pairs[3])), tuple(labels))

    @classmethod
    def from_json(cls, path) -> "PayoffTable":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        labels = ("S1", "S2") if "S1S1" in data else ("C", "D")
        return cls.from_mapping(data, labels)


PRISONERS_DILEMMA = PayoffTable((((3, 3), (0, 5)), ((5, 0), (1, 1))))
ZERO_SUM = PayoffTable((((0, 0), (-2, 2)), ((1, -1), (0, 0))), labels=("S1", "S2"))

# payoff-register bitstring -> (payA, payB)
ENTANGLED_PD_CODING: dict[str, Payoff] = {"00": (1.0, 1.0), "01": (0.0, 5.0), "10": (5.0, 0.0), "11": (3.0, 3.0)}
ENTANGLED_ZERO_SUM_CODING: dict[str, Payoff] = {"00": (0.0, 0.0), "01": (-1.0, 1.0), "10": (2.0, -2.0), "11": (0.0, 0.0)}


def check_coding(coding: Mapping[str, Sequence[float]]) -> dict[str, Payoff]:
    if set(coding) != set(PROFILES):
        raise ValueError(f"payoff coding must map exactly {list(PROFILES)}")
    out = {}
    for k in PROFILES:
        a, b = coding[k]
        out[k] = (float(a), float(b))
    return out


def load_coding(path) -> dict[str, Payoff]:
    return check_coding(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True, eq=False)
class GameResult:
    payoff_distribution: dict[Payoff, float]
    expected_payoffs: Payoff
    final_state: StateVector
    register: tuple[int, ...]
    register_probabilities: dict[str, float] = field(default_factory=dict)
    register_coding: dict[str, Payoff] = field(default_factory=dict)


def decode(state: StateVector, register: Sequence[int], coding: Mapping[str, Payoff]) -> GameResult:
    """Measure ``register`` and map each bitstring through ``coding``."""
    probs = outcome_probabilities(state, register)
    dist: dict[Payoff, float] = {}
    for bits, p in probs.items():
        pay = coding[bits]
        dist[pay] = dist.get(pay, 0.0) + p
    exp_a = sum(p * pay[0] for pay, p in dist.items())
    exp_b = sum(p * pay[1] for pay, p in dist.items())
    return GameResult(dist, (exp_a, exp_b), state, tuple(register), probs, dict(coding))


# --- EWL prisoner's dilemma -------------------------------------------------

def ewl_final_state(gamma: float, pA: Strategy, pB: Strategy) -> StateVector:
    J = entangler(gamma)
    psi = apply_unitary(make_state(2), J, [1, 2])
    psi = apply_unitary(psi, tensor_product(strategy_unitary(pA), strategy_unitary(pB)), [1, 2])
    return apply_unitary(psi, J.conj().T, [1, 2])


def expected_payoff_quantum(state: StateVector, table: PayoffTable = PRISONERS_DILEMMA) -> Payoff:
    if state.n_qubits != 2:
        raise DimensionError(f"expected a 2-qubit state, got {state.n_qubits}")
    probs = np.abs(state.amplitudes) ** 2
    pays = np.array([table[bits] for bits in PROFILES])
    a, b = probs @ pays
    return float(a), float(b)


def ewl_play(gamma: float, pA: Strategy, pB: Strategy, table: PayoffTable = PRISONERS_DILEMMA) -> GameResult:
    state = ewl_final_state(gamma, pA, pB)
    return decode(state, (1, 2), table.outcome_map())


def _check_prob(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name}={x!r} is not a probability")
    return x


def expected_payoff_classical(table: PayoffTable, r: float, q: float) -> Payoff:
    """r, q: probabilities that A, B cooperate (play the first strategy)."""
    r, q = _check_prob("r", r), _check_prob("q", q)
    weights = (r * q, r * (1 - q), (1 - r) * q, (1 - r) * (1 - q))
    a = sum(w * table[bits][0] for w, bits in zip(weights, PROFILES))
    b = sum(w * table[bits][1] for w, bits in zip(weights, PROFILES))
    return a, b


# --- quantum/classical payoff match ------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    target: Payoff
    alpha: Payoff
    beta: Payoff
    gamma: Payoff
    # None when a ratio in the inequality chain has a zero denominator
    literal_inequality_holds: Optional[bool]
    solver_solution: Optional[tuple[float, float]]
    residual: Optional[float]


EQUIVALENCE_TOL = 1e-9


def payoff_coefficients(table: PayoffTable) -> tuple[Payoff, Payoff, Payoff]:
    """(alpha, beta, gamma) per player: payoff = DD + alpha r + beta q + gamma r q."""
    cc, cd, dc, dd = (table[b] for b in PROFILES)
    alpha = tuple(cd[i] - dd[i] for i in range(2))
    beta = tuple(dc[i] - dd[i] for i in range(2))
    gamma = tuple(cc[i] - cd[i] - dc[i] + dd[i] for i in range(2))
    return alpha, beta, gamma


def _literal_condition(table, target, alpha, beta, gamma) -> Optional[bool]:
    dd = table["11"]
    num, den = target[1] - dd[1], target[0] - dd[0]
    if 0.0 in (den, alpha[0], gamma[0], beta[0]):
        return None
    lower = max(num / den, alpha[1] / alpha[0])
    ratio = gamma[1] / gamma[0]
    return bool(lower <= ratio <= beta[1] / beta[0])


def _residuals(table, target, rq):
    r, q = rq
    r, q = min(max(r, 0.0), 1.0), min(max(q, 0.0), 1.0)
    a, b = expected_payoff_classical(table, r, q)
    return np.array([a - target[0], b - target[1]])


def _newton_polish(alpha, beta, gamma, shifted, r, q, steps=8):
    for _ in range(steps):
        f = np.array([alpha[i] * r + beta[i] * q + gamma[i] * r * q - shifted[i] for i in range(2)])
        jac = np.array([[alpha[i] + gamma[i] * q, beta[i] + gamma[i] * r] for i in range(2)])
        try:
            dr, dq = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            break
        r, q = r + dr, q + dq
    return r, q


def _closed_form_candidates(alpha, beta, gamma, shifted):
    # eliminate q between the two bilinear equations -> quadratic in r
    tA, tB = shifted
    c2 = alpha[1] * gamma[0] - alpha[0] * gamma[1]
    c1 = tA * gamma[1] - alpha[0] * beta[1] - tB * gamma[0] + alpha[1] * beta[0]
    c0 = tA * beta[1] - tB * beta[0]
    scale = max(abs(c2), abs(c1), abs(c0), 1.0)
    if abs(c2) > 1e-14 * scale:
        disc = c1 * c1 - 4 * c2 * c0
        if disc < -1e-12 * scale * scale:
            return []
        sq = math.sqrt(max(disc, 0.0))
        qq = -0.5 * (c1 + math.copysign(sq, c1))
        roots = [qq / c2] + ([c0 / qq] if qq != 0 else [])
    elif abs(c1) > 1e-14 * scale:
        roots = [-c0 / c1]
    else:
        return []
    out = []
    for r in roots:
        dens = [beta[i] + gamma[i] * r for i in range(2)]
        i = int(abs(dens[1]) > abs(dens[0]))
        if abs(dens[i]) < 1e-14:
            continue
        q = (shifted[i] - alpha[i] * r) / dens[i]
        out.append((r, q))
    return out


def classical_equivalence(table: PayoffTable, target: Sequence[float]) -> EquivalenceReport:
    """Find classical cooperate probabilities (r, q) whose mixed payoffs equal ``target``."""
    target = (float(target[0]), float(target[1]))
    if not all(math.isfinite(t) for t in target):
        raise ValueError("target payoffs must be finite")
    alpha, beta, gamma = payoff_coefficients(table)
    literal = _literal_condition(table, target, alpha, beta, gamma)
    dd = table["11"]
    shifted = (target[0] - dd[0], target[1] - dd[1])

    best = None
    for r, q in _closed_form_candidates(alpha, beta, gamma, shifted):
        r, q = _newton_polish(alpha, beta, gamma, shifted, r, q)
        if -1e-9 <= r <= 1 + 1e-9 and -1e-9 <= q <= 1 + 1e-9:
            rq = (min(max(r, 0.0), 1.0), min(max(q, 0.0), 1.0))
            res = float(np.max(np.abs(_residuals(table, target, rq))))
            if best is None or res < best[1]:
                best = (rq, res)

    if best is None or best[1] > EQUIVALENCE_TOL:
        # grid scan for a start point, then bounded least squares
        grid = np.linspace(0.0, 1.0, 200)
        R, Q = np.meshgrid(grid, grid, indexing="ij")
        A = dd[0] + alpha[0] * R + beta[0] * Q + gamma[0] * R * Q - target[0]
        B = dd[1] + alpha[1] * R + beta[1] * Q + gamma[1] * R * Q - target[1]
        i, j = np.unravel_index(np.argmin(np.maximum(np.abs(A), np.abs(B))), A.shape)
        fit = least_squares(
            lambda x: _residuals(table, target, x),
            x0=[grid[i], grid[j]],
            bounds=([0.0, 0.0], [1.0, 1.0]),
            xtol=1e-15, ftol=1e-15, gtol=1e-15,
        )
        rq = (float(fit.x[0]), float(fit.x[1]))
        res = float(np.max(np.abs(_residuals(table, target, rq))))
        if best is None or res < best[1]:
            best = (rq, res)

    solution, residual = None, None
    if best is not None:
        residual = best[1]
        if residual <= EQUIVALENCE_TOL:
            solution = (float(best[0][0]), float(best[0][1]))
    return EquivalenceReport(target, alpha, beta, gamma, literal, solution, residual)


# --- prisoner's dilemma with entangled payoffs ------------------------------

_SQ2 = 1 / math.sqrt(2)
CLASSICAL_MOVES = ("I", "X")


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int(bits, 2)] = 1.0
    return v


def entangled_pd_input(pA: Strategy, pB: Strategy) -> StateVector:
    """|00>_payoff (x) (U_A (x) U_B) J(pi/2) |00>."""
    strat = apply_unitary(make_state(2), entangler(math.pi / 2), [1, 2])
    strat = apply_unitary(strat, tensor_product(strategy_unitary(pA), strategy_unitary(pB)), [1, 2])
    return StateVector(4, np.kron(_ket("00"), strat.amplitudes))


def entangled_pd_targets() -> dict[tuple[str, str], np.ndarray]:
    """Output states the payoff-entangling unitary must produce for classical moves."""
    plus = (_ket("00") + 1j * _ket("11")) * _SQ2
    minus = (_ket("00") - 1j * _ket("11")) * _SQ2
    both = np.kron(_ket("00"), plus), np.kron(_ket("11"), minus)
    return {
        ("I", "I"): (both[0] + both[1]) * _SQ2,
        ("I", "X"): np.kron(_ket("11"), _ket("01")),
        ("X", "I"): np.kron(_ket("11"), _ket("10")),
        ("X", "X"): (both[0] - both[1]) * _SQ2,
    }


@lru_cache(maxsize=None)
def entangled_pd_unitary() -> np.ndarray:
    """16x16 unitary entangling the payoff pair (qubits 1-2) with the strategy pair (3-4).

    Fixed by linearity from the four classical plays; the remaining columns
    come from the deterministic completion of ``complete_unitary``.
    """
    targets = entangled_pd_targets()
    pairs = [(entangled_pd_input(a, b), targets[a, b]) for a, b in product(CLASSICAL_MOVES, repeat=2)]
    return complete_unitary(pairs)


def entangled_pd_play(pA: Strategy, pB: Strategy, coding: Optional[Mapping[str, Payoff]] = None) -> GameResult:
    coding = ENTANGLED_PD_CODING if coding is None else check_coding(coding)
    state = apply_unitary(entangled_pd_input(pA, pB), entangled_pd_unitary(), [1, 2, 3, 4])
    return decode(state, (1, 2), coding)


def entangled_pd_uniform_mix(coding: Optional[Mapping[str, Payoff]] = None) -> dict[Payoff, float]:
    """Payoff distribution when both players pick I or X with probability 1/2."""
    mix: dict[Payoff, float] = {}
    for a, b in product(CLASSICAL_MOVES, repeat=2):
        for pay, p in entangled_pd_play(a, b, coding).payoff_distribution.items():
            mix[pay] = mix.get(pay, 0.0) + p / 4
    return mix


# --- bipartite zero-sum game ---------------------------------------------

@lru_cache(maxsize=None)
def zero_sum_uab() -> np.ndarray:
    """CNOT(1->3) CNOT(2->4) SWAP(2,3) (I H I H) on four qubits."""
    H, I2 = named_gate("H"), np.eye(2)
    ops = [(np.kron(np.kron(I2, H), np.kron(I2, H)), [1, 2, 3, 4]),
           (named_gate("SWAP"), [2, 3]),
           (named_gate("CNOT"), [2, 4]),
           (named_gate("CNOT"), [1, 3])]
    cols = []
    for j in range(16):
        psi = StateVector(4, _ket(format(j, "04b")))
        for U, t in ops:
            psi = apply_unitary(psi, U, t)
        cols.append(psi.amplitudes)
    return as_unitary(np.column_stack(cols))


def zero_sum_input(pA: Strategy, pB: Strategy) -> StateVector:
    """(U_A|0>) (x) |+> (x) (U_B|0>) (x) |+>."""
    plus = np.array([_SQ2, _SQ2], dtype=np.complex128)
    a_col = strategy_unitary(pA)[:, 0]
    b_col = strategy_unitary(pB)[:, 0]
    return StateVector(4, np.kron(np.kron(a_col, plus), np.kron(b_col, plus)))


def shared_pairs_state(a: complex, b: complex, c: complex, d: complex) -> np.ndarray:
    """ac|0000> + bc|1010> + ad|0101> + bd|1111>."""
    return a * c * _ket("0000") + b * c * _ket("1010") + a * d * _ket("0101") + b * d * _ket("1111")


def zero_sum_win_formula(abs_a2: float, abs_c2: float) -> float:
    """A's win probability from |a|^2 and |c|^2."""
    return 1.0 - (abs_a2 - 2 * abs_a2 * abs_c2 + abs_c2)


class ZeroSumOutcome(NamedTuple):
    p_a: float
    p_b: float
    final_state: StateVector


def _agreement(state: StateVector, qubits: Sequence[int]) -> float:
    probs = outcome_probabilities(state, qubits)
    return probs.get("00", 0.0) + probs.get("11", 0.0)


def zero_sum_play(pA: Strategy, pB: Strategy) -> ZeroSumOutcome:
    """A wins when qubits 1 and 2 agree; B wins when qubits 3 and 4 differ."""
    state = apply_unitary(zero_sum_input(pA, pB), zero_sum_uab(), [1, 2, 3, 4])
    a = strategy_unitary(pA)[0, 0]
    c = strategy_unitary(pB)[0, 0]
    p_a = zero_sum_win_formula(abs(a) ** 2, abs(c) ** 2)
    simulated = _agreement(state, [1, 2])
    b_side = 1.0 - _agreement(state, [3, 4])
    if abs(simulated - p_a) > 1e-12 or abs(b_side - (1.0 - p_a)) > 1e-12:
        raise ConsistencyError(f"simulated win probability {simulated!r} disagrees with formula {p_a!r}")
    return ZeroSumOutcome(simulated, b_side, state)


# unit stake: the winner gets +1, the loser -1 (A wins when qubits 1, 2 agree)
ZERO_SUM_WIN_CODING: dict[str, Payoff] = {"00": (1.0, -1.0), "01": (-1.0, 1.0), "10": (-1.0, 1.0), "11": (1.0, -1.0)}


def zero_sum_result(pA: Strategy, pB: Strategy) -> GameResult:
    outcome = zero_sum_play(pA, pB)
    return decode(outcome.final_state, (1, 2), ZERO_SUM_WIN_CODING)


def zero_sum_classical(p: float, q: float) -> float:
    """A's win probability when A plays I w.p. p and B plays I w.p. q: p - 2pq + q."""
    p, q = _check_prob("p", p), _check_prob("q", q)
    return p - 2 * p * q + q


# --- zero-sum game with entangled payoffs ------------------------------------

def entangled_zero_sum_trace(pA: Strategy, pB: Strategy) -> list[StateVector]:
    """States after each stage: initial, local preparation, U_AB, payoff CNOTs."""
    UA, UB, H = strategy_unitary(pA), strategy_unitary(pB), named_gate("H")
    psi = make_state(6)
    states = [psi]
    for U, q in ((UA, 3), (H, 4), (UB, 5), (H, 6)):
        psi = apply_unitary(psi, U, [q])
    states.append(psi)
    psi = apply_unitary(psi, zero_sum_uab(), [3, 4, 5, 6])
    states.append(psi)
    cnot = named_gate("CNOT")
    psi = apply_unitary(apply_unitary(psi, cnot, [3, 1]), cnot, [3, 2])
    states.append(psi)
    return states


def _expected_trace(UA, UB) -> list[np.ndarray]:
    a, b = UA[:, 0]
    c, d = UB[:, 0]
    plus = np.array([_SQ2, _SQ2])
    s2 = np.kron(_ket("00"), np.kron(np.kron(UA[:, 0], plus), np.kron(UB[:, 0], plus)))
    s3 = np.kron(_ket("00"), shared_pairs_state(a, b, c, d))
    s4 = (a * c * _ket("000000") + b * c * _ket("111010")
          + a * d * _ket("000101") + b * d * _ket("111111"))
    return [_ket("000000"), s2, s3, s4]


def entangled_zero_sum_play(pA: Strategy, pB: Strategy, coding: Optional[Mapping[str, Payoff]] = None) -> GameResult:
    coding = ENTANGLED_ZERO_SUM_CODING if coding is None else check_coding(coding)
    trace = entangled_zero_sum_trace(pA, pB)
    expected = _expected_trace(strategy_unitary(pA), strategy_unitary(pB))
    for k, (got, want) in enumerate(zip(trace, expected), start=1):
        if np.max(np.abs(got.amplitudes - want)) > 1e-12:
            raise ConsistencyError(f"stage {k} state deviates from its closed form")
    return decode(trace[-1], (1, 2), coding)



def sample_outcomes(probabilities: Mapping[str, float], shots: int, rng: np.random.Generator) -> list[str]:
    """Draw ``shots`` bitstrings from an exact outcome distribution."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    keys = sorted(probabilities)
    p = np.array([probabilities[k] for k in keys])
    idx = rng.choice(len(keys), size=shots, p=p / p.sum())
    return [keys[i] for i in idx]
