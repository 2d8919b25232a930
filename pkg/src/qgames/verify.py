"""Self-check of every reproduced quantitative result, one line per check."""
from __future__ import annotations

import contextlib
import io
import math
import sys
from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Optional, TextIO

import numpy as np

from . import games
from .equilibrium import nash_profiles, pareto_optimal, table_payoff_fn
from .gates import StrategyParams, entangler, entangler_decomposed, named_gate, strategy_gate
from .qcore import (
    StateVector,
    align_phase,
    apply_unitary,
    check_unitary,
    complete_unitary,
    outcome_probabilities,
)

SEED = 20240611


@dataclass
class Check:
    name: str
    measured: str
    expected: str
    passed: bool


def random_strategy(rng: np.random.Generator) -> StrategyParams:
    return StrategyParams(rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi))


def _ket(bits: str) -> np.ndarray:
    return StateVector.basis(bits).amplitudes


def _check_output_states(coding) -> Check:
    s = 1 / math.sqrt(2)
    plus = np.kron(_ket("00"), (_ket("00") + 1j * _ket("11")) * s)
    minus = np.kron(_ket("11"), (_ket("00") - 1j * _ket("11")) * s)
    want = {
        ("I", "I"): (plus + minus) * s,
        ("I", "X"): np.kron(_ket("11"), _ket("01")),
        ("X", "I"): np.kron(_ket("11"), _ket("10")),
        ("X", "X"): (plus - minus) * s,
    }
    err = max(
        np.max(np.abs(align_phase(games.entangled_pd_play(a, b, coding).final_state.amplitudes) - align_phase(w)))
        for (a, b), w in want.items()
    )
    return Check("entangled PD output states", f"max dev {err:.2e}", "<= 1e-12", err <= 1e-12)


def _check_mix(coding) -> Check:
    mix = games.entangled_pd_uniform_mix(coding)
    pareto, nash = mix.get((3.0, 3.0), 0.0), mix.get((1.0, 1.0), 0.0)
    ok = abs(pareto - 0.75) <= 1e-12 and abs(nash - 0.25) <= 1e-12 and abs(sum(mix.values()) - 1) <= 1e-12
    return Check("uniform mix Pareto/Nash", f"P(3,3)={pareto:.15g} P(1,1)={nash:.15g}", "0.75 / 0.25", ok)


def _check_forbidden(coding) -> Check:
    worst = 0.0
    for a, b in product(games.CLASSICAL_MOVES, repeat=2):
        dist = games.entangled_pd_play(a, b, coding).payoff_distribution
        worst = max(worst, dist.get((5.0, 0.0), 0.0), dist.get((0.0, 5.0), 0.0))
    return Check("forbidden outcomes (5,0),(0,5)", f"max P={worst:.2e}", "<= 1e-12", worst <= 1e-12)


def _check_zero_sum(rng) -> Check:
    err = 0.0
    for _ in range(500):
        pa, pb = random_strategy(rng), random_strategy(rng)
        out = games.zero_sum_play(pa, pb)
        a2, c2 = abs(strategy_gate(pa)[0, 0]) ** 2, abs(strategy_gate(pb)[0, 0]) ** 2
        formula = 1 - (a2 - 2 * a2 * c2 + c2)
        err = max(err, abs(out.p_a - formula), abs(out.p_b - (1 - formula)))
    return Check("zero-sum win probability (500 pairs)", f"max dev {err:.2e}", "<= 1e-12", err <= 1e-12)


def _check_entangled_zero_sum(rng) -> Check:
    err = 0.0
    for _ in range(500):
        # the play itself validates every intermediate stage against its closed form
        res = games.entangled_zero_sum_play(random_strategy(rng), random_strategy(rng))
        err = max(err, abs(res.expected_payoffs[0]), abs(res.expected_payoffs[1]))
    return Check("entangled zero-sum payoff (500 pairs)", f"max |payoff| {err:.2e}", "(0,0) within 1e-12", err <= 1e-12)


def _check_embedding() -> Check:
    err = 0.0
    thetas = np.linspace(0, math.pi, 20)
    for g in np.linspace(0, math.pi / 2, 10):
        for ta in thetas:
            for tb in thetas:
                st = games.ewl_final_state(g, StrategyParams(ta), StrategyParams(tb))
                r, q = math.cos(ta / 2) ** 2, math.cos(tb / 2) ** 2
                want = np.array([r * q, r * (1 - q), (1 - r) * q, (1 - r) * (1 - q)])
                err = max(err, float(np.max(np.abs(np.abs(st.amplitudes) ** 2 - want))))
    return Check("classical embedding (10x20x20)", f"max dev {err:.2e}", "<= 1e-9", err <= 1e-9)


def _check_entangler() -> Check:
    err = max(float(np.max(np.abs(entangler(g) - entangler_decomposed(g))))
              for g in np.linspace(0, math.pi / 2, 50))
    return Check("entangler decomposition (50 gammas)", f"max dev {err:.2e}", "<= 1e-12", err <= 1e-12)


def _check_pd_equilibrium() -> Check:
    table = games.PRISONERS_DILEMMA
    moves = ["C", "D"]
    profiles = nash_profiles(table_payoff_fn(table), moves, moves)
    found = [(moves[p.strategy_a], moves[p.strategy_b], p.payoffs) for p in profiles]
    mask = pareto_optimal([table[k] for k in ("CC", "CD", "DC", "DD")])
    ok = found == [("D", "D", (1.0, 1.0))] and mask[3] is False and mask[0] is True
    return Check("classical PD Nash/Pareto", f"nash={found} pareto(CC,DD)={mask[0]},{mask[3]}",
                 "nash=[(D,D,(1,1))] pareto=True,False", ok)


def _check_equivalence(rng) -> Check:
    table = games.PRISONERS_DILEMMA
    err, misses = 0.0, 0
    for _ in range(100):
        target = games.expected_payoff_classical(table, rng.uniform(), rng.uniform())
        rep = games.classical_equivalence(table, target)
        if rep.solver_solution is None:
            misses += 1
            continue
        got = games.expected_payoff_classical(table, *rep.solver_solution)
        err = max(err, abs(got[0] - target[0]), abs(got[1] - target[1]))
    return Check("equivalence solver (100 targets)", f"misses={misses} max dev {err:.2e}",
                 "0 misses, <= 1e-9", misses == 0 and err <= 1e-9)


def _cli_twice() -> bool:
    from .cli import main

    argvs = [
        ["run", "pd-entangled", "--a", "I", "--b", "X"],
        ["run", "zerosum", "--theta-a", "0.7", "--psi-b", "1.1", "--theta-b", "2.0"],
        ["sweep", "pd-quantum", "--param", "theta_a", "--lo", "0", "--hi", "3.14159", "--steps", "7", "--format", "csv"],
        ["sample", "pd-entangled", "--a", "I", "--b", "I", "--shots", "500", "--seed", "3"],
    ]
    for argv in argvs:
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                if main(argv) != 0:
                    return False
            outs.append(buf.getvalue())
        if outs[0] != outs[1]:
            return False
    return True


def _check_properties(rng) -> Check:
    gates = [named_gate(n) for n in ("I", "X", "Y", "Z", "H", "CNOT", "SWAP")]
    gates += [strategy_gate(random_strategy(rng)) for _ in range(50)]
    gates += [entangler(g) for g in np.linspace(0, math.pi / 2, 10)]
    gates += [games.entangled_pd_unitary(), games.zero_sum_uab()]
    unitary = all(check_unitary(g, 1e-10) for g in gates)

    norm_err = 0.0
    psi = StateVector.basis("000")
    for _ in range(50):
        U = strategy_gate(random_strategy(rng))
        psi = apply_unitary(psi, U, [int(rng.integers(1, 4))])
        psi = apply_unitary(psi, entangler(rng.uniform(0, math.pi / 2)), [int(t) for t in rng.permutation([1, 2, 3])[:2]])
        norm_err = max(norm_err, abs(float(np.vdot(psi.amplitudes, psi.amplitudes).real) - 1))
        norm_err = max(norm_err, abs(sum(outcome_probabilities(psi, [1, 2, 3]).values()) - 1))

    targets = games.entangled_pd_targets()
    pairs = [(games.entangled_pd_input(a, b), targets[a, b]) for a, b in product(games.CLASSICAL_MOVES, repeat=2)]
    deterministic = np.array_equal(complete_unitary(pairs), complete_unitary(pairs)) and _cli_twice()
    ok = unitary and norm_err <= 1e-12 and deterministic
    return Check("unitarity / norm / determinism",
                 f"unitary={unitary} norm dev {norm_err:.2e} deterministic={deterministic}",
                 "True, <= 1e-12, True", ok)


def run_checks(pd_coding: Optional[Mapping] = None) -> list[Check]:
    rng = np.random.default_rng(SEED)
    steps: list[Callable[[], Check]] = [
        lambda: _check_output_states(pd_coding),
        lambda: _check_mix(pd_coding),
        lambda: _check_forbidden(pd_coding),
        lambda: _check_zero_sum(rng),
        lambda: _check_entangled_zero_sum(rng),
        _check_embedding,
        _check_entangler,
        _check_pd_equilibrium,
        lambda: _check_equivalence(rng),
        lambda: _check_properties(rng),
    ]
    return [step() for step in steps]


def verify_paper(pd_coding: Optional[Mapping] = None, out: TextIO = None) -> bool:
    out = out or sys.stdout
    checks = run_checks(pd_coding)
    for i, c in enumerate(checks, start=1):
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} [{i:2d}] {c.name}: measured {c.measured}; expected {c.expected}", file=out)
    n_pass = sum(c.passed for c in checks)
    print(f"{n_pass}/{len(checks)} checks passed", file=out)
    return n_pass == len(checks)
