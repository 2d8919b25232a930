"""Acceptance criteria, one test each, at fixed tolerances.

Every test prints a single ``ACCEPTANCE [n] PASS|FAIL`` line.  Expected
values come from kets written out by hand, closed-form formulas, or a
numerical matrix exponential, never from the code path under test.
"""
import math
import subprocess
import sys
from itertools import product

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import ket, random_state
from qgames import games
from qgames.equilibrium import nash_profiles, pareto_optimal, table_payoff_fn
from qgames.gates import StrategyParams, entangler, entangler_decomposed, named_gate, strategy_gate
from qgames.qcore import StateVector, apply_unitary, check_unitary, complete_unitary

SEED = 7_2008
PAIRS = 500


@pytest.fixture
def report(capsys):
    def _report(n, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE [{n:2d}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
        assert ok, f"criterion {n} ({title}) failed: {detail}"
    return _report


def random_params(rng, k):
    return [StrategyParams(rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi))
            for _ in range(k)]


def aligned(v):
    v = np.asarray(v, dtype=complex)
    ref = v[np.flatnonzero(np.abs(v) > 1e-9)[0]]
    return v * abs(ref) / ref


def test_1_entangled_pd_output_states(report):
    half = 0.5
    want = {
        ("I", "I"): half * (ket("0000") + 1j * ket("0011") + ket("1100") - 1j * ket("1111")),
        ("I", "X"): ket("1101"),
        ("X", "I"): ket("1110"),
        ("X", "X"): half * (ket("0000") + 1j * ket("0011") - ket("1100") + 1j * ket("1111")),
    }
    dev = max(
        float(np.max(np.abs(aligned(games.entangled_pd_play(a, b).final_state.amplitudes) - aligned(w))))
        for (a, b), w in want.items()
    )
    report(1, "entangled PD output states", dev <= 1e-12, f"max componentwise deviation {dev:.2e} (tol 1e-12)")


def test_2_pareto_nash_mixing(report):
    mix = games.entangled_pd_uniform_mix()
    p33, p11 = mix.get((3.0, 3.0), 0.0), mix.get((1.0, 1.0), 0.0)
    others = sum(p for k, p in mix.items() if k not in {(3.0, 3.0), (1.0, 1.0)})
    ok = abs(p33 - 0.75) <= 1e-12 and abs(p11 - 0.25) <= 1e-12 and others <= 1e-12
    report(2, "uniform mix", ok, f"P(3,3)={p33!r} P(1,1)={p11!r} other={others:.1e} (expected 0.75 / 0.25, tol 1e-12)")


def test_3_forbidden_outcomes(report):
    worst = 0.0
    for a, b in product("IX", repeat=2):
        dist = games.entangled_pd_play(a, b).payoff_distribution
        worst = max(worst, dist.get((5.0, 0.0), 0.0), dist.get((0.0, 5.0), 0.0))
    report(3, "forbidden (5,0)/(0,5)", worst <= 1e-12, f"max probability {worst:.2e} (tol 1e-12)")


def test_4_zero_sum_win_probability(report):
    rng = np.random.default_rng(SEED)
    dev = 0.0
    for pa, pb in zip(random_params(rng, PAIRS), random_params(rng, PAIRS)):
        out = games.zero_sum_play(pa, pb)
        a2, c2 = math.cos(pa.theta / 2) ** 2, math.cos(pb.theta / 2) ** 2
        p_a = 1 - (a2 - 2 * a2 * c2 + c2)
        probs = np.abs(out.final_state.amplitudes) ** 2
        agree_12 = sum(p for i, p in enumerate(probs) if format(i, "04b")[0] == format(i, "04b")[1])
        differ_34 = sum(p for i, p in enumerate(probs) if format(i, "04b")[2] != format(i, "04b")[3])
        dev = max(dev, abs(agree_12 - p_a), abs(differ_34 - (1 - p_a)), abs(out.p_a - p_a))
    report(4, "zero-sum win probability", dev <= 1e-12, f"{PAIRS} pairs, max deviation {dev:.2e} (tol 1e-12)")


def test_5_entangled_zero_sum(report):
    rng = np.random.default_rng(SEED + 1)
    s2 = 1 / math.sqrt(2)
    plus = np.array([s2, s2])
    pay_dev, stage_dev = 0.0, 0.0
    for pa, pb in zip(random_params(rng, PAIRS), random_params(rng, PAIRS)):
        res = games.entangled_zero_sum_play(pa, pb)
        pay_dev = max(pay_dev, abs(res.expected_payoffs[0]), abs(res.expected_payoffs[1]))
        a, b = strategy_gate(pa)[:, 0]
        c, d = strategy_gate(pb)[:, 0]
        want = [
            np.kron(ket("00"), np.kron(np.kron([a, b], plus), np.kron([c, d], plus))),
            np.kron(ket("00"), a * c * ket("0000") + b * c * ket("1010") + a * d * ket("0101") + b * d * ket("1111")),
            a * c * ket("000000") + b * c * ket("111010") + a * d * ket("000101") + b * d * ket("111111"),
        ]
        trace = games.entangled_zero_sum_trace(pa, pb)[1:]
        stage_dev = max(stage_dev, *(float(np.max(np.abs(t.amplitudes - w))) for t, w in zip(trace, want)))
    ok = pay_dev <= 1e-12 and stage_dev <= 1e-12
    report(5, "entangled zero-sum", ok, f"max |payoff| {pay_dev:.2e}, max stage deviation {stage_dev:.2e} (tol 1e-12)")


def test_6_classical_embedding(report):
    dev, pay_dev = 0.0, 0.0
    thetas = np.linspace(0, math.pi, 20)
    table = games.PRISONERS_DILEMMA
    for g in np.linspace(0, math.pi / 2, 10):
        for ta, tb in product(thetas, repeat=2):
            state = games.ewl_final_state(g, StrategyParams(ta, 0, 0), StrategyParams(tb, 0, 0))
            r, q = math.cos(ta / 2) ** 2, math.cos(tb / 2) ** 2
            want = np.array([r * q, r * (1 - q), (1 - r) * q, (1 - r) * (1 - q)])
            dev = max(dev, float(np.max(np.abs(np.abs(state.amplitudes) ** 2 - want))))
            quantum = games.expected_payoff_quantum(state, table)
            classical = (3 * want[0] + 0 * want[1] + 5 * want[2] + 1 * want[3],
                         3 * want[0] + 5 * want[1] + 0 * want[2] + 1 * want[3])
            pay_dev = max(pay_dev, abs(quantum[0] - classical[0]), abs(quantum[1] - classical[1]))
    ok = dev <= 1e-9 and pay_dev <= 1e-9
    report(6, "classical embedding", ok, f"10x20x20 grid, max probability deviation {dev:.2e}, payoff {pay_dev:.2e} (tol 1e-9)")


def test_7_entangler_identity(report):
    xx = np.kron(named_gate("X"), named_gate("X"))
    dev, dev_expm = 0.0, 0.0
    for g in np.linspace(0, math.pi / 2, 50):
        dev = max(dev, float(np.max(np.abs(entangler(g) - entangler_decomposed(g)))))
        dev_expm = max(dev_expm, float(np.max(np.abs(entangler_decomposed(g) - expm(0.5j * g * xx)))))
    ok = dev <= 1e-12 and dev_expm <= 1e-12
    report(7, "entangler decomposition", ok, f"50 gammas, max deviation {dev:.2e}, vs expm {dev_expm:.2e} (tol 1e-12)")


def test_8_classical_pd_equilibrium(report):
    table = games.PRISONERS_DILEMMA
    profiles = nash_profiles(table_payoff_fn(table), ["C", "D"], ["C", "D"])
    found = {("CD"[p.strategy_a], "CD"[p.strategy_b], p.payoffs) for p in profiles}
    mask = dict(zip([(3, 3), (0, 5), (5, 0), (1, 1)], pareto_optimal([(3, 3), (0, 5), (5, 0), (1, 1)])))
    ok = found == {("D", "D", (1.0, 1.0))} and mask[1, 1] is False and mask[3, 3] is True
    report(8, "classical PD equilibrium", ok, f"nash={sorted(found)}, pareto (3,3)={mask[3, 3]} (1,1)={mask[1, 1]}")


def test_9_equivalence_solver(report):
    rng = np.random.default_rng(SEED + 2)
    table = games.PRISONERS_DILEMMA
    dev, misses = 0.0, 0
    for r, q in rng.uniform(size=(100, 2)):
        # Table 1 mixed payoffs written out directly
        target = (3 * r * q + 5 * (1 - r) * q + (1 - r) * (1 - q),
                  3 * r * q + 5 * r * (1 - q) + (1 - r) * (1 - q))
        sol = games.classical_equivalence(table, target).solver_solution
        if sol is None:
            misses += 1
            continue
        rr, qq = sol
        got = (3 * rr * qq + 5 * (1 - rr) * qq + (1 - rr) * (1 - qq),
               3 * rr * qq + 5 * rr * (1 - qq) + (1 - rr) * (1 - qq))
        dev = max(dev, abs(got[0] - target[0]), abs(got[1] - target[1]))
    ok = misses == 0 and dev <= 1e-9
    report(9, "equivalence solver", ok, f"100 targets, misses={misses}, max residual {dev:.2e} (tol 1e-9)")


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "qgames", *argv], capture_output=True, text=True, check=True).stdout


def test_10_property_suite(report):
    rng = np.random.default_rng(SEED + 3)
    gates = [named_gate(n) for n in ("I", "X", "Y", "Z", "H", "CNOT", "SWAP")]
    gates += [strategy_gate(p) for p in random_params(rng, 200)]
    gates += [entangler(g) for g in np.linspace(0, math.pi / 2, 50)]
    gates += [entangler_decomposed(g) for g in np.linspace(0, math.pi / 2, 50)]
    gates += [games.entangled_pd_unitary(), games.zero_sum_uab()]
    unitary = all(check_unitary(g, 1e-10) for g in gates)

    norm_dev = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 7))
        psi = StateVector(n, random_state(rng, n))
        for _ in range(5):
            t = int(rng.integers(1, n + 1))
            psi = apply_unitary(psi, strategy_gate(random_params(rng, 1)[0]), [t])
            if n > 1:
                pair = [int(x) for x in rng.permutation(np.arange(1, n + 1))[:2]]
                psi = apply_unitary(psi, entangler(rng.uniform(0, math.pi / 2)), pair)
            norm_dev = max(norm_dev, abs(float(np.vdot(psi.amplitudes, psi.amplitudes).real) - 1))

    targets = games.entangled_pd_targets()
    pairs = [(games.entangled_pd_input(a, b), targets[a, b]) for a, b in product("IX", repeat=2)]
    completion_same = np.array_equal(complete_unitary(pairs), complete_unitary(pairs))

    commands = [
        ("run", "pd-entangled", "--a", "I", "--b", "X", "--format", "json"),
        ("run", "pd-quantum", "--gamma", "0.9", "--theta-a", "1.1", "--phi-a", "0.3", "--theta-b", "2.5"),
        ("run", "zerosum-entangled", "--theta-a", "0.4", "--psi-b", "-2", "--format", "csv"),
        ("sweep", "zerosum", "--param", "theta_a", "--lo", "0", "--hi", "3.1", "--steps", "5", "--format", "csv"),
        ("sample", "pd-entangled", "--a", "X", "--b", "X", "--shots", "2000", "--seed", "42"),
    ]
    cli_same = all(_cli(*c) == _cli(*c) for c in commands)
    ok = unitary and norm_dev <= 1e-12 and completion_same and cli_same
    report(10, "property suite", ok,
           f"unitary(1e-10)={unitary}, norm deviation {norm_dev:.2e} (tol 1e-12), "
           f"completion deterministic={completion_same}, CLI deterministic={cli_same}")
