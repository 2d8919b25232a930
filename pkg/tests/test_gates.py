import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy.linalg import expm

from conftest import ket, strategy_params
from qgames.gates import (
    DomainError,
    StrategyParams,
    entangler,
    entangler_decomposed,
    named_gate,
    strategy_gate,
    strategy_unitary,
)
from qgames.qcore import check_unitary

X = np.array([[0, 1], [1, 0]], dtype=complex)
XX = np.kron(X, X)
GAMMA_GRID = np.linspace(0, math.pi / 2, 50)


def expm_entangler(gamma):
    # independent route: numerical matrix exponential
    return expm(0.5j * gamma * XX)


class TestStrategyGate:
    def test_identity(self):
        np.testing.assert_array_equal(strategy_gate(StrategyParams(0, 0, 0)), np.eye(2))

    def test_defect_is_flip_up_to_phase(self):
        U = strategy_gate(StrategyParams(math.pi, 0, 0))
        np.testing.assert_allclose(U, 1j * X, atol=1e-15)

    def test_unitary_at_sample_point(self):
        assert check_unitary(strategy_gate(StrategyParams(0.7, 0.3, -1.1)), 1e-10)

    @settings(max_examples=1000, deadline=None)
    @given(strategy_params)
    def test_unitary_everywhere(self, p):
        assert check_unitary(strategy_gate(p), 1e-12)

    @settings(max_examples=200, deadline=None)
    @given(strategy_params)
    def test_zero_phases_is_x_rotation(self, p):
        # U(theta, 0, 0) = exp(i theta X / 2), hence commutes with X
        U = strategy_gate(StrategyParams(p.theta))
        np.testing.assert_allclose(U, expm(0.5j * p.theta * X), atol=1e-12)
        np.testing.assert_allclose(U @ X, X @ U, atol=1e-12)

    def test_explicit_entries(self):
        t, f, s = 1.2, 0.4, -2.3
        U = strategy_gate(StrategyParams(t, f, s))
        c, sn = math.cos(t / 2), math.sin(t / 2)
        want = [[np.exp(-1j * f) * c, 1j * np.exp(1j * s) * sn],
                [1j * np.exp(-1j * s) * sn, np.exp(1j * f) * c]]
        np.testing.assert_allclose(U, want, atol=1e-15)

    @pytest.mark.parametrize("args", [(-0.1, 0, 0), (3.2, 0, 0), (1, 3.2, 0), (1, 0, -3.2), (math.nan, 0, 0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            StrategyParams(*args)

    def test_endpoints_accepted(self):
        StrategyParams(math.pi, -math.pi, math.pi)
        StrategyParams(3.14159265358979323, 0, 0)


class TestEntangler:
    def test_zero_is_identity(self):
        np.testing.assert_array_equal(entangler(0), np.eye(4))

    def test_maximal_on_00(self):
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(entangler(math.pi / 2) @ ket("00"), [s, 0, 0, 1j * s], atol=1e-15)

    def test_pi_over_3_on_00(self):
        np.testing.assert_allclose(entangler(math.pi / 3) @ ket("00"), [math.sqrt(3) / 2, 0, 0, 0.5j], atol=1e-15)

    @pytest.mark.parametrize("g", GAMMA_GRID)
    def test_matches_matrix_exponential(self, g):
        np.testing.assert_allclose(entangler(g), expm_entangler(g), atol=1e-12)

    @pytest.mark.parametrize("g", GAMMA_GRID)
    def test_unitary_and_commutes_with_xx(self, g):
        J = entangler(g)
        np.testing.assert_allclose(J.conj().T @ J, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(J @ XX, XX @ J, atol=1e-12)

    @pytest.mark.parametrize("g", [-0.01, math.pi / 2 + 0.01, math.inf])
    def test_domain(self, g):
        with pytest.raises(DomainError):
            entangler(g)
        with pytest.raises(DomainError):
            entangler_decomposed(g)


class TestDecomposition:
    def test_zero(self):
        np.testing.assert_allclose(entangler_decomposed(0), np.eye(4), atol=1e-15)

    def test_maximal(self):
        np.testing.assert_allclose(entangler_decomposed(math.pi / 2), entangler(math.pi / 2), atol=1e-12)

    def test_gamma_one_against_expm(self):
        np.testing.assert_allclose(entangler_decomposed(1.0), expm_entangler(1.0), atol=1e-12)

    @pytest.mark.parametrize("g", GAMMA_GRID)
    def test_grid(self, g):
        np.testing.assert_allclose(entangler_decomposed(g), entangler(g), atol=1e-12)


class TestNamedGates:
    def test_x(self):
        np.testing.assert_array_equal(named_gate("X") @ ket("0"), ket("1"))

    def test_h(self):
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(named_gate("H") @ ket("0"), [s, s])

    def test_swap(self):
        np.testing.assert_array_equal(named_gate("SWAP") @ ket("01"), ket("10"))

    def test_cnot_control_is_first_qubit(self):
        np.testing.assert_array_equal(named_gate("CNOT") @ ket("10"), ket("11"))
        np.testing.assert_array_equal(named_gate("CNOT") @ ket("01"), ket("01"))

    @pytest.mark.parametrize("name", ["I", "X", "Y", "Z", "H", "CNOT", "SWAP"])
    def test_unitary(self, name):
        assert check_unitary(named_gate(name), 1e-12)

    def test_unknown(self):
        with pytest.raises(KeyError):
            named_gate("T")

    def test_read_only(self):
        with pytest.raises(ValueError):
            named_gate("X")[0, 0] = 5


def test_strategy_unitary_resolution():
    np.testing.assert_array_equal(strategy_unitary("X"), X)
    np.testing.assert_array_equal(strategy_unitary(StrategyParams()), np.eye(2))
    with pytest.raises(ValueError):
        strategy_unitary("CNOT")
