"""Quantum games with entangled strategies and payoffs on a dense state-vector simulator."""
from .gates import StrategyParams, entangler, entangler_decomposed, named_gate, strategy_gate
from .qcore import StateVector, apply_unitary, make_state, outcome_probabilities

__version__ = "0.1.0"
