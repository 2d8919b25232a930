"""Command-line front end.

    qgames run pd-entangled --a I --b X
    qgames run pd-quantum --gamma 1.5707963 --theta-a 0 --theta-b 0
    qgames sweep pd-quantum --gamma 0 --param theta_a --lo 0 --hi 3.141592653589793 --steps 3 --format csv
    qgames sample pd-entangled --a I --b I --shots 10000 --seed 7
    qgames verify-paper
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import games
from .gates import DomainError, StrategyParams, check_gamma, strategy_unitary
from .qcore import align_phase

GAMES = ("pd-quantum", "pd-entangled", "zerosum", "zerosum-entangled", "equivalence")
SWEEP_PARAMS = ("theta_a", "theta_b", "phi_a", "phi_b", "psi_a", "psi_b", "gamma")
BASIS_NOTE = "qubit 1 is the most significant bit: |b1...bn> has index sum(b_i * 2**(n-i))"
ZERO_SUM_NOTE = (
    "quantum rule: A wins when qubits 1,2 agree (I vs I gives P_A = 1); "
    "classical formula p - 2pq + q with p, q = probability of playing I gives 0 at p = q = 1"
)


class UsageError(Exception):
    """Bad flag combination; exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    game: str
    a: Union[StrategyParams, str] = StrategyParams()
    b: Union[StrategyParams, str] = StrategyParams()
    gamma: float = math.pi / 2
    table: Optional[str] = None
    coding: Optional[str] = None
    fmt: str = "json"
    shots: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.game not in GAMES:
            raise UsageError(f"unknown game {self.game!r}; choose from {', '.join(GAMES)}")
        if self.fmt not in ("json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.shots is not None and self.shots < 1:
            raise UsageError("--shots must be >= 1")
        check_gamma(self.gamma)
        if self.table is not None and self.game not in ("pd-quantum", "equivalence"):
            raise DomainError(f"--table is only used by pd-quantum and equivalence; {self.game} takes --coding")
        if self.coding is not None and self.game not in ("pd-entangled", "zerosum-entangled"):
            raise DomainError(f"--coding is only used by pd-entangled and zerosum-entangled")


@dataclass(frozen=True)
class SweepSpec:
    param: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise UsageError(f"unknown sweep parameter {self.param!r}; choose from {', '.join(SWEEP_PARAMS)}")
        if self.steps < 2:
            raise UsageError("--steps must be >= 2")
        if not self.lo <= self.hi:
            raise UsageError("--lo must not exceed --hi")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def _num(x: float) -> float:
    return float(f"{x:.15g}")


def _pair(p) -> list[float]:
    return [_num(p[0]), _num(p[1])]


def _strategy_repr(s) -> Union[str, dict]:
    if isinstance(s, str):
        return s
    return {"theta": _num(s.theta), "phi": _num(s.phi), "psi": _num(s.psi)}


def evaluate(config: RunConfig) -> tuple[games.GameResult, dict]:
    """Play one game; return the result and game-specific extras."""
    extras: dict = {}
    if config.game in ("pd-quantum", "equivalence"):
        table = games.PayoffTable.from_json(config.table) if config.table else games.PRISONERS_DILEMMA
        result = games.ewl_play(config.gamma, config.a, config.b, table)
        if config.game == "equivalence":
            rep = games.classical_equivalence(table, result.expected_payoffs)
            extras["equivalence"] = {
                "alpha": _pair(rep.alpha), "beta": _pair(rep.beta), "gamma": _pair(rep.gamma),
                "literal_inequality_holds": rep.literal_inequality_holds,
                "solver_solution": None if rep.solver_solution is None else _pair(rep.solver_solution),
                "residual": None if rep.residual is None else _num(rep.residual),
            }
    elif config.game == "pd-entangled":
        coding = games.load_coding(config.coding) if config.coding else None
        result = games.entangled_pd_play(config.a, config.b, coding)
    elif config.game == "zerosum":
        result = games.zero_sum_result(config.a, config.b)
        p = abs(strategy_unitary(config.a)[0, 0]) ** 2
        q = abs(strategy_unitary(config.b)[0, 0]) ** 2
        outcome = games.zero_sum_play(config.a, config.b)
        classical = games.zero_sum_classical(min(p, 1.0), min(q, 1.0))
        extras["win_probability"] = {
            "quantum": {"A": _num(outcome.p_a), "B": _num(outcome.p_b)},
            "classical": {"A": _num(classical), "B": _num(1 - classical), "p": _num(p), "q": _num(q)},
            "note": ZERO_SUM_NOTE,
        }
    else:
        coding = games.load_coding(config.coding) if config.coding else None
        result = games.entangled_zero_sum_play(config.a, config.b, coding)
    return result, extras


def report(config: RunConfig) -> dict:
    result, extras = evaluate(config)
    amps = align_phase(result.final_state.amplitudes)
    out = {
        "game": config.game,
        "strategies": {"A": _strategy_repr(config.a), "B": _strategy_repr(config.b)},
        "basis": BASIS_NOTE,
        "final_state": {
            "n_qubits": result.final_state.n_qubits,
            "amplitudes": [[_num(z.real), _num(z.imag)] for z in amps],
        },
        "register": list(result.register),
        "outcome_probabilities": {k: _num(v) for k, v in sorted(result.register_probabilities.items())},
        "payoff_distribution": [
            {"payoff": _pair(pay), "probability": _num(p)}
            for pay, p in sorted(result.payoff_distribution.items())
        ],
        "expected_payoffs": _pair(result.expected_payoffs),
    }
    if config.game in ("pd-quantum", "equivalence"):
        out["gamma"] = _num(config.gamma)
    out.update(extras)
    return out


def summary_row(config: RunConfig) -> dict:
    """Flat row used for CSV output and sweeps."""
    result, extras = evaluate(config)
    row = {"payoff_a": _num(result.expected_payoffs[0]), "payoff_b": _num(result.expected_payoffs[1])}
    if "win_probability" in extras:
        wp = extras["win_probability"]
        row.update(p_a=wp["quantum"]["A"], p_b=wp["quantum"]["B"], p_a_classical=wp["classical"]["A"])
    if "equivalence" in extras:
        sol = extras["equivalence"]["solver_solution"]
        row.update(r="" if sol is None else sol[0], q="" if sol is None else sol[1],
                   literal_inequality=extras["equivalence"]["literal_inequality_holds"])
    return row


def _with_param(config: RunConfig, name: str, value: float) -> RunConfig:
    if name == "gamma":
        if config.game not in ("pd-quantum", "equivalence"):
            raise DomainError(f"{config.game} has no gamma parameter")
        return dataclasses.replace(config, gamma=value)
    field_name, player = name.rsplit("_", 1)
    current = getattr(config, player)
    if isinstance(current, str):
        raise DomainError(f"cannot sweep {name} while player {player.upper()} plays named gate {current}")
    return dataclasses.replace(config, **{player: dataclasses.replace(current, **{field_name: value})})


def sweep(config: RunConfig, spec: SweepSpec) -> list[dict]:
    rows = []
    for v in spec.values():
        row = {spec.param: _num(v)}
        row.update(summary_row(_with_param(config, spec.param, float(v))))
        rows.append(row)
    return rows


def sample(config: RunConfig) -> dict:
    if config.shots is None or config.seed is None:
        raise UsageError("sampling needs both --shots and --seed")
    if config.game == "equivalence":
        raise DomainError("equivalence is an analysis, not a measurable game")
    result, _ = evaluate(config)
    rng = np.random.default_rng(config.seed)
    shots = games.sample_outcomes(result.register_probabilities, config.shots, rng)
    keys = sorted(result.register_probabilities)
    counts = {k: 0 for k in keys}
    for s in shots:
        counts[s] += 1
    coding = result.register_coding
    return {
        "game": config.game,
        "register": list(result.register),
        "shots": config.shots,
        "seed": config.seed,
        "outcomes": [
            {
                "bits": k,
                "payoff": _pair(coding[k]),
                "exact": _num(result.register_probabilities[k]),
                "count": counts[k],
                "frequency": _num(counts[k] / config.shots),
            }
            for k in keys
        ],
    }


_NUMBER_PAIR = re.compile(r"\[\s+(-?[0-9][0-9.e+-]*),\s+(-?[0-9][0-9.e+-]*)\s+\]")


def _json(obj) -> str:
    # keep [re, im] and payoff pairs on one line
    return _NUMBER_PAIR.sub(r"[\1, \2]", json.dumps(obj, indent=2))


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    fields: list[str] = []
    for r in rows:
        fields += [k for k in r if k not in fields]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _strategy_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("game_pos", nargs="?", metavar="GAME", choices=GAMES)
    p.add_argument("--game", choices=GAMES)
    p.add_argument("--gamma", type=float, default=math.pi / 2, help="entanglement, [0, pi/2]")
    for side in ("a", "b"):
        p.add_argument(f"--theta-{side}", type=float, default=0.0)
        p.add_argument(f"--phi-{side}", type=float, default=0.0)
        p.add_argument(f"--psi-{side}", type=float, default=0.0)
        p.add_argument(f"--{side}", choices=("I", "X"), help="named classical move; overrides the angles")
    p.add_argument("--table", help="JSON payoff table with keys CC, CD, DC, DD")
    p.add_argument("--coding", help="JSON payoff coding with keys 00, 01, 10, 11")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgames", description="Quantum game laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    _strategy_args(sub.add_parser("run", help="evaluate one game"))

    p = sub.add_parser("sweep", help="evaluate a game over a parameter grid")
    _strategy_args(p)
    p.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = sub.add_parser("sample", help="draw seeded measurement shots")
    _strategy_args(p)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, help="required; sampling is always seeded")

    p = sub.add_parser("verify-paper", help="check every reproduced result")
    p.add_argument("--coding", help="override the entangled prisoner's dilemma payoff coding")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.game and args.game_pos and args.game != args.game_pos:
        raise UsageError("conflicting game names")
    game = args.game or args.game_pos
    if game is None:
        raise UsageError("a game is required")

    def strategy(side):
        named = getattr(args, side)
        if named:
            return named
        return StrategyParams(getattr(args, f"theta_{side}"), getattr(args, f"phi_{side}"), getattr(args, f"psi_{side}"))

    return RunConfig(
        game=game, a=strategy("a"), b=strategy("b"), gamma=args.gamma,
        table=args.table, coding=args.coding, fmt=args.format,
        shots=getattr(args, "shots", None), seed=getattr(args, "seed", None),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify-paper":
            from .verify import verify_paper

            coding = games.load_coding(args.coding) if args.coding else None
            return 0 if verify_paper(pd_coding=coding) else 1

        config = config_from_args(args)
        if args.command == "run":
            if config.fmt == "json":
                print(_json(report(config)))
            else:
                sys.stdout.write(_csv([summary_row(config)]))
        elif args.command == "sweep":
            rows = sweep(config, SweepSpec(args.param, args.lo, args.hi, args.steps))
            if config.fmt == "json":
                print(_json({"game": config.game, "param": args.param, "rows": rows}))
            else:
                sys.stdout.write(_csv(rows))
        else:
            out = sample(config)
            if config.fmt == "json":
                print(_json(out))
            else:
                sys.stdout.write(_csv([{k: v for k, v in o.items() if k != "payoff"} |
                                       {"payoff_a": o["payoff"][0], "payoff_b": o["payoff"][1]}
                                       for o in out["outcomes"]]))
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, KeyError, OSError) as exc:
        print(f"qgames: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
