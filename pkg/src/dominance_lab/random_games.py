"""Seeded generation of small games for property suites and witness mining.

Payoffs come from a small integer grid so that found counterexamples stay
hand-auditable and LP tableaux stay tiny.  ``tie_bias`` deliberately reuses
already-drawn values: weak-dominance phenomena need payoff ties, which
uniform draws over a wide grid would almost never produce.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product

from .game_model import Game

__all__ = ["GeneratorConfig", "generate", "strategy_label"]


def strategy_label(index: int) -> str:
    letters = string.ascii_uppercase
    if index < len(letters):
        return letters[index]
    return f"S{index + 1}"


@dataclass(frozen=True)
class GeneratorConfig:
    """Shape, payoff grid and tie behavior of one random game.

    ``players`` and ``strategies`` are inclusive ranges sampled per game.
    With ``distinct_payoffs`` every payoff column a dominance test compares
    (one player, one opponent profile) is drawn without replacement, so weak
    and strict pure dominance coincide.
    """

    seed: int
    players: tuple[int, int] = (2, 2)
    strategies: tuple[int, int] = (2, 4)
    payoff_range: tuple[int, int] = (-5, 5)
    tie_bias: float = 0.25
    distinct_payoffs: bool = False

    def __post_init__(self) -> None:
        lo, hi = self.players
        if not 2 <= lo <= hi <= 4:
            raise ValueError(f"players range {self.players} must lie within 2..4")
        lo, hi = self.strategies
        if not 1 <= lo <= hi:
            raise ValueError(f"strategies range {self.strategies} is empty or invalid")
        lo, hi = self.payoff_range
        if lo > hi:
            raise ValueError(f"payoff range {self.payoff_range} is empty")
        if not 0 <= self.tie_bias <= 1:
            raise ValueError(f"tie_bias {self.tie_bias} must lie in [0, 1]")
        if self.distinct_payoffs:
            grid = self.payoff_range[1] - self.payoff_range[0] + 1
            if grid < self.strategies[1]:
                raise ValueError(
                    "distinct_payoffs needs a payoff grid at least as large as "
                    "the largest strategy count"
                )

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return replace(self, seed=seed)

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "players": list(self.players),
            "strategies": list(self.strategies),
            "payoffs": list(self.payoff_range),
            "tie_bias": self.tie_bias,
            "distinct_payoffs": self.distinct_payoffs,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "GeneratorConfig":
        def pair(value: object, fallback: tuple[int, int]) -> tuple[int, int]:
            if value is None:
                return fallback
            if isinstance(value, int):
                return (value, value)
            if isinstance(value, (list, tuple)) and len(value) == 2:
                return (int(value[0]), int(value[1]))
            raise ValueError(f"expected an integer or a [lo, hi] pair, got {value!r}")

        defaults = cls(seed=0)
        return cls(
            seed=int(doc.get("seed", 0)),
            players=pair(doc.get("players"), defaults.players),
            strategies=pair(doc.get("strategies"), defaults.strategies),
            payoff_range=pair(doc.get("payoffs"), defaults.payoff_range),
            tie_bias=float(doc.get("tie_bias", defaults.tie_bias)),
            distinct_payoffs=bool(doc.get("distinct_payoffs", False)),
        )


def generate(config: GeneratorConfig) -> Game:
    """Deterministically generate one game from the config."""
    rng = random.Random(config.seed)
    n = rng.randint(*config.players)
    counts = [rng.randint(*config.strategies) for _ in range(n)]
    players = tuple(f"P{i + 1}" for i in range(n))
    strategies = tuple(tuple(strategy_label(j) for j in range(c)) for c in counts)
    lo, hi = config.payoff_range
    size = 1
    for c in counts:
        size *= c

    tables: list[list[Fraction]] = []
    if config.distinct_payoffs:
        strides = [1] * n
        for k in range(n - 2, -1, -1):
            strides[k] = strides[k + 1] * counts[k + 1]
        for i in range(n):
            table = [Fraction(0)] * size
            other_axes = [range(counts[k]) for k in range(n) if k != i]
            other_strides = [strides[k] for k in range(n) if k != i]
            for opponents in product(*other_axes):
                base = sum(s * c for s, c in zip(other_strides, opponents))
                values = rng.sample(range(lo, hi + 1), counts[i])
                for j, value in enumerate(values):
                    table[base + j * strides[i]] = Fraction(value)
            tables.append(table)
    else:
        for _ in range(n):
            drawn: list[int] = []
            table = []
            for _ in range(size):
                if drawn and rng.random() < config.tie_bias:
                    value = drawn[rng.randrange(len(drawn))]
                else:
                    value = rng.randint(lo, hi)
                drawn.append(value)
                table.append(Fraction(value))
            tables.append(table)

    return Game(players, strategies, tuple(tuple(t) for t in tables))
