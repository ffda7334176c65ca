"""Empirical verification over restriction lattices.

Monotonicity checking enumerates comparable restriction pairs of a game's
lattice exhaustively (up to a configurable size cap) or by seeded sampling.
Exhaustive enumeration is complete: finding no witness proves monotonicity
on that game's lattice.  All reports are plain data with stable field
order, so suites and CI can assert on their JSON form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .game_model import Game, Restriction
from .operators import (
    ALL_OPERATORS,
    EliminationEngine,
    GS,
    GW,
    IterationTrace,
    LS,
    LW,
    MGS,
    MGW,
    MLS,
    MLW,
    OperatorKind,
    indices_of,
    masks_to_restriction,
    restriction_masks,
)

__all__ = [
    "BudgetExceededError",
    "Exhaustive",
    "FixpointRelationReport",
    "GlobalLocalEqualityReport",
    "LemmaIncReport",
    "MonotonicityWitness",
    "PointwiseInclusionReport",
    "Sampled",
    "check_monotonic",
    "compare_fixpoints",
    "enumerate_restriction_masks",
    "lattice_size",
    "pointwise_inclusion",
    "relation_of",
    "verify_global_local_equalities",
    "verify_lemma_inc",
]

DEFAULT_EXHAUSTIVE_CAP = 4096


class BudgetExceededError(RuntimeError):
    """The lattice is too large for exhaustive search; use a Sampled budget."""


@dataclass(frozen=True)
class Exhaustive:
    """Enumerate every comparable pair; errors out above ``cap`` lattice nodes."""

    cap: int = DEFAULT_EXHAUSTIVE_CAP


@dataclass(frozen=True)
class Sampled:
    """Check ``count`` seeded random comparable pairs (or restrictions)."""

    seed: int
    count: int


Budget = Exhaustive | Sampled


def lattice_size(game: Game) -> int:
    size = 1
    for k in game.shape:
        size *= 1 << k
    return size


def _canonical_key(masks: tuple[int, ...]) -> tuple:
    kept = tuple(indices_of(m) for m in masks)
    return (sum(len(k) for k in kept), kept)


def enumerate_restriction_masks(game: Game) -> list[tuple[int, ...]]:
    """All restrictions as per-player bitmasks, by lattice rank then kept-sets."""
    from itertools import product

    per_player = [range(1 << k) for k in game.shape]
    return sorted(product(*per_player), key=_canonical_key)


def _supersets_of(masks: tuple[int, ...], full: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Every componentwise superset of ``masks`` (including itself)."""
    from itertools import product

    options = []
    for m, f in zip(masks, full):
        complement = f & ~m
        subs = []
        sub = complement
        while True:
            subs.append(m | sub)
            if sub == 0:
                break
            sub = (sub - 1) & complement
        options.append(subs)
    return product(*options)


def _require_within_cap(game: Game, budget: Exhaustive) -> None:
    size = lattice_size(game)
    if size > budget.cap:
        raise BudgetExceededError(
            f"lattice has {size} restrictions, above the exhaustive cap "
            f"{budget.cap}; use a Sampled budget"
        )


@dataclass(frozen=True)
class MonotonicityWitness:
    """A comparable pair on which the operator fails to preserve inclusion.

    ``evidence`` is a (player, strategy) pair surviving the operator on the
    smaller restriction but not on the larger one.
    """

    operator: OperatorKind
    smaller: Restriction
    larger: Restriction
    evidence: tuple[int, int]

    def replay(self) -> bool:
        engine = EliminationEngine(self.smaller.game)
        if not self.smaller.issubset(self.larger):
            return False
        player, strategy = self.evidence
        small = engine.survivors(self.operator, restriction_masks(self.smaller))
        large = engine.survivors(self.operator, restriction_masks(self.larger))
        bit = 1 << strategy
        return bool(small[player] & bit) and not large[player] & bit

    def to_dict(self) -> dict:
        game = self.smaller.game
        player, strategy = self.evidence
        return {
            "operator": self.operator.name,
            "smaller": self.smaller.kept_names(),
            "larger": self.larger.kept_names(),
            "evidence": {
                "player": game.players[player],
                "strategy": game.strategies[player][strategy],
            },
        }


def _first_excess(
    small: tuple[int, ...], large: tuple[int, ...]
) -> tuple[int, int] | None:
    """Lowest (player, strategy) present in ``small`` but not ``large``."""
    for player, (s, l) in enumerate(zip(small, large)):
        excess = s & ~l
        if excess:
            return (player, indices_of(excess)[0])
    return None


def _sample_comparable(
    rng: random.Random, shape: Sequence[int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    smaller = []
    larger = []
    for k in shape:
        sm = lg = 0
        for bit in range(k):
            state = rng.randrange(3)  # 0: absent, 1: larger only, 2: both
            if state >= 1:
                lg |= 1 << bit
            if state == 2:
                sm |= 1 << bit
        smaller.append(sm)
        larger.append(lg)
    return tuple(smaller), tuple(larger)


def check_monotonic(
    kind: OperatorKind, game: Game, budget: Budget
) -> MonotonicityWitness | None:
    """Search for a monotonicity violation of the operator on this game's lattice.

    Exhaustive budgets scan every comparable pair, so ``None`` is a proof of
    monotonicity for this lattice; sampled budgets only report none-found.
    """
    engine = EliminationEngine(game)

    def witness(smaller: tuple[int, ...], larger: tuple[int, ...]) -> MonotonicityWitness | None:
        excess = _first_excess(engine.survivors(kind, smaller), engine.survivors(kind, larger))
        if excess is None:
            return None
        return MonotonicityWitness(
            operator=kind,
            smaller=masks_to_restriction(game, smaller),
            larger=masks_to_restriction(game, larger),
            evidence=excess,
        )

    if isinstance(budget, Exhaustive):
        _require_within_cap(game, budget)
        all_masks = enumerate_restriction_masks(game)
        for smaller in all_masks:
            for larger in sorted(_supersets_of(smaller, engine.full_masks), key=_canonical_key):
                if larger == smaller:
                    continue
                found = witness(smaller, larger)
                if found is not None:
                    return found
        return None
    rng = random.Random(budget.seed)
    for _ in range(budget.count):
        smaller, larger = _sample_comparable(rng, game.shape)
        if smaller == larger:
            continue
        found = witness(smaller, larger)
        if found is not None:
            return found
    return None


@dataclass(frozen=True)
class PointwiseInclusionReport:
    """Violations of left(G) being included in right(G) over scanned restrictions."""

    left: OperatorKind
    right: OperatorKind
    checked: int
    violations: tuple[dict, ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "left": self.left.name,
            "right": self.right.name,
            "checked": self.checked,
            "holds": self.holds,
            "violations": list(self.violations),
        }


def pointwise_inclusion(
    left: OperatorKind, right: OperatorKind, game: Game, budget: Budget
) -> PointwiseInclusionReport:
    """Check left(G) included in right(G) over enumerated or sampled restrictions."""
    engine = EliminationEngine(game)
    violations = []
    checked = 0

    def scan(masks_list: Iterator[tuple[int, ...]] | list[tuple[int, ...]]) -> None:
        nonlocal checked
        for masks in masks_list:
            checked += 1
            excess = _first_excess(
                engine.survivors(left, masks), engine.survivors(right, masks)
            )
            if excess is not None:
                player, strategy = excess
                violations.append(
                    {
                        "restriction": masks_to_restriction(game, masks).kept_names(),
                        "player": game.players[player],
                        "strategy": game.strategies[player][strategy],
                    }
                )

    if isinstance(budget, Exhaustive):
        _require_within_cap(game, budget)
        scan(enumerate_restriction_masks(game))
    else:
        rng = random.Random(budget.seed)
        samples = [
            tuple(rng.randrange(1 << k) for k in game.shape) for _ in range(budget.count)
        ]
        scan(samples)
    return PointwiseInclusionReport(
        left=left, right=right, checked=checked, violations=tuple(violations)
    )


def relation_of(left: Restriction, right: Restriction) -> str:
    """Classify two restrictions: equal, subset, superset or incomparable."""
    if left.kept == right.kept:
        return "equal"
    if left.issubset(right):
        return "subset"
    if right.issubset(left):
        return "superset"
    return "incomparable"


@dataclass(frozen=True)
class FixpointRelationReport:
    left: OperatorKind
    right: OperatorKind
    relation: str
    left_fixpoint: Restriction
    right_fixpoint: Restriction

    def to_dict(self) -> dict:
        return {
            "left": self.left.name,
            "right": self.right.name,
            "relation": self.relation,
            "left_fixpoint": self.left_fixpoint.kept_names(),
            "right_fixpoint": self.right_fixpoint.kept_names(),
        }


def compare_fixpoints(
    left: OperatorKind, right: OperatorKind, game: Game
) -> FixpointRelationReport:
    """Compute both fixpoints from the top and classify their relation."""
    engine = EliminationEngine(game)
    lfix = engine.iterate(left).fixpoint
    rfix = engine.iterate(right).fixpoint
    return FixpointRelationReport(
        left=left,
        right=right,
        relation=relation_of(lfix, rfix),
        left_fixpoint=lfix,
        right_fixpoint=rfix,
    )


@dataclass(frozen=True)
class LemmaIncReport:
    """Hypotheses and conclusion of the inclusion lemma, each checked separately.

    The lemma: if T(G) is included in U(G) for all G and at least one of T, U
    is monotonic, then the fixpoint of T is included in the fixpoint of U.
    Hypothesis failure with conclusion failure is a meaningful outcome and
    stays visible.
    """

    t: OperatorKind
    u: OperatorKind
    pointwise_holds: bool
    t_monotonic: bool
    u_monotonic: bool
    t_witness: MonotonicityWitness | None
    u_witness: MonotonicityWitness | None
    conclusion_holds: bool
    t_fixpoint: Restriction
    u_fixpoint: Restriction

    @property
    def hypotheses_hold(self) -> bool:
        return self.pointwise_holds and (self.t_monotonic or self.u_monotonic)

    def to_dict(self) -> dict:
        return {
            "t": self.t.name,
            "u": self.u.name,
            "pointwise_holds": self.pointwise_holds,
            "t_monotonic": self.t_monotonic,
            "u_monotonic": self.u_monotonic,
            "t_witness": self.t_witness.to_dict() if self.t_witness else None,
            "u_witness": self.u_witness.to_dict() if self.u_witness else None,
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion_holds": self.conclusion_holds,
            "t_fixpoint": self.t_fixpoint.kept_names(),
            "u_fixpoint": self.u_fixpoint.kept_names(),
        }


def verify_lemma_inc(
    t: OperatorKind, u: OperatorKind, game: Game, budget: Exhaustive = Exhaustive()
) -> LemmaIncReport:
    """Check the inclusion lemma's hypotheses and conclusion on one game's lattice."""
    pointwise = pointwise_inclusion(t, u, game, budget)
    t_witness = check_monotonic(t, game, budget)
    u_witness = check_monotonic(u, game, budget)
    engine = EliminationEngine(game)
    t_fix = engine.iterate(t).fixpoint
    u_fix = engine.iterate(u).fixpoint
    return LemmaIncReport(
        t=t,
        u=u,
        pointwise_holds=pointwise.holds,
        t_monotonic=t_witness is None,
        u_monotonic=u_witness is None,
        t_witness=t_witness,
        u_witness=u_witness,
        conclusion_holds=t_fix.issubset(u_fix),
        t_fixpoint=t_fix,
        u_fixpoint=u_fix,
    )


_EQUALITY_PAIRS: tuple[tuple[OperatorKind, OperatorKind], ...] = (
    (GS, LS),
    (MGS, MLS),
    (GW, LW),
    (MGW, MLW),
)


@dataclass(frozen=True)
class GlobalLocalEqualityReport:
    """The four global-vs-local fixpoint equalities on one game.

    An inequality would point at an implementation fault, so failures carry
    the full traces of both sides.
    """

    game: Game
    traces: dict[str, IterationTrace] = field(repr=False)

    @property
    def equalities(self) -> dict[str, bool]:
        return {
            f"{g.name}={l.name}": self.traces[g.name].fixpoint.kept
            == self.traces[l.name].fixpoint.kept
            for g, l in _EQUALITY_PAIRS
        }

    @property
    def all_hold(self) -> bool:
        return all(self.equalities.values())

    def to_dict(self) -> dict:
        out = {
            "fixpoints": {
                kind.name: self.traces[kind.name].fixpoint.kept_names()
                for kind in ALL_OPERATORS
            },
            "equalities": self.equalities,
            "all_hold": self.all_hold,
        }
        failing = [name for name, ok in self.equalities.items() if not ok]
        if failing:
            out["failing_traces"] = {
                name: {
                    side: self.traces[side].to_dict() for side in name.split("=")
                }
                for name in failing
            }
        return out


def verify_global_local_equalities(game: Game) -> GlobalLocalEqualityReport:
    """Compute all eight fixpoints and compare each global/local pair."""
    engine = EliminationEngine(game)
    traces = {kind.name: engine.iterate(kind) for kind in ALL_OPERATORS}
    return GlobalLocalEqualityReport(game=game, traces=traces)
