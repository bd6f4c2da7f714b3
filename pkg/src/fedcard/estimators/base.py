"""Shared estimator plumbing: engine registry, source selection, plan walk."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..expr import Expression, Join, Leaf, join_nodes
from ..query import JoinEdge, TriplePattern
from ..store import TripleStore, match
from ..summaries import SummarySet

SourceSet = frozenset


class Engine(enum.Enum):
    COSTFED = "costfed"
    SPLENDID = "splendid"
    LHD = "lhd"
    SEMAGROW = "semagrow"
    ODYSSEY = "odyssey"


ENGINE_NAMES = tuple(e.value for e in Engine)


class EstimationError(RuntimeError):
    pass


def select_sources(tp: TriplePattern, stores: Sequence[TripleStore]) -> frozenset[str]:
    """Exact source selection: a source is relevant iff it holds a match."""
    return frozenset(s.source_name for s in stores if match(s, tp))


def _checked(value: float) -> float:
    if not math.isfinite(value) or value < 0:
        raise EstimationError(f"estimator produced invalid cardinality {value!r}")
    return float(value)


@dataclass(slots=True)
class PlanEstimates:
    """Per-node estimates of one plan: leaves by ordinal, joins bottom-up."""

    tp_est: dict[int, float] = field(default_factory=dict)
    join_est: list[float] = field(default_factory=list)
    tp_fallback: dict[int, bool] = field(default_factory=dict)
    join_fallback: list[bool] = field(default_factory=list)

    @property
    def fallback_used(self) -> bool:
        return any(self.tp_fallback.values()) or any(self.join_fallback)


class CardinalityEstimator:
    """Base class; engines override leaf/join estimation.

    All estimates are non-negative finite reals; rounding is left to
    presentation. Instances are immutable once built and safe to share.
    """

    engine: Engine

    def __init__(self, summaries: SummarySet, stores: Sequence[TripleStore]):
        self.summaries = summaries
        self.stores = tuple(stores)
        self._source_cache: dict[TriplePattern, frozenset[str]] = {}

    @property
    def name(self) -> str:
        return self.engine.value

    def sources_for(self, tp: TriplePattern) -> frozenset[str]:
        cached = self._source_cache.get(tp)
        if cached is None:
            cached = self._source_cache[tp] = select_sources(tp, self.stores)
        return cached

    # -- per-engine hooks ------------------------------------------------

    def tp_card(self, tp: TriplePattern, sources: Optional[frozenset[str]] = None) -> float:
        raise NotImplementedError

    def join_card(
        self,
        left: Expression,
        right: Expression,
        left_card: float,
        right_card: float,
        edges: tuple[JoinEdge, ...],
    ) -> float:
        raise NotImplementedError

    # -- flagged variants; engines with fallback behaviour override ------

    def _leaf_card_flagged(self, tp: TriplePattern) -> tuple[float, bool]:
        return self.tp_card(tp), False

    def _join_card_flagged(
        self, node: Join, left_card: float, right_card: float
    ) -> tuple[float, bool]:
        return self.join_card(node.left, node.right, left_card, right_card, node.edges), False

    # -- generic bottom-up plan walk --------------------------------------

    def prepare_plan(self, plan: Expression) -> None:
        """Hook for per-plan precomputation (e.g. leaf join attributes)."""

    def evaluate_plan(self, plan: Expression) -> PlanEstimates:
        self.prepare_plan(plan)
        est = PlanEstimates()

        def rec(node: Expression) -> float:
            if isinstance(node, Leaf):
                card, fb = self._leaf_card_flagged(node.pattern)
                card = _checked(card)
                est.tp_est[node.pattern.ordinal] = card
                est.tp_fallback[node.pattern.ordinal] = fb
                return card
            left = rec(node.left)
            right = rec(node.right)
            card, fb = self._join_card_flagged(node, left, right)
            card = _checked(card)
            est.join_est.append(card)
            est.join_fallback.append(fb)
            return card

        rec(plan)
        return est

    def expression_card(self, expr: Expression) -> float:
        """Estimate of an arbitrary (partial) plan; drives the greedy planner."""
        return self.evaluate_plan(expr).join_est[-1] if isinstance(expr, Join) else self.tp_card(
            expr.pattern
        )


def estimate_plan(estimator: CardinalityEstimator, plan: Expression) -> PlanEstimates:
    """Bottom-up per-node estimates; join order is post-order of join nodes."""
    return estimator.evaluate_plan(plan)


def count_join_nodes(plan: Expression) -> int:
    return len(join_nodes(plan))
