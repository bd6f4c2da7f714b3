"""Greedy left-deep planning and plan-quality classification.

The planner starts from the connected pattern with the smallest estimated
cardinality and repeatedly extends the left side with the connected
remaining pattern whose extension join has the smallest estimate;
disconnected patterns are appended last as cartesian joins. Classification
checks whether, at every step, the real cardinality of the chosen join was
minimal among the joins executable at that step.
"""

from __future__ import annotations

import enum
from typing import Callable, Sequence

from .estimators.base import select_sources
from .expr import Expression, Leaf, is_left_deep, join, join_nodes, leaves
from .oracle import OracleBlowupError
from .query import BasicGraphPattern, TriplePattern
from .store import TripleStore

CardFn = Callable[[Expression], float]


class PlanClass(enum.Enum):
    OPTIMAL = "OptP"
    SUB_OPTIMAL = "subOpt"
    ONLY_PLAN = "OnlyP"
    FAILED = "Failed"


def _tiebreak(tp: TriplePattern) -> tuple[int, str]:
    predicate = tp.bound_predicate() or ""
    return (tp.ordinal, predicate)


def _connected(a: TriplePattern, b: TriplePattern) -> bool:
    return bool(a.variables() & b.variables())


def greedy_left_deep_plan(bgp: BasicGraphPattern, card: CardFn) -> Expression:
    """Build a left-deep plan, greedily minimizing estimated cardinalities.

    ``card`` maps a leaf or partial plan to its estimated cardinality;
    extension steps re-estimate the grown left side through it. Ties break
    on the lowest pattern ordinal, keeping plans deterministic.
    """
    if not bgp.patterns:
        raise ValueError("cannot plan an empty BGP")
    remaining = list(bgp.patterns)
    if len(remaining) == 1:
        return Leaf(remaining[0])

    leaf_cards = {tp.ordinal: card(Leaf(tp)) for tp in remaining}
    has_partner = {
        tp.ordinal: any(_connected(tp, other) for other in remaining if other is not tp)
        for tp in remaining
    }
    startable = [tp for tp in remaining if has_partner[tp.ordinal]] or remaining
    first = min(startable, key=lambda tp: (leaf_cards[tp.ordinal], _tiebreak(tp)))
    plan: Expression = Leaf(first)
    remaining.remove(first)

    while remaining:
        plan_vars = set()
        for leaf in leaves(plan):
            plan_vars |= leaf.pattern.variables()
        candidates = [tp for tp in remaining if tp.variables() & plan_vars]
        if not candidates:
            candidates = remaining
        best = min(candidates, key=lambda tp: (card(join(plan, Leaf(tp))), _tiebreak(tp)))
        plan = join(plan, Leaf(best))
        remaining.remove(best)
    return plan


def classify_plan(plan: Expression, real_card: CardFn) -> PlanClass:
    """Classify a left-deep plan against real cardinalities.

    Plans with at most one join are the only possible plan. Otherwise the
    plan is optimal iff at every step the chosen join's real cardinality
    ties the minimum over the joins executable at that step (joins of the
    current left side with a connected remaining pattern; cartesian
    candidates only once no connected pattern remains). Oracle failures
    classify as Failed.
    """
    if not is_left_deep(plan):
        raise ValueError("classification expects a left-deep plan")
    if len(join_nodes(plan)) <= 1:
        return PlanClass.ONLY_PLAN

    chain = leaves(plan)
    try:
        left: Expression = chain[0]
        remaining = [leaf.pattern for leaf in chain[1:]]
        for step_leaf in chain[1:]:
            left_vars = set()
            for leaf in leaves(left):
                left_vars |= leaf.pattern.variables()
            candidates = [tp for tp in remaining if tp.variables() & left_vars]
            if not candidates:
                candidates = list(remaining)
            chosen = step_leaf.pattern
            if chosen not in candidates:
                return PlanClass.SUB_OPTIMAL
            chosen_real = real_card(join(left, Leaf(chosen)))
            best_real = min(real_card(join(left, Leaf(tp))) for tp in candidates)
            if chosen_real > best_real:
                return PlanClass.SUB_OPTIMAL
            left = join(left, Leaf(chosen))
            remaining.remove(chosen)
    except OracleBlowupError:
        return PlanClass.FAILED
    return PlanClass.OPTIMAL


def tp_sources_count(bgp: BasicGraphPattern, stores: Sequence[TripleStore]) -> int:
    """Total triple-pattern-wise sources selected across the query (#T)."""
    return sum(len(select_sources(tp, stores)) for tp in bgp.patterns)
