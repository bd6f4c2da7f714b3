"""CostFed cardinality model.

Triple patterns are estimated by an eight-way case split on which slots
are bound, summing per-source terms over the relevant sources. Joins are
estimated as ``M(E1) * M(E2) * min(C(E1), C(E2))`` where the multi-valued
predicate factor M applies to leaf operands only and defaults to 1.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from ..expr import Expression, Leaf
from ..query import JoinEdge, TriplePattern, Var
from .base import CardinalityEstimator, Engine

SQRT1_2 = 1.0 / math.sqrt(2.0)


class CostFedEstimator(CardinalityEstimator):
    engine = Engine.COSTFED

    def tp_card(self, tp: TriplePattern, sources: Optional[frozenset[str]] = None) -> float:
        if sources is None:
            sources = self.sources_for(tp)
        if not sources:
            return 0.0
        summary = self.summaries.costfed
        bound_s = not isinstance(tp.subject, Var)
        bound_p = not isinstance(tp.predicate, Var)
        bound_o = not isinstance(tp.object, Var)

        if bound_s and bound_p and bound_o:
            return 1.0

        total = 0.0
        for name in sources:
            src = summary.source(name)
            if bound_p:
                stats = src.predicates.get(tp.predicate.lexical)
                if stats is None:
                    continue
                if not bound_s and not bound_o:
                    total += stats.triples
                elif bound_s and not bound_o:
                    total += stats.triples / stats.distinct_subjects
                else:  # bound object, unbound subject
                    total += stats.triples / stats.distinct_objects
            else:
                if not bound_s and not bound_o:
                    total += src.total_triples
                elif bound_s and not bound_o:
                    if src.total_distinct_subjects:
                        total += src.total_triples / src.total_distinct_subjects
                elif not bound_s and bound_o:
                    if src.total_distinct_objects:
                        total += src.total_triples / src.total_distinct_objects
                else:
                    denom = src.total_distinct_subjects * src.total_distinct_objects
                    if denom:
                        total += src.total_triples / denom
        return total

    def multivalued_factor(
        self, expr: Expression, card: float, edges: tuple[JoinEdge, ...]
    ) -> float:
        """M(E); defined for leaf expressions only, joins always get 1."""
        if not isinstance(expr, Leaf):
            return 1.0
        tp = expr.pattern
        bound_s = not isinstance(tp.subject, Var)
        bound_p = not isinstance(tp.predicate, Var)
        bound_o = not isinstance(tp.object, Var)
        if not bound_p:
            return 1.0
        if not bound_s and bound_o:
            return SQRT1_2

        positions = _join_positions(tp.ordinal, edges)
        stats_by_source = [
            self.summaries.costfed.source(name).predicates.get(tp.predicate.lexical)
            for name in self.sources_for(tp)
        ]
        if not bound_s and not bound_o and "s" in positions:
            dist = sum(s.distinct_subjects for s in stats_by_source if s)
            return card / dist if dist else 1.0
        if not bound_s and not bound_o and "o" in positions:
            dist = sum(s.distinct_objects for s in stats_by_source if s)
            return card / dist if dist else 1.0
        return 1.0

    def join_card(
        self,
        left: Expression,
        right: Expression,
        left_card: float,
        right_card: float,
        edges: tuple[JoinEdge, ...],
    ) -> float:
        m_left = self.multivalued_factor(left, left_card, edges)
        m_right = self.multivalued_factor(right, right_card, edges)
        return m_left * m_right * min(left_card, right_card)


def _join_positions(ordinal: int, edges: Sequence[JoinEdge]) -> set[str]:
    positions = set()
    for edge in edges:
        if edge.left == ordinal:
            positions.add(edge.left_pos)
        if edge.right == ordinal:
            positions.add(edge.right_pos)
    return positions
