"""SemaGrow cardinality model.

Leaf cardinalities reuse the LHD formulas. The join selectivity of a leaf
is the minimum of ``1/d_i`` over its join attributes (distinct-value
counts of the joined positions); the join selectivity of a join is the
minimum of its children's, and join cardinality is
``card(E1) * card(E2) * JoinSel(E1 JOIN E2)``.

A leaf's join attributes are the positions joined by any edge inside the
expression currently being estimated, so nesting can only shrink the
selectivity (the min-chain is monotone non-increasing).
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..expr import Expression, Leaf, internal_edges
from ..query import JoinEdge, TriplePattern
from .base import CardinalityEstimator, Engine
from .lhd import tp_card_from_void


class SemaGrowEstimator(CardinalityEstimator):
    engine = Engine.SEMAGROW

    def tp_card(self, tp: TriplePattern, sources: Optional[frozenset[str]] = None) -> float:
        if sources is None:
            sources = self.sources_for(tp)
        return tp_card_from_void(tp, self.summaries.void, sources)

    def _distinct_values(self, tp: TriplePattern, position: str) -> int:
        void = self.summaries.void
        predicate = tp.bound_predicate()
        count = 0
        for name in self.sources_for(tp):
            src = void.source(name)
            if position == "p":
                count += src.distinct_predicates
            elif predicate is not None:
                stats = src.predicates.get(predicate)
                if stats is not None:
                    count += stats.distinct_subjects if position == "s" else stats.distinct_objects
            else:
                count += src.distinct_subjects if position == "s" else src.distinct_objects
        return count

    def leaf_join_selectivity(self, tp: TriplePattern, edges: Sequence[JoinEdge]) -> float:
        """min over the leaf's join attributes of 1/d_i; 1 when it has none.

        A zero distinct count contributes 1 (guard).
        """
        candidates = [1.0]
        for edge in edges:
            if edge.left == tp.ordinal:
                position = edge.left_pos
            elif edge.right == tp.ordinal:
                position = edge.right_pos
            else:
                continue
            d = self._distinct_values(tp, position)
            candidates.append(1.0 / d if d else 1.0)
        return min(candidates)

    def expression_join_selectivity(self, expr: Expression, edges: Sequence[JoinEdge]) -> float:
        if isinstance(expr, Leaf):
            return self.leaf_join_selectivity(expr.pattern, edges)
        return min(
            self.expression_join_selectivity(expr.left, edges),
            self.expression_join_selectivity(expr.right, edges),
        )

    def join_card(
        self,
        left: Expression,
        right: Expression,
        left_card: float,
        right_card: float,
        edges: tuple[JoinEdge, ...],
    ) -> float:
        scope = tuple(internal_edges(left)) + tuple(internal_edges(right)) + tuple(edges)
        sel = min(
            self.expression_join_selectivity(left, scope),
            self.expression_join_selectivity(right, scope),
        )
        return left_card * right_card * sel
