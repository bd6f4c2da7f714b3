"""SPLENDID cardinality model over VoID statistics.

Per-source triple pattern formulas use reciprocal-of-distinct-count
selectivities. Same-subject stars with bound predicates multiply the
minimum bound-object cardinality by the subject-selectivity-scaled
cardinalities of the unbound-object members. Join cardinality is
``card1 * card2 * sel`` with sel the average join-variable selectivity.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..expr import Expression, patterns as expr_patterns
from ..query import JoinEdge, TriplePattern, Var
from ..summaries import SourceVoid
from .base import CardinalityEstimator, Engine


def _tp_card_in_source(tp: TriplePattern, src: SourceVoid) -> float:
    bound_s = not isinstance(tp.subject, Var)
    bound_p = not isinstance(tp.predicate, Var)
    bound_o = not isinstance(tp.object, Var)

    if bound_p:
        stats = src.predicates.get(tp.predicate.lexical)
        if stats is None:
            return 0.0
        if bound_s and bound_o:
            # Fully bound patterns reuse the (s,?,o) estimate; the case
            # table has no own entry for them.
            denom = src.distinct_subjects * src.distinct_objects
            return src.triples / denom if denom else 0.0
        if bound_s:
            return stats.triples / stats.distinct_subjects
        if bound_o:
            return stats.triples / stats.distinct_objects
        return float(stats.triples)

    if not src.triples:
        return 0.0
    if bound_s and bound_o:
        return src.triples / (src.distinct_subjects * src.distinct_objects)
    if bound_s:
        return src.triples / src.distinct_subjects
    if bound_o:
        return src.triples / src.distinct_objects
    return float(src.triples)


class SplendidEstimator(CardinalityEstimator):
    engine = Engine.SPLENDID

    def tp_card(self, tp: TriplePattern, sources: Optional[frozenset[str]] = None) -> float:
        if sources is None:
            sources = self.sources_for(tp)
        void = self.summaries.void
        return sum(_tp_card_in_source(tp, void.source(name)) for name in sources)

    def star_card(
        self,
        star: Sequence[TriplePattern],
        sources: Optional[frozenset[str]] = None,
    ) -> float:
        """Same-subject-variable star with bound predicates, summed per source."""
        if len(star) < 2:
            raise ValueError("a star needs at least two patterns")
        subjects = {tp.subject for tp in star}
        if len(subjects) != 1 or not isinstance(next(iter(subjects)), Var):
            raise ValueError("star patterns must share one subject variable")
        if any(isinstance(tp.predicate, Var) for tp in star):
            raise ValueError("star estimation requires bound predicates")
        if sources is None:
            sources = frozenset().union(*(self.sources_for(tp) for tp in star))

        void = self.summaries.void
        total = 0.0
        for name in sources:
            src = void.source(name)
            bound_cards = [
                _tp_card_in_source(tp, src) for tp in star if not isinstance(tp.object, Var)
            ]
            factor = min(bound_cards) if bound_cards else 1.0
            sel_s = 1.0 / src.distinct_subjects if src.distinct_subjects else 0.0
            for tp in star:
                if isinstance(tp.object, Var):
                    factor *= sel_s * _tp_card_in_source(tp, src)
            total += factor
        return total

    def _positional_selectivity(self, tp: TriplePattern, position: str) -> float:
        """1 / distinct-count of the join position, summed over relevant sources."""
        void = self.summaries.void
        predicate = tp.bound_predicate()
        count = 0
        for name in self.sources_for(tp):
            src = void.source(name)
            if position == "p":
                count += src.distinct_predicates
                continue
            if predicate is not None:
                stats = src.predicates.get(predicate)
                if stats is not None:
                    count += stats.distinct_subjects if position == "s" else stats.distinct_objects
            else:
                count += src.distinct_subjects if position == "s" else src.distinct_objects
        return 1.0 / count if count else 1.0

    def join_selectivity(
        self,
        left: Expression,
        right: Expression,
        edges: tuple[JoinEdge, ...],
    ) -> float:
        """Mean over shared variables of the mean of both sides' selectivities."""
        if not edges:
            return 1.0
        left_tps = {tp.ordinal: tp for tp in expr_patterns(left)}
        right_tps = {tp.ordinal: tp for tp in expr_patterns(right)}
        per_variable: dict[str, tuple[list[float], list[float]]] = {}
        for edge in edges:
            lsel, rsel = per_variable.setdefault(edge.variable, ([], []))
            if edge.left in left_tps:
                lsel.append(self._positional_selectivity(left_tps[edge.left], edge.left_pos))
                rsel.append(self._positional_selectivity(right_tps[edge.right], edge.right_pos))
            else:
                lsel.append(self._positional_selectivity(left_tps[edge.right], edge.right_pos))
                rsel.append(self._positional_selectivity(right_tps[edge.left], edge.left_pos))
        sels = []
        for lsel, rsel in per_variable.values():
            left_mean = sum(lsel) / len(lsel)
            right_mean = sum(rsel) / len(rsel)
            sels.append((left_mean + right_mean) / 2.0)
        return sum(sels) / len(sels)

    def join_card(
        self,
        left: Expression,
        right: Expression,
        left_card: float,
        right_card: float,
        edges: tuple[JoinEdge, ...],
    ) -> float:
        return left_card * right_card * self.join_selectivity(left, right, edges)
