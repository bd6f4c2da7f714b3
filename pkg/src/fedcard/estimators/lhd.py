"""LHD cardinality model over VoID statistics.

A triple pattern is estimated as ``t * sel(S) * sel(P) * sel(O)`` with
``t`` the summed triple count of the relevant sources and the slot
selectivities taken from the published case tables (implemented verbatim,
including their unusual denominators). Multi-joins multiply the member
cardinalities by one selectivity factor per join edge.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..expr import Expression, patterns as expr_patterns
from ..query import JoinEdge, JoinKind, TriplePattern, Var
from ..summaries import SourceVoid, VoidSummary
from .base import CardinalityEstimator, Engine


def _sel_ratio(srcs: Sequence[SourceVoid], predicate: Optional[str], position: str) -> tuple[float, float]:
    """(numerator, denominator) of the bound-slot selectivity for one position."""
    if predicate is None:
        if position == "s":
            num = sum(src.triples / src.distinct_subjects for src in srcs if src.distinct_subjects)
            den = sum(src.distinct_subjects for src in srcs)
        else:
            num = sum(src.triples / src.distinct_objects for src in srcs if src.distinct_objects)
            den = sum(src.distinct_objects for src in srcs)
        return num, den
    num = 0.0
    den = 0.0
    for src in srcs:
        stats = src.predicates.get(predicate)
        if stats is None:
            continue
        if position == "s":
            num += stats.triples / stats.distinct_subjects
            den += stats.distinct_subjects
        else:
            num += stats.triples / stats.distinct_objects
            den += stats.distinct_objects
    return num, den


def tp_card_from_void(tp: TriplePattern, void: VoidSummary, sources: frozenset[str]) -> float:
    """Shared by LHD and SemaGrow (which adopts LHD's leaf formulas)."""
    if not sources:
        return 0.0
    srcs = [void.source(name) for name in sources]
    total = sum(src.triples for src in srcs)
    if not total:
        return 0.0
    predicate = tp.bound_predicate()

    # Accumulate the product of selectivity ratios as numerator/denominator
    # so integer-only cases divide exactly.
    num = float(total)
    den = 1.0

    if not isinstance(tp.subject, Var):
        n, d = _sel_ratio(srcs, predicate, "s")
        if d == 0:
            return 0.0
        num *= n
        den *= d
    if predicate is not None:
        n = sum(src.predicates[predicate].triples for src in srcs if predicate in src.predicates)
        num *= n
        den *= total
    if not isinstance(tp.object, Var):
        n, d = _sel_ratio(srcs, predicate, "o")
        if d == 0:
            return 0.0
        num *= n
        den *= d
    return num / den


class LhdEstimator(CardinalityEstimator):
    engine = Engine.LHD

    def tp_card(self, tp: TriplePattern, sources: Optional[frozenset[str]] = None) -> float:
        if sources is None:
            sources = self.sources_for(tp)
        return tp_card_from_void(tp, self.summaries.void, sources)

    def _side_counts(self, tp: TriplePattern, position: str) -> tuple[float, float]:
        """(predicate-level distinct count, source-level distinct count) for one side."""
        void = self.summaries.void
        predicate = tp.bound_predicate()
        pred_count = 0
        total_count = 0
        for name in self.sources_for(tp):
            src = void.source(name)
            total_count += src.distinct_subjects if position == "s" else src.distinct_objects
            if predicate is None:
                pred_count += src.distinct_subjects if position == "s" else src.distinct_objects
            else:
                stats = src.predicates.get(predicate)
                if stats is not None:
                    pred_count += stats.distinct_subjects if position == "s" else stats.distinct_objects
        return pred_count, total_count

    def edge_selectivity(self, edge: JoinEdge, left_tp: TriplePattern, right_tp: TriplePattern) -> float:
        """Selectivity of one join edge per the S/O case table.

        Predicate-position joins have no published case and fall through
        to selectivity 1; sides with an unbound predicate substitute the
        source-level distinct count, making that side's ratio 1.
        """
        if edge.kind is JoinKind.PREDICATE_INVOLVED:
            return 1.0
        lnum, lden = self._side_counts(left_tp, edge.left_pos)
        rnum, rden = self._side_counts(right_tp, edge.right_pos)
        if not lden or not rden:
            return 1.0
        return (lnum * rnum) / (lden * rden)

    def multi_join_card(
        self,
        leaves: Sequence[TriplePattern],
        cards: Sequence[float],
        edges: Sequence[JoinEdge],
    ) -> float:
        """Flat form: product of member cardinalities times all edge selectivities."""
        by_ordinal = {tp.ordinal: tp for tp in leaves}
        card = 1.0
        for c in cards:
            card *= c
        for edge in edges:
            card *= self.edge_selectivity(edge, by_ordinal[edge.left], by_ordinal[edge.right])
        return card

    def join_card(
        self,
        left: Expression,
        right: Expression,
        left_card: float,
        right_card: float,
        edges: tuple[JoinEdge, ...],
    ) -> float:
        # Recursive form of the flat multi-join product: edges internal to
        # either side are already folded into its cardinality.
        by_ordinal = {tp.ordinal: tp for tp in expr_patterns(left) + expr_patterns(right)}
        card = left_card * right_card
        for edge in edges:
            card *= self.edge_selectivity(edge, by_ordinal[edge.left], by_ordinal[edge.right])
        return card
