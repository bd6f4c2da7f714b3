"""Join expression trees over triple patterns.

An expression is either a leaf (one pattern) or a join of two
sub-expressions annotated with the join edges that connect them.
A join with zero edges is a cartesian product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .query import JoinEdge, TriplePattern, edges_between


@dataclass(frozen=True, slots=True)
class Leaf:
    pattern: TriplePattern


@dataclass(frozen=True, slots=True)
class Join:
    left: "Expression"
    right: "Expression"
    edges: tuple[JoinEdge, ...] = field(default_factory=tuple)


Expression = Union[Leaf, Join]


def leaves(expr: Expression) -> list[Leaf]:
    """Leaves in left-to-right order."""
    if isinstance(expr, Leaf):
        return [expr]
    return leaves(expr.left) + leaves(expr.right)


def patterns(expr: Expression) -> list[TriplePattern]:
    return [leaf.pattern for leaf in leaves(expr)]


def ordinals(expr: Expression) -> frozenset[int]:
    return frozenset(tp.ordinal for tp in patterns(expr))


def join_nodes(expr: Expression) -> list[Join]:
    """Join nodes in bottom-up (post-order) order."""
    if isinstance(expr, Leaf):
        return []
    return join_nodes(expr.left) + join_nodes(expr.right) + [expr]


def variables(expr: Expression) -> set[str]:
    out: set[str] = set()
    for tp in patterns(expr):
        out |= tp.variables()
    return out


def cross_edges(left: Expression, right: Expression) -> tuple[JoinEdge, ...]:
    """All join edges between the leaves of two disjoint sub-expressions."""
    out = []
    for ltp in patterns(left):
        for rtp in patterns(right):
            out.extend(edges_between(ltp, rtp))
    return tuple(out)


def join(left: Expression, right: Expression) -> Join:
    """Join two sub-expressions, deriving their connecting edges."""
    return Join(left, right, cross_edges(left, right))


def internal_edges(expr: Expression) -> list[JoinEdge]:
    """Edges applied somewhere inside the expression (union over join nodes)."""
    out: list[JoinEdge] = []
    for node in join_nodes(expr):
        out.extend(node.edges)
    return out


def is_left_deep(expr: Expression) -> bool:
    while isinstance(expr, Join):
        if not isinstance(expr.right, Leaf):
            return False
        expr = expr.left
    return True


def describe(expr: Expression) -> str:
    """Compact one-line rendering, e.g. ``((tp0 JOIN tp1) JOIN tp2)``."""
    if isinstance(expr, Leaf):
        return f"tp{expr.pattern.ordinal}"
    return f"({describe(expr.left)} JOIN {describe(expr.right)})"
