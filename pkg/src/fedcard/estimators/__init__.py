"""Cardinality estimators of the five cost-based federation engines."""

from __future__ import annotations

from typing import Sequence, Union

from ..store import TripleStore
from ..summaries import SummarySet
from .base import (
    ENGINE_NAMES,
    CardinalityEstimator,
    Engine,
    EstimationError,
    PlanEstimates,
    SourceSet,
    estimate_plan,
    select_sources,
)
from .costfed import CostFedEstimator
from .lhd import LhdEstimator
from .odyssey import OdysseyEstimator
from .semagrow import SemaGrowEstimator
from .splendid import SplendidEstimator

_ESTIMATOR_CLASSES = {
    Engine.COSTFED: CostFedEstimator,
    Engine.SPLENDID: SplendidEstimator,
    Engine.LHD: LhdEstimator,
    Engine.SEMAGROW: SemaGrowEstimator,
    Engine.ODYSSEY: OdysseyEstimator,
}


def make_estimator(
    engine: Union[Engine, str], summaries: SummarySet, stores: Sequence[TripleStore]
) -> CardinalityEstimator:
    if isinstance(engine, str):
        try:
            engine = Engine(engine.lower())
        except ValueError:
            raise ValueError(
                f"unknown engine {engine!r}; valid engines: {', '.join(ENGINE_NAMES)}"
            ) from None
    return _ESTIMATOR_CLASSES[engine](summaries, stores)


__all__ = [
    "ENGINE_NAMES",
    "CardinalityEstimator",
    "CostFedEstimator",
    "Engine",
    "EstimationError",
    "LhdEstimator",
    "OdysseyEstimator",
    "PlanEstimates",
    "SemaGrowEstimator",
    "SourceSet",
    "SplendidEstimator",
    "estimate_plan",
    "make_estimator",
    "select_sources",
]
