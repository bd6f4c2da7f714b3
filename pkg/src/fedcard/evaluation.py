"""Per-(query, engine) evaluation rows and their CSV serialization."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .estimators import CardinalityEstimator, Engine, make_estimator
from .estimators.base import EstimationError
from .expr import join_nodes
from .metrics import MetricBundle, bundle
from .oracle import Oracle, OracleBlowupError, trace_plan
from .planner import PlanClass, classify_plan, greedy_left_deep_plan, tp_sources_count
from .query import BasicGraphPattern, QueryParseError, parse_query
from .store import TripleStore
from .summaries import SummarySet, build_all

RESULTS_HEADER = (
    "query_id,engine,E_T,E_J,E_P,Q_T,Q_J,Q_P,plan_class,"
    "num_tp,num_joins,tp_sources,fallback_used,status"
)

STATUS_OK = "ok"
STATUS_FAILED = "failed"
STATUS_BLOWUP = "oracle_blowup"


@dataclass(slots=True)
class EvalRow:
    query_id: str
    engine: str
    status: str = STATUS_OK
    metrics: Optional[MetricBundle] = None
    plan_class: Optional[PlanClass] = None
    num_tp: int = 0
    num_joins: int = 0
    tp_sources: int = 0
    fallback_used: bool = False
    error: str = ""

    def csv_fields(self) -> list[str]:
        def real(value: Optional[float]) -> str:
            return "" if value is None else f"{value:.6g}"

        m = self.metrics
        return [
            self.query_id,
            self.engine,
            real(m.e_tp if m else None),
            real(m.e_join if m else None),
            real(m.e_plan if m else None),
            real(m.q_tp if m else None),
            real(m.q_join if m else None),
            real(m.q_plan if m else None),
            self.plan_class.value if self.plan_class else "Failed",
            str(self.num_tp),
            str(self.num_joins),
            str(self.tp_sources),
            str(self.fallback_used).lower(),
            self.status,
        ]


def evaluate_query(
    query_id: str,
    bgp: BasicGraphPattern,
    estimator: CardinalityEstimator,
    stores: Sequence[TripleStore],
    oracle: Oracle,
) -> EvalRow:
    """One evaluation row: plan, trace, metrics, classification, #T."""
    row = EvalRow(
        query_id=query_id,
        engine=estimator.name,
        num_tp=len(bgp.patterns),
        tp_sources=tp_sources_count(bgp, stores),
    )
    try:
        plan = greedy_left_deep_plan(bgp, estimator.expression_card)
        row.num_joins = len(join_nodes(plan))
        trace = trace_plan(plan, estimator, stores, query_id=query_id, oracle=oracle)
        row.fallback_used = trace.fallback_used
        row.metrics = bundle(trace)
        row.plan_class = classify_plan(plan, oracle.cardinality)
        if row.plan_class is PlanClass.FAILED:
            row.status = STATUS_BLOWUP
            row.metrics = None
    except OracleBlowupError as exc:
        row.status = STATUS_BLOWUP
        row.plan_class = PlanClass.FAILED
        row.metrics = None
        row.error = str(exc)
    except (EstimationError, ValueError) as exc:
        row.status = STATUS_FAILED
        row.plan_class = PlanClass.FAILED
        row.metrics = None
        row.error = str(exc)
    return row


def evaluate_queries(
    queries: dict[str, str],
    engines: Sequence[Union[Engine, str]],
    stores: Sequence[TripleStore],
    summaries: Optional[SummarySet] = None,
    cap: Optional[int] = None,
) -> list[EvalRow]:
    """Rows for every (query, engine) pair, sorted by (query_id, engine).

    Query text that fails to parse produces one failed row per engine.
    The oracle cache is shared per query across engines.
    """
    if summaries is None:
        summaries = build_all(stores)
    estimators = [make_estimator(engine, summaries, stores) for engine in engines]

    rows: list[EvalRow] = []
    for query_id in sorted(queries):
        try:
            bgp = parse_query(queries[query_id])
        except QueryParseError as exc:
            for est in estimators:
                rows.append(
                    EvalRow(
                        query_id=query_id,
                        engine=est.name,
                        status=STATUS_FAILED,
                        plan_class=PlanClass.FAILED,
                        error=str(exc),
                    )
                )
            continue
        oracle = Oracle(stores, cap)
        for est in estimators:
            rows.append(evaluate_query(query_id, bgp, est, stores, oracle))
    rows.sort(key=lambda r: (r.query_id, r.engine))
    return rows


def rows_to_csv(rows: Sequence[EvalRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RESULTS_HEADER.split(","))
    for row in rows:
        writer.writerow(row.csv_fields())
    return out.getvalue()


def write_results_csv(rows: Sequence[EvalRow], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows), encoding="utf-8")


def read_results_csv(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [dict(r) for r in csv.DictReader(fh)]


def read_runtimes_csv(path: str | Path) -> dict[tuple[str, str], float]:
    """Map (query_id, engine) -> runtime_ms from a runtimes file."""
    out: dict[tuple[str, str], float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"query_id", "engine", "runtime_ms"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValueError(f"runtimes file needs columns {sorted(required)}")
        for record in reader:
            out[(record["query_id"], record["engine"])] = float(record["runtime_ms"])
    return out
