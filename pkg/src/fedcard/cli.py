"""Command-line interface: ingest, summarize, evaluate, correlate, fixtures.

Exit codes: 0 success, 1 data/convergence failure, 2 usage error.
"""

from __future__ import annotations

import csv
import io
import sys
from pathlib import Path

import click

from . import fixtures as fixture_mod
from .estimators import ENGINE_NAMES
from .evaluation import (
    evaluate_queries,
    read_results_csv,
    read_runtimes_csv,
    write_results_csv,
)
from .ntriples import NTriplesParseError
from .oracle import default_cap
from .stats import METHODS, CorrelationReport, correlate_results
from .store import load_ntriples_file, load_store_dir, save_store
from .summaries import build_all, save_summary

METRIC_FEATURES = ("E_T", "E_J", "E_P", "Q_T", "Q_J", "Q_P")


@click.group()
def main() -> None:
    """Cardinality-estimation laboratory for federated SPARQL planning."""


@main.command()
@click.option("--source", required=True, help="Source name for the ingested dataset.")
@click.option("--file", "file_path", required=True, type=click.Path(), help="N-Triples input file.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Store directory.")
def ingest(source: str, file_path: str, out_dir: str) -> None:
    """Parse an N-Triples file into a deduplicated store file."""
    path = Path(file_path)
    if not path.exists():
        click.echo(f"error: no such file: {path}", err=True)
        sys.exit(2)
    try:
        store = load_ntriples_file(source, path)
    except NTriplesParseError as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(1)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    target = out / f"{source}.store"
    save_store(store, target)
    click.echo(f"ingested {store.total_triples} triples from {path} into {target}")


@main.command()
@click.option("--stores", "stores_dir", required=True, type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(["void", "costfed", "charsets", "all"]), default="all")
@click.option("--out", "out_dir", required=True, type=click.Path())
def summarize(stores_dir: str, kind: str, out_dir: str) -> None:
    """Build statistics summaries from ingested stores."""
    stores = load_store_dir(stores_dir)
    if not stores:
        click.echo(f"error: no .store files under {stores_dir}", err=True)
        sys.exit(1)
    summaries = build_all(stores)
    kinds = ["void", "costfed", "charsets"] if kind == "all" else [kind]
    for k in kinds:
        summary = getattr(summaries, k)
        written = save_summary(summary, k, out_dir)
        click.echo(f"wrote {len(written)} {k} summary file(s) to {out_dir}")


def _parse_engines(spec: str) -> list[str]:
    if spec.strip().lower() == "all":
        return list(ENGINE_NAMES)
    engines = [name.strip().lower() for name in spec.split(",") if name.strip()]
    for name in engines:
        if name not in ENGINE_NAMES:
            click.echo(
                f"error: unknown engine {name!r}; valid engines: {', '.join(ENGINE_NAMES)}",
                err=True,
            )
            sys.exit(2)
    return engines


@main.command()
@click.option("--stores", "stores_dir", required=True, type=click.Path(exists=True))
@click.option("--queries", "queries_dir", required=True, type=click.Path(exists=True))
@click.option("--engines", default="all", help="Comma-separated engine list or 'all'.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--oracle-cap", type=int, default=None, help="Intermediate-result cap.")
@click.option("--seed", type=int, default=0, help="Reserved; evaluation is deterministic.")
def evaluate(stores_dir, queries_dir, engines, out_path, oracle_cap, seed) -> None:
    """Evaluate every query under every engine; write the results CSV."""
    del seed  # the pipeline is deterministic; the flag pins the contract
    engine_names = _parse_engines(engines)
    stores = load_store_dir(stores_dir)
    if not stores:
        click.echo(f"error: no .store files under {stores_dir}", err=True)
        sys.exit(1)
    queries = {
        path.stem: path.read_text(encoding="utf-8")
        for path in sorted(Path(queries_dir).glob("*.rq"))
    }
    cap = oracle_cap if oracle_cap is not None else default_cap()
    rows = evaluate_queries(queries, engine_names, stores, cap=cap)
    write_results_csv(rows, out_path)
    ok = sum(1 for r in rows if r.status == "ok")
    click.echo(f"wrote {len(rows)} rows ({ok} ok) to {out_path}")


def _render_report_csv(reports: list[CorrelationReport]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["engine", "feature", "method", "coefficient", "p_value", "n", "band"])
    outlier_lines = []
    for report in reports:
        for row in report.rows:
            writer.writerow(
                [
                    row.engine,
                    row.feature,
                    row.method,
                    f"{row.coefficient:.6g}",
                    "" if row.p_value != row.p_value else f"{row.p_value:.6g}",
                    str(row.n),
                    row.band,
                ]
            )
            if row.outlier_ids:
                outlier_lines.append(
                    f"# outliers: engine={row.engine} feature={row.feature} "
                    + ",".join(row.outlier_ids)
                )
    text = out.getvalue()
    if outlier_lines:
        text += "\n".join(outlier_lines) + "\n"
    return text


def _render_report_table(reports: list[CorrelationReport]) -> str:
    header = f"{'engine':<12} {'feature':<8} {'method':<9} {'coef':>9} {'p_value':>10} {'n':>4}  band"
    lines = [header, "-" * len(header)]
    for report in reports:
        for row in report.rows:
            p_text = "" if row.p_value != row.p_value else f"{row.p_value:.4g}"
            lines.append(
                f"{row.engine:<12} {row.feature:<8} {row.method:<9} "
                f"{row.coefficient:>9.4f} {p_text:>10} {row.n:>4}  {row.band}"
            )
    return "\n".join(lines)


@main.command()
@click.option("--results", "results_path", required=True, type=click.Path(exists=True))
@click.option("--runtimes", "runtimes_path", required=True, type=click.Path(exists=True))
@click.option("--features", default="E_T,E_J,E_P,Q_T,Q_J,Q_P")
@click.option("--method", type=click.Choice(list(METHODS)), default="spearman")
@click.option("--common-only", is_flag=True, default=False)
@click.option("--out", "out_path", type=click.Path(), default=None, help="Report CSV path.")
def correlate(results_path, runtimes_path, features, method, common_only, out_path) -> None:
    """Correlate metric columns with supplied per-(query, engine) runtimes."""
    feature_list = [f.strip() for f in features.split(",") if f.strip()]
    for feature in feature_list:
        if feature not in METRIC_FEATURES:
            click.echo(
                f"error: unknown feature {feature!r}; valid features: {', '.join(METRIC_FEATURES)}",
                err=True,
            )
            sys.exit(2)
    results = read_results_csv(results_path)
    runtimes = read_runtimes_csv(runtimes_path)

    engines_in_results = sorted({r["engine"] for r in results})
    engines_with_runtimes = {engine for (_, engine) in runtimes}
    for engine in engines_in_results:
        if engine not in engines_with_runtimes:
            click.echo(f"warning: no runtimes for engine {engine}; omitted", err=True)

    joined = []
    for record in results:
        key = (record["query_id"], record["engine"])
        if key in runtimes:
            merged = dict(record)
            merged["runtime_ms"] = runtimes[key]
            joined.append(merged)

    reports = []
    any_rows = False
    for feature in feature_list:
        report = correlate_results(
            joined, feature, "runtime_ms", method=method, common_only=common_only
        )
        for warning in report.warnings:
            click.echo(f"warning: {warning}", err=True)
        if any(row.engine != "average" for row in report.rows):
            any_rows = True
        reports.append(report)
    if not any_rows:
        click.echo("error: insufficient data: fewer than 3 joined rows for every engine", err=True)
        sys.exit(1)

    click.echo(_render_report_table(reports))
    if out_path:
        Path(out_path).write_text(_render_report_csv(reports), encoding="utf-8")
        click.echo(f"wrote report to {out_path}")


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path())
def fixtures(out_dir: str) -> None:
    """Emit the bundled corpora (toy stores, worked example, benchmark)."""
    written = fixture_mod.write_fixture_tree(out_dir)
    click.echo(f"wrote {len(written)} fixture files under {out_dir}")


if __name__ == "__main__":
    main()
