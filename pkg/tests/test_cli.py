import csv

import pytest
from click.testing import CliRunner

from fedcard.cli import main
from fedcard.evaluation import RESULTS_HEADER


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def workspace(tmp_path, runner):
    """Fixture tree plus ingested toy stores."""
    fx = tmp_path / "fx"
    result = runner.invoke(main, ["fixtures", "--out", str(fx)])
    assert result.exit_code == 0, result.output
    stores = tmp_path / "stores"
    for name in ("A", "B"):
        result = runner.invoke(
            main,
            ["ingest", "--source", name, "--file", str(fx / f"toy/sources/{name}.nt"), "--out", str(stores)],
        )
        assert result.exit_code == 0, result.output
    return tmp_path


def test_ingest_reports_triple_count(runner, workspace):
    assert (workspace / "stores" / "A.store").exists()


def test_ingest_missing_file(runner, tmp_path):
    result = runner.invoke(
        main, ["ingest", "--source", "X", "--file", str(tmp_path / "nope.nt"), "--out", str(tmp_path)]
    )
    assert result.exit_code == 2
    assert "no such file" in result.output


def test_ingest_malformed_line_number(runner, tmp_path):
    bad = tmp_path / "bad.nt"
    good_line = "<http://x/s> <http://x/p> <http://x/o> .\n"
    bad.write_text(good_line * 6 + "<http://x/s> <http://x/p> oops .\n")
    result = runner.invoke(
        main, ["ingest", "--source", "X", "--file", str(bad), "--out", str(tmp_path / "st")]
    )
    assert result.exit_code == 1
    assert "line 7" in result.output


def test_summarize_writes_all_kinds(runner, workspace):
    out = workspace / "summ"
    result = runner.invoke(
        main, ["summarize", "--stores", str(workspace / "stores"), "--out", str(out), "--kind", "all"]
    )
    assert result.exit_code == 0, result.output
    for kind in ("void", "costfed", "charsets"):
        assert (out / f"A.{kind}.json").exists()
        assert (out / f"B.{kind}.json").exists()


def test_evaluate_header_and_sorting(runner, workspace):
    out = workspace / "results.csv"
    result = runner.invoke(
        main,
        [
            "evaluate",
            "--stores", str(workspace / "stores"),
            "--queries", str(workspace / "fx/toy/queries"),
            "--engines", "all",
            "--out", str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == RESULTS_HEADER
    keys = [(r["query_id"], r["engine"]) for r in csv.DictReader(out.open())]
    assert keys == sorted(keys)
    assert len(keys) == 20  # 4 queries x 5 engines


def test_evaluate_empty_query_dir(runner, workspace, tmp_path):
    empty = tmp_path / "noqueries"
    empty.mkdir()
    out = tmp_path / "empty.csv"
    result = runner.invoke(
        main,
        ["evaluate", "--stores", str(workspace / "stores"), "--queries", str(empty), "--out", str(out)],
    )
    assert result.exit_code == 0
    assert out.read_text() == RESULTS_HEADER + "\n"


def test_evaluate_unparseable_query_yields_failed_rows(runner, workspace, tmp_path):
    queries = tmp_path / "queries"
    queries.mkdir()
    (queries / "bad.rq").write_text("SELECT * WHERE { ?s <http://x/p> ?o OPTIONAL { ?s ?p ?o } }")
    out = tmp_path / "bad.csv"
    result = runner.invoke(
        main,
        ["evaluate", "--stores", str(workspace / "stores"), "--queries", str(queries), "--out", str(out)],
    )
    assert result.exit_code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 5
    assert all(r["status"] == "failed" and r["plan_class"] == "Failed" for r in rows)
    assert all(r["E_P"] == "" for r in rows)


def test_evaluate_unknown_engine(runner, workspace, tmp_path):
    result = runner.invoke(
        main,
        [
            "evaluate",
            "--stores", str(workspace / "stores"),
            "--queries", str(workspace / "fx/toy/queries"),
            "--engines", "costfed,warpdrive",
            "--out", str(tmp_path / "x.csv"),
        ],
    )
    assert result.exit_code == 2
    for name in ("costfed", "splendid", "lhd", "semagrow", "odyssey"):
        assert name in result.output


def test_evaluate_oracle_cap_produces_blowup_rows(runner, workspace, tmp_path):
    out = tmp_path / "capped.csv"
    result = runner.invoke(
        main,
        [
            "evaluate",
            "--stores", str(workspace / "stores"),
            "--queries", str(workspace / "fx/toy/queries"),
            "--out", str(out),
            "--oracle-cap", "1",
        ],
    )
    assert result.exit_code == 0
    rows = list(csv.DictReader(out.open()))
    blown = [r for r in rows if r["status"] == "oracle_blowup"]
    assert blown
    for row in blown:
        assert row["E_P"] == "" and row["Q_P"] == ""
        assert row["plan_class"] == "Failed"


def test_oracle_cap_env_override(runner, workspace, tmp_path, monkeypatch):
    monkeypatch.setenv("FEDCARD_ORACLE_CAP", "1")
    out = tmp_path / "env.csv"
    result = runner.invoke(
        main,
        [
            "evaluate",
            "--stores", str(workspace / "stores"),
            "--queries", str(workspace / "fx/toy/queries"),
            "--out", str(out),
        ],
    )
    assert result.exit_code == 0
    rows = list(csv.DictReader(out.open()))
    assert any(r["status"] == "oracle_blowup" for r in rows)


def test_evaluate_deterministic(runner, workspace, tmp_path):
    args = [
        "evaluate",
        "--stores", str(workspace / "stores"),
        "--queries", str(workspace / "fx/toy/queries"),
        "--seed", "7",
    ]
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    assert runner.invoke(main, args + ["--out", str(out1)]).exit_code == 0
    assert runner.invoke(main, args + ["--out", str(out2)]).exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def _write_runtimes(path, rows, feature="E_P", slope=100.0):
    with path.open("w") as fh:
        fh.write("query_id,engine,runtime_ms\n")
        for row in rows:
            if row["status"] != "ok":
                continue
            runtime = slope * float(row[feature]) + 1.0
            fh.write(f"{row['query_id']},{row['engine']},{runtime}\n")


def test_correlate_round_trip(runner, workspace, tmp_path):
    results = tmp_path / "results.csv"
    invoke = runner.invoke(
        main,
        [
            "evaluate",
            "--stores", str(workspace / "stores"),
            "--queries", str(workspace / "fx/toy/queries"),
            "--out", str(results),
        ],
    )
    assert invoke.exit_code == 0
    rows = list(csv.DictReader(results.open()))
    runtimes = tmp_path / "runtimes.csv"
    _write_runtimes(runtimes, rows)
    report_csv = tmp_path / "report.csv"
    result = runner.invoke(
        main,
        [
            "correlate",
            "--results", str(results),
            "--runtimes", str(runtimes),
            "--features", "E_P",
            "--method", "spearman",
            "--out", str(report_csv),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "engine" in result.output and "band" in result.output
    text = report_csv.read_text()
    assert text.startswith("engine,feature,method,coefficient,p_value,n,band")


def test_correlate_missing_engine_warns(runner, workspace, tmp_path):
    results = tmp_path / "results.csv"
    runner.invoke(
        main,
        [
            "evaluate",
            "--stores", str(workspace / "stores"),
            "--queries", str(workspace / "fx/toy/queries"),
            "--out", str(results),
        ],
    )
    rows = [r for r in csv.DictReader(results.open()) if r["engine"] != "lhd"]
    runtimes = tmp_path / "runtimes.csv"
    _write_runtimes(runtimes, rows)
    result = runner.invoke(
        main,
        ["correlate", "--results", str(results), "--runtimes", str(runtimes), "--features", "E_P"],
    )
    assert "no runtimes for engine lhd" in result.output


def test_correlate_insufficient_data(runner, workspace, tmp_path):
    results = tmp_path / "results.csv"
    runner.invoke(
        main,
        [
            "evaluate",
            "--stores", str(workspace / "stores"),
            "--queries", str(workspace / "fx/toy/queries"),
            "--out", str(results),
        ],
    )
    runtimes = tmp_path / "runtimes.csv"
    rows = list(csv.DictReader(results.open()))[:2]
    _write_runtimes(runtimes, rows)
    result = runner.invoke(
        main,
        ["correlate", "--results", str(results), "--runtimes", str(runtimes), "--features", "E_P"],
    )
    assert result.exit_code == 1
    assert "insufficient data" in result.output


def test_correlate_unknown_feature(runner, workspace, tmp_path):
    results = tmp_path / "results.csv"
    results.write_text(RESULTS_HEADER + "\n")
    runtimes = tmp_path / "runtimes.csv"
    runtimes.write_text("query_id,engine,runtime_ms\n")
    result = runner.invoke(
        main,
        ["correlate", "--results", str(results), "--runtimes", str(runtimes), "--features", "XX"],
    )
    assert result.exit_code == 2
    assert "unknown feature" in result.output


def test_correlate_irls_outlier_footer(runner, tmp_path):
    results = tmp_path / "results.csv"
    with results.open("w") as fh:
        fh.write(RESULTS_HEADER + "\n")
        for i in range(10):
            e_p = 0.05 * i
            fh.write(f"q{i},costfed,0,0,{e_p},1,1,1,OptP,2,1,2,false,ok\n")
    runtimes = tmp_path / "runtimes.csv"
    with runtimes.open("w") as fh:
        fh.write("query_id,engine,runtime_ms\n")
        for i in range(10):
            runtime = 1e4 if i == 5 else 100.0 * (0.05 * i)
            fh.write(f"q{i},costfed,{runtime}\n")
    report_csv = tmp_path / "report.csv"
    result = runner.invoke(
        main,
        [
            "correlate",
            "--results", str(results),
            "--runtimes", str(runtimes),
            "--features", "E_P",
            "--method", "irls",
            "--out", str(report_csv),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "# outliers:" in report_csv.read_text()
    assert "q5" in report_csv.read_text()
