"""Bundled corpora: toy stores, the worked three-pattern example, and a
deterministic synthetic benchmark (3 sources, 50 queries) for end-to-end
runs."""

from __future__ import annotations

import random
from pathlib import Path

from .ntriples import Triple, format_triple, iri
from .store import TripleStore, build_store

TOY_BASE = "http://example.org/toy/"
FIG_BASE = "http://example.org/three/"
BENCH_BASE = "http://example.org/bench/"

BENCH_SEED = 20240
BENCH_SOURCES = 3
BENCH_QUERY_COUNT = 50


def _toy_triple(s: str, p: str, o: str) -> Triple:
    return Triple(iri(TOY_BASE + s), iri(TOY_BASE + p), iri(TOY_BASE + o))


def toy1_triples() -> list[Triple]:
    """Five-triple single-source fixture used across the test suite."""
    return [
        _toy_triple("s1", "p", "o1"),
        _toy_triple("s1", "p", "o2"),
        _toy_triple("s2", "p", "o1"),
        _toy_triple("s2", "q", "o3"),
        _toy_triple("s3", "q", "o3"),
    ]


def toy2_triples() -> list[Triple]:
    """toy1 plus one triple that turns o3 into an entity (enables CP stats)."""
    return toy1_triples() + [_toy_triple("o3", "p", "o1")]


def toy_b_triples() -> list[Triple]:
    """A one-triple second source sharing predicate q with toy1."""
    return [_toy_triple("u", "q", "v")]


def toy1_store() -> TripleStore:
    return build_store("A", toy1_triples())


def toy_stores() -> list[TripleStore]:
    return [toy1_store(), build_store("B", toy_b_triples())]


def fig_example_triples() -> list[Triple]:
    """Corpus realizing the worked three-pattern star example.

    Real counts: p1 -> 100, p2 -> 200, p3 -> 300; joining p1 with p2 on the
    subject yields 50 rows and extending with p3 keeps 50, while joining p1
    with p3 first yields 75 rows (so that join order is the worse first
    choice).
    """
    p1, p2, p3 = (iri(FIG_BASE + p) for p in ("p1", "p2", "p3"))

    def entity(tag: str, i: int):
        return iri(f"{FIG_BASE}{tag}{i}")

    triples = []
    for i in range(50):  # subjects carrying all three predicates
        s = entity("full", i)
        triples.append(Triple(s, p1, entity("v1_", i)))
        triples.append(Triple(s, p2, entity("v2_", i)))
        triples.append(Triple(s, p3, entity("v3_", i)))
    for i in range(25):  # p1+p3 only: inflate the p1-p3 join
        s = entity("pair", i)
        triples.append(Triple(s, p1, entity("w1_", i)))
        triples.append(Triple(s, p3, entity("w3_", i)))
    for i in range(25):
        triples.append(Triple(entity("only1_", i), p1, entity("x1_", i)))
    for i in range(150):
        triples.append(Triple(entity("only2_", i), p2, entity("x2_", i)))
    for i in range(225):
        triples.append(Triple(entity("only3_", i), p3, entity("x3_", i)))
    return triples


def fig_example_store() -> TripleStore:
    return build_store("three", fig_example_triples())


def fig_example_query() -> str:
    return (
        "SELECT * WHERE {\n"
        f"  ?s <{FIG_BASE}p1> ?o1 .\n"
        f"  ?s <{FIG_BASE}p2> ?o2 .\n"
        f"  ?s <{FIG_BASE}p3> ?o3\n"
        "}\n"
    )


def toy_queries() -> dict[str, str]:
    return {
        "toy_star": (
            "SELECT * WHERE {\n"
            f"  ?s <{TOY_BASE}p> ?a .\n"
            f"  ?s <{TOY_BASE}q> ?b\n"
            "}\n"
        ),
        "toy_single": f"SELECT * WHERE {{ ?s <{TOY_BASE}p> ?o }}\n",
        "toy_path": (
            "SELECT * WHERE {\n"
            f"  ?a <{TOY_BASE}p> ?b .\n"
            f"  ?b <{TOY_BASE}q> ?c\n"
            "}\n"
        ),
        "toy_object_join": (
            "SELECT * WHERE {\n"
            f"  ?x <{TOY_BASE}q> ?v .\n"
            f"  ?y <{TOY_BASE}q> ?v\n"
            "}\n"
        ),
    }


def bench_stores(
    seed: int = BENCH_SEED, num_sources: int = BENCH_SOURCES
) -> list[TripleStore]:
    """Three interlinked synthetic sources (~180 subjects each, 8 predicates).

    Entities carry a varying predicate mix and link to each other through
    ``linksTo``/``relatedTo`` so path- and star-shaped queries all have
    non-trivial answers. Generation is fully deterministic in the seed.
    """
    rng = random.Random(seed)
    predicates = {
        "type": iri(BENCH_BASE + "voc/type"),
        "name": iri(BENCH_BASE + "voc/name"),
        "linksTo": iri(BENCH_BASE + "voc/linksTo"),
        "relatedTo": iri(BENCH_BASE + "voc/relatedTo"),
        "partOf": iri(BENCH_BASE + "voc/partOf"),
        "hasValue": iri(BENCH_BASE + "voc/hasValue"),
        "tag": iri(BENCH_BASE + "voc/tag"),
        "near": iri(BENCH_BASE + "voc/near"),
    }
    classes = [iri(BENCH_BASE + f"class/C{i}") for i in range(5)]
    tags = [iri(BENCH_BASE + f"tag/t{i}") for i in range(12)]
    values = [iri(BENCH_BASE + f"val/v{i}") for i in range(30)]
    all_entities = [iri(BENCH_BASE + f"e/{i}") for i in range(420)]

    stores = []
    for src_index in range(num_sources):
        lo = src_index * 120
        local = all_entities[lo : lo + 180]  # overlaps the next source's range
        triples = []
        for e in local:
            triples.append(Triple(e, predicates["type"], rng.choice(classes)))
            if rng.random() < 0.8:
                triples.append(Triple(e, predicates["name"], rng.choice(values)))
            for _ in range(rng.randrange(0, 3)):
                triples.append(Triple(e, predicates["linksTo"], rng.choice(all_entities)))
            if rng.random() < 0.5:
                triples.append(Triple(e, predicates["relatedTo"], rng.choice(local)))
            if rng.random() < 0.4:
                triples.append(Triple(e, predicates["partOf"], rng.choice(tags)))
            if rng.random() < 0.6:
                triples.append(Triple(e, predicates["hasValue"], rng.choice(values)))
            for _ in range(rng.randrange(0, 2)):
                triples.append(Triple(e, predicates["tag"], rng.choice(tags)))
            if rng.random() < 0.3:
                triples.append(Triple(e, predicates["near"], rng.choice(all_entities)))
        stores.append(build_store(f"src{src_index}", triples))
    return stores


def bench_queries(seed: int = BENCH_SEED, count: int = BENCH_QUERY_COUNT) -> dict[str, str]:
    """Deterministic star/path/mixed queries over the benchmark vocabulary."""
    rng = random.Random(seed + 1)
    voc = [
        "type",
        "name",
        "linksTo",
        "relatedTo",
        "partOf",
        "hasValue",
        "tag",
        "near",
    ]

    def p(name: str) -> str:
        return f"<{BENCH_BASE}voc/{name}>"

    queries: dict[str, str] = {}
    shapes = ["star2", "star3", "path2", "path3", "star_ground", "mixed"]
    for i in range(count):
        shape = shapes[i % len(shapes)]
        preds = rng.sample(voc, 4)
        if shape == "star2":
            body = f"?s {p(preds[0])} ?a . ?s {p(preds[1])} ?b"
        elif shape == "star3":
            body = f"?s {p(preds[0])} ?a . ?s {p(preds[1])} ?b . ?s {p(preds[2])} ?c"
        elif shape == "path2":
            body = f"?a {p('linksTo')} ?b . ?b {p(preds[0])} ?c"
        elif shape == "path3":
            body = f"?a {p('linksTo')} ?b . ?b {p('relatedTo')} ?c . ?c {p(preds[0])} ?d"
        elif shape == "star_ground":
            cls = rng.randrange(5)
            body = (
                f"?s {p('type')} <{BENCH_BASE}class/C{cls}> . "
                f"?s {p(preds[0])} ?a . ?s {p(preds[1])} ?b"
            )
        else:  # mixed: star plus outgoing hop
            body = (
                f"?s {p(preds[0])} ?a . ?s {p('linksTo')} ?t . ?t {p(preds[1])} ?v"
            )
        queries[f"q{i:02d}"] = f"SELECT * WHERE {{ {body} }}\n"
    return queries


def write_ntriples(path: Path, triples) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for t in triples:
            fh.write(format_triple(t) + "\n")


def write_fixture_tree(root: str | Path) -> list[Path]:
    """Materialize every bundled fixture under ``root``; returns the paths."""
    root = Path(root)
    written = []

    def emit_nt(rel: str, triples) -> None:
        path = root / rel
        write_ntriples(path, triples)
        written.append(path)

    def emit_text(rel: str, text: str) -> None:
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        written.append(path)

    emit_nt("toy/sources/A.nt", toy1_triples())
    emit_nt("toy/sources/B.nt", toy_b_triples())
    emit_nt("toy/sources/toy2.nt", toy2_triples())
    for name, text in toy_queries().items():
        emit_text(f"toy/queries/{name}.rq", text)

    emit_nt("three/sources/three.nt", fig_example_triples())
    emit_text("three/queries/three_star.rq", fig_example_query())

    for store in bench_stores():
        emit_nt(f"bench/sources/{store.source_name}.nt", store.triples)
    for name, text in bench_queries().items():
        emit_text(f"bench/queries/{name}.rq", text)
    return written
