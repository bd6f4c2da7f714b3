"""Dataset statistics consumed by the cardinality estimators.

Three summary kinds are built from the same stores:

* ``VoidSummary`` - per-source and per-predicate triple / distinct-subject /
  distinct-object counts (the VoID-style statistics).
* ``CostFedSummary`` - the same counts plus average subject/object
  selectivities, defined as 1 / distinct-count so that ``T * avgSS`` is the
  mean number of triples per subject.
* ``CharSetSummary`` - characteristic sets (per-entity predicate sets with
  entity counts and per-predicate occurrence counts) and characteristic
  pairs (predicate-labelled links between two characteristic sets).

Each summary serializes to one versioned JSON file per source.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .store import TripleStore

SUMMARY_FORMAT_VERSION = 1


def _check_unique_sources(stores: Sequence[TripleStore]) -> None:
    names = [s.source_name for s in stores]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate source names: {names}")


# ---------------------------------------------------------------- VoID


@dataclass(frozen=True, slots=True)
class PredicateStats:
    triples: int
    distinct_subjects: int
    distinct_objects: int


@dataclass(slots=True)
class SourceVoid:
    source: str
    triples: int
    distinct_subjects: int
    distinct_objects: int
    predicates: dict[str, PredicateStats] = field(default_factory=dict)

    @property
    def distinct_predicates(self) -> int:
        return len(self.predicates)


class VoidSummary:
    def __init__(self, sources: Iterable[SourceVoid]):
        self.sources: dict[str, SourceVoid] = {s.source: s for s in sources}

    def source(self, name: str) -> SourceVoid:
        return self.sources[name]

    def predicate(self, source: str, predicate: str) -> PredicateStats | None:
        return self.sources[source].predicates.get(predicate)

    def to_json_dict(self, source: str) -> dict:
        s = self.sources[source]
        return {
            "format_version": SUMMARY_FORMAT_VERSION,
            "source": s.source,
            "stats": {
                "triples": s.triples,
                "distinct_subjects": s.distinct_subjects,
                "distinct_objects": s.distinct_objects,
                "predicates": {
                    p: {
                        "triples": st.triples,
                        "distinct_subjects": st.distinct_subjects,
                        "distinct_objects": st.distinct_objects,
                    }
                    for p, st in sorted(s.predicates.items())
                },
            },
        }

    @classmethod
    def from_json_dicts(cls, docs: Iterable[dict]) -> "VoidSummary":
        sources = []
        for doc in docs:
            _check_version(doc)
            stats = doc["stats"]
            sources.append(
                SourceVoid(
                    source=doc["source"],
                    triples=stats["triples"],
                    distinct_subjects=stats["distinct_subjects"],
                    distinct_objects=stats["distinct_objects"],
                    predicates={
                        p: PredicateStats(
                            st["triples"], st["distinct_subjects"], st["distinct_objects"]
                        )
                        for p, st in stats["predicates"].items()
                    },
                )
            )
        return cls(sources)


def build_void(stores: Sequence[TripleStore]) -> VoidSummary:
    """Exact per-source VoID statistics read off the store index tables."""
    _check_unique_sources(stores)
    sources = []
    for store in stores:
        predicates = {
            p: PredicateStats(
                triples=store.predicate_triples[p],
                distinct_subjects=store.predicate_distinct_subjects[p],
                distinct_objects=store.predicate_distinct_objects[p],
            )
            for p in store.predicate_triples
        }
        sources.append(
            SourceVoid(
                source=store.source_name,
                triples=store.total_triples,
                distinct_subjects=store.distinct_subjects,
                distinct_objects=store.distinct_objects,
                predicates=predicates,
            )
        )
    return VoidSummary(sources)


# ---------------------------------------------------------------- CostFed


@dataclass(frozen=True, slots=True)
class CostFedPredicateStats:
    triples: int
    distinct_subjects: int
    distinct_objects: int
    avg_subject_selectivity: float
    avg_object_selectivity: float


@dataclass(slots=True)
class SourceCostFed:
    source: str
    total_triples: int
    total_distinct_subjects: int
    total_distinct_objects: int
    predicates: dict[str, CostFedPredicateStats] = field(default_factory=dict)


class CostFedSummary:
    def __init__(self, sources: Iterable[SourceCostFed]):
        self.sources: dict[str, SourceCostFed] = {s.source: s for s in sources}

    def source(self, name: str) -> SourceCostFed:
        return self.sources[name]

    def predicate(self, source: str, predicate: str) -> CostFedPredicateStats | None:
        return self.sources[source].predicates.get(predicate)

    def to_json_dict(self, source: str) -> dict:
        s = self.sources[source]
        return {
            "format_version": SUMMARY_FORMAT_VERSION,
            "source": s.source,
            "stats": {
                "total_triples": s.total_triples,
                "total_distinct_subjects": s.total_distinct_subjects,
                "total_distinct_objects": s.total_distinct_objects,
                "predicates": {
                    p: {
                        "triples": st.triples,
                        "distinct_subjects": st.distinct_subjects,
                        "distinct_objects": st.distinct_objects,
                        "avg_subject_selectivity": st.avg_subject_selectivity,
                        "avg_object_selectivity": st.avg_object_selectivity,
                    }
                    for p, st in sorted(s.predicates.items())
                },
            },
        }

    @classmethod
    def from_json_dicts(cls, docs: Iterable[dict]) -> "CostFedSummary":
        sources = []
        for doc in docs:
            _check_version(doc)
            stats = doc["stats"]
            sources.append(
                SourceCostFed(
                    source=doc["source"],
                    total_triples=stats["total_triples"],
                    total_distinct_subjects=stats["total_distinct_subjects"],
                    total_distinct_objects=stats["total_distinct_objects"],
                    predicates={
                        p: CostFedPredicateStats(
                            st["triples"],
                            st["distinct_subjects"],
                            st["distinct_objects"],
                            st["avg_subject_selectivity"],
                            st["avg_object_selectivity"],
                        )
                        for p, st in stats["predicates"].items()
                    },
                )
            )
        return cls(sources)


def build_costfed(stores: Sequence[TripleStore]) -> CostFedSummary:
    """CostFed statistics; selectivities are reciprocals of distinct counts."""
    _check_unique_sources(stores)
    sources = []
    for store in stores:
        predicates = {}
        for p, count in store.predicate_triples.items():
            dsubj = store.predicate_distinct_subjects[p]
            dobj = store.predicate_distinct_objects[p]
            predicates[p] = CostFedPredicateStats(
                triples=count,
                distinct_subjects=dsubj,
                distinct_objects=dobj,
                avg_subject_selectivity=1.0 / dsubj,
                avg_object_selectivity=1.0 / dobj,
            )
        sources.append(
            SourceCostFed(
                source=store.source_name,
                total_triples=store.total_triples,
                total_distinct_subjects=store.distinct_subjects,
                total_distinct_objects=store.distinct_objects,
                predicates=predicates,
            )
        )
    return CostFedSummary(sources)


# ---------------------------------------------------------------- characteristic sets


CharSet = frozenset
CharPairKey = tuple  # (subject charset, object charset, predicate IRI)


@dataclass(slots=True)
class CharSetStats:
    count: int
    occurrences: dict[str, int]


@dataclass(slots=True)
class SourceCharSets:
    source: str
    charsets: dict[frozenset[str], CharSetStats] = field(default_factory=dict)
    charpairs: dict[tuple[frozenset[str], frozenset[str], str], int] = field(default_factory=dict)


class CharSetSummary:
    def __init__(self, sources: Iterable[SourceCharSets]):
        self.sources: dict[str, SourceCharSets] = {s.source: s for s in sources}

    def source(self, name: str) -> SourceCharSets:
        return self.sources[name]

    def to_json_dict(self, source: str) -> dict:
        s = self.sources[source]
        charsets = [
            {
                "predicates": sorted(cs),
                "count": stats.count,
                "occurrences": dict(sorted(stats.occurrences.items())),
            }
            for cs, stats in sorted(s.charsets.items(), key=lambda kv: sorted(kv[0]))
        ]
        charpairs = [
            {
                "subject_set": sorted(ci),
                "object_set": sorted(cj),
                "predicate": p,
                "count": count,
            }
            for (ci, cj, p), count in sorted(
                s.charpairs.items(), key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1]), kv[0][2])
            )
        ]
        return {
            "format_version": SUMMARY_FORMAT_VERSION,
            "source": s.source,
            "stats": {"characteristic_sets": charsets, "characteristic_pairs": charpairs},
        }

    @classmethod
    def from_json_dicts(cls, docs: Iterable[dict]) -> "CharSetSummary":
        sources = []
        for doc in docs:
            _check_version(doc)
            stats = doc["stats"]
            charsets = {
                frozenset(entry["predicates"]): CharSetStats(
                    entry["count"], dict(entry["occurrences"])
                )
                for entry in stats["characteristic_sets"]
            }
            charpairs = {
                (
                    frozenset(entry["subject_set"]),
                    frozenset(entry["object_set"]),
                    entry["predicate"],
                ): entry["count"]
                for entry in stats["characteristic_pairs"]
            }
            sources.append(SourceCharSets(doc["source"], charsets, charpairs))
        return cls(sources)


def build_charsets(stores: Sequence[TripleStore]) -> CharSetSummary:
    """Characteristic sets and pairs, computed per source (never merged).

    Sets are subject-rooted. Pair entries exist only for triples whose
    object is itself a subject (an entity) in the same source.
    """
    _check_unique_sources(stores)
    sources = []
    for store in stores:
        entity_preds: dict = {}
        entity_occ: dict = {}
        for t in store.triples:
            entity_preds.setdefault(t.subject, set()).add(t.predicate.lexical)
            occ = entity_occ.setdefault(t.subject, {})
            occ[t.predicate.lexical] = occ.get(t.predicate.lexical, 0) + 1

        entity_cs = {e: frozenset(preds) for e, preds in entity_preds.items()}
        charsets: dict[frozenset[str], CharSetStats] = {}
        for e, cs in entity_cs.items():
            stats = charsets.get(cs)
            if stats is None:
                stats = charsets[cs] = CharSetStats(0, {})
            stats.count += 1
            for p, n in entity_occ[e].items():
                stats.occurrences[p] = stats.occurrences.get(p, 0) + n

        charpairs: dict[tuple[frozenset[str], frozenset[str], str], int] = {}
        for t in store.triples:
            target_cs = entity_cs.get(t.object)
            if target_cs is None:
                continue
            key = (entity_cs[t.subject], target_cs, t.predicate.lexical)
            charpairs[key] = charpairs.get(key, 0) + 1

        sources.append(SourceCharSets(store.source_name, charsets, charpairs))
    return CharSetSummary(sources)


# ---------------------------------------------------------------- shared plumbing


@dataclass(slots=True)
class SummarySet:
    """All three summary kinds over the same stores."""

    void: VoidSummary
    costfed: CostFedSummary
    charsets: CharSetSummary


def build_all(stores: Sequence[TripleStore]) -> SummarySet:
    return SummarySet(build_void(stores), build_costfed(stores), build_charsets(stores))


def _check_version(doc: dict) -> None:
    version = doc.get("format_version")
    if version != SUMMARY_FORMAT_VERSION:
        raise ValueError(f"unsupported summary format_version {version!r}")


_KIND_SUFFIX = {"void": ".void.json", "costfed": ".costfed.json", "charsets": ".charsets.json"}
_KIND_CLASS = {"void": VoidSummary, "costfed": CostFedSummary, "charsets": CharSetSummary}


def save_summary(summary, kind: str, directory: str | Path) -> list[Path]:
    """Write one ``<source><suffix>`` JSON file per source; returns the paths."""
    suffix = _KIND_SUFFIX[kind]
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for source in sorted(summary.sources):
        path = directory / f"{source}{suffix}"
        path.write_text(json.dumps(summary.to_json_dict(source), indent=2), encoding="utf-8")
        written.append(path)
    return written


def load_summary(kind: str, directory: str | Path):
    suffix = _KIND_SUFFIX[kind]
    docs = []
    for path in sorted(Path(directory).glob(f"*{suffix}")):
        docs.append(json.loads(path.read_text(encoding="utf-8")))
    return _KIND_CLASS[kind].from_json_dicts(docs)
