"""Knowledge-graph dataset loading, statistics, and serialization.

Datasets follow the de-facto community layout: ``train.txt`` / ``valid.txt``
/ ``test.txt`` with one ``head<TAB>relation<TAB>tail`` triple per line, plus
entity and relation text files keyed by id.  Two entity-text layouts exist
in the wild and both are supported:

* combined  — one file, ``id<TAB>name, description`` (description optional)
* split     — a names file ``id<TAB>name`` and a separate descriptions file
              ``id<TAB>description`` (descriptions may be missing)

Per-dataset adapters pin the layout, the polysemy lemma rule, and the
expected reference statistics used by ``--check``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, DatasetParseError, ResolutionError
from .wordpiece import SubwordVocabulary, token_length

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Triple:
    """One fact, with ids interned as indices into the graph tables."""

    head: int
    relation: int
    tail: int


@dataclass
class EntityRecord:
    id: str
    name: str
    description: str = ""
    augmented_description: str | None = None

    @property
    def final_description(self) -> str:
        """Cleaned text when augmentation succeeded, original otherwise."""
        if self.augmented_description is not None:
            return self.augmented_description
        return self.description


@dataclass
class RelationRecord:
    id: str
    text: str


@dataclass
class KnowledgeGraph:
    entities: list[EntityRecord]
    relations: list[RelationRecord]
    splits: dict[str, list[Triple]]
    dataset_id: str = "generic"
    source_dir: Path | None = None

    entity_index: dict[str, int] = field(init=False, repr=False)
    relation_index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.entity_index = {e.id: i for i, e in enumerate(self.entities)}
        self.relation_index = {r.id: i for i, r in enumerate(self.relations)}
        if len(self.entity_index) != len(self.entities):
            raise DatasetParseError("duplicate entity ids in entity table")
        if len(self.relation_index) != len(self.relations):
            raise DatasetParseError("duplicate relation ids in relation table")

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    @property
    def n_relations(self) -> int:
        return len(self.relations)

    def split(self, name: str) -> list[Triple]:
        try:
            return self.splits[name]
        except KeyError:
            raise ConfigError(f"unknown split {name!r}; have {sorted(self.splits)}") from None

    def all_triples(self) -> list[Triple]:
        out: list[Triple] = []
        for name in ("train", "valid", "test"):
            out.extend(self.splits.get(name, []))
        return out


SPLIT_FILES = {"train": "train.txt", "valid": "valid.txt", "test": "test.txt"}


@dataclass(frozen=True)
class ReferenceStats:
    entities: int
    relations: int
    train: int
    valid: int
    test: int


# Published statistics of the three reference benchmarks.
REFERENCE_STATS: dict[str, ReferenceStats] = {
    "umls": ReferenceStats(135, 46, 5216, 652, 661),
    "wn18rr": ReferenceStats(40943, 11, 86835, 3034, 3134),
    "fb15k237": ReferenceStats(14541, 237, 272115, 17535, 20466),
}


@dataclass(frozen=True)
class DatasetAdapter:
    """Layout and conventions for one dataset family."""

    dataset_id: str
    layout: str = "combined"  # "combined" | "split"
    entity_file: str = "entity2text.txt"
    description_file: str = "entity2textlong.txt"  # split layout only
    relation_file: str = "relation2text.txt"
    relations_from_triples: bool = False  # tolerate a missing relation file
    lemma_rule: str = "exact_name"  # "exact_name" | "wordnet_pos_sense"
    default_budget: int = 30


ADAPTERS: dict[str, DatasetAdapter] = {
    "wn18rr": DatasetAdapter(
        dataset_id="wn18rr", layout="combined", lemma_rule="wordnet_pos_sense"
    ),
    "fb15k237": DatasetAdapter(
        dataset_id="fb15k237", layout="split", relations_from_triples=True
    ),
    "umls": DatasetAdapter(
        dataset_id="umls", layout="split", relations_from_triples=True
    ),
    "generic": DatasetAdapter(dataset_id="generic", layout="combined"),
}


def get_adapter(name: str) -> DatasetAdapter:
    try:
        return ADAPTERS[name]
    except KeyError:
        raise ConfigError(f"unknown dataset adapter {name!r}; have {sorted(ADAPTERS)}") from None


def _read_lines(path: Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if line:
                yield lineno, line


def parse_triples(
    lines: Iterable[str],
    entity_index: dict[str, int],
    relation_index: dict[str, int],
    source: str = "<stream>",
) -> list[Triple]:
    """Parse tab-separated triples, interning ids against the given tables.

    Raises DatasetParseError with the offending line number for malformed
    lines, ResolutionError for ids absent from the tables.
    """
    triples: list[Triple] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise DatasetParseError(
                f"{source}:{lineno}: expected 3 tab-separated fields, got {len(parts)}"
            )
        head, relation, tail = parts
        try:
            h = entity_index[head]
        except KeyError:
            raise ResolutionError(f"{source}:{lineno}: unknown entity id {head!r}") from None
        try:
            t = entity_index[tail]
        except KeyError:
            raise ResolutionError(f"{source}:{lineno}: unknown entity id {tail!r}") from None
        try:
            r = relation_index[relation]
        except KeyError:
            raise ResolutionError(f"{source}:{lineno}: unknown relation id {relation!r}") from None
        triples.append(Triple(h, r, t))
    return triples


def load_entity_texts(lines: Iterable[str], combined: bool = True, source: str = "<stream>") -> dict[str, tuple[str, str]]:
    """Parse an entity text file into id -> (name, description).

    In the combined layout the name is the text before the first ``", "``;
    everything after it is the description.  Duplicate ids are an error.
    """
    table: dict[str, tuple[str, str]] = {}
    positions: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line:
            continue
        ident, sep, text = line.partition("\t")
        if not sep:
            raise DatasetParseError(f"{source}:{lineno}: expected `id<TAB>text`")
        if ident in table:
            raise DatasetParseError(
                f"{source}:{lineno}: duplicate entity id {ident!r} "
                f"(first seen at line {positions[ident]})"
            )
        positions[ident] = lineno
        if combined:
            name, found, description = text.partition(", ")
            table[ident] = (name, description if found else "")
        else:
            table[ident] = (text, "")
    return table


def _scan_relation_ids(data_dir: Path) -> list[str]:
    seen: dict[str, None] = {}
    for fname in SPLIT_FILES.values():
        path = data_dir / fname
        if not path.exists():
            continue
        for _, line in _read_lines(path):
            parts = line.split("\t")
            if len(parts) == 3:
                seen.setdefault(parts[1], None)
    return list(seen)


def load_dataset(data_dir: str | Path, adapter: str | DatasetAdapter = "generic") -> KnowledgeGraph:
    """Load a dataset directory into an immutable in-memory graph."""
    if isinstance(adapter, str):
        adapter = get_adapter(adapter)
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise ConfigError(f"dataset directory not found: {data_dir}")

    entity_path = data_dir / adapter.entity_file
    if not entity_path.exists():
        raise ConfigError(f"entity text file not found: {entity_path}")
    named = load_entity_texts(
        (line for _, line in _read_lines(entity_path)),
        combined=(adapter.layout == "combined"),
        source=str(entity_path),
    )
    entities = [EntityRecord(id=k, name=v[0], description=v[1]) for k, v in named.items()]

    if adapter.layout == "split":
        desc_path = data_dir / adapter.description_file
        if desc_path.exists():
            index = {e.id: e for e in entities}
            descriptions = load_entity_texts(
                (line for _, line in _read_lines(desc_path)),
                combined=False,
                source=str(desc_path),
            )
            for ident, (text, _) in descriptions.items():
                record = index.get(ident)
                if record is None:
                    raise ResolutionError(
                        f"{desc_path}: description for unknown entity id {ident!r}"
                    )
                record.description = text

    relation_path = data_dir / adapter.relation_file
    if relation_path.exists():
        rel_table = load_entity_texts(
            (line for _, line in _read_lines(relation_path)),
            combined=False,
            source=str(relation_path),
        )
        relations = [RelationRecord(id=k, text=v[0]) for k, v in rel_table.items()]
    elif adapter.relations_from_triples:
        relations = [RelationRecord(id=r, text=r) for r in _scan_relation_ids(data_dir)]
    else:
        raise ConfigError(f"relation text file not found: {relation_path}")

    graph = KnowledgeGraph(
        entities=entities,
        relations=relations,
        splits={},
        dataset_id=adapter.dataset_id,
        source_dir=data_dir,
    )

    splits: dict[str, list[Triple]] = {}
    for split_name, fname in SPLIT_FILES.items():
        path = data_dir / fname
        if not path.exists():
            raise ConfigError(f"split file not found: {path}")
        with open(path, encoding="utf-8") as fh:
            triples = parse_triples(fh, graph.entity_index, graph.relation_index, source=str(path))
        splits[split_name] = _dedup_split(triples, split_name)
    graph.splits = splits
    _warn_cross_split(graph)
    return graph


def _dedup_split(triples: list[Triple], split_name: str) -> list[Triple]:
    seen: set[Triple] = set()
    out: list[Triple] = []
    dups = 0
    for triple in triples:
        if triple in seen:
            dups += 1
            continue
        seen.add(triple)
        out.append(triple)
    if dups:
        log.warning("split %s: dropped %d duplicate triples", split_name, dups)
    return out


def _warn_cross_split(graph: KnowledgeGraph) -> None:
    seen: dict[Triple, str] = {}
    for name, triples in graph.splits.items():
        for triple in triples:
            prior = seen.get(triple)
            if prior is not None and prior != name:
                log.warning(
                    "triple (%s, %s, %s) appears in both %s and %s",
                    graph.entities[triple.head].id,
                    graph.relations[triple.relation].id,
                    graph.entities[triple.tail].id,
                    prior,
                    name,
                )
            else:
                seen[triple] = name


def save_dataset(graph: KnowledgeGraph, out_dir: str | Path, adapter: str | DatasetAdapter | None = None) -> list[Path]:
    """Write a graph back to disk in its adapter's native layout.

    Entity descriptions are written from ``final_description`` so an
    untouched graph round-trips byte-identically while an augmented one
    carries its cleaned text.
    """
    if adapter is None:
        adapter = get_adapter(graph.dataset_id)
    elif isinstance(adapter, str):
        adapter = get_adapter(adapter)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    for split_name, fname in SPLIT_FILES.items():
        path = out_dir / fname
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for triple in graph.splits.get(split_name, []):
                fh.write(
                    f"{graph.entities[triple.head].id}\t"
                    f"{graph.relations[triple.relation].id}\t"
                    f"{graph.entities[triple.tail].id}\n"
                )
        written.append(path)

    entity_path = out_dir / adapter.entity_file
    with open(entity_path, "w", encoding="utf-8", newline="\n") as fh:
        for record in graph.entities:
            if adapter.layout == "combined":
                text = record.final_description
                line = f"{record.id}\t{record.name}, {text}" if text else f"{record.id}\t{record.name}"
            else:
                line = f"{record.id}\t{record.name}"
            fh.write(line + "\n")
    written.append(entity_path)

    if adapter.layout == "split":
        desc_path = out_dir / adapter.description_file
        with open(desc_path, "w", encoding="utf-8", newline="\n") as fh:
            for record in graph.entities:
                text = record.final_description
                if text:
                    fh.write(f"{record.id}\t{text}\n")
        written.append(desc_path)

    if not adapter.relations_from_triples:
        rel_path = out_dir / adapter.relation_file
        with open(rel_path, "w", encoding="utf-8", newline="\n") as fh:
            for rel in graph.relations:
                fh.write(f"{rel.id}\t{rel.text}\n")
        written.append(rel_path)
    return written


_WORDNET_NAME = re.compile(r"^(?P<lemma>.+)-(?P<pos>[A-Za-z]+)-(?P<sense>\d+)$")


def surface_lemma(name: str, rule: str = "exact_name") -> str:
    """Extract the grouping key for polysemy detection."""
    if rule == "wordnet_pos_sense":
        match = _WORDNET_NAME.match(name)
        if match:
            return match.group("lemma").casefold()
        return name.casefold()
    if rule == "exact_name":
        return name.casefold()
    raise ConfigError(f"unknown lemma rule {rule!r}")


@dataclass
class PolysemyReport:
    rule: str
    groups: dict[str, list[str]]  # lemma -> entity ids, multi-member only
    n_entities: int
    entities_in_groups: int
    proportion_entities: float
    proportion_groups: float

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "entities": self.n_entities,
            "multi_member_groups": len(self.groups),
            "entities_in_groups": self.entities_in_groups,
            "proportion_entities": self.proportion_entities,
            "proportion_groups": self.proportion_groups,
        }


def polysemy_groups(graph: KnowledgeGraph, rule: str | None = None) -> PolysemyReport:
    """Group entities sharing one surface lemma.

    ``proportion_entities`` counts entities that live in groups of size >= 2
    over all entities; ``proportion_groups`` counts multi-member groups over
    all lemma groups (both reported, as the two readings differ).
    """
    if rule is None:
        rule = get_adapter(graph.dataset_id).lemma_rule if graph.dataset_id in ADAPTERS else "exact_name"
    buckets: dict[str, list[str]] = {}
    for record in graph.entities:
        buckets.setdefault(surface_lemma(record.name, rule), []).append(record.id)
    multi = {lemma: ids for lemma, ids in buckets.items() if len(ids) >= 2}
    in_groups = sum(len(ids) for ids in multi.values())
    n = len(graph.entities)
    return PolysemyReport(
        rule=rule,
        groups=multi,
        n_entities=n,
        entities_in_groups=in_groups,
        proportion_entities=(in_groups / n) if n else 0.0,
        proportion_groups=(len(multi) / len(buckets)) if buckets else 0.0,
    )


@dataclass
class GraphStats:
    dataset: str
    entities: int
    relations: int
    splits: dict[str, int]
    empty_descriptions: int
    description_tokens: dict[str, float] | None = None

    def to_dict(self) -> dict:
        out = {
            "dataset": self.dataset,
            "entities": self.entities,
            "relations": self.relations,
            "splits": dict(self.splits),
            "empty_descriptions": self.empty_descriptions,
        }
        if self.description_tokens is not None:
            out["description_tokens"] = dict(self.description_tokens)
        return out


def graph_stats(graph: KnowledgeGraph, vocab: SubwordVocabulary | None = None) -> GraphStats:
    """Entity/relation/split counts plus a description-length summary."""
    stats = GraphStats(
        dataset=graph.dataset_id,
        entities=graph.n_entities,
        relations=graph.n_relations,
        splits={name: len(triples) for name, triples in graph.splits.items()},
        empty_descriptions=sum(1 for e in graph.entities if not e.description),
    )
    if vocab is not None:
        lengths = [token_length(e.description, vocab) for e in graph.entities]
        summary: dict[str, float] = {}
        summary["overall_mean"] = (sum(lengths) / len(lengths)) if lengths else 0.0
        for split_name, triples in graph.splits.items():
            used: set[int] = set()
            for triple in triples:
                used.add(triple.head)
                used.add(triple.tail)
            if used:
                summary[f"{split_name}_mean"] = sum(lengths[i] for i in used) / len(used)
            else:
                summary[f"{split_name}_mean"] = 0.0
        stats.description_tokens = summary
    return stats


def check_reference_stats(stats: GraphStats) -> list[str]:
    """Compare measured counts against the published reference statistics.

    Returns a list of human-readable mismatches (empty = all cells match).
    """
    expected = REFERENCE_STATS.get(stats.dataset)
    if expected is None:
        return [f"no reference statistics registered for dataset {stats.dataset!r}"]
    mismatches = []
    pairs = [
        ("entities", stats.entities, expected.entities),
        ("relations", stats.relations, expected.relations),
        ("train", stats.splits.get("train", 0), expected.train),
        ("valid", stats.splits.get("valid", 0), expected.valid),
        ("test", stats.splits.get("test", 0), expected.test),
    ]
    for label, got, want in pairs:
        if got != want:
            mismatches.append(f"{label}: expected {want}, got {got}")
    return mismatches


def with_augmentations(graph: KnowledgeGraph, texts: dict[str, str]) -> KnowledgeGraph:
    """Return a copy of the graph with augmented descriptions applied."""
    entities = [
        replace(e, augmented_description=texts.get(e.id, e.augmented_description))
        for e in graph.entities
    ]
    clone = KnowledgeGraph(
        entities=entities,
        relations=list(graph.relations),
        splits={k: list(v) for k, v in graph.splits.items()},
        dataset_id=graph.dataset_id,
        source_dir=graph.source_dir,
    )
    return clone
