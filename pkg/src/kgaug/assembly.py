"""Token-budget truncation, triple input assembly, and dataset export.

Each entity segment is the tokenization of ``name: description`` truncated
to the budget; a triple becomes ``[CLS] head [SEP] relation [SEP] tail
[SEP]``.  The relation segment is truncated with the same budget (relations
are short in practice).  Export writes the augmented dataset in layouts
downstream text-based trainers consume, byte-stable across reruns.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass
from pathlib import Path

from .corpus import (
    SPLIT_FILES,
    EntityRecord,
    KnowledgeGraph,
    get_adapter,
    save_dataset,
)
from .errors import ConfigError, ExportError
from .wordpiece import SubwordVocabulary, tokenize

CLS = "[CLS]"
SEP = "[SEP]"

SEGMENT_JOINER = ": "  # between entity name and description inside a segment


def truncate(tokens: list[str], budget: int) -> list[str]:
    """First ``min(len, budget)`` tokens; always a prefix of the input."""
    if budget < 0:
        raise ConfigError(f"truncation budget must be >= 0, got {budget}")
    return tokens[:budget]


def relation_surface(label: str) -> str:
    """Human-readable relation text: path-like labels become word sequences."""
    text = label.replace("/", " ").replace("_", " ").replace(".", " ")
    return " ".join(text.split())


@dataclass(frozen=True)
class AssembledInput:
    tokens: tuple[str, ...]

    def validate(self) -> None:
        tokens = self.tokens
        if not tokens or tokens[0] != CLS:
            raise AssertionError("input must start with [CLS]")
        if tokens.count(CLS) != 1:
            raise AssertionError("input must contain exactly one [CLS]")
        if tokens.count(SEP) != 3 or tokens[-1] != SEP:
            raise AssertionError("input must contain exactly three [SEP], the last terminal")

    def segments(self) -> tuple[list[str], list[str], list[str]]:
        """(head, relation, tail) token segments between the markers."""
        parts: list[list[str]] = [[]]
        for token in self.tokens[1:]:
            if token == SEP:
                parts.append([])
            else:
                parts[-1].append(token)
        head, relation, tail = parts[0], parts[1], parts[2]
        return head, relation, tail


def entity_segment(record: EntityRecord, budget: int, vocab: SubwordVocabulary) -> list[str]:
    text = record.name + SEGMENT_JOINER + record.final_description
    return truncate(tokenize(text, vocab), budget)


def assemble_input(
    head: EntityRecord,
    relation_text: str,
    tail: EntityRecord,
    budget: int,
    vocab: SubwordVocabulary,
) -> AssembledInput:
    """Build the marker-delimited token sequence for one triple."""
    head_seg = entity_segment(head, budget, vocab)
    rel_seg = truncate(tokenize(relation_surface(relation_text), vocab), budget)
    tail_seg = entity_segment(tail, budget, vocab)
    tokens = [CLS, *head_seg, SEP, *rel_seg, SEP, *tail_seg, SEP]
    return AssembledInput(tokens=tuple(tokens))


def assemble_triple(graph: KnowledgeGraph, triple, budget: int, vocab: SubwordVocabulary) -> AssembledInput:
    return assemble_input(
        graph.entities[triple.head],
        graph.relations[triple.relation].text,
        graph.entities[triple.tail],
        budget,
        vocab,
    )


def export(graph: KnowledgeGraph, format_id: str, out_dir: str | Path) -> list[Path]:
    """Write the (possibly augmented) dataset to ``out_dir``.

    formats:
      tsv   — the graph adapter's native text layout; an untouched graph
              reproduces its input entity-text files byte-identically
      jsonl — triple files plus ``entities.jsonl`` records
              ``{"id", "name", "description"}`` (description = final text)

    Triple files are copied verbatim from the source directory when it is
    available, otherwise serialized canonically.
    """
    if format_id not in ("tsv", "jsonl"):
        raise ConfigError(f"unknown export format {format_id!r} (expected tsv or jsonl)")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExportError(f"cannot create export directory {out_dir}: {exc}") from exc

    missing = [
        e.id for e in graph.entities if not e.name and not e.final_description
    ]
    if missing:
        raise ExportError(
            f"{len(missing)} entities have neither name nor description: "
            + ", ".join(missing[:10])
        )

    written: list[Path] = []
    if format_id == "tsv":
        written = save_dataset(graph, out_dir)
        written = _restore_source_triples(graph, out_dir, written)
        return written

    for split_name, fname in SPLIT_FILES.items():
        path = out_dir / fname
        source = graph.source_dir / fname if graph.source_dir else None
        if source is not None and source.exists() and source.resolve() != path.resolve():
            shutil.copyfile(source, path)
        else:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                for triple in graph.splits.get(split_name, []):
                    fh.write(
                        f"{graph.entities[triple.head].id}\t"
                        f"{graph.relations[triple.relation].id}\t"
                        f"{graph.entities[triple.tail].id}\n"
                    )
        written.append(path)
    entities_path = out_dir / "entities.jsonl"
    with open(entities_path, "w", encoding="utf-8", newline="\n") as fh:
        for record in graph.entities:
            fh.write(
                json.dumps(
                    {"id": record.id, "name": record.name, "description": record.final_description},
                    ensure_ascii=False,
                )
                + "\n"
            )
    written.append(entities_path)
    return written


def _restore_source_triples(graph: KnowledgeGraph, out_dir: Path, written: list[Path]) -> list[Path]:
    """Copy original triple files verbatim over the canonical serialization."""
    if graph.source_dir is None:
        return written
    for fname in SPLIT_FILES.values():
        source = graph.source_dir / fname
        target = out_dir / fname
        if source.exists() and source.resolve() != target.resolve():
            shutil.copyfile(source, target)
    return written
