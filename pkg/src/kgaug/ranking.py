"""Filtered link-prediction evaluation: MRR and Hits@k over head- and
tail-prediction directions.

For a query, every candidate that forms a known true triple (from train,
valid, and test together) other than the query's own answer is removed
before ranking.  Ties break pessimistically by default: the true answer is
placed after every equal-scored competitor, so constant scorers cannot look
good.  Optimistic and mean tie handling are available for cross-paper
comparison.

``exhaustive_rank`` is an independent sort-based oracle for small graphs;
``filtered_rank`` is the counting-based production path.  Tests hold them
equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .corpus import KnowledgeGraph, Triple
from .errors import ConfigError

PREDICT_HEAD = "head"
PREDICT_TAIL = "tail"
TIE_MODES = ("pessimistic", "optimistic", "mean")

HITS_AT = (1, 3, 10)


class CandidateScorer(Protocol):
    """Anything that scores all entities as head or tail candidates."""

    def score_tails(self, h: int, r: int) -> np.ndarray: ...

    def score_heads(self, r: int, t: int) -> np.ndarray: ...


class FilterIndex:
    """Known true triples indexed for filtered evaluation."""

    def __init__(self, triples: list[Triple]):
        self.tails_of: dict[tuple[int, int], set[int]] = {}
        self.heads_of: dict[tuple[int, int], set[int]] = {}
        for triple in triples:
            self.tails_of.setdefault((triple.head, triple.relation), set()).add(triple.tail)
            self.heads_of.setdefault((triple.relation, triple.tail), set()).add(triple.head)

    @classmethod
    def from_graph(cls, graph: KnowledgeGraph) -> "FilterIndex":
        return cls(graph.all_triples())

    def competitors_to_drop(self, triple: Triple, direction: str) -> set[int]:
        """Candidate ids to remove: known answers except the query's own."""
        if direction == PREDICT_TAIL:
            known = self.tails_of.get((triple.head, triple.relation), set())
            return known - {triple.tail}
        if direction == PREDICT_HEAD:
            known = self.heads_of.get((triple.relation, triple.tail), set())
            return known - {triple.head}
        raise ConfigError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class RankQuery:
    triple: Triple
    direction: str  # PREDICT_HEAD | PREDICT_TAIL
    filter_index: FilterIndex

    @property
    def answer(self) -> int:
        return self.triple.head if self.direction == PREDICT_HEAD else self.triple.tail


def _candidate_scores(scorer: CandidateScorer, query: RankQuery) -> np.ndarray:
    triple = query.triple
    if query.direction == PREDICT_TAIL:
        raw = scorer.score_tails(triple.head, triple.relation)
    else:
        raw = scorer.score_heads(triple.relation, triple.tail)
    return np.array(raw, dtype=np.float64, copy=True)


def filtered_rank(scorer: CandidateScorer, query: RankQuery, ties: str = "pessimistic") -> float:
    """Rank of the true answer among unfiltered candidates (1 = best)."""
    if ties not in TIE_MODES:
        raise ConfigError(f"unknown tie mode {ties!r}; have {TIE_MODES}")
    scores = _candidate_scores(scorer, query)
    answer = query.answer
    true_score = scores[answer]
    drop = query.filter_index.competitors_to_drop(query.triple, query.direction)
    if drop:
        mask = np.zeros(len(scores), dtype=bool)
        mask[list(drop)] = True
        mask[answer] = False
        scores = np.where(mask, -np.inf, scores)
    scores[answer] = -np.inf  # the answer never competes with itself
    better = int(np.sum(scores > true_score))
    equal = int(np.sum(scores == true_score))
    if ties == "optimistic":
        return better + 1
    if ties == "pessimistic":
        return better + equal + 1
    return better + 1 + equal / 2.0


def exhaustive_rank(scorer: CandidateScorer, query: RankQuery, ties: str = "pessimistic") -> float:
    """Sort-based oracle: explicitly order every candidate, then locate the
    answer.  Quadratic-ish and meant for small graphs."""
    if ties not in TIE_MODES:
        raise ConfigError(f"unknown tie mode {ties!r}; have {TIE_MODES}")
    scores = _candidate_scores(scorer, query)
    answer = query.answer
    drop = query.filter_index.competitors_to_drop(query.triple, query.direction)
    candidates = [c for c in range(len(scores)) if c == answer or c not in drop]
    if ties == "optimistic":
        order = sorted(candidates, key=lambda c: (-scores[c], 0 if c == answer else 1))
        return order.index(answer) + 1
    if ties == "pessimistic":
        order = sorted(candidates, key=lambda c: (-scores[c], 1 if c == answer else 0))
        return order.index(answer) + 1
    opt = exhaustive_rank(scorer, query, "optimistic")
    pess = exhaustive_rank(scorer, query, "pessimistic")
    return (opt + pess) / 2.0


def _aggregate(ranks: np.ndarray) -> dict[str, float]:
    metrics = {"mrr": float(np.mean(1.0 / ranks))}
    for k in HITS_AT:
        metrics[f"hits@{k}"] = float(np.mean(ranks <= k))
    return metrics


@dataclass
class RankReport:
    split: str
    ties: str
    ranks: dict[str, list[float]]  # direction -> per-query ranks, triple order
    metrics: dict[str, dict[str, float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.metrics:
            self.metrics = self._compute_metrics()

    def _compute_metrics(self) -> dict[str, dict[str, float]]:
        out = {}
        stacked: list[float] = []
        for direction, ranks in self.ranks.items():
            arr = np.asarray(ranks, dtype=np.float64)
            out[direction] = _aggregate(arr)
            stacked.extend(ranks)
        out["overall"] = _aggregate(np.asarray(stacked, dtype=np.float64))
        return out

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "ties": self.ties,
            "metrics": self.metrics,
            "ranks": self.ranks,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def from_dict(cls, payload: dict) -> "RankReport":
        return cls(
            split=payload["split"],
            ties=payload["ties"],
            ranks=payload["ranks"],
            metrics=payload["metrics"],
        )

    @classmethod
    def load(cls, path: str | Path) -> "RankReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def table(self) -> str:
        """Aligned text table, one row per direction plus the overall row."""
        headers = ["direction", "MRR"] + [f"Hits@{k}" for k in HITS_AT]
        rows = []
        for direction in [*sorted(self.ranks), "overall"]:
            m = self.metrics[direction]
            rows.append(
                [direction, f"{m['mrr']:.4f}"] + [f"{m[f'hits@{k}']:.4f}" for k in HITS_AT]
            )
        widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        for row in rows:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
        return "\n".join(lines)


def evaluate(
    scorer: CandidateScorer,
    graph: KnowledgeGraph,
    split: str = "test",
    ties: str = "pessimistic",
    filter_index: FilterIndex | None = None,
) -> RankReport:
    """Two queries per triple (head and tail prediction), filtered ranks."""
    triples = graph.split(split)
    if not triples:
        raise ConfigError(f"split {split!r} is empty")
    index = filter_index or FilterIndex.from_graph(graph)
    ranks: dict[str, list[float]] = {PREDICT_HEAD: [], PREDICT_TAIL: []}
    for triple in triples:
        for direction in (PREDICT_HEAD, PREDICT_TAIL):
            query = RankQuery(triple=triple, direction=direction, filter_index=index)
            ranks[direction].append(filtered_rank(scorer, query, ties=ties))
    return RankReport(split=split, ties=ties, ranks=ranks)


@dataclass
class ReportDelta:
    metrics: dict[str, dict[str, float]]  # direction -> metric -> (b - a)

    def to_dict(self) -> dict:
        return {"deltas": self.metrics}

    def table(self) -> str:
        headers = ["direction", "MRR"] + [f"Hits@{k}" for k in HITS_AT]
        rows = []
        for direction in sorted(self.metrics):
            m = self.metrics[direction]
            rows.append(
                [direction, f"{m['mrr']:+.4f}"]
                + [f"{m[f'hits@{k}']:+.4f}" for k in HITS_AT]
            )
        widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        for row in rows:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
        return "\n".join(lines)


class PerfectScorer:
    """Test hook: scores 1.0 for every known true completion, 0.0 otherwise.

    Under filtered evaluation every competing true candidate is removed, so
    the answer is the unique maximum and all metrics evaluate to 1.0.
    """

    def __init__(self, graph: KnowledgeGraph):
        self.n = graph.n_entities
        self.index = FilterIndex.from_graph(graph)

    def score_tails(self, h: int, r: int) -> np.ndarray:
        scores = np.zeros(self.n)
        for t in self.index.tails_of.get((h, r), ()):
            scores[t] = 1.0
        return scores

    def score_heads(self, r: int, t: int) -> np.ndarray:
        scores = np.zeros(self.n)
        for h in self.index.heads_of.get((r, t), ()):
            scores[h] = 1.0
        return scores


def compare_reports(a: RankReport, b: RankReport) -> ReportDelta:
    """Per-metric deltas (b minus a); reports must cover the same split and
    directions."""
    if a.split != b.split:
        raise ConfigError(f"cannot compare reports over splits {a.split!r} and {b.split!r}")
    if set(a.metrics) != set(b.metrics):
        raise ConfigError("reports cover different directions")
    deltas: dict[str, dict[str, float]] = {}
    for direction, metrics in a.metrics.items():
        deltas[direction] = {
            name: b.metrics[direction][name] - value for name, value in metrics.items()
        }
    return ReportDelta(metrics=deltas)
