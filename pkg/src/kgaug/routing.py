"""Length-based routing of entities to compression, expansion, or pass-through.

An entity's total text length is the subword length of its name plus the
subword length of its description.  Entities over the truncation budget are
compressed, entities under it are expanded, and entities exactly at the
budget are kept untouched (neither rewrite can help there).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .corpus import EntityRecord, KnowledgeGraph
from .errors import ConfigError
from .wordpiece import SubwordVocabulary, token_length


class Action(str, enum.Enum):
    COMPRESS = "compress"
    EXPAND = "expand"
    KEEP = "keep"


@dataclass(frozen=True)
class RouteDecision:
    entity: str
    length: int
    budget: int
    action: Action

    def to_dict(self) -> dict:
        return {
            "entity": self.entity,
            "length": self.length,
            "budget": self.budget,
            "action": self.action.value,
        }


def entity_length(record: EntityRecord, vocab: SubwordVocabulary) -> int:
    """Total text length: name tokens plus description tokens."""
    return token_length(record.name, vocab) + token_length(record.description, vocab)


def decide(length: int, budget: int) -> Action:
    if length > budget:
        return Action.COMPRESS
    if length < budget:
        return Action.EXPAND
    return Action.KEEP


def route(graph: KnowledgeGraph, budget: int, vocab: SubwordVocabulary) -> list[RouteDecision]:
    """One decision per entity, in entity-table order."""
    if budget < 1:
        raise ConfigError(f"truncation budget must be >= 1, got {budget}")
    decisions = []
    for record in graph.entities:
        length = entity_length(record, vocab)
        decisions.append(
            RouteDecision(entity=record.id, length=length, budget=budget, action=decide(length, budget))
        )
    return decisions


def route_counts(decisions: list[RouteDecision]) -> dict[str, int]:
    counts = {action.value: 0 for action in Action}
    for decision in decisions:
        counts[decision.action.value] += 1
    return counts
