"""Response cleaning: strip conversational wrappers, reject ineffective
generations, and assemble the final augmented description.

The rule lists (wrapper patterns, refusal and off-topic markers) live in a
versioned JSON file and are a documented extension point; the shipped file
covers the usual chat-model scaffolding.  Cleaning never drops an entity:
an ineffective response falls back to the original description downstream.

Compression keeps the cleaned generation as the new description.  Expansion
concatenates entity name, original description, and the cleaned generation
(``name, original; generated``), deduplicating a verbatim echo of the
original description inside the generation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .routing import Action

REASON_REFUSAL = "refusal"
REASON_ECHO = "echo"
REASON_EMPTY = "empty"
REASON_OFF_TOPIC = "off_topic_marker"

_QUOTE_PAIRS = {'"': '"', "'": "'", "“": "”", "‘": "’", "«": "»"}
_MAX_STRIP_ROUNDS = 10


@dataclass
class RuleSet:
    strip_prefixes: list[re.Pattern]
    strip_suffixes: list[re.Pattern]
    unwrap_quotes: bool
    refusal_markers: list[str]
    off_topic_markers: list[str]

    @classmethod
    def load(cls, path: str | Path) -> "RuleSet":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("version") != 1:
            raise ConfigError(f"unsupported cleaning rule file version in {path}")
        return cls(
            strip_prefixes=[re.compile(p, re.IGNORECASE) for p in payload["strip_prefixes"]],
            strip_suffixes=[re.compile(p, re.IGNORECASE) for p in payload["strip_suffixes"]],
            unwrap_quotes=bool(payload.get("unwrap_quotes", True)),
            refusal_markers=[m.casefold() for m in payload["refusal_markers"]],
            off_topic_markers=[m.casefold() for m in payload["off_topic_markers"]],
        )


def default_rules() -> RuleSet:
    return RuleSet.load(Path(__file__).parent / "resources" / "clean_rules.json")


@dataclass(frozen=True)
class CleanOutcome:
    entity: str
    source_action: Action
    effective: bool
    text: str | None = None  # set iff effective
    reason: str | None = None  # set iff ineffective

    def to_dict(self) -> dict:
        return {
            "entity": self.entity,
            "source_action": self.source_action.value,
            "effective": self.effective,
            "text": self.text,
            "reason": self.reason,
        }


def _normalize(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip(" \t.,;:!?\"'").casefold()


def strip_wrappers(text: str, rules: RuleSet) -> str:
    """Remove conversational scaffolding until a fixpoint is reached."""
    for _ in range(_MAX_STRIP_ROUNDS):
        before = text
        text = text.strip()
        if (
            rules.unwrap_quotes
            and len(text) >= 2
            and text[0] in _QUOTE_PAIRS
            and text[-1] == _QUOTE_PAIRS[text[0]]
        ):
            text = text[1:-1].strip()
        for pattern in rules.strip_prefixes:
            text = pattern.sub("", text, count=1)
        for pattern in rules.strip_suffixes:
            text = pattern.sub("", text, count=1)
        if text == before:
            break
    return text.strip()


def clean_generation(raw: str, rules: RuleSet) -> tuple[str | None, str | None]:
    """Return (text, None) for a usable generation, (None, reason) otherwise."""
    text = strip_wrappers(raw, rules)
    if not text:
        return None, REASON_EMPTY
    lowered = text.casefold()
    for marker in rules.refusal_markers:
        if marker in lowered:
            return None, REASON_REFUSAL
    for marker in rules.off_topic_markers:
        if marker in lowered:
            return None, REASON_OFF_TOPIC
    return text, None


def clean_compression(
    raw: str, name: str, original_desc: str, entity: str = "", rules: RuleSet | None = None
) -> CleanOutcome:
    """Judge a compression response; the cleaned generation becomes the summary."""
    rules = rules or default_rules()
    text, reason = clean_generation(raw, rules)
    if reason is not None:
        return CleanOutcome(entity, Action.COMPRESS, effective=False, reason=reason)
    if _normalize(text) == _normalize(original_desc):
        return CleanOutcome(entity, Action.COMPRESS, effective=False, reason=REASON_ECHO)
    return CleanOutcome(entity, Action.COMPRESS, effective=True, text=text)


def _dedup_echo(generation: str, original_desc: str) -> str:
    """Remove verbatim occurrences of the original description."""
    if not original_desc:
        return generation
    pattern = re.compile(re.escape(original_desc), re.IGNORECASE)
    deduped = pattern.sub(" ", generation)
    deduped = re.sub(r"\s+", " ", deduped)
    return deduped.strip(" \t,;:")


def clean_expansion(
    raw: str, name: str, original_desc: str, entity: str = "", rules: RuleSet | None = None
) -> CleanOutcome:
    """Judge an expansion response and assemble the enriched description.

    The effective text keeps the original description as a prefix so the
    enrichment is purely additive: ``name, original; generation``.
    """
    rules = rules or default_rules()
    text, reason = clean_generation(raw, rules)
    if reason is not None:
        return CleanOutcome(entity, Action.EXPAND, effective=False, reason=reason)
    if _normalize(text) == _normalize(original_desc):
        return CleanOutcome(entity, Action.EXPAND, effective=False, reason=REASON_ECHO)
    generation = _dedup_echo(text, original_desc)
    if not generation:
        return CleanOutcome(entity, Action.EXPAND, effective=False, reason=REASON_ECHO)
    if original_desc:
        assembled = f"{name}, {original_desc}; {generation}"
    else:
        assembled = f"{name}; {generation}"
    return CleanOutcome(entity, Action.EXPAND, effective=True, text=assembled)


def clean_response(
    raw: str,
    action: Action,
    name: str,
    original_desc: str,
    entity: str = "",
    rules: RuleSet | None = None,
) -> CleanOutcome:
    if action == Action.COMPRESS:
        return clean_compression(raw, name, original_desc, entity=entity, rules=rules)
    if action == Action.EXPAND:
        return clean_expansion(raw, name, original_desc, entity=entity, rules=rules)
    raise ConfigError(f"no cleaning defined for action {action!r}")


def effective_rate(outcomes: list[CleanOutcome]) -> float:
    """Proportion of effective responses."""
    if not outcomes:
        raise ConfigError("effective rate is undefined for an empty outcome list")
    return sum(1 for o in outcomes if o.effective) / len(outcomes)


def reason_counts(outcomes: list[CleanOutcome]) -> dict[str, int]:
    counts: dict[str, int] = {"effective": 0}
    for outcome in outcomes:
        if outcome.effective:
            counts["effective"] += 1
        else:
            counts[outcome.reason] = counts.get(outcome.reason, 0) + 1
    return counts
