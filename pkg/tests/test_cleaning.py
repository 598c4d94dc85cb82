import json

import pytest

from kgaug.cleaning import (
    clean_compression,
    clean_expansion,
    clean_response,
    default_rules,
    effective_rate,
    reason_counts,
    strip_wrappers,
)
from kgaug.errors import ConfigError
from kgaug.routing import Action

from .conftest import FIXTURES


@pytest.fixture(scope="module")
def rules():
    return default_rules()


@pytest.fixture(scope="module")
def fixture_rows():
    rows = []
    with open(FIXTURES / "responses_50.jsonl", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def run_fixture(rows, rules):
    return [
        clean_response(
            row["raw"],
            Action(row["action"]),
            row["name"],
            row["description"],
            entity=row["entity"],
            rules=rules,
        )
        for row in rows
    ]


def test_conversational_prefix_is_stripped(rules):
    outcome = clean_compression(
        "Sure, here is a one-sentence summary: X is a city in Y.",
        "X",
        "a long description of X",
        rules=rules,
    )
    assert outcome.effective
    assert outcome.text == "X is a city in Y."


def test_refusal_is_ineffective(rules):
    outcome = clean_compression(
        "I'm sorry, I cannot help with that.", "X", "something", rules=rules
    )
    assert not outcome.effective
    assert outcome.reason == "refusal"


def test_empty_response_is_ineffective(rules):
    outcome = clean_compression("", "X", "something", rules=rules)
    assert not outcome.effective
    assert outcome.reason == "empty"


def test_whitespace_only_is_empty(rules):
    assert clean_compression("   \n ", "X", "d", rules=rules).reason == "empty"


def test_off_topic_marker(rules):
    outcome = clean_expansion(
        "I don't understand what you are asking for.", "X", "desc", rules=rules
    )
    assert outcome.reason == "off_topic_marker"


def test_echoed_description_is_ineffective(rules):
    desc = "move upwards; lift one's eyes"
    outcome = clean_expansion(desc, "raise", desc, rules=rules)
    assert not outcome.effective
    assert outcome.reason == "echo"


def test_expansion_appends_generation_to_original(rules):
    original = "adorn with tinsel"
    generation = "adorn with tinsel; snow flakes tinseled the trees"
    outcome = clean_expansion(generation, "tinsel-VB-2", original, rules=rules)
    assert outcome.effective
    assert outcome.text == "tinsel-VB-2, adorn with tinsel; snow flakes tinseled the trees"
    assert original in outcome.text  # definition kept
    assert "snow flakes" in outcome.text  # usage example added


def test_expansion_strips_leading_introduction(rules):
    outcome = clean_expansion(
        "Here's a short introduction: used when stitching fabric layers.",
        "quilt",
        "stitch or sew together",
        rules=rules,
    )
    assert outcome.effective
    assert outcome.text == "quilt, stitch or sew together; used when stitching fabric layers."


def test_expansion_with_empty_original(rules):
    outcome = clean_expansion("a bare name entity", "nameonly", "", rules=rules)
    assert outcome.effective
    assert outcome.text == "nameonly; a bare name entity"


def test_quote_unwrapping_and_trailing_strip(rules):
    outcome = clean_compression(
        '"A walled town on the coast." I hope this helps!', "X", "long text", rules=rules
    )
    assert outcome.effective
    assert outcome.text == "A walled town on the coast."


def test_strip_wrappers_reaches_fixpoint(rules):
    text = 'Certainly! "Here is the summary: the core fact."'
    assert strip_wrappers(text, rules) == "the core fact."


def test_compression_cleaning_is_idempotent(rules, fixture_rows):
    for row in fixture_rows:
        if Action(row["action"]) != Action.COMPRESS:
            continue
        first = clean_compression(row["raw"], row["name"], row["description"], rules=rules)
        if first.effective:
            second = clean_compression(first.text, row["name"], row["description"], rules=rules)
            assert second.effective and second.text == first.text


def test_effective_text_never_contains_refusal_markers(rules, fixture_rows):
    for outcome in run_fixture(fixture_rows, rules):
        if outcome.effective:
            lowered = outcome.text.casefold()
            for marker in rules.refusal_markers:
                assert marker not in lowered


def test_fixture_reason_counts(rules, fixture_rows):
    outcomes = run_fixture(fixture_rows, rules)
    assert reason_counts(outcomes) == {"effective": 47, "refusal": 1, "echo": 1, "empty": 1}


def test_effective_rate_values(rules, fixture_rows):
    outcomes = run_fixture(fixture_rows, rules)
    assert effective_rate(outcomes) == pytest.approx(0.94)
    effective_only = [o for o in outcomes if o.effective]
    assert effective_rate(effective_only) == 1.0


def test_effective_rate_rejects_empty_input():
    with pytest.raises(ConfigError):
        effective_rate([])


def test_clean_response_rejects_keep():
    with pytest.raises(ConfigError):
        clean_response("text", Action.KEEP, "n", "d")
