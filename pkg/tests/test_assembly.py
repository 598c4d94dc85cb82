import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgaug.assembly import (
    CLS,
    SEP,
    assemble_input,
    assemble_triple,
    export,
    relation_surface,
    truncate,
)
from kgaug.corpus import EntityRecord, load_dataset, with_augmentations
from kgaug.errors import ConfigError, ExportError
from kgaug.synthetic import random_graph
from kgaug.wordpiece import token_length, tokenize


def test_truncate_under_budget_is_identity():
    tokens = [f"t{i}" for i in range(10)]
    assert truncate(tokens, 30) == tokens


def test_truncate_cuts_long_sequences():
    tokens = [f"t{i}" for i in range(139)]
    cut = truncate(tokens, 30)
    assert len(cut) == 30
    assert cut == tokens[:30]


def test_truncate_zero_budget():
    assert truncate(["a", "b"], 0) == []


def test_truncate_rejects_negative_budget():
    with pytest.raises(ConfigError):
        truncate(["a"], -1)


tokens_strategy = st.lists(st.text(min_size=1, max_size=4), max_size=40)


@given(tokens=tokens_strategy, budget=st.integers(min_value=0, max_value=50))
@settings(max_examples=200, deadline=None)
def test_truncate_prefix_and_idempotence(tokens, budget):
    cut = truncate(tokens, budget)
    assert len(cut) == min(len(tokens), budget)
    assert cut == tokens[: len(cut)]
    assert truncate(cut, budget) == cut


def test_relation_surface_normalizes_path_labels():
    assert relation_surface("/film/film/genre") == "film film genre"
    assert relation_surface("has_part") == "has part"
    assert relation_surface("member.of_club") == "member of club"


def test_assemble_input_markers(vocab):
    head = EntityRecord(id="h", name="river", description="water course")
    tail = EntityRecord(id="t", name="delta", description="flat land")
    built = assemble_input(head, "flows_into", tail, budget=8, vocab=vocab)
    built.validate()
    assert built.tokens[0] == CLS
    assert built.tokens.count(SEP) == 3
    assert built.tokens[-1] == SEP


def test_identical_head_and_tail_give_identical_segments(vocab):
    record = EntityRecord(id="x", name="river", description="water course")
    built = assemble_input(record, "similar", record, budget=8, vocab=vocab)
    head_seg, _, tail_seg = built.segments()
    assert head_seg == tail_seg


def test_assembled_length_arithmetic(vocab):
    head = EntityRecord(id="h", name="river", description="east west north south")
    tail = EntityRecord(id="t", name="lake", description="north east")
    relation = "linked_to"
    budget = 4
    head_tokens = tokenize("river: east west north south", vocab)
    tail_tokens = tokenize("lake: north east", vocab)
    rel_tokens = tokenize(relation_surface(relation), vocab)
    built = assemble_input(head, relation, tail, budget=budget, vocab=vocab)
    expected = 4 + min(len(head_tokens), budget) + min(len(tail_tokens), budget) + min(
        len(rel_tokens), budget
    )
    assert len(built.tokens) == expected


def test_budget_sweep_lengths_non_decreasing(vocab, tinykg):
    triple = tinykg.split("test")[0]
    lengths = [
        len(assemble_triple(tinykg, triple, budget, vocab).tokens) for budget in range(20, 51)
    ]
    assert all(b >= a for a, b in zip(lengths, lengths[1:]))


def test_segment_uses_final_description(vocab, tinykg):
    augmented = with_augmentations(tinykg, {"q1": "a padded bed covering"})
    record = augmented.entities[augmented.entity_index["q1"]]
    built = assemble_input(record, "similar", record, budget=30, vocab=vocab)
    head_seg, _, _ = built.segments()
    assert head_seg == truncate(tokenize("quilt: a padded bed covering", vocab), 30)


def test_export_untouched_graph_reproduces_entity_file(tinykg, tinykg_dir, tmp_path):
    out = tmp_path / "export"
    export(tinykg, "tsv", out)
    assert (out / "entity2text.txt").read_bytes() == (tinykg_dir / "entity2text.txt").read_bytes()
    for name in ("train.txt", "valid.txt", "test.txt"):
        assert (out / name).read_bytes() == (tinykg_dir / name).read_bytes()


def test_export_round_trips_through_parser(tinykg, tmp_path):
    out = tmp_path / "roundtrip"
    export(tinykg, "tsv", out)
    reloaded = load_dataset(out, "wn18rr")
    assert reloaded.splits == tinykg.splits
    assert [(e.id, e.name, e.description) for e in reloaded.entities] == [
        (e.id, e.name, e.description) for e in tinykg.entities
    ]


def test_export_is_deterministic(tinykg, tmp_path):
    import hashlib

    digests = []
    for run in ("a", "b"):
        out = tmp_path / run
        files = export(tinykg, "tsv", out)
        digests.append({f.name: hashlib.sha256(f.read_bytes()).hexdigest() for f in files})
    assert digests[0] == digests[1]


def test_export_jsonl_carries_final_descriptions(tinykg, tmp_path):
    import json

    augmented = with_augmentations(tinykg, {"q1": "a padded bed covering"})
    out = tmp_path / "jsonl"
    export(augmented, "jsonl", out)
    rows = [
        json.loads(line)
        for line in (out / "entities.jsonl").read_text(encoding="utf-8").splitlines()
    ]
    assert rows[0].keys() == {"id", "name", "description"}
    by_id = {row["id"]: row for row in rows}
    assert by_id["q1"]["description"] == "a padded bed covering"
    assert by_id["r1"]["description"] == "move upwards; lift one's eyes"


def test_export_rejects_unknown_format(tinykg, tmp_path):
    with pytest.raises(ConfigError):
        export(tinykg, "parquet", tmp_path / "x")


def test_export_rejects_nameless_descriptionless_entity(tinykg, tmp_path):
    broken = with_augmentations(tinykg, {})
    broken.entities[0].name = ""
    broken.entities[0].description = ""
    with pytest.raises(ExportError, match="neither name nor description"):
        export(broken, "tsv", tmp_path / "broken")


def test_marker_invariant_over_random_graphs(vocab):
    checked = 0
    for seed in range(5):
        graph = random_graph(12, 3, 40, seed=seed)
        for triple in graph.split("train"):
            built = assemble_triple(graph, triple, budget=7, vocab=vocab)
            built.validate()
            checked += 1
    assert checked == 200
