"""One-time generator for the committed pipeline fixture.

Produces a 51-entity dataset (generic combined layout) whose routing at
budget 24 yields exactly one keep and 50 augmentation jobs, a stub response
map covering every job (47 effective responses, one refusal, one echo, one
empty — effective rate 47/50 = 0.94), and a flat JSONL copy of the raw
responses for direct cleaner tests.

Rerunning must reproduce the fixture byte-identically.
"""

import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from kgaug.gateway import prompt_digest  # noqa: E402
from kgaug.prompts import default_templates, render  # noqa: E402
from kgaug.routing import Action, decide  # noqa: E402
from kgaug.wordpiece import default_vocabulary, token_length  # noqa: E402

BUDGET = 24
OUT = ROOT / "tests" / "fixtures" / "pipeline50"

FILLER: list[str] = []  # filled from the vocabulary at build time

NAMES = [
    "keepstone hall",
    "amber mill", "basalt ridge", "cedar hollow", "derwent ford", "elm rise",
    "fallow cross", "garnet point", "hazel bend", "iron gate", "juniper field",
    "kestrel moor", "larch wood", "marble arch", "nettle marsh", "osprey cliff",
    "pewter lane", "quartz hill", "rowan brook", "saffron vale", "thistle down",
    "umber creek", "velvet shore", "walnut grove", "yarrow heath", "zephyr bay",
    "alder copse", "birch knoll", "clover lea", "dapple glen", "ember tor",
    "fern gully", "gorse bank", "heather fell", "ivy court", "jasper cove",
    "kiln yard", "linden walk", "myrtle strand", "nutmeg wharf", "osier eyot",
    "pumice scree", "reed fen", "sorrel croft", "tansy garth", "ulmus row",
    "vetch holt", "wicker ait", "xylem stand", "yew close", "zinnia plot",
]


def build_dataset(rng: np.random.Generator, vocab) -> list[dict]:
    # filler words come straight from the vocabulary (whole alphabetic
    # entries), so description token counts equal their word counts
    global FILLER
    FILLER = sorted(
        tok for tok in vocab.entries if tok.isascii() and tok.isalpha() and 4 <= len(tok) <= 9
    )[:200]
    assert len(FILLER) >= 100, len(FILLER)
    entities = []
    for i, name in enumerate(NAMES):
        ident = f"p{i:02d}"
        name_tokens = token_length(name, vocab)
        if i == 0:
            target = BUDGET  # exactly at budget -> keep
        elif i <= 30:
            target = BUDGET + 6 + int(rng.integers(0, 40))  # compress
        elif i <= 48:
            target = 3 + int(rng.integers(0, BUDGET - 4 - 2))  # expand
        else:
            target = name_tokens  # expand with an empty description
        desc_tokens = max(0, target - name_tokens)
        words = [FILLER[int(rng.integers(0, len(FILLER)))] for _ in range(desc_tokens)]
        description = " ".join(words)
        assert token_length(description, vocab) == desc_tokens, (ident, description)
        length = name_tokens + token_length(description, vocab)
        action = decide(length, BUDGET)
        if i == 0:
            assert action == Action.KEEP, (length, BUDGET)
        elif i <= 30:
            assert action == Action.COMPRESS, (ident, length)
        else:
            assert action == Action.EXPAND, (ident, length)
        entities.append(
            {"id": ident, "name": name, "description": description, "action": action}
        )
    return entities


def build_responses(entities: list[dict], rng: np.random.Generator) -> tuple[dict, list[dict]]:
    templates = default_templates()
    compress_t = templates.get("compress_generic")
    expand_t = templates.get("expand_wordnet")

    prefixes = [
        "",
        "Sure, here is a one-sentence summary: ",
        'Here is the summary: ',
        "Certainly! ",
        "",
        "",
    ]
    suffixes = ["", "", "", " I hope this helps!", ""]

    stub_map: dict[str, str] = {}
    raw_rows: list[dict] = []
    ineffective = {"p05": "refusal", "p33": "echo", "p17": "empty"}
    effective = 0
    for i, ent in enumerate(entities):
        if ent["action"] == Action.KEEP:
            continue
        template = compress_t if ent["action"] == Action.COMPRESS else expand_t
        prompt = render(template, ent["name"], ent["description"])
        kind = ineffective.get(ent["id"])
        if kind == "refusal":
            raw = "I'm sorry, I cannot help with that."
        elif kind == "echo":
            raw = ent["description"]
        elif kind == "empty":
            raw = ""
        elif ent["action"] == Action.COMPRESS:
            core = f"A {ent['name']} landmark known for its {FILLER[i % len(FILLER)]} and {FILLER[(i * 7) % len(FILLER)]}."
            raw = prefixes[i % len(prefixes)] + core + suffixes[i % len(suffixes)]
            effective += 1
        else:
            core = f"travellers speak of the {ent['name']} when the {FILLER[(i * 3) % len(FILLER)]} floods"
            if i % 4 == 0:
                raw = "Here's a short introduction: " + core
            else:
                raw = core
            effective += 1
        stub_map[prompt_digest(prompt)] = raw
        raw_rows.append(
            {
                "entity": ent["id"],
                "action": ent["action"].value,
                "template_id": template.id,
                "name": ent["name"],
                "description": ent["description"],
                "raw": raw,
            }
        )
    assert len(raw_rows) == 50, len(raw_rows)
    assert effective == 47, effective
    return stub_map, raw_rows


def main() -> None:
    vocab = default_vocabulary()
    rng = np.random.default_rng(42)
    entities = build_dataset(rng, vocab)

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "entity2text.txt", "w", encoding="utf-8", newline="\n") as fh:
        for ent in entities:
            if ent["description"]:
                fh.write(f"{ent['id']}\t{ent['name']}, {ent['description']}\n")
            else:
                fh.write(f"{ent['id']}\t{ent['name']}\n")
    with open(OUT / "relation2text.txt", "w", encoding="utf-8", newline="\n") as fh:
        for rid, text in [("r0", "linked to"), ("r1", "upstream of"), ("r2", "trades with")]:
            fh.write(f"{rid}\t{text}\n")

    ids = [e["id"] for e in entities]
    seen: set[tuple] = set()

    def draw(count: int) -> list[tuple]:
        rows = []
        while len(rows) < count:
            h = ids[int(rng.integers(0, len(ids)))]
            r = f"r{int(rng.integers(0, 3))}"
            t = ids[int(rng.integers(0, len(ids)))]
            if h != t and (h, r, t) not in seen:
                seen.add((h, r, t))
                rows.append((h, r, t))
        return rows

    for fname, count in (("train.txt", 120), ("valid.txt", 15), ("test.txt", 15)):
        with open(OUT / fname, "w", encoding="utf-8", newline="\n") as fh:
            for h, r, t in draw(count):
                fh.write(f"{h}\t{r}\t{t}\n")

    stub_map, raw_rows = build_responses(entities, rng)
    with open(OUT / "stub_responses.json", "w", encoding="utf-8") as fh:
        json.dump(stub_map, fh, indent=1, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    with open(ROOT / "tests" / "fixtures" / "responses_50.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for row in raw_rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"wrote fixture dataset + {len(stub_map)} stub responses under {OUT}")


if __name__ == "__main__":
    main()
