"""Synthetic knowledge graphs for demos, property tests, and trainer checks.

``lattice_graph`` builds a grid world whose relations are fixed translations
between cells.  Because the relational structure is exactly translational it
is learnable by every embedding family here, which makes it a fast,
self-contained benchmark: a correct trainer reaches near-perfect filtered
Hits@10 on the held-out split in seconds.

``random_graph`` draws arbitrary triples with no structure at all; it is the
workhorse for evaluator and assembly property tests.
"""

from __future__ import annotations

import numpy as np

from .corpus import EntityRecord, KnowledgeGraph, RelationRecord, Triple

_WORDS = (
    "river stone forest meadow tower bridge harbor valley garden market "
    "castle mill lantern orchard quarry cellar granary chapel stable forge"
).split()


def _description(rng: np.random.Generator, min_words: int, max_words: int) -> str:
    count = int(rng.integers(min_words, max_words + 1))
    return " ".join(rng.choice(_WORDS, size=count))


def lattice_graph(
    width: int = 8,
    height: int = 8,
    moves: tuple[tuple[int, int], ...] = ((1, 0), (0, 1), (1, 1)),
    seed: int = 0,
    valid_fraction: float = 0.1,
    test_fraction: float = 0.1,
    dataset_id: str = "lattice",
) -> KnowledgeGraph:
    """Grid cells as entities, fixed (dx, dy) moves as relations.

    Every valid (cell, move, cell+move) triple exists; triples are split
    randomly into train/valid/test.  Each split is non-empty.
    """
    rng = np.random.default_rng(seed)
    entities = []
    for x in range(width):
        for y in range(height):
            entities.append(
                EntityRecord(
                    id=f"cell_{x}_{y}",
                    name=f"cell {x} {y}",
                    description=_description(rng, 3, 10),
                )
            )
    relations = [
        RelationRecord(id=f"move_{dx}_{dy}", text=f"move {dx} {dy}") for dx, dy in moves
    ]

    def cell_index(x: int, y: int) -> int:
        return x * height + y

    triples = []
    for r, (dx, dy) in enumerate(moves):
        for x in range(width):
            for y in range(height):
                nx, ny = x + dx, y + dy
                if 0 <= nx < width and 0 <= ny < height:
                    triples.append(Triple(cell_index(x, y), r, cell_index(nx, ny)))

    order = rng.permutation(len(triples))
    n_valid = max(1, int(len(triples) * valid_fraction))
    n_test = max(1, int(len(triples) * test_fraction))
    valid_ids = set(order[:n_valid].tolist())
    test_ids = set(order[n_valid : n_valid + n_test].tolist())
    splits: dict[str, list[Triple]] = {"train": [], "valid": [], "test": []}
    for i, triple in enumerate(triples):
        if i in valid_ids:
            splits["valid"].append(triple)
        elif i in test_ids:
            splits["test"].append(triple)
        else:
            splits["train"].append(triple)
    return KnowledgeGraph(
        entities=entities, relations=relations, splits=splits, dataset_id=dataset_id
    )


def schema_graph(
    n_entities: int = 135,
    n_groups: int = 15,
    n_relations: int = 30,
    rules_per_relation: int = 1,
    symmetric: bool = False,
    seed: int = 0,
    valid_fraction: float = 0.1,
    test_fraction: float = 0.1,
    dataset_id: str = "schema",
) -> KnowledgeGraph:
    """Dense group-structured graph, the shape of a semantic network.

    Entities are partitioned into groups; each relation holds for every
    (head, tail) pair whose groups match one of its rules.  With
    ``symmetric=True`` each rule also applies in reverse, which suits
    symmetric scorers.  Density mirrors small dense benchmarks (~40 facts
    per entity), so a sound trainer reaches near-perfect filtered Hits@10.
    """
    rng = np.random.default_rng(seed)
    entities = [
        EntityRecord(
            id=f"n{i}",
            name=f"node {i}",
            description=_description(rng, 2, 8),
        )
        for i in range(n_entities)
    ]
    relations = [RelationRecord(id=f"rel{j}", text=f"relation {j}") for j in range(n_relations)]
    group_of = rng.integers(0, n_groups, size=n_entities)
    members: list[list[int]] = [[] for _ in range(n_groups)]
    for i, g in enumerate(group_of):
        members[int(g)].append(i)

    triples: list[Triple] = []
    seen: set[tuple[int, int, int]] = set()
    for r in range(n_relations):
        sources = rng.choice(n_groups, size=rules_per_relation, replace=False)
        for g_src in sources:
            g_dst = int(rng.integers(0, n_groups))
            pairs = [(int(g_src), g_dst)]
            if symmetric and g_dst != int(g_src):
                pairs.append((g_dst, int(g_src)))
            for gs, gd in pairs:
                for h in members[gs]:
                    for t in members[gd]:
                        if h != t and (h, r, t) not in seen:
                            seen.add((h, r, t))
                            triples.append(Triple(h, r, t))

    order = rng.permutation(len(triples))
    n_valid = max(1, int(len(triples) * valid_fraction))
    n_test = max(1, int(len(triples) * test_fraction))
    valid_ids = set(order[:n_valid].tolist())
    test_ids = set(order[n_valid : n_valid + n_test].tolist())
    splits: dict[str, list[Triple]] = {"train": [], "valid": [], "test": []}
    for i, triple in enumerate(triples):
        if i in valid_ids:
            splits["valid"].append(triple)
        elif i in test_ids:
            splits["test"].append(triple)
        else:
            splits["train"].append(triple)
    return KnowledgeGraph(
        entities=entities, relations=relations, splits=splits, dataset_id=dataset_id
    )


def random_graph(
    n_entities: int,
    n_relations: int,
    n_train: int,
    n_valid: int = 0,
    n_test: int = 0,
    seed: int = 0,
    min_desc_words: int = 0,
    max_desc_words: int = 12,
    dataset_id: str = "random",
) -> KnowledgeGraph:
    """Uniform random triples over synthetic entities (duplicates possible
    across splits; useful for stressing filtered evaluation)."""
    rng = np.random.default_rng(seed)
    entities = [
        EntityRecord(
            id=f"e{i}",
            name=f"entity {i}",
            description=_description(rng, min_desc_words, max_desc_words) if max_desc_words else "",
        )
        for i in range(n_entities)
    ]
    relations = [RelationRecord(id=f"r{j}", text=f"relation {j}") for j in range(n_relations)]

    capacity = n_entities * n_entities * n_relations
    if n_train + n_valid + n_test > capacity:
        raise ValueError(
            f"cannot draw {n_train + n_valid + n_test} distinct triples from a "
            f"{n_entities}x{n_relations} graph (capacity {capacity})"
        )

    def draw(count: int) -> list[Triple]:
        out = []
        seen = set()
        while len(out) < count:
            h = int(rng.integers(0, n_entities))
            r = int(rng.integers(0, n_relations))
            t = int(rng.integers(0, n_entities))
            if (h, r, t) in seen:
                continue
            seen.add((h, r, t))
            out.append(Triple(h, r, t))
        return out

    splits = {"train": draw(n_train), "valid": draw(n_valid), "test": draw(n_test)}
    return KnowledgeGraph(
        entities=entities, relations=relations, splits=splits, dataset_id=dataset_id
    )
