import numpy as np
import pytest

from kgaug.errors import ConfigError
from kgaug.models import EmbeddingModel, load_model, save_model


def make_model(family, n_ent=5, n_rel=3, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    width = 2 * dim if family == "rotate" else dim
    ent = rng.normal(size=(n_ent, width))
    rel = (
        rng.uniform(0, 2 * np.pi, size=(n_rel, dim))
        if family == "rotate"
        else rng.normal(size=(n_rel, dim))
    )
    return EmbeddingModel(family=family, dim=dim, ent=ent, rel=rel, norm_order=2)


# Straightforward reimplementations of the scoring formulas, kept deliberately
# separate from the vectorized production code.
def oracle_score(model, h, r, t):
    if model.family == "transe":
        u = model.ent[h] + model.rel[r] - model.ent[t]
        if model.norm_order == 1:
            return -sum(abs(x) for x in u)
        return -np.sqrt(sum(x * x for x in u))
    if model.family == "distmult":
        return sum(model.ent[h][i] * model.rel[r][i] * model.ent[t][i] for i in range(model.dim))
    d = model.dim
    total = 0.0
    for i in range(d):
        h_c = complex(model.ent[h][i], model.ent[h][d + i])
        t_c = complex(model.ent[t][i], model.ent[t][d + i])
        r_c = complex(np.cos(model.rel[r][i]), np.sin(model.rel[r][i]))
        total += abs(h_c * r_c - t_c)
    return -total


def test_transe_translation_identity():
    ent = np.zeros((3, 4))
    rel = np.array([[1.0, 2.0, 0.0, -1.0]])
    ent[1] = [0.5, 0.5, 0.5, 0.5]
    ent[2] = ent[1] + rel[0]
    model = EmbeddingModel(family="transe", dim=4, ent=ent, rel=rel, norm_order=2)
    assert model.score(1, 0, 2) == pytest.approx(0.0)
    scores = model.score_tails(1, 0)
    assert np.argmax(scores) == 2
    assert scores.max() == pytest.approx(0.0)


def test_rotate_identity_rotation():
    dim = 3
    ent = np.random.default_rng(1).normal(size=(4, 2 * dim))
    rel = np.zeros((1, dim))
    model = EmbeddingModel(family="rotate", dim=dim, ent=ent, rel=rel)
    assert model.score(2, 0, 2) == pytest.approx(0.0)
    assert np.argmax(model.score_tails(2, 0)) == 2


@pytest.mark.parametrize("family", ["transe", "distmult", "rotate"])
def test_scores_match_independent_reimplementation(family):
    model = make_model(family, seed=7)
    rng = np.random.default_rng(3)
    for _ in range(5):
        h, t = rng.integers(0, model.n_entities, size=2)
        r = rng.integers(0, model.n_relations)
        assert model.score(int(h), int(r), int(t)) == pytest.approx(
            oracle_score(model, int(h), int(r), int(t)), abs=1e-10
        )


@pytest.mark.parametrize("family", ["transe", "distmult", "rotate"])
def test_vectorized_candidate_scores_match_scalar(family):
    model = make_model(family, seed=11)
    for h in range(model.n_entities):
        for r in range(model.n_relations):
            tails = model.score_tails(h, r)
            heads = model.score_heads(r, h)
            for e in range(model.n_entities):
                assert tails[e] == pytest.approx(model.score(h, r, e), abs=1e-10)
                assert heads[e] == pytest.approx(model.score(e, r, h), abs=1e-10)


def test_distmult_is_symmetric_in_head_and_tail():
    model = make_model("distmult", seed=5)
    rng = np.random.default_rng(0)
    for _ in range(20):
        h, t = rng.integers(0, model.n_entities, size=2)
        r = rng.integers(0, model.n_relations)
        assert model.score(int(h), int(r), int(t)) == model.score(int(t), int(r), int(h))


def test_rotate_phase_composition():
    dim = 5
    rng = np.random.default_rng(9)
    theta1 = rng.uniform(0, 2 * np.pi, size=dim)
    theta2 = rng.uniform(0, 2 * np.pi, size=dim)
    ent = rng.normal(size=(2, 2 * dim))
    rel = np.vstack([theta1, theta2, theta1 + theta2])
    model = EmbeddingModel(family="rotate", dim=dim, ent=ent, rel=rel)

    # rotating by theta1 then theta2 equals rotating by their sum
    e = ent[0, :dim] + 1j * ent[0, dim:]
    rotated_twice = e * np.exp(1j * theta1) * np.exp(1j * theta2)
    summed = e * np.exp(1j * (theta1 + theta2))
    assert np.allclose(rotated_twice, summed, atol=1e-12)

    target = ent[1, :dim] + 1j * ent[1, dim:]
    expected = -np.sum(np.abs(rotated_twice - target))
    assert model.score(0, 2, 1) == pytest.approx(expected, abs=1e-10)


def test_out_of_range_ids_rejected():
    model = make_model("transe")
    with pytest.raises(ConfigError):
        model.score(99, 0, 0)
    with pytest.raises(ConfigError):
        model.score_tails(0, 99)


def test_invalid_family_rejected():
    with pytest.raises(ConfigError):
        make_model("conve")


def test_checkpoint_round_trip(tmp_path):
    model = make_model("rotate", seed=2)
    model.meta = {"trained_on": "fixture", "seed": 2}
    path = tmp_path / "model.kgem"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.family == "rotate"
    assert loaded.dim == model.dim
    assert loaded.meta["trained_on"] == "fixture"
    assert np.array_equal(loaded.ent, model.ent)
    assert np.array_equal(loaded.rel, model.rel)


def test_checkpoint_bytes_are_deterministic(tmp_path):
    model = make_model("transe", seed=4)
    a, b = tmp_path / "a.kgem", tmp_path / "b.kgem"
    save_model(model, a)
    save_model(model, b)
    assert a.read_bytes() == b.read_bytes()


def test_checkpoint_rejects_foreign_files(tmp_path):
    path = tmp_path / "junk"
    path.write_bytes(b"not a checkpoint")
    with pytest.raises(ConfigError):
        load_model(path)
