"""Embedding training: SGD with uniform negative sampling.

Losses follow the original recipes for each family:

* transe   — margin ranking loss over (positive, corrupted) pairs, entity
  rows renormalized to unit L2 after each update
* distmult — logistic loss on positives and corruptions with L2 regularization
  of the rows each example touches
* rotate   — self-adversarial negative sampling: negative terms weighted by a
  softmax over their scores, weights treated as constants

Corruptions replace the head or the tail with equal probability, sampled
uniformly over all entities (no filtering during training; filtering belongs
to evaluation).  Training is single-threaded over mini-batches so identical
(graph, config, seed) yields bitwise-identical parameters.

``gradient_check`` compares these analytic gradients against central finite
differences on a tiny random instance; instances are resampled away from the
hinge and L1 kink points where the subgradient is ambiguous.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .corpus import KnowledgeGraph
from .errors import ConfigError, TrainingDiverged
from .models import FAMILIES, EmbeddingModel

log = logging.getLogger(__name__)

SparseGrads = list[tuple[str, np.ndarray, np.ndarray]]  # (param, indices, rows)


@dataclass(frozen=True)
class TrainConfig:
    dimension: int = 128
    epochs: int = 200
    batch_size: int = 256
    learning_rate: float = 0.05
    negatives: int = 8
    margin: float = 4.0  # transe / rotate
    adv_temperature: float = 1.0  # rotate
    reg_weight: float = 1e-4  # distmult
    norm_order: int = 1  # transe
    lr_decay: float = 1.0  # multiplicative, per epoch
    seed: int = 0

    def __post_init__(self) -> None:
        positives = {
            "dimension": self.dimension,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "negatives": self.negatives,
            "margin": self.margin,
            "adv_temperature": self.adv_temperature,
            "lr_decay": self.lr_decay,
        }
        for name, value in positives.items():
            if value <= 0:
                raise ConfigError(f"{name} must be strictly positive, got {value}")
        if self.reg_weight < 0:
            raise ConfigError("reg_weight must be >= 0")
        if self.norm_order not in (1, 2):
            raise ConfigError("norm_order must be 1 or 2")


@dataclass(frozen=True)
class Batch:
    """Positive triples plus their sampled corruptions."""

    h: np.ndarray  # (B,)
    r: np.ndarray  # (B,)
    t: np.ndarray  # (B,)
    neg: np.ndarray  # (B, K) corrupting entity ids
    corrupt_head: np.ndarray  # (B, K) bool; True -> head replaced


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _distance(u: np.ndarray, order: int) -> np.ndarray:
    if order == 1:
        return np.abs(u).sum(axis=-1)
    return np.sqrt(np.square(u).sum(axis=-1))


def _direction(u: np.ndarray, order: int) -> np.ndarray:
    """d(dist)/du, guarded at the origin."""
    if order == 1:
        return np.sign(u)
    norm = np.sqrt(np.square(u).sum(axis=-1, keepdims=True))
    return u / np.maximum(norm, 1e-12)


def transe_loss_grads(
    ent: np.ndarray, rel: np.ndarray, batch: Batch, margin: float, order: int
) -> tuple[float, SparseGrads]:
    B, K = batch.neg.shape
    u_pos = ent[batch.h] + rel[batch.r] - ent[batch.t]  # (B, d)
    base = (rel[batch.r] - ent[batch.t])[:, None, :]
    alt = (ent[batch.h] + rel[batch.r])[:, None, :]
    u_neg = np.where(
        batch.corrupt_head[:, :, None],
        ent[batch.neg] + base,
        alt - ent[batch.neg],
    )  # (B, K, d)
    d_pos = _distance(u_pos, order)
    d_neg = _distance(u_neg, order)
    act = margin + d_pos[:, None] - d_neg
    loss = float(np.maximum(act, 0.0).sum() / B)

    coeff = (act > 0).astype(np.float64) / B  # (B, K)
    dir_pos = _direction(u_pos, order)
    dir_neg = _direction(u_neg, order)
    g_pos = coeff.sum(axis=1)[:, None] * dir_pos  # (B, d) gradient wrt u_pos
    g_neg = -coeff[:, :, None] * dir_neg  # (B, K, d) gradient wrt u_neg

    # u_pos = h + r - t
    grads: SparseGrads = [
        ("ent", batch.h, g_pos),
        ("ent", batch.t, -g_pos),
        ("rel", batch.r, g_pos),
    ]
    # corrupted head: u = e' + r - t ; corrupted tail: u = h + r - e'
    ch = batch.corrupt_head[:, :, None]
    r_rep = np.repeat(batch.r[:, None], K, axis=1)
    grads.append(("rel", r_rep.ravel(), g_neg.reshape(B * K, -1)))
    grads.append(("ent", batch.neg.ravel(), np.where(ch, g_neg, -g_neg).reshape(B * K, -1)))
    h_rep = np.repeat(batch.h[:, None], K, axis=1)
    t_rep = np.repeat(batch.t[:, None], K, axis=1)
    fixed_idx = np.where(batch.corrupt_head, t_rep, h_rep)
    fixed_g = np.where(ch, -g_neg, g_neg)
    grads.append(("ent", fixed_idx.ravel(), fixed_g.reshape(B * K, -1)))
    return loss, grads


def distmult_loss_grads(
    ent: np.ndarray, rel: np.ndarray, batch: Batch, reg_weight: float
) -> tuple[float, SparseGrads]:
    B, K = batch.neg.shape
    M = B * (K + 1)
    h_e, r_e, t_e = ent[batch.h], rel[batch.r], ent[batch.t]
    s_pos = np.sum(h_e * r_e * t_e, axis=1)  # (B,)
    neg_h = np.where(batch.corrupt_head[:, :, None], ent[batch.neg], h_e[:, None, :])
    neg_t = np.where(batch.corrupt_head[:, :, None], t_e[:, None, :], ent[batch.neg])
    s_neg = np.sum(neg_h * r_e[:, None, :] * neg_t, axis=2)  # (B, K)

    loss = float((_softplus(-s_pos).sum() + _softplus(s_neg).sum()) / M)
    c_pos = -_sigmoid(-s_pos) / M  # (B,)
    c_neg = _sigmoid(s_neg) / M  # (B, K)

    grads: SparseGrads = [
        ("ent", batch.h, c_pos[:, None] * (r_e * t_e)),
        ("ent", batch.t, c_pos[:, None] * (r_e * h_e)),
        ("rel", batch.r, c_pos[:, None] * (h_e * t_e)),
    ]
    r_rep = np.repeat(batch.r[:, None], K, axis=1)
    grads.append(("ent", _neg_h_idx(batch).ravel(), (c_neg[:, :, None] * r_e[:, None, :] * neg_t).reshape(B * K, -1)))
    grads.append(("ent", _neg_t_idx(batch).ravel(), (c_neg[:, :, None] * r_e[:, None, :] * neg_h).reshape(B * K, -1)))
    grads.append(("rel", r_rep.ravel(), (c_neg[:, :, None] * neg_h * neg_t).reshape(B * K, -1)))

    if reg_weight > 0:
        scale = 2.0 * reg_weight / M
        reg_rows = np.concatenate(
            [batch.h, batch.t, _neg_h_idx(batch).ravel(), _neg_t_idx(batch).ravel()]
        )
        loss += reg_weight / M * float(
            np.sum(h_e**2) + np.sum(t_e**2) + np.sum(neg_h**2) + np.sum(neg_t**2)
        )
        grads.append(("ent", reg_rows, scale * ent[reg_rows]))
        rel_rows = np.concatenate([batch.r, r_rep.ravel()])
        loss += reg_weight / M * float(np.sum(r_e**2) + np.sum(rel[r_rep.ravel()] ** 2))
        grads.append(("rel", rel_rows, scale * rel[rel_rows]))
    return float(loss), grads


def _neg_h_idx(batch: Batch) -> np.ndarray:
    return np.where(batch.corrupt_head, batch.neg, batch.h[:, None])


def _neg_t_idx(batch: Batch) -> np.ndarray:
    return np.where(batch.corrupt_head, batch.t[:, None], batch.neg)


def _rotate_parts(ent_rows: np.ndarray, phases: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = phases.shape[-1]
    re, im = ent_rows[..., :d], ent_rows[..., d:]
    cos, sin = np.cos(phases), np.sin(phases)
    return re * cos - im * sin, re * sin + im * cos


def rotate_loss_grads(
    ent: np.ndarray,
    rel: np.ndarray,
    batch: Batch,
    margin: float,
    adv_temperature: float,
    frozen_weights: np.ndarray | None = None,
) -> tuple[float, SparseGrads]:
    """Self-adversarial loss; the softmax weights over negatives are treated
    as constants (pass ``frozen_weights`` to pin them, e.g. for gradient
    checking)."""
    B, K = batch.neg.shape
    d = rel.shape[1]
    phases = rel[batch.r]  # (B, d)

    hr_re, hr_im = _rotate_parts(ent[batch.h], phases)
    u_pos_re = hr_re - ent[batch.t, :d]
    u_pos_im = hr_im - ent[batch.t, d:]
    m_pos = np.hypot(u_pos_re, u_pos_im)  # (B, d)
    d_pos = m_pos.sum(axis=1)

    ch = batch.corrupt_head[:, :, None]
    neg_rows = ent[batch.neg]  # (B, K, 2d)
    nr_re, nr_im = _rotate_parts(neg_rows, phases[:, None, :])
    u_neg_re = np.where(ch, nr_re - ent[batch.t, None, :d], hr_re[:, None, :] - neg_rows[..., :d])
    u_neg_im = np.where(ch, nr_im - ent[batch.t, None, d:], hr_im[:, None, :] - neg_rows[..., d:])
    m_neg = np.hypot(u_neg_re, u_neg_im)  # (B, K, d)
    d_neg = m_neg.sum(axis=2)  # (B, K)

    if frozen_weights is None:
        logits = -adv_temperature * d_neg
        logits = logits - logits.max(axis=1, keepdims=True)
        w = np.exp(logits)
        w = w / w.sum(axis=1, keepdims=True)
    else:
        w = frozen_weights

    loss = float((_softplus(d_pos - margin) + (w * _softplus(margin - d_neg)).sum(axis=1)).sum() / B)

    c_pos = _sigmoid(d_pos - margin) / B  # (B,)
    c_neg = -w * _sigmoid(margin - d_neg) / B  # (B, K)

    safe_pos = np.maximum(m_pos, 1e-12)
    g_pos_re = c_pos[:, None] * u_pos_re / safe_pos
    g_pos_im = c_pos[:, None] * u_pos_im / safe_pos
    safe_neg = np.maximum(m_neg, 1e-12)
    g_neg_re = c_neg[:, :, None] * u_neg_re / safe_neg
    g_neg_im = c_neg[:, :, None] * u_neg_im / safe_neg

    def to_entity(g_re, g_im, phase):
        # u = (entity . r) - other: rotate the gradient back by -phase
        cos, sin = np.cos(phase), np.sin(phase)
        return np.concatenate(
            [g_re * cos + g_im * sin, -g_re * sin + g_im * cos], axis=-1
        )

    def to_phase(g_re, g_im, rot_re, rot_im):
        # d(rot)/d(theta) = i * rot
        return g_re * (-rot_im) + g_im * rot_re

    grads: SparseGrads = [
        ("ent", batch.h, to_entity(g_pos_re, g_pos_im, phases)),
        ("ent", batch.t, -np.concatenate([g_pos_re, g_pos_im], axis=-1)),
        ("rel", batch.r, to_phase(g_pos_re, g_pos_im, hr_re, hr_im)),
    ]

    rotated_part_re = np.where(ch, nr_re, hr_re[:, None, :])
    rotated_part_im = np.where(ch, nr_im, hr_im[:, None, :])
    rotated_idx = np.where(batch.corrupt_head, batch.neg, batch.h[:, None])
    plain_idx = np.where(batch.corrupt_head, batch.t[:, None], batch.neg)
    phases_rep = np.broadcast_to(phases[:, None, :], (B, K, d))

    grads.append(
        (
            "ent",
            rotated_idx.ravel(),
            to_entity(g_neg_re, g_neg_im, phases_rep).reshape(B * K, -1),
        )
    )
    grads.append(
        (
            "ent",
            plain_idx.ravel(),
            -np.concatenate([g_neg_re, g_neg_im], axis=-1).reshape(B * K, -1),
        )
    )
    r_rep = np.repeat(batch.r[:, None], K, axis=1)
    grads.append(
        (
            "rel",
            r_rep.ravel(),
            to_phase(g_neg_re, g_neg_im, rotated_part_re, rotated_part_im).reshape(B * K, -1),
        )
    )
    return loss, grads


def _init_model(family: str, n_ent: int, n_rel: int, config: TrainConfig, rng: np.random.Generator) -> EmbeddingModel:
    d = config.dimension
    bound = 6.0 / np.sqrt(d)
    if family == "rotate":
        ent = rng.uniform(-bound, bound, size=(n_ent, 2 * d))
        rel = rng.uniform(0.0, 2.0 * np.pi, size=(n_rel, d))
    else:
        ent = rng.uniform(-bound, bound, size=(n_ent, d))
        rel = rng.uniform(-bound, bound, size=(n_rel, d))
        if family == "transe":
            rel = rel / np.maximum(np.linalg.norm(rel, axis=1, keepdims=True), 1e-12)
    return EmbeddingModel(
        family=family, dim=d, ent=ent, rel=rel, norm_order=config.norm_order
    )


def _loss_and_grads(model: EmbeddingModel, batch: Batch, config: TrainConfig) -> tuple[float, SparseGrads]:
    if model.family == "transe":
        return transe_loss_grads(model.ent, model.rel, batch, config.margin, config.norm_order)
    if model.family == "distmult":
        return distmult_loss_grads(model.ent, model.rel, batch, config.reg_weight)
    return rotate_loss_grads(model.ent, model.rel, batch, config.margin, config.adv_temperature)


def _scatter_add(target: np.ndarray, idx: np.ndarray, rows: np.ndarray) -> None:
    """Deterministic scatter-add, much faster than np.add.at for many rows."""
    order = np.argsort(idx, kind="stable")
    sorted_idx = idx[order]
    sorted_rows = rows[order]
    unique, starts = np.unique(sorted_idx, return_index=True)
    sums = np.add.reduceat(sorted_rows, starts, axis=0)
    target[unique] += sums


def _apply(model: EmbeddingModel, grads: SparseGrads, lr: float) -> None:
    for param, array in (("ent", model.ent), ("rel", model.rel)):
        chunks = [(idx, rows) for name, idx, rows in grads if name == param]
        if not chunks:
            continue
        idx = np.concatenate([c[0] for c in chunks])
        rows = np.concatenate([c[1] for c in chunks])
        _scatter_add(array, idx, -lr * rows)


def _sample_batch(
    triples: np.ndarray, picks: np.ndarray, n_entities: int, negatives: int, rng: np.random.Generator
) -> Batch:
    pos = triples[picks]
    B = pos.shape[0]
    neg = rng.integers(0, n_entities, size=(B, negatives))
    corrupt_head = rng.integers(0, 2, size=(B, negatives)).astype(bool)
    return Batch(h=pos[:, 0], r=pos[:, 1], t=pos[:, 2], neg=neg, corrupt_head=corrupt_head)


def train(
    graph: KnowledgeGraph,
    family: str,
    config: TrainConfig,
    split: str = "train",
    progress: Callable[[int, float], None] | None = None,
) -> EmbeddingModel:
    """Train an embedding model; deterministic given (graph, config, seed)."""
    if family not in FAMILIES:
        raise ConfigError(f"unknown model family {family!r}; have {FAMILIES}")
    triples = np.array([[tr.head, tr.relation, tr.tail] for tr in graph.split(split)], dtype=np.int64)
    if triples.size == 0:
        raise ConfigError(f"split {split!r} is empty")
    rng = np.random.default_rng(config.seed)
    model = _init_model(family, graph.n_entities, graph.n_relations, config, rng)

    history: list[float] = []
    n = triples.shape[0]
    for epoch in range(config.epochs):
        lr = config.learning_rate * (config.lr_decay**epoch)
        perm = rng.permutation(n)
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, n, config.batch_size):
            picks = perm[start : start + config.batch_size]
            batch = _sample_batch(triples, picks, graph.n_entities, config.negatives, rng)
            loss, grads = _loss_and_grads(model, batch, config)
            if not np.isfinite(loss):
                raise TrainingDiverged(
                    f"non-finite loss at epoch {epoch}, batch {n_batches} (family={family})"
                )
            _apply(model, grads, lr)
            if family == "transe":
                touched = np.unique(np.concatenate([batch.h, batch.t, batch.neg.ravel()]))
                norms = np.linalg.norm(model.ent[touched], axis=1, keepdims=True)
                model.ent[touched] = model.ent[touched] / np.maximum(norms, 1e-12)
            epoch_loss += loss
            n_batches += 1
        mean_loss = epoch_loss / max(1, n_batches)
        history.append(mean_loss)
        if progress is not None:
            progress(epoch, mean_loss)
        if (epoch + 1) % max(1, config.epochs // 10) == 0:
            log.debug("epoch %d/%d loss %.6f", epoch + 1, config.epochs, mean_loss)
    model.assert_finite()
    model.meta = {
        "trained_on": graph.dataset_id,
        "split": split,
        "seed": config.seed,
        "epochs": config.epochs,
        "dimension": config.dimension,
        "batch_size": config.batch_size,
        "learning_rate": config.learning_rate,
        "negatives": config.negatives,
        "margin": config.margin,
        "adv_temperature": config.adv_temperature,
        "reg_weight": config.reg_weight,
        "norm_order": config.norm_order,
        "lr_decay": config.lr_decay,
        "loss_history": [round(x, 8) for x in history],
    }
    return model


def _densify(grads: SparseGrads, ent_shape: tuple, rel_shape: tuple) -> tuple[np.ndarray, np.ndarray]:
    dense_ent = np.zeros(ent_shape)
    dense_rel = np.zeros(rel_shape)
    for name, idx, rows in grads:
        np.add.at(dense_ent if name == "ent" else dense_rel, idx, rows)
    return dense_ent, dense_rel


def gradient_check(family: str, seed: int = 0, epsilon: float = 1e-5) -> float:
    """Max relative error between analytic and central-difference gradients
    on a tiny random instance.

    Instances whose margin activations or L1/modulus components sit within a
    small band of a kink are resampled, since the subgradient there is not
    comparable against finite differences.
    """
    if family not in FAMILIES:
        raise ConfigError(f"unknown model family {family!r}; have {FAMILIES}")
    if not (1e-7 <= epsilon <= 1e-3):
        raise ConfigError("epsilon must lie in [1e-7, 1e-3]")
    n_ent, n_rel, d, B, K = 6, 3, 4, 4, 3
    margin, adv_temperature, reg_weight, order = 1.0, 1.0, 1e-2, 1
    rng = np.random.default_rng(seed)

    for _ in range(200):
        ent_width = 2 * d if family == "rotate" else d
        ent = rng.normal(0.0, 0.8, size=(n_ent, ent_width))
        rel = (
            rng.uniform(0.0, 2 * np.pi, size=(n_rel, d))
            if family == "rotate"
            else rng.normal(0.0, 0.8, size=(n_rel, d))
        )
        pos = np.column_stack(
            [
                rng.integers(0, n_ent, size=B),
                rng.integers(0, n_rel, size=B),
                rng.integers(0, n_ent, size=B),
            ]
        )
        batch = Batch(
            h=pos[:, 0],
            r=pos[:, 1],
            t=pos[:, 2],
            neg=rng.integers(0, n_ent, size=(B, K)),
            corrupt_head=rng.integers(0, 2, size=(B, K)).astype(bool),
        )
        if _near_kink(family, ent, rel, batch, margin, order):
            continue
        break
    else:
        raise ConfigError("could not sample a kink-free gradient-check instance")

    frozen = None
    if family == "rotate":
        _, d_neg = _rotate_distances(ent, rel, batch)
        logits = -adv_temperature * d_neg
        logits = logits - logits.max(axis=1, keepdims=True)
        frozen = np.exp(logits)
        frozen = frozen / frozen.sum(axis=1, keepdims=True)

    def loss_of(ent_arr: np.ndarray, rel_arr: np.ndarray) -> float:
        if family == "transe":
            return transe_loss_grads(ent_arr, rel_arr, batch, margin, order)[0]
        if family == "distmult":
            return distmult_loss_grads(ent_arr, rel_arr, batch, reg_weight)[0]
        return rotate_loss_grads(
            ent_arr, rel_arr, batch, margin, adv_temperature, frozen_weights=frozen
        )[0]

    if family == "transe":
        _, grads = transe_loss_grads(ent, rel, batch, margin, order)
    elif family == "distmult":
        _, grads = distmult_loss_grads(ent, rel, batch, reg_weight)
    else:
        _, grads = rotate_loss_grads(ent, rel, batch, margin, adv_temperature, frozen_weights=frozen)
    a_ent, a_rel = _densify(grads, ent.shape, rel.shape)

    worst = 0.0
    for analytic, params in ((a_ent, ent), (a_rel, rel)):
        it = np.nditer(params, flags=["multi_index"])
        while not it.finished:
            idx = it.multi_index
            keep = params[idx]
            params[idx] = keep + epsilon
            up = loss_of(ent, rel)
            params[idx] = keep - epsilon
            down = loss_of(ent, rel)
            params[idx] = keep
            numeric = (up - down) / (2 * epsilon)
            denom = max(abs(analytic[idx]), abs(numeric), 1e-3)
            worst = max(worst, abs(analytic[idx] - numeric) / denom)
            it.iternext()
    return worst


def _rotate_distances(ent: np.ndarray, rel: np.ndarray, batch: Batch) -> tuple[np.ndarray, np.ndarray]:
    d = rel.shape[1]
    phases = rel[batch.r]
    hr_re, hr_im = _rotate_parts(ent[batch.h], phases)
    d_pos = np.hypot(hr_re - ent[batch.t, :d], hr_im - ent[batch.t, d:]).sum(axis=1)
    ch = batch.corrupt_head[:, :, None]
    neg_rows = ent[batch.neg]
    nr_re, nr_im = _rotate_parts(neg_rows, phases[:, None, :])
    u_re = np.where(ch, nr_re - ent[batch.t, None, :d], hr_re[:, None, :] - neg_rows[..., :d])
    u_im = np.where(ch, nr_im - ent[batch.t, None, d:], hr_im[:, None, :] - neg_rows[..., d:])
    d_neg = np.hypot(u_re, u_im).sum(axis=2)
    return d_pos, d_neg


def _near_kink(
    family: str, ent: np.ndarray, rel: np.ndarray, batch: Batch, margin: float, order: int
) -> bool:
    band = 1e-2
    if family == "distmult":
        return False  # smooth everywhere
    if family == "transe":
        u_pos = ent[batch.h] + rel[batch.r] - ent[batch.t]
        base = (rel[batch.r] - ent[batch.t])[:, None, :]
        alt = (ent[batch.h] + rel[batch.r])[:, None, :]
        u_neg = np.where(batch.corrupt_head[:, :, None], ent[batch.neg] + base, alt - ent[batch.neg])
        act = margin + _distance(u_pos, order)[:, None] - _distance(u_neg, order)
        if np.any(np.abs(act) < band):
            return True
        if order == 1 and (np.any(np.abs(u_pos) < band) or np.any(np.abs(u_neg) < band)):
            return True
        if order == 2 and (
            np.any(_distance(u_pos, 2) < band) or np.any(_distance(u_neg, 2) < band)
        ):
            return True
        return False
    # rotate: the only kinks are zero-modulus components
    d = rel.shape[1]
    phases = rel[batch.r]
    hr_re, hr_im = _rotate_parts(ent[batch.h], phases)
    m_pos = np.hypot(hr_re - ent[batch.t, :d], hr_im - ent[batch.t, d:])
    ch = batch.corrupt_head[:, :, None]
    neg_rows = ent[batch.neg]
    nr_re, nr_im = _rotate_parts(neg_rows, phases[:, None, :])
    u_re = np.where(ch, nr_re - ent[batch.t, None, :d], hr_re[:, None, :] - neg_rows[..., :d])
    u_im = np.where(ch, nr_im - ent[batch.t, None, d:], hr_im[:, None, :] - neg_rows[..., d:])
    m_neg = np.hypot(u_re, u_im)
    return bool(np.any(m_pos < band) or np.any(m_neg < band))


# Documented starting recipes for the reference datasets.
DEFAULT_RECIPES: dict[tuple[str, str], TrainConfig] = {
    ("umls", "transe"): TrainConfig(
        dimension=128, epochs=500, batch_size=256, learning_rate=0.05, negatives=8, margin=4.0
    ),
    ("umls", "distmult"): TrainConfig(
        dimension=128, epochs=500, batch_size=256, learning_rate=0.05, negatives=8, reg_weight=1e-4
    ),
    ("umls", "rotate"): TrainConfig(
        dimension=64, epochs=500, batch_size=256, learning_rate=0.05, negatives=8, margin=6.0
    ),
    ("wn18rr", "transe"): TrainConfig(
        dimension=500,
        epochs=1000,
        batch_size=1024,
        learning_rate=0.1,
        negatives=16,
        margin=6.0,
        norm_order=1,
        lr_decay=0.999,
    ),
}
