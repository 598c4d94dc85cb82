"""Embedding-based triple scorers: translation, bilinear, and rotation.

Scores are "higher is more plausible":

* transe   — ``-|h + r - t|_p`` with p in {1, 2}
* distmult — ``sum_i h_i * r_i * t_i``
* rotate   — ``-sum_i |h_i . r_i - t_i|`` over complex components, where the
  relation stores phase angles and ``.`` is componentwise complex rotation
  (relation components have unit modulus by construction)

RotatE entity rows store ``2d`` reals: the first ``d`` are real parts, the
last ``d`` imaginary parts.

Checkpoints are a single file: one JSON header line (family, shapes, seed,
training metadata) followed by the raw little-endian float64 parameter
arrays, so saving is byte-deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError

FAMILIES = ("transe", "distmult", "rotate")

_MAGIC = b"KGEM1\n"


@dataclass
class EmbeddingModel:
    family: str
    dim: int
    ent: np.ndarray  # (n_entities, dim) or (n_entities, 2*dim) for rotate
    rel: np.ndarray  # (n_relations, dim); phases for rotate
    norm_order: int = 1
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown model family {self.family!r}; have {FAMILIES}")
        if self.norm_order not in (1, 2):
            raise ConfigError("norm_order must be 1 or 2")
        expected = 2 * self.dim if self.family == "rotate" else self.dim
        if self.ent.ndim != 2 or self.ent.shape[1] != expected:
            raise ConfigError(f"entity array must be (n, {expected}) for {self.family}")
        if self.rel.ndim != 2 or self.rel.shape[1] != self.dim:
            raise ConfigError(f"relation array must be (m, {self.dim})")

    @property
    def n_entities(self) -> int:
        return self.ent.shape[0]

    @property
    def n_relations(self) -> int:
        return self.rel.shape[0]

    def _check_ids(self, *pairs: tuple[int, int]) -> None:
        for index, bound in pairs:
            if not (0 <= index < bound):
                raise ConfigError(f"id {index} out of range [0, {bound})")

    def score(self, h: int, r: int, t: int) -> float:
        self._check_ids((h, self.n_entities), (r, self.n_relations), (t, self.n_entities))
        if self.family == "transe":
            u = self.ent[h] + self.rel[r] - self.ent[t]
            return float(-np.linalg.norm(u, ord=self.norm_order))
        if self.family == "distmult":
            # entity product first: keeps the score exactly symmetric in h, t
            return float(np.sum(self.ent[h] * self.ent[t] * self.rel[r]))
        hr_re, hr_im = self._rotated(self.ent[h], self.rel[r])
        d = self.dim
        u_re = hr_re - self.ent[t, :d]
        u_im = hr_im - self.ent[t, d:]
        return float(-np.sum(np.hypot(u_re, u_im)))

    def _rotated(self, ent_row: np.ndarray, phase: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        d = self.dim
        re, im = ent_row[:d], ent_row[d:]
        cos, sin = np.cos(phase), np.sin(phase)
        return re * cos - im * sin, re * sin + im * cos

    def score_tails(self, h: int, r: int) -> np.ndarray:
        """Scores of (h, r, e) for every entity e."""
        self._check_ids((h, self.n_entities), (r, self.n_relations))
        if self.family == "transe":
            target = self.ent[h] + self.rel[r]
            diff = target[None, :] - self.ent
            return -np.linalg.norm(diff, ord=self.norm_order, axis=1)
        if self.family == "distmult":
            return self.ent @ (self.ent[h] * self.rel[r])
        hr_re, hr_im = self._rotated(self.ent[h], self.rel[r])
        d = self.dim
        u_re = hr_re[None, :] - self.ent[:, :d]
        u_im = hr_im[None, :] - self.ent[:, d:]
        return -np.sum(np.hypot(u_re, u_im), axis=1)

    def score_heads(self, r: int, t: int) -> np.ndarray:
        """Scores of (e, r, t) for every entity e."""
        self._check_ids((r, self.n_relations), (t, self.n_entities))
        if self.family == "transe":
            target = self.ent[t] - self.rel[r]
            diff = self.ent - target[None, :]
            return -np.linalg.norm(diff, ord=self.norm_order, axis=1)
        if self.family == "distmult":
            return self.ent @ (self.rel[r] * self.ent[t])
        # |h.r - t| = |h - t.r^-1| because rotation preserves modulus
        d = self.dim
        tr_re, tr_im = self._rotated(self.ent[t], -self.rel[r])
        u_re = self.ent[:, :d] - tr_re[None, :]
        u_im = self.ent[:, d:] - tr_im[None, :]
        return -np.sum(np.hypot(u_re, u_im), axis=1)

    def assert_finite(self) -> None:
        if not (np.isfinite(self.ent).all() and np.isfinite(self.rel).all()):
            from .errors import TrainingDiverged

            raise TrainingDiverged("non-finite parameters detected")


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    header = {
        "format": "kgaug-embedding",
        "version": 1,
        "family": model.family,
        "dim": model.dim,
        "n_entities": model.n_entities,
        "n_relations": model.n_relations,
        "norm_order": model.norm_order,
        "dtype": "<f8",
        "meta": model.meta,
    }
    blob = json.dumps(header, sort_keys=True, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(blob + b"\n")
        fh.write(np.ascontiguousarray(model.ent, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.rel, dtype="<f8").tobytes())


def load_model(path: str | Path) -> EmbeddingModel:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ConfigError(f"{path} is not a kgaug embedding checkpoint")
        header = json.loads(fh.readline().decode("utf-8"))
        if header.get("version") != 1:
            raise ConfigError(f"unsupported checkpoint version in {path}")
        n_ent, n_rel, dim = header["n_entities"], header["n_relations"], header["dim"]
        ent_width = 2 * dim if header["family"] == "rotate" else dim
        ent = np.frombuffer(fh.read(n_ent * ent_width * 8), dtype="<f8").reshape(n_ent, ent_width).copy()
        rel = np.frombuffer(fh.read(n_rel * dim * 8), dtype="<f8").reshape(n_rel, dim).copy()
    return EmbeddingModel(
        family=header["family"],
        dim=dim,
        ent=ent,
        rel=rel,
        norm_order=header.get("norm_order", 1),
        meta=header.get("meta", {}),
    )
