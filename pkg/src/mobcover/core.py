"""Embedding containers and the cosine-induced metric on unit vectors.

All other modules build on two facts about L2-normalized rows: the cosine of
two unit vectors is their dot product, and their Euclidean distance is
sqrt(2 - 2*cos). Dot products are always accumulated in float64 because the
selection radii downstream are compared against analytic bounds at tight
tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptySetError,
    NonFiniteValueError,
    ZeroVectorError,
)

# Rows with norm at or below this are rejected: the unit-sphere metric is
# undefined for them.
ZERO_NORM_EPS = 1e-12

# Allowed drift of a row norm from 1.0 for a set flagged as normalized.
UNIT_NORM_TOL = 1e-6


def _as_matrix(data) -> np.ndarray:
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"embedding data must be 2-D, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class EmbeddingSet:
    """An n x d matrix of token embeddings, immutable after construction."""

    data: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        arr = _as_matrix(self.data)
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise EmptySetError(f"need n >= 1 and d >= 1, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise NonFiniteValueError("embedding data contains NaN or Inf")
        if self.normalized:
            norms = np.linalg.norm(arr, axis=1)
            if np.abs(norms - 1.0).max() > UNIT_NORM_TOL:
                worst = float(np.abs(norms - 1.0).max())
                raise ValueError(
                    f"normalized=True but a row norm deviates from 1 by {worst:.3g}"
                )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def take(self, indices) -> "EmbeddingSet":
        """Subset of rows, preserving the normalization flag."""
        idx = np.asarray(list(indices), dtype=np.intp)
        if idx.size == 0:
            raise EmptySetError("cannot take an empty row subset")
        return EmbeddingSet(self.data[idx], normalized=self.normalized)


@dataclass(frozen=True)
class IndexList:
    """Ordered, duplicate-free row indices into an EmbeddingSet."""

    indices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate indices")
        if any(i < 0 for i in idx):
            raise ValueError("negative index")
        object.__setattr__(self, "indices", idx)

    def validate_against(self, owner: EmbeddingSet) -> None:
        if any(i >= owner.n for i in self.indices):
            raise ValueError(f"index out of range for set with n={owner.n}")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __getitem__(self, i):
        return self.indices[i]


def normalize(s: EmbeddingSet) -> EmbeddingSet:
    """L2-normalize every row. Raises ZeroVectorError on degenerate rows."""
    norms = np.sqrt(np.einsum("ij,ij->i", s.data, s.data))
    if norms.min() <= ZERO_NORM_EPS:
        bad = int(np.argmin(norms))
        raise ZeroVectorError(f"row {bad} has norm {norms[bad]:.3g}")
    return EmbeddingSet(s.data / norms[:, None], normalized=True)


def cosine_matrix(a: EmbeddingSet, b: EmbeddingSet) -> np.ndarray:
    """Pairwise cosines of two normalized sets, clamped to [-1, 1].

    Entry (i, j) is dot(a_i, b_j). Both sets must already be normalized;
    the clamp removes float drift like 1 + 1e-16 that would later poison
    sqrt(2 - 2c).
    """
    if not (a.normalized and b.normalized):
        raise ValueError("cosine_matrix requires normalized inputs")
    if a.d != b.d:
        raise DimensionMismatchError(f"d mismatch: {a.d} vs {b.d}")
    m = a.data @ b.data.T
    np.clip(m, -1.0, 1.0, out=m)
    return m


def euclid_from_cos(c):
    """Euclidean distance between unit vectors with cosine c: sqrt(2 - 2c).

    Accepts scalars or arrays; input is clamped to [-1, 1] first.
    """
    c = np.clip(c, -1.0, 1.0)
    return np.sqrt(2.0 - 2.0 * c)
