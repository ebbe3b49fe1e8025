"""Deterministic generators of visual/prompt point-cloud pairs.

Streams come from numpy's PCG64 generator (default stream constants, seeded
with GenSpec.seed), so identical specs reproduce identical clouds bit for
bit. The coupling target is realized by building prompts as a covering
subset of the visual cloud (lightly perturbed) plus one controlled outlier
that attains the worst-case distance; the prompt-side fill radius is what
limits how small a target can get.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import EmbeddingSet
from .errors import InfeasibleEtaError
from .hausdorff import Metric, coupling

__all__ = ["Manifold", "GenSpec", "generate"]

# Acceptable relative deviation of the measured coupling from the target.
ETA_REL_TOL = 0.15


class Manifold(enum.Enum):
    GRID2D = "grid2d"
    CIRCLE = "circle"
    GAUSSIAN_CLUSTERS = "clusters"


@dataclass(frozen=True)
class GenSpec:
    n_v: int
    n_p: int
    ambient_d: int
    manifold: Manifold
    eta_target: float
    seed: int
    clusters: int = 4

    def __post_init__(self):
        if not (self.n_v >= self.n_p >= 1):
            raise ValueError(f"need n_v >= n_p >= 1, got {self.n_v}/{self.n_p}")
        if self.eta_target < 0:
            raise ValueError("eta_target must be >= 0")
        intrinsic = {
            Manifold.GRID2D: 3,
            Manifold.CIRCLE: 2,
            Manifold.GAUSSIAN_CLUSTERS: 3,
        }[self.manifold]
        if self.ambient_d < intrinsic:
            raise ValueError(
                f"ambient_d must be >= {intrinsic} for {self.manifold.value}"
            )
        if self.manifold is Manifold.GAUSSIAN_CLUSTERS and self.clusters < 1:
            raise ValueError("clusters must be >= 1")


def _base_cloud(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.manifold is Manifold.GRID2D:
        side = int(np.ceil(np.sqrt(spec.n_v)))
        ii, jj = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
        pts = np.stack([ii.ravel(), jj.ravel()], axis=1)[: spec.n_v].astype(np.float64)
        pts -= pts.mean(axis=0)
        # Constant lift keeps the plane away from the origin so downstream
        # L2 normalization stays a near-affine map of the patch.
        lift = np.full((spec.n_v, 1), 2.0 * max(side - 1, 1))
        return np.hstack([pts, lift])
    if spec.manifold is Manifold.CIRCLE:
        theta = 2.0 * np.pi * np.arange(spec.n_v) / spec.n_v
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    centers = rng.normal(size=(spec.clusters, 3))
    centers *= 3.0 / np.linalg.norm(centers, axis=1, keepdims=True)
    assign = np.arange(spec.n_v) % spec.clusters
    return centers[assign] + 0.25 * rng.normal(size=(spec.n_v, 3))


def _rotation(d: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded orthonormal matrix via modified Gram-Schmidt (einsum dots only,
    so the float sequence is identical on every IEEE-754 platform)."""
    a = rng.normal(size=(d, d))
    q = np.empty_like(a)
    for i in range(d):
        v = a[i].copy()
        for j in range(i):
            v -= np.einsum("k,k->", q[j], v) * q[j]
        q[i] = v / np.sqrt(np.einsum("k,k->", v, v))
    return q


def _embed(base: np.ndarray, ambient_d: int, rng: np.random.Generator) -> np.ndarray:
    n, m = base.shape
    padded = np.zeros((n, ambient_d))
    padded[:, :m] = base
    return padded @ _rotation(ambient_d, rng).T


def _cover_indices(v: np.ndarray, count: int) -> np.ndarray:
    """Greedy farthest-first cover of v by `count` of its own rows (start at
    row 0); near-minimal fill radius, fully deterministic."""
    chosen = [0]
    dist = np.sqrt(((v - v[0]) ** 2).sum(axis=1))
    while len(chosen) < count:
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.sqrt(((v - v[nxt]) ** 2).sum(axis=1)))
    return np.asarray(chosen, dtype=np.intp)


def generate(spec: GenSpec):
    """Build (visual set, prompt set, measured coupling) for a spec.

    Raises InfeasibleEtaError when the measured coupling cannot land within
    15% of the target: either the target is zero with n_p < n_v (the
    prompts cannot coincide with the visual set) or the target is below the
    fill radius achievable with n_p - 1 prompt anchors.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    v = _embed(_base_cloud(spec, rng), spec.ambient_d, rng)

    if spec.eta_target == 0.0:
        if spec.n_p != spec.n_v:
            raise InfeasibleEtaError(
                "eta_target=0 requires n_p == n_v (prompts must coincide with the visual set)"
            )
        p = v.copy()
    else:
        base_idx = _cover_indices(v, spec.n_p - 1) if spec.n_p > 1 else np.empty(0, np.intp)
        scale = rng.uniform(0.0, 0.1 * spec.eta_target, size=len(base_idx))
        dirs = rng.normal(size=(len(base_idx), spec.ambient_d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        base = v[base_idx] + scale[:, None] * dirs

        centroid = v.mean(axis=0)
        spread = np.sqrt(((v - centroid) ** 2).sum(axis=1))
        anchor = int(np.argmax(spread))
        outward = v[anchor] - centroid
        norm = np.sqrt((outward**2).sum())
        if norm <= 1e-12:
            outward = np.zeros(spec.ambient_d)
            outward[0] = 1.0
        else:
            outward = outward / norm
        outlier = v[anchor] + spec.eta_target * outward
        p = np.vstack([base, outlier[None, :]]) if len(base_idx) else outlier[None, :]

    vset = EmbeddingSet(v)
    pset = EmbeddingSet(p)
    measured = coupling(vset, pset, Metric.RAW_EUCLIDEAN).eta
    if spec.eta_target == 0.0:
        ok = measured == 0.0
    else:
        ok = abs(measured - spec.eta_target) <= ETA_REL_TOL * spec.eta_target
    if not ok:
        raise InfeasibleEtaError(
            f"measured coupling {measured:.6g} misses target {spec.eta_target:.6g} "
            f"by more than {ETA_REL_TOL:.0%}: raise eta_target or n_p"
        )
    return vset, pset, measured
