"""The balanced-covering selector.

Selection runs in two greedy stages on L2-normalized embeddings: prompt
centers come from k-fold nearest-neighbor covering (each prompt token
over-samples its k most similar visual tokens; the deduplicated candidates
are truncated to the K_p best-aligned ones), visual centers from
farthest-point sampling seeded with the prompt centers. Ties anywhere
(top-k, argmax, argmin) go to the lowest index so results are fully
deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .core import EmbeddingSet, IndexList, cosine_matrix, normalize
from .errors import (
    BudgetExceedsPopulationError,
    BudgetTooSmallError,
    DimensionMismatchError,
    EmptySetError,
)
from .hausdorff import Metric, coupling, directed_hausdorff

__all__ = [
    "CouplingClass",
    "Tier",
    "PruneConfig",
    "SelectionResult",
    "kfold_nn_cover",
    "fps_select",
    "mob_prune",
    "budget_heuristic",
    "DEFAULT_NO_PRIOR_TABLE",
]


class CouplingClass(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"


class Tier(enum.Enum):
    HIGH = "high"  # most aggressive pruning
    MID = "mid"
    LOW = "low"


# Prompt-budget fraction of K per (class, tier), and the fold rule applied to
# the resulting K_p.
_PRIOR_FRACTIONS = {
    CouplingClass.STRONG: {Tier.HIGH: (3, 8), Tier.MID: (1, 4), Tier.LOW: (1, 4)},
    CouplingClass.WEAK: {Tier.HIGH: (1, 2), Tier.MID: (7, 16), Tier.LOW: (5, 12)},
}
_FOLD_RULES = {CouplingClass.STRONG: (3, 40), CouplingClass.WEAK: (1, 8)}

# Suggested (K_p, fold_k) per total budget when no coupling prior is
# available. Repo convention (editable), not a derived quantity: the
# published ablations disagree on the exact pairs, so these follow the
# K_p = K/2 ablation grid with its best-performing folds.
DEFAULT_NO_PRIOR_TABLE = {64: (32, 4), 128: (64, 8), 192: (96, 12)}


@dataclass(frozen=True)
class PruneConfig:
    """Budgets and fold for one selection run."""

    budget_K: int
    budget_Kp: int
    fold_k: int
    heuristic: str = "manual"  # "manual" or "eta_prior:<class>:<tier>"

    def __post_init__(self):
        if self.budget_K < 1:
            raise ValueError(f"budget_K must be >= 1, got {self.budget_K}")
        if not (0 <= self.budget_Kp <= self.budget_K):
            raise ValueError(
                f"need 0 <= budget_Kp <= budget_K, got {self.budget_Kp}/{self.budget_K}"
            )
        if self.fold_k < 1:
            raise ValueError(f"fold_k must be >= 1, got {self.fold_k}")

    @classmethod
    def from_prior(cls, budget_K: int, coupling_class: "CouplingClass", tier: "Tier"):
        kp, fold = budget_heuristic(budget_K, coupling_class, tier)
        return cls(
            budget_K=budget_K,
            budget_Kp=kp,
            fold_k=fold,
            heuristic=f"eta_prior:{coupling_class.value}:{tier.value}",
        )


@dataclass(frozen=True)
class SelectionResult:
    """Retained indices split by objective plus the achieved radii.

    eps_p_directed is the distance from the prompt set to the prompt
    centers; eps_p_symmetric the symmetric Hausdorff of the same pair; both
    are +inf when no prompt centers were requested. eps_v is the directed
    distance from the full visual set to all retained tokens.
    """

    prompt_centers: IndexList
    visual_centers: IndexList
    eps_p_directed: float
    eps_p_symmetric: float
    eps_v: float
    eta: float
    shortfall_reassigned: int
    config: PruneConfig

    @property
    def retained(self) -> tuple:
        return tuple(self.prompt_centers) + tuple(self.visual_centers)


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def budget_heuristic(budget_K: int, coupling_class: CouplingClass, tier: Tier):
    """(K_p, fold_k) from the coupling-prior fractions.

    K_p is the floored class/tier fraction of K; the fold is the class rule
    applied to K_p, rounded half up and clamped to >= 1.
    """
    if budget_K < 8:
        raise BudgetTooSmallError(f"budget_K must be >= 8, got {budget_K}")
    num, den = _PRIOR_FRACTIONS[coupling_class][tier]
    kp = min(budget_K * num // den, budget_K)
    if kp < 1:
        raise BudgetTooSmallError(
            f"prior fraction {num}/{den} of K={budget_K} leaves no prompt budget"
        )
    fnum, fden = _FOLD_RULES[coupling_class]
    fold = max(1, _round_half_up(kp * fnum / fden))
    return kp, fold


def kfold_nn_cover(v: EmbeddingSet, p: EmbeddingSet, k: int, budget_Kp: int):
    """Prompt-center candidates and their truncation to budget_Kp.

    For each prompt row take its k most similar visual rows, pool them, and
    deduplicate keeping each visual index's best similarity seen in the
    pool. Candidates are ranked by that similarity (descending, lowest index
    on ties) and the top budget_Kp survive. Returns (IndexList in rank
    order, pre-truncation candidate count); fewer candidates than budget is
    not an error, the caller sees the shortfall through the count.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if budget_Kp < 0:
        raise ValueError(f"budget_Kp must be >= 0, got {budget_Kp}")
    sims = cosine_matrix(p, v)  # L x N
    n = v.n
    k_eff = min(k, n)
    # Stable argsort on -sims: descending similarity, ties to lowest index.
    order = np.argsort(-sims, axis=1, kind="stable")[:, :k_eff]

    best: dict[int, float] = {}
    for row, cols in enumerate(order):
        for col in cols:
            s = sims[row, col]
            j = int(col)
            if j not in best or s > best[j]:
                best[j] = float(s)
    candidate_count = len(best)
    ranked = sorted(best, key=lambda j: (-best[j], j))
    if budget_Kp == 0:
        return IndexList(()), candidate_count
    return IndexList(tuple(ranked[:budget_Kp])), candidate_count


def fps_select(v: EmbeddingSet, seed: IndexList, budget_Kv: int):
    """Farthest-point sampling of budget_Kv visual centers.

    Each step appends the unselected row with the largest gap
    min over selected of (1 - cos), then refreshes the gaps. With an empty
    seed the first center is the row farthest from the arithmetic-mean
    direction of v (deterministic and rotation-covariant). Returns the new
    indices in selection order and eps_v, the directed Hausdorff distance
    from v to seed-plus-selected under the normalized metric.
    """
    if not v.normalized:
        raise ValueError("fps_select requires a normalized set")
    seed.validate_against(v)
    n = v.n
    free = n - len(seed)
    if budget_Kv > free:
        raise BudgetExceedsPopulationError(
            f"budget_Kv={budget_Kv} exceeds {free} unselected rows"
        )
    selected = np.zeros(n, dtype=np.uint8)
    seed_arr = np.asarray(tuple(seed), dtype=np.intp)
    selected[seed_arr] = 1

    picked: list[int] = []
    remaining = budget_Kv
    if len(seed) > 0:
        gaps = kernels().seed_gaps(v.data, seed_arr)
    else:
        if budget_Kv == 0:
            raise EmptySetError("empty seed with zero budget selects nothing")
        mean_dir = v.data.mean(axis=0)
        first = int(np.argmax(-(v.data @ mean_dir)))
        picked.append(first)
        selected[first] = 1
        gaps = 1.0 - v.data @ v.data[first]
        remaining -= 1

    if remaining > 0:
        idx, _, _ = kernels().fps(v.data, np.ascontiguousarray(gaps), selected, remaining)
        picked.extend(int(i) for i in idx)

    new = IndexList(tuple(picked))
    union = tuple(seed) + tuple(new)
    eps_v = directed_hausdorff(v, v.take(union), Metric.NORMALIZED_EUCLIDEAN)
    return new, eps_v


def _fps_trace(v: EmbeddingSet, seed: IndexList, budget_Kv: int):
    """fps_select plus its per-step gap sequence and the final uncovered gap
    (test support: the prefix-monotonicity and radius-consistency checks)."""
    if not v.normalized:
        raise ValueError("requires a normalized set")
    n = v.n
    selected = np.zeros(n, dtype=np.uint8)
    seed_arr = np.asarray(tuple(seed), dtype=np.intp)
    selected[seed_arr] = 1
    if len(seed) == 0:
        raise ValueError("trace helper expects a nonempty seed")
    gaps = kernels().seed_gaps(v.data, seed_arr)
    idx, step_gaps, final_gap = kernels().fps(
        v.data, np.ascontiguousarray(gaps), selected, budget_Kv
    )
    return IndexList(tuple(int(i) for i in idx)), step_gaps, final_gap


def mob_prune(v: EmbeddingSet, p: EmbeddingSet, cfg: PruneConfig) -> SelectionResult:
    """Full selection pipeline: normalize, pick prompt centers, reassign any
    candidate shortfall to the visual budget, run seeded FPS, measure radii.

    When budget_K >= n every index is retained (eps_v = 0). All radii and
    eta are reported under the normalized Euclidean metric so they share a
    scale.
    """
    if v.d != p.d:
        raise DimensionMismatchError(f"d mismatch: {v.d} vs {p.d}")
    vn = v if v.normalized else normalize(v)
    pn = p if p.normalized else normalize(p)
    n = vn.n

    prompt_centers, candidate_count = kfold_nn_cover(vn, pn, cfg.fold_k, cfg.budget_Kp)
    shortfall = cfg.budget_Kp - len(prompt_centers)
    budget_kv = cfg.budget_K - cfg.budget_Kp + shortfall
    budget_kv = min(budget_kv, n - len(prompt_centers))

    visual_centers, eps_v = fps_select(vn, prompt_centers, budget_kv)

    if len(prompt_centers) > 0:
        sp = vn.take(tuple(prompt_centers))
        eps_p_dir = directed_hausdorff(pn, sp, Metric.NORMALIZED_EUCLIDEAN)
        eps_p_sym = max(eps_p_dir, directed_hausdorff(sp, pn, Metric.NORMALIZED_EUCLIDEAN))
    else:
        eps_p_dir = float("inf")
        eps_p_sym = float("inf")
    eta = coupling(vn, pn, Metric.NORMALIZED_EUCLIDEAN).eta

    return SelectionResult(
        prompt_centers=prompt_centers,
        visual_centers=visual_centers,
        eps_p_directed=eps_p_dir,
        eps_p_symmetric=eps_p_sym,
        eps_v=eps_v,
        eta=eta,
        shortfall_reassigned=shortfall,
        config=cfg,
    )
