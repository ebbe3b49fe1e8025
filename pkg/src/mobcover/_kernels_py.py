"""Pure-numpy kernels: the fallback backend when the compiled extension is
absent (or disabled via MOB_BACKEND=python).

Semantics must match mobcover._kernels exactly, including tie-breaking:
argmax/argmin resolve ties to the lowest index.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

NAME = "python"

# Cap on the number of scalars in one cdist block (~128 MB of float64).
_CHUNK_SCALARS = 16_000_000


def directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """max over rows of a of (min over rows of b of Euclidean distance)."""
    rows = max(1, _CHUNK_SCALARS // b.shape[0])
    worst = 0.0
    for start in range(0, a.shape[0], rows):
        block = cdist(a[start : start + rows], b)
        worst = max(worst, float(block.min(axis=1).max()))
    return worst


def seed_gaps(v: np.ndarray, seed: np.ndarray) -> np.ndarray:
    """Per-row min over seed rows of the cosine gap 1 - dot(v_i, v_s)."""
    gaps = 1.0 - v @ v[seed].T
    return np.ascontiguousarray(gaps.min(axis=1))


def fps(v: np.ndarray, gaps: np.ndarray, selected: np.ndarray, budget: int):
    """Greedy farthest-point loop over the cosine gap 1 - cos.

    `gaps` and `selected` are updated in place. Each step picks the
    unselected row with the largest gap (lowest index wins ties), then
    shrinks every gap by the new center. Returns the picked indices, the
    gap of each pick at selection time, and the largest gap remaining over
    unselected rows after the final pick (0.0 when nothing remains).
    """
    out_idx = np.empty(budget, dtype=np.int64)
    out_gaps = np.empty(budget, dtype=np.float64)
    masked = np.where(selected, -np.inf, gaps)
    for t in range(budget):
        i = int(np.argmax(masked))
        out_idx[t] = i
        out_gaps[t] = gaps[i]
        selected[i] = True
        step = 1.0 - v @ v[i]
        np.minimum(gaps, step, out=gaps)
        np.minimum(masked, step, out=masked)
        masked[i] = -np.inf
    final = float(masked.max())
    return out_idx, out_gaps, (final if np.isfinite(final) else 0.0)
