"""Brute-force references and estimators.

Everything here is deliberately dumb and slow: exhaustive subset searches,
double-loop distance computations, and line-by-line transcriptions of the
two selection procedures. The transcriptions exist purely as equivalence
oracles for tests; the estimators (covering counts, effective dimension)
also back the bound calculators. Centers are always restricted to points of
the input set, matching the selector's feasible set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import EmbeddingSet, IndexList
from .covering import PruneConfig, SelectionResult
from .errors import DegenerateFitError, TooLargeError
from .hausdorff import Classification, CouplingReport, Metric

__all__ = [
    "RegularityFit",
    "greedy_cover_count",
    "exact_cover_count",
    "optimal_kcenter_radius",
    "fit_effective_dimension",
    "reference_mob",
    "reference_coupling",
]

EXACT_COVER_MAX_N = 16
KCENTER_MAX_N = 12


@dataclass(frozen=True)
class RegularityFit:
    """Log-log covering regression: count(eps) ~ exp(log_const) * eps^(-d_eff_hat)."""

    d_eff_hat: float
    log_const: float
    r2: float
    radius_window: tuple


def _pairwise(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    d = np.empty((n, n))
    for i in range(n):
        d[i] = np.sqrt(((x - x[i]) ** 2).sum(axis=1))
    return d


def greedy_cover_count(x: EmbeddingSet, eps: float) -> int:
    """Centers needed by the lowest-index-first greedy ball cover.

    An upper bound on the covering number with centers restricted to x.
    Unlike the true covering number it is not guaranteed monotone in eps:
    a larger radius can reroute the greedy trajectory into a worse cover.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    dist = _pairwise(x.data)
    uncovered = np.ones(x.n, dtype=bool)
    count = 0
    while uncovered.any():
        i = int(np.argmax(uncovered))  # lowest uncovered index
        uncovered &= dist[i] > eps
        count += 1
    return count


def exact_cover_count(x: EmbeddingSet, eps: float) -> int:
    """Minimal number of eps-balls centered at points of x covering x,
    by increasing-cardinality subset enumeration. Capped at n <= 16."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    n = x.n
    if n > EXACT_COVER_MAX_N:
        raise TooLargeError(f"exact cover capped at n <= {EXACT_COVER_MAX_N}, got {n}")
    dist = _pairwise(x.data)
    masks = [int(sum(1 << j for j in range(n) if dist[i, j] <= eps)) for i in range(n)]
    full = (1 << n) - 1
    for m in range(1, n + 1):
        for subset in itertools.combinations(range(n), m):
            acc = 0
            for i in subset:
                acc |= masks[i]
            if acc == full:
                return m
    return n  # unreachable: every point covers itself


def optimal_kcenter_radius(x: EmbeddingSet, K: int) -> float:
    """Smallest achievable max-min radius over all K-subsets of x (the
    exact k-center optimum with member-restricted centers). Capped at
    n <= 12."""
    n = x.n
    if n > KCENTER_MAX_N:
        raise TooLargeError(f"exact k-center capped at n <= {KCENTER_MAX_N}, got {n}")
    if not (1 <= K <= n):
        raise ValueError(f"need 1 <= K <= {n}, got {K}")
    dist = _pairwise(x.data)
    best = np.inf
    for subset in itertools.combinations(range(n), K):
        radius = dist[:, subset].min(axis=1).max()
        if radius < best:
            best = radius
    return float(best)


def fit_effective_dimension(
    x: EmbeddingSet, window: tuple | None = None, n_radii: int = 8
) -> RegularityFit:
    """Estimate the covering power-law exponent over a radius window.

    Greedy covering counts are taken on a log-spaced radius grid and
    log(count) is least-squares fitted against log(eps); the slope magnitude
    is the effective-dimension estimate. The default window spans 3% to 30%
    of the set diameter: above ~0.3*diam the counts of a compact patch
    saturate at a handful of balls and drag the slope down.
    """
    if n_radii < 4:
        raise ValueError("n_radii must be >= 4")
    if window is None:
        diam = float(_pairwise(x.data).max())
        if diam <= 0:
            raise DegenerateFitError("set has zero diameter")
        window = (0.03 * diam, 0.3 * diam)
    eps_min, eps_max = float(window[0]), float(window[1])
    if not (0 < eps_min < eps_max):
        raise ValueError(f"need 0 < eps_min < eps_max, got {window}")

    radii = np.exp(np.linspace(np.log(eps_min), np.log(eps_max), n_radii))
    counts = np.array([greedy_cover_count(x, float(r)) for r in radii], dtype=float)
    if len(set(counts.tolist())) < 2:
        raise DegenerateFitError("covering counts are constant over the window")

    log_eps = np.log(radii)
    log_counts = np.log(counts)
    slope, intercept = np.polyfit(log_eps, log_counts, 1)
    fitted = slope * log_eps + intercept
    ss_res = float(((log_counts - fitted) ** 2).sum())
    ss_tot = float(((log_counts - log_counts.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return RegularityFit(
        d_eff_hat=float(-slope),
        log_const=float(intercept),
        r2=r2,
        radius_window=(eps_min, eps_max),
    )


# ---------------------------------------------------------------------------
# Literal transcriptions (test oracles)
# ---------------------------------------------------------------------------


def _norm_rows(m: np.ndarray) -> np.ndarray:
    out = np.empty_like(m, dtype=np.float64)
    for i in range(m.shape[0]):
        out[i] = m[i] / np.sqrt((m[i] * m[i]).sum())
    return out


def _directed(a: np.ndarray, b: np.ndarray) -> float:
    worst = 0.0
    for i in range(a.shape[0]):
        best = np.inf
        for j in range(b.shape[0]):
            best = min(best, float(np.sqrt(((a[i] - b[j]) ** 2).sum())))
        worst = max(worst, best)
    return worst


def reference_coupling(
    v: EmbeddingSet, p: EmbeddingSet, metric: Metric = Metric.RAW_EUCLIDEAN
) -> CouplingReport:
    """Double-loop transcription of the coupling measurement."""
    vm, pm = v.data, p.data
    if metric is Metric.NORMALIZED_EUCLIDEAN:
        vm, pm = _norm_rows(vm), _norm_rows(pm)
    dist = np.empty((vm.shape[0], pm.shape[0]))
    for i in range(vm.shape[0]):
        for j in range(pm.shape[0]):
            dist[i, j] = np.sqrt(((vm[i] - pm[j]) ** 2).sum())
    h_vp = float(dist.min(axis=1).max())
    h_pv = float(dist.min(axis=0).max())
    return CouplingReport(
        h_v_to_p=h_vp,
        h_p_to_v=h_pv,
        eta=max(h_vp, h_pv),
        classification=Classification.UNCLASSIFIED,
    )


def reference_mob(v: EmbeddingSet, p: EmbeddingSet, cfg: PruneConfig) -> SelectionResult:
    """Line-by-line transcription of the two-stage selection.

    Mirrors mob_prune's contract (shortfall reassignment, budget capping,
    empty-seed rule) with scalar loops instead of kernels.
    """
    vm = _norm_rows(v.data)
    pm = _norm_rows(p.data)
    n, L = vm.shape[0], pm.shape[0]

    # Stage 1: k-fold nearest-neighbor covering.
    sims = np.array([[float(np.dot(pm[l], vm[i])) for i in range(n)] for l in range(L)])
    k_eff = min(cfg.fold_k, n)
    flat_idx: list[int] = []
    flat_sim: list[float] = []
    for l in range(L):
        ranked = sorted(range(n), key=lambda i: (-sims[l][i], i))[:k_eff]
        flat_idx.extend(ranked)
        flat_sim.extend(sims[l][i] for i in ranked)
    unique: dict[int, float] = {}
    for i, s in zip(flat_idx, flat_sim):
        if i not in unique or s > unique[i]:
            unique[i] = s
    candidates = sorted(unique, key=lambda i: (-unique[i], i))
    s_p = candidates[: cfg.budget_Kp]
    shortfall = cfg.budget_Kp - len(s_p)

    # Stage 2: farthest-point sampling seeded with the prompt centers.
    budget_kv = min(cfg.budget_K - cfg.budget_Kp + shortfall, n - len(s_p))
    selected = set(s_p)
    order = list(s_p)
    gaps = np.full(n, np.inf)
    if s_p:
        for i in range(n):
            gaps[i] = min(1.0 - float(np.dot(vm[i], vm[s])) for s in s_p)
        remaining = budget_kv
    else:
        mean_dir = vm.mean(axis=0)
        first = min(range(n), key=lambda i: (float(np.dot(vm[i], mean_dir)), i))
        selected.add(first)
        order.append(first)
        gaps = np.array([1.0 - float(np.dot(vm[i], vm[first])) for i in range(n)])
        remaining = budget_kv - 1
    for _ in range(remaining):
        i_star = max(
            (i for i in range(n) if i not in selected), key=lambda i: (gaps[i], -i)
        )
        selected.add(i_star)
        order.append(i_star)
        for i in range(n):
            gaps[i] = min(gaps[i], 1.0 - float(np.dot(vm[i], vm[i_star])))
    s_v = order[len(s_p) :]

    union = vm[np.asarray(order, dtype=np.intp)]
    eps_v = _directed(vm, union)
    if s_p:
        sp_rows = vm[np.asarray(s_p, dtype=np.intp)]
        eps_p_dir = _directed(pm, sp_rows)
        eps_p_sym = max(eps_p_dir, _directed(sp_rows, pm))
    else:
        eps_p_dir = float("inf")
        eps_p_sym = float("inf")
    eta = max(_directed(vm, pm), _directed(pm, vm))

    return SelectionResult(
        prompt_centers=IndexList(tuple(s_p)),
        visual_centers=IndexList(tuple(s_v)),
        eps_p_directed=eps_p_dir,
        eps_p_symmetric=eps_p_sym,
        eps_v=eps_v,
        eta=eta,
        shortfall_reassigned=shortfall,
        config=cfg,
    )
