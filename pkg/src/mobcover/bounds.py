"""Closed-form bound calculators and the selection cost model.

All calculators take the regularity constants as inputs (they are
set-dependent existence constants, typically estimated by
oracle.fit_effective_dimension); nothing here assumes values for them. The
Lipschitz factor C defaults to 1 and is never estimated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import EmbeddingSet
from .hausdorff import Metric, directed_hausdorff

__all__ = [
    "BoundParams",
    "CostReport",
    "symmetric_hausdorff",
    "pruning_error_bound",
    "relaxed_error_bound",
    "radius_product_floor",
    "split_budget_bound",
    "cost_model",
]


@dataclass(frozen=True)
class BoundParams:
    """Constants entering the trade-off floor and the split-budget bound.

    a < b bracket the prompt set's covering-number power law, a_prime <
    b_prime the visual set's; d_eff is the shared effective dimension; z > 1
    scales eta down to the radius where the budget can no longer cover both
    sets; lipschitz_C >= 1 converts radii into output error.
    """

    eta: float
    d_eff: float
    a: float = 1.0
    b: float = 1.0
    a_prime: float = 1.0
    b_prime: float = 1.0
    z: float = 2.0
    lipschitz_C: float = 1.0

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError("eta must be >= 0")
        if self.d_eff <= 0:
            raise ValueError("d_eff must be > 0")
        if not (self.b >= self.a > 0) or not (self.b_prime >= self.a_prime > 0):
            raise ValueError("need b >= a > 0 and b_prime >= a_prime > 0")
        if self.z <= 1:
            raise ValueError("z must be > 1")
        if self.lipschitz_C < 1:
            raise ValueError("lipschitz_C must be >= 1")


@dataclass(frozen=True)
class CostReport:
    """Multiply-accumulate counts for the measurement and selection stages."""

    flops_hausdorff: int
    flops_mob: int

    @property
    def tflops_hausdorff(self) -> float:
        return self.flops_hausdorff * 1e-12

    @property
    def tflops_mob(self) -> float:
        return self.flops_mob * 1e-12


def symmetric_hausdorff(
    a: EmbeddingSet, b: EmbeddingSet, metric: Metric = Metric.RAW_EUCLIDEAN
) -> float:
    return max(directed_hausdorff(a, b, metric), directed_hausdorff(b, a, metric))


def pruning_error_bound(
    s: EmbeddingSet,
    v: EmbeddingSet,
    p: EmbeddingSet,
    C: float = 1.0,
    metric: Metric = Metric.RAW_EUCLIDEAN,
) -> float:
    """Error bound from the three pairwise Hausdorff distances:

        C * max( min(d(S,V), d(V,P)), min(d(S,V), d(S,P)) )

    Perfect preservation (s covering v both ways) drives it to zero
    regardless of the prompt geometry.
    """
    d_sv = symmetric_hausdorff(s, v, metric)
    d_vp = symmetric_hausdorff(v, p, metric)
    d_sp = symmetric_hausdorff(s, p, metric)
    return C * max(min(d_sv, d_vp), min(d_sv, d_sp))


def relaxed_error_bound(
    sp: EmbeddingSet,
    sv: EmbeddingSet,
    p: EmbeddingSet,
    v: EmbeddingSet,
    C: float = 1.0,
    eta: float = 0.0,
    metric: Metric = Metric.RAW_EUCLIDEAN,
) -> float:
    """Practical split form: C * max(d(S_p,P), d(S_v,V)) + C * eta."""
    return C * max(symmetric_hausdorff(sp, p, metric), symmetric_hausdorff(sv, v, metric)) + C * eta


def radius_product_floor(K: int, params: BoundParams):
    """Lower bound on eps_p * eps_v under budget K, and the per-objective
    optimal attainment level.

        floor    = max( D1 * K^(-2/d_eff), D2 * eta^2 )
        eps_star = max( eta / z, sqrt(D1) * K^(-1/d_eff) )

    with D1 = (4 a a')^(1/d_eff) and D2 = 1/z^2. Pushing either radius below
    eps_star forces the other above it.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    d1 = (4.0 * params.a * params.a_prime) ** (1.0 / params.d_eff)
    d2 = 1.0 / (params.z * params.z)
    floor = max(d1 * K ** (-2.0 / params.d_eff), d2 * params.eta**2)
    eps_star = max(params.eta / params.z, d1**0.5 * K ** (-1.0 / params.d_eff))
    return floor, eps_star


def split_budget_bound(params: BoundParams, k: int, L: int, Kp: int, Kv: int) -> float:
    """Upper bound on the selection error for a (K_p, K_v) budget split:

        C * max( alpha * Kp^(-1/d_eff), beta * Kv^(-1/d_eff) ) + C * eta

    with alpha = eta * (b k L / a)^(1/d_eff) and beta = 2 * b'^(1/d_eff).
    """
    if Kp < 1 or Kv < 1:
        raise ValueError("Kp and Kv must be >= 1")
    inv_d = 1.0 / params.d_eff
    alpha = params.eta * (params.b * k * L / params.a) ** inv_d
    beta = 2.0 * params.b_prime**inv_d
    core = max(alpha * Kp ** (-inv_d), beta * Kv ** (-inv_d))
    return params.lipschitz_C * core + params.lipschitz_C * params.eta


def cost_model(N: int, L: int, K: int, d: int) -> CostReport:
    """Multiply-accumulate counts: N*L*d for the coupling measurement,
    N*(L+K)*d for the full selection (one unit per multiply-accumulate)."""
    if min(N, L, K, d) < 1:
        raise ValueError("all of N, L, K, d must be positive")
    return CostReport(flops_hausdorff=N * L * d, flops_mob=N * (L + K) * d)
