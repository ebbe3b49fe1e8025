"""Exact Hausdorff distances, the prompt-visual coupling report, and
threshold calibration.

Two metric modes exist because the measurement pipeline historically runs on
raw embeddings while the selector normalizes first: RAW_EUCLIDEAN uses the
rows as given, NORMALIZED_EUCLIDEAN L2-normalizes both sets before measuring,
which puts the coupling value on the same scale as the selection radii.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .core import EmbeddingSet, normalize
from .errors import DegenerateSampleError, DimensionMismatchError

__all__ = [
    "Metric",
    "Classification",
    "CouplingReport",
    "CalibrationConfig",
    "directed_hausdorff",
    "coupling",
    "calibrate_tau",
]


class Metric(enum.Enum):
    RAW_EUCLIDEAN = "raw"
    NORMALIZED_EUCLIDEAN = "normalized"


class Classification(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class CouplingReport:
    """Directed distances, their max (eta), and the threshold verdict."""

    h_v_to_p: float
    h_p_to_v: float
    eta: float
    classification: Classification = Classification.UNCLASSIFIED


@dataclass(frozen=True)
class CalibrationConfig:
    """Coupling threshold tau and where it came from."""

    tau: float
    source: str = "user"  # "user" or "calibrated"

    def __post_init__(self):
        if not (self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau}")


def _prepare(a: EmbeddingSet, b: EmbeddingSet, metric: Metric):
    if a.d != b.d:
        raise DimensionMismatchError(f"d mismatch: {a.d} vs {b.d}")
    if metric is Metric.NORMALIZED_EUCLIDEAN:
        a = a if a.normalized else normalize(a)
        b = b if b.normalized else normalize(b)
    return a, b


def directed_hausdorff(
    a: EmbeddingSet, b: EmbeddingSet, metric: Metric = Metric.NORMALIZED_EUCLIDEAN
) -> float:
    """sup over rows of a of (min over rows of b of pairwise distance)."""
    a, b = _prepare(a, b, metric)
    return float(kernels().directed_hausdorff(a.data, b.data))


def coupling(
    v: EmbeddingSet,
    p: EmbeddingSet,
    metric: Metric = Metric.NORMALIZED_EUCLIDEAN,
    calib: CalibrationConfig | None = None,
) -> CouplingReport:
    """Both directed distances, eta = max of the two, and the verdict.

    With a calibration: eta <= tau classifies as strong coupling (ties are
    strong: small distance means strong), eta > tau as weak. Without one the
    report is unclassified.
    """
    v, p = _prepare(v, p, metric)
    h_vp = float(kernels().directed_hausdorff(v.data, p.data))
    h_pv = float(kernels().directed_hausdorff(p.data, v.data))
    eta = max(h_vp, h_pv)
    if calib is None:
        verdict = Classification.UNCLASSIFIED
    elif eta <= calib.tau:
        verdict = Classification.STRONG
    else:
        verdict = Classification.WEAK
    return CouplingReport(h_v_to_p=h_vp, h_p_to_v=h_pv, eta=eta, classification=verdict)


def calibrate_tau(etas) -> CalibrationConfig:
    """Two-cluster split of observed coupling values; tau = midpoint of the
    cluster means.

    The split point is found exhaustively over the sorted sample, minimizing
    the summed within-cluster variance (deterministic: first minimum wins).
    Needs at least 4 values with nonzero spread.
    """
    vals = np.sort(np.asarray(list(etas), dtype=np.float64))
    if vals.size < 4:
        raise DegenerateSampleError(f"need >= 4 samples, got {vals.size}")
    if not np.isfinite(vals).all() or vals.min() < 0:
        raise DegenerateSampleError("samples must be finite and >= 0")
    if vals[0] == vals[-1]:
        raise DegenerateSampleError("zero variance sample")

    best_cost = np.inf
    best_split = 1
    for split in range(1, vals.size):
        lo, hi = vals[:split], vals[split:]
        cost = ((lo - lo.mean()) ** 2).sum() + ((hi - hi.mean()) ** 2).sum()
        if cost < best_cost:
            best_cost = cost
            best_split = split
    tau = 0.5 * (vals[:best_split].mean() + vals[best_split:].mean())
    return CalibrationConfig(tau=float(tau), source="calibrated")
