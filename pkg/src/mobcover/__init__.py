"""mobcover: balanced-covering subset selection over embedding sets.

A visual/prompt token pair is pruned to a budget by covering both sets with
retained tokens: prompt centers via k-fold nearest-neighbor covering, visual
centers via farthest-point sampling. The package also measures prompt-visual
coupling (symmetric Hausdorff distance), evaluates the closed-form bounds
that govern the radius trade-off, and ships brute-force oracles for all of
it. Hot kernels run from a compiled extension when built, with a pure-numpy
fallback (MOB_BACKEND=python|compiled|auto selects at import).
"""

__version__ = "0.1.0"

from ._backend import available_backends, backend_name, use_backend
from .bounds import (
    BoundParams,
    CostReport,
    cost_model,
    pruning_error_bound,
    radius_product_floor,
    relaxed_error_bound,
    split_budget_bound,
    symmetric_hausdorff,
)
from .core import EmbeddingSet, IndexList, cosine_matrix, euclid_from_cos, normalize
from .covering import (
    DEFAULT_NO_PRIOR_TABLE,
    CouplingClass,
    PruneConfig,
    SelectionResult,
    Tier,
    budget_heuristic,
    fps_select,
    kfold_nn_cover,
    mob_prune,
)
from .errors import MobError
from .formats import (
    load_embeddings,
    read_embeddings_csv,
    read_mobe,
    read_selection,
    write_mobe,
    write_selection,
)
from .hausdorff import (
    CalibrationConfig,
    Classification,
    CouplingReport,
    Metric,
    calibrate_tau,
    coupling,
    directed_hausdorff,
)
from .oracle import (
    RegularityFit,
    exact_cover_count,
    fit_effective_dimension,
    greedy_cover_count,
    optimal_kcenter_radius,
    reference_coupling,
    reference_mob,
)
from .synth import GenSpec, Manifold, generate

__all__ = [
    "__version__",
    "available_backends",
    "backend_name",
    "use_backend",
    "BoundParams",
    "CostReport",
    "cost_model",
    "pruning_error_bound",
    "radius_product_floor",
    "relaxed_error_bound",
    "split_budget_bound",
    "symmetric_hausdorff",
    "EmbeddingSet",
    "IndexList",
    "cosine_matrix",
    "euclid_from_cos",
    "normalize",
    "DEFAULT_NO_PRIOR_TABLE",
    "CouplingClass",
    "PruneConfig",
    "SelectionResult",
    "Tier",
    "budget_heuristic",
    "fps_select",
    "kfold_nn_cover",
    "mob_prune",
    "MobError",
    "load_embeddings",
    "read_embeddings_csv",
    "read_mobe",
    "read_selection",
    "write_mobe",
    "write_selection",
    "CalibrationConfig",
    "Classification",
    "CouplingReport",
    "Metric",
    "calibrate_tau",
    "coupling",
    "directed_hausdorff",
    "RegularityFit",
    "exact_cover_count",
    "fit_effective_dimension",
    "greedy_cover_count",
    "optimal_kcenter_radius",
    "reference_coupling",
    "reference_mob",
    "GenSpec",
    "Manifold",
    "generate",
]
