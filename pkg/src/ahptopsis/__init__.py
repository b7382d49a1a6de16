"""AHP criterion weighting and (grey-input) TOPSIS ranking."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .model import (  # noqa: E402
    ConsistencyReport,
    CriterionSpec,
    DecisionMatrix,
    Direction,
    GreyScore,
    PairwiseMatrix,
    PriorityVector,
    Ranking,
    RankEntry,
    WeightVector,
    make_ranking,
    validate_decision,
    validate_pairwise,
)
from .ahp import (  # noqa: E402
    RI_PRESETS,
    Aggregation,
    ExpertPanel,
    RiTable,
    SuppliedPriorities,
    WeightMethod,
    aggregate_expert_priorities,
    consistency,
    lambda_max,
    normalized_pairwise,
    priority_eigenvector,
    priority_row_average,
    rank_criteria,
)
from .topsis import (  # noqa: E402
    TopsisTrace,
    apply_weights,
    closeness,
    ideals,
    normalize,
    run_topsis,
    separations,
    whiten_scores,
)
from .pipeline import (  # noqa: E402
    PipelineConfig,
    PipelineReport,
    renormalize_weights,
    run_pipeline,
    select_top_k,
)
