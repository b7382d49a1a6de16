"""Analytic hierarchy process: priorities, lambda_max, consistency, aggregation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import errors
from .model import (
    ConsistencyReport,
    PairwiseMatrix,
    PriorityVector,
    Ranking,
    make_ranking,
)

EIG_TOL = 1e-10
EIG_MAX_ITER = 1000
CR_THRESHOLD = 0.1


class WeightMethod(str, enum.Enum):
    ROW_AVERAGE = "row-average"
    EIGENVECTOR = "eigenvector"


class Aggregation(str, enum.Enum):
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class RiTable:
    """Random consistency index by matrix order."""

    preset_id: str
    values: Mapping[int, float]

    def __post_init__(self):
        vals = {int(k): float(v) for k, v in self.values.items()}
        if vals.get(1, 0.0) != 0.0 or vals.get(2, 0.0) != 0.0:
            raise errors.ValidationError("RI for orders 1 and 2 must be 0")
        prev = 0.0
        for k in sorted(vals):
            if vals[k] < prev:
                raise errors.ValidationError(f"RI table must be nondecreasing (order {k})")
            prev = vals[k]
        object.__setattr__(self, "values", vals)

    def __getitem__(self, n: int) -> float:
        if n <= 2:
            return 0.0
        try:
            return self.values[n]
        except KeyError:
            raise errors.MissingRiEntry(n) from None

    def __contains__(self, n):
        return n <= 2 or n in self.values


RI_PRESETS = {
    "paper-table2": RiTable(
        "paper-table2",
        {1: 0.0, 2: 0.0, 3: 0.5799, 4: 0.8921, 5: 1.1159, 6: 1.2358, 7: 1.3322, 8: 1.3952, 9: 1.4537, 10: 1.4882},
    ),
    "saaty-classic": RiTable(
        "saaty-classic",
        {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49},
    ),
}
DEFAULT_RI_PRESET = "paper-table2"


def get_ri_table(preset) -> RiTable:
    if isinstance(preset, RiTable):
        return preset
    try:
        return RI_PRESETS[preset]
    except KeyError:
        raise errors.ValidationError(
            f"unknown RI preset {preset!r}; choose from {sorted(RI_PRESETS)}"
        ) from None


@dataclass(frozen=True)
class SuppliedPriorities:
    """A published priority vector whose matrix is unavailable; its CR is taken on trust."""

    priorities: PriorityVector
    cr: float

    @property
    def criterion_ids(self):
        return self.priorities.criterion_ids


@dataclass(frozen=True)
class ExpertPanel:
    """Expert judgments over one shared, ordered criterion set.

    Each entry is ``(expert_id, PairwiseMatrix)`` or ``(expert_id, SuppliedPriorities)``.
    """

    experts: tuple
    expert_weights: tuple | None = None

    def __post_init__(self):
        experts = tuple((str(eid), m) for eid, m in self.experts)
        if not experts:
            raise errors.ValidationError("expert panel is empty")
        ids = experts[0][1].criterion_ids
        for eid, m in experts:
            if m.criterion_ids != ids:
                raise errors.CriterionSetMismatch(f"expert {eid!r} uses a different criterion set or order")
        names = [eid for eid, _ in experts]
        if len(set(names)) != len(names):
            raise errors.InvalidIdentifier("duplicate expert ids")
        if self.expert_weights is not None and len(self.expert_weights) != len(experts):
            raise errors.DimensionMismatch("one weight per expert is required")
        object.__setattr__(self, "experts", experts)

    @property
    def criterion_ids(self):
        return self.experts[0][1].criterion_ids


def normalized_pairwise(m: PairwiseMatrix) -> np.ndarray:
    """Each entry divided by its column sum."""
    a = m.entries
    return a / a.sum(axis=0)


def priority_row_average(m: PairwiseMatrix) -> PriorityVector:
    w = normalized_pairwise(m).mean(axis=1)
    return PriorityVector(w / w.sum(), m.criterion_ids)


def priority_eigenvector(m: PairwiseMatrix, tol: float = EIG_TOL, max_iter: int = EIG_MAX_ITER) -> PriorityVector:
    """Perron vector of ``m`` by power iteration, sum-normalised every step.

    Starts from the uniform vector and stops once successive iterates differ
    by less than ``tol`` in the max-norm.
    """
    if tol <= 0:
        raise errors.ValidationError("tol must be positive")
    a = m.entries
    w = np.full(m.n, 1.0 / m.n)
    for _ in range(max_iter):
        nxt = a @ w
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - w)) < tol:
            return PriorityVector(nxt, m.criterion_ids)
        w = nxt
    raise errors.NoConvergence(max_iter)


def priorities(m: PairwiseMatrix, method=WeightMethod.ROW_AVERAGE) -> PriorityVector:
    method = WeightMethod(method)
    if method is WeightMethod.EIGENVECTOR:
        return priority_eigenvector(m)
    return priority_row_average(m)


def lambda_max(m: PairwiseMatrix, w: PriorityVector) -> float:
    """Average over rows of ``(A w)_i / w_i``."""
    wv = np.asarray(w.weights, dtype=float)
    if wv.shape != (m.n,):
        raise errors.DimensionMismatch("weight vector does not match matrix order")
    if np.any(wv <= 0):
        raise errors.ZeroWeightComponent("lambda_max needs strictly positive weights")
    return float(np.mean((m.entries @ wv) / wv))


def consistency(
    m: PairwiseMatrix,
    w: PriorityVector,
    ri=DEFAULT_RI_PRESET,
    threshold: float = CR_THRESHOLD,
) -> ConsistencyReport:
    """CI and CR of ``m`` at weights ``w``.

    ``ri`` is a preset id, an :class:`RiTable`, or a bare number for orders the
    presets do not cover.
    """
    n = m.n
    if isinstance(ri, (int, float)) and not isinstance(ri, bool):
        ri_value, preset = float(ri), "custom"
        if ri_value < 0:
            raise errors.ValidationError("RI must be nonnegative")
    else:
        table = get_ri_table(ri)
        ri_value, preset = table[n], table.preset_id
    lam = lambda_max(m, w)
    ci = (lam - n) / (n - 1)
    cr = ci / ri_value if ri_value > 0 else 0.0
    return ConsistencyReport(n, lam, ci, ri_value, cr, preset, float(threshold))


def aggregate_expert_priorities(
    vectors: Sequence[PriorityVector],
    method=Aggregation.ARITHMETIC,
    expert_weights: Sequence[float] | None = None,
) -> PriorityVector:
    """Combine expert priority vectors component-wise, then renormalise to sum 1."""
    if not vectors:
        raise errors.ValidationError("no priority vectors to aggregate")
    ids = vectors[0].criterion_ids
    for v in vectors[1:]:
        if v.criterion_ids != ids:
            raise errors.CriterionSetMismatch("priority vectors cover different criteria")
    method = Aggregation(method)
    stack = np.vstack([v.weights for v in vectors])
    if expert_weights is None:
        alpha = np.full(len(vectors), 1.0 / len(vectors))
    else:
        alpha = np.asarray(expert_weights, dtype=float)
        if alpha.shape != (len(vectors),) or np.any(alpha < 0) or alpha.sum() <= 0:
            raise errors.ValidationError("expert weights must be nonnegative, one per vector, not all zero")
        alpha = alpha / alpha.sum()
    if method is Aggregation.GEOMETRIC:
        if np.any(stack <= 0):
            raise errors.ZeroWeightComponent("geometric aggregation needs strictly positive weights")
        agg = np.exp(alpha @ np.log(stack))
    else:
        agg = alpha @ stack
    return PriorityVector(agg / agg.sum(), ids)


def rank_criteria(w: PriorityVector) -> Ranking:
    return make_ranking(w.criterion_ids, w.weights)


@dataclass(frozen=True)
class ExpertResult:
    """Priorities and consistency for one expert matrix."""

    expert_id: str
    priorities: PriorityVector
    consistency: ConsistencyReport
    method: WeightMethod = field(default=WeightMethod.ROW_AVERAGE)


def evaluate_expert(
    expert_id: str,
    m: PairwiseMatrix,
    method=WeightMethod.ROW_AVERAGE,
    ri=DEFAULT_RI_PRESET,
    threshold: float = CR_THRESHOLD,
) -> ExpertResult:
    method = WeightMethod(method)
    w = priorities(m, method)
    return ExpertResult(expert_id, w, consistency(m, w, ri, threshold), method)
