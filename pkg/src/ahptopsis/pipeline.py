"""Two-phase run: expert AHP weights -> consistency gate -> top-k criteria -> TOPSIS."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import __version__, errors
from .ahp import (
    CR_THRESHOLD,
    DEFAULT_RI_PRESET,
    Aggregation,
    ExpertPanel,
    SuppliedPriorities,
    WeightMethod,
    aggregate_expert_priorities,
    evaluate_expert,
    get_ri_table,
    rank_criteria,
)
from .model import (
    ConsistencyReport,
    CriterionSpec,
    PairwiseMatrix,
    PriorityVector,
    Ranking,
    WeightVector,
)
from .topsis import MEAN, TopsisTrace, run_topsis, whiten_scores

TOPSIS_WEIGHT_POLICIES = ("equal", "ahp")


@dataclass(frozen=True)
class PipelineConfig:
    """Run configuration.

    ``topsis_weights`` is ``"equal"``, ``"ahp"`` (aggregated AHP weights
    restricted to the selected criteria and renormalised) or an explicit list
    with one weight per selected criterion. ``whitening`` is ``"mean"`` or a
    whitening coefficient in [0, 1].
    """

    weight_method: str = WeightMethod.ROW_AVERAGE.value
    aggregation: str = Aggregation.ARITHMETIC.value
    ri_preset: str = DEFAULT_RI_PRESET
    custom_ri: float | None = None
    cr_threshold: float = CR_THRESHOLD
    top_k: int = 5
    topsis_weights: object = "equal"
    whitening: object = MEAN
    warnings_only: bool = False

    def __post_init__(self):
        object.__setattr__(self, "weight_method", WeightMethod(self.weight_method).value)
        object.__setattr__(self, "aggregation", Aggregation(self.aggregation).value)
        get_ri_table(self.ri_preset)
        if self.custom_ri is not None and float(self.custom_ri) < 0:
            raise errors.ValidationError("custom_ri must be nonnegative")
        if not float(self.cr_threshold) > 0:
            raise errors.ValidationError("cr_threshold must be positive")
        if int(self.top_k) < 1:
            raise errors.ValidationError("top_k must be at least 1")
        tw = self.topsis_weights
        if isinstance(tw, str):
            if tw not in TOPSIS_WEIGHT_POLICIES:
                raise errors.ValidationError(f"unknown topsis weight policy {tw!r}")
        else:
            tw = [float(x) for x in tw]
            if not tw or any(x < 0 for x in tw) or sum(tw) <= 0:
                raise errors.ValidationError("custom TOPSIS weights must be nonnegative and not all zero")
            object.__setattr__(self, "topsis_weights", tuple(tw))
        if self.whitening != MEAN:
            lam = float(self.whitening)
            if not 0.0 <= lam <= 1.0:
                raise errors.ValidationError("whitening coefficient must lie in [0, 1]")
            object.__setattr__(self, "whitening", lam)

    @property
    def ri(self):
        return self.ri_preset if self.custom_ri is None else float(self.custom_ri)

    def to_dict(self):
        d = asdict(self)
        if isinstance(self.topsis_weights, tuple):
            d["topsis_weights"] = list(self.topsis_weights)
        return d

    @classmethod
    def from_dict(cls, d):
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        unknown = sorted(set(d) - set(known))
        if unknown:
            raise errors.ValidationError(f"unknown config keys: {unknown}")
        return cls(**known)


@dataclass(frozen=True)
class ExpertSummary:
    expert_id: str
    source: str  # "matrix" or "vector"
    priorities: PriorityVector
    cr: float
    consistency: ConsistencyReport | None = None

    def passes(self, threshold) -> bool:
        return self.cr is not None and self.cr < threshold

    def to_dict(self):
        return {
            "expert_id": self.expert_id,
            "source": self.source,
            "priorities": self.priorities.to_dict(),
            "cr": self.cr,
            "consistency": None if self.consistency is None else self.consistency.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        cons = d.get("consistency")
        return cls(
            d["expert_id"],
            d["source"],
            PriorityVector.from_dict(d["priorities"]),
            d["cr"],
            None if cons is None else ConsistencyReport.from_dict(cons),
        )


@dataclass(frozen=True)
class PipelineReport:
    experts: tuple
    aggregated: PriorityVector
    criteria_ranking: Ranking
    selected: tuple
    tie_at_cut: bool
    topsis: TopsisTrace
    criteria: tuple = ()
    provenance: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "provenance": self.provenance,
            "criteria": [c.to_dict() for c in self.criteria],
            "experts": [e.to_dict() for e in self.experts],
            "aggregated": self.aggregated.to_dict(),
            "criteria_ranking": self.criteria_ranking.to_dict(),
            "selected": list(self.selected),
            "tie_at_cut": self.tie_at_cut,
            "topsis": self.topsis.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                tuple(ExpertSummary.from_dict(e) for e in d["experts"]),
                PriorityVector.from_dict(d["aggregated"]),
                Ranking.from_dict(d["criteria_ranking"]),
                tuple(d["selected"]),
                bool(d["tie_at_cut"]),
                TopsisTrace.from_dict(d["topsis"]),
                tuple(CriterionSpec.from_dict(c) for c in d.get("criteria", [])),
                d.get("provenance", {}),
            )
        except (KeyError, TypeError) as exc:
            raise errors.ProjectFormatError(f"malformed report: missing or invalid field {exc}") from None

    @classmethod
    def from_json(cls, text: str):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise errors.ProjectFormatError(f"report is not valid JSON: {exc}") from None


def select_top_k(r: Ranking, k: int) -> tuple[tuple, bool]:
    """First ``k`` ids by rank, plus whether a tie group straddles the cut."""
    if k < 1:
        raise errors.ValidationError("k must be at least 1")
    if k > len(r):
        raise errors.KTooLarge(f"k={k} exceeds the {len(r)} ranked criteria")
    chosen = tuple(r.ids[:k])
    rest = set(r.ids[k:])
    straddle = any(set(g) & set(chosen) and set(g) & rest for g in r.tie_groups)
    return chosen, straddle


def renormalize_weights(w: PriorityVector, subset: Sequence[str]) -> WeightVector:
    subset = list(subset)
    if not subset:
        raise errors.EmptySubset("cannot renormalise weights over an empty subset")
    lookup = w.as_dict()
    missing = [c for c in subset if c not in lookup]
    if missing:
        raise errors.CriterionSetMismatch(f"criteria not in priority vector: {missing}")
    vals = np.array([lookup[c] for c in subset])
    total = vals.sum()
    if total <= 0:
        raise errors.ValidationError("selected criteria carry zero total weight")
    return WeightVector(vals / total, subset)


def _topsis_weights(cfg: PipelineConfig, aggregated, selected) -> WeightVector:
    k = len(selected)
    tw = cfg.topsis_weights
    if tw == "equal":
        return WeightVector(np.full(k, 1.0 / k), selected)
    if tw == "ahp":
        return renormalize_weights(aggregated, selected)
    vals = np.asarray(tw, dtype=float)
    if vals.size != k:
        raise errors.DimensionMismatch(f"{vals.size} custom weights for {k} selected criteria")
    return WeightVector(vals / vals.sum(), selected)


def evaluate_panel(panel: ExpertPanel, cfg: PipelineConfig) -> tuple:
    out = []
    for eid, judgment in panel.experts:
        if isinstance(judgment, PairwiseMatrix):
            res = evaluate_expert(eid, judgment, cfg.weight_method, cfg.ri, cfg.cr_threshold)
            out.append(ExpertSummary(eid, "matrix", res.priorities, res.consistency.cr, res.consistency))
        elif isinstance(judgment, SuppliedPriorities):
            out.append(ExpertSummary(eid, "vector", judgment.priorities, judgment.cr))
        else:
            raise errors.ValidationError(f"expert {eid!r}: unsupported judgment type {type(judgment).__name__}")
    return tuple(out)


def consistency_gate(experts, cfg: PipelineConfig) -> list:
    """Experts failing the CR threshold; raises unless the config is warnings-only."""
    failures = [(e.expert_id, e.cr) for e in experts if not e.passes(cfg.cr_threshold)]
    if failures and not cfg.warnings_only:
        raise errors.ConsistencyGateFailed(failures, cfg.cr_threshold)
    return failures


def run_pipeline(
    panel: ExpertPanel,
    alt_scores: Mapping[str, Mapping[str, Sequence]],
    cfg: PipelineConfig = PipelineConfig(),
    criteria: Sequence[CriterionSpec] | None = None,
    alternative_labels: Sequence[str] | None = None,
) -> PipelineReport:
    """Run both phases.

    ``alt_scores[alternative][criterion]`` holds the experts' scores for one
    cell (numbers or ``[lower, upper]`` pairs); alternatives keep mapping order.
    ``criteria`` supplies labels and benefit/cost directions; by default every
    criterion of the panel is a benefit criterion.
    """
    ids = panel.criterion_ids
    if criteria is None:
        criteria = tuple(CriterionSpec(c) for c in ids)
    criteria = tuple(criteria)
    if tuple(c.id for c in criteria) != tuple(ids):
        raise errors.CriterionSetMismatch("criterion specs do not match the panel's criteria")

    experts = evaluate_panel(panel, cfg)
    bypassed = consistency_gate(experts, cfg)
    aggregated = aggregate_expert_priorities(
        [e.priorities for e in experts], cfg.aggregation, panel.expert_weights
    )
    ranking = rank_criteria(aggregated)
    selected, tie_at_cut = select_top_k(ranking, int(cfg.top_k))

    spec = {c.id: c for c in criteria}
    alternatives = list(alt_scores)
    decision = whiten_scores(
        alt_scores, alternatives, [spec[c] for c in selected], cfg.whitening, alternative_labels
    )
    trace = run_topsis(decision, _topsis_weights(cfg, aggregated, selected))

    sources = {e.source for e in experts}
    if sources == {"vector"}:
        inputs = "vectors supplied, matrices absent"
    elif sources == {"matrix"}:
        inputs = "matrices"
    else:
        inputs = "mixed: matrices and supplied vectors"
    provenance = {
        "tool": "ahptopsis",
        "version": __version__,
        "config": cfg.to_dict(),
        "ri_presets": sorted({e.consistency.ri_preset for e in experts if e.consistency is not None}),
        "inputs": inputs,
        "gate": {
            "mode": "warnings-only" if cfg.warnings_only else "enforced",
            "threshold": cfg.cr_threshold,
            "bypassed": [{"expert_id": eid, "cr": cr} for eid, cr in bypassed],
        },
        "tie_at_cut": tie_at_cut,
    }
    return PipelineReport(experts, aggregated, ranking, selected, tie_at_cut, trace, criteria, provenance)
