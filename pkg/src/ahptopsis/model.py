"""Core domain types shared by the AHP and TOPSIS engines.

All types are frozen dataclasses; array fields are read-only numpy arrays so
a validated object can be shared freely.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import errors

MIN_ORDER = 2
MAX_ORDER = 15
RECIPROCITY_TOL = 1e-3
SCALE_EPS = 1e-6
SUM_TOL = 1e-9
TIE_TOL = 1e-9


class Direction(str, enum.Enum):
    BENEFIT = "benefit"
    COST = "cost"


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def _check_ids(ids, n, what="criterion"):
    ids = tuple(ids)
    if len(ids) != n:
        raise errors.DimensionMismatch(f"expected {n} {what} ids, got {len(ids)}")
    for i in ids:
        if not isinstance(i, str) or not i:
            raise errors.InvalidIdentifier(f"{what} id must be a nonempty string, got {i!r}")
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise errors.InvalidIdentifier(f"duplicate {what} ids: {dup}")
    return ids


@dataclass(frozen=True)
class CriterionSpec:
    id: str
    label: str = ""
    direction: Direction = Direction.BENEFIT

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise errors.InvalidIdentifier(f"criterion id must be a nonempty string, got {self.id!r}")
        object.__setattr__(self, "direction", Direction(self.direction))
        if not self.label:
            object.__setattr__(self, "label", self.id)

    def to_dict(self):
        return {"id": self.id, "label": self.label, "direction": self.direction.value}

    @classmethod
    def from_dict(cls, d):
        return cls(d["id"], d.get("label", ""), d.get("direction", "benefit"))


@dataclass(frozen=True, eq=False)
class PairwiseMatrix:
    """Square positive reciprocal judgment matrix. Build with :func:`validate_pairwise`."""

    entries: np.ndarray
    criterion_ids: tuple

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def reciprocity_residual(self) -> float:
        a = self.entries
        return float(np.max(np.abs(a * a.T - 1.0)))

    def __eq__(self, other):
        if not isinstance(other, PairwiseMatrix):
            return NotImplemented
        return self.criterion_ids == other.criterion_ids and np.array_equal(self.entries, other.entries)

    def to_dict(self):
        return {"criterion_ids": list(self.criterion_ids), "matrix": self.entries.tolist()}

    @classmethod
    def from_dict(cls, d, **kwargs):
        return validate_pairwise(d["matrix"], d["criterion_ids"], **kwargs)


@dataclass(frozen=True, eq=False)
class PriorityVector:
    weights: np.ndarray
    criterion_ids: tuple

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 1:
            raise errors.DimensionMismatch("priority vector must be one-dimensional")
        ids = _check_ids(self.criterion_ids, w.size)
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise errors.ValidationError("priority weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > SUM_TOL:
            raise errors.ValidationError(f"priority weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "criterion_ids", ids)

    def __len__(self):
        return self.weights.size

    def __eq__(self, other):
        if not isinstance(other, PriorityVector):
            return NotImplemented
        return self.criterion_ids == other.criterion_ids and np.array_equal(self.weights, other.weights)

    def as_dict(self) -> dict:
        return dict(zip(self.criterion_ids, self.weights.tolist()))

    def to_dict(self):
        return {"criterion_ids": list(self.criterion_ids), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d["weights"], d["criterion_ids"])


# Same invariants as PriorityVector, but aligned to a decision matrix's criteria.
@dataclass(frozen=True, eq=False)
class WeightVector(PriorityVector):
    pass


@dataclass(frozen=True)
class ConsistencyReport:
    n: int
    lambda_max: float
    ci: float
    ri: float
    cr: float
    ri_preset: str
    threshold: float

    @property
    def acceptable(self) -> bool:
        return self.cr < self.threshold

    def to_dict(self):
        return {
            "n": self.n,
            "lambda_max": self.lambda_max,
            "ci": self.ci,
            "ri": self.ri,
            "cr": self.cr,
            "ri_preset": self.ri_preset,
            "threshold": self.threshold,
            "acceptable": self.acceptable,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["n"], d["lambda_max"], d["ci"], d["ri"], d["cr"], d["ri_preset"], d["threshold"])


@dataclass(frozen=True)
class GreyScore:
    """Interval judgment ``[lower, upper]``; a crisp score is the degenerate interval."""

    lower: float
    upper: float

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise errors.ValidationError(f"grey bounds must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise errors.ValidationError(f"grey lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def crisp(cls, x):
        return cls(x, x)

    def whiten(self, lam: float) -> float:
        return lam * self.upper + (1.0 - lam) * self.lower

    def to_list(self):
        return [self.lower, self.upper]


@dataclass(frozen=True, eq=False)
class DecisionMatrix:
    """Alternatives x criteria performance scores. Build with :func:`validate_decision`."""

    alternatives: tuple
    criteria: tuple
    scores: np.ndarray
    alternative_labels: tuple = ()

    @property
    def criterion_ids(self) -> tuple:
        return tuple(c.id for c in self.criteria)

    @property
    def directions(self) -> tuple:
        return tuple(c.direction for c in self.criteria)

    @property
    def shape(self):
        return self.scores.shape

    def subset(self, criterion_ids: Sequence[str]) -> "DecisionMatrix":
        pos = {c.id: k for k, c in enumerate(self.criteria)}
        missing = [c for c in criterion_ids if c not in pos]
        if missing:
            raise errors.CriterionSetMismatch(f"unknown criteria: {missing}")
        idx = [pos[c] for c in criterion_ids]
        return validate_decision(
            self.scores[:, idx], self.alternatives, [self.criteria[k] for k in idx], self.alternative_labels
        )

    def __eq__(self, other):
        if not isinstance(other, DecisionMatrix):
            return NotImplemented
        return (
            self.alternatives == other.alternatives
            and self.criteria == other.criteria
            and self.alternative_labels == other.alternative_labels
            and np.array_equal(self.scores, other.scores)
        )

    def to_dict(self):
        return {
            "alternatives": list(self.alternatives),
            "alternative_labels": list(self.alternative_labels),
            "criteria": [c.to_dict() for c in self.criteria],
            "scores": self.scores.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return validate_decision(
            d["scores"],
            d["alternatives"],
            [CriterionSpec.from_dict(c) for c in d["criteria"]],
            d.get("alternative_labels") or None,
        )


@dataclass(frozen=True)
class RankEntry:
    id: str
    score: float
    rank: int


@dataclass(frozen=True)
class Ranking:
    entries: tuple
    tie_groups: tuple = ()

    @property
    def ids(self) -> list:
        return [e.id for e in self.entries]

    def rank_of(self, id_: str) -> int:
        for e in self.entries:
            if e.id == id_:
                return e.rank
        raise KeyError(id_)

    def tie_group_of(self, id_: str):
        for g in self.tie_groups:
            if id_ in g:
                return g
        return None

    def __len__(self):
        return len(self.entries)

    def to_dict(self):
        return {
            "entries": [{"id": e.id, "score": e.score, "rank": e.rank} for e in self.entries],
            "tie_groups": [list(g) for g in self.tie_groups],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            tuple(RankEntry(e["id"], e["score"], e["rank"]) for e in d["entries"]),
            tuple(tuple(g) for g in d["tie_groups"]),
        )


def make_ranking(ids: Sequence[str], scores: Sequence[float], tol: float = TIE_TOL) -> Ranking:
    """Rank descending by score.

    Scores within ``tol`` of the first member of a run form a tie group; members
    of a tie group keep their input order. Ranks are always 1..k.
    """
    ids = list(ids)
    scores = [float(s) for s in scores]
    if len(ids) != len(scores):
        raise errors.DimensionMismatch("ids and scores differ in length")
    order = sorted(range(len(ids)), key=lambda k: (-scores[k], k))
    groups = []
    for k in order:
        if groups and scores[groups[-1][0]] - scores[k] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    entries, ties = [], []
    for g in groups:
        g.sort()
        if len(g) > 1:
            ties.append(tuple(ids[k] for k in g))
        for k in g:
            entries.append(RankEntry(ids[k], scores[k], len(entries) + 1))
    return Ranking(tuple(entries), tuple(ties))


def _to_float_grid(raw) -> np.ndarray:
    try:
        a = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise errors.ValidationError(f"matrix entries must be real numbers: {exc}") from None
    return a


def validate_pairwise(
    raw,
    ids: Sequence[str] | None = None,
    *,
    reciprocity_tol: float = RECIPROCITY_TOL,
    enforce_scale: bool = False,
    scale_eps: float = SCALE_EPS,
) -> PairwiseMatrix:
    """Validate a pairwise comparison grid.

    Entries are stored exactly as given; truncated reciprocals such as
    ``0.333333`` are accepted as long as ``|a_ij * a_ji - 1| <= reciprocity_tol``.
    """
    a = _to_float_grid(raw)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise errors.NonSquare(f"pairwise matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise errors.DimensionMismatch(f"matrix order must be in {MIN_ORDER}..{MAX_ORDER}, got {n}")
    if ids is None:
        ids = [f"C{k + 1}" for k in range(n)]
    ids = _check_ids(ids, n)

    bad = ~np.isfinite(a) | (a <= 0)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise errors.NonPositiveEntry((i, j), a[i, j])
    diag = np.flatnonzero(np.diag(a) != 1.0)
    if diag.size:
        i = int(diag[0])
        raise errors.ReciprocityViolation((i, i), abs(a[i, i] * a[i, i] - 1.0), ids)
    resid = np.abs(a * a.T - 1.0)
    worst = np.unravel_index(np.argmax(np.triu(resid, 1)), resid.shape)
    if resid[worst] > reciprocity_tol:
        raise errors.ReciprocityViolation((int(worst[0]), int(worst[1])), float(resid[worst]), ids)
    if enforce_scale:
        out = (a < 1.0 / 9.0 - scale_eps) | (a > 9.0 + scale_eps)
        if out.any():
            i, j = map(int, np.argwhere(out)[0])
            raise errors.ScaleViolation((i, j), a[i, j])
    return PairwiseMatrix(_frozen(a), ids)


def validate_decision(raw, alternatives, criteria, alternative_labels=None) -> DecisionMatrix:
    """Validate an m x n score grid. ``criteria`` may be CriterionSpec objects or bare ids."""
    x = _to_float_grid(raw)
    crit = tuple(c if isinstance(c, CriterionSpec) else CriterionSpec(c) for c in criteria)
    if x.ndim != 2:
        raise errors.DimensionMismatch(f"score grid must be two-dimensional, got shape {x.shape}")
    m, n = x.shape
    if m < 2:
        raise errors.DimensionMismatch(f"at least 2 alternatives are required, got {m}")
    if n < 1:
        raise errors.DimensionMismatch("at least 1 criterion is required")
    alts = _check_ids(alternatives, m, "alternative")
    _check_ids([c.id for c in crit], n)
    if alternative_labels:
        labels = tuple(alternative_labels)
        if len(labels) != m:
            raise errors.DimensionMismatch("alternative labels do not match alternatives")
    else:
        labels = alts
    if not np.all(np.isfinite(x)):
        raise errors.ValidationError("scores must be finite")
    if np.any(x < 0):
        i, j = map(int, np.argwhere(x < 0)[0])
        raise errors.NegativeScore(f"score of {alts[i]!r} on {crit[j].id!r} is negative ({x[i, j]})")
    zero = np.flatnonzero(~x.any(axis=0))
    if zero.size:
        raise errors.ZeroColumn(crit[int(zero[0])].id)
    return DecisionMatrix(alts, crit, _frozen(x), labels)
