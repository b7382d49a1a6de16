"""Grey-input TOPSIS with a full per-stage audit trace."""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real
from typing import Mapping, Sequence

import numpy as np

from . import errors
from .model import (
    DecisionMatrix,
    Direction,
    GreyScore,
    Ranking,
    WeightVector,
    make_ranking,
    validate_decision,
)

MEAN = "mean"


def _as_grey(score) -> GreyScore:
    if isinstance(score, GreyScore):
        return score
    if isinstance(score, Real):
        return GreyScore.crisp(score)
    lo, hi = score
    return GreyScore(lo, hi)


def whiten_cell(scores, policy=MEAN) -> float:
    """Collapse one cell's expert scores to a crisp value.

    Each score (a number or a ``[lower, upper]`` interval) is whitened first;
    the cell value is the mean over experts. Under ``"mean"`` an interval is
    whitened to its midpoint; a float policy is the whitening coefficient
    ``lam`` giving ``lam * upper + (1 - lam) * lower``.
    """
    if policy == MEAN:
        lam = 0.5
    else:
        lam = float(policy)
        if not 0.0 <= lam <= 1.0:
            raise errors.ValidationError(f"whitening coefficient must be in [0, 1], got {lam}")
    greys = [_as_grey(s) for s in scores]
    if not greys:
        raise ValueError("empty cell")
    return float(np.mean([g.whiten(lam) for g in greys]))


def whiten_scores(
    expert_scores: Mapping[str, Mapping[str, Sequence]],
    alternatives: Sequence[str],
    criteria: Sequence,
    policy=MEAN,
    alternative_labels=None,
) -> DecisionMatrix:
    """Build a decision matrix from ``expert_scores[alternative][criterion]`` cell lists."""
    crit_ids = [getattr(c, "id", c) for c in criteria]
    grid = np.empty((len(alternatives), len(crit_ids)))
    for i, alt in enumerate(alternatives):
        row = expert_scores.get(alt, {})
        for j, cid in enumerate(crit_ids):
            cell = row.get(cid)
            if cell is None or (not isinstance(cell, (Real, GreyScore)) and len(cell) == 0):
                raise errors.EmptyCell(alt, cid)
            if isinstance(cell, (Real, GreyScore)):
                cell = [cell]
            grid[i, j] = whiten_cell(cell, policy)
    return validate_decision(grid, alternatives, criteria, alternative_labels)


def normalize(d: DecisionMatrix) -> np.ndarray:
    """Vector normalisation: each column divided by its Euclidean norm."""
    x = d.scores
    return x / np.sqrt((x**2).sum(axis=0))


def apply_weights(r: np.ndarray, w) -> np.ndarray:
    wv = np.asarray(getattr(w, "weights", w), dtype=float)
    if r.ndim != 2 or wv.shape != (r.shape[1],):
        raise errors.DimensionMismatch(f"{wv.size} weights for {r.shape[1]} criteria")
    return r * wv


def ideals(v: np.ndarray, directions: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """Positive and negative ideal points, respecting benefit/cost direction."""
    dirs = [Direction(d) for d in directions]
    if len(dirs) != v.shape[1]:
        raise errors.DimensionMismatch("one direction per criterion is required")
    hi, lo = v.max(axis=0), v.min(axis=0)
    cost = np.array([d is Direction.COST for d in dirs])
    pos = np.where(cost, lo, hi)
    neg = np.where(cost, hi, lo)
    return pos, neg


def separations(v: np.ndarray, pos: np.ndarray, neg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d_pos = np.sqrt(((v - pos) ** 2).sum(axis=1))
    d_neg = np.sqrt(((v - neg) ** 2).sum(axis=1))
    return d_pos, d_neg


def closeness(d_pos: np.ndarray, d_neg: np.ndarray, alternatives: Sequence[str] | None = None) -> np.ndarray:
    total = d_pos + d_neg
    bad = np.flatnonzero(total <= 0)
    if bad.size:
        i = int(bad[0])
        raise errors.DegenerateAlternative(i, None if alternatives is None else alternatives[i])
    return d_neg / total


@dataclass(frozen=True, eq=False)
class TopsisTrace:
    input: DecisionMatrix
    weights: WeightVector
    normalized: np.ndarray
    weighted: np.ndarray
    ideal_pos: np.ndarray
    ideal_neg: np.ndarray
    sep_pos: np.ndarray
    sep_neg: np.ndarray
    closeness: np.ndarray
    ranking: Ranking

    def to_dict(self):
        return {
            "input": self.input.to_dict(),
            "weights": self.weights.to_dict(),
            "normalized": self.normalized.tolist(),
            "weighted": self.weighted.tolist(),
            "ideal_pos": self.ideal_pos.tolist(),
            "ideal_neg": self.ideal_neg.tolist(),
            "sep_pos": self.sep_pos.tolist(),
            "sep_neg": self.sep_neg.tolist(),
            "closeness": self.closeness.tolist(),
            "ranking": self.ranking.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        arr = lambda k: np.array(d[k], dtype=float)  # noqa: E731
        return cls(
            DecisionMatrix.from_dict(d["input"]),
            WeightVector.from_dict(d["weights"]),
            arr("normalized"),
            arr("weighted"),
            arr("ideal_pos"),
            arr("ideal_neg"),
            arr("sep_pos"),
            arr("sep_neg"),
            arr("closeness"),
            Ranking.from_dict(d["ranking"]),
        )


def run_topsis(d: DecisionMatrix, w: WeightVector) -> TopsisTrace:
    if tuple(w.criterion_ids) != d.criterion_ids:
        raise errors.DimensionMismatch(
            f"weights cover {list(w.criterion_ids)}, decision matrix has {list(d.criterion_ids)}"
        )
    r = normalize(d)
    v = apply_weights(r, w)
    pos, neg = ideals(v, d.directions)
    d_pos, d_neg = separations(v, pos, neg)
    c = closeness(d_pos, d_neg, d.alternatives)
    return TopsisTrace(d, w, r, v, pos, neg, d_pos, d_neg, c, make_ranking(d.alternatives, c))


def equal_weights(d: DecisionMatrix) -> WeightVector:
    n = len(d.criteria)
    return WeightVector(np.full(n, 1.0 / n), d.criterion_ids)
