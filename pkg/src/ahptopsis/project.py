"""Project files, CSV matrix import and atomic writes.

A project is one JSON document::

    {
      "criteria":     [{"id": "sust", "label": "Sustainability", "direction": "benefit"}, ...],
      "experts":      [{"id": "e1", "matrix": [[1, 3], [0.333333, 1]]},
                       {"id": "e2", "matrix_csv": "e2.csv"},
                       {"id": "e3", "priorities": [0.7, 0.3], "cr": 0.02, "weight": 1}],
      "alternatives": [{"id": "tp", "label": "Technological Proficiency"}, ...],
      "scores":       {"tp": {"sust": [6, 7], "agil": [[4, 8]]}, ...},
      "config":       {"top_k": 5, "topsis_weights": "equal"}
    }

Matrix rows and columns follow the declared criterion order. A score cell is a
number or a list whose items are numbers or ``[lower, upper]`` intervals.
Numbers may be written as strings with a decimal comma (``"0,333333"``) or as
simple fractions (``"1/3"``).
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import errors
from .ahp import ExpertPanel, SuppliedPriorities
from .model import CriterionSpec, GreyScore, PriorityVector, validate_pairwise
from .pipeline import PipelineConfig, PipelineReport, run_pipeline

TOP_LEVEL_KEYS = ("criteria", "experts", "alternatives", "scores", "config")


def parse_real(x) -> float:
    if isinstance(x, bool):
        raise errors.ProjectFormatError(f"expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        s = x.strip().replace(",", ".")
        try:
            return float(Fraction(s)) if "/" in s else float(s)
        except (ValueError, ZeroDivisionError):
            pass
    raise errors.ProjectFormatError(f"expected a number, got {x!r}")


def read_matrix_csv(path) -> tuple[list, np.ndarray]:
    """Read a labelled square matrix; first row and column hold criterion ids."""
    text = Path(path).read_text(encoding="utf-8-sig")
    try:
        dialect = csv.Sniffer().sniff(text.splitlines()[0], delimiters=";\t,")
    except (csv.Error, IndexError):
        raise errors.ProjectFormatError(f"{path}: cannot detect CSV delimiter") from None
    rows = [r for r in csv.reader(text.splitlines(), dialect) if any(c.strip() for c in r)]
    if len(rows) < 2:
        raise errors.ProjectFormatError(f"{path}: matrix CSV needs a header and at least one row")
    header = [c.strip() for c in rows[0][1:]]
    row_ids = [r[0].strip() for r in rows[1:]]
    if header != row_ids:
        raise errors.ProjectFormatError(f"{path}: row ids {row_ids} do not match column ids {header}")
    grid = []
    for r in rows[1:]:
        if len(r) - 1 != len(header):
            raise errors.ProjectFormatError(f"{path}: row {r[0]!r} has {len(r) - 1} values, expected {len(header)}")
        grid.append([parse_real(c) for c in r[1:]])
    return header, np.array(grid, dtype=float)


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_bytes_atomic(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require(cond, msg):
    if not cond:
        raise errors.ProjectFormatError(msg)


def _parse_cell(cell, where):
    if isinstance(cell, (int, float, str)) and not isinstance(cell, bool):
        return [parse_real(cell)]
    _require(isinstance(cell, list) and cell, f"{where}: score cell must be a number or a nonempty list")
    out = []
    for item in cell:
        if isinstance(item, list):
            _require(len(item) == 2, f"{where}: grey score must be [lower, upper]")
            out.append(GreyScore(parse_real(item[0]), parse_real(item[1])))
        else:
            out.append(parse_real(item))
    return out


@dataclass(frozen=True)
class Project:
    criteria: tuple
    panel: ExpertPanel | None
    alternatives: tuple
    alternative_labels: tuple
    scores: dict
    config: PipelineConfig
    source: str = ""

    @property
    def criterion_ids(self):
        return tuple(c.id for c in self.criteria)

    def label_of(self, id_):
        for c in self.criteria:
            if c.id == id_:
                return c.label
        for a, lab in zip(self.alternatives, self.alternative_labels):
            if a == id_:
                return lab
        return id_


def _checked_matrix(eid, grid, criteria_ids, reciprocity_tol):
    try:
        return validate_pairwise(grid, criteria_ids, reciprocity_tol=reciprocity_tol)
    except errors.ValidationError as exc:
        exc.args = (f"expert {eid!r}: {exc}",)
        raise


def _parse_expert(raw, k, criteria_ids, base_dir, reciprocity_tol):
    _require(isinstance(raw, dict), f"experts[{k}] must be an object")
    eid = raw.get("id")
    _require(isinstance(eid, str) and eid, f"experts[{k}] needs a string id")
    kinds = [key for key in ("matrix", "matrix_csv", "priorities") if key in raw]
    _require(len(kinds) == 1, f"expert {eid!r}: give exactly one of matrix, matrix_csv, priorities")
    kind = kinds[0]
    n = len(criteria_ids)
    if kind == "matrix":
        rows = raw["matrix"]
        _require(
            isinstance(rows, list) and all(isinstance(r, list) for r in rows),
            f"expert {eid!r}: matrix must be a list of rows",
        )
        grid = [[parse_real(x) for x in r] for r in rows]
        if len(grid) != n or any(len(r) != n for r in grid):
            raise errors.DimensionMismatch(f"expert {eid!r}: matrix must be {n}x{n} over the declared criteria")
        return eid, _checked_matrix(eid, grid, criteria_ids, reciprocity_tol)
    if kind == "matrix_csv":
        ids, grid = read_matrix_csv(Path(base_dir) / raw["matrix_csv"])
        if sorted(ids) != sorted(criteria_ids):
            raise errors.CriterionSetMismatch(f"expert {eid!r}: CSV criteria {ids} differ from declared criteria")
        pos = [ids.index(c) for c in criteria_ids]
        return eid, _checked_matrix(eid, grid[np.ix_(pos, pos)], criteria_ids, reciprocity_tol)
    pri = raw["priorities"]
    if isinstance(pri, dict):
        unknown = sorted(set(pri) - set(criteria_ids))
        if unknown:
            raise errors.CriterionSetMismatch(f"expert {eid!r}: unknown criteria {unknown}")
        missing = [c for c in criteria_ids if c not in pri]
        if missing:
            raise errors.CriterionSetMismatch(f"expert {eid!r}: no priority for {missing}")
        vals = [parse_real(pri[c]) for c in criteria_ids]
    else:
        _require(isinstance(pri, list), f"expert {eid!r}: priorities must be a list or object")
        vals = [parse_real(x) for x in pri]
        if len(vals) != n:
            raise errors.DimensionMismatch(f"expert {eid!r}: {len(vals)} priorities for {n} criteria")
    _require("cr" in raw, f"expert {eid!r}: supplied priorities need a 'cr' value")
    vals = np.array(vals)
    if np.any(vals < 0) or vals.sum() <= 0:
        raise errors.ValidationError(f"expert {eid!r}: priorities must be nonnegative and not all zero")
    # Published vectors are rounded and need not sum to exactly 1.
    return eid, SuppliedPriorities(PriorityVector(vals / vals.sum(), criteria_ids), parse_real(raw["cr"]))


def parse_project(doc, base_dir=".", reciprocity_tol=None) -> Project:
    """Build a :class:`Project` from a decoded JSON document.

    Schema problems raise :class:`ProjectFormatError`; semantic ones (non-reciprocal
    matrices, dangling references) raise :class:`ValidationError`.
    """
    from .model import RECIPROCITY_TOL

    tol = RECIPROCITY_TOL if reciprocity_tol is None else reciprocity_tol
    _require(isinstance(doc, dict), "project must be a JSON object")
    unknown = sorted(set(doc) - set(TOP_LEVEL_KEYS))
    _require(not unknown, f"unknown top-level keys: {unknown}")

    crit_raw = doc.get("criteria")
    _require(isinstance(crit_raw, list) and crit_raw, "'criteria' must be a nonempty list")
    criteria = []
    for k, c in enumerate(crit_raw):
        if isinstance(c, str):
            c = {"id": c}
        _require(isinstance(c, dict) and isinstance(c.get("id"), str), f"criteria[{k}] needs a string id")
        _require(
            c.get("direction", "benefit") in ("benefit", "cost"),
            f"criteria[{k}]: direction must be 'benefit' or 'cost'",
        )
        criteria.append(CriterionSpec.from_dict(c))
    ids = [c.id for c in criteria]
    if len(set(ids)) != len(ids):
        raise errors.InvalidIdentifier(f"duplicate criterion ids in {ids}")

    experts_raw = doc.get("experts", [])
    _require(isinstance(experts_raw, list), "'experts' must be a list")
    panel = None
    if experts_raw:
        experts = [_parse_expert(e, k, ids, base_dir, tol) for k, e in enumerate(experts_raw)]
        weights = [e.get("weight") for e in experts_raw]
        if all(w is None for w in weights):
            ew = None
        else:
            ew = tuple(1.0 if w is None else parse_real(w) for w in weights)
        panel = ExpertPanel(tuple(experts), ew)

    alts_raw = doc.get("alternatives", [])
    _require(isinstance(alts_raw, list), "'alternatives' must be a list")
    alternatives, labels = [], []
    for k, a in enumerate(alts_raw):
        if isinstance(a, str):
            a = {"id": a}
        _require(isinstance(a, dict) and isinstance(a.get("id"), str), f"alternatives[{k}] needs a string id")
        alternatives.append(a["id"])
        labels.append(a.get("label") or a["id"])
    if len(set(alternatives)) != len(alternatives):
        raise errors.InvalidIdentifier("duplicate alternative ids")

    scores_raw = doc.get("scores", {})
    _require(isinstance(scores_raw, dict), "'scores' must be an object keyed by alternative id")
    scores = {}
    for alt, row in scores_raw.items():
        if alt not in alternatives:
            raise errors.ValidationError(f"scores reference undeclared alternative {alt!r}")
        _require(isinstance(row, dict), f"scores[{alt!r}] must be an object keyed by criterion id")
        for cid in row:
            if cid not in ids:
                raise errors.ValidationError(f"scores[{alt!r}] reference undeclared criterion {cid!r}")
        scores[alt] = {cid: _parse_cell(cell, f"scores[{alt!r}][{cid!r}]") for cid, cell in row.items()}
    # keep declared alternative order
    scores = {a: scores.get(a, {}) for a in alternatives}

    cfg_raw = doc.get("config", {})
    _require(isinstance(cfg_raw, dict), "'config' must be an object")
    try:
        cfg = PipelineConfig.from_dict(cfg_raw)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, errors.ValidationError):
            raise
        raise errors.ValidationError(f"invalid config: {exc}") from None
    return Project(tuple(criteria), panel, tuple(alternatives), tuple(labels), scores, cfg)


def load_project(path, reciprocity_tol=None) -> Project:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise errors.ProjectFormatError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise errors.ProjectFormatError(f"{path}: invalid JSON: {exc}") from None
    proj = parse_project(doc, base_dir=path.parent, reciprocity_tol=reciprocity_tol)
    return replace(proj, source=str(path))


def run_project(proj: Project, cfg: PipelineConfig | None = None) -> PipelineReport:
    if proj.panel is None:
        raise errors.ValidationError("project has no experts; the pipeline needs an AHP panel")
    return run_pipeline(
        proj.panel, proj.scores, cfg or proj.config, proj.criteria, proj.alternative_labels
    )


def load_report(path) -> PipelineReport:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise errors.ProjectFormatError(f"cannot read {path}: {exc}") from None
    return PipelineReport.from_json(text)
