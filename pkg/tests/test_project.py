import json
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from ahptopsis import errors
from ahptopsis.ahp import SuppliedPriorities
from ahptopsis.model import PairwiseMatrix
from ahptopsis.project import (
    load_project,
    load_report,
    parse_project,
    parse_real,
    read_matrix_csv,
    run_project,
    write_text_atomic,
)

import golden

FIXTURES = Path(__file__).parent / "fixtures"
DATA = resources.files("ahptopsis") / "data"


@pytest.mark.parametrize(
    "raw, expected",
    [(3, 3.0), ("0,333333", 0.333333), ("0.5", 0.5), ("1/3", 1 / 3), (" 2 ", 2.0), ("11,1382229", 11.1382229)],
)
def test_parse_real(raw, expected):
    assert parse_real(raw) == expected


@pytest.mark.parametrize("raw", [True, "abc", "1/0", None, [1]])
def test_parse_real_rejects(raw):
    with pytest.raises(errors.ProjectFormatError):
        parse_real(raw)


def test_csv_with_decimal_commas():
    ids, grid = read_matrix_csv(DATA / "expert4_pairwise.csv")
    assert ids == golden.CRITERIA
    np.testing.assert_array_equal(grid, golden.EXPERT4_MATRIX)


def test_csv_comma_delimited(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("id,a,b\na,1,4\nb,0.25,1\n")
    ids, grid = read_matrix_csv(p)
    assert ids == ["a", "b"] and grid.tolist() == [[1, 4], [0.25, 1]]


def test_csv_header_mismatch(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("id;a;b\na;1;4\nc;0,25;1\n")
    with pytest.raises(errors.ProjectFormatError):
        read_matrix_csv(p)


def test_csv_reordered_to_declared_criteria(tmp_path):
    (tmp_path / "m.csv").write_text("id;b;a\nb;1;4\na;0,25;1\n")
    doc = {"criteria": ["a", "b"], "experts": [{"id": "e", "matrix_csv": "m.csv"}]}
    proj = parse_project(doc, base_dir=tmp_path)
    m = proj.panel.experts[0][1]
    assert m.entries.tolist() == [[1, 0.25], [4, 1]]


def test_load_case_study():
    proj = load_project(DATA / "scres_case.json")
    assert proj.criterion_ids == tuple(golden.CRITERIA)
    assert len(proj.panel.experts) == 6
    assert all(isinstance(j, SuppliedPriorities) for _, j in proj.panel.experts)
    assert proj.alternatives == tuple(golden.ALTERNATIVES)
    assert proj.alternative_labels[0] == "Technological Proficiency"
    assert proj.config.top_k == 5


def test_load_expert4_project():
    proj = load_project(DATA / "expert4_project.json")
    (eid, m), = proj.panel.experts
    assert eid == "expert4" and isinstance(m, PairwiseMatrix)
    assert proj.config.ri_preset == "saaty-classic"


def test_case_study_run():
    rep = run_project(load_project(DATA / "scres_case.json"))
    assert list(rep.selected) == golden.TOP5
    assert rep.topsis.ranking.ids == golden.TOPSIS_ORDER


def test_malformed_json():
    with pytest.raises(errors.ProjectFormatError):
        load_project(FIXTURES / "malformed.json")


def test_empty_criteria_is_schema_error():
    with pytest.raises(errors.ProjectFormatError):
        load_project(FIXTURES / "empty_criteria.json")


def test_missing_file():
    with pytest.raises(errors.ProjectFormatError):
        load_project(FIXTURES / "nope.json")


def test_nonreciprocal_is_validation_error():
    with pytest.raises(errors.ReciprocityViolation) as exc:
        load_project(FIXTURES / "nonreciprocal.json")
    assert exc.value.pair == (0, 1)


@pytest.mark.parametrize(
    "doc, exc",
    [
        ({"criteria": ["a"], "extra": 1}, errors.ProjectFormatError),
        ({"criteria": ["a", "a"]}, errors.InvalidIdentifier),
        ({"criteria": [{"id": "a", "direction": "up"}]}, errors.ProjectFormatError),
        ({"criteria": ["a", "b"], "experts": [{"id": "e", "matrix": [[1]]}]}, errors.DimensionMismatch),
        ({"criteria": ["a", "b"], "experts": [{"id": "e"}]}, errors.ProjectFormatError),
        ({"criteria": ["a", "b"], "experts": [{"id": "e", "priorities": [0.5, 0.5]}]}, errors.ProjectFormatError),
        ({"criteria": ["a", "b"], "experts": [{"id": "e", "priorities": {"a": 1, "z": 0}, "cr": 0}]}, errors.CriterionSetMismatch),
        ({"criteria": ["a"], "alternatives": ["p"], "scores": {"q": {"a": 1}}}, errors.ValidationError),
        ({"criteria": ["a"], "alternatives": ["p"], "scores": {"p": {"b": 1}}}, errors.ValidationError),
        ({"criteria": ["a"], "alternatives": ["p"], "scores": {"p": {"a": [[1, 2, 3]]}}}, errors.ProjectFormatError),
        ({"criteria": ["a"], "config": {"bogus": 1}}, errors.ValidationError),
        ({"criteria": ["a"], "config": {"top_k": 0}}, errors.ValidationError),
    ],
)
def test_schema_and_reference_errors(doc, exc):
    with pytest.raises(exc):
        parse_project(doc)


def test_grey_and_crisp_cells():
    doc = {
        "criteria": ["a"],
        "alternatives": ["p", "q"],
        "scores": {"p": {"a": [[4, 8], 6]}, "q": {"a": "2,5"}},
    }
    proj = parse_project(doc)
    assert proj.scores["q"]["a"] == [2.5]
    assert proj.scores["p"]["a"][0].upper == 8


def test_supplied_vectors_renormalized():
    doc = {"criteria": ["a", "b"], "experts": [{"id": "e", "priorities": [0.51, 0.51], "cr": 0.01}]}
    (_, sp), = parse_project(doc).panel.experts
    assert sp.priorities.weights.tolist() == [0.5, 0.5] and sp.cr == 0.01


def test_atomic_write_and_report_round_trip(tmp_path):
    rep = run_project(load_project(DATA / "scres_case.json"))
    out = tmp_path / "report.json"
    write_text_atomic(out, rep.to_json())
    assert load_report(out).to_json() == out.read_text()
    assert not [p for p in tmp_path.iterdir() if p.name.endswith(".tmp")]


def test_load_report_rejects_garbage(tmp_path):
    p = tmp_path / "r.json"
    p.write_text(json.dumps({"experts": []}))
    with pytest.raises(errors.ProjectFormatError):
        load_report(p)
    p.write_text("{")
    with pytest.raises(errors.ProjectFormatError):
        load_report(p)
