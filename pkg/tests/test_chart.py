from importlib import resources

import pytest

from ahptopsis import errors
from ahptopsis.chart import bar_chart_svg, chart_from_report, chart_series
from ahptopsis.project import load_project, run_project

import golden


@pytest.fixture(scope="module")
def report():
    return run_project(load_project(resources.files("ahptopsis") / "data" / "scres_case.json")).to_dict()


def test_weight_series_in_rank_order(report):
    labels, values = chart_series(report, "weights")
    assert len(labels) == 10
    assert labels[0] == "Sustainability" and labels[-1] == "Organizational Capacity"
    assert values == sorted(values, reverse=True)
    assert values[0] == pytest.approx(golden.PANEL_WEIGHT["sustainability"], abs=2e-3)


def test_closeness_series(report):
    labels, values = chart_series(report, "closeness")
    assert labels[0] == "Technological Proficiency"
    assert round(values[0], 3) == 0.787
    assert len(values) == 4


def test_svg_is_deterministic(report):
    a = chart_from_report(report, "closeness")
    b = chart_from_report(report, "closeness")
    assert a == b and a.startswith(b"<?xml")
    assert b"0.787" in a


def test_single_bar():
    svg = bar_chart_svg(["only"], [0.42], "one")
    assert b"only" in svg and b"0.420" in svg


def test_all_zero_values_still_render():
    assert b"<svg" in bar_chart_svg(["a", "b"], [0.0, 0.0])


def test_empty_series_rejected():
    with pytest.raises(errors.ValidationError):
        bar_chart_svg([], [])


def test_unknown_chart_kind(report):
    with pytest.raises(errors.UnknownReportField):
        chart_series(report, "lambda")
    with pytest.raises(errors.UnknownReportField):
        chart_series({"topsis": {}}, "closeness")
