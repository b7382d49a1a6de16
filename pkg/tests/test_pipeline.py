import dataclasses
import json

import numpy as np
import pytest

from ahptopsis import errors
from ahptopsis.ahp import ExpertPanel, SuppliedPriorities
from ahptopsis.model import CriterionSpec, PriorityVector, WeightVector, make_ranking, validate_pairwise
from ahptopsis.pipeline import (
    PipelineConfig,
    PipelineReport,
    renormalize_weights,
    run_pipeline,
    select_top_k,
)
from ahptopsis.topsis import run_topsis, whiten_scores

import golden

# each published weight divided by their sum 0.57804
TOP5_RENORMALIZED = [0.23320185454293820, 0.20581620649090030, 0.18998685212095875, 0.18884506262542385, 0.18215002421977890]


def _published_weight_vector():
    w = np.array([golden.PANEL_WEIGHT[c] for c in golden.CRITERIA])
    return PriorityVector(w / w.sum(), golden.CRITERIA)


@pytest.fixture
def panel():
    experts = []
    for k in range(6):
        col = np.array([golden.EXPERT_COLUMNS[c][k] for c in golden.CRITERIA])
        experts.append((f"expert{k + 1}", SuppliedPriorities(PriorityVector(col / col.sum(), golden.CRITERIA), golden.EXPERT_CRS[k])))
    return ExpertPanel(tuple(experts))


@pytest.fixture
def scores():
    return {
        alt: {c: [golden.DECISION[i][j]] for j, c in enumerate(golden.TOP5)}
        for i, alt in enumerate(golden.ALTERNATIVES)
    }


def test_select_top_k_case_study():
    r = make_ranking(golden.CRITERIA, [golden.PANEL_WEIGHT[c] for c in golden.CRITERIA])
    chosen, tie = select_top_k(r, 5)
    assert list(chosen) == golden.TOP5 and not tie
    assert list(select_top_k(r, 10)[0]) == r.ids
    with pytest.raises(errors.KTooLarge):
        select_top_k(r, 11)


def test_select_top_k_simple():
    r = make_ranking(["a", "b", "c"], [0.5, 0.3, 0.2])
    assert select_top_k(r, 1) == (("a",), False)


def test_select_top_k_flags_straddling_tie():
    r = make_ranking(["a", "b", "c", "d"], [0.4, 0.2, 0.2, 0.2])
    assert select_top_k(r, 2) == (("a", "b"), True)
    assert select_top_k(r, 4) == (("a", "b", "c", "d"), False)
    assert select_top_k(r, 1) == (("a",), False)


def test_renormalize_published_top5():
    w = renormalize_weights(_published_weight_vector(), golden.TOP5)
    np.testing.assert_allclose(w.weights, TOP5_RENORMALIZED, atol=1e-12)
    np.testing.assert_allclose(w.weights, [0.23320, 0.20582, 0.18999, 0.18885, 0.18215], atol=2e-3)
    assert w.criterion_ids == tuple(golden.TOP5)


def test_renormalize_edge_cases():
    v = PriorityVector([0.5, 0.3, 0.2], ["a", "b", "c"])
    np.testing.assert_allclose(renormalize_weights(v, ["a", "b", "c"]).weights, v.weights)
    assert renormalize_weights(v, ["b"]).weights.tolist() == [1.0]
    with pytest.raises(errors.EmptySubset):
        renormalize_weights(v, [])
    with pytest.raises(errors.CriterionSetMismatch):
        renormalize_weights(v, ["z"])


def test_case_study_pipeline(panel, scores):
    rep = run_pipeline(panel, scores)
    assert rep.criteria_ranking.ids[:5] == golden.TOP5
    assert set(rep.criteria_ranking.ids[5:]) == {c for c, r in golden.PANEL_RANK.items() if r > 5}
    assert list(rep.selected) == golden.TOP5
    np.testing.assert_allclose(rep.topsis.closeness, golden.CLOSENESS, atol=1e-3)
    assert rep.topsis.ranking.ids == golden.TOPSIS_ORDER
    assert rep.provenance["inputs"] == "vectors supplied, matrices absent"
    assert rep.provenance["gate"] == {"mode": "enforced", "threshold": 0.1, "bypassed": []}


def test_pipeline_is_composition(panel, scores):
    cfg = PipelineConfig(topsis_weights="ahp")
    rep = run_pipeline(panel, scores, cfg)
    d = whiten_scores(scores, list(scores), list(rep.selected))
    expected = run_topsis(d, renormalize_weights(rep.aggregated, rep.selected))
    assert rep.topsis.to_dict() == expected.to_dict()


def test_custom_weights_rank_by_first_criterion(panel, scores):
    rep = run_pipeline(panel, scores, PipelineConfig(topsis_weights=[1, 0, 0, 0, 0]))
    sust = [golden.DECISION[i][0] for i in range(4)]
    expected = [golden.ALTERNATIVES[i] for i in np.argsort(sust)[::-1]]
    assert rep.topsis.ranking.ids == expected


def test_custom_weights_length_checked(panel, scores):
    with pytest.raises(errors.DimensionMismatch):
        run_pipeline(panel, scores, PipelineConfig(topsis_weights=[1, 1]))


def test_pipeline_deterministic(panel, scores):
    a = run_pipeline(panel, scores).to_json()
    b = run_pipeline(panel, scores).to_json()
    assert a == b


def test_report_round_trip(panel, scores):
    text = run_pipeline(panel, scores, PipelineConfig(whitening=0.3)).to_json()
    assert PipelineReport.from_json(text).to_json() == text


def test_degenerate_identity_judgments():
    m = validate_pairwise(np.ones((3, 3)), ["x", "y", "z"])
    panel = ExpertPanel((("solo", m),))
    uniform = {a: {c: [5] for c in "xyz"} for a in ("p", "q")}
    with pytest.raises(errors.DegenerateAlternative):
        run_pipeline(panel, uniform, PipelineConfig(top_k=2))


def _gate_panel():
    ok = validate_pairwise([[1, 3, 5], [1 / 3, 1, 2], [1 / 5, 1 / 2, 1]], ["x", "y", "z"])
    bad = validate_pairwise([[1, 9, 1 / 9], [1 / 9, 1, 9], [9, 1 / 9, 1]], ["x", "y", "z"])
    return ExpertPanel((("ok", ok), ("bad", bad)))


def test_gate_hard_fails():
    scores = {a: {c: [i + j + 1] for j, c in enumerate("xyz")} for i, a in enumerate("pq")}
    with pytest.raises(errors.ConsistencyGateFailed) as exc:
        run_pipeline(_gate_panel(), scores, PipelineConfig(top_k=2))
    assert [eid for eid, _ in exc.value.failures] == ["bad"]


def test_gate_warnings_only_recorded():
    scores = {a: {c: [i * 2 + j + 1] for j, c in enumerate("xyz")} for i, a in enumerate("pq")}
    rep = run_pipeline(_gate_panel(), scores, PipelineConfig(top_k=2, warnings_only=True))
    gate = rep.provenance["gate"]
    assert gate["mode"] == "warnings-only"
    assert [b["expert_id"] for b in gate["bypassed"]] == ["bad"]
    assert rep.provenance["inputs"] == "matrices"
    assert rep.provenance["ri_presets"] == ["paper-table2"]


def test_matrix_experts_with_cost_criterion():
    m = validate_pairwise([[1, 2], [0.5, 1]], ["price", "quality"])
    crit = [CriterionSpec("price", "Price", "cost"), CriterionSpec("quality", "Quality")]
    scores = {"cheap": {"price": [1], "quality": [5]}, "dear": {"price": [9], "quality": [6]}}
    rep = run_pipeline(ExpertPanel((("e", m),)), scores, PipelineConfig(top_k=2), crit)
    assert rep.topsis.ranking.ids == ["cheap", "dear"]


def test_tie_at_cut_flagged():
    m = validate_pairwise(np.ones((3, 3)), ["x", "y", "z"])
    scores = {"p": {"x": [1], "y": [2]}, "q": {"x": [2], "y": [1]}}
    rep = run_pipeline(ExpertPanel((("e", m),)), scores, PipelineConfig(top_k=2))
    assert rep.tie_at_cut and rep.provenance["tie_at_cut"]


def test_config_validation():
    with pytest.raises(errors.ValidationError):
        PipelineConfig(top_k=0)
    with pytest.raises(errors.ValidationError):
        PipelineConfig(cr_threshold=0)
    with pytest.raises(errors.ValidationError):
        PipelineConfig(ri_preset="nope")
    with pytest.raises(errors.ValidationError):
        PipelineConfig(topsis_weights="rank")
    with pytest.raises(errors.ValidationError):
        PipelineConfig(whitening=2)
    with pytest.raises(ValueError):
        PipelineConfig(weight_method="median")
    cfg = PipelineConfig(topsis_weights=[1, 2])
    assert PipelineConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    assert dataclasses.replace(cfg, top_k=3).top_k == 3


def test_top_k_too_large(panel, scores):
    with pytest.raises(errors.KTooLarge):
        run_pipeline(panel, scores, PipelineConfig(top_k=11))


def test_weights_vector_ids_follow_selection(panel, scores):
    rep = run_pipeline(panel, scores)
    assert isinstance(rep.topsis.weights, WeightVector)
    assert rep.topsis.weights.criterion_ids == tuple(golden.TOP5)
