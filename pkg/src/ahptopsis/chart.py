"""Static SVG bar charts of criterion weights and alternative closeness."""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import errors  # noqa: E402
from .render import fmt3  # noqa: E402

CHARTS = {
    "weights": "Ranking of criteria (AHP weight)",
    "closeness": "Ranking of alternatives (TOPSIS closeness)",
}


def chart_series(report: dict, which: str):
    """(labels, values) sorted by rank for one chart kind, from a report dict."""
    if which not in CHARTS:
        raise errors.UnknownReportField(f"unknown chart {which!r}; choose from {sorted(CHARTS)}")
    try:
        if which == "weights":
            ranking = report["criteria_ranking"]
            labels = {c["id"]: c.get("label", c["id"]) for c in report.get("criteria", [])}
        else:
            ranking = report["topsis"]["ranking"]
            inp = report["topsis"]["input"]
            labels = dict(zip(inp["alternatives"], inp.get("alternative_labels") or inp["alternatives"]))
        entries = sorted(ranking["entries"], key=lambda e: e["rank"])
        return [labels.get(e["id"], e["id"]) for e in entries], [float(e["score"]) for e in entries]
    except (KeyError, TypeError) as exc:
        raise errors.UnknownReportField(f"report lacks the data for a {which} chart: {exc}") from None


def bar_chart_svg(labels, values, title="") -> bytes:
    """Horizontal bars, first item on top; the largest bar spans the full axis."""
    n = len(values)
    if n == 0:
        raise errors.ValidationError("nothing to chart")
    with plt.rc_context({"svg.hashsalt": "ahptopsis", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7.0, 0.45 * n + 1.2))
        ys = list(range(n))[::-1]
        ax.barh(ys, values, height=0.7, color="#4c72b0")
        top = max(values) if max(values) > 0 else 1.0
        ax.set_xlim(0, top)
        ax.set_yticks(ys)
        ax.set_yticklabels(labels)
        for y, v in zip(ys, values):
            inside = v > 0.25 * top
            ax.text(
                v - 0.01 * top if inside else v + 0.01 * top,
                y,
                fmt3(v),
                va="center",
                ha="right" if inside else "left",
                color="white" if inside else "black",
                fontsize=9,
            )
        if title:
            ax.set_title(title)
        for side in ("top", "right"):
            ax.spines[side].set_visible(False)
        fig.tight_layout()
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def chart_from_report(report: dict, which: str) -> bytes:
    labels, values = chart_series(report, which)
    return bar_chart_svg(labels, values, CHARTS[which])
