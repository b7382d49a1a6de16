"""Plain-text tables for the CLI.

Every function here reads the structured (dict) form of a result, so a human
table re-rendered from a saved report is identical to the original.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal


def fmt3(x) -> str:
    """Three decimals, half-up on the shortest decimal repr of ``x``."""
    if x is None:
        return "n/a"
    return str(Decimal(repr(float(x))).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def table(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = []
    for n, r in enumerate(cells):
        parts = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(parts).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _labels(d):
    return {c["id"]: c.get("label", c["id"]) for c in d}


def render_consistency(experts) -> str:
    rows = []
    for e in experts:
        c = e.get("consistency")
        if c is None:
            rows.append([e["expert_id"], e["source"], "n/a", "n/a", "n/a", fmt3(e["cr"]), "supplied", "-"])
        else:
            rows.append(
                [
                    e["expert_id"],
                    e["source"],
                    fmt3(c["lambda_max"]),
                    fmt3(c["ci"]),
                    fmt3(c["ri"]),
                    fmt3(c["cr"]),
                    c["ri_preset"],
                    "yes" if c["acceptable"] else "NO",
                ]
            )
    return table(["expert", "input", "lambda_max", "CI", "RI", "CR", "RI preset", "ok"], rows)


def render_weights(criteria, experts, aggregated, ranking) -> str:
    labels = _labels(criteria) if criteria else {}
    ids = aggregated["criterion_ids"]
    ranks = {e["id"]: e["rank"] for e in ranking["entries"]}
    per = [dict(zip(e["priorities"]["criterion_ids"], e["priorities"]["weights"])) for e in experts]
    agg = dict(zip(ids, aggregated["weights"]))
    header = ["criterion"] + [e["expert_id"] for e in experts] + ["weight", "rank"]
    rows = [[labels.get(c, c)] + [fmt3(p[c]) for p in per] + [fmt3(agg[c]), ranks[c]] for c in ids]
    return table(header, rows)


def render_ranking(ranking, labels=None, score_name="score") -> str:
    labels = labels or {}
    rows = [[e["rank"], labels.get(e["id"], e["id"]), fmt3(e["score"])] for e in ranking["entries"]]
    out = table(["rank", "id", score_name], rows)
    for g in ranking.get("tie_groups", []):
        out += "\ntie: " + ", ".join(g)
    return out


def render_topsis(trace, full=False) -> str:
    inp = trace["input"]
    alt_labels = dict(zip(inp["alternatives"], inp.get("alternative_labels") or inp["alternatives"]))
    crit = [c.get("label", c["id"]) for c in inp["criteria"]]
    alts = [alt_labels[a] for a in inp["alternatives"]]
    parts = []

    def grid(title, g):
        parts.append(title)
        parts.append(table([""] + crit, [[a] + [fmt3(x) for x in row] for a, row in zip(alts, g)]))

    if full:
        grid("Decision matrix", inp["scores"])
        parts.append("Weights: " + ", ".join(f"{c}={fmt3(w)}" for c, w in zip(crit, trace["weights"]["weights"])))
        grid("Normalized matrix", trace["normalized"])
        grid("Weighted normalized matrix", trace["weighted"])
        parts.append("Ideal values")
        parts.append(
            table(
                ["criterion", "positive ideal", "negative ideal"],
                [[c, fmt3(p), fmt3(n)] for c, p, n in zip(crit, trace["ideal_pos"], trace["ideal_neg"])],
            )
        )
        parts.append("Separation measures")
        parts.append(
            table(
                ["alternative", "d+", "d-"],
                [[a, fmt3(p), fmt3(n)] for a, p, n in zip(alts, trace["sep_pos"], trace["sep_neg"])],
            )
        )
    ranks = {e["id"]: e["rank"] for e in trace["ranking"]["entries"]}
    parts.append("Closeness and ranking")
    parts.append(
        table(
            ["alternative", "C", "rank"],
            [[alt_labels[a], fmt3(c), ranks[a]] for a, c in zip(inp["alternatives"], trace["closeness"])],
        )
    )
    for g in trace["ranking"].get("tie_groups", []):
        parts.append("tie: " + ", ".join(g))
    return "\n\n".join(parts)


def render_pipeline(report, full=False) -> str:
    prov = report.get("provenance", {})
    parts = [
        f"ahptopsis {prov.get('version', '?')}  inputs: {prov.get('inputs', '?')}",
        "Expert consistency",
        render_consistency(report["experts"]),
        "Criteria weights",
        render_weights(report.get("criteria", []), report["experts"], report["aggregated"], report["criteria_ranking"]),
        "Selected criteria: " + ", ".join(report["selected"]),
    ]
    gate = prov.get("gate", {})
    if gate.get("bypassed"):
        parts.append(
            "WARNING consistency gate bypassed for: "
            + ", ".join(f"{b['expert_id']} (CR={fmt3(b['cr'])})" for b in gate["bypassed"])
        )
    if report.get("tie_at_cut"):
        parts.append("WARNING a tie group straddles the top-k cut; selection used input order")
    parts.append(render_topsis(report["topsis"], full=full))
    return "\n\n".join(parts) + "\n"
