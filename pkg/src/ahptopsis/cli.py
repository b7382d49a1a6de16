"""Command-line interface.

Exit codes: 0 success, 1 unreadable/malformed file, 2 validation error,
3 consistency-gate failure, 4 pipeline succeeded but a tie straddles the
top-k criterion cut.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import __version__, errors
from .ahp import RI_PRESETS, aggregate_expert_priorities, rank_criteria
from .chart import CHARTS, chart_from_report
from .model import WeightVector
from .pipeline import PipelineConfig, consistency_gate, evaluate_panel
from .project import load_project, load_report, run_project, write_bytes_atomic, write_text_atomic
from .render import render_consistency, render_pipeline, render_topsis, render_weights
from .topsis import equal_weights, run_topsis, whiten_scores

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_GATE, EXIT_TIE = 0, 1, 2, 3, 4


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _parse_weights(values):
    if values is None:
        return None
    policy = values[0]
    if policy in ("equal", "ahp"):
        if len(values) != 1:
            raise errors.ValidationError(f"--weights {policy} takes no values")
        return policy
    if policy != "custom" or len(values) != 2:
        raise errors.ValidationError("--weights must be 'equal', 'ahp' or 'custom W1,W2,...'")
    return [float(x) for x in values[1].split(",")]


def _config(proj, args) -> PipelineConfig:
    over = {}
    mapping = {
        "ri_preset": "ri_preset",
        "cr_threshold": "cr_threshold",
        "custom_ri": "custom_ri",
        "method": "weight_method",
        "aggregate": "aggregation",
        "top_k": "top_k",
        "whitening": "whitening",
    }
    for arg, fld in mapping.items():
        val = getattr(args, arg, None)
        if val is not None:
            over[fld] = val
    if getattr(args, "warnings_only", False):
        over["warnings_only"] = True
    w = _parse_weights(getattr(args, "weights", None))
    if w is not None:
        over["topsis_weights"] = w
    if "whitening" in over and over["whitening"] != "mean":
        over["whitening"] = float(over["whitening"])
    return dataclasses.replace(proj.config, **over)


def _fmt(args):
    return getattr(args, "format", None) or "human"


def cmd_validate(args, out) -> int:
    proj = load_project(args.path)
    cfg = _config(proj, args)
    human = _fmt(args) == "human"
    if human:
        print(f"{args.path}: {len(proj.criteria)} criteria, {len(proj.alternatives)} alternatives", file=out)
    if proj.panel is None:
        if human:
            print("no experts declared", file=out)
        else:
            out.write(_dump({"path": str(args.path), "threshold": cfg.cr_threshold, "experts": []}))
        return EXIT_OK
    experts = evaluate_panel(proj.panel, cfg)
    failures = []
    judgments = dict(proj.panel.experts)
    records = []
    for e in experts:
        if e.source == "matrix":
            resid = judgments[e.expert_id].reciprocity_residual()
            c = e.consistency
            status = "acceptable" if c.acceptable else "NOT acceptable"
            line = (
                f"expert {e.expert_id}: reciprocity max residual {resid:.2e}; "
                f"lambda_max {c.lambda_max:.4f}, CI {c.ci:.4f}, CR {c.cr:.4f} "
                f"(RI {c.ri} from {c.ri_preset}) {status}"
            )
        else:
            resid = None
            status = "acceptable" if e.passes(cfg.cr_threshold) else "NOT acceptable"
            line = f"expert {e.expert_id}: priorities supplied; CR {e.cr:.4f} (taken on trust) {status}"
        if not e.passes(cfg.cr_threshold):
            failures.append(e.expert_id)
        records.append({"expert_id": e.expert_id, "reciprocity_residual": resid, "cr": e.cr, "status": status})
        if human:
            print(line, file=out)
    if not human:
        out.write(_dump({"path": str(args.path), "threshold": cfg.cr_threshold, "experts": records}))
    if failures:
        print(f"consistency gate failed for: {', '.join(failures)}", file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


def cmd_ahp(args, out) -> int:
    proj = load_project(args.path)
    if proj.panel is None:
        raise errors.ValidationError("project has no experts")
    cfg = _config(proj, args)
    experts = evaluate_panel(proj.panel, cfg)
    consistency_gate(experts, cfg)
    agg = aggregate_expert_priorities([e.priorities for e in experts], cfg.aggregation, proj.panel.expert_weights)
    ranking = rank_criteria(agg)
    doc = {
        "config": cfg.to_dict(),
        "criteria": [c.to_dict() for c in proj.criteria],
        "experts": [e.to_dict() for e in experts],
        "aggregated": agg.to_dict(),
        "criteria_ranking": ranking.to_dict(),
    }
    if _fmt(args) == "structured":
        out.write(_dump(doc))
    else:
        out.write(render_consistency(doc["experts"]) + "\n\n")
        out.write(render_weights(doc["criteria"], doc["experts"], doc["aggregated"], doc["criteria_ranking"]) + "\n")
    return EXIT_OK


def cmd_topsis(args, out) -> int:
    proj = load_project(args.path)
    cfg = _config(proj, args)
    tie = False
    if proj.panel is not None:
        report = run_project(proj, cfg)
        trace, tie = report.topsis, report.tie_at_cut
    else:
        if not proj.alternatives:
            raise errors.ValidationError("project declares no alternatives")
        d = whiten_scores(proj.scores, proj.alternatives, proj.criteria, cfg.whitening, proj.alternative_labels)
        tw = cfg.topsis_weights
        if tw == "equal":
            w = equal_weights(d)
        elif tw == "ahp":
            raise errors.ValidationError("--weights ahp needs experts in the project")
        else:
            vals = np.asarray(tw, dtype=float)
            if vals.size != len(d.criteria):
                raise errors.DimensionMismatch(f"{vals.size} custom weights for {len(d.criteria)} criteria")
            w = WeightVector(vals / vals.sum(), d.criterion_ids)
        trace = run_topsis(d, w)
    doc = trace.to_dict()
    if _fmt(args) == "structured":
        out.write(_dump(doc))
    else:
        out.write(render_topsis(doc, full=args.trace) + "\n")
    return EXIT_TIE if tie else EXIT_OK


def cmd_pipeline(args, out) -> int:
    proj = load_project(args.path)
    cfg = _config(proj, args)
    report = run_project(proj, cfg)
    text = report.to_json()
    if args.out:
        write_text_atomic(args.out, text)
    if _fmt(args) == "structured":
        out.write(text)
    else:
        out.write(render_pipeline(json.loads(text), full=args.trace))
    return EXIT_TIE if report.tie_at_cut else EXIT_OK


def cmd_chart(args, out) -> int:
    report = load_report(args.report)
    svg = chart_from_report(report.to_dict(), args.which)
    write_bytes_atomic(args.out, svg)
    print(f"wrote {args.out}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ri-preset", choices=sorted(RI_PRESETS), default=argparse.SUPPRESS)
    common.add_argument("--ri", dest="custom_ri", type=float, default=argparse.SUPPRESS,
                        help="explicit random index, overriding the preset")
    common.add_argument("--cr-threshold", type=float, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=["human", "structured"], default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="ahptopsis", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def ahp_flags(sp):
        sp.add_argument("--method", choices=["row-average", "eigenvector"])
        sp.add_argument("--aggregate", choices=["arithmetic", "geometric"])
        sp.add_argument("--warnings-only", action="store_true", help="report but do not enforce the CR gate")

    def topsis_flags(sp):
        sp.add_argument("--weights", nargs="+", metavar="POLICY",
                        help="equal | ahp | custom W1,W2,...")
        sp.add_argument("--whitening", help="'mean' or a whitening coefficient in [0, 1]")
        sp.add_argument("--top-k", type=int)
        sp.add_argument("--trace", action="store_true", help="print every TOPSIS stage table")

    sp = sub.add_parser("validate", parents=[common], help="check reciprocity and consistency")
    sp.add_argument("path")
    sp.add_argument("--method", choices=["row-average", "eigenvector"])
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("ahp", parents=[common], help="expert weights and consistency table")
    sp.add_argument("path")
    ahp_flags(sp)
    sp.set_defaults(func=cmd_ahp)

    sp = sub.add_parser("topsis", parents=[common], help="rank alternatives")
    sp.add_argument("path")
    ahp_flags(sp)
    topsis_flags(sp)
    sp.set_defaults(func=cmd_topsis)

    sp = sub.add_parser("pipeline", parents=[common], help="full two-phase run")
    sp.add_argument("path")
    sp.add_argument("--out", help="write the structured report here")
    ahp_flags(sp)
    topsis_flags(sp)
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("chart", help="SVG bar chart from a saved pipeline report")
    sp.add_argument("report")
    sp.add_argument("--which", choices=sorted(CHARTS), required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_chart)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except errors.ProjectFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except errors.ConsistencyGateFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GATE
    except (errors.ValidationError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
