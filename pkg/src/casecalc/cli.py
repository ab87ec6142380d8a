"""Command-line interface: check, evaluate, dashboard, sentencing, reliability, serve.

Exit codes for ``evaluate``: 0 the case is sound and the severity gate passes;
1 it evaluates but falls short (incomplete / inductive / gate failure);
2 the argument is logically invalid; 3 I/O or document errors.
`CASECALC_CONFIG` may point at a JSON file of default flags; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import report as reporting
from .document import CaseDocument, acceptance_policy_from_flags, parse_file, serialize
from .errors import CaseError, DocumentError
from .evaluation import EvaluationParams, EvaluationReport, View, evaluate_document
from .propagation import Color, PropagationConfig
from .reliability import (
    ReliabilityScenario,
    bootstrap_schedule,
    cbi_gate,
    logspace_exposures,
    pfd,
    psrv,
    survival_table,
)

EXIT_OK = 0
EXIT_UNFINISHED = 1
EXIT_INVALID = 2
EXIT_ERROR = 3


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_env_defaults(args)
    try:
        return args.handler(args)
    except DocumentError as exc:
        for line in exc.diagnostics:
            print(f"error: {line}", file=sys.stderr)
        return EXIT_ERROR
    except CaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casecalc",
        description="Evaluate structured assurance-case arguments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="structural validity report only")
    _common_flags(check)
    check.add_argument("path")
    check.set_defaults(handler=cmd_check)

    ev = sub.add_parser("evaluate", help="full evaluation report")
    _common_flags(ev)
    ev.add_argument("path")
    ev.add_argument("--out", help="write the report here as well as printing it")
    ev.add_argument("--figures", help="directory for confidence figures (PNG)")
    ev.add_argument("--view", choices=[v.value for v in View], default=View.IGNORE_DEFEATERS.value)
    ev.set_defaults(handler=cmd_evaluate)

    dash = sub.add_parser("dashboard", help="defeater and evidence statistics")
    _common_flags(dash)
    dash.add_argument("paths", nargs="+")
    dash.set_defaults(handler=cmd_dashboard)

    sent = sub.add_parser("sentencing", help="sentencing-statement skeleton for an evaluated case")
    _common_flags(sent)
    sent.add_argument("path")
    sent.add_argument("--report", help="evaluation report (defaults to <case>.report.json)")
    sent.set_defaults(handler=cmd_sentencing)

    rel = sub.add_parser("reliability", help="confidence-to-survival bridge tables")
    rel.add_argument("--conf", type=float, required=True, help="confidence the system is nonfaulty")
    rel.add_argument("--pfif", type=float, required=True, help="failure probability per demand, given faulty")
    rel.add_argument("--n", type=float, default=0, help="future demands of exposure")
    rel.add_argument("--r", type=float, default=0, help="observed failure-free demands")
    rel.add_argument("--demand-unit", default="demand")
    rel.add_argument("--sweep-points", type=int, default=50)
    rel.add_argument("--periods", help="comma-separated per-period exposures for bootstrapping")
    rel.add_argument("--out", help="write the delimited survival table here")
    rel.add_argument("--plot", help="render the survival curve to this file (PNG)")
    rel.add_argument("--format", choices=["json", "text"], default="text")
    rel.set_defaults(handler=cmd_reliability)

    serve = sub.add_parser("serve", help="run the evaluation service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8008)
    serve.add_argument("--cors-origin", action="append", default=[])
    serve.add_argument("--session-ttl-minutes", type=float, default=60.0)
    serve.set_defaults(handler=cmd_serve)
    return parser


def _common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--rule", choices=["product", "sum-of-doubts"])
    sub.add_argument("--thresholds", help="red,amber,green cutoffs, e.g. 0.0,0.5,0.9")
    sub.add_argument("--accept-measure", help="confirmation measure for evidence acceptance")
    sub.add_argument("--accept-threshold", type=float)
    sub.add_argument("--format", choices=["json", "text"], default="json")
    sub.add_argument("--snapshot", help="evaluate this snapshot instead of the head case")
    sub.add_argument("--emit", choices=["dot"], help="also export the graph (writes <case>.dot)")


def _apply_env_defaults(args) -> None:
    config_path = os.environ.get("CASECALC_CONFIG")
    if not config_path:
        return
    try:
        defaults = json.loads(Path(config_path).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"warning: ignoring CASECALC_CONFIG ({exc})", file=sys.stderr)
        return
    for key, value in defaults.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) in (None, [], False):
            setattr(args, attr, value)


def _thresholds_from_flag(flag):
    if not flag:
        return None
    cutoffs = [float(part) for part in str(flag).split(",")]
    colors = [Color.RED, Color.AMBER, Color.GREEN]
    if len(cutoffs) > 3:
        raise CaseError("--thresholds takes at most three cutoffs (red,amber,green)")
    return tuple(zip(cutoffs, colors[3 - len(cutoffs):]))


def _params(args) -> EvaluationParams:
    return EvaluationParams(
        rule=args.rule,
        thresholds=_thresholds_from_flag(args.thresholds),
        policy=acceptance_policy_from_flags(args.accept_measure, args.accept_threshold),
        view=View(getattr(args, "view", View.IGNORE_DEFEATERS.value)),
        snapshot=args.snapshot,
    )


def _emit_dot(args, doc: CaseDocument, report: EvaluationReport | None) -> None:
    if getattr(args, "emit", None) != "dot":
        return
    colors = report.colors if report is not None else {}
    out_path = Path(args.path).with_suffix(".dot")
    out_path.write_text(reporting.to_dot(doc.case, colors), encoding="utf-8")
    print(f"wrote {out_path}", file=sys.stderr)


def cmd_check(args) -> int:
    doc = parse_file(args.path)
    result = evaluate_document(doc, _params(args))
    body = result.to_json_dict()["structure"]
    if args.format == "json":
        print(json.dumps(body, indent=2, sort_keys=True))
    else:
        for line in (
            f"logically valid: {body['logical_validity']}",
            f"case label: {body['case_label']}",
        ):
            print(line)
        for violation in body["violations"]:
            print(f"violation [{violation['rule']}] {violation['node']}: {violation['message']}")
    _emit_dot(args, doc, result)
    return EXIT_OK if body["logical_validity"] else EXIT_INVALID


def cmd_evaluate(args) -> int:
    doc = parse_file(args.path)
    result = evaluate_document(doc, _params(args))
    rendered = (
        reporting.report_json(result) if args.format == "json" else reporting.report_text(result)
    )
    print(rendered, end="")
    report_path = Path(args.out) if args.out else Path(args.path).with_suffix(".report.json")
    if args.out or report_path.parent.exists():
        report_path.write_text(reporting.report_json(result), encoding="utf-8")
    if args.figures:
        fig_dir = Path(args.figures)
        fig_dir.mkdir(parents=True, exist_ok=True)
        fig_path = fig_dir / (Path(args.path).stem + "_confidence.png")
        reporting.render_confidence_figure(result, fig_path)
        print(f"wrote {fig_path}", file=sys.stderr)
    _emit_dot(args, doc, result)
    return result.exit_code


def cmd_dashboard(args) -> int:
    out = []
    for path in args.paths:
        doc = parse_file(path)
        result = evaluate_document(doc, _params(args))
        stats = reporting.dashboard_stats(doc, result)
        stats["path"] = str(path)
        out.append(stats)
    if args.format == "json":
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        for stats in out:
            print(f"{stats['path']}: {stats['defeaters']['total']} defeaters "
                  f"({stats['defeaters']['open']} open, {stats['defeaters']['resolved']} resolved)")
            if "evidence_steps" in stats:
                print(f"  evidence steps: {stats['evidence_steps']['accepted']} accepted, "
                      f"{stats['evidence_steps']['pending']} pending")
            for delta in stats["snapshot_deltas"]:
                print(f"  snapshot {delta['from']} -> {delta['to']}: "
                      f"+{delta['nodes_added']} / -{delta['nodes_removed']} nodes")
    return EXIT_OK


def cmd_sentencing(args) -> int:
    doc = parse_file(args.path)
    report_path = Path(args.report) if args.report else Path(args.path).with_suffix(".report.json")
    if not report_path.exists():
        print(
            f"error: no evaluation found at {report_path}; run "
            f"`casecalc evaluate {args.path}` first",
            file=sys.stderr,
        )
        return EXIT_ERROR
    result = evaluate_document(doc, _params(args))
    skeleton = reporting.sentencing_skeleton(doc, result)
    if args.format == "json":
        print(json.dumps(skeleton, indent=2, sort_keys=True))
    else:
        print(reporting.sentencing_text(skeleton), end="")
    return EXIT_OK


def cmd_reliability(args) -> int:
    n = int(args.n)
    scenario = ReliabilityScenario(
        p_conf_top=args.conf, p_fif=args.pfif, n=n, r=int(args.r), demand_unit=args.demand_unit
    )
    gate = cbi_gate(scenario)
    exposures = logspace_exposures(max(n, 1), args.sweep_points) if n else []
    rows = survival_table(scenario, exposures)

    table_lines = ["n\tp_srv"]
    for exposure, p in rows:
        table_lines.append(f"{exposure}\t{p:.12g}")
    table = "\n".join(table_lines) + "\n"
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")

    summary = {
        "p_fd": pfd(scenario),
        "p_srv_n": psrv(scenario) if n else None,
        "floor": gate.floor,
        "cbi": {
            "status": gate.status.value,
            "required_r": gate.required_r,
            "observed_r": scenario.r,
        },
    }
    if args.periods:
        schedule = bootstrap_schedule(
            int(args.r), [int(p) for p in args.periods.split(",")], args.conf
        )
        summary["bootstrap"] = [
            {
                "period": row.period,
                "exposure": row.exposure,
                "prior_failure_free": row.prior_failure_free,
                "status": row.gate.status.value,
            }
            for row in schedule.periods
        ]
        summary["bootstrap_first_failure"] = schedule.first_failure

    if args.format == "json":
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"probability of failure on a demand: {summary['p_fd']:.6g}")
        if summary["p_srv_n"] is not None:
            print(f"survival over n={n} {args.demand_unit}s: {summary['p_srv_n']:.6g} "
                  f"(floor {gate.floor:g})")
        print(f"cbi gate: {gate.status.value} "
              f"(needs confidence > 0.9 and r > {gate.required_r:g}; r = {scenario.r})")
        if "bootstrap" in summary:
            for row in summary["bootstrap"]:
                print(f"  period {row['period']}: n={row['exposure']} "
                      f"r={row['prior_failure_free']} -> {row['status']}")
        if not args.out:
            print(table, end="")
    if args.plot:
        reporting.render_survival_figure(rows, gate.floor, args.plot, args.demand_unit)
        print(f"wrote {args.plot}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cors_origins=args.cors_origin, session_ttl_minutes=args.session_ttl_minutes)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
