"""Report rendering: JSON/text reports, DOT export, dashboard statistics,
the sentencing skeleton, and figure output for the report path."""

from __future__ import annotations

import json
from typing import Optional

from .defeaters import Label
from .document import CaseDocument
from .evaluation import EvaluationReport
from .graph import CaseGraph, LinkKind, NodeKind, Resolution, Severity
from .structure import CaseLabel

_KIND_SHAPES = {
    NodeKind.CLAIM: "box",
    NodeKind.ARGUMENT_STEP: "ellipse",
    NodeKind.EVIDENCE: "cylinder",
    NodeKind.DEFEATER: "octagon",
    NodeKind.SUBCASE_NOTE: "note",
    NodeKind.COMMENT: "plaintext",
}


def report_json(report: EvaluationReport) -> str:
    return json.dumps(report.to_json_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report_text(report: EvaluationReport) -> str:
    body = report.to_json_dict()
    lines = []
    title = body["case"]["title"] or body["case"]["top_claim"]
    lines.append(f"case: {title}")
    lines.append(f"label: {body['structure']['case_label']}")
    lines.append("")
    lines.append("structure")
    lines.append(f"  logically valid: {_yn(body['structure']['logical_validity'])}")
    for violation in body["structure"]["violations"]:
        lines.append(f"  violation [{violation['rule']}] {violation['node']}: {violation['message']}")
    lines.append(f"  unsupported claims: {_csv(body['structure']['unsupported_claims'])}")
    lines.append(f"  inductive steps: {_csv(body['structure']['inductive_steps'])}")
    lines.append(f"  active defeaters: {_csv(body['structure']['active_defeaters'])}")
    lines.append(f"  fully valid: {_yn(body['structure']['fully_valid'])}")
    lines.append(f"  sound: {_yn(body['structure']['sound'])}")
    lines.append("")
    lines.append("evidence weight "
                 f"(policy: {body['confirmation']['policy']['measure']} >= "
                 f"{body['confirmation']['policy']['threshold']:.6g})")
    for step, record in body["confirmation"]["steps"].items():
        verdict = "accepted" if record["accepted"] else "not accepted"
        lines.append(f"  {step}: {verdict} ({record['source']})")
        for diag in record.get("diagnostics", []):
            lines.append(f"    note: {diag}")
    lines.append("")
    lines.append(f"confidence ({body['confidence']['rule']}, view {body['confidence']['view']})")
    for node, entry in body["confidence"]["values"].items():
        override = " *override*" if entry["origin"] == "manual_override" else ""
        lines.append(f"  {node}: {entry['value']:.6g} [{entry['color']}]{override}")
    top = body["confidence"]["top"]["value"]
    if top is not None:
        lines.append(f"  top claim {body['case']['top_claim']}: {top:.6g}")
    lines.append("")
    if body["labeling"]:
        lines.append("defeater labeling")
        for node, label in body["labeling"].items():
            lines.append(f"  {node}: {label}")
        lines.append("")
    lines.append(f"residual doubt bound: {body['residual']['bound']:.6g}")
    for category, total in body["residual"]["per_category"].items():
        lines.append(f"  {category}: {total:.6g}")
    lines.append("")
    lines.append(f"severity gate: {body['severity']['gate']}")
    for reason in body["severity"]["gate_reasons"]:
        lines.append(f"  {reason}")
    for diag in body["diagnostics"]:
        lines.append(f"note: {diag}")
    lines.append(f"exit code: {body['exit_code']}")
    return "\n".join(lines) + "\n"


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _csv(items) -> str:
    return ", ".join(items) if items else "(none)"


# --- DOT export ------------------------------------------------------------------


def to_dot(graph: CaseGraph, colors: Optional[dict] = None) -> str:
    """Directed-graph text: logical links solid, embedded links gray and
    reversed (they are narrative, not logical), attack links dashed."""
    colors = colors or {}
    lines = ["digraph case {", "  rankdir=BT;"]
    for node_id in sorted(graph.nodes):
        node = graph.node(node_id)
        attrs = [f'shape={_KIND_SHAPES[node.kind]}']
        label = node_id if not node.narrative else f"{node_id}\\n{_trim(node.narrative)}"
        attrs.append(f'label="{label}"')
        color = colors.get(node_id)
        if color is not None:
            value = color.value if hasattr(color, "value") else str(color)
            attrs.append(f'style=filled fillcolor="{_FILL[value]}"')
        lines.append(f'  "{node_id}" [{" ".join(attrs)}];')
    for link in sorted(graph.links, key=lambda l: (l.kind.value, l.source, l.target)):
        if link.kind == LinkKind.LOGICAL:
            lines.append(f'  "{link.source}" -> "{link.target}";')
        elif link.kind == LinkKind.EMBEDDED:
            lines.append(f'  "{link.target}" -> "{link.source}" [color=gray constraint=false];')
        else:
            lines.append(f'  "{link.source}" -> "{link.target}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


_FILL = {"red": "#f4cccc", "amber": "#fff2cc", "green": "#d9ead3"}


def _trim(text: str, limit: int = 40) -> str:
    text = text.replace('"', "'").replace("\n", " ")
    return text if len(text) <= limit else text[: limit - 1] + "…"


# --- dashboard --------------------------------------------------------------------


def dashboard_stats(doc: CaseDocument, report: Optional[EvaluationReport] = None) -> dict:
    graph = doc.case
    defeater_nodes = [graph.node(d) for d in sorted(graph.defeaters())]
    by_resolution = {r.value: 0 for r in Resolution}
    by_severity = {s.value: 0 for s in Severity}
    by_phase = {"development": 0, "assessment": 0, "untagged": 0}
    for node in defeater_nodes:
        by_resolution[(node.resolution or Resolution.OPEN).value] += 1
        by_severity[(node.severity or Severity.DEFAULT).value] += 1
        phase = doc.metadata.phase_tags.get(node.id, "untagged")
        by_phase[phase if phase in by_phase else "untagged"] += 1
    resolved = sum(
        count for name, count in by_resolution.items() if name != Resolution.OPEN.value
    )

    stats = {
        "title": doc.metadata.title,
        "defeaters": {
            "total": len(defeater_nodes),
            "open": by_resolution[Resolution.OPEN.value],
            "resolved": resolved,
            "by_resolution": by_resolution,
            "by_severity": by_severity,
            "by_phase": by_phase,
        },
        "snapshots": [label for label, _ in graph.snapshots],
        "snapshot_deltas": _snapshot_deltas(graph),
    }
    if report is not None:
        body = report.to_json_dict()
        accepted = sum(1 for r in body["confirmation"]["steps"].values() if r["accepted"])
        pending = len(body["confirmation"]["steps"]) - accepted
        by_color = {}
        for entry in body["confidence"]["values"].values():
            by_color[entry["color"]] = by_color.get(entry["color"], 0) + 1
        stats["evidence_steps"] = {"accepted": accepted, "pending": pending}
        stats["nodes_by_color"] = dict(sorted(by_color.items()))
    return stats


def _snapshot_deltas(graph: CaseGraph) -> list:
    deltas = []
    previous = None
    for label, frozen in graph.snapshots:
        if previous is not None:
            deltas.append({
                "from": previous[0],
                "to": label,
                "nodes_added": len(set(frozen.nodes) - set(previous[1].nodes)),
                "nodes_removed": len(set(previous[1].nodes) - set(frozen.nodes)),
            })
        previous = (label, frozen)
    if previous is not None:
        deltas.append({
            "from": previous[0],
            "to": "(head)",
            "nodes_added": len(set(graph.nodes) - set(previous[1].nodes)),
            "nodes_removed": len(set(previous[1].nodes) - set(graph.nodes)),
        })
    return deltas


# --- sentencing -------------------------------------------------------------------

SENTENCING_BULLETS = (
    ("context", "I understand the context and criticality of the decision"),
    ("system", "I understand the system"),
    ("reasoning", "I find a clear thread of reasoning from evidence to claims"),
    ("evidence", "The evidence provided is sufficient to support evidence-based decision making"),
    ("doubts", "I have actively explored doubts and challenges"),
    ("disproof", "I have identified what evidence would be capable of disproving the claims"),
    ("biases", "I have considered and addressed biases and fallacies"),
)


def sentencing_skeleton(doc: CaseDocument, report: EvaluationReport) -> dict:
    """Machine-annotated checklist for the evaluator's concluding statement.

    Engine data pre-fills whatever is machine-checkable; judgment fields stay
    blank for the human.
    """
    body = report.to_json_dict()
    stats = dashboard_stats(doc, report)
    total_defeaters = stats["defeaters"]["total"]
    accepted = body["confirmation"]["steps"]
    accepted_count = sum(1 for r in accepted.values() if r["accepted"])

    annotations = {
        "context": {"status": "judgment", "detail": ""},
        "system": {"status": "judgment", "detail": ""},
        "reasoning": {
            "status": "satisfied" if body["structure"]["logical_validity"] else "unsupported",
            "detail": f"logical validity: {_yn(body['structure']['logical_validity'])}; "
                      f"case label: {body['structure']['case_label']}",
        },
        "evidence": {
            "status": "satisfied" if accepted and accepted_count == len(accepted) else "unsupported",
            "detail": f"{accepted_count} of {len(accepted)} evidence-incorporation steps accepted",
        },
        "doubts": {
            "status": "satisfied" if total_defeaters > 0 else "unsupported",
            "detail": (
                f"{total_defeaters} defeaters recorded "
                f"({stats['defeaters']['resolved']} resolved, {stats['defeaters']['open']} open)"
                if total_defeaters else
                "no defeaters were ever recorded; active exploration of doubts is not in evidence"
            ),
        },
        "disproof": {"status": "judgment", "detail": ""},
        "biases": {
            "status": "satisfied" if total_defeaters > 0 else "judgment",
            "detail": "defeater record available for dialectical review" if total_defeaters else "",
        },
    }
    items = []
    for key, text in SENTENCING_BULLETS:
        entry = {"key": key, "text": text}
        entry.update(annotations[key])
        items.append(entry)
    return {
        "title": doc.metadata.title,
        "verdict_heading": "On the basis of this assurance case and an examination of other "
                           "relevant documentation, I judge the proposed system to be ...",
        "verdict": "",
        "case_label": body["structure"]["case_label"],
        "severity_gate": body["severity"]["gate"],
        "items": items,
    }


def sentencing_text(skeleton: dict) -> str:
    lines = [skeleton["verdict_heading"], ""]
    lines.append(f"[case label: {skeleton['case_label']}; severity gate: {skeleton['severity_gate']}]")
    lines.append("")
    lines.append("I believe my judgment of this case is sound and valid because ...")
    markers = {"satisfied": "[x]", "unsupported": "[!]", "judgment": "[ ]"}
    for item in skeleton["items"]:
        lines.append(f"  {markers[item['status']]} {item['text']} ...")
        if item["detail"]:
            lines.append(f"        engine: {item['detail']}")
    lines.append("")
    lines.append("judgment: ____________________________________________")
    return "\n".join(lines) + "\n"


# --- figures -------------------------------------------------------------------------


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_confidence_figure(report: EvaluationReport, path) -> None:
    """Bar chart of per-node confidence in traffic-light colors."""
    plt = _pyplot()
    body = report.to_json_dict()
    entries = body["confidence"]["values"]
    names = sorted(entries)
    values = [entries[n]["value"] for n in names]
    bar_colors = [_BAR[entries[n]["color"]] for n in names]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.45 * len(names) + 1.5), 3.2))
    ax.bar(range(len(names)), values, color=bar_colors, edgecolor="#444444")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("confidence")
    ax.set_title(body["case"]["title"] or body["case"]["top_claim"])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


_BAR = {"red": "#cc4125", "amber": "#f1c232", "green": "#6aa84f"}


def render_survival_figure(rows, floor: float, path, demand_unit: str = "demand") -> None:
    """Survival curve over exposure with the confidence floor marked."""
    plt = _pyplot()
    ns = [n for n, _ in rows]
    ps = [p for _, p in rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(ns, ps, marker=".", color="#3d6fb4", label="survival probability")
    ax.axhline(floor, color="#cc4125", linestyle="--", label=f"floor {floor:g}")
    if ns and max(ns) / max(1, min(ns)) > 100:
        ax.set_xscale("log")
    ax.set_xlabel(f"exposure ({demand_unit}s)")
    ax.set_ylabel("probability of surviving n demands")
    ax.set_ylim(0.0, 1.02)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
