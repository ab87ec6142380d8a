"""End-to-end evaluation: structure, evidence weight, confidence, labeling,
residual doubt, and severity, folded into one deterministic report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from . import confirmation, defeaters, propagation, structure
from .confirmation import ThresholdPolicy
from .defeaters import Label
from .document import CaseDocument
from .errors import (
    InconsistentElicitation,
    InsufficientFields,
    MissingLeafAssignment,
    SingularInput,
)
from .graph import BlockKind, CaseGraph, NodeKind, Resolution
from .propagation import Origin, PropagationConfig, Rule


class View(str, Enum):
    IGNORE_DEFEATERS = "ignore_defeaters"
    APPLY_DEFEATERS = "apply_defeaters"


@dataclass(frozen=True)
class EvaluationParams:
    rule: Optional[str] = None            # overrides the document's propagation rule
    thresholds: Optional[tuple] = None
    policy: ThresholdPolicy = field(default_factory=ThresholdPolicy)
    view: View = View.IGNORE_DEFEATERS
    defeat_value: float = 0.0             # confidence assigned to defeated nodes
    snapshot: Optional[str] = None


@dataclass
class EvaluationReport:
    case_title: str
    top_claim: str
    structure: structure.StructuralReport
    confirmation: dict          # EI step id -> acceptance record dict
    policy: ThresholdPolicy
    valuation: Optional[propagation.ValuationResult]
    colors: dict
    labeling: defeaters.Labeling
    residual_bound: float
    residual_per_category: dict
    severity: defeaters.SeverityReport
    view: View
    diagnostics: tuple = ()

    @property
    def exit_code(self) -> int:
        if not self.structure.logical_validity:
            return 2
        if self.structure.case_label == structure.CaseLabel.SOUND and self.severity.gate_passes:
            return 0
        return 1

    def to_json_dict(self) -> dict:
        conf_section = {
            step: dict(record) for step, record in sorted(self.confirmation.items())
        }
        values = {}
        if self.valuation is not None:
            for node_id in sorted(self.valuation.assignments):
                a = self.valuation.assignments[node_id]
                values[node_id] = {
                    "value": a.value,
                    "raw": a.raw,
                    "origin": a.origin.value,
                    "note": a.override_note,
                    "pre_override": a.pre_override,
                    "color": self.colors.get(node_id, propagation.Color.RED).value,
                }
        return {
            "case": {"title": self.case_title, "top_claim": self.top_claim},
            "structure": {
                "logical_validity": self.structure.logical_validity,
                "violations": [
                    {"node": v.node, "rule": v.rule, "message": v.message}
                    for v in self.structure.violations
                ],
                "unsupported_claims": list(self.structure.unsupported_claims),
                "inductive_steps": list(self.structure.inductive_steps),
                "active_defeaters": list(self.structure.active_defeaters),
                "fully_valid": self.structure.fully_valid,
                "sound": self.structure.sound,
                "case_label": self.structure.case_label.value,
            },
            "confirmation": {
                "policy": {
                    "measure": self.policy.measure.value,
                    "threshold": self.policy.threshold,
                },
                "steps": conf_section,
            },
            "confidence": {
                "rule": self._rule(),
                "view": self.view.value,
                "values": values,
                "top": {
                    "node": self.top_claim,
                    "value": values.get(self.top_claim, {}).get("value"),
                },
            },
            "labeling": {
                node: label.value for node, label in sorted(self.labeling.labels.items())
            },
            "residual": {
                "bound": self.residual_bound,
                "per_category": dict(sorted(self.residual_per_category.items())),
            },
            "severity": {
                "open_by_severity": self.severity.open_by_severity,
                "residual_by_severity": self.severity.residual_by_severity,
                "must_eliminate": list(self.severity.must_eliminate),
                "minor_category_totals": dict(sorted(self.severity.category_totals.items())),
                "manageable": dict(sorted(self.severity.manageable.items())),
                "gate": "pass" if self.severity.gate_passes else "fail",
                "gate_reasons": list(self.severity.gate_reasons),
            },
            "diagnostics": list(self.diagnostics),
            "exit_code": self.exit_code,
        }

    def _rule(self) -> str:
        return self.valuation.config.rule if self.valuation else Rule.PRODUCT.value


def evaluate_document(
    doc: CaseDocument,
    params: Optional[EvaluationParams] = None,
    extra_overrides: Optional[dict] = None,
) -> EvaluationReport:
    """Run the whole assessment pipeline on one document.

    ``extra_overrides`` (node -> (value, note)) come from interactive
    sessions; the apply-defeaters view folds out-labeled nodes into
    overrides before valuation.
    """
    params = params or EvaluationParams()
    graph = doc.case
    if params.snapshot is not None:
        graph = graph.get_snapshot(params.snapshot)

    diagnostics = []

    # evidence weight: measure acceptance per evidence-incorporation step
    accepted_steps = set()
    conf_records = {}
    ei_steps = sorted(
        n.id for n in graph.nodes.values()
        if n.kind == NodeKind.ARGUMENT_STEP and n.block == BlockKind.EVIDENCE_INCORPORATION
    )
    for step_id in ei_steps:
        record = {"accepted": False, "source": "none", "measures": [], "diagnostics": []}
        assessment = doc.assessments.get(step_id)
        if assessment is not None:
            try:
                result = confirmation.accept_evidence(assessment, params.policy)
                record["accepted"] = result.accepted
                record["source"] = "measure"
                record["measures"] = [
                    {
                        "measure": r.measure.value,
                        "value": _json_number(r.value),
                        "defined": r.defined,
                        "note": r.note,
                    }
                    for r in result.results
                ]
            except InconsistentElicitation as exc:
                record["diagnostics"].append(str(exc))
                diagnostics.append(f"{step_id}: inconsistent elicitation: {exc}")
            except (InsufficientFields, SingularInput) as exc:
                # the policy measure is not computable from the supplied fields
                record["diagnostics"].append(str(exc))
                diagnostics.append(f"{step_id}: acceptance policy not computable: {exc}")
        else:
            record["diagnostics"].append("no evidence assessment supplied")
        override = doc.evidence_overrides.get(step_id)
        if override is not None:
            record["accepted"] = override.accepted
            record["source"] = "human_override"
            record["override_note"] = override.note
        if record["accepted"]:
            accepted_steps.add(step_id)
        conf_records[step_id] = record

    # structure: validity, full validity, soundness
    residual_accepted = {
        n.id for n in graph.nodes.values()
        if n.kind == NodeKind.DEFEATER and n.resolution == Resolution.ACCEPTED_RESIDUAL
    }
    residual_accepted |= {d for d in doc.ledger.accepted_defeaters() if d in graph}
    report = structure.check_full_validity(graph, residual_accepted)
    report = structure.check_soundness(graph, report, accepted_steps)

    # defeater labeling, and the two views
    labeling = defeaters.label(graph)

    cfg = doc.propagation
    if params.rule is not None:
        cfg = PropagationConfig(
            rule=params.rule, factors=cfg.factors, thresholds=cfg.thresholds, clamp=cfg.clamp
        )
    if params.thresholds is not None:
        cfg = PropagationConfig(
            rule=cfg.rule, factors=cfg.factors, thresholds=params.thresholds, clamp=cfg.clamp
        )

    leaves = _leaves_with_assessment_defaults(doc, graph)
    overrides = dict(extra_overrides or {})
    if params.view == View.APPLY_DEFEATERS:
        for node, pair in defeaters.defeat_overrides(graph, labeling, params.defeat_value).items():
            overrides.setdefault(node, pair)

    valuation = None
    colors = {}
    if report.logical_validity:
        try:
            valuation = propagation.propagate(graph, leaves, cfg, overrides)
            colors = valuation.colors()
            diagnostics.extend(valuation.diagnostics)
        except MissingLeafAssignment as exc:
            diagnostics.append(str(exc))
    else:
        diagnostics.append("probabilistic valuation skipped: the graph is logically invalid")

    bound, per_category = defeaters.residual_bound(doc.ledger)
    severity = defeaters.severity_report(graph, doc.ledger)

    return EvaluationReport(
        case_title=doc.metadata.title,
        top_claim=graph.top_claim,
        structure=report,
        confirmation=conf_records,
        policy=params.policy,
        valuation=valuation,
        colors=colors,
        labeling=labeling,
        residual_bound=bound,
        residual_per_category=per_category,
        severity=severity,
        view=params.view,
        diagnostics=tuple(diagnostics),
    )


def _leaves_with_assessment_defaults(doc: CaseDocument, graph: CaseGraph) -> list:
    """Confidence inputs, plus evidence values derived from assessments.

    When a single-evidence incorporation step carries an assessment and its
    evidence node has no explicit input, the posterior from the assessment is
    the natural confidence for the propagated claim.
    """
    leaves = {a.node: a for a in doc.confidence_inputs if a.node in graph}
    for step_id, assessment in doc.assessments.items():
        if step_id not in graph or assessment.p_c_given_e is None:
            continue
        node = graph.node(step_id)
        if node.kind != NodeKind.ARGUMENT_STEP or node.block != BlockKind.EVIDENCE_INCORPORATION:
            continue
        evidence_children = [
            c for c in graph.logical_children(step_id)
            if graph.node(c).kind == NodeKind.EVIDENCE
        ]
        if len(evidence_children) == 1 and evidence_children[0] not in leaves:
            leaves[evidence_children[0]] = propagation.ConfidenceAssignment(
                node=evidence_children[0],
                value=assessment.p_c_given_e,
                origin=Origin.EVIDENCE,
                override_note="derived from the step's evidence assessment",
            )
    return [leaves[k] for k in sorted(leaves)]


def _json_number(value: float):
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    return value
