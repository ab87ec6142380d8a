"""Case file format: a self-contained JSON document per case.

One document bundles the argument graph, evidence assessments, confidence
inputs, propagation configuration, and the residual-doubt ledger, so an
evaluation is a reproducible artifact.  External theories, models, and
evidence assemblies stay opaque URIs in the metadata.  Serialization is
deterministic (collections keyed and ordered by node id) and unknown fields
on the document, case, and node objects survive a round trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import jsonschema

from . import confirmation
from .confirmation import EvidenceAssessment
from .defeaters import DoubtCategory, InteriorKind, ResidualDoubtEntry, ResidualDoubtLedger
from .errors import CaseError, CaseSchemaError, CaseSyntaxError, InvariantViolation
from .graph import (
    Attestation,
    BlockKind,
    CaseGraph,
    Link,
    LinkKind,
    Node,
    NodeKind,
    Resolution,
    RoleFlag,
    Severity,
)
from .propagation import Color, ConfidenceAssignment, Origin, PropagationConfig

FORMAT_VERSION = "1"

_NODE_FIELDS = {
    "id", "kind", "block", "narrative", "role_flags",
    "inductive_marker", "soundness_attestation", "severity", "resolution",
}
_GRAPH_FIELDS = {"top_claim", "nodes", "links", "snapshots"}
_DOC_FIELDS = {
    "format_version", "metadata", "case", "assessments",
    "evidence_overrides", "confidence_inputs", "propagation", "ledger",
}

_RULE_NAMES = {
    "DuplicateId": "duplicate-id",
    "MalformedNode": "malformed-node",
    "IllegalEndpoints": "illegal-endpoints",
    "SecondParent": "single-parent",
    "CycleIntroduced": "non-circular",
    "DuplicateLabel": "duplicate-label",
    "UnknownNodeId": "unknown-node",
}


@dataclass(frozen=True)
class CaseMetadata:
    title: str = ""
    authors: tuple = ()
    external_refs: tuple = ()       # opaque URIs to theories/models/evidence assemblies
    phase_tags: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "authors", tuple(self.authors))
        object.__setattr__(self, "external_refs", tuple(self.external_refs))
        object.__setattr__(self, "phase_tags", dict(self.phase_tags))


@dataclass(frozen=True)
class EvidenceOverride:
    accepted: bool
    note: str = ""


@dataclass
class CaseDocument:
    case: CaseGraph
    metadata: CaseMetadata = field(default_factory=CaseMetadata)
    assessments: dict = field(default_factory=dict)          # EI step id -> EvidenceAssessment
    evidence_overrides: dict = field(default_factory=dict)   # EI step id -> EvidenceOverride
    confidence_inputs: list = field(default_factory=list)    # ConfidenceAssignment entries
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    ledger: ResidualDoubtLedger = field(default_factory=ResidualDoubtLedger)
    format_version: str = FORMAT_VERSION
    extra: dict = field(default_factory=dict)                # unknown-field preservation

    def __eq__(self, other):
        if not isinstance(other, CaseDocument):
            return NotImplemented
        return serialize(self) == serialize(other)


def _schema() -> dict:
    text = resources.files("casecalc").joinpath("schema/case.v1.json").read_text("utf-8")
    return json.loads(text)


_SCHEMA = None


def get_schema() -> dict:
    global _SCHEMA
    if _SCHEMA is None:
        _SCHEMA = _schema()
    return _SCHEMA


# --- parsing -----------------------------------------------------------------


def parse(data) -> CaseDocument:
    """Parse and validate one case document; never returns a partial value."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CaseSyntaxError(
            f"not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc

    validator = jsonschema.Draft202012Validator(get_schema())
    diagnostics = []
    for error in sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path)):
        where = "/".join(str(p) for p in error.absolute_path) or "(root)"
        diagnostics.append(f"{where}: {error.message}")
    if diagnostics:
        raise CaseSchemaError("document does not match schema case.v1", diagnostics)

    try:
        graph, node_extras, case_extra = _graph_from_json(raw["case"])
    except CaseError as exc:
        if isinstance(exc, InvariantViolation):
            raise
        rule = _RULE_NAMES.get(type(exc).__name__, type(exc).__name__)
        raise InvariantViolation(f"case violates the {rule} rule: {exc}", rule=rule) from exc

    assessments = {
        step: _assessment_from_json(body) for step, body in (raw.get("assessments") or {}).items()
    }
    evidence_overrides = {
        step: EvidenceOverride(accepted=body["accepted"], note=body.get("note", ""))
        for step, body in (raw.get("evidence_overrides") or {}).items()
    }
    confidence_inputs = [
        ConfidenceAssignment(
            node=item["node"],
            value=float(item["value"]),
            origin=Origin(item["origin"]),
            override_note=item.get("note", ""),
        )
        for item in raw.get("confidence_inputs") or []
    ]
    propagation = _propagation_from_json(raw.get("propagation") or {})
    ledger = _ledger_from_json(raw.get("ledger") or {})
    meta = raw.get("metadata") or {}
    metadata = CaseMetadata(
        title=meta.get("title", ""),
        authors=meta.get("authors", ()),
        external_refs=meta.get("external_refs", ()),
        phase_tags=meta.get("phase_tags", {}),
    )

    extra = {}
    doc_extra = {k: raw[k] for k in raw if k not in _DOC_FIELDS}
    if doc_extra:
        extra["document"] = doc_extra
    meta_extra = {
        k: meta[k] for k in meta if k not in {"title", "authors", "external_refs", "phase_tags"}
    }
    if meta_extra:
        extra["metadata"] = meta_extra
    if case_extra:
        extra["case"] = case_extra
    if node_extras:
        extra["nodes"] = node_extras

    for step_id in list(assessments) + list(evidence_overrides):
        if step_id not in graph:
            raise InvariantViolation(
                f"assessment references unknown node {step_id!r}", rule="unknown-node"
            )
    for item in confidence_inputs:
        if item.node not in graph:
            raise InvariantViolation(
                f"confidence input references unknown node {item.node!r}", rule="unknown-node"
            )

    return CaseDocument(
        case=graph,
        metadata=metadata,
        assessments=assessments,
        evidence_overrides=evidence_overrides,
        confidence_inputs=confidence_inputs,
        propagation=propagation,
        ledger=ledger,
        format_version=raw["format_version"],
        extra=extra,
    )


def parse_file(path) -> CaseDocument:
    try:
        with open(path, "rb") as handle:
            return parse(handle.read())
    except OSError as exc:
        raise CaseSyntaxError(f"cannot read {path}: {exc}") from exc


def _graph_from_json(body: dict, scope: str = ""):
    node_extras = {}  # keyed (scope, node id); scope "" is the head graph
    nodes = {}
    for entry in body.get("nodes", []):
        node = _node_from_json(entry)
        if node.id in nodes:
            raise InvariantViolation(
                f"node id {node.id!r} appears twice", rule="duplicate-id"
            )
        nodes[node.id] = node
        unknown = {k: entry[k] for k in entry if k not in _NODE_FIELDS}
        if unknown:
            node_extras[f"{scope}{node.id}"] = unknown
    top = body.get("top_claim")
    graph = CaseGraph(nodes, (), top)
    for entry in body.get("links", []):
        graph = graph.add_link(Link(entry["source"], entry["target"], LinkKind(entry["kind"])))
    for snap in body.get("snapshots", []):
        frozen, frozen_extras, _ = _graph_from_json(snap["case"], f"{scope}{snap['label']}//")
        node_extras.update(frozen_extras)
        graph = CaseGraph(
            graph.nodes, graph.links, graph.top_claim,
            graph.snapshots + ((snap["label"], frozen),),
        )
    case_extra = {k: body[k] for k in body if k not in _GRAPH_FIELDS}
    return graph, node_extras, case_extra


def _node_from_json(entry: dict) -> Node:
    return Node(
        id=entry["id"],
        kind=NodeKind(entry["kind"]),
        block=BlockKind(entry["block"]) if entry.get("block") else None,
        narrative=entry.get("narrative", ""),
        role_flags=frozenset(RoleFlag(f) for f in entry.get("role_flags", [])),
        inductive_marker=entry.get("inductive_marker", False),
        soundness_attestation=(
            Attestation(entry["soundness_attestation"])
            if entry.get("soundness_attestation") else None
        ),
        severity=Severity(entry["severity"]) if entry.get("severity") else None,
        resolution=Resolution(entry["resolution"]) if entry.get("resolution") else None,
    )


def _assessment_from_json(body: dict) -> EvidenceAssessment:
    return EvidenceAssessment(
        p_c=body.get("p_c"),
        p_c_given_e=body.get("p_c_given_e"),
        p_e=body.get("p_e"),
        p_e_given_c=body.get("p_e_given_c"),
        p_e_given_not_c=body.get("p_e_given_not_c"),
        epsilon=body.get("epsilon"),
        qualitative_fields=frozenset(body.get("qualitative_fields", [])),
    )


def _propagation_from_json(body: dict) -> PropagationConfig:
    kwargs = {}
    if "rule" in body:
        kwargs["rule"] = body["rule"]
    if "factors" in body:
        kwargs["factors"] = {k: float(v) for k, v in body["factors"].items()}
    if "thresholds" in body:
        kwargs["thresholds"] = tuple((float(c), Color(col)) for c, col in body["thresholds"])
    if "clamp" in body:
        kwargs["clamp"] = bool(body["clamp"])
    return PropagationConfig(**kwargs)


def _ledger_from_json(body: dict) -> ResidualDoubtLedger:
    entries = []
    for item in body.get("entries", []):
        entries.append(ResidualDoubtEntry(
            defeater=item["defeater"],
            category=DoubtCategory(item["category"]),
            probability=float(item["probability"]),
            severity=Severity(item.get("severity", "default")),
            consequence_note=item.get("consequence_note", ""),
            interior_kind=(
                InteriorKind(item["interior_kind"]) if item.get("interior_kind") else None
            ),
        ))
    return ResidualDoubtLedger(entries=tuple(entries), threshold=body.get("threshold", 0.01))


# --- serialization ---------------------------------------------------------------


def serialize(doc: CaseDocument) -> str:
    return json.dumps(to_json_dict(doc), indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def to_json_dict(doc: CaseDocument) -> dict:
    out = {"format_version": doc.format_version}
    meta = {
        "title": doc.metadata.title,
        "authors": list(doc.metadata.authors),
        "external_refs": list(doc.metadata.external_refs),
        "phase_tags": {k: doc.metadata.phase_tags[k] for k in sorted(doc.metadata.phase_tags)},
    }
    meta.update(doc.extra.get("metadata", {}))
    out["metadata"] = meta
    out["case"] = _graph_to_json(doc.case, doc.extra.get("nodes", {}))
    out["case"].update(doc.extra.get("case", {}))
    out["assessments"] = {
        step: _assessment_to_json(doc.assessments[step]) for step in sorted(doc.assessments)
    }
    out["evidence_overrides"] = {
        step: {"accepted": doc.evidence_overrides[step].accepted,
               "note": doc.evidence_overrides[step].note}
        for step in sorted(doc.evidence_overrides)
    }
    out["confidence_inputs"] = [
        {
            "node": a.node,
            "value": a.value,
            "origin": a.origin.value,
            "note": a.override_note,
        }
        for a in sorted(doc.confidence_inputs, key=lambda a: (a.node, a.origin.value))
    ]
    out["propagation"] = {
        "rule": doc.propagation.rule,
        "factors": {k: doc.propagation.factors[k] for k in sorted(doc.propagation.factors)},
        "thresholds": [[c, col.value] for c, col in doc.propagation.thresholds],
        "clamp": doc.propagation.clamp,
    }
    out["ledger"] = {
        "threshold": doc.ledger.threshold,
        "entries": [
            {
                "defeater": e.defeater,
                "category": e.category.value,
                "probability": e.probability,
                "severity": e.severity.value,
                "consequence_note": e.consequence_note,
                "interior_kind": e.interior_kind.value if e.interior_kind else None,
            }
            for e in sorted(doc.ledger.entries, key=lambda e: (e.defeater, e.category.value))
        ],
    }
    out.update(doc.extra.get("document", {}))
    return out


def _graph_to_json(graph: CaseGraph, node_extras: dict, scope: str = "") -> dict:
    nodes = []
    for node_id in sorted(graph.nodes):
        nodes.append(_node_to_json(graph.node(node_id), node_extras.get(f"{scope}{node_id}", {})))
    links = sorted(graph.links, key=lambda l: (l.kind.value, l.source, l.target))
    body = {
        "top_claim": graph.top_claim,
        "nodes": nodes,
        "links": [{"source": l.source, "target": l.target, "kind": l.kind.value} for l in links],
    }
    if graph.snapshots:
        body["snapshots"] = [
            {"label": label, "case": _graph_to_json(frozen, node_extras, f"{scope}{label}//")}
            for label, frozen in graph.snapshots
        ]
    return body


def _node_to_json(node: Node, extra: dict) -> dict:
    out = {"id": node.id, "kind": node.kind.value}
    if node.block:
        out["block"] = node.block.value
    if node.narrative:
        out["narrative"] = node.narrative
    if node.role_flags:
        out["role_flags"] = sorted(f.value for f in node.role_flags)
    if node.inductive_marker:
        out["inductive_marker"] = True
    if node.soundness_attestation:
        out["soundness_attestation"] = node.soundness_attestation.value
    if node.severity:
        out["severity"] = node.severity.value
    if node.resolution:
        out["resolution"] = node.resolution.value
    out.update(extra)
    return out


def _assessment_to_json(a: EvidenceAssessment) -> dict:
    out = {}
    for name in ("p_c", "p_c_given_e", "p_e", "p_e_given_c", "p_e_given_not_c"):
        value = getattr(a, name)
        if value is not None:
            out[name] = value
    default_eps = (
        confirmation.QUALITATIVE_EPSILON if a.qualitative_fields else confirmation.EXACT_EPSILON
    )
    if a.epsilon != default_eps:
        out["epsilon"] = a.epsilon
    if a.qualitative_fields:
        out["qualitative_fields"] = sorted(a.qualitative_fields)
    return out


def acceptance_policy_from_flags(measure: Optional[str], threshold: Optional[float]):
    policy = confirmation.ThresholdPolicy()
    if measure:
        policy = confirmation.ThresholdPolicy(
            measure=confirmation.Measure(measure),
            threshold=policy.threshold if threshold is None else float(threshold),
        )
    elif threshold is not None:
        policy = confirmation.ThresholdPolicy(threshold=float(threshold))
    return policy
