"""Structural assessment: logical validity, full validity, and soundness.

The three levels nest: a sound case is fully valid, and a fully valid case is
logically valid.  Validity is about argument steps fitting together; full
validity additionally demands support for every claim, deductive steps, and no
undefeated defeaters beyond accepted residuals; soundness adds human
attestation of step justifications and sufficient evidential weight.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from . import defeaters as _defeaters
from .errors import UnknownNodeId
from .graph import BlockKind, CaseGraph, LinkKind, NodeId, NodeKind, RoleFlag, Attestation


class CaseLabel(str, Enum):
    INCOMPLETE = "incomplete"
    INVALID = "invalid"
    INDUCTIVE = "inductive"
    FULLY_VALID = "fully_valid"
    SOUND = "sound"


@dataclass(frozen=True)
class Violation:
    node: NodeId
    rule: str
    message: str


@dataclass(frozen=True)
class StructuralReport:
    logical_validity: bool
    violations: tuple
    unsupported_claims: tuple
    inductive_steps: tuple
    active_defeaters: tuple
    fully_valid: bool = False
    sound: bool = False
    case_label: CaseLabel = CaseLabel.INCOMPLETE


def _sorted(ids) -> tuple:
    return tuple(sorted(ids))


def check_validity(graph: CaseGraph) -> StructuralReport:
    """Logical validity: steps fit together and block arities hold.

    Subclaim identity is guaranteed by construction (one node, referenced by
    every block that uses it), so the checks here cover parenthood, per-block
    child arities, acyclicity, and rootedness.  Diagnoses are data: the report
    lists violations instead of raising.
    """
    violations = []

    logical = graph.links_of_kind(LinkKind.LOGICAL)
    steps = [n for n in graph.nodes.values() if n.kind == NodeKind.ARGUMENT_STEP]

    for node in steps:
        parent = graph.logical_parent(node.id)
        if parent is None:
            violations.append(Violation(node.id, "single-parent", "argument step delivers no claim"))
        children = [graph.node(c) for c in graph.logical_children(node.id)]
        side = [c for c in children if RoleFlag.SIDE_CLAIM in c.role_flags]
        subclaims = [c for c in children if c.kind == NodeKind.CLAIM and c not in side]
        evidence_children = [c for c in children if c.kind == NodeKind.EVIDENCE]

        if node.block in (BlockKind.SUBSTITUTION, BlockKind.CONCRETION):
            if evidence_children:
                violations.append(Violation(
                    node.id, "illegal-child-kind",
                    f"{node.block.value} steps take claims, not evidence"))
            if len(subclaims) != 1:
                violations.append(Violation(
                    node.id, "single-subclaim",
                    f"{node.block.value} steps derive their claim from exactly one "
                    f"non-side subclaim, found {len(subclaims)}"))
        elif node.block in (BlockKind.DECOMPOSITION, BlockKind.CALCULATION):
            if evidence_children:
                violations.append(Violation(
                    node.id, "illegal-child-kind",
                    f"{node.block.value} steps take claims, not evidence"))
            if not subclaims:
                violations.append(Violation(
                    node.id, "missing-subclaim",
                    f"{node.block.value} steps need at least one subclaim"))
        elif node.block == BlockKind.EVIDENCE_INCORPORATION:
            if not evidence_children:
                violations.append(Violation(
                    node.id, "missing-evidence",
                    "evidence incorporation steps need at least one evidence node"))
            if subclaims:
                violations.append(Violation(
                    node.id, "illegal-child-kind",
                    "evidence incorporation steps take no claim children except side-claims"))

    # acyclicity (guaranteed at construction; re-verified for safety)
    adjacency = {}
    for l in logical:
        adjacency.setdefault(l.source, []).append(l.target)
    state = {}
    def _has_cycle(start):
        stack = [(start, iter(adjacency.get(start, ())))]
        state[start] = 1
        while stack:
            node_id, it = stack[-1]
            advanced = False
            for nxt in it:
                if state.get(nxt) == 1:
                    return True
                if nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, iter(adjacency.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                state[node_id] = 2
                stack.pop()
        return False
    for start in graph.nodes:
        if start not in state and _has_cycle(start):
            violations.append(Violation(start, "acyclic", "logical links form a cycle"))
            break

    # rootedness: every logically linked node must flow up to the top claim,
    # or to a defeater carrying its own subcase
    reach_up = {}
    def _roots(node_id):
        if node_id in reach_up:
            return reach_up[node_id]
        reach_up[node_id] = set()  # cycle guard; acyclicity already checked
        targets = adjacency.get(node_id, ())
        if not targets:
            reach_up[node_id] = {node_id}
        else:
            acc = set()
            for t in targets:
                acc |= _roots(t)
            reach_up[node_id] = acc
        return reach_up[node_id]

    logically_linked = {l.source for l in logical} | {l.target for l in logical}
    for node_id in sorted(logically_linked):
        roots = _roots(node_id)
        ok = any(r == graph.top_claim or graph.node(r).kind == NodeKind.DEFEATER for r in roots)
        if not ok:
            violations.append(Violation(
                node_id, "unrooted",
                "logical subgraph must be rooted at the top claim (or a defeater subcase)"))

    unsupported = _unsupported_claims(graph)
    inductive = _inductive_steps(graph)
    active = _defeaters.active_defeaters(graph)

    valid = not violations
    return StructuralReport(
        logical_validity=valid,
        violations=tuple(violations),
        unsupported_claims=_sorted(unsupported),
        inductive_steps=_sorted(inductive),
        active_defeaters=tuple(active),
        case_label=CaseLabel.INVALID if not valid else CaseLabel.INCOMPLETE,
    )


def _unsupported_claims(graph: CaseGraph) -> set:
    out = set()
    for node in graph.nodes.values():
        if node.kind != NodeKind.CLAIM:
            continue
        if not graph.supporting_steps(node.id):
            out.add(node.id)
    return out


def _inductive_steps(graph: CaseGraph) -> set:
    return {
        n.id
        for n in graph.nodes.values()
        if n.kind == NodeKind.ARGUMENT_STEP and n.inductive_marker
    }


def check_full_validity(graph: CaseGraph, residual_accepted: set = frozenset()) -> StructuralReport:
    """Full validity plus the workflow label.

    ``residual_accepted`` names defeaters consciously parked as residual
    doubts; they do not block full validity.  Assumptions and possibly-missing
    claims do not make a case incomplete but do force the inductive label, as
    do inductive markers and open defeaters.
    """
    for node_id in residual_accepted:
        graph.node(node_id)  # raises UnknownNodeId
    report = check_validity(graph)

    assumptions = {
        n.id for n in graph.nodes.values()
        if n.kind == NodeKind.CLAIM and (n.role_flags & {RoleFlag.ASSUMPTION, RoleFlag.POSSIBLY_MISSING})
    }
    possibly_missing = {
        n.id for n in graph.nodes.values() if RoleFlag.POSSIBLY_MISSING in n.role_flags
    }
    genuinely_unsupported = set(report.unsupported_claims) - assumptions
    open_defeaters = set(report.active_defeaters) - set(residual_accepted)

    fully_valid = (
        report.logical_validity
        and not genuinely_unsupported
        and not report.inductive_steps
        and not open_defeaters
    )

    if not report.logical_validity:
        case_label = CaseLabel.INVALID
    elif genuinely_unsupported:
        case_label = CaseLabel.INCOMPLETE
    elif report.inductive_steps or possibly_missing or assumptions or open_defeaters:
        case_label = CaseLabel.INDUCTIVE
    else:
        case_label = CaseLabel.FULLY_VALID

    return replace(report, fully_valid=fully_valid, case_label=case_label)


def check_soundness(
    graph: CaseGraph,
    report: StructuralReport,
    evidence_accepted: set = frozenset(),
) -> StructuralReport:
    """Soundness: full validity plus attested steps and accepted evidence.

    ``evidence_accepted`` holds the evidence-incorporation steps whose weight
    of evidence crossed the acceptance threshold (or was accepted by explicit
    human override); attestation is read off each step node.
    """
    steps = [n for n in graph.nodes.values() if n.kind == NodeKind.ARGUMENT_STEP]
    all_attested = all(n.soundness_attestation == Attestation.SOUND_JUSTIFICATION for n in steps)
    ei_steps = [n.id for n in steps if n.block == BlockKind.EVIDENCE_INCORPORATION]
    all_evidence_ok = all(s in evidence_accepted for s in ei_steps)

    sound = report.fully_valid and all_attested and all_evidence_ok
    case_label = report.case_label
    if sound and case_label == CaseLabel.FULLY_VALID:
        case_label = CaseLabel.SOUND
    return replace(report, sound=sound, case_label=case_label)
