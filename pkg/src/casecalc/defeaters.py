"""Defeater labeling, residual-doubt accounting, and the defeater lifecycle.

Labels follow the reinstatement rule: a node is *in* iff every attacker is
*out*; *out* iff some attacker is *in*; everything else stays *undecided*.
Among the labelings satisfying that rule we compute the grounded one (minimal
in-set, maximal undecided), which is the unique least fixed point and keeps
genuinely unresolved conflicts undecided.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .errors import AlreadyResolved, InvalidPayload, UnknownNodeId
from .graph import (
    BlockKind,
    CaseGraph,
    Link,
    LinkKind,
    Node,
    NodeId,
    NodeKind,
    Resolution,
    RoleFlag,
    Severity,
)


class Label(str, Enum):
    IN = "in"
    OUT = "out"
    UNDECIDED = "undecided"


# Resolutions that neutralize a defeater without an explicit counter-attack.
_NEUTRALIZED = {Resolution.ASSUMPTION_ADDED, Resolution.CASE_REVISED, Resolution.ACCEPTED_RESIDUAL}


@dataclass(frozen=True)
class Labeling:
    labels: dict

    def label(self, node_id: NodeId) -> Label:
        return self.labels.get(node_id, Label.IN)

    def out_nodes(self) -> set:
        return {n for n, lab in self.labels.items() if lab == Label.OUT}


def label(graph: CaseGraph, respect_resolutions: bool = True) -> Labeling:
    """Grounded labeling of the attack subgraph.

    Covers every defeater and every node touched by an attack link.  When
    ``respect_resolutions`` is set, defeaters resolved by assumption, revision,
    or acceptance as residual no longer exert attacking force and are labeled
    out; counterargument resolutions are left to the attack structure itself.
    """
    members = set(graph.defeaters())
    for l in graph.links_of_kind(LinkKind.ATTACK):
        members.add(l.source)
        members.add(l.target)

    attackers = {m: set() for m in members}
    forced_out = set()
    if respect_resolutions:
        for d in graph.defeaters():
            node = graph.node(d)
            if node.resolution in _NEUTRALIZED:
                forced_out.add(d)
    for l in graph.links_of_kind(LinkKind.ATTACK):
        if l.source not in forced_out:
            attackers[l.target].add(l.source)

    labels = {m: Label.UNDECIDED for m in members}
    for m in forced_out:
        labels[m] = Label.OUT

    # least-fixed-point iteration of the reinstatement rule
    changed = True
    while changed:
        changed = False
        for m in members:
            if labels[m] != Label.UNDECIDED:
                continue
            attacker_labels = [labels[a] for a in attackers[m]]
            if all(lab == Label.OUT for lab in attacker_labels):
                labels[m] = Label.IN
                changed = True
            elif any(lab == Label.IN for lab in attacker_labels):
                labels[m] = Label.OUT
                changed = True
    return Labeling(labels)


def active_defeaters(graph: CaseGraph, labeling: Optional[Labeling] = None) -> list:
    """Defeaters that still threaten the case: open, not labeled out, and
    aimed at an ordinary node (or at nothing yet).

    A counter-defeater whose only targets are other defeaters defends the
    case rather than challenging it; its effect shows up through the labels
    of the defeaters it attacks.
    """
    labeling = labeling or label(graph)
    out = []
    for d in sorted(graph.defeaters()):
        node = graph.node(d)
        if (node.resolution or Resolution.OPEN) != Resolution.OPEN:
            continue
        if labeling.label(d) == Label.OUT:
            continue
        targets = graph.attack_targets(d)
        if targets and all(graph.node(t).kind == NodeKind.DEFEATER for t in targets):
            continue
        out.append(d)
    return out


def defeat_overrides(graph: CaseGraph, labeling: Labeling, value: float = 0.0) -> dict:
    """Overrides implementing the apply-defeaters view: out-labeled ordinary
    nodes get their confidence forced down (to zero by default)."""
    overrides = {}
    for node_id in labeling.out_nodes():
        if graph.node(node_id).kind != NodeKind.DEFEATER:
            overrides[node_id] = (value, "defeated")
    return overrides


# --- residual doubts ---------------------------------------------------------


class DoubtCategory(str, Enum):
    DEDUCTIVENESS = "deductiveness"
    EVIDENTIAL = "evidential"
    INTERIOR = "interior"


class InteriorKind(str, Enum):
    UNCONVINCING_JUSTIFICATION = "unconvincing_justification"
    STEP_WRONG = "step_wrong"


@dataclass(frozen=True)
class ResidualDoubtEntry:
    defeater: NodeId
    category: DoubtCategory
    probability: float
    severity: Severity = Severity.DEFAULT
    consequence_note: str = ""
    interior_kind: Optional[InteriorKind] = None

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise InvalidPayload(f"residual probability must be in [0,1], got {self.probability}")
        if self.category == DoubtCategory.INTERIOR:
            if self.interior_kind is None:
                raise InvalidPayload("interior residual doubts must state their kind")
            if self.interior_kind == InteriorKind.STEP_WRONG:
                # a step suspected of being wrong must be investigated and
                # eliminated; it cannot be parked as residual
                raise InvalidPayload("a 'step could be wrong' doubt cannot be accepted as residual")


@dataclass(frozen=True)
class ResidualDoubtLedger:
    entries: tuple = ()
    threshold: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def add(self, entry: ResidualDoubtEntry) -> "ResidualDoubtLedger":
        return ResidualDoubtLedger(self.entries + (entry,), self.threshold)

    def accepted_defeaters(self) -> set:
        return {e.defeater for e in self.entries}


def residual_bound(ledger: ResidualDoubtLedger) -> tuple:
    """Upper bound on doubt in the top claim: capped sum of per-category sums."""
    per_category = {c.value: 0.0 for c in DoubtCategory}
    for entry in ledger.entries:
        per_category[entry.category.value] += entry.probability
    bound = min(1.0, sum(per_category.values()))
    return bound, per_category


# --- severity accounting -------------------------------------------------------


@dataclass(frozen=True)
class SeverityReport:
    open_by_severity: dict
    residual_by_severity: dict
    must_eliminate: tuple          # open significant defeaters
    category_totals: dict          # minor cumulative probability per doubt category
    manageable: dict               # category -> bool (minor entries only)
    gate_passes: bool
    gate_reasons: tuple


def severity_report(graph: CaseGraph, ledger: ResidualDoubtLedger) -> SeverityReport:
    """Counts per severity plus the final-assessment gate.

    The gate passes only when no defeater remains open and every accepted
    residual is either negligible or minor with a manageable category total.
    A defeater with a ledger entry counts as consciously accepted even if its
    resolution field has not caught up.
    """
    labeling = label(graph)
    accepted = ledger.accepted_defeaters()
    open_ids = [d for d in active_defeaters(graph, labeling) if d not in accepted]
    open_by_severity = {s.value: 0 for s in Severity}
    for d in open_ids:
        open_by_severity[(graph.node(d).severity or Severity.DEFAULT).value] += 1

    residual_by_severity = {s.value: 0 for s in Severity}
    for entry in ledger.entries:
        residual_by_severity[entry.severity.value] += 1

    must_eliminate = tuple(
        d for d in open_ids if graph.node(d).severity == Severity.SIGNIFICANT
    )

    category_totals = {c.value: 0.0 for c in DoubtCategory}
    for entry in ledger.entries:
        if entry.severity == Severity.MINOR:
            category_totals[entry.category.value] += entry.probability
    manageable = {c: total <= ledger.threshold for c, total in category_totals.items()}

    reasons = []
    if must_eliminate:
        reasons.append(f"open significant defeaters must be eliminated or mitigated: {', '.join(must_eliminate)}")
    other_open = [d for d in open_ids if d not in must_eliminate]
    if other_open:
        reasons.append(f"unresolved defeaters remain: {', '.join(other_open)}")
    for entry in ledger.entries:
        if entry.severity in (Severity.SIGNIFICANT, Severity.DEFAULT):
            reasons.append(
                f"residual {entry.defeater} has severity {entry.severity.value}; "
                "only negligible or manageable-minor doubts may remain"
            )
    for category, ok in manageable.items():
        if not ok:
            reasons.append(
                f"minor {category} doubts total {category_totals[category]:.6g} "
                f"which exceeds the threshold {ledger.threshold:.6g}"
            )
    return SeverityReport(
        open_by_severity=open_by_severity,
        residual_by_severity=residual_by_severity,
        must_eliminate=must_eliminate,
        category_totals=category_totals,
        manageable=manageable,
        gate_passes=not reasons,
        gate_reasons=tuple(reasons),
    )


# --- lifecycle -----------------------------------------------------------------


@dataclass(frozen=True)
class CounterargumentPayload:
    """A counter-defeater (plus optional supporting fragment) attacking the defeater."""

    counter: Node
    support_nodes: tuple = ()
    support_links: tuple = ()


@dataclass(frozen=True)
class AssumptionPayload:
    """New assumption claim inserted below or above the attacked argument step."""

    assumption_id: NodeId
    text: str
    placement: str = "below"   # "below" | "above"
    weakened_claim_id: Optional[NodeId] = None
    bridge_step_id: Optional[NodeId] = None


@dataclass(frozen=True)
class RevisionPayload:
    edit: object                      # callable CaseGraph -> CaseGraph
    before_label: str = "before"
    after_label: str = "after"


@dataclass(frozen=True)
class ResidualPayload:
    category: DoubtCategory
    probability: float
    consequence_note: str = ""
    interior_kind: Optional[InteriorKind] = None


@dataclass(frozen=True)
class ResolveResult:
    graph: CaseGraph
    ledger: ResidualDoubtLedger


def resolve_defeater(
    graph: CaseGraph,
    defeater_id: NodeId,
    mode: Resolution,
    payload,
    ledger: Optional[ResidualDoubtLedger] = None,
) -> ResolveResult:
    """Apply one lifecycle transition to an open defeater."""
    node = graph.node(defeater_id)
    if node.kind != NodeKind.DEFEATER:
        raise InvalidPayload(f"{defeater_id!r} is not a defeater")
    if (node.resolution or Resolution.OPEN) != Resolution.OPEN:
        raise AlreadyResolved(defeater_id)
    ledger = ledger or ResidualDoubtLedger()

    if mode == Resolution.DEFEATED_BY_COUNTERARGUMENT:
        if not isinstance(payload, CounterargumentPayload):
            raise InvalidPayload("counterargument resolution needs a CounterargumentPayload")
        if payload.counter.kind != NodeKind.DEFEATER:
            raise InvalidPayload("the counterargument must itself be a defeater node")
        g = graph.add_node(payload.counter)
        for extra in payload.support_nodes:
            g = g.add_node(extra)
        g = g.add_link(Link(payload.counter.id, defeater_id, LinkKind.ATTACK))
        for l in payload.support_links:
            g = g.add_link(l)
        g = g.replace_node(replace(node, resolution=Resolution.DEFEATED_BY_COUNTERARGUMENT))
        return ResolveResult(g, ledger)

    if mode == Resolution.ASSUMPTION_ADDED:
        if not isinstance(payload, AssumptionPayload):
            raise InvalidPayload("assumption resolution needs an AssumptionPayload")
        g = _insert_assumption(graph, defeater_id, payload)
        g = g.replace_node(replace(g.node(defeater_id), resolution=Resolution.ASSUMPTION_ADDED))
        return ResolveResult(g, ledger)

    if mode == Resolution.CASE_REVISED:
        if not isinstance(payload, RevisionPayload) or not callable(payload.edit):
            raise InvalidPayload("revision resolution needs a RevisionPayload with an edit script")
        g = graph.snapshot(payload.before_label)
        g = payload.edit(g)
        g = g.replace_node(replace(g.node(defeater_id), resolution=Resolution.CASE_REVISED))
        g = g.snapshot(payload.after_label)
        return ResolveResult(g, ledger)

    if mode == Resolution.ACCEPTED_RESIDUAL:
        if not isinstance(payload, ResidualPayload):
            raise InvalidPayload("residual resolution needs a ResidualPayload")
        entry = ResidualDoubtEntry(
            defeater=defeater_id,
            category=payload.category,
            probability=payload.probability,
            severity=node.severity or Severity.DEFAULT,
            consequence_note=payload.consequence_note,
            interior_kind=payload.interior_kind,
        )
        g = graph.replace_node(replace(node, resolution=Resolution.ACCEPTED_RESIDUAL))
        return ResolveResult(g, ledger.add(entry))

    raise InvalidPayload(f"unsupported resolution mode {mode!r}")


def _insert_assumption(graph: CaseGraph, defeater_id: NodeId, payload: AssumptionPayload) -> CaseGraph:
    target_step = _attacked_step(graph, defeater_id)
    assumption = Node(
        payload.assumption_id,
        NodeKind.CLAIM,
        narrative=payload.text,
        role_flags=frozenset({RoleFlag.ASSUMPTION}),
    )
    if payload.placement == "below":
        g = graph.add_node(assumption)
        return g.add_link(Link(assumption.id, target_step, LinkKind.LOGICAL))
    if payload.placement != "above":
        raise InvalidPayload(f"placement must be 'below' or 'above', got {payload.placement!r}")

    # Added above: the existing subcase now delivers a weakened claim, and a
    # fresh step conjoins that with the new assumption to restore the original
    # parent claim, leaving the original subcase intact.
    parent = graph.logical_parent(target_step)
    if parent is None:
        raise InvalidPayload("attacked step has no parent claim to re-point")
    if not payload.weakened_claim_id or not payload.bridge_step_id:
        raise InvalidPayload("added-above insertion needs weakened_claim_id and bridge_step_id")
    original_parent_node = graph.node(parent)
    weakened = Node(
        payload.weakened_claim_id,
        NodeKind.CLAIM,
        narrative=f"{original_parent_node.narrative} (given {payload.text})",
    )
    bridge = Node(
        payload.bridge_step_id,
        NodeKind.ARGUMENT_STEP,
        block=BlockKind.DECOMPOSITION,
        narrative="conjunction restoring the original claim from the weakened claim and the new assumption",
    )
    g = graph.remove_link(Link(target_step, parent, LinkKind.LOGICAL))
    g = g.add_node(assumption).add_node(weakened).add_node(bridge)
    g = g.add_link(Link(target_step, weakened.id, LinkKind.LOGICAL))
    g = g.add_link(Link(weakened.id, bridge.id, LinkKind.LOGICAL))
    g = g.add_link(Link(assumption.id, bridge.id, LinkKind.LOGICAL))
    g = g.add_link(Link(bridge.id, parent, LinkKind.LOGICAL))
    return g


def _attacked_step(graph: CaseGraph, defeater_id: NodeId) -> NodeId:
    """The argument step a defeater challenges, directly or via its target claim."""
    targets = graph.attack_targets(defeater_id)
    if not targets:
        raise InvalidPayload(f"defeater {defeater_id!r} attacks nothing")
    for t in targets:
        if graph.node(t).kind == NodeKind.ARGUMENT_STEP:
            return t
    for t in targets:
        if graph.node(t).kind == NodeKind.CLAIM:
            steps = graph.supporting_steps(t)
            if steps:
                return steps[0]
    raise InvalidPayload(f"defeater {defeater_id!r} does not challenge an argument step")
