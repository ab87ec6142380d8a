"""Probabilistic confidence propagation over the logical subgraph.

Confidence flows bottom-up from evidence and assumptions to every claim.  Two
built-in rules are provided: ``product`` (conjunction of independent inputs)
and ``sum-of-doubts`` (doubt in a claim bounded by the summed doubts of its
inputs).  Reasonable estimates lie between the two.

Shared subclaims (cross links) contribute once.  Each node carries the set of
atomic contributions (leaf values, manual overrides, step factors) in its
cone; a node's value is the rule applied to that set, so a leaf reused via a
cross link is never double counted and, with all factors at one, the top
value collapses to the flat form over the distinct leaves.  Wherever a node's
value stops being decomposable into atoms (a factor under sum-of-doubts, a
custom or refutational combiner, a binding clamp on a product), the node is
folded into a single opaque contribution and is still counted exactly once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

from .errors import MissingLeafAssignment, NotApplicable, UnknownRule, UnsoundGraph
from .graph import CaseGraph, LinkKind, NodeId, NodeKind, RoleFlag

logger = logging.getLogger(__name__)


class Origin(str, Enum):
    EVIDENCE = "evidence"
    ASSUMPTION = "assumption"
    PROPAGATED = "propagated"
    MANUAL_OVERRIDE = "manual_override"


class Color(str, Enum):
    RED = "red"
    AMBER = "amber"
    GREEN = "green"


class Rule(str, Enum):
    PRODUCT = "product"
    SUM_OF_DOUBTS = "sum-of-doubts"


@dataclass(frozen=True)
class ConfidenceAssignment:
    node: NodeId
    value: float
    origin: Origin
    override_note: str = ""
    raw: Optional[float] = None           # pre-clamp value
    pre_override: Optional[float] = None  # propagated value an override replaced

    def __post_init__(self):
        if self.raw is None:
            object.__setattr__(self, "raw", self.value)
        # supplied values must be probabilities; propagated values may leave
        # [0,1] when clamping is explicitly switched off
        if self.origin != Origin.PROPAGATED and not 0.0 <= self.value <= 1.0:
            raise ValueError(f"confidence for {self.node!r} must lie in [0,1], got {self.value}")


@dataclass(frozen=True)
class PropagationConfig:
    rule: str = Rule.PRODUCT.value
    factors: dict = field(default_factory=dict)     # step id -> f (>= 0, default 1)
    thresholds: tuple = ((0.5, Color.AMBER), (0.9, Color.GREEN))
    clamp: bool = True

    def __post_init__(self):
        object.__setattr__(self, "factors", dict(self.factors))
        cuts = [float(c) for c, _ in self.thresholds]
        if cuts != sorted(cuts) or len(set(cuts)) != len(cuts):
            raise UnknownRule("threshold cutoffs must be strictly increasing")
        object.__setattr__(
            self, "thresholds", tuple((float(c), Color(col)) for c, col in self.thresholds)
        )
        for step_id, f in self.factors.items():
            if f < 0:
                raise UnknownRule(f"factor for {step_id!r} must be non-negative")

    def factor(self, step_id: NodeId) -> float:
        return float(self.factors.get(step_id, 1.0))


# Custom combiners: fn(side_confidence, subclaim_confidences, factor) -> value.
_CUSTOM_RULES: dict = {}


def register_rule(name: str, fn: Callable) -> None:
    _CUSTOM_RULES[name] = fn


def registered_rules() -> list:
    return sorted(_CUSTOM_RULES)


# --- internal evaluation ----------------------------------------------------------

# An atom is (kind, key, value).  Distinct keys contribute independently; the
# value of a node is the rule folded over its atom set.
_LEAF, _FACTOR, _OVERRIDE, _OPAQUE = "leaf", "factor", "override", "opaque"


def _fold(atoms: frozenset, rule: str) -> float:
    if rule == Rule.PRODUCT.value:
        out = 1.0
        for _, _, v in atoms:
            out *= v
        return out
    doubt = 0.0
    for kind, _, v in atoms:
        if kind == _FACTOR:
            raise AssertionError("factor atoms cannot appear under sum-of-doubts")
        doubt += 1.0 - v
    return 1.0 - doubt


@dataclass(frozen=True)
class _State:
    atoms: frozenset
    value: float
    raw: float


def _leaf_state(node_id, value):
    return _State(frozenset({(_LEAF, node_id, float(value))}), float(value), float(value))


def _opaque(node_id, value, raw):
    return _State(frozenset({(_OPAQUE, node_id, float(value))}), float(value), float(raw))


@dataclass
class ValuationResult:
    """Computed confidences plus everything needed to re-run what-if edits."""

    graph: CaseGraph
    config: PropagationConfig
    leaves: dict                 # node -> ConfidenceAssignment as supplied
    overrides: dict              # node -> (value, note)
    assignments: dict            # node -> ConfidenceAssignment (computed)
    diagnostics: tuple = ()

    @property
    def top_value(self) -> float:
        return self.assignments[self.graph.top_claim].value

    def value(self, node_id: NodeId) -> float:
        return self.assignments[node_id].value

    def colors(self) -> dict:
        return classify(self.assignments, self.config)


def _logical_members(graph: CaseGraph) -> list:
    members = {
        n.id
        for n in graph.nodes.values()
        if n.kind in (NodeKind.CLAIM, NodeKind.EVIDENCE, NodeKind.ARGUMENT_STEP)
    }
    for l in graph.links_of_kind(LinkKind.LOGICAL):
        members.add(l.source)
        members.add(l.target)  # defeaters rooting their own subcases
    return sorted(members)


def _topo_order(graph: CaseGraph, members: list) -> list:
    member_set = set(members)
    incoming = {m: 0 for m in members}
    out_edges = {m: [] for m in members}
    for l in graph.links_of_kind(LinkKind.LOGICAL):
        if l.source in member_set and l.target in member_set:
            incoming[l.target] += 1
            out_edges[l.source].append(l.target)
    ready = sorted(m for m, deg in incoming.items() if deg == 0)
    order = []
    while ready:
        cur = ready.pop(0)
        order.append(cur)
        next_ready = []
        for nxt in out_edges[cur]:
            incoming[nxt] -= 1
            if incoming[nxt] == 0:
                next_ready.append(nxt)
        ready = sorted(set(ready) | set(next_ready))
    if len(order) != len(members):
        raise UnsoundGraph("logical subgraph is not acyclic")
    return order


def propagate(
    graph: CaseGraph,
    leaves: Iterable,
    cfg: PropagationConfig,
    overrides: Optional[dict] = None,
) -> ValuationResult:
    """Bottom-up valuation of every claim, step, and evidence node.

    ``leaves`` supplies confidence for evidence nodes and assumption claims;
    ``overrides`` maps node ids to (value, note) pairs that replace the
    computed value at that node before further upward propagation.
    """
    from .structure import check_validity  # local import to avoid a cycle

    report = check_validity(graph)
    if not report.logical_validity:
        raise UnsoundGraph(
            "graph fails validity; fix structural violations before valuation",
            violations=report.violations,
        )

    leaf_map = {}
    for assignment in leaves:
        leaf_map[assignment.node] = assignment
    overrides = dict(overrides or {})
    for node_id, assignment in list(leaf_map.items()):
        if assignment.origin == Origin.MANUAL_OVERRIDE and node_id not in overrides:
            overrides[node_id] = (assignment.value, assignment.override_note)

    diagnostics = []
    members = _logical_members(graph)
    order = _topo_order(graph, members)
    rule = cfg.rule
    if rule not in (Rule.PRODUCT.value, Rule.SUM_OF_DOUBTS.value) and rule not in _CUSTOM_RULES:
        raise UnknownRule(rule)

    states: dict = {}
    assignments: dict = {}

    def finish(node_id, state: Optional[_State], origin: Origin, note: str = "") -> None:
        if node_id in overrides:
            value, override_note = overrides[node_id]
            pre = state.value if state is not None else None
            states[node_id] = _State(
                frozenset({(_OVERRIDE, node_id, float(value))}), float(value), float(value)
            )
            assignments[node_id] = ConfidenceAssignment(
                node=node_id,
                value=float(value),
                origin=Origin.MANUAL_OVERRIDE,
                override_note=override_note,
                pre_override=pre,
            )
        else:
            states[node_id] = state
            assignments[node_id] = ConfidenceAssignment(
                node=node_id, value=state.value, origin=origin, override_note=note, raw=state.raw
            )

    for node_id in order:
        node = graph.node(node_id)
        if node.kind == NodeKind.EVIDENCE:
            if node_id in leaf_map:
                finish(node_id, _leaf_state(node_id, leaf_map[node_id].value), leaf_map[node_id].origin)
            elif node_id in overrides:
                finish(node_id, None, Origin.EVIDENCE)
            else:
                raise MissingLeafAssignment(f"evidence node {node_id!r} has no confidence input")
        elif node.kind == NodeKind.ARGUMENT_STEP:
            finish(node_id, _step_state(graph, node, states, cfg), Origin.PROPAGATED)
        else:  # claim, or defeater rooting a subcase
            supporting = graph.supporting_steps(node_id)
            if not supporting:
                if node_id in leaf_map:
                    finish(node_id, _leaf_state(node_id, leaf_map[node_id].value), leaf_map[node_id].origin)
                elif node_id in overrides:
                    finish(node_id, None, Origin.ASSUMPTION)
                else:
                    message = (
                        f"unsupported claim {node_id!r} has no confidence input; "
                        "treating it as an assumption with confidence 1.0"
                    )
                    logger.warning(message)
                    diagnostics.append(message)
                    finish(node_id, _leaf_state(node_id, 1.0), Origin.ASSUMPTION, note="defaulted to 1.0")
            else:
                if node_id in leaf_map:
                    message = (
                        f"ignoring leaf confidence for {node_id!r}: the node is delivered by "
                        f"{', '.join(sorted(supporting))}; use an override to pin supported nodes"
                    )
                    logger.warning(message)
                    diagnostics.append(message)
                merged = frozenset().union(*(states[s].atoms for s in supporting))
                raw = _fold(merged, rule) if rule in (Rule.PRODUCT.value, Rule.SUM_OF_DOUBTS.value) else None
                if raw is None:  # custom rule: conjoin step values opaquely
                    raw = 1.0
                    for s in supporting:
                        raw *= states[s].value
                    finish(node_id, _opaque(node_id, raw, raw), Origin.PROPAGATED)
                else:
                    value = _clamp(raw, cfg.clamp)
                    finish(node_id, _State(merged, value, raw), Origin.PROPAGATED)

    return ValuationResult(
        graph=graph,
        config=cfg,
        leaves=leaf_map,
        overrides=overrides,
        assignments=assignments,
        diagnostics=tuple(diagnostics),
    )


def _clamp(value: float, enabled: bool) -> float:
    if not enabled:
        return value
    return min(1.0, max(0.0, value))


def _step_state(graph: CaseGraph, node, states: dict, cfg: PropagationConfig) -> _State:
    children = [graph.node(c) for c in graph.logical_children(node.id)]
    side_ids = [c.id for c in children if RoleFlag.SIDE_CLAIM in c.role_flags]
    input_ids = [c.id for c in children if RoleFlag.SIDE_CLAIM not in c.role_flags]
    f = cfg.factor(node.id)
    rule = cfg.rule
    refutational = RoleFlag.REFUTATIONAL in node.role_flags

    if rule in _CUSTOM_RULES:
        side_conf = 1.0
        for s in side_ids:
            side_conf *= states[s].value
        value = _CUSTOM_RULES[rule](side_conf, [states[i].value for i in input_ids], f)
        return _opaque(node.id, _clamp(value, cfg.clamp), value)

    if refutational:
        # A refutational subcase succeeds if ANY subclaim holds: disjunction of
        # the inputs, conjoined with the side-claims under the active rule.
        if rule == Rule.PRODUCT.value:
            disj = 1.0
            for i in input_ids:
                disj *= 1.0 - states[i].value
            value = f * (1.0 - disj)
            for s in side_ids:
                value *= states[s].value
        else:
            best = max((states[i].value for i in input_ids), default=1.0)
            doubt = (1.0 - best) + sum(1.0 - states[s].value for s in side_ids)
            value = f * (1.0 - doubt)
        return _opaque(node.id, _clamp(value, cfg.clamp), value)

    merged = frozenset().union(*(states[c.id].atoms for c in children)) if children else frozenset()

    if rule == Rule.PRODUCT.value:
        if f != 1.0:
            merged = merged | {(_FACTOR, node.id, f)}
        raw = _fold(merged, rule)
        value = _clamp(raw, cfg.clamp)
        if value != raw:
            # a binding clamp is not decomposable; fold the subtree into one atom
            return _opaque(node.id, value, raw)
        return _State(merged, value, raw)

    # sum of doubts
    raw = _fold(merged, rule)
    if f != 1.0:
        value = f * _clamp(raw, cfg.clamp) if cfg.clamp else f * raw
        return _opaque(node.id, _clamp(value, cfg.clamp), value)
    value = _clamp(raw, cfg.clamp)
    return _State(merged, value, raw)


# --- flat-form oracle ---------------------------------------------------------------


@dataclass(frozen=True)
class FlatFormSummary:
    rule: str
    leaf_ids: tuple
    value: float


def flat_form(graph: CaseGraph, leaves: Iterable, cfg: PropagationConfig) -> FlatFormSummary:
    """Shape-independent value of the top claim, straight from the leaves.

    With every factor at one and no overrides, confidence in the top claim is
    the product of confidence over all distinct evidence and assumptions in
    its cone (product rule), or one minus their summed doubts (sum-of-doubts).
    Computed by plain reachability, independent of :func:`propagate`.
    """
    if any(f != 1.0 for f in cfg.factors.values()):
        raise NotApplicable("flat form requires every factor to equal 1")
    leaf_map = {}
    for assignment in leaves:
        if assignment.origin == Origin.MANUAL_OVERRIDE:
            raise NotApplicable("flat form is undefined in the presence of overrides")
        leaf_map[assignment.node] = assignment
    if cfg.rule not in (Rule.PRODUCT.value, Rule.SUM_OF_DOUBTS.value):
        raise NotApplicable("flat form is defined for the built-in rules only")

    # walk the cone of the top claim: parent <- step <- children
    children_of = {}
    for l in graph.links_of_kind(LinkKind.LOGICAL):
        children_of.setdefault(l.target, []).append(l.source)
    stack, seen = [graph.top_claim], set()
    leaf_ids = set()
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        node = graph.node(cur)
        below = children_of.get(cur, [])
        if node.kind == NodeKind.EVIDENCE:
            leaf_ids.add(cur)
        elif node.kind == NodeKind.CLAIM and not graph.supporting_steps(cur):
            leaf_ids.add(cur)
        stack.extend(below)

    def leaf_value(node_id):
        if node_id in leaf_map:
            return leaf_map[node_id].value
        if graph.node(node_id).kind == NodeKind.EVIDENCE:
            raise MissingLeafAssignment(f"evidence node {node_id!r} has no confidence input")
        return 1.0  # defaulted assumption

    if cfg.rule == Rule.PRODUCT.value:
        value = 1.0
        for node_id in leaf_ids:
            value *= leaf_value(node_id)
    else:
        value = 1.0 - sum(1.0 - leaf_value(n) for n in leaf_ids)
        if cfg.clamp:
            value = min(1.0, max(0.0, value))
    return FlatFormSummary(cfg.rule, tuple(sorted(leaf_ids)), value)


# --- coloring and overrides -----------------------------------------------------------


def classify(values: dict, cfg: PropagationConfig) -> dict:
    """Traffic-light classification: highest cutoff met or exceeded wins;
    below every cutoff is red."""
    colors = {}
    for node_id, assignment in values.items():
        color = Color.RED
        for cutoff, candidate in cfg.thresholds:
            if assignment.value >= cutoff:
                color = candidate
        colors[node_id] = color
    return colors


def apply_override(result: ValuationResult, node: NodeId, new_value: float, note: str = "") -> ValuationResult:
    """Install an override and re-propagate; provenance keeps the old value."""
    result.graph.node(node)
    overrides = dict(result.overrides)
    overrides[node] = (float(new_value), note)
    return propagate(result.graph, result.leaves.values(), result.config, overrides)


def remove_override(result: ValuationResult, node: NodeId) -> ValuationResult:
    overrides = dict(result.overrides)
    overrides.pop(node, None)
    return propagate(result.graph, result.leaves.values(), result.config, overrides)
