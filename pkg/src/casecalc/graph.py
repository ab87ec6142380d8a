"""Typed argument-case graph: nodes, links, snapshots, and templates.

The graph is the data model for one structured assurance argument.  All
well-formedness rules that can be enforced at construction time are enforced
here, so every reachable ``CaseGraph`` value is well formed by construction.
Graphs are immutable: every mutating operation returns a new value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

from .errors import (
    CycleIntroduced,
    DuplicateId,
    DuplicateLabel,
    IllegalEndpoints,
    MalformedNode,
    SecondParent,
    UnboundPlaceholder,
    UnknownNodeId,
)

NodeId = str


class NodeKind(str, Enum):
    CLAIM = "claim"
    ARGUMENT_STEP = "argument_step"
    EVIDENCE = "evidence"
    DEFEATER = "defeater"
    SUBCASE_NOTE = "subcase_note"
    COMMENT = "comment"


class BlockKind(str, Enum):
    DECOMPOSITION = "decomposition"
    SUBSTITUTION = "substitution"
    CONCRETION = "concretion"
    CALCULATION = "calculation"
    EVIDENCE_INCORPORATION = "evidence_incorporation"


class RoleFlag(str, Enum):
    SIDE_CLAIM = "side_claim"
    ASSUMPTION = "assumption"
    POSSIBLY_MISSING = "possibly_missing"
    PRECONDITION = "precondition"
    REFUTATIONAL = "refutational"


class Attestation(str, Enum):
    UNREVIEWED = "unreviewed"
    FULLY_VALID = "fully_valid"
    SOUND_JUSTIFICATION = "sound_justification"


class Severity(str, Enum):
    """Severity scale for unresolved defeaters; DEFAULT means not yet assessed."""

    DEFAULT = "default"
    NEGLIGIBLE = "negligible"
    MINOR = "minor"
    SIGNIFICANT = "significant"

    @property
    def rank(self) -> int:
        return {"default": 1, "negligible": 2, "minor": 3, "significant": 4}[self.value]


class Resolution(str, Enum):
    OPEN = "open"
    DEFEATED_BY_COUNTERARGUMENT = "defeated_by_counterargument"
    ASSUMPTION_ADDED = "assumption_added"
    CASE_REVISED = "case_revised"
    ACCEPTED_RESIDUAL = "accepted_residual"


class LinkKind(str, Enum):
    LOGICAL = "logical"
    EMBEDDED = "embedded"
    ATTACK = "attack"


@dataclass(frozen=True)
class Node:
    id: NodeId
    kind: NodeKind
    block: Optional[BlockKind] = None
    narrative: str = ""
    role_flags: frozenset = field(default_factory=frozenset)
    inductive_marker: bool = False
    soundness_attestation: Optional[Attestation] = None
    severity: Optional[Severity] = None
    resolution: Optional[Resolution] = None

    def __post_init__(self):
        if not self.id or not isinstance(self.id, str):
            raise MalformedNode("node id must be a non-empty string")
        object.__setattr__(self, "role_flags", frozenset(self.role_flags))
        if self.kind == NodeKind.ARGUMENT_STEP:
            if self.block is None:
                raise MalformedNode(f"argument step {self.id!r} requires a block kind")
        elif self.block is not None:
            raise MalformedNode(f"{self.kind.value} node {self.id!r} must not carry a block kind")
        if self.kind != NodeKind.ARGUMENT_STEP:
            if self.inductive_marker:
                raise MalformedNode(f"inductive marker is only valid on argument steps ({self.id!r})")
            if self.soundness_attestation is not None:
                raise MalformedNode(f"soundness attestation is only valid on argument steps ({self.id!r})")
        if self.kind != NodeKind.DEFEATER and (self.severity is not None or self.resolution is not None):
            raise MalformedNode(f"severity/resolution are only valid on defeaters ({self.id!r})")
        restricted = {RoleFlag.ASSUMPTION, RoleFlag.POSSIBLY_MISSING}
        if self.role_flags & restricted and self.kind != NodeKind.CLAIM:
            raise MalformedNode(f"assumption/possibly-missing flags require a claim node ({self.id!r})")

    def with_flags(self, *flags: RoleFlag) -> "Node":
        return replace(self, role_flags=self.role_flags | frozenset(flags))


@dataclass(frozen=True)
class Link:
    source: NodeId
    target: NodeId
    kind: LinkKind


# Logical links run subclaim/evidence -> step and step -> parent.  A defeater
# may serve as the parent of a step so that defeaters can carry their own
# supporting subcases.
_LOGICAL_SOURCE = {NodeKind.CLAIM, NodeKind.EVIDENCE, NodeKind.ARGUMENT_STEP}
_ATTACK_TARGETS = {NodeKind.CLAIM, NodeKind.ARGUMENT_STEP, NodeKind.EVIDENCE, NodeKind.DEFEATER}


class CaseGraph:
    """Immutable argument graph rooted at a single top claim.

    Logical links form a DAG (cross links to shared subclaims are allowed);
    attack links may form cycles; embedded links are free-form narrative
    cross-references that never participate in any valuation.
    """

    def __init__(self, nodes, links, top_claim, snapshots=()):
        self._nodes = dict(nodes)
        self._links = tuple(links)
        self._top = top_claim
        self._snapshots = tuple(snapshots)
        self._validate_base()

    # -- constructors --------------------------------------------------------

    @classmethod
    def empty(cls, top: Node) -> "CaseGraph":
        if top.kind != NodeKind.CLAIM:
            raise MalformedNode("top claim must be a claim node")
        return cls({top.id: top}, (), top.id)

    # -- accessors -----------------------------------------------------------

    @property
    def nodes(self) -> dict:
        return dict(self._nodes)

    @property
    def links(self) -> tuple:
        return self._links

    @property
    def top_claim(self) -> NodeId:
        return self._top

    @property
    def snapshots(self) -> tuple:
        return self._snapshots

    def node(self, node_id: NodeId) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNodeId(node_id) from None

    def __contains__(self, node_id: NodeId) -> bool:
        return node_id in self._nodes

    def links_of_kind(self, kind: LinkKind) -> list:
        return [l for l in self._links if l.kind == kind]

    def logical_children(self, step_id: NodeId) -> list:
        """Nodes feeding an argument step (subclaims, side-claims, evidence)."""
        return [l.source for l in self._links if l.kind == LinkKind.LOGICAL and l.target == step_id]

    def logical_parent(self, step_id: NodeId) -> Optional[NodeId]:
        for l in self._links:
            if l.kind == LinkKind.LOGICAL and l.source == step_id:
                return l.target
        return None

    def supporting_steps(self, claim_id: NodeId) -> list:
        """Argument steps that deliver the given claim (or defeater)."""
        return [
            l.source
            for l in self._links
            if l.kind == LinkKind.LOGICAL
            and l.target == claim_id
            and self._nodes[l.source].kind == NodeKind.ARGUMENT_STEP
        ]

    def attackers(self, node_id: NodeId) -> list:
        return [l.source for l in self._links if l.kind == LinkKind.ATTACK and l.target == node_id]

    def attack_targets(self, defeater_id: NodeId) -> list:
        return [l.target for l in self._links if l.kind == LinkKind.ATTACK and l.source == defeater_id]

    def defeaters(self) -> list:
        return [n.id for n in self._nodes.values() if n.kind == NodeKind.DEFEATER]

    # -- structural equality ---------------------------------------------------

    def canonical(self) -> tuple:
        nodes = tuple(sorted((n.id, n) for n in self._nodes.values()))
        links = tuple(sorted((l.kind.value, l.source, l.target) for l in self._links))
        snaps = tuple((label, g.canonical()) for label, g in self._snapshots)
        return (self._top, nodes, links, snaps)

    def __eq__(self, other):
        return isinstance(other, CaseGraph) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self._top, len(self._nodes), len(self._links)))

    # -- invariants ------------------------------------------------------------

    def _validate_base(self):
        if self._top not in self._nodes:
            raise UnknownNodeId(f"top claim {self._top!r} not present")
        if self._nodes[self._top].kind != NodeKind.CLAIM:
            raise MalformedNode("top claim must be a claim node")
        for l in self._links:
            if l.source == self._top and l.kind == LinkKind.LOGICAL:
                raise IllegalEndpoints("top claim cannot be the source of a logical link")

    def _check_link(self, link: Link):
        if link.source not in self._nodes:
            raise UnknownNodeId(link.source)
        if link.target not in self._nodes:
            raise UnknownNodeId(link.target)
        if link.source == link.target and link.kind != LinkKind.ATTACK:
            raise IllegalEndpoints("self-links are only meaningful as attacks")
        src = self._nodes[link.source]
        tgt = self._nodes[link.target]
        if link.kind == LinkKind.LOGICAL:
            if src.kind not in _LOGICAL_SOURCE:
                raise IllegalEndpoints(f"{src.kind.value} cannot source a logical link")
            if src.kind == NodeKind.ARGUMENT_STEP:
                if tgt.kind not in (NodeKind.CLAIM, NodeKind.DEFEATER):
                    raise IllegalEndpoints("argument steps deliver claims (or defeaters)")
                if src.id == self._top:
                    raise IllegalEndpoints("top claim cannot be a subclaim")
                if self.logical_parent(src.id) is not None:
                    raise SecondParent(f"argument step {src.id!r} already has a parent claim")
            else:
                # claim or evidence feeding into something: must be a step
                if tgt.kind != NodeKind.ARGUMENT_STEP:
                    raise IllegalEndpoints(
                        f"{src.kind.value} -> {tgt.kind.value}: claims and evidence may only feed argument steps"
                    )
            if link.source == self._top:
                raise IllegalEndpoints("top claim cannot be the source of a logical link")
            if self._closes_logical_cycle(link):
                raise CycleIntroduced(f"{link.source} -> {link.target} closes a logical cycle")
        elif link.kind == LinkKind.ATTACK:
            if src.kind != NodeKind.DEFEATER:
                raise IllegalEndpoints("attack links must originate at a defeater")
            if tgt.kind not in _ATTACK_TARGETS:
                raise IllegalEndpoints(f"defeaters cannot attack {tgt.kind.value} nodes")
        # embedded links are unconstrained narrative references

    def _closes_logical_cycle(self, link: Link) -> bool:
        # DFS from target through existing logical links looking for source.
        adjacency = {}
        for l in self._links:
            if l.kind == LinkKind.LOGICAL:
                adjacency.setdefault(l.source, []).append(l.target)
        stack, seen = [link.target], set()
        while stack:
            cur = stack.pop()
            if cur == link.source:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(adjacency.get(cur, ()))
        return False

    # -- operations --------------------------------------------------------------

    def add_node(self, node: Node) -> "CaseGraph":
        if node.id in self._nodes:
            raise DuplicateId(node.id)
        nodes = dict(self._nodes)
        nodes[node.id] = node
        return CaseGraph(nodes, self._links, self._top, self._snapshots)

    def add_link(self, link: Link) -> "CaseGraph":
        self._check_link(link)
        if link in self._links:
            return self
        return CaseGraph(self._nodes, self._links + (link,), self._top, self._snapshots)

    def replace_node(self, node: Node) -> "CaseGraph":
        if node.id not in self._nodes:
            raise UnknownNodeId(node.id)
        nodes = dict(self._nodes)
        nodes[node.id] = node
        return CaseGraph(nodes, self._links, self._top, self._snapshots)

    def remove_link(self, link: Link) -> "CaseGraph":
        links = tuple(l for l in self._links if l != link)
        return CaseGraph(self._nodes, links, self._top, self._snapshots)

    def snapshot(self, label: str) -> "CaseGraph":
        """Append an immutable frozen copy of the current state under ``label``."""
        if any(existing == label for existing, _ in self._snapshots):
            raise DuplicateLabel(label)
        frozen = CaseGraph(self._nodes, self._links, self._top)
        return CaseGraph(self._nodes, self._links, self._top, self._snapshots + ((label, frozen),))

    def get_snapshot(self, label: str) -> "CaseGraph":
        for existing, frozen in self._snapshots:
            if existing == label:
                return frozen
        raise UnknownNodeId(f"no snapshot labelled {label!r}")


# --- templates -----------------------------------------------------------------

_PLACEHOLDER = re.compile(r"\$([A-Za-z_][A-Za-z0-9_]*)\$")


@dataclass(frozen=True)
class Template:
    """A generic case fragment whose texts contain ``$NAME$`` placeholders.

    ``preconditions`` name side-claims of the fragment that must be discharged
    before the instantiated subcase may be relied on; they are flagged in the
    instantiated output.
    """

    name: str
    parameters: tuple
    body: CaseGraph
    preconditions: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "preconditions", frozenset(self.preconditions))
        declared = set(self.parameters)
        for node in self.body.nodes.values():
            for found in _PLACEHOLDER.findall(node.narrative):
                if found not in declared:
                    raise UnboundPlaceholder(f"placeholder ${found}$ in {node.id!r} is not declared")
        for pre in self.preconditions:
            node = self.body.node(pre)
            if RoleFlag.SIDE_CLAIM not in node.role_flags:
                raise MalformedNode(f"precondition {pre!r} must be a side-claim of the fragment")


def instantiate_template(template: Template, bindings: dict, id_prefix: Optional[str] = None) -> CaseGraph:
    """Substitute placeholders and mint fresh node ids for one application.

    Every ``$NAME$`` occurrence in a narrative is textually replaced by its
    binding.  Precondition side-claims are flagged ``PRECONDITION`` in the
    output so downstream checks can insist they are discharged first.
    """
    missing = [p for p in template.parameters if p not in bindings]
    if missing:
        raise UnboundPlaceholder(f"missing bindings for: {', '.join(sorted(missing))}")

    prefix = id_prefix if id_prefix is not None else template.name
    mapping = {old: f"{prefix}.{i + 1}" for i, old in enumerate(sorted(template.body.nodes))}

    def substitute(text: str) -> str:
        return _PLACEHOLDER.sub(lambda m: str(bindings[m.group(1)]), text)

    new_nodes = {}
    for old_id, node in template.body.nodes.items():
        flags = node.role_flags
        if old_id in template.preconditions:
            flags = flags | {RoleFlag.PRECONDITION}
        new_nodes[mapping[old_id]] = replace(
            node, id=mapping[old_id], narrative=substitute(node.narrative), role_flags=flags
        )
    new_links = [Link(mapping[l.source], mapping[l.target], l.kind) for l in template.body.links]
    return CaseGraph(new_nodes, new_links, mapping[template.body.top_claim])


# --- convenience builders --------------------------------------------------------


def claim(node_id: NodeId, narrative: str = "", flags: Iterable = ()) -> Node:
    return Node(node_id, NodeKind.CLAIM, narrative=narrative, role_flags=frozenset(flags))


def evidence(node_id: NodeId, narrative: str = "") -> Node:
    return Node(node_id, NodeKind.EVIDENCE, narrative=narrative)


def step(node_id: NodeId, block: BlockKind, narrative: str = "", **kw) -> Node:
    return Node(node_id, NodeKind.ARGUMENT_STEP, block=block, narrative=narrative, **kw)


def defeater(node_id: NodeId, narrative: str = "", severity=None, resolution=Resolution.OPEN) -> Node:
    return Node(
        node_id,
        NodeKind.DEFEATER,
        narrative=narrative,
        severity=severity or Severity.DEFAULT,
        resolution=resolution,
    )
