"""Hierarchical tree construction and its JSON-LD wire format.

The tree puts the searched term at the root, one branch per relation kind,
and one leaf per related concept (plus a thumbnail leaf when available).
Construction is fully deterministic: children are sorted, ids are derived
from label paths, and serialization fixes key order and indentation so equal
trees always produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from urllib.parse import quote

from .definition_model import DefinitionResult, RelatedConcept, RelationKind


class MalformedTree(Exception):
    """A document does not satisfy the tree schema."""


class ColorClass(Enum):
    DEFAULT = "default"
    PERSON = "person"
    CONTRADICTION = "contradiction"


class NodeRole(Enum):
    ROOT = "root"
    BRANCH = "branch"
    LEAF = "leaf"


#: Human-readable branch headings; plain words instead of property IRIs.
BRANCH_LABELS = {
    RelationKind.SAME_AS: "same as",
    RelationKind.SEE_ALSO: "see also",
    RelationKind.DIFFERENT_FROM: "different from",
}

THUMBNAIL_LABEL = "thumbnail"

VOCAB_NS = "https://defigraph.example/vocab#"

#: The JSON-LD context every tree document carries, verbatim.
CONTEXT = {
    "label": VOCAB_NS + "label",
    "role": VOCAB_NS + "role",
    "color": VOCAB_NS + "color",
    "url": {"@id": VOCAB_NS + "url", "@type": "@id"},
    "tooltip": VOCAB_NS + "tooltip",
    "children": {"@id": VOCAB_NS + "children", "@container": "@list"},
    "nodeCount": VOCAB_NS + "nodeCount",
    "generatedAt": VOCAB_NS + "generatedAt",
}


@dataclass(frozen=True)
class GraphNode:
    id: str
    label: str
    role: NodeRole
    color: ColorClass
    url: str | None = None
    tooltip: str | None = None
    children: tuple[GraphNode, ...] = ()


@dataclass(frozen=True)
class GraphTree:
    root: GraphNode
    node_count: int
    generated_at: datetime


def _as_utc(moment: datetime) -> datetime:
    if moment.tzinfo is None:
        return moment.replace(tzinfo=timezone.utc)
    return moment.astimezone(timezone.utc)


def _encode(label: str) -> str:
    return quote(label, safe="")


def _unique_component(label: str, used: set[str]) -> str:
    base = _encode(label)
    candidate = base
    n = 1
    while candidate in used:
        n += 1
        candidate = f"{base}~{n}"
    used.add(candidate)
    return candidate


def _count_nodes(node: GraphNode) -> int:
    return 1 + sum(_count_nodes(child) for child in node.children)


def _leaf_color(concept: RelatedConcept) -> ColorClass:
    if concept.is_person:
        return ColorClass.PERSON
    if concept.kind is RelationKind.DIFFERENT_FROM:
        return ColorClass.CONTRADICTION
    return ColorClass.DEFAULT


def build_tree(
    definition: DefinitionResult,
    related: list[RelatedConcept],
    generated_at: datetime | None = None,
) -> GraphTree:
    """Assemble the tree for a definition and its related concepts.

    The root carries the term's label and the truncated abstract as tooltip.
    Every relation kind with at least one concept becomes a branch whose
    leaves are the concepts of that kind; external-link concepts keep their
    target IRI as url. A thumbnail, when present, becomes a leaf child of the
    root. Duplicate (kind, target IRI) pairs collapse to one leaf. Node ids
    are slash-joined, percent-encoded label paths; a repeated label within
    one parent gets a "~n" suffix to keep ids unique.
    """
    moment = _as_utc(generated_at if generated_at is not None else datetime.now(timezone.utc))

    seen: set[tuple[RelationKind, str]] = set()
    unique: list[RelatedConcept] = []
    for concept in related:
        key = (concept.kind, concept.target.iri)
        if key not in seen:
            seen.add(key)
            unique.append(concept)

    root_label = definition.term.label
    root_id = _encode(root_label)
    root_children: list[GraphNode] = []

    for kind in RelationKind:
        members = sorted(
            (c for c in unique if c.kind is kind),
            key=lambda c: (c.target.label, c.target.iri),
        )
        if not members:
            continue
        branch_label = BRANCH_LABELS[kind]
        branch_id = f"{root_id}/{_encode(branch_label)}"
        used: set[str] = set()
        leaves = tuple(
            GraphNode(
                id=f"{branch_id}/{_unique_component(c.target.label, used)}",
                label=c.target.label,
                role=NodeRole.LEAF,
                color=_leaf_color(c),
                url=c.target.iri if c.is_external_link else None,
            )
            for c in members
        )
        root_children.append(
            GraphNode(
                id=branch_id,
                label=branch_label,
                role=NodeRole.BRANCH,
                color=ColorClass.DEFAULT,
                children=leaves,
            )
        )

    if definition.thumbnail is not None:
        root_children.append(
            GraphNode(
                id=f"{root_id}/{_encode(THUMBNAIL_LABEL)}",
                label=THUMBNAIL_LABEL,
                role=NodeRole.LEAF,
                color=ColorClass.DEFAULT,
                url=definition.thumbnail,
            )
        )

    root_children.sort(key=lambda node: (node.label, node.id))
    root = GraphNode(
        id=root_id,
        label=root_label,
        role=NodeRole.ROOT,
        color=ColorClass.DEFAULT,
        tooltip=definition.abstract,
        children=tuple(root_children),
    )
    return GraphTree(root=root, node_count=_count_nodes(root), generated_at=moment)


def _format_timestamp(moment: datetime) -> str:
    return _as_utc(moment).isoformat().replace("+00:00", "Z")


def _parse_timestamp(value: object) -> datetime:
    if not isinstance(value, str):
        raise MalformedTree("generatedAt must be a string timestamp")
    text = value[:-1] + "+00:00" if value.endswith("Z") else value
    try:
        moment = datetime.fromisoformat(text)
    except ValueError as exc:
        raise MalformedTree(f"generatedAt is not an ISO-8601 timestamp: {value!r}") from exc
    if moment.tzinfo is None:
        raise MalformedTree("generatedAt must carry a UTC offset")
    return moment.astimezone(timezone.utc)


def _node_payload(node: GraphNode) -> dict:
    payload: dict = {
        "@id": node.id,
        "label": node.label,
        "role": node.role.value,
        "color": node.color.value,
    }
    if node.url is not None:
        payload["url"] = node.url
    if node.tooltip is not None:
        payload["tooltip"] = node.tooltip
    payload["children"] = [_node_payload(child) for child in node.children]
    return payload


def serialize_tree(tree: GraphTree) -> bytes:
    """Emit the UTF-8 JSON-LD document for a tree.

    Key order is fixed (@context, @id, label, role, color, url, tooltip,
    children, then nodeCount and generatedAt at the top level), indentation
    is two spaces, and nothing depends on iteration order, so equal trees
    serialize to identical bytes.
    """
    document: dict = {"@context": CONTEXT}
    document.update(_node_payload(tree.root))
    document["nodeCount"] = tree.node_count
    document["generatedAt"] = _format_timestamp(tree.generated_at)
    return (json.dumps(document, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


_NODE_KEYS = {"@id", "label", "role", "color", "url", "tooltip", "children"}
_TOP_KEYS = _NODE_KEYS | {"@context", "nodeCount", "generatedAt"}

_ROLES = {role.value: role for role in NodeRole}
_COLORS = {color.value: color for color in ColorClass}


def _node_from_payload(payload: object, depth: int, seen_ids: set[str]) -> GraphNode:
    if not isinstance(payload, dict):
        raise MalformedTree("node is not an object")
    allowed = _TOP_KEYS if depth == 0 else _NODE_KEYS
    unknown = set(payload) - allowed
    if unknown:
        raise MalformedTree(f"unknown keys on node: {sorted(unknown)}")

    node_id = payload.get("@id")
    label = payload.get("label")
    if not isinstance(node_id, str) or not node_id:
        raise MalformedTree("node lacks a string @id")
    if not isinstance(label, str):
        raise MalformedTree(f"node {node_id!r} lacks a string label")
    if node_id in seen_ids:
        raise MalformedTree(f"duplicate node id: {node_id!r}")
    seen_ids.add(node_id)

    role_value = payload.get("role")
    if role_value not in _ROLES:
        raise MalformedTree(f"invalid role {role_value!r} on node {node_id!r}")
    role = _ROLES[role_value]
    color_value = payload.get("color")
    if color_value not in _COLORS:
        raise MalformedTree(f"invalid color {color_value!r} on node {node_id!r}")
    color = _COLORS[color_value]

    url = payload.get("url")
    if url is not None and not isinstance(url, str):
        raise MalformedTree(f"url on node {node_id!r} is not a string")
    tooltip = payload.get("tooltip")
    if tooltip is not None and not isinstance(tooltip, str):
        raise MalformedTree(f"tooltip on node {node_id!r} is not a string")

    if depth == 0:
        if role is not NodeRole.ROOT:
            raise MalformedTree("top-level node must have the root role")
        if color is not ColorClass.DEFAULT:
            raise MalformedTree("root color must be default")
        if tooltip is None:
            raise MalformedTree("root must carry a tooltip")
    elif role is NodeRole.ROOT:
        raise MalformedTree(f"nested node {node_id!r} claims the root role")

    raw_children = payload.get("children")
    if not isinstance(raw_children, list):
        raise MalformedTree(f"children of node {node_id!r} is not a list")
    if role is NodeRole.LEAF and raw_children:
        raise MalformedTree(f"leaf node {node_id!r} has children")
    if url is not None and role is not NodeRole.LEAF:
        raise MalformedTree(f"non-leaf node {node_id!r} carries a url")

    children = tuple(_node_from_payload(child, depth + 1, seen_ids) for child in raw_children)
    ordering = [(child.label, child.id) for child in children]
    if ordering != sorted(ordering):
        raise MalformedTree(f"children of node {node_id!r} are not in sorted order")
    return GraphNode(
        id=node_id, label=label, role=role, color=color, url=url, tooltip=tooltip, children=children
    )


def parse_tree(document: bytes | str) -> GraphTree:
    """Reconstruct a GraphTree from its JSON-LD document.

    Validates the context vocabulary, roles, colors, id uniqueness, child
    ordering and the node count; raises MalformedTree on any violation.
    """
    try:
        text = document.decode("utf-8") if isinstance(document, bytes) else document
        payload = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedTree(f"document is not UTF-8 JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise MalformedTree("document is not a JSON object")
    if payload.get("@context") != CONTEXT:
        raise MalformedTree("document lacks the expected @context vocabulary")

    root = _node_from_payload(payload, depth=0, seen_ids=set())
    node_count = payload.get("nodeCount")
    if not isinstance(node_count, int) or isinstance(node_count, bool):
        raise MalformedTree("nodeCount must be an integer")
    actual = _count_nodes(root)
    if node_count != actual:
        raise MalformedTree(f"nodeCount is {node_count} but the tree has {actual} nodes")
    generated_at = _parse_timestamp(payload.get("generatedAt"))
    return GraphTree(root=root, node_count=node_count, generated_at=generated_at)
