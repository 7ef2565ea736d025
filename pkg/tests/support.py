"""Shared test helpers: independent oracles, fake transports, input generators.

The oracles here deliberately re-derive expectations from first principles
(regex scans, dict walks over raw JSON, brute-force grouping) so they never
share code paths with the implementation they check.
"""

from __future__ import annotations

import json
import random
import re
from pathlib import Path

from defigraph.definition_model import (
    DBPEDIA_RESOURCE_NS,
    DefinitionResult,
    RelatedConcept,
    RelationKind,
    ResourceRef,
)
from defigraph.sparql_client import TransportError
from defigraph.tree_builder import ColorClass, GraphNode, GraphTree, NodeRole

REPO_ROOT = Path(__file__).resolve().parent.parent
DOG_FIXTURE_PATH = REPO_ROOT / "fixtures" / "dog.json"
TREE_SCHEMA_PATH = REPO_ROOT / "schemas" / "tree.schema.json"


# --- transports -----------------------------------------------------------


class ScriptedTransport:
    """Plays back a fixed sequence of (status, body) pairs or exceptions.

    The last entry repeats once the script runs out. Counts every call.
    """

    def __init__(self, *script):
        assert script
        self.script = list(script)
        self.calls = 0

    def get(self, url, params, headers, timeout):
        item = self.script[min(self.calls, len(self.script) - 1)]
        self.calls += 1
        if isinstance(item, Exception):
            raise item
        return item


def refusing_transport() -> ScriptedTransport:
    return ScriptedTransport(TransportError("connection refused"))


def empty_results_transport() -> ScriptedTransport:
    body = json.dumps({"head": {"vars": ["abstract"]}, "results": {"bindings": []}}).encode()
    return ScriptedTransport((200, body))


class VirtualClock:
    def __init__(self, start: float = 1000.0):
        self.now = float(start)

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds


def no_sleep(_seconds: float) -> None:
    pass


# --- independent sentence oracle -------------------------------------------

_ORACLE_ABBREVIATIONS = {"e.g", "i.e", "etc", "dr", "mr", "mrs", "st", "vs", "cf", "al"}
_ORACLE_END = re.compile(r"[.?!](?=\s|$)")
_ORACLE_TOKEN = re.compile(r"(\S*)\Z")


def oracle_boundaries(text: str) -> list[int]:
    """Sentence-end indices, derived with regexes instead of a char scan."""
    out = []
    for match in _ORACLE_END.finditer(text):
        i = match.start()
        if text[i] == ".":
            token = _ORACLE_TOKEN.search(text[:i]).group(1)
            if re.fullmatch(r"[A-Z]", token):
                continue
            if token.lower() in _ORACLE_ABBREVIATIONS:
                continue
        out.append(i)
    return out


def oracle_sentence_count(text: str) -> int:
    bounds = oracle_boundaries(text)
    rest = text[bounds[-1] + 1 :] if bounds else text
    return len(bounds) + (1 if rest.strip() else 0)


# --- raw fixture walks ------------------------------------------------------


def raw_fixture_bindings(path: Path = DOG_FIXTURE_PATH) -> list[dict]:
    payload = json.loads(path.read_text(encoding="utf-8"))
    return json.loads(payload["response_body"])["results"]["bindings"]


def raw_fixture_abstract(path: Path = DOG_FIXTURE_PATH) -> str:
    for binding in raw_fixture_bindings(path):
        if "abstract" in binding:
            return binding["abstract"]["value"]
    raise AssertionError("fixture has no abstract binding")


def group_fixture_targets(path: Path = DOG_FIXTURE_PATH, cap: int = 25) -> dict[str, list[str]]:
    """Brute-force per-relation grouping straight off the raw JSON."""
    groups: dict[str, set[str]] = {"sameAs": set(), "seeAlso": set(), "differentFrom": set()}
    for binding in raw_fixture_bindings(path):
        for var in groups:
            if var in binding and binding[var]["type"] == "uri":
                groups[var].add(binding[var]["value"])
    return {var: sorted(values)[:cap] for var, values in groups.items()}


# --- input generators -------------------------------------------------------

KEYWORD_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyz"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "0123456789"
    "_-'().,!?éüñøλЖ中"
)


def make_keyword(rng: random.Random) -> str:
    return "".join(rng.choice(KEYWORD_ALPHABET) for _ in range(rng.randint(1, 24)))


LABEL_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKinNOPQ0123456789 _-/éü~"


def make_label(rng: random.Random) -> str:
    return "".join(rng.choice(LABEL_ALPHABET) for _ in range(rng.randint(1, 10)))


def make_concepts(rng: random.Random) -> list[RelatedConcept]:
    concepts: list[RelatedConcept] = []
    for _ in range(rng.randint(0, 12)):
        if concepts and rng.random() < 0.2:
            concepts.append(rng.choice(concepts))  # duplicate to exercise dedup
            continue
        kind = rng.choice(list(RelationKind))
        namespace = rng.choice([DBPEDIA_RESOURCE_NS, "http://other.example/id/"])
        iri = f"{namespace}{rng.randrange(10_000)}"
        label = make_label(rng) if rng.random() < 0.7 else "shared label"
        concepts.append(
            RelatedConcept(
                kind=kind,
                target=ResourceRef(iri=iri, label=label),
                is_person=rng.random() < 0.25,
                is_external_link=kind is RelationKind.SAME_AS
                or not iri.startswith(DBPEDIA_RESOURCE_NS),
            )
        )
    return concepts


def make_definition(rng: random.Random) -> DefinitionResult:
    name = make_label(rng).strip() or "Term"
    thumbnail = (
        f"http://images.example/{rng.randrange(1000)}.jpg" if rng.random() < 0.5 else None
    )
    return DefinitionResult(
        term=ResourceRef(iri=DBPEDIA_RESOURCE_NS + str(rng.randrange(10_000)), label=name),
        abstract="A generated abstract. It has two sentences.",
        full_abstract_available=bool(rng.getrandbits(1)),
        thumbnail=thumbnail,
        language="en",
    )


# --- independent tree checks -------------------------------------------------


def iter_nodes(node: GraphNode):
    yield node
    for child in node.children:
        yield from iter_nodes(child)


def assert_tree_invariants(tree: GraphTree) -> None:
    """Walk the tree and re-check every structural invariant from scratch."""
    nodes = list(iter_nodes(tree.root))
    ids = [node.id for node in nodes]
    assert len(ids) == len(set(ids)), "node ids must be unique"
    assert tree.node_count == len(nodes), "node_count must equal reachable nodes"
    assert tree.root.role is NodeRole.ROOT
    assert tree.root.color is ColorClass.DEFAULT
    assert tree.root.tooltip is not None
    for node in nodes:
        if node.role is NodeRole.LEAF:
            assert node.children == ()
        if node.url is not None:
            assert node.role is NodeRole.LEAF
        if node is not tree.root:
            assert node.role is not NodeRole.ROOT
        ordering = [(child.label, child.id) for child in node.children]
        assert ordering == sorted(ordering), "children must be sorted by (label, id)"


def expected_shape(concepts: list[RelatedConcept], thumbnail: str | None) -> tuple[int, int]:
    """Brute-force expected (branch count, leaf count) for build_tree input."""
    dedup = {(c.kind, c.target.iri): c for c in concepts}
    kinds = {kind for kind, _ in dedup}
    leaves = len(dedup) + (1 if thumbnail is not None else 0)
    return len(kinds), leaves
