"""Keyword validation and shaping of raw bindings into definitions.

Turns user input into a safe resource IRI, trims abstracts to a few
sentences, and groups the relation bindings into typed, deduplicated,
deterministically ordered related concepts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from urllib.parse import unquote

from .sparql_client import SparqlResultSet, is_absolute_iri

DBPEDIA_RESOURCE_NS = "http://dbpedia.org/resource/"
DEFAULT_MAX_SENTENCES = 3
DEFAULT_MAX_PER_KIND = 25

#: Characters rejected in keywords: everything IRIREF forbids plus the percent
#: sign, so a keyword can neither break out of its angle brackets nor smuggle
#: encoded bytes into the resource IRI.
FORBIDDEN_CHARS = frozenset('<>"{}|^`\\%')

#: rdf:type IRIs that mark the looked-up subject as a person.
PERSON_TYPE_IRIS = frozenset(
    {
        "http://dbpedia.org/ontology/Person",
        "http://xmlns.com/foaf/0.1/Person",
    }
)


class KeywordError(Exception):
    """Base class for keyword validation failures."""


class EmptyKeyword(KeywordError):
    pass


class MultiWordKeyword(KeywordError):
    pass


class InvalidCharacters(KeywordError):
    pass


class ResourceNotFound(Exception):
    """The knowledge base has no bindings at all for the resource."""


@dataclass(frozen=True)
class Keyword:
    raw: str
    normalized: str


@dataclass(frozen=True)
class ResourceRef:
    """An IRI naming a knowledge-base entity plus its display label."""

    iri: str
    label: str

    def __post_init__(self) -> None:
        if not is_absolute_iri(self.iri):
            raise ValueError(f"resource IRI must be absolute: {self.iri!r}")
        if not self.label:
            raise ValueError("resource label must be non-empty")


@dataclass(frozen=True)
class DefinitionResult:
    term: ResourceRef
    abstract: str
    full_abstract_available: bool
    thumbnail: str | None
    language: str


class RelationKind(Enum):
    """Typed edges to other resources; values are the query variable names."""

    SAME_AS = "sameAs"
    SEE_ALSO = "seeAlso"
    DIFFERENT_FROM = "differentFrom"


@dataclass(frozen=True)
class RelatedConcept:
    kind: RelationKind
    target: ResourceRef
    is_person: bool
    is_external_link: bool


def normalize_keyword(raw: str) -> Keyword:
    """Validate a search term and put it into resource-name form.

    Trims surrounding whitespace, rejects empty, multi-word and
    forbidden-character input, and uppercases the first letter only
    (knowledge-base naming convention; "iPhone" keeps its inner capitals).
    """
    trimmed = raw.strip()
    if not trimmed:
        raise EmptyKeyword("keyword is empty")
    if any(ch.isspace() for ch in trimmed):
        raise MultiWordKeyword(f"only single-word searches are supported: {trimmed!r}")
    bad = sorted({ch for ch in trimmed if ch in FORBIDDEN_CHARS or ord(ch) < 0x21 or ord(ch) == 0x7F})
    if bad:
        raise InvalidCharacters(f"keyword contains forbidden characters: {''.join(bad)!r}")
    normalized = trimmed[0].upper() + trimmed[1:]
    return Keyword(raw=raw, normalized=normalized)


def resolve_resource(keyword: Keyword, namespace: str = DBPEDIA_RESOURCE_NS) -> ResourceRef:
    """Map a normalized keyword to a resource by naming convention.

    No lookup service is consulted; the IRI is namespace plus the normalized
    name, and the label is that name with underscores read as spaces.
    """
    return ResourceRef(
        iri=namespace + keyword.normalized,
        label=keyword.normalized.replace("_", " "),
    )


#: Tokens whose trailing period does not end a sentence.
ABBREVIATIONS = frozenset({"e.g", "i.e", "etc", "dr", "mr", "mrs", "st", "vs", "cf", "al"})


def _sentence_boundaries(text: str) -> list[int]:
    """Indices of sentence-ending punctuation.

    A '.', '?' or '!' ends a sentence when followed by whitespace or the end
    of the text, unless the period closes a single uppercase letter (an
    initial) or a known abbreviation.
    """
    boundaries: list[int] = []
    for i, ch in enumerate(text):
        if ch not in ".?!":
            continue
        if i + 1 < len(text) and not text[i + 1].isspace():
            continue
        if ch == ".":
            j = i
            while j > 0 and not text[j - 1].isspace():
                j -= 1
            token = text[j:i]
            if len(token) == 1 and token.isalpha() and token.isupper():
                continue
            if token.lower() in ABBREVIATIONS:
                continue
        boundaries.append(i)
    return boundaries


def count_sentences(text: str) -> int:
    boundaries = _sentence_boundaries(text)
    tail_start = boundaries[-1] + 1 if boundaries else 0
    has_tail = bool(text[tail_start:].strip())
    return len(boundaries) + (1 if has_tail else 0)


def truncate_abstract(text: str, max_sentences: int) -> tuple[str, bool]:
    """Keep at most ``max_sentences`` sentences of ``text``.

    Returns the kept prefix and whether anything was cut. The prefix always
    ends exactly at a sentence boundary when truncation happens; when the
    text already fits, it is returned unchanged.
    """
    if max_sentences < 1:
        raise ValueError("max_sentences must be positive")
    if count_sentences(text) <= max_sentences:
        return text, False
    boundaries = _sentence_boundaries(text)
    cut = boundaries[max_sentences - 1] + 1
    return text[:cut], True


@dataclass(frozen=True)
class ShapingConfig:
    language: str = "en"
    max_sentences: int = DEFAULT_MAX_SENTENCES
    max_per_kind: int = DEFAULT_MAX_PER_KIND
    resource_namespace: str = DBPEDIA_RESOURCE_NS


def label_for_iri(iri: str) -> str:
    """Display label for an IRI: its decoded final segment, underscores as spaces."""
    segment = iri.rstrip("/").rsplit("/", 1)[-1]
    if "#" in segment:
        segment = segment.rsplit("#", 1)[-1]
    segment = unquote(segment).replace("_", " ").strip()
    return segment or iri


def shape_results(
    results: SparqlResultSet,
    term: ResourceRef,
    config: ShapingConfig = ShapingConfig(),
) -> tuple[DefinitionResult, list[RelatedConcept]]:
    """Turn parsed bindings into a definition plus related concepts.

    Picks the first abstract in the requested language, truncates it, and
    groups relation targets per kind: deduplicated by IRI, capped at
    ``max_per_kind`` keeping the lexicographically smallest IRIs, and sorted,
    so the output depends only on the input content.

    Raises ResourceNotFound when the result set has no rows at all.
    """
    if not results.rows:
        raise ResourceNotFound(f"no data found for {term.iri}")

    abstract_source = ""
    for row in results.rows:
        value = row.get("abstract")
        if value is not None and value.kind == "literal":
            if value.language is None or value.language.lower() == config.language.lower():
                abstract_source = value.value
                break

    thumbnail: str | None = None
    for row in results.rows:
        value = row.get("thumbnail")
        if value is not None and value.kind == "iri":
            thumbnail = value.value
            break

    subject_is_person = any(
        value.kind == "iri" and value.value in PERSON_TYPE_IRIS
        for row in results.rows
        if (value := row.get("type")) is not None
    )

    related: list[RelatedConcept] = []
    for kind in RelationKind:
        iris = sorted(
            {
                value.value
                for row in results.rows
                if (value := row.get(kind.value)) is not None and value.kind == "iri"
            }
        )[: config.max_per_kind]
        for iri in iris:
            related.append(
                RelatedConcept(
                    kind=kind,
                    target=ResourceRef(iri=iri, label=label_for_iri(iri)),
                    is_person=subject_is_person,
                    is_external_link=(
                        kind is RelationKind.SAME_AS
                        or not iri.startswith(config.resource_namespace)
                    ),
                )
            )

    abstract, truncated = truncate_abstract(abstract_source, config.max_sentences)
    definition = DefinitionResult(
        term=term,
        abstract=abstract,
        full_abstract_available=truncated,
        thumbnail=thumbnail,
        language=config.language,
    )
    return definition, related
