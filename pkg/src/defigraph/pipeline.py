"""The lookup pipeline shared by the HTTP service and the CLI.

normalize keyword -> resolve resource -> query endpoint -> shape bindings ->
build tree -> serialize document. Everything downstream of the endpoint call
is deterministic, so one upstream response always yields the same bytes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from datetime import datetime
from typing import Callable

from .definition_model import (
    DBPEDIA_RESOURCE_NS,
    DefinitionResult,
    Keyword,
    RelatedConcept,
    ShapingConfig,
    normalize_keyword,
    resolve_resource,
    shape_results,
)
from .sparql_client import (
    DEFAULT_RESULT_LIMIT,
    EndpointConfig,
    build_definition_query,
    execute,
)
from .tree_builder import GraphTree, build_tree, serialize_tree


@dataclass(frozen=True)
class LookupConfig:
    endpoint: EndpointConfig = EndpointConfig()
    language: str = "en"
    max_sentences: int = 3
    max_per_kind: int = 25
    result_limit: int = DEFAULT_RESULT_LIMIT
    resource_namespace: str = DBPEDIA_RESOURCE_NS


@dataclass(frozen=True)
class LookupResult:
    keyword: Keyword
    definition: DefinitionResult
    related: tuple[RelatedConcept, ...]
    tree: GraphTree
    tree_document: bytes


def run_lookup(
    raw_term: str,
    config: LookupConfig,
    *,
    transport=None,
    generated_at: datetime | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> LookupResult:
    """Run the whole pipeline for one search term.

    ``generated_at`` pins the tree timestamp; replay modes pass the fixture's
    recording time so reruns are byte-identical.

    Propagates KeywordError, ResourceNotFound and the endpoint errors
    unchanged; callers map them to exit codes or HTTP statuses.
    """
    keyword = normalize_keyword(raw_term)
    term = resolve_resource(keyword, config.resource_namespace)
    query = build_definition_query(term, config.language, config.result_limit)
    results = execute(config.endpoint, query, transport=transport, sleep=sleep)
    shaping = ShapingConfig(
        language=config.language,
        max_sentences=config.max_sentences,
        max_per_kind=config.max_per_kind,
        resource_namespace=config.resource_namespace,
    )
    definition, related = shape_results(results, term, shaping)
    tree = build_tree(definition, related, generated_at=generated_at)
    return LookupResult(
        keyword=keyword,
        definition=definition,
        related=tuple(related),
        tree=tree,
        tree_document=serialize_tree(tree),
    )
