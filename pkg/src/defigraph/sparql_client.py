"""SPARQL 1.1 protocol client.

Builds the parameterized definition query, executes it over HTTP against a
configured endpoint, and parses the standard results-JSON body into typed
bindings. The HTTP layer is pluggable so tests can replay recorded responses
or count requests without touching the network.
"""

from __future__ import annotations

import json
import logging
import re
import time
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import requests

if TYPE_CHECKING:
    from .definition_model import ResourceRef

logger = logging.getLogger(__name__)

SPARQL_RESULTS_JSON = "application/sparql-results+json"
DEFAULT_ENDPOINT_URL = "https://dbpedia.org/sparql"
DEFAULT_RESULT_LIMIT = 200
DEFAULT_USER_AGENT = "defigraph/0.1"

#: Characters that can never appear inside an angle-bracketed IRI (IRIREF
#: production). Anything carrying one of these must be rejected long before
#: it can reach query text.
IRI_FORBIDDEN_CHARS = frozenset('<>"{}|^`\\')

#: HTTP statuses worth retrying: the endpoint or an intermediary hiccuped.
RETRYABLE_STATUSES = frozenset({500, 502, 503, 504})

_BACKOFF_BASE = 0.5
_BACKOFF_CAP = 8.0

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:\S+$")
_HTTP_URL_RE = re.compile(r"^https?://\S+$")
_LANGUAGE_TAG_RE = re.compile(r"^[A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*$")
_LIMIT_RE = re.compile(r"\bLIMIT\s+(\d+)\s*$")


class SparqlError(Exception):
    """Base class for everything this module can raise."""


class Timeout(SparqlError):
    """No usable response within the configured timeout, retries included."""


class EndpointError(SparqlError):
    """The endpoint answered with an error status."""

    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


class MalformedResponse(SparqlError):
    """The response body is not valid SPARQL results-JSON."""


class TransportError(Exception):
    """Network-level failure inside a transport (connect error, socket timeout)."""


def is_absolute_iri(value: str) -> bool:
    return bool(_SCHEME_RE.match(value))


@dataclass(frozen=True)
class EndpointConfig:
    """Where and how to reach the SPARQL endpoint."""

    endpoint_url: str = DEFAULT_ENDPOINT_URL
    request_timeout: float = 30.0
    max_retries: int = 2
    user_agent: str = DEFAULT_USER_AGENT

    def __post_init__(self) -> None:
        if not _HTTP_URL_RE.match(self.endpoint_url):
            raise ValueError(f"endpoint_url must be an absolute http(s) IRI: {self.endpoint_url!r}")
        if self.request_timeout <= 0:
            raise ValueError("request_timeout must be positive")
        if not 0 <= self.max_retries <= 5:
            raise ValueError("max_retries must be between 0 and 5")


def check_grammar(text: str) -> bool:
    """Minimal SPARQL well-formedness check.

    Verifies that braces are balanced outside string literals and that every
    literal is closed on the line it starts. Angle-bracketed IRIs are skipped
    as opaque tokens: a single quote is a legal IRI character (O'Connor), so
    it must not open a literal there, while whitespace, braces and double
    quotes can never be part of an IRI and end the token early. Not a full
    parser; it exists to catch anything that slipped past input validation.
    """
    depth = 0
    quote: str | None = None
    escaped = False
    in_iri = False
    for ch in text:
        if quote is not None:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == quote:
                quote = None
            elif ch == "\n":
                return False
            continue
        if in_iri:
            if ch == ">":
                in_iri = False
                continue
            if ch == "'":
                continue
            if ch.isspace():
                in_iri = False  # "<" was a comparison operator, not an IRI
                continue
            if ch not in "{}\"":
                continue
            in_iri = False
        if ch == "<":
            in_iri = True
        elif ch in "'\"":
            quote = ch
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0 and quote is None


@dataclass(frozen=True)
class SparqlQuery:
    """A SELECT query plus the row cap it declares."""

    text: str
    result_limit: int

    def __post_init__(self) -> None:
        if self.result_limit < 1:
            raise ValueError("result_limit must be positive")
        if not check_grammar(self.text):
            raise ValueError("query text fails the grammar check")
        match = _LIMIT_RE.search(self.text)
        if not match or int(match.group(1)) != self.result_limit:
            raise ValueError("query text must end with a LIMIT clause equal to result_limit")


@dataclass(frozen=True)
class BindingValue:
    """One bound term in a result row: an IRI or a (possibly tagged) literal."""

    kind: str
    value: str
    language: str | None = None
    datatype: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("iri", "literal"):
            raise ValueError(f"unknown binding kind: {self.kind!r}")
        if self.kind == "iri":
            if not is_absolute_iri(self.value):
                raise ValueError(f"iri binding is not an absolute IRI: {self.value!r}")
            if self.language is not None or self.datatype is not None:
                raise ValueError("iri bindings carry neither language nor datatype")
        if self.language is not None and self.datatype is not None:
            raise ValueError("a literal cannot carry both language and datatype")


BindingRow = dict[str, BindingValue]


@dataclass(frozen=True)
class SparqlResultSet:
    """Parsed SELECT results: declared variables plus one row per binding."""

    variables: tuple[str, ...]
    rows: tuple[BindingRow, ...]

    def __post_init__(self) -> None:
        for name in self.variables:
            if not name or any(ch.isspace() for ch in name):
                raise ValueError(f"invalid variable name: {name!r}")
        known = set(self.variables)
        for row in self.rows:
            for key in row:
                if key not in known:
                    raise ValueError(f"row binds undeclared variable {key!r}")


_QUERY_TEMPLATE = """\
PREFIX dbo: <http://dbpedia.org/ontology/>
PREFIX owl: <http://www.w3.org/2002/07/owl#>
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>

SELECT ?abstract ?thumbnail ?sameAs ?seeAlso ?differentFrom ?type
WHERE {{
  OPTIONAL {{ <{iri}> dbo:abstract ?abstract . FILTER (lang(?abstract) = "{language}") }}
  OPTIONAL {{ <{iri}> dbo:thumbnail ?thumbnail . }}
  OPTIONAL {{ <{iri}> dbo:sameAs ?sameAs . }}
  OPTIONAL {{ <{iri}> rdfs:seeAlso ?seeAlso . }}
  OPTIONAL {{ <{iri}> owl:differentFrom ?differentFrom . }}
  OPTIONAL {{ <{iri}> rdf:type ?type . }}
}}
LIMIT {limit}"""


def build_definition_query(
    resource: "ResourceRef",
    language: str = "en",
    result_limit: int = DEFAULT_RESULT_LIMIT,
) -> SparqlQuery:
    """Build the single SELECT that fetches everything shown for a resource.

    One round trip retrieves the abstract (restricted to ``language``), the
    thumbnail, the three relation properties, and the subject's types, each
    behind its own OPTIONAL pattern so sparse resources still match.

    The resource IRI is embedded in angle brackets and is therefore checked
    here, once more, against the IRIREF-forbidden character set. Keyword
    normalization upstream guarantees this never fires for user input.
    """
    iri = resource.iri
    if not is_absolute_iri(iri):
        raise ValueError(f"resource IRI must be absolute: {iri!r}")
    bad = [ch for ch in iri if ch in IRI_FORBIDDEN_CHARS or ch.isspace() or ord(ch) < 0x21]
    if bad:
        raise ValueError(f"resource IRI contains characters forbidden inside an IRI: {bad!r}")
    if not _LANGUAGE_TAG_RE.match(language):
        raise ValueError(f"not a plausible BCP-47 language tag: {language!r}")
    if result_limit < 1:
        raise ValueError("result_limit must be positive")
    text = _QUERY_TEMPLATE.format(iri=iri, language=language, limit=result_limit)
    return SparqlQuery(text=text, result_limit=result_limit)


class HttpTransport:
    """Default transport: HTTP GET per the SPARQL protocol, via one pooled session."""

    def __init__(self) -> None:
        self._session = requests.Session()

    def get(
        self, url: str, params: dict[str, str], headers: dict[str, str], timeout: float
    ) -> tuple[int, bytes]:
        try:
            response = self._session.get(url, params=params, headers=headers, timeout=timeout)
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        return response.status_code, response.content


_default_transport: HttpTransport | None = None


def _get_default_transport() -> HttpTransport:
    global _default_transport
    if _default_transport is None:
        _default_transport = HttpTransport()
    return _default_transport


def execute(
    config: EndpointConfig,
    query: SparqlQuery,
    *,
    transport=None,
    sleep: Callable[[float], None] = time.sleep,
) -> SparqlResultSet:
    """Run ``query`` against the endpoint and parse the response.

    Sends the query as the ``query`` parameter of a GET request with an
    Accept header asking for results-JSON. Network failures and retryable
    statuses are retried with exponential backoff, never exceeding
    ``1 + max_retries`` requests in total.

    Raises Timeout when no response arrives at all, EndpointError for error
    statuses (after retries, where applicable), and MalformedResponse when a
    2xx body does not parse.
    """
    if transport is None:
        transport = _get_default_transport()
    headers = {"Accept": SPARQL_RESULTS_JSON, "User-Agent": config.user_agent}
    params = {"query": query.text}
    attempts = config.max_retries + 1
    last_failure: BaseException | int | None = None
    for attempt in range(attempts):
        if attempt:
            sleep(min(_BACKOFF_BASE * 2 ** (attempt - 1), _BACKOFF_CAP))
        try:
            status, body = transport.get(
                config.endpoint_url, params, headers, config.request_timeout
            )
        except TransportError as exc:
            logger.warning("attempt %d/%d failed: %s", attempt + 1, attempts, exc)
            last_failure = exc
            continue
        if 200 <= status < 300:
            return parse_results(body)
        if status in RETRYABLE_STATUSES:
            logger.warning("attempt %d/%d got HTTP %d", attempt + 1, attempts, status)
            last_failure = status
            continue
        raise EndpointError(f"endpoint returned HTTP {status}", status=status)
    if isinstance(last_failure, int):
        raise EndpointError(
            f"endpoint returned HTTP {last_failure} on all {attempts} attempts",
            status=last_failure,
        )
    raise Timeout(f"no response from {config.endpoint_url} after {attempts} attempts: {last_failure}")


def _binding_value(term: object) -> BindingValue:
    if not isinstance(term, dict):
        raise MalformedResponse(f"binding term is not an object: {term!r}")
    kind = term.get("type")
    value = term.get("value")
    if not isinstance(value, str):
        raise MalformedResponse("binding term has no string value")
    language = term.get("xml:lang")
    datatype = term.get("datatype")
    try:
        if kind == "uri":
            return BindingValue(kind="iri", value=value)
        if kind in ("literal", "typed-literal"):
            return BindingValue(kind="literal", value=value, language=language, datatype=datatype)
    except ValueError as exc:
        raise MalformedResponse(str(exc)) from exc
    raise MalformedResponse(f"unknown binding kind: {kind!r}")


def parse_results(body: bytes | str) -> SparqlResultSet:
    """Decode a SPARQL results-JSON document into a SparqlResultSet."""
    try:
        text = body.decode("utf-8") if isinstance(body, bytes) else body
    except UnicodeDecodeError as exc:
        raise MalformedResponse(f"response body is not UTF-8: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedResponse(f"response body is not JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise MalformedResponse("response is not a JSON object")
    head = payload.get("head")
    results = payload.get("results")
    if not isinstance(head, dict) or not isinstance(results, dict):
        raise MalformedResponse("response lacks head/results sections")
    variables = head.get("vars")
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise MalformedResponse("head.vars is missing or not a list of names")
    bindings = results.get("bindings")
    if not isinstance(bindings, list):
        raise MalformedResponse("results.bindings is missing or not a list")
    rows: list[BindingRow] = []
    for binding in bindings:
        if not isinstance(binding, dict):
            raise MalformedResponse(f"binding is not an object: {binding!r}")
        rows.append({var: _binding_value(term) for var, term in binding.items()})
    try:
        return SparqlResultSet(variables=tuple(variables), rows=tuple(rows))
    except ValueError as exc:
        raise MalformedResponse(str(exc)) from exc


def serialize_results(result_set: SparqlResultSet) -> bytes:
    """Encode a result set back into the standard results-JSON shape."""
    bindings = []
    for row in result_set.rows:
        binding: dict[str, dict[str, str]] = {}
        for var, term in row.items():
            if term.kind == "iri":
                binding[var] = {"type": "uri", "value": term.value}
            else:
                encoded = {"type": "literal", "value": term.value}
                if term.language is not None:
                    encoded["xml:lang"] = term.language
                if term.datatype is not None:
                    encoded["datatype"] = term.datatype
                binding[var] = encoded
        bindings.append(binding)
    document = {
        "head": {"vars": list(result_set.variables)},
        "results": {"bindings": bindings},
    }
    return json.dumps(document, indent=2, ensure_ascii=False).encode("utf-8")
