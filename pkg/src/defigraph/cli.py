"""Command-line front end: definition lookup, tree export, fixture recording."""

from __future__ import annotations

from datetime import datetime, timezone

import click

from .definition_model import KeywordError, ResourceNotFound, normalize_keyword, resolve_resource
from .fixtures import FixtureFile, FixtureTransport, load_fixture, save_fixture
from .pipeline import LookupConfig, LookupResult, run_lookup
from .sparql_client import (
    DEFAULT_ENDPOINT_URL,
    SPARQL_RESULTS_JSON,
    EndpointConfig,
    HttpTransport,
    SparqlError,
    TransportError,
    build_definition_query,
    parse_results,
)
from .tree_builder import ColorClass, GraphNode, GraphTree

EXIT_INVALID_KEYWORD = 2
EXIT_NOT_FOUND = 3
EXIT_NETWORK = 4

DOT_COLORS = {
    ColorClass.DEFAULT: "gray90",
    ColorClass.PERSON: "palegreen",
    ColorClass.CONTRADICTION: "salmon",
}


def _abort(code: int, message: str) -> None:
    click.echo(message, err=True)
    raise SystemExit(code)


def _lookup(word: str, endpoint: str, language: str, max_sentences: int, fixture_path: str | None) -> LookupResult:
    transport = None
    generated_at = None
    if fixture_path is not None:
        fixture = load_fixture(fixture_path)
        transport = FixtureTransport(fixture)
        generated_at = fixture.recorded_at
    config = LookupConfig(
        endpoint=EndpointConfig(endpoint_url=endpoint),
        language=language,
        max_sentences=max_sentences,
    )
    try:
        return run_lookup(word, config, transport=transport, generated_at=generated_at)
    except KeywordError as exc:
        _abort(EXIT_INVALID_KEYWORD, f"invalid keyword: {exc}")
    except ResourceNotFound as exc:
        _abort(EXIT_NOT_FOUND, str(exc))
    except SparqlError as exc:
        _abort(EXIT_NETWORK, f"endpoint failure: {exc}")
    raise AssertionError("unreachable")


def render_dot(tree: GraphTree) -> str:
    """Graphviz digraph with one edge per parent-child pair."""

    def esc(text: str) -> str:
        return text.replace("\\", "\\\\").replace('"', '\\"')

    lines = [
        "digraph definition_tree {",
        "  rankdir=LR;",
        '  node [shape=box, style="rounded,filled"];',
    ]

    def walk(node: GraphNode) -> None:
        lines.append(f'  "{esc(node.id)}" [label="{esc(node.label)}", fillcolor="{DOT_COLORS[node.color]}"];')
        for child in node.children:
            lines.append(f'  "{esc(node.id)}" -> "{esc(child.id)}";')
            walk(child)

    walk(tree.root)
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_text(tree: GraphTree) -> str:
    """Indented outline; the root label is the first line."""
    lines: list[str] = []

    def walk(node: GraphNode, depth: int) -> None:
        lines.append("  " * depth + node.label)
        for child in node.children:
            walk(child, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines) + "\n"


def _emit(data: bytes, output: str | None) -> None:
    if output is None:
        click.echo(data, nl=False)
    else:
        with open(output, "wb") as handle:
            handle.write(data)


def _common_options(command):
    command = click.option("--endpoint", default=DEFAULT_ENDPOINT_URL, show_default=True, help="SPARQL endpoint URL.")(command)
    command = click.option("--language", default="en", show_default=True, help="Abstract language tag.")(command)
    command = click.option("--max-sentences", default=3, show_default=True, type=int, help="Sentences kept from the abstract.")(command)
    command = click.option("--fixture", "fixture_path", default=None, type=click.Path(exists=True, dir_okay=False), help="Replay a recorded fixture instead of querying the endpoint.")(command)
    return command


@click.group()
def main() -> None:
    """Query a knowledge base for word definitions and related concepts."""


@main.command()
@click.argument("word")
@_common_options
def define(word: str, endpoint: str, language: str, max_sentences: int, fixture_path: str | None) -> None:
    """Print the definition of WORD."""
    result = _lookup(word, endpoint, language, max_sentences, fixture_path)
    click.echo(result.definition.term.label)
    click.echo(result.definition.abstract)
    if result.definition.thumbnail is not None:
        click.echo(f"Thumbnail: {result.definition.thumbnail}")


@main.command()
@click.argument("word")
@_common_options
@click.option("--format", "output_format", default="jsonld", show_default=True, type=click.Choice(["jsonld", "dot", "text"]))
@click.option("-o", "--output", default=None, type=click.Path(dir_okay=False, writable=True), help="Write to a file instead of stdout.")
def graph(word: str, endpoint: str, language: str, max_sentences: int, fixture_path: str | None, output_format: str, output: str | None) -> None:
    """Emit the explorable tree for WORD."""
    result = _lookup(word, endpoint, language, max_sentences, fixture_path)
    if output_format == "jsonld":
        _emit(result.tree_document, output)
    elif output_format == "dot":
        _emit(render_dot(result.tree).encode("utf-8"), output)
    else:
        _emit(render_text(result.tree).encode("utf-8"), output)


@main.command()
@click.argument("word")
@click.option("--endpoint", default=DEFAULT_ENDPOINT_URL, show_default=True, help="SPARQL endpoint URL.")
@click.option("--language", default="en", show_default=True, help="Abstract language tag.")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False, writable=True), help="Fixture file to write.")
def record(word: str, endpoint: str, language: str, output: str) -> None:
    """Record the endpoint's live response for WORD into a fixture file."""
    try:
        keyword = normalize_keyword(word)
    except KeywordError as exc:
        _abort(EXIT_INVALID_KEYWORD, f"invalid keyword: {exc}")
        return
    resource = resolve_resource(keyword)
    query = build_definition_query(resource, language)
    config = EndpointConfig(endpoint_url=endpoint)
    headers = {"Accept": SPARQL_RESULTS_JSON, "User-Agent": config.user_agent}
    try:
        status, body = HttpTransport().get(config.endpoint_url, {"query": query.text}, headers, config.request_timeout)
    except TransportError as exc:
        _abort(EXIT_NETWORK, f"endpoint failure: {exc}")
        return
    if not 200 <= status < 300:
        _abort(EXIT_NETWORK, f"endpoint returned HTTP {status}")
    try:
        parse_results(body)
    except SparqlError as exc:
        _abort(EXIT_NETWORK, f"response cannot be recorded: {exc}")
    fixture = FixtureFile(
        keyword=keyword.normalized,
        language=language,
        recorded_at=datetime.now(timezone.utc),
        request_query=query.text,
        response_body=body,
    )
    save_fixture(output, fixture)
    click.echo(f"recorded {keyword.normalized} -> {output}")


@main.command()
@click.option("--port", default=None, type=int, help="Listen port (overrides DEFIGRAPH_PORT).")
@click.option("--endpoint", default=None, help="SPARQL endpoint URL (overrides DEFIGRAPH_ENDPOINT_URL).")
@click.option("--fixture", "fixture_path", default=None, type=click.Path(exists=True, dir_okay=False), help="Serve from a recorded fixture; no endpoint calls.")
@click.option("--static-dir", default=None, help="Directory with the built web UI (overrides DEFIGRAPH_STATIC_DIR).")
def serve(port: int | None, endpoint: str | None, fixture_path: str | None, static_dir: str | None) -> None:
    """Run the HTTP service."""
    import uvicorn
    from dataclasses import replace

    from .service import ServiceConfig, create_app

    config = ServiceConfig.from_env()
    if port is not None:
        config = replace(config, listen_port=port)
    if endpoint is not None:
        config = replace(config, endpoint=EndpointConfig(endpoint_url=endpoint))
    if static_dir is not None:
        config = replace(config, static_dir=static_dir)
    transport = None
    generated_at = None
    if fixture_path is not None:
        fixture = load_fixture(fixture_path)
        transport = FixtureTransport(fixture)
        generated_at = fixture.recorded_at
    app = create_app(config, transport=transport, generated_at=generated_at)
    uvicorn.run(app, host="0.0.0.0", port=config.listen_port)


if __name__ == "__main__":
    main(prog_name="defigraph")
