"""Recorded endpoint responses: file format and replay transport.

A fixture stores one raw results-JSON body together with the exact query
that produced it, so offline runs replay real data and stale fixtures are
detectable when the query template changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .sparql_client import parse_results


@dataclass(frozen=True)
class FixtureFile:
    keyword: str
    language: str
    recorded_at: datetime
    request_query: str
    response_body: bytes


def save_fixture(path: str | Path, fixture: FixtureFile) -> None:
    """Write a fixture as a UTF-8 JSON file with a stable key order."""
    recorded = fixture.recorded_at.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")
    document = {
        "keyword": fixture.keyword,
        "language": fixture.language,
        "recorded_at": recorded,
        "request_query": fixture.request_query,
        "response_body": fixture.response_body.decode("utf-8"),
    }
    Path(path).write_text(json.dumps(document, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def load_fixture(path: str | Path) -> FixtureFile:
    """Read a fixture file; its response body must parse as results-JSON."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    for key in ("keyword", "language", "recorded_at", "request_query", "response_body"):
        if not isinstance(payload.get(key), str):
            raise ValueError(f"fixture field {key!r} is missing or not a string")
    recorded_raw = payload["recorded_at"]
    if recorded_raw.endswith("Z"):
        recorded_raw = recorded_raw[:-1] + "+00:00"
    recorded_at = datetime.fromisoformat(recorded_raw)
    if recorded_at.tzinfo is None:
        recorded_at = recorded_at.replace(tzinfo=timezone.utc)
    body = payload["response_body"].encode("utf-8")
    parse_results(body)  # fixtures must always replay cleanly
    return FixtureFile(
        keyword=payload["keyword"],
        language=payload["language"],
        recorded_at=recorded_at.astimezone(timezone.utc),
        request_query=payload["request_query"],
        response_body=body,
    )


class FixtureTransport:
    """Transport that replays one recorded body for every request and counts calls."""

    def __init__(self, fixture: FixtureFile):
        self.fixture = fixture
        self.calls = 0

    def get(self, url, params, headers, timeout) -> tuple[int, bytes]:
        self.calls += 1
        return 200, self.fixture.response_body
