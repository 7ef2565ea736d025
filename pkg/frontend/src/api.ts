/** Thin fetch client for the two JSON endpoints. */

import type { ApiError, Definition } from "./types.js";

export class ApiFailure extends Error {
  readonly body: ApiError;

  constructor(body: ApiError) {
    super(body.message);
    this.body = body;
  }
}

async function request(path: string, term: string, signal: AbortSignal): Promise<unknown> {
  let response: Response;
  try {
    response = await fetch(`${path}?term=${encodeURIComponent(term)}`, { signal });
  } catch (error) {
    if (error instanceof DOMException && error.name === "AbortError") throw error;
    throw new ApiFailure({ code: "network_error", message: String(error) });
  }
  if (!response.ok) {
    let body: ApiError = { code: "http_error", message: `HTTP ${response.status}` };
    try {
      const parsed = (await response.json()) as Partial<ApiError>;
      if (typeof parsed.code === "string" && typeof parsed.message === "string") {
        body = { code: parsed.code, message: parsed.message };
      }
    } catch {
      // keep the generic body
    }
    throw new ApiFailure(body);
  }
  return response.json();
}

export function fetchDefinition(term: string, signal: AbortSignal): Promise<Definition> {
  return request("/api/define", term, signal) as Promise<Definition>;
}

export async function fetchHealth(): Promise<{ status: string; version: string } | null> {
  try {
    const response = await fetch("/api/health");
    if (!response.ok) return null;
    return (await response.json()) as { status: string; version: string };
  } catch {
    return null;
  }
}

export function fetchGraphDocument(term: string, signal: AbortSignal): Promise<unknown> {
  return request("/api/graph", term, signal);
}
