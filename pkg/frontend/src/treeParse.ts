/** Client-side validation and parsing of the hierarchical JSON-LD document.
 *
 * Mirrors the wire contract exactly: the fixed @context vocabulary, role and
 * color enumerations, unique ids, sorted children and a matching node count.
 * Anything else raises MalformedTreeError, which the view turns into an
 * error banner instead of a half-rendered graph.
 */

import type { ColorClass, GraphNode, GraphTree, NodeRole } from "./types.js";

const VOCAB = "https://defigraph.example/vocab#";

export const EXPECTED_CONTEXT = {
  label: `${VOCAB}label`,
  role: `${VOCAB}role`,
  color: `${VOCAB}color`,
  url: { "@id": `${VOCAB}url`, "@type": "@id" },
  tooltip: `${VOCAB}tooltip`,
  children: { "@id": `${VOCAB}children`, "@container": "@list" },
  nodeCount: `${VOCAB}nodeCount`,
  generatedAt: `${VOCAB}generatedAt`,
} as const;

const ROLES: ReadonlySet<string> = new Set(["root", "branch", "leaf"]);
const COLORS: ReadonlySet<string> = new Set(["default", "person", "contradiction"]);

const NODE_KEYS = new Set(["@id", "label", "role", "color", "url", "tooltip", "children"]);
const TOP_KEYS = new Set([...NODE_KEYS, "@context", "nodeCount", "generatedAt"]);

export class MalformedTreeError extends Error {}

function fail(message: string): never {
  throw new MalformedTreeError(message);
}

function deepEqual(a: unknown, b: unknown): boolean {
  if (a === b) return true;
  if (typeof a !== "object" || typeof b !== "object" || a === null || b === null) return false;
  const keysA = Object.keys(a as object).sort();
  const keysB = Object.keys(b as object).sort();
  if (keysA.length !== keysB.length) return false;
  return keysA.every(
    (key, i) =>
      key === keysB[i] &&
      deepEqual((a as Record<string, unknown>)[key], (b as Record<string, unknown>)[key]),
  );
}

function parseNode(payload: unknown, depth: number, seen: Set<string>): GraphNode {
  if (typeof payload !== "object" || payload === null || Array.isArray(payload)) {
    fail("node is not an object");
  }
  const obj = payload as Record<string, unknown>;
  const allowed = depth === 0 ? TOP_KEYS : NODE_KEYS;
  for (const key of Object.keys(obj)) {
    if (!allowed.has(key)) fail(`unknown key on node: ${key}`);
  }

  const id = obj["@id"];
  if (typeof id !== "string" || id === "") fail("node lacks a string @id");
  if (seen.has(id)) fail(`duplicate node id: ${id}`);
  seen.add(id);

  const label = obj["label"];
  if (typeof label !== "string") fail(`node ${id} lacks a string label`);
  const role = obj["role"];
  if (typeof role !== "string" || !ROLES.has(role)) fail(`invalid role on node ${id}`);
  const color = obj["color"];
  if (typeof color !== "string" || !COLORS.has(color)) fail(`invalid color on node ${id}`);
  const url = obj["url"];
  if (url !== undefined && typeof url !== "string") fail(`url on node ${id} is not a string`);
  const tooltip = obj["tooltip"];
  if (tooltip !== undefined && typeof tooltip !== "string") fail(`tooltip on node ${id} is not a string`);

  if (depth === 0) {
    if (role !== "root") fail("top-level node must have the root role");
    if (color !== "default") fail("root color must be default");
    if (tooltip === undefined) fail("root must carry a tooltip");
  } else if (role === "root") {
    fail(`nested node ${id} claims the root role`);
  }

  const rawChildren = obj["children"];
  if (!Array.isArray(rawChildren)) fail(`children of node ${id} is not a list`);
  if (role === "leaf" && rawChildren.length > 0) fail(`leaf node ${id} has children`);
  if (url !== undefined && role !== "leaf") fail(`non-leaf node ${id} carries a url`);

  const children = rawChildren.map((child) => parseNode(child, depth + 1, seen));
  for (let i = 1; i < children.length; i++) {
    const prev = children[i - 1]!;
    const here = children[i]!;
    if (prev.label > here.label || (prev.label === here.label && prev.id > here.id)) {
      fail(`children of node ${id} are not in sorted order`);
    }
  }

  return {
    id,
    label,
    role: role as NodeRole,
    color: color as ColorClass,
    ...(url !== undefined ? { url } : {}),
    ...(tooltip !== undefined ? { tooltip } : {}),
    children,
  };
}

function countNodes(node: GraphNode): number {
  return 1 + node.children.reduce((sum, child) => sum + countNodes(child), 0);
}

export function parseTree(document: unknown): GraphTree {
  if (typeof document === "string") {
    try {
      document = JSON.parse(document);
    } catch (error) {
      fail(`document is not JSON: ${String(error)}`);
    }
  }
  if (typeof document !== "object" || document === null || Array.isArray(document)) {
    fail("document is not a JSON object");
  }
  const obj = document as Record<string, unknown>;
  if (!deepEqual(obj["@context"], EXPECTED_CONTEXT)) {
    fail("document lacks the expected @context vocabulary");
  }
  const root = parseNode(document, 0, new Set());
  const nodeCount = obj["nodeCount"];
  if (typeof nodeCount !== "number" || !Number.isInteger(nodeCount)) {
    fail("nodeCount must be an integer");
  }
  const actual = countNodes(root);
  if (nodeCount !== actual) fail(`nodeCount is ${nodeCount} but the tree has ${actual} nodes`);
  const generatedAt = obj["generatedAt"];
  if (typeof generatedAt !== "string" || Number.isNaN(Date.parse(generatedAt))) {
    fail("generatedAt is not a parseable timestamp");
  }
  return { root, nodeCount, generatedAt };
}

export function nodeIds(tree: GraphTree): Set<string> {
  const ids = new Set<string>();
  const walk = (node: GraphNode): void => {
    ids.add(node.id);
    node.children.forEach(walk);
  };
  walk(tree.root);
  return ids;
}
