/** Scene computation for the tree visualization.
 *
 * Produces a left-to-right hierarchical layout: visible leaves (including
 * collapsed inner nodes) take consecutive rows, parents sit at the mean of
 * their children. The scene is plain data so it can be tested without a DOM
 * and rendered as SVG by the view.
 */

import type { ColorClass, GraphNode, GraphTree } from "./types.js";

export const LEVEL_SPACING = 220;
export const ROW_SPACING = 44;
export const MARGIN = 40;

export const COLOR_FILLS: Record<ColorClass, string> = {
  default: "#9ecae9",
  person: "#4caf50",
  contradiction: "#e53935",
};

export interface SceneNode {
  id: string;
  label: string;
  x: number;
  y: number;
  color: ColorClass;
  fill: string;
  isLink: boolean;
  url?: string;
  tooltip?: string;
  collapsed: boolean;
  hasChildren: boolean;
}

export interface SceneEdge {
  from: string;
  to: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
  width: number;
  height: number;
}

interface Placed {
  node: GraphNode;
  depth: number;
  y: number;
  children: Placed[];
}

export function renderTree(tree: GraphTree, collapsed: ReadonlySet<string>): Scene {
  let nextRow = 0;
  let maxDepth = 0;

  const place = (node: GraphNode, depth: number): Placed => {
    maxDepth = Math.max(maxDepth, depth);
    const expanded = node.children.length > 0 && !collapsed.has(node.id);
    if (!expanded) {
      return { node, depth, y: MARGIN + nextRow++ * ROW_SPACING, children: [] };
    }
    const children = node.children.map((child) => place(child, depth + 1));
    const y = children.reduce((sum, child) => sum + child.y, 0) / children.length;
    return { node, depth, y, children };
  };

  const root = place(tree.root, 0);
  const nodes: SceneNode[] = [];
  const edges: SceneEdge[] = [];

  const emit = (placed: Placed): void => {
    const x = MARGIN + placed.depth * LEVEL_SPACING;
    nodes.push({
      id: placed.node.id,
      label: placed.node.label,
      x,
      y: placed.y,
      color: placed.node.color,
      fill: COLOR_FILLS[placed.node.color],
      isLink: placed.node.url !== undefined,
      ...(placed.node.url !== undefined ? { url: placed.node.url } : {}),
      ...(placed.node.tooltip !== undefined ? { tooltip: placed.node.tooltip } : {}),
      collapsed: collapsed.has(placed.node.id) && placed.node.children.length > 0,
      hasChildren: placed.node.children.length > 0,
    });
    for (const child of placed.children) {
      edges.push({
        from: placed.node.id,
        to: child.node.id,
        x1: x,
        y1: placed.y,
        x2: MARGIN + child.depth * LEVEL_SPACING,
        y2: child.y,
      });
      emit(child);
    }
  };
  emit(root);

  return {
    nodes,
    edges,
    width: MARGIN * 2 + (maxDepth + 1) * LEVEL_SPACING,
    height: MARGIN * 2 + Math.max(nextRow - 1, 0) * ROW_SPACING,
  };
}

export function visibleIds(tree: GraphTree, collapsed: ReadonlySet<string>): Set<string> {
  const ids = new Set<string>();
  const walk = (node: GraphNode): void => {
    ids.add(node.id);
    if (!collapsed.has(node.id)) {
      node.children.forEach(walk);
    }
  };
  walk(tree.root);
  return ids;
}
