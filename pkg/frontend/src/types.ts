/** Shared shapes for the two API endpoints and the JSON-LD tree document. */

export type NodeRole = "root" | "branch" | "leaf";
export type ColorClass = "default" | "person" | "contradiction";

export interface GraphNode {
  id: string;
  label: string;
  role: NodeRole;
  color: ColorClass;
  url?: string;
  tooltip?: string;
  children: GraphNode[];
}

export interface GraphTree {
  root: GraphNode;
  nodeCount: number;
  generatedAt: string;
}

/** Body of GET /api/define. */
export interface Definition {
  term: string;
  label: string;
  abstract: string;
  truncated: boolean;
  thumbnail?: string;
  language: string;
}

/** Error body shared by every API endpoint. */
export interface ApiError {
  code: string;
  message: string;
}
