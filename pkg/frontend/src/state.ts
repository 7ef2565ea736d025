/** Pure view state and its transitions.
 *
 * Two invariants hold after every transition: a loading state never carries
 * an error, and the collapsed set only references ids present in the current
 * tree. Collapsing is pure view state; toggling never refetches anything.
 */

import { nodeIds } from "./treeParse.js";
import type { ApiError, Definition, GraphTree } from "./types.js";

export interface ViewState {
  query: string;
  loading: boolean;
  definition: Definition | null;
  tree: GraphTree | null;
  collapsed: ReadonlySet<string>;
  error: ApiError | null;
}

export const initialState: ViewState = {
  query: "",
  loading: false,
  definition: null,
  tree: null,
  collapsed: new Set(),
  error: null,
};

export type Action =
  | { type: "input"; text: string }
  | { type: "searchStarted"; query: string }
  | { type: "definitionLoaded"; definition: Definition }
  | { type: "treeLoaded"; tree: GraphTree }
  | { type: "searchFailed"; error: ApiError }
  | { type: "toggleNode"; id: string };

// mirror of the server-side keyword rules, so obviously bad input never
// leaves the browser
const FORBIDDEN = new Set(['<', '>', '"', "{", "}", "|", "^", "`", "\\", "%"]);

export function validateKeyword(text: string): ApiError | null {
  const trimmed = text.trim();
  if (trimmed === "") {
    return { code: "empty_keyword", message: "Please enter a word to search for." };
  }
  if (/\s/.test(trimmed)) {
    return { code: "multi_word_keyword", message: "Only single-word searches are supported." };
  }
  for (const ch of trimmed) {
    if (FORBIDDEN.has(ch) || ch.charCodeAt(0) < 0x21 || ch.charCodeAt(0) === 0x7f) {
      return { code: "invalid_characters", message: `The character "${ch}" is not allowed.` };
    }
  }
  return null;
}

export function reduce(state: ViewState, action: Action): ViewState {
  switch (action.type) {
    case "input":
      return { ...state, query: action.text };
    case "searchStarted":
      return { ...state, query: action.query, loading: true, error: null };
    case "definitionLoaded":
      return { ...state, definition: action.definition };
    case "treeLoaded":
      return { ...state, tree: action.tree, loading: false, error: null, collapsed: new Set() };
    case "searchFailed":
      return {
        ...state,
        loading: false,
        error: action.error,
        definition: null,
        tree: null,
        collapsed: new Set(),
      };
    case "toggleNode": {
      if (state.tree === null || !nodeIds(state.tree).has(action.id)) {
        return state;
      }
      const collapsed = new Set(state.collapsed);
      if (collapsed.has(action.id)) {
        collapsed.delete(action.id);
      } else {
        collapsed.add(action.id);
      }
      return { ...state, collapsed };
    }
  }
}
