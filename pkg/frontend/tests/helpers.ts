import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { parseTree } from "../src/treeParse.js";
import type { GraphTree } from "../src/types.js";

export function fixturePath(name: string): string {
  return fileURLToPath(new URL(`../fixtures/${name}`, import.meta.url));
}

export function loadFixtureDocument(name: string): unknown {
  return JSON.parse(readFileSync(fixturePath(name), "utf-8"));
}

export function loadFixtureTree(name: string): GraphTree {
  return parseTree(loadFixtureDocument(name));
}

/** Small deterministic PRNG (mulberry32) for model-based tests. */
export function rng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function pick<T>(random: () => number, items: readonly T[]): T {
  const index = Math.floor(random() * items.length);
  return items[Math.min(index, items.length - 1)]!;
}
