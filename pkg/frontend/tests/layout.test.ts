import { describe, expect, it } from "vitest";
import {
  DEFAULT_FORCES,
  mulberry32,
  seedLayout,
  strain,
  tick,
} from "../src/layout.js";

function ring(n: number): [number, number][] {
  const edges: [number, number][] = [];
  for (let i = 0; i < n; i++) edges.push([i, (i + 1) % n]);
  return edges;
}

describe("force layout", () => {
  it("the generator is deterministic per seed", () => {
    const a = mulberry32(42);
    const b = mulberry32(42);
    const c = mulberry32(43);
    const fromA = [a(), a(), a(), a(), a()];
    const fromB = [b(), b(), b(), b(), b()];
    expect(fromA).toEqual(fromB);
    expect(fromA).not.toEqual([c(), c(), c(), c(), c()]);
    for (const v of fromA) {
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThan(1);
    }
  });

  it("seeding is reproducible and starts inside the unit square", () => {
    const a = seedLayout(12, 7);
    const b = seedLayout(12, 7);
    expect(a).toEqual(b);
    expect(seedLayout(12, 8)).not.toEqual(a);
    for (const p of a) {
      expect(p.x).toBeGreaterThan(0);
      expect(p.x).toBeLessThan(1);
      expect(p.y).toBeGreaterThan(0);
      expect(p.y).toBeLessThan(1);
    }
  });

  it("integration keeps every node inside the viewport", () => {
    const pts = seedLayout(40, 3);
    const edges = ring(40);
    // exaggerated forces try to fling nodes out of the box
    const rough = { ...DEFAULT_FORCES, repulsion: 0.01, spring: 0.4 };
    for (let i = 0; i < 120; i++) tick(pts, edges, rough);
    for (const p of pts) {
      expect(p.x).toBeGreaterThanOrEqual(0.02);
      expect(p.x).toBeLessThanOrEqual(0.98);
      expect(p.y).toBeGreaterThanOrEqual(0.02);
      expect(p.y).toBeLessThanOrEqual(0.98);
    }
  });

  it("settling reduces edge strain", () => {
    const pts = seedLayout(16, 11);
    const edges = ring(16);
    const before = strain(pts, edges);
    for (let i = 0; i < 150; i++) tick(pts, edges);
    const after = strain(pts, edges);
    expect(after).toBeLessThan(before);
  });

  it("strain of an empty edge set is zero", () => {
    expect(strain(seedLayout(5, 1), [])).toBe(0);
  });

  it("ignores edges that point outside the drawn subset", () => {
    const pts = seedLayout(3, 2);
    const snapshot = JSON.parse(JSON.stringify(pts));
    tick(pts, [[0, 99]], DEFAULT_FORCES);
    // the dangling edge contributes no force; remaining motion comes from
    // gravity and repulsion only, so nothing references the missing node
    expect(pts).toHaveLength(3);
    expect(strain(pts, [[0, 99]])).toBe(0);
    expect(snapshot).toHaveLength(3);
  });
});
