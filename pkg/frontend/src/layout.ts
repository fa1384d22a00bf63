/** Force-directed placement for the network viewport. Cosmetic only: the
 * layout is recomputed per page load and never persisted or sent anywhere. */

export interface LayoutPoint {
  x: number;
  y: number;
  vx: number;
  vy: number;
}

/** Small deterministic PRNG so layouts are reproducible in tests. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Nodes start on a ring with deterministic jitter inside the unit square. */
export function seedLayout(n: number, seed = 1): LayoutPoint[] {
  const rand = mulberry32(seed);
  const pts: LayoutPoint[] = [];
  for (let i = 0; i < n; i++) {
    const angle = (2 * Math.PI * i) / Math.max(1, n);
    pts.push({
      x: 0.5 + 0.35 * Math.cos(angle) + (rand() - 0.5) * 0.08,
      y: 0.5 + 0.35 * Math.sin(angle) + (rand() - 0.5) * 0.08,
      vx: 0,
      vy: 0,
    });
  }
  return pts;
}

export interface ForceOptions {
  spring: number;
  springLength: number;
  repulsion: number;
  gravity: number;
  friction: number;
  step: number;
}

export const DEFAULT_FORCES: ForceOptions = {
  spring: 0.08,
  springLength: 0.08,
  repulsion: 0.0006,
  gravity: 0.03,
  friction: 0.85,
  step: 1.0,
};

/** One integration step; mutates the points in place and keeps them inside
 * the unit square. Repulsion is bucketed on a coarse grid so a few thousand
 * nodes stay interactive. */
export function tick(
  pts: LayoutPoint[],
  edges: [number, number][],
  opts: ForceOptions = DEFAULT_FORCES,
): void {
  const n = pts.length;
  if (n === 0) return;

  const cells = Math.max(1, Math.floor(Math.sqrt(n / 2)));
  const grid = new Map<number, number[]>();
  for (let i = 0; i < n; i++) {
    const p = pts[i]!;
    const key =
      Math.min(cells - 1, Math.max(0, Math.floor(p.x * cells))) * cells +
      Math.min(cells - 1, Math.max(0, Math.floor(p.y * cells)));
    const bucket = grid.get(key);
    if (bucket) bucket.push(i);
    else grid.set(key, [i]);
  }

  for (let i = 0; i < n; i++) {
    const p = pts[i]!;
    const cx = Math.min(cells - 1, Math.max(0, Math.floor(p.x * cells)));
    const cy = Math.min(cells - 1, Math.max(0, Math.floor(p.y * cells)));
    for (let gx = cx - 1; gx <= cx + 1; gx++) {
      for (let gy = cy - 1; gy <= cy + 1; gy++) {
        if (gx < 0 || gy < 0 || gx >= cells || gy >= cells) continue;
        for (const j of grid.get(gx * cells + gy) ?? []) {
          if (j === i) continue;
          const q = pts[j]!;
          const dx = p.x - q.x;
          const dy = p.y - q.y;
          const d2 = dx * dx + dy * dy + 1e-6;
          const f = opts.repulsion / d2;
          p.vx += dx * f;
          p.vy += dy * f;
        }
      }
    }
    p.vx += (0.5 - p.x) * opts.gravity;
    p.vy += (0.5 - p.y) * opts.gravity;
  }

  for (const [a, b] of edges) {
    const p = pts[a];
    const q = pts[b];
    if (!p || !q) continue;
    const dx = q.x - p.x;
    const dy = q.y - p.y;
    const dist = Math.sqrt(dx * dx + dy * dy) + 1e-9;
    const f = opts.spring * (dist - opts.springLength);
    const ux = (dx / dist) * f;
    const uy = (dy / dist) * f;
    p.vx += ux;
    p.vy += uy;
    q.vx -= ux;
    q.vy -= uy;
  }

  for (const p of pts) {
    p.vx *= opts.friction;
    p.vy *= opts.friction;
    p.x += p.vx * opts.step;
    p.y += p.vy * opts.step;
    if (p.x < 0.02) p.x = 0.02;
    if (p.x > 0.98) p.x = 0.98;
    if (p.y < 0.02) p.y = 0.02;
    if (p.y > 0.98) p.y = 0.98;
  }
}

/** Mean squared deviation of edge lengths from the rest length; shrinks as
 * the layout settles, which the tests lean on. */
export function strain(
  pts: LayoutPoint[],
  edges: [number, number][],
  restLength = DEFAULT_FORCES.springLength,
): number {
  if (edges.length === 0) return 0;
  let total = 0;
  for (const [a, b] of edges) {
    const p = pts[a];
    const q = pts[b];
    if (!p || !q) continue;
    const d = Math.hypot(q.x - p.x, q.y - p.y) - restLength;
    total += d * d;
  }
  return total / edges.length;
}
