/** The network viewport: force-directed dots colored by each node's status
 * at the selected instant. Layout is cosmetic, recomputed per load. */

import {
  DEFAULT_FORCES,
  LayoutPoint,
  seedLayout,
  strain,
  tick,
} from "../layout.js";
import {
  AppState,
  colorOf,
  instantFor,
  SlotState,
  statusesAt,
} from "../state.js";

const MAX_DRAWN_NODES = 4000;

export class NetView {
  private points: LayoutPoint[] = [];
  private edges: [number, number][] = [];
  private digest: string | null = null;
  private ticksLeft = 0;
  private raf = 0;
  private focusSlot = 0;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly legend: HTMLElement,
  ) {}

  setFocusSlot(index: number): void {
    this.focusSlot = index;
  }

  /** Re-seed the layout when the topology changes, then repaint. */
  render(state: AppState): void {
    const topo = state.topology;
    if (!topo) {
      this.digest = null;
      this.points = [];
      this.edges = [];
      const ctx = this.canvas.getContext("2d");
      if (ctx) ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
      this.legend.textContent = "";
      return;
    }
    if (topo.digest !== this.digest) {
      this.digest = topo.digest;
      let seed = 0;
      for (let i = 0; i < Math.min(8, topo.digest.length); i++) {
        seed = (seed * 31 + topo.digest.charCodeAt(i)) >>> 0;
      }
      const n = Math.min(topo.nodes, MAX_DRAWN_NODES);
      this.points = seedLayout(n, seed || 1);
      this.edges = topo.edge_pairs.filter(([u, v]) => u < n && v < n);
      this.ticksLeft = Math.min(400, 60 + this.points.length);
      this.animate(state);
      return;
    }
    this.paint(state);
  }

  private animate(state: AppState): void {
    cancelAnimationFrame(this.raf);
    const run = () => {
      if (this.ticksLeft <= 0) return;
      const before = strain(this.points, this.edges);
      for (let i = 0; i < 4 && this.ticksLeft > 0; i++) {
        tick(this.points, this.edges, DEFAULT_FORCES);
        this.ticksLeft--;
      }
      this.paint(state);
      if (strain(this.points, this.edges) < before * 1.0001) {
        this.raf = requestAnimationFrame(run);
      }
    };
    this.raf = requestAnimationFrame(run);
  }

  paint(state: AppState): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#fafbfc";
    ctx.fillRect(0, 0, width, height);

    const slot: SlotState | undefined =
      state.slots[this.focusSlot] ?? state.slots[0];
    const instant = slot ? instantFor(state, slot) : -1;
    const colors =
      slot && instant >= 0 ? statusesAt(slot, instant) : {};

    ctx.strokeStyle = "rgba(120,130,150,0.25)";
    ctx.lineWidth = 0.6;
    ctx.beginPath();
    for (const [u, v] of this.edges) {
      const p = this.points[u];
      const q = this.points[v];
      if (!p || !q) continue;
      ctx.moveTo(p.x * width, p.y * height);
      ctx.lineTo(q.x * width, q.y * height);
    }
    ctx.stroke();

    const r = this.points.length > 800 ? 2 : 4;
    this.points.forEach((p, i) => {
      ctx.beginPath();
      ctx.arc(p.x * width, p.y * height, r, 0, 2 * Math.PI);
      ctx.fillStyle = colorOf(colors[String(i)] ?? 0);
      ctx.fill();
    });

    this.legend.textContent = "";
    if (slot) {
      for (const [code, name] of Object.entries(slot.statuses)) {
        const item = document.createElement("span");
        item.className = "legend-item";
        const dot = document.createElement("span");
        dot.className = "legend-dot";
        dot.style.background = colorOf(Number(code));
        item.append(dot, document.createTextNode(name));
        this.legend.append(item);
      }
      const note = document.createElement("span");
      note.className = "legend-note";
      note.textContent =
        instant >= 0 ? `showing iteration ${instant}` : "not started";
      this.legend.append(note);
    }
  }
}
