/** Per-model result blocks: model identity, its parameters, and the two
 * linked charts. Clicking or dragging on a chart selects the time instant
 * every view then shows. */

import {
  AppState,
  countsAt,
  instantFor,
  prevalencePoints,
  SlotState,
  trendPoints,
} from "../state.js";
import { chartModel, paintChart } from "./charts.js";

export class ModelBlocks {
  constructor(
    private readonly root: HTMLElement,
    private readonly actions: {
      onScrub: (t: number | null) => void;
      onFocus: (slotIndex: number) => void;
    },
  ) {}

  render(state: AppState): void {
    this.root.textContent = "";
    for (const [index, slot] of state.slots.entries()) {
      this.root.append(this.block(state, slot, index));
    }
  }

  private block(
    state: AppState,
    slot: SlotState,
    index: number,
  ): HTMLElement {
    const box = document.createElement("section");
    box.className = "model-block";

    const head = document.createElement("h3");
    head.textContent = `${slot.name} #${slot.id}`;
    head.addEventListener("click", () => this.actions.onFocus(index));
    box.append(head);

    const params = document.createElement("p");
    params.className = "muted";
    const shown = Object.entries(slot.params)
      .map(([k, v]) => `${k}=${String(v)}`)
      .join(", ");
    params.textContent =
      (shown ? shown + ", " : "") + `seed=${slot.seed}`;
    box.append(params);

    const instant = instantFor(state, slot);
    const counts = instant >= 0 ? countsAt(slot, instant) : {};
    const census = document.createElement("p");
    census.className = "census";
    census.textContent =
      instant < 0
        ? "no iterations yet"
        : `iteration ${instant}: ` +
          Object.entries(slot.statuses)
            .map(([code, name]) => `${name} ${counts[code] ?? 0}`)
            .join(", ");
    box.append(census);

    const charts = document.createElement("div");
    charts.className = "charts";
    charts.append(
      this.chart(state, slot, "trend", trendPoints(slot)),
      this.chart(state, slot, "prevalence", prevalencePoints(slot)),
    );
    box.append(charts);
    return box;
  }

  private chart(
    state: AppState,
    slot: SlotState,
    title: string,
    series: Record<string, [number, number][]>,
  ): HTMLElement {
    const wrap = document.createElement("figure");
    const cap = document.createElement("figcaption");
    cap.textContent = title;
    const canvas = document.createElement("canvas");
    canvas.width = 340;
    canvas.height = 180;
    wrap.append(cap, canvas);

    const model = chartModel(
      series,
      slot.statuses,
      canvas.width,
      canvas.height,
      state.selectedInstant,
    );
    const ctx = canvas.getContext("2d");
    if (ctx) paintChart(ctx, model);

    const pick = (ev: MouseEvent) => {
      const rect = canvas.getBoundingClientRect();
      const scale = canvas.width / Math.max(1, rect.width);
      this.actions.onScrub(model.iterationAt((ev.clientX - rect.left) *
        scale));
    };
    canvas.addEventListener("click", pick);
    canvas.addEventListener("mousemove", (ev) => {
      if (ev.buttons & 1) pick(ev);
    });
    canvas.addEventListener("dblclick", () => this.actions.onScrub(null));
    canvas.title = "click to inspect an instant, double-click to follow" +
      " the newest";
    return wrap;
  }
}
