/** Trend and prevalence charts. Geometry is computed by pure functions so
 * tests can assert on the points that get painted; the canvas code below
 * only draws what the geometry says. */

import { colorOf } from "../state.js";

export interface ChartLine {
  code: string;
  label: string;
  color: string;
  /** pixel-space polyline, one vertex per iteration */
  vertices: [number, number][];
}

export interface ChartModel {
  width: number;
  height: number;
  lines: ChartLine[];
  /** x pixel of the scrub marker, if an instant is selected */
  markerX: number | null;
  xOf(iteration: number): number;
  iterationAt(px: number): number;
  xMax: number;
  yMax: number;
}

const MARGIN = { left: 36, right: 10, top: 8, bottom: 20 };

/** Lay one chart out in pixel space from per-status series. */
export function chartModel(
  series: Record<string, [number, number][]>,
  labels: Record<string, string>,
  width: number,
  height: number,
  selected: number | null,
): ChartModel {
  let xMax = 1;
  let yMin = 0;
  let yMax = 1;
  for (const pts of Object.values(series)) {
    for (const [x, y] of pts) {
      if (x > xMax) xMax = x;
      if (y > yMax) yMax = y;
      if (y < yMin) yMin = y;
    }
  }
  const innerW = Math.max(1, width - MARGIN.left - MARGIN.right);
  const innerH = Math.max(1, height - MARGIN.top - MARGIN.bottom);
  const xOf = (it: number) => MARGIN.left + (it / xMax) * innerW;
  const yOf = (v: number) =>
    MARGIN.top + innerH - ((v - yMin) / (yMax - yMin || 1)) * innerH;

  const lines: ChartLine[] = Object.entries(series).map(([code, pts]) => ({
    code,
    label: labels[code] ?? code,
    color: colorOf(Number(code)),
    vertices: pts.map(([x, y]) => [xOf(x), yOf(y)] as [number, number]),
  }));

  return {
    width,
    height,
    lines,
    markerX: selected === null ? null : xOf(Math.min(selected, xMax)),
    xOf,
    iterationAt: (px: number) => {
      const it = Math.round(((px - MARGIN.left) / innerW) * xMax);
      return Math.max(0, Math.min(xMax, it));
    },
    xMax,
    yMax,
  };
}

export function paintChart(
  ctx: CanvasRenderingContext2D,
  model: ChartModel,
): void {
  const { width, height } = model;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, width, height);

  ctx.strokeStyle = "#d0d4dc";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(MARGIN.left, MARGIN.top);
  ctx.lineTo(MARGIN.left, height - MARGIN.bottom);
  ctx.lineTo(width - MARGIN.right, height - MARGIN.bottom);
  ctx.stroke();

  ctx.fillStyle = "#667";
  ctx.font = "10px sans-serif";
  ctx.textAlign = "left";
  ctx.fillText(String(model.yMax), 2, MARGIN.top + 8);
  ctx.fillText("0", 2, height - MARGIN.bottom);
  ctx.textAlign = "right";
  ctx.fillText(String(model.xMax), width - MARGIN.right, height - 6);

  for (const line of model.lines) {
    if (line.vertices.length === 0) continue;
    ctx.strokeStyle = line.color;
    ctx.lineWidth = 1.6;
    ctx.beginPath();
    line.vertices.forEach(([x, y], i) => {
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }

  if (model.markerX !== null) {
    ctx.strokeStyle = "#222";
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    ctx.moveTo(model.markerX, MARGIN.top);
    ctx.lineTo(model.markerX, height - MARGIN.bottom);
    ctx.stroke();
    ctx.setLineDash([]);
  }
}
