/** Application state and its pure projections. Everything rendered is a
 * function of (server responses, user selections); no view keeps counts of
 * its own. */

import type {
  IterationDelta,
  NetworkDownload,
  NetworkSummary,
} from "./types.js";

export interface SlotState {
  id: string;
  name: string;
  seed: number;
  params: Record<string, unknown>;
  /** status code (as decimal string) -> status name */
  statuses: Record<string, string>;
  /** every delta received so far, iteration 0 first */
  iterations: IterationDelta[];
}

export interface AppState {
  token: string | null;
  network: NetworkSummary | null;
  topology: NetworkDownload | null;
  slots: SlotState[];
  /** scrub position; null tracks the newest iteration */
  selectedInstant: number | null;
  iteratePending: boolean;
  /** inline form/service error, cleared by the next successful action */
  error: string | null;
}

export function initialState(): AppState {
  return {
    token: null,
    network: null,
    topology: null,
    slots: [],
    selectedInstant: null,
    iteratePending: false,
    error: null,
  };
}

/** Workflow steps, in the order the toolbar presents them. */
export const STAGES = [
  "experiment",
  "network",
  "models",
  "simulate",
] as const;
export type Stage = (typeof STAGES)[number];

/** The first step that still needs doing. */
export function stage(s: AppState): Stage {
  if (!s.token) return "experiment";
  if (!s.network) return "network";
  if (s.slots.length === 0) return "models";
  return "simulate";
}

export const canCreateExperiment = (s: AppState) => !s.token;
export const canProvisionNetwork = (s: AppState) =>
  !!s.token && !s.network;
export const canAttachModel = (s: AppState) => !!s.network;
export const canIterate = (s: AppState) =>
  s.slots.length > 0 && !s.iteratePending;
export const canReset = (s: AppState) => s.slots.length > 0;
export const canDestroy = (s: AppState) => !!s.token;

/** Latest iteration number held for a slot, -1 before the initial dump. */
export function latestIteration(slot: SlotState): number {
  const last = slot.iterations[slot.iterations.length - 1];
  return last ? last.iteration : -1;
}

/** Scrub bound shared by all views: the newest iteration any slot holds. */
export function maxInstant(s: AppState): number {
  return Math.max(-1, ...s.slots.map(latestIteration));
}

/** The instant a view should display for this slot right now. */
export function instantFor(s: AppState, slot: SlotState): number {
  const latest = latestIteration(slot);
  if (s.selectedInstant === null) return latest;
  return Math.min(s.selectedInstant, latest);
}

/** Per-status series of absolute counts, straight from node_count. */
export function trendPoints(
  slot: SlotState,
): Record<string, [number, number][]> {
  const out: Record<string, [number, number][]> = {};
  for (const code of Object.keys(slot.statuses)) {
    out[code] = slot.iterations.map((d) => [
      d.iteration,
      d.node_count[code] ?? 0,
    ]);
  }
  return out;
}

/** Per-status series of census changes; starts at iteration 1. */
export function prevalencePoints(
  slot: SlotState,
): Record<string, [number, number][]> {
  const out: Record<string, [number, number][]> = {};
  for (const code of Object.keys(slot.statuses)) {
    out[code] = slot.iterations
      .filter((d) => d.iteration > 0)
      .map((d) => [d.iteration, d.status_delta[code] ?? 0]);
  }
  return out;
}

/** Node statuses at instant t: the iteration-0 dump plus every change up
 * to and including t. */
export function statusesAt(
  slot: SlotState,
  t: number,
): Record<string, number> {
  const state: Record<string, number> = {};
  for (const d of slot.iterations) {
    if (d.iteration > t) break;
    for (const [node, code] of Object.entries(d.status)) {
      state[node] = code;
    }
  }
  return state;
}

/** Census at instant t (clamped to what the slot holds). */
export function countsAt(
  slot: SlotState,
  t: number,
): Record<string, number> {
  let seen: Record<string, number> = {};
  for (const d of slot.iterations) {
    if (d.iteration > t) break;
    seen = d.node_count;
  }
  return seen;
}

/** Stable status palette, indexed by status code. */
const PALETTE = [
  "#4878cf", // base / susceptible
  "#d65f5f", // active / infected
  "#6acc65", // removed / third status
  "#956cb4",
  "#d5bb67",
  "#82c6e2",
];

export function colorOf(code: number): string {
  return PALETTE[code % PALETTE.length] ?? PALETTE[0]!;
}
