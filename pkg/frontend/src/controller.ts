/** Orchestrates the workflow: holds the state, applies server responses,
 * and rejects steps attempted out of order. Views call methods here and
 * re-render from the state snapshot pushed to subscribers. */

import { ApiClient, ApiError } from "./api.js";
import {
  AppState,
  canAttachModel,
  canCreateExperiment,
  canDestroy,
  canIterate,
  canProvisionNetwork,
  canReset,
  initialState,
  maxInstant,
} from "./state.js";
import type {
  IterationDelta,
  ModelConfigDoc,
  NetworkSpec,
} from "./types.js";

/** A workflow step was attempted before its prerequisites. */
export class StageError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "StageError";
  }
}

type Listener = (state: AppState) => void;

export class Controller {
  private state: AppState = initialState();
  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  getState(): AppState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private patch(partial: Partial<AppState>): void {
    this.state = { ...this.state, ...partial };
    for (const fn of this.listeners) fn(this.state);
  }

  /** Runs a service call, funneling failures into the inline error slot. */
  private async guard<T>(work: () => Promise<T>): Promise<T> {
    try {
      const result = await work();
      if (this.state.error) this.patch({ error: null });
      return result;
    } catch (err) {
      if (err instanceof ApiError) {
        this.patch({ error: err.message });
      }
      throw err;
    }
  }

  async createExperiment(): Promise<void> {
    if (!canCreateExperiment(this.state)) {
      throw new StageError("experiment already created; destroy it first");
    }
    const { token } = await this.guard(() => this.api.createExperiment());
    this.patch({ ...initialState(), token });
  }

  async provisionNetwork(spec: NetworkSpec): Promise<void> {
    const token = this.state.token;
    if (!token || !canProvisionNetwork(this.state)) {
      throw new StageError("create an experiment before adding a network");
    }
    const summary = await this.guard(() =>
      this.api.provisionNetwork(token, spec),
    );
    const topology = await this.guard(() => this.api.downloadNetwork(token));
    this.patch({ network: summary, topology });
  }

  async attachModel(name: string, cfg: ModelConfigDoc): Promise<string> {
    const token = this.state.token;
    if (!token || !canAttachModel(this.state)) {
      throw new StageError("provision a network before attaching models");
    }
    const doc = await this.guard(() =>
      this.api.attachModel(token, name, cfg),
    );
    this.patch({
      slots: [
        ...this.state.slots,
        {
          id: doc.id,
          name: doc.name,
          seed: doc.seed,
          params: (cfg.params ?? {}) as Record<string, unknown>,
          statuses: doc.statuses,
          iterations: [],
        },
      ],
    });
    return doc.id;
  }

  /** Advance every attached model by the user-chosen number of steps. At
   * most one iterate call is in flight; further clicks are rejected until
   * the response lands. */
  async step(bunch: number): Promise<void> {
    const token = this.state.token;
    if (!token || this.state.slots.length === 0) {
      throw new StageError("attach at least one model before iterating");
    }
    if (!canIterate(this.state)) {
      throw new StageError("an iterate call is already in flight");
    }
    if (!Number.isInteger(bunch) || bunch < 1) {
      throw new RangeError("step count must be a positive integer");
    }
    this.patch({ iteratePending: true });
    try {
      const result = await this.guard(() => this.api.iterate(token, bunch));
      const slots = this.state.slots.map((slot) => {
        const advance = result.models[slot.id];
        if (!advance) return slot;
        return {
          ...slot,
          iterations: [...slot.iterations, ...advance.iterations],
        };
      });
      // follow the newest instant unless the user has scrubbed back
      this.patch({ slots, iteratePending: false });
    } catch (err) {
      this.patch({ iteratePending: false });
      throw err;
    }
  }

  /** Pure view-side selection; never talks to the service. */
  scrub(t: number | null): void {
    if (t === null) {
      this.patch({ selectedInstant: null });
      return;
    }
    const bound = maxInstant(this.state);
    const clamped = Math.max(0, Math.min(Math.floor(t), bound));
    this.patch({ selectedInstant: bound < 0 ? null : clamped });
  }

  async reset(): Promise<void> {
    const token = this.state.token;
    if (!token || !canReset(this.state)) {
      throw new StageError("nothing to reset yet");
    }
    await this.guard(() => this.api.reset(token));
    this.patch({
      slots: this.state.slots.map((s) => ({ ...s, iterations: [] })),
      selectedInstant: null,
    });
  }

  /** Discard the experiment server-side and return to the initial screen. */
  async destroy(): Promise<void> {
    const token = this.state.token;
    if (!token || !canDestroy(this.state)) {
      throw new StageError("no experiment to destroy");
    }
    await this.guard(() => this.api.destroyExperiment(token));
    this.patch(initialState());
  }

  async loadExploratory(id: string): Promise<void> {
    const token = this.state.token;
    if (!token || !canProvisionNetwork(this.state)) {
      throw new StageError(
        "create a fresh experiment before loading a scenario",
      );
    }
    const desc = await this.guard(() => this.api.loadExploratory(token, id));
    const topology = await this.guard(() => this.api.downloadNetwork(token));
    this.patch({
      network: desc.network,
      topology,
      slots: Object.values(desc.models).map((doc) => ({
        id: doc.id,
        name: doc.name,
        seed: doc.seed,
        params: {},
        statuses: doc.statuses,
        iterations: [] as IterationDelta[],
      })),
    });
  }
}
