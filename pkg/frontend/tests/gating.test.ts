import { describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";
import { Controller, StageError } from "../src/controller.js";
import { initialState, stage } from "../src/state.js";
import type { IterationDelta } from "../src/types.js";

type Handler = (
  body: Record<string, unknown>,
) => [number, unknown] | Promise<[number, unknown]>;

function json(status: number, doc: unknown): Response {
  return new Response(JSON.stringify(doc), {
    status,
    headers: { "content-type": "application/json" },
  });
}

const SUMMARY = {
  kind: "static",
  nodes: 5,
  directed: false,
  digest: "deadbeef",
  edges: 4,
};

function delta(
  iteration: number,
  status: Record<string, number>,
  node_count: Record<string, number>,
  status_delta: Record<string, number>,
): IterationDelta {
  return { iteration, status, node_count, status_delta };
}

const DUMP = delta(
  0,
  { "0": 1, "1": 0, "2": 0, "3": 0, "4": 0 },
  { "0": 4, "1": 1 },
  {},
);

/** In-memory stand-in for the experiment service; just enough routes for
 * the controller, each overridable per test. */
function makeApi(overrides: Record<string, Handler> = {}) {
  let tokens = 0;
  const defaults: Record<string, Handler> = {
    "POST /api/experiment": () => [200, { token: `tok-${++tokens}` }],
    "PUT /api/networks": () => [200, SUMMARY],
    "GET /api/networks": () => [
      200,
      {
        ...SUMMARY,
        total_edges: 4,
        truncated: false,
        edge_pairs: [
          [0, 1],
          [1, 2],
          [2, 3],
          [3, 4],
        ],
      },
    ],
    "PUT /api/models/SI": () => [
      200,
      {
        id: "0",
        name: "SI",
        seed: 9,
        statuses: { "0": "Susceptible", "1": "Infected" },
      },
    ],
    "POST /api/iterators": () => [
      200,
      { models: { "0": { name: "SI", iterations: [DUMP] } } },
    ],
    "POST /api/experiment/reset": () => [200, { reset: ["0"] }],
    "DELETE /api/experiment": () => [200, { destroyed: true }],
  };
  const calls: string[] = [];
  const fetchFn = async (input: string, init?: RequestInit) => {
    const url = new URL(input);
    const method = (init?.method ?? "GET").toUpperCase();
    const key = `${method} ${url.pathname}`;
    calls.push(key);
    const handler = overrides[key] ?? defaults[key];
    if (!handler) return json(404, { detail: `no fake handler for ${key}` });
    const body = init?.body
      ? (JSON.parse(String(init.body)) as Record<string, unknown>)
      : {};
    const [status, doc] = await handler(body);
    return json(status, doc);
  };
  return { api: new ApiClient("http://fake.test", fetchFn), calls };
}

async function readyToStep(overrides: Record<string, Handler> = {}) {
  const { api, calls } = makeApi(overrides);
  const controller = new Controller(api);
  await controller.createExperiment();
  await controller.provisionNetwork({
    generator: { name: "erdos_renyi", params: { n: 5, p: 0.5 } },
  });
  await controller.attachModel("SI", { params: { beta: 0.1 } });
  return { controller, calls };
}

describe("workflow gating", () => {
  it("walks the stages in order", async () => {
    const { api } = makeApi();
    const controller = new Controller(api);
    expect(stage(controller.getState())).toBe("experiment");

    await controller.createExperiment();
    expect(stage(controller.getState())).toBe("network");
    expect(controller.getState().token).toBe("tok-1");

    await controller.provisionNetwork({
      generator: { name: "erdos_renyi", params: { n: 5, p: 0.5 } },
    });
    expect(stage(controller.getState())).toBe("models");
    expect(controller.getState().topology?.edge_pairs).toHaveLength(4);

    const id = await controller.attachModel("SI", {
      params: { beta: 0.1 },
    });
    expect(id).toBe("0");
    expect(stage(controller.getState())).toBe("simulate");
    const slot = controller.getState().slots[0]!;
    expect(slot.seed).toBe(9);
    expect(slot.statuses).toEqual({ "0": "Susceptible", "1": "Infected" });
  });

  it("rejects every action attempted before its prerequisites", async () => {
    const { api, calls } = makeApi();
    const controller = new Controller(api);

    const spec = {
      generator: { name: "erdos_renyi", params: { n: 5, p: 0.5 } },
    };
    await expect(controller.provisionNetwork(spec)).rejects.toBeInstanceOf(
      StageError,
    );
    await expect(
      controller.attachModel("SI", { params: { beta: 0.1 } }),
    ).rejects.toBeInstanceOf(StageError);
    await expect(controller.step(1)).rejects.toBeInstanceOf(StageError);
    await expect(controller.reset()).rejects.toBeInstanceOf(StageError);
    await expect(controller.destroy()).rejects.toBeInstanceOf(StageError);
    // refused steps never reach the service
    expect(calls).toHaveLength(0);

    await controller.createExperiment();
    await expect(controller.createExperiment()).rejects.toBeInstanceOf(
      StageError,
    );
    // models still need a network first
    await expect(
      controller.attachModel("SI", { params: { beta: 0.1 } }),
    ).rejects.toBeInstanceOf(StageError);
    await expect(controller.step(1)).rejects.toBeInstanceOf(StageError);

    await controller.provisionNetwork(spec);
    await expect(controller.provisionNetwork(spec)).rejects.toBeInstanceOf(
      StageError,
    );
    // iterating needs at least one attached model
    await expect(controller.step(1)).rejects.toBeInstanceOf(StageError);
  });

  it("allows one iterate call in flight at a time", async () => {
    let release!: (value: [number, unknown]) => void;
    const gate = new Promise<[number, unknown]>((res) => {
      release = res;
    });
    const { controller } = await readyToStep({
      "POST /api/iterators": () => gate,
    });

    const first = controller.step(1);
    expect(controller.getState().iteratePending).toBe(true);
    await expect(controller.step(1)).rejects.toBeInstanceOf(StageError);

    release([200, { models: { "0": { name: "SI", iterations: [DUMP] } } }]);
    await first;
    expect(controller.getState().iteratePending).toBe(false);
    expect(controller.getState().slots[0]!.iterations).toHaveLength(1);
  });

  it("clears the in-flight flag when the iterate call fails", async () => {
    const { controller } = await readyToStep({
      "POST /api/iterators": () => [409, { detail: "cannot step" }],
    });
    await expect(controller.step(1)).rejects.toBeInstanceOf(ApiError);
    expect(controller.getState().iteratePending).toBe(false);
    expect(controller.getState().error).toBe("cannot step");
  });

  it("rejects non-positive or fractional step counts", async () => {
    const { controller, calls } = await readyToStep();
    const before = calls.length;
    await expect(controller.step(0)).rejects.toBeInstanceOf(RangeError);
    await expect(controller.step(-3)).rejects.toBeInstanceOf(RangeError);
    await expect(controller.step(2.5)).rejects.toBeInstanceOf(RangeError);
    expect(calls.length).toBe(before);
  });

  it("reset keeps the slots but drops their trajectories", async () => {
    const { controller } = await readyToStep();
    await controller.step(1);
    controller.scrub(0);
    await controller.reset();
    const state = controller.getState();
    expect(state.slots).toHaveLength(1);
    expect(state.slots[0]!.iterations).toHaveLength(0);
    expect(state.selectedInstant).toBeNull();
  });

  it("destroy returns to the initial screen", async () => {
    const { controller } = await readyToStep();
    await controller.step(1);
    await controller.destroy();
    expect(controller.getState()).toEqual(initialState());
  });

  it("funnels service rejections into the inline error", async () => {
    let fail = true;
    const { api } = makeApi({
      "PUT /api/networks": () =>
        fail ? [422, { detail: "generator exploded" }] : [200, SUMMARY],
    });
    const controller = new Controller(api);
    await controller.createExperiment();

    const spec = {
      generator: { name: "erdos_renyi", params: { n: 5, p: 0.5 } },
    };
    await expect(controller.provisionNetwork(spec)).rejects.toBeInstanceOf(
      ApiError,
    );
    expect(controller.getState().error).toBe("generator exploded");

    fail = false;
    await controller.provisionNetwork(spec);
    expect(controller.getState().error).toBeNull();
    expect(controller.getState().network).toEqual(SUMMARY);
  });

  it("scrub clamps to the instants actually held", async () => {
    const deltas = [
      DUMP,
      delta(1, { "1": 1 }, { "0": 3, "1": 2 }, { "0": -1, "1": 1 }),
      delta(2, { "2": 1 }, { "0": 2, "1": 3 }, { "0": -1, "1": 1 }),
    ];
    const { controller } = await readyToStep({
      "POST /api/iterators": () => [
        200,
        { models: { "0": { name: "SI", iterations: deltas } } },
      ],
    });

    // nothing simulated yet: a scrub cannot select anything
    controller.scrub(5);
    expect(controller.getState().selectedInstant).toBeNull();

    await controller.step(3);
    controller.scrub(99);
    expect(controller.getState().selectedInstant).toBe(2);
    controller.scrub(-7);
    expect(controller.getState().selectedInstant).toBe(0);
    controller.scrub(1);
    expect(controller.getState().selectedInstant).toBe(1);
    controller.scrub(null);
    expect(controller.getState().selectedInstant).toBeNull();
  });

  it("notifies subscribers until they unsubscribe", async () => {
    const { api } = makeApi();
    const controller = new Controller(api);
    const seen: string[] = [];
    const unsubscribe = controller.subscribe((s) =>
      seen.push(s.token ?? ""),
    );
    await controller.createExperiment();
    expect(seen).toContain("tok-1");
    const count = seen.length;
    unsubscribe();
    controller.scrub(null);
    expect(seen.length).toBe(count);
  });
});
