/** Page bootstrap: one API client, one controller, views subscribed to
 * state snapshots. The service address defaults to the page origin and can
 * be overridden with ?api=http://host:port for local development. */

import { ApiClient } from "./api.js";
import { Controller, StageError } from "./controller.js";
import { canIterate, maxInstant } from "./state.js";
import { ModelBlocks } from "./views/blocks.js";
import { ModelPanel, NetworkPanel } from "./views/forms.js";
import { NetView } from "./views/netview.js";
import { Toolbar } from "./views/toolbar.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const apiBase =
    new URLSearchParams(location.search).get("api") ?? location.origin;
  const api = new ApiClient(apiBase);
  const controller = new Controller(api);

  const swallowStage = (p: Promise<unknown>) =>
    p.catch((err) => {
      if (!(err instanceof StageError)) console.error(err);
    });

  const toolbar = new Toolbar(el("toolbar"), {
    onReset: () => swallowStage(controller.reset()),
    onDestroy: () => swallowStage(controller.destroy()),
  });
  const netView = new NetView(
    el<HTMLCanvasElement>("net-canvas"),
    el("net-legend"),
  );
  const blocks = new ModelBlocks(el("blocks"), {
    onScrub: (t) => controller.scrub(t),
    onFocus: (i) => {
      netView.setFocusSlot(i);
      netView.paint(controller.getState());
    },
  });

  const [generators, models, exploratories] = await Promise.all([
    api.listGenerators().then((d) => d.generators),
    api.listModels().then((d) => d.models),
    api.listExploratories().then((d) => d.exploratories),
  ]);

  const networkPanel = new NetworkPanel(
    el("network-panel"),
    {
      onCreate: () => swallowStage(controller.createExperiment()),
      onProvision: (spec) => swallowStage(controller.provisionNetwork(spec)),
      onExploratory: (id) => swallowStage(controller.loadExploratory(id)),
      onAttach: () => undefined,
    },
    generators,
    exploratories,
  );
  const modelPanel = new ModelPanel(
    el("model-panel"),
    {
      onCreate: () => undefined,
      onProvision: () => undefined,
      onExploratory: () => undefined,
      onAttach: (name, cfg) => swallowStage(controller.attachModel(name,
        cfg)),
    },
    models,
  );

  const stepInput = el<HTMLInputElement>("step-count");
  const stepButton = el<HTMLButtonElement>("step-button");
  const scrubRange = el<HTMLInputElement>("scrub");
  stepButton.addEventListener("click", () => {
    const n = Number(stepInput.value);
    if (Number.isInteger(n) && n >= 1) {
      swallowStage(controller.step(n));
    }
  });
  scrubRange.addEventListener("input", () => {
    controller.scrub(Number(scrubRange.value));
  });
  el<HTMLButtonElement>("scrub-latest").addEventListener("click", () =>
    controller.scrub(null),
  );

  controller.subscribe((state) => {
    toolbar.render(state);
    networkPanel.render(state);
    modelPanel.render(state);
    blocks.render(state);
    netView.render(state);

    stepButton.disabled = !canIterate(state);
    const bound = maxInstant(state);
    scrubRange.disabled = bound < 0;
    scrubRange.max = String(Math.max(0, bound));
    if (state.selectedInstant !== null) {
      scrubRange.value = String(state.selectedInstant);
    } else if (bound >= 0) {
      scrubRange.value = String(bound);
    }
  });

  toolbar.render(controller.getState());
  networkPanel.render(controller.getState());
  modelPanel.render(controller.getState());
}

boot().catch((err) => {
  const banner = document.getElementById("fatal");
  if (banner) {
    banner.textContent = `cannot reach the experiment service: ${err}`;
    banner.classList.add("visible");
  }
});
