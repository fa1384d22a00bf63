/** Workflow toolbar: the expected steps in order, with the current one
 * highlighted and later ones locked until their prerequisites are done. */

import {
  AppState,
  canDestroy,
  canReset,
  stage,
  STAGES,
} from "../state.js";

const STEP_LABELS: Record<(typeof STAGES)[number], string> = {
  experiment: "1. Experiment",
  network: "2. Network",
  models: "3. Models",
  simulate: "4. Simulate",
};

export class Toolbar {
  constructor(
    private readonly root: HTMLElement,
    private readonly actions: {
      onReset: () => void;
      onDestroy: () => void;
    },
  ) {}

  render(state: AppState): void {
    this.root.textContent = "";
    const current = stage(state);
    const reached = STAGES.indexOf(current);

    for (const [i, step] of STAGES.entries()) {
      const el = document.createElement("span");
      el.className =
        "step " +
        (i < reached ? "done" : i === reached ? "active" : "locked");
      el.textContent = STEP_LABELS[step];
      this.root.append(el);
    }

    const spacer = document.createElement("span");
    spacer.className = "spacer";
    this.root.append(spacer);

    const reset = document.createElement("button");
    reset.textContent = "Reset runs";
    reset.disabled = !canReset(state);
    reset.addEventListener("click", () => this.actions.onReset());
    this.root.append(reset);

    const destroy = document.createElement("button");
    destroy.textContent = "Destroy experiment";
    destroy.className = "danger";
    destroy.disabled = !canDestroy(state);
    destroy.addEventListener("click", () => this.actions.onDestroy());
    this.root.append(destroy);
  }
}
