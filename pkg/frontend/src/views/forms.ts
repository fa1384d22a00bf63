/** Network and model forms. Parameter fields come from the service
 * catalogues, get checked client-side, and service rejections land inline
 * next to the form that caused them. */

import {
  AppState,
  canAttachModel,
  canCreateExperiment,
  canProvisionNetwork,
} from "../state.js";
import type {
  GeneratorDoc,
  ModelCatalogueEntry,
  ModelConfigDoc,
  NetworkSpec,
} from "../types.js";

export interface FormActions {
  onCreate: () => void;
  onProvision: (spec: NetworkSpec) => void;
  onExploratory: (id: string) => void;
  onAttach: (name: string, cfg: ModelConfigDoc) => void;
}

function field(label: string, input: HTMLElement): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "field";
  const span = document.createElement("span");
  span.textContent = label;
  wrap.append(span, input);
  return wrap;
}

function numberInput(name: string, placeholder: string): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "text";
  input.name = name;
  input.placeholder = placeholder;
  input.autocomplete = "off";
  return input;
}

function parseNumber(
  raw: string,
  name: string,
  errors: string[],
): number | undefined {
  if (raw.trim() === "") return undefined;
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    errors.push(`${name} must be a number, got "${raw}"`);
    return undefined;
  }
  return value;
}

export class NetworkPanel {
  private mode = "generator";
  private generator = "erdos_renyi";

  constructor(
    private readonly root: HTMLElement,
    private readonly actions: FormActions,
    private generators: Record<string, GeneratorDoc>,
    private exploratories: { id: string; description?: string }[],
  ) {}

  setCatalogues(
    generators: Record<string, GeneratorDoc>,
    exploratories: { id: string; description?: string }[],
  ): void {
    this.generators = generators;
    this.exploratories = exploratories;
  }

  render(state: AppState): void {
    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = "Network";
    this.root.append(heading);

    if (canCreateExperiment(state)) {
      const btn = document.createElement("button");
      btn.textContent = "Create experiment";
      btn.className = "primary";
      btn.addEventListener("click", () => this.actions.onCreate());
      this.root.append(btn);
      return;
    }
    if (!canProvisionNetwork(state)) {
      const done = document.createElement("p");
      done.className = "muted";
      const net = state.network;
      done.textContent = net
        ? `${net.kind} network, ${net.nodes} nodes`
        : "";
      this.root.append(done);
      return;
    }

    const modeSel = document.createElement("select");
    for (const mode of ["generator", "upload", "interactions", "scenario"]) {
      const opt = document.createElement("option");
      opt.value = mode;
      opt.textContent = mode;
      if (mode === this.mode) opt.selected = true;
      modeSel.append(opt);
    }
    modeSel.addEventListener("change", () => {
      this.mode = modeSel.value;
      this.render(state);
    });
    this.root.append(field("source", modeSel));

    const errBox = document.createElement("p");
    errBox.className = "form-error";

    if (this.mode === "generator") {
      const genSel = document.createElement("select");
      for (const name of Object.keys(this.generators)) {
        const opt = document.createElement("option");
        opt.value = name;
        opt.textContent = name;
        if (name === this.generator) opt.selected = true;
        genSel.append(opt);
      }
      genSel.addEventListener("change", () => {
        this.generator = genSel.value;
        this.render(state);
      });
      this.root.append(field("generator", genSel));

      const doc = this.generators[this.generator];
      const inputs: HTMLInputElement[] = [];
      for (const [pname, hint] of Object.entries(doc?.params ?? {})) {
        const input = numberInput(pname, hint);
        inputs.push(input);
        this.root.append(field(pname, input));
      }
      const go = document.createElement("button");
      go.textContent = "Generate";
      go.className = "primary";
      go.addEventListener("click", () => {
        const errors: string[] = [];
        const params: Record<string, number> = {};
        for (const input of inputs) {
          const v = parseNumber(input.value, input.name, errors);
          if (v !== undefined) params[input.name] = v;
        }
        if (errors.length) {
          errBox.textContent = errors.join("; ");
          return;
        }
        this.actions.onProvision({
          generator: { name: this.generator, params },
        });
      });
      this.root.append(go, errBox);
    } else if (this.mode === "upload") {
      const text = document.createElement("textarea");
      text.placeholder = "one edge per line: u v";
      text.rows = 6;
      const directed = document.createElement("input");
      directed.type = "checkbox";
      const go = document.createElement("button");
      go.textContent = "Upload";
      go.className = "primary";
      go.addEventListener("click", () => {
        if (!text.value.trim()) {
          errBox.textContent = "paste at least one edge line";
          return;
        }
        this.actions.onProvision({
          upload: { text: text.value, directed: directed.checked },
        });
      });
      this.root.append(
        field("edge list", text),
        field("directed", directed),
        go,
        errBox,
      );
    } else if (this.mode === "interactions") {
      const text = document.createElement("textarea");
      text.placeholder = "u v t  (or u v t_start t_end), one per line";
      text.rows = 6;
      const go = document.createElement("button");
      go.textContent = "Build temporal network";
      go.className = "primary";
      go.addEventListener("click", () => {
        const errors: string[] = [];
        const rows: number[][] = [];
        for (const line of text.value.split("\n")) {
          const parts = line.trim().split(/\s+/).filter(Boolean);
          if (parts.length === 0) continue;
          if (parts.length !== 3 && parts.length !== 4) {
            errors.push(`"${line.trim()}" needs 3 or 4 numbers`);
            continue;
          }
          const nums = parts.map((p) => Number(p));
          if (nums.some((x) => !Number.isFinite(x))) {
            errors.push(`"${line.trim()}" has a non-number`);
            continue;
          }
          rows.push(nums);
        }
        if (errors.length || rows.length === 0) {
          errBox.textContent =
            errors.join("; ") || "enter at least one interaction";
          return;
        }
        this.actions.onProvision({ interactions: rows });
      });
      this.root.append(field("interactions", text), go, errBox);
    } else {
      const sel = document.createElement("select");
      for (const e of this.exploratories) {
        const opt = document.createElement("option");
        opt.value = e.id;
        opt.textContent = e.description
          ? `${e.id} (${e.description})`
          : e.id;
        sel.append(opt);
      }
      const go = document.createElement("button");
      go.textContent = "Load scenario";
      go.className = "primary";
      go.addEventListener("click", () => {
        if (sel.value) this.actions.onExploratory(sel.value);
      });
      this.root.append(field("scenario", sel), go, errBox);
    }

    if (state.error) errBox.textContent = state.error;
  }
}

export class ModelPanel {
  private model: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly actions: FormActions,
    private catalogue: Record<string, ModelCatalogueEntry>,
  ) {}

  setCatalogue(catalogue: Record<string, ModelCatalogueEntry>): void {
    this.catalogue = catalogue;
  }

  render(state: AppState): void {
    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = "Models";
    this.root.append(heading);

    if (!canAttachModel(state)) {
      const hint = document.createElement("p");
      hint.className = "muted";
      hint.textContent = "provision a network first";
      this.root.append(hint);
      return;
    }

    const names = Object.keys(this.catalogue);
    if (this.model === null) this.model = names[0] ?? null;

    const sel = document.createElement("select");
    for (const name of names) {
      const opt = document.createElement("option");
      opt.value = name;
      opt.textContent = name;
      if (name === this.model) opt.selected = true;
      sel.append(opt);
    }
    sel.addEventListener("change", () => {
      this.model = sel.value;
      this.render(state);
    });
    this.root.append(field("model", sel));

    const entry = this.model ? this.catalogue[this.model] : undefined;
    const inputs: HTMLInputElement[] = [];
    for (const [pname, spec] of Object.entries(entry?.params ?? {})) {
      const input = numberInput(
        pname,
        spec.required ? `${spec.doc} (required)` : spec.doc,
      );
      inputs.push(input);
      this.root.append(field(pname, input));
    }
    for (const [pname, spec] of Object.entries(entry?.node_params ?? {})) {
      const input = numberInput(pname, `${spec.doc}, uniform value`);
      inputs.push(input);
      this.root.append(field(pname, input));
    }
    const frac = numberInput("percentage_infected", "e.g. 0.05");
    const seed = numberInput("seed", "blank = server draws one");
    this.root.append(
      field("initial active fraction", frac),
      field("seed", seed),
    );

    const errBox = document.createElement("p");
    errBox.className = "form-error";
    const go = document.createElement("button");
    go.textContent = "Attach model";
    go.className = "primary";
    go.addEventListener("click", () => {
      if (!this.model) return;
      const errors: string[] = [];
      const params: Record<string, number> = {};
      for (const input of inputs) {
        const v = parseNumber(input.value, input.name, errors);
        if (v !== undefined) params[input.name] = v;
      }
      const fv = parseNumber(frac.value, "percentage_infected", errors);
      if (fv !== undefined) {
        if (fv < 0 || fv > 1) {
          errors.push("percentage_infected must be within [0, 1]");
        } else {
          params["percentage_infected"] = fv;
        }
      }
      const cfg: ModelConfigDoc = { params };
      const sv = parseNumber(seed.value, "seed", errors);
      if (sv !== undefined) {
        if (!Number.isInteger(sv)) errors.push("seed must be an integer");
        else cfg.seed = sv;
      }
      if (errors.length) {
        errBox.textContent = errors.join("; ");
        return;
      }
      this.actions.onAttach(this.model, cfg);
    });
    this.root.append(go, errBox);

    if (state.slots.length) {
      const list = document.createElement("p");
      list.className = "muted";
      list.textContent =
        "attached: " +
        state.slots.map((s) => `${s.name}#${s.id}`).join(", ");
      this.root.append(list);
    }
    if (state.error) errBox.textContent = state.error;
  }
}
