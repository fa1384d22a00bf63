/** The one place that talks to the experiment service. Every request and
 * response passes through here so views never touch the network. */

import type {
  ExperimentDescription,
  ExploratoryListing,
  ExploratoryLoadResult,
  GeneratorDoc,
  IterateResult,
  ModelCatalogueEntry,
  ModelConfigDoc,
  NetworkDownload,
  NetworkSpec,
  NetworkSummary,
  ResourceCatalogue,
  SlotDoc,
  TrajectoryDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async call<T>(
    method: string,
    path: string,
    opts: { body?: unknown; query?: Record<string, string> } = {},
  ): Promise<T> {
    let url = this.base + path;
    if (opts.query) {
      url += "?" + new URLSearchParams(opts.query).toString();
    }
    const init: RequestInit = { method, headers: {} };
    if (opts.body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(opts.body);
    }
    let res: Response;
    try {
      res = await this.fetchFn(url, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    const text = await res.text();
    let doc: unknown = null;
    if (text) {
      try {
        doc = JSON.parse(text);
      } catch {
        doc = null;
      }
    }
    if (!res.ok) {
      const detail =
        doc && typeof doc === "object" && "detail" in doc
          ? String((doc as { detail: unknown }).detail)
          : `${res.status} ${res.statusText}`;
      throw new ApiError(res.status, detail);
    }
    return doc as T;
  }

  createExperiment(): Promise<{ token: string }> {
    return this.call("POST", "/api/experiment");
  }

  describeExperiment(token: string): Promise<ExperimentDescription> {
    return this.call("GET", "/api/experiment", { query: { token } });
  }

  destroyExperiment(token: string): Promise<{ destroyed: boolean }> {
    return this.call("DELETE", "/api/experiment", { body: { token } });
  }

  provisionNetwork(
    token: string,
    spec: NetworkSpec,
  ): Promise<NetworkSummary> {
    return this.call("PUT", "/api/networks", { body: { token, ...spec } });
  }

  downloadNetwork(token: string, maxEdges = 20000): Promise<NetworkDownload> {
    return this.call("GET", "/api/networks", {
      query: { token, max_edges: String(maxEdges) },
    });
  }

  listGenerators(): Promise<{ generators: Record<string, GeneratorDoc> }> {
    return this.call("GET", "/api/networks/generators");
  }

  listModels(): Promise<{ models: Record<string, ModelCatalogueEntry> }> {
    return this.call("GET", "/api/models");
  }

  attachModel(
    token: string,
    name: string,
    cfg: ModelConfigDoc,
  ): Promise<SlotDoc> {
    return this.call("PUT", `/api/models/${encodeURIComponent(name)}`, {
      body: { token, ...cfg },
    });
  }

  iterate(token: string, bunch: number, models?: string[]):
      Promise<IterateResult> {
    const body: Record<string, unknown> = { token, bunch };
    if (models) body.models = models;
    return this.call("POST", "/api/iterators", { body });
  }

  trajectories(token: string, models?: string[]):
      Promise<{ models: Record<string, TrajectoryDoc> }> {
    const query: Record<string, string> = { token };
    if (models) query.models = models.join(",");
    return this.call("GET", "/api/trajectories", { query });
  }

  reset(token: string, models?: string[]): Promise<{ reset: string[] }> {
    const body: Record<string, unknown> = { token };
    if (models) body.models = models;
    return this.call("POST", "/api/experiment/reset", { body });
  }

  listExploratories(): Promise<{ exploratories: ExploratoryListing[] }> {
    return this.call("GET", "/api/exploratories");
  }

  loadExploratory(token: string, id: string):
      Promise<ExploratoryLoadResult> {
    return this.call("POST", `/api/exploratories/${encodeURIComponent(id)}`, {
      body: { token },
    });
  }

  resources(): Promise<{ categories: ResourceCatalogue }> {
    return this.call("GET", "/api/resources");
  }
}
