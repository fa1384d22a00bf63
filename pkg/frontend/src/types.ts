/** JSON document shapes exchanged with the experiment service. */

export interface GeneratorDoc {
  params: Record<string, string>;
  description: string;
}

export interface ParamSpecDoc {
  kind: string;
  lo?: number | null;
  hi?: number | null;
  required: boolean;
  doc: string;
}

export interface ModelCatalogueEntry {
  name: string;
  statuses: string[];
  params: Record<string, ParamSpecDoc>;
  node_params: Record<string, ParamSpecDoc>;
  edge_params: Record<string, ParamSpecDoc>;
  topology: string;
}

export interface NetworkSummary {
  kind: "static" | "temporal" | "snapshots";
  nodes: number;
  directed: boolean;
  digest: string;
  edges?: number;
  pairs?: number;
  timestamps?: number[];
  snapshots?: number[];
}

export interface NetworkDownload extends NetworkSummary {
  total_edges: number;
  truncated: boolean;
  /** edge pairs for rendering; capped by the max_edges query parameter */
  edge_pairs: [number, number][];
}

export interface IterationDelta {
  iteration: number;
  /** changed nodes only (all nodes at iteration 0): node id -> status code */
  status: Record<string, number>;
  /** absolute census: status code -> node count */
  node_count: Record<string, number>;
  /** census change since the previous iteration: status code -> delta */
  status_delta: Record<string, number>;
}

export interface TrajectoryMeta {
  model: string;
  params: Record<string, unknown>;
  seed: number;
  graph_digest: string;
  statuses: Record<string, string>;
  [extra: string]: unknown;
}

export interface TrajectoryDoc {
  meta: TrajectoryMeta;
  iterations: IterationDelta[];
}

export interface SlotDoc {
  id: string;
  name: string;
  seed: number;
  statuses: Record<string, string>;
}

export interface IterateResult {
  models: Record<string, { name: string; iterations: IterationDelta[] }>;
}

export interface ExperimentDescription {
  token: string;
  network: NetworkSummary | null;
  models: Record<string, SlotDoc & { iterations_done: number }>;
}

export interface ExploratoryListing {
  id: string;
  description?: string;
  models?: string[];
}

export interface ExploratoryLoadResult {
  id: string;
  network: NetworkSummary;
  models: Record<string, SlotDoc>;
}

export interface ResourceEntry {
  method: string;
  path: string;
  description: string;
}

export type ResourceCatalogue = Record<string, ResourceEntry[]>;

export type NetworkSpec =
  | { generator: { name: string; params: Record<string, number> } }
  | { upload: { text: string; directed?: boolean } }
  | { interactions: number[][]; directed?: boolean };

export interface ModelConfigDoc {
  params?: Record<string, number>;
  node_params?: Record<string, Record<string, number>>;
  edge_params?: Record<string, Record<string, number>>;
  planted?: Record<string, string>;
  seed?: number;
  execution_mode?: string;
}
