"""Stateful HTTP experiment service.

An experiment is a token-addressed container holding one network and any
number of configured model instances. Clients create a token, provision the
network, attach models, then advance them stepwise through the iterator
endpoint; every response is JSON. Tokens expire after a configurable idle
window, and all work on one token is serialized behind a per-token lock so
concurrent clients cannot interleave iterator calls.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .dyngraph import SnapshotSequence, TemporalGraph
from .engine import ConfigError, ModelConfig, SimulationError
from .graph import GENERATORS, generate, load_edge_list
from .models import REGISTRY, catalogue, create

DEFAULT_TTL = 3600.0


def _fail(status, message):
    raise HTTPException(status_code=status, detail=message)


class ModelSlot:
    """One attached model instance plus its accumulated deltas."""

    def __init__(self, slot_id, name, model):
        self.id = slot_id
        self.name = name
        self.model = model
        self.history = []  # every IterationDelta produced so far

    def trajectory_doc(self):
        return {"meta": self.model.meta(),
                "iterations": [d.to_dict() for d in self.history]}


class Experiment:
    def __init__(self, token, now):
        self.token = token
        self.created_at = now
        self.last_touched = now
        self.network = None
        self.network_summary = None
        self.slots = {}  # id string -> ModelSlot, insertion-ordered
        self.lock = threading.Lock()

    def next_slot_id(self):
        return str(len(self.slots))


class ExperimentStore:
    """Token-keyed experiment registry with idle expiry.

    The clock is injectable so expiry is testable without sleeping.
    """

    def __init__(self, ttl=DEFAULT_TTL, clock=time.monotonic):
        self.ttl = float(ttl)
        self.clock = clock
        self._table = {}
        self._lock = threading.Lock()

    def _sweep(self, now):
        dead = [t for t, e in self._table.items()
                if now - e.last_touched > self.ttl]
        for t in dead:
            del self._table[t]

    def create(self):
        with self._lock:
            now = self.clock()
            self._sweep(now)
            while True:
                token = secrets.token_urlsafe(16)  # 128 bits
                if token not in self._table:
                    break
            self._table[token] = Experiment(token, now)
            return token

    def get(self, token):
        if not isinstance(token, str) or not token:
            _fail(404, "missing experiment token")
        with self._lock:
            now = self.clock()
            self._sweep(now)
            exp = self._table.get(token)
            if exp is None:
                _fail(404, "unknown or expired experiment token")
            exp.last_touched = now
            return exp

    def destroy(self, token):
        self.get(token)
        with self._lock:
            self._table.pop(token, None)

    def tokens(self):
        with self._lock:
            self._sweep(self.clock())
            return list(self._table)


# -- exploratories ------------------------------------------------------------

_BUILTIN_EXPLORATORIES = [
    {
        "id": "planted-hub-si",
        "description": "Preferential-attachment graph with the oldest hub "
                       "seeded as the single adopter of an SI process.",
        "network": {"generator": {"name": "barabasi_albert",
                                  "params": {"n": 100, "m": 2, "seed": 42}}},
        "models": [{"name": "SI",
                    "config": {"params": {"beta": 0.05},
                               "planted": {"0": "Infected"},
                               "seed": 42}}],
    },
    {
        "id": "er-sir-outbreak",
        "description": "Random graph with a five-node planted outbreak "
                       "running an SIR process.",
        "network": {"generator": {"name": "erdos_renyi",
                                  "params": {"n": 200, "p": 0.05,
                                             "seed": 7}}},
        "models": [{"name": "SIR",
                    "config": {"params": {"beta": 0.02, "gamma": 0.01},
                               "planted": {str(i): "Infected"
                                           for i in range(5)},
                               "seed": 7}}],
    },
]


def _load_exploratories(directory):
    items = {e["id"]: e for e in _BUILTIN_EXPLORATORIES}
    if directory:
        for fn in sorted(os.listdir(directory)):
            if not fn.endswith(".json"):
                continue
            with open(os.path.join(directory, fn), encoding="utf-8") as fh:
                doc = json.load(fh)
            doc.setdefault("id", fn[:-5])
            items[doc["id"]] = doc
    return items


# -- network provisioning ------------------------------------------------------


def _summary_of(net):
    if isinstance(net, TemporalGraph):
        return {"kind": "temporal", "nodes": net.node_count,
                "pairs": net.pair_count, "directed": net.directed,
                "timestamps": net.timestamps(), "digest": net.digest}
    if isinstance(net, SnapshotSequence):
        return {"kind": "snapshots", "nodes": net.node_count,
                "snapshots": list(net.ids), "directed": net.directed,
                "digest": net.digest}
    return {"kind": "static", "nodes": net.node_count,
            "edges": net.edge_count, "directed": net.directed,
            "digest": net.digest}


def _build_network(spec):
    forms = [k for k in ("generator", "upload", "interactions") if k in spec]
    if len(forms) != 1:
        _fail(422, "provide exactly one of generator, upload, interactions")
    if "generator" in spec:
        gen = spec["generator"]
        name = gen.get("name")
        if name not in GENERATORS:
            _fail(422, f"unknown generator {name!r};"
                       f" expected one of {sorted(GENERATORS)}")
        try:
            return generate(name, **gen.get("params", {}))
        except (TypeError, ValueError) as exc:
            _fail(422, f"generator {name}: {exc}")
    if "upload" in spec:
        up = spec["upload"]
        text = up.get("text")
        if not isinstance(text, str):
            _fail(422, "upload needs a text field with edge-list lines")
        try:
            return load_edge_list(text, directed=bool(up.get("directed",
                                                             False)))
        except ValueError as exc:
            _fail(422, f"malformed upload: {exc}")
    rows = spec["interactions"]
    tg = TemporalGraph(directed=bool(spec.get("directed", False)))
    try:
        for row in rows:
            if len(row) == 3:
                u, v, t = row
                tg.add_interaction(int(u), int(v), int(t))
            elif len(row) == 4:
                u, v, t0, t1 = row
                tg.add_interaction(int(u), int(v), int(t0), int(t1))
            else:
                _fail(422, "interaction rows are [u, v, t] or [u, v, t0, t1]")
    except (TypeError, ValueError) as exc:
        _fail(422, f"malformed interactions: {exc}")
    if not tg.pair_count:
        _fail(422, "interactions list is empty")
    return tg.freeze()


_CFG_FIELDS = ("params", "node_params", "edge_params", "initial", "planted",
               "seed", "execution_mode")


def _config_from(payload):
    doc = {k: payload[k] for k in _CFG_FIELDS if payload.get(k) is not None}
    try:
        return ModelConfig.from_dict(doc)
    except (ConfigError, TypeError, ValueError) as exc:
        _fail(422, str(exc))


def _attach(exp, name, cfg):
    if exp.network is None:
        _fail(409, "provision a network before attaching models")
    if name not in REGISTRY:
        _fail(422, f"unknown model {name!r};"
                   f" expected one of {sorted(REGISTRY)}")
    try:
        model = create(name, exp.network)
        model.set_initial_status(config=cfg)
    except (ConfigError, NotImplementedError) as exc:
        _fail(422, str(exc))
    slot = ModelSlot(exp.next_slot_id(), name, model)
    exp.slots[slot.id] = slot
    return slot


def _select_slots(exp, ids):
    if not exp.slots:
        _fail(409, "no models attached")
    if ids is None:
        return list(exp.slots.values())
    picked = []
    for mid in ids:
        slot = exp.slots.get(str(mid))
        if slot is None:
            _fail(422, f"unknown model id {mid!r};"
                       f" attached ids: {sorted(exp.slots)}")
        picked.append(slot)
    return picked


# -- application factory -------------------------------------------------------


def create_app(ttl=DEFAULT_TTL, clock=time.monotonic,
               exploratory_dir=None, snapshot_dir=None):
    """Build the service.

    Args:
        ttl: idle seconds before a token expires.
        clock: monotonic time source, injectable for expiry tests.
        exploratory_dir: optional directory of extra scenario JSON files.
        snapshot_dir: optional directory; when set, each iterator call
            writes the full per-model trajectory JSON for its token.

    Returns:
        FastAPI application; the store is exposed as ``app.state.store``.
    """
    app = FastAPI(title="spreadsim experiment service")
    # steering UIs are static pages on other origins
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    store = ExperimentStore(ttl=ttl, clock=clock)
    app.state.store = store
    exploratories = _load_exploratories(exploratory_dir)
    if snapshot_dir:
        os.makedirs(snapshot_dir, exist_ok=True)

    def _snapshot(token, slot):
        if not snapshot_dir:
            return
        path = os.path.join(snapshot_dir,
                            f"{token}.{slot.id}.trajectory.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(slot.trajectory_doc(), fh)

    def _slot_doc(slot):
        return {"id": slot.id, "name": slot.name,
                "seed": int(slot.model.seed),
                "statuses": {str(c): n for c, n
                             in enumerate(slot.model.statuses)}}

    @app.post("/api/experiment")
    def create_experiment():
        return {"token": store.create()}

    @app.get("/api/experiment")
    def describe_experiment(token: str = ""):
        exp = store.get(token)
        with exp.lock:
            return {"token": exp.token,
                    "network": exp.network_summary,
                    "models": {slot.id: dict(_slot_doc(slot),
                                             iterations_done=len(slot.history))
                               for slot in exp.slots.values()}}

    @app.delete("/api/experiment")
    def destroy_experiment(payload: dict = Body(default={})):
        store.destroy(payload.get("token"))
        return {"destroyed": True}

    @app.put("/api/networks")
    def provision_network(payload: dict = Body(default={})):
        exp = store.get(payload.get("token"))
        with exp.lock:
            if exp.network is not None:
                _fail(409, "network already provisioned;"
                           " destroy the experiment to replace it")
            net = _build_network(payload)
            exp.network = net
            exp.network_summary = _summary_of(net)
            return exp.network_summary

    @app.get("/api/networks")
    def download_network(token: str = "", max_edges: int = 20000):
        exp = store.get(token)
        if max_edges < 1:
            _fail(422, "max_edges must be positive")
        with exp.lock:
            if exp.network is None:
                _fail(409, "no network provisioned")
            net = exp.network
            if isinstance(net, TemporalGraph):
                edge_iter = net.flatten().edges()
            elif isinstance(net, SnapshotSequence):
                edge_iter = iter(dict.fromkeys(
                    e for _, snap in net.items for e in snap.edges()))
            else:
                edge_iter = net.edges()
            edges = [[int(u), int(v)] for u, v in edge_iter]
            body = dict(exp.network_summary)
            body["total_edges"] = len(edges)
            body["truncated"] = len(edges) > max_edges
            body["edge_pairs"] = edges[:max_edges]
            return body

    @app.get("/api/networks/generators")
    def list_generators():
        docs = {
            "erdos_renyi": {"params": {"n": "node count",
                                       "p": "edge probability",
                                       "seed": "optional"},
                            "description": "uniform random graph"},
            "barabasi_albert": {"params": {"n": "node count",
                                           "m": "edges per arrival",
                                           "seed": "optional"},
                                "description": "preferential attachment"},
            "watts_strogatz": {"params": {"n": "node count",
                                          "k": "even ring degree",
                                          "beta": "rewiring probability",
                                          "seed": "optional"},
                               "description": "rewired ring lattice"},
        }
        return {"generators": {k: docs[k] for k in sorted(GENERATORS)}}

    @app.get("/api/models")
    def list_models():
        return {"models": catalogue()}

    @app.put("/api/models/{name}")
    def attach_model(name: str, payload: dict = Body(default={})):
        exp = store.get(payload.get("token"))
        cfg = _config_from(payload)
        with exp.lock:
            slot = _attach(exp, name, cfg)
            return _slot_doc(slot)

    @app.post("/api/iterators")
    def iterate(payload: dict = Body(default={})):
        exp = store.get(payload.get("token"))
        bunch = payload.get("bunch", 1)
        if not isinstance(bunch, int) or isinstance(bunch, bool) or bunch < 1:
            _fail(422, "bunch must be a positive integer")
        with exp.lock:
            if exp.network is None:
                _fail(409, "no network provisioned")
            slots = _select_slots(exp, payload.get("models"))
            out = {}
            for slot in slots:
                try:
                    deltas = slot.model.iteration_bunch(bunch)
                except SimulationError as exc:
                    _fail(409, f"model {slot.id} ({slot.name}): {exc}")
                slot.history.extend(deltas)
                _snapshot(exp.token, slot)
                out[slot.id] = {"name": slot.name,
                                "iterations": [d.to_dict() for d in deltas]}
            return {"models": out}

    @app.get("/api/trajectories")
    def trajectories(token: str = "", models: str = ""):
        exp = store.get(token)
        ids = [m for m in models.split(",") if m] or None
        with exp.lock:
            slots = _select_slots(exp, ids)
            return {"models": {s.id: s.trajectory_doc() for s in slots}}

    @app.post("/api/experiment/reset")
    def reset_experiment(payload: dict = Body(default={})):
        exp = store.get(payload.get("token"))
        with exp.lock:
            slots = _select_slots(exp, payload.get("models"))
            for slot in slots:
                slot.model.reset()
                slot.history.clear()
            return {"reset": [s.id for s in slots]}

    @app.get("/api/exploratories")
    def list_exploratories():
        return {"exploratories": [
            {"id": e["id"], "description": e.get("description", ""),
             "models": [m["name"] for m in e.get("models", [])]}
            for e in exploratories.values()]}

    @app.post("/api/exploratories/{exploratory_id}")
    def load_exploratory(exploratory_id: str,
                         payload: dict = Body(default={})):
        exp = store.get(payload.get("token"))
        scenario = exploratories.get(exploratory_id)
        if scenario is None:
            _fail(404, f"unknown exploratory {exploratory_id!r}")
        with exp.lock:
            if exp.network is not None:
                _fail(409, "network already provisioned;"
                           " destroy the experiment to replace it")
            net = _build_network(scenario["network"])
            # attach all models before committing anything to the experiment
            staged = []
            for m in scenario.get("models", []):
                cfg = _config_from(m.get("config", {}))
                if m["name"] not in REGISTRY:
                    _fail(422, f"exploratory references unknown model"
                               f" {m['name']!r}")
                model = create(m["name"], net)
                try:
                    model.set_initial_status(config=cfg)
                except ConfigError as exc:
                    _fail(422, f"exploratory model {m['name']}: {exc}")
                staged.append((m["name"], model))
            exp.network = net
            exp.network_summary = _summary_of(net)
            out = {}
            for name, model in staged:
                slot = ModelSlot(exp.next_slot_id(), name, model)
                exp.slots[slot.id] = slot
                out[slot.id] = _slot_doc(slot)
            return {"id": exploratory_id,
                    "network": exp.network_summary, "models": out}

    @app.get("/api/resources")
    def describe_resources():
        def ep(method, path, description):
            return {"method": method, "path": path,
                    "description": description}

        return {"categories": {
            "Experiments": [
                ep("POST", "/api/experiment",
                   "create an experiment; returns its access token"),
                ep("GET", "/api/experiment",
                   "describe the experiment: network summary plus attached"
                   " models and their progress"),
                ep("DELETE", "/api/experiment",
                   "destroy the experiment owning the supplied token"),
                ep("POST", "/api/experiment/reset",
                   "return attached models (optionally filtered by id) to"
                   " iteration 0 under their recorded seeds"),
            ],
            "Exploratories": [
                ep("GET", "/api/exploratories",
                   "list bundled ready-to-run scenarios"),
                ep("POST", "/api/exploratories/{id}",
                   "load a bundled scenario (network, planted statuses and"
                   " model configs) into the experiment"),
            ],
            "Resources": [
                ep("GET", "/api/resources",
                   "this catalogue: every endpoint with method, path and"
                   " description, grouped by category"),
            ],
            "Networks": [
                ep("PUT", "/api/networks",
                   "provision the experiment network from a generator, an"
                   " uploaded edge list, or timed interactions"),
                ep("GET", "/api/networks",
                   "download the provisioned topology (edge pairs, capped"
                   " by max_edges) for rendering"),
                ep("GET", "/api/networks/generators",
                   "describe the available synthetic-graph generators"),
            ],
            "Models": [
                ep("PUT", "/api/models/{name}",
                   "attach a configured model instance; returns its id and"
                   " the seed in use"),
                ep("GET", "/api/models",
                   "describe every registered model and its parameters"),
            ],
            "Iterators": [
                ep("POST", "/api/iterators",
                   "advance attached models (optionally filtered by id) by"
                   " a bunch of iterations; returns incremental statuses"),
                ep("GET", "/api/trajectories",
                   "full accumulated trajectory document per attached"
                   " model (optionally filtered by id)"),
            ],
        }}

    return app


def main(listen="127.0.0.1:8801", ttl=DEFAULT_TTL, exploratory_dir=None,
         snapshot_dir=None):
    """Run the service under uvicorn. Blocks until interrupted."""
    import uvicorn

    host, _, port = listen.rpartition(":")
    app = create_app(ttl=ttl, exploratory_dir=exploratory_dir,
                     snapshot_dir=snapshot_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port),
                log_level="warning")
