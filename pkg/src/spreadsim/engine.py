"""Model-agnostic simulation core.

A model binds a topology, validates a ModelConfig against its declared
parameter schema, samples or plants the initial statuses, and then advances
in synchronous iterations: every rule reads the frozen pre-iteration status
array and writes into a scratch copy, so node visitation order never leaks
into results. Each iteration yields an IterationDelta (changed nodes plus
per-status counts and signed count changes); iteration 0 is the full
initial-status dump that anchors delta replay.

Determinism: (topology, model, config, seed) fixes the trajectory exactly.
All stochastic rules use keyed draws (see _rng), and the initial sampler is
a numpy Generator seeded from a dedicated derivation of the run seed.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import backend
from ._rng import (derive_seed, fresh_seed, init_seed, normalize_seed,
                   u01_array)
from .graph import Graph


def _is_number(value):
    return (isinstance(value, (int, float, np.integer, np.floating))
            and not isinstance(value, bool))


class ConfigError(ValueError):
    """Invalid model configuration (unknown name, bad range, bad initial)."""


class SimulationError(RuntimeError):
    """Runtime failure of a simulation (uninitialized state, exhausted
    timeline, broken engine invariant)."""


@dataclass(frozen=True)
class ParamSpec:
    """Declared parameter: numeric kind, inclusive bounds, optional default.

    A parameter with ``default=None`` is required. Node- and edge-level
    parameters use the same spec; a scalar supplied under the same name in
    ``params`` broadcasts as their per-item default.
    """

    kind: str = "float"  # "float" | "int"
    lo: float | None = 0.0
    hi: float | None = 1.0
    default: float | None = None
    doc: str = ""

    def coerce(self, name, value):
        if not _is_number(value):
            raise ConfigError(f"parameter {name!r} must be a number")
        if self.kind == "int":
            if float(value) != int(value):
                raise ConfigError(f"parameter {name!r} must be an integer")
            value = int(value)
        else:
            value = float(value)
        if self.lo is not None and value < self.lo:
            raise ConfigError(f"parameter {name!r} must be >= {self.lo}")
        if self.hi is not None and value > self.hi:
            raise ConfigError(f"parameter {name!r} must be <= {self.hi}")
        return value

    def describe(self):
        d = {"kind": self.kind, "lo": self.lo, "hi": self.hi,
             "required": self.default is None}
        if self.default is not None:
            d["default"] = self.default
        if self.doc:
            d["doc"] = self.doc
        return d


@dataclass
class ModelConfig:
    """User-facing configuration of one simulation run.

    Fields:
        params: scalar parameters by name; a scalar for a node- or
            edge-level parameter broadcasts to every node/edge.
        node_params: per-node overrides, name -> {node id: value}.
        edge_params: per-edge values, name -> {(u, v): value}.
        initial: fraction-based seeding, status name -> fraction in [0, 1];
            unassigned mass stays in the model's base status. The shorthand
            ``percentage_infected`` in ``params`` is the Infected fraction.
        planted: explicit seeding, node id -> status name (exclusive with
            ``initial``).
        seed: 64-bit run seed; drawn fresh (and reported) when omitted.
        execution_mode: dynamic-topology models only: "snapshots" or
            "interactions".
    """

    params: dict = field(default_factory=dict)
    node_params: dict = field(default_factory=dict)
    edge_params: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)
    planted: dict | None = None
    seed: int | None = None
    execution_mode: str | None = None

    _FIELDS = ("params", "node_params", "edge_params", "initial", "planted",
               "seed", "execution_mode")

    @classmethod
    def from_dict(cls, doc):
        """Build from a JSON-shaped dict (the CLI and REST wire format).

        ``node_params`` keys arrive as strings (JSON objects), ``edge_params``
        as lists of [u, v, value] triples, ``planted`` as {node: status}.
        """
        if not isinstance(doc, dict):
            raise ConfigError("config document must be an object")
        unknown = set(doc) - set(cls._FIELDS)
        if unknown:
            raise ConfigError(f"unknown config field(s): {sorted(unknown)}")

        def int_keys(mapping, what):
            out = {}
            for k, v in mapping.items():
                try:
                    out[int(k)] = v
                except (TypeError, ValueError):
                    raise ConfigError(
                        f"{what} key {k!r} is not a node id") from None
            return out

        node_params = {}
        for name, mapping in (doc.get("node_params") or {}).items():
            if not isinstance(mapping, dict):
                raise ConfigError(f"node_params[{name!r}] must be an object")
            node_params[name] = int_keys(mapping, f"node_params[{name!r}]")
        edge_params = {}
        for name, triples in (doc.get("edge_params") or {}).items():
            pairs = {}
            for t in triples:
                if len(t) != 3:
                    raise ConfigError(
                        f"edge_params[{name!r}] entries must be"
                        " [u, v, value] triples")
                pairs[(int(t[0]), int(t[1]))] = t[2]
            edge_params[name] = pairs
        planted = doc.get("planted")
        if planted is not None:
            planted = int_keys(planted, "planted")
        return cls(params=dict(doc.get("params") or {}),
                   node_params=node_params,
                   edge_params=edge_params,
                   initial=dict(doc.get("initial") or {}),
                   planted=planted,
                   seed=doc.get("seed"),
                   execution_mode=doc.get("execution_mode"))

    def to_dict(self):
        doc = {}
        if self.params:
            doc["params"] = dict(self.params)
        if self.node_params:
            doc["node_params"] = {
                name: {str(k): v for k, v in mapping.items()}
                for name, mapping in self.node_params.items()}
        if self.edge_params:
            doc["edge_params"] = {
                name: [[u, v, val] for (u, v), val in mapping.items()]
                for name, mapping in self.edge_params.items()}
        if self.initial:
            doc["initial"] = dict(self.initial)
        if self.planted is not None:
            doc["planted"] = {str(k): v for k, v in self.planted.items()}
        if self.seed is not None:
            doc["seed"] = self.seed
        if self.execution_mode is not None:
            doc["execution_mode"] = self.execution_mode
        return doc

    def replace(self, **changes):
        """Independent copy with the given fields swapped out."""
        cfg = dataclasses.replace(self, **changes)
        cfg.params = dict(cfg.params)
        cfg.node_params = {k: dict(v) for k, v in cfg.node_params.items()}
        cfg.edge_params = {k: dict(v) for k, v in cfg.edge_params.items()}
        cfg.initial = dict(cfg.initial)
        if cfg.planted is not None:
            cfg.planted = dict(cfg.planted)
        return cfg


@dataclass
class IterationDelta:
    """One iteration's incremental record.

    ``changed`` maps node id -> new status code (all nodes at iteration 0),
    ``node_count`` maps status code -> population, ``status_delta`` maps
    status code -> signed population change (all zero at iteration 0).
    """

    iteration: int
    changed: dict
    node_count: dict
    status_delta: dict

    def to_dict(self):
        return {
            "iteration": self.iteration,
            "status": {str(k): int(v) for k, v in self.changed.items()},
            "node_count": {str(k): int(v) for k, v in self.node_count.items()},
            "status_delta": {
                str(k): int(v) for k, v in self.status_delta.items()},
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(
            iteration=int(doc["iteration"]),
            changed={int(k): int(v) for k, v in doc["status"].items()},
            node_count={int(k): int(v)
                        for k, v in doc["node_count"].items()},
            status_delta={int(k): int(v)
                          for k, v in doc["status_delta"].items()},
        )


@dataclass
class Trajectory:
    """A run's metadata plus its ordered iteration deltas (from 0)."""

    meta: dict
    deltas: list

    def __len__(self):
        return len(self.deltas)

    def __iter__(self):
        return iter(self.deltas)

    @property
    def statuses(self):
        """Status code (int) -> name, from the metadata block."""
        return {int(k): v for k, v in self.meta.get("statuses", {}).items()}

    def to_dict(self):
        return {"meta": self.meta,
                "iterations": [d.to_dict() for d in self.deltas]}

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    @classmethod
    def from_dict(cls, doc):
        return cls(meta=dict(doc["meta"]),
                   deltas=[IterationDelta.from_dict(d)
                           for d in doc["iterations"]])

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def replay(self):
        """Fold the changed maps into the final status array (dense ids).

        The iteration-0 dump must cover every node; later deltas overwrite.
        """
        if not self.deltas or self.deltas[0].iteration != 0:
            raise ValueError("trajectory does not start at iteration 0")
        n = sum(self.deltas[0].node_count.values())
        state = np.zeros(n, dtype=np.int64)
        for d in self.deltas:
            for node, code in d.changed.items():
                state[node] = code
        return state


class DiffusionModel:
    """Base class for every simulation model.

    Subclasses declare ``name``, ``statuses`` (code = position, base status
    first), the parameter schemas, and implement ``_step(frozen, out,
    iteration)``. The base class owns config validation, initial sampling,
    the iteration loop with its conservation and replay audits, and
    trajectory assembly.
    """

    name = "?"
    statuses = ("Susceptible",)
    params_spec: dict = {}
    node_params_spec: dict = {}
    edge_params_spec: dict = {}
    kind = "static"

    def __init__(self, graph):
        self._bind_topology(graph)
        self.config = None
        self.seed = None
        self.params = {}
        self.node_arrays = {}
        self.edge_arrays = {}
        self.status = None
        self._iteration = 0
        self._prev_counts = None
        self._replay = None

    def _bind_topology(self, graph):
        if not isinstance(graph, Graph):
            raise ConfigError(
                f"model {self.name} requires a static Graph, got"
                f" {type(graph).__name__}")
        self.graph = graph
        self._source = graph
        self._n = graph.node_count

    # -- metadata ---------------------------------------------------------

    @classmethod
    def status_code(cls, name):
        try:
            return cls.statuses.index(name)
        except ValueError:
            raise ConfigError(
                f"model {cls.name} has no status {name!r};"
                f" expected one of {list(cls.statuses)}") from None

    @classmethod
    def describe(cls):
        """Schema document for discovery endpoints and front-ends."""
        return {
            "name": cls.name,
            "statuses": list(cls.statuses),
            "params": {k: v.describe() for k, v in cls.params_spec.items()},
            "node_params": {k: v.describe()
                            for k, v in cls.node_params_spec.items()},
            "edge_params": {k: v.describe()
                            for k, v in cls.edge_params_spec.items()},
            "topology": cls.kind,
        }

    def meta(self):
        """Trajectory metadata: identity, resolved params, seed, digest."""
        m = {
            "model": self.name,
            "params": dict(self.params),
            "seed": int(self.seed),
            "graph_digest": self._source.digest,
            "statuses": {str(c): s for c, s in enumerate(self.statuses)},
        }
        self._meta_extra(m)
        return m

    def _meta_extra(self, m):
        """Hook: subclasses append fields (execution mode, timeline...)."""

    # -- configuration ----------------------------------------------------

    def set_initial_status(self, config=None, seed=None):
        """Validate ``config`` and (re)initialize the run.

        Args:
            config: ModelConfig; omit to reuse the previously set one.
            seed: overrides ``config.seed``; when both are absent a fresh
                seed is drawn and recorded in ``self.seed``.

        Raises:
            ConfigError: unknown or out-of-range parameters, uncovered
                node/edge parameters, bad initial status assignment.
        """
        cfg = config if config is not None else self.config
        if cfg is None:
            cfg = ModelConfig()
        if not isinstance(cfg, ModelConfig):
            raise ConfigError("config must be a ModelConfig")
        self.config = cfg

        if seed is not None:
            self.seed = normalize_seed(int(seed))
        elif cfg.seed is not None:
            self.seed = normalize_seed(int(cfg.seed))
        else:
            self.seed = fresh_seed()

        self._resolve_mode(cfg)
        scalars = dict(cfg.params)
        pct = scalars.pop("percentage_infected", None)
        self._resolve_params(cfg, scalars)
        self._validate_extra()
        self.status = self._initial_array(cfg, pct)
        self._iteration = 0
        self._prev_counts = None
        self._replay = None

    def _resolve_mode(self, cfg):
        if cfg.execution_mode is not None:
            raise ConfigError(
                f"model {self.name} does not take execution_mode")

    def _resolve_params(self, cfg, scalars):
        known = (set(self.params_spec) | set(self.node_params_spec)
                 | set(self.edge_params_spec))
        unknown = set(scalars) - known
        if unknown:
            raise ConfigError(
                f"unknown parameter(s) for {self.name}: {sorted(unknown)}")

        self.params = {}
        for name, spec in self.params_spec.items():
            if name in scalars:
                self.params[name] = spec.coerce(name, scalars[name])
            elif spec.default is not None:
                self.params[name] = spec.default
            else:
                raise ConfigError(
                    f"model {self.name} requires parameter {name!r}")

        unknown = set(cfg.node_params) - set(self.node_params_spec)
        if unknown:
            raise ConfigError(
                f"unknown node parameter(s) for {self.name}:"
                f" {sorted(unknown)}")
        self.node_arrays = {}
        for name, spec in self.node_params_spec.items():
            fallback = scalars.get(name, spec.default)
            if fallback is not None:
                fallback = spec.coerce(name, fallback)
                self.params[name] = fallback
                arr = np.full(self._n, float(fallback))
            else:
                arr = np.full(self._n, np.nan)
            for node, value in (cfg.node_params.get(name) or {}).items():
                node = int(node)
                if not 0 <= node < self._n:
                    raise ConfigError(
                        f"node parameter {name!r}: node id {node} out of"
                        " range")
                arr[node] = spec.coerce(name, value)
            if np.isnan(arr).any():
                missing = int(np.isnan(arr).sum())
                raise ConfigError(
                    f"node parameter {name!r} undefined for {missing}"
                    " node(s); give a scalar default or cover every node")
            self.node_arrays[name] = arr

        unknown = set(cfg.edge_params) - set(self.edge_params_spec)
        if unknown:
            raise ConfigError(
                f"unknown edge parameter(s) for {self.name}:"
                f" {sorted(unknown)}")
        self.edge_arrays = {}
        for name, spec in self.edge_params_spec.items():
            fallback = scalars.get(name, spec.default)
            if fallback is not None:
                fallback = spec.coerce(name, fallback)
                self.params[name] = fallback
            mapping = {}
            for pair, value in (cfg.edge_params.get(name) or {}).items():
                mapping[pair] = spec.coerce(name, value)
            arr = self._edge_array(name, mapping, fallback)
            if arr is not None and np.isnan(arr).any():
                missing = int(np.isnan(arr).sum())
                raise ConfigError(
                    f"edge parameter {name!r} undefined for {missing}"
                    " edge slot(s); give a scalar default or cover every"
                    " edge")
            if arr is not None:
                self.edge_arrays[name] = arr

    def _edge_array(self, name, mapping, fallback):
        default = np.nan if fallback is None else float(fallback)
        try:
            return self.graph.edge_value_array(mapping, default=default)
        except ValueError as exc:
            raise ConfigError(f"edge parameter {name!r}: {exc}") from None

    def _validate_extra(self):
        """Hook: cross-parameter checks after scalar resolution."""

    # -- initial status ---------------------------------------------------

    def _initial_array(self, cfg, pct):
        initial = dict(cfg.initial)
        if pct is not None:
            if not _is_number(pct):
                raise ConfigError("percentage_infected must be a number")
            if "Infected" in initial:
                raise ConfigError(
                    "percentage_infected conflicts with an explicit"
                    " Infected fraction")
            self.status_code("Infected")
            initial["Infected"] = float(pct)
        if initial and cfg.planted is not None:
            raise ConfigError(
                "give either initial fractions or a planted map, not both")

        status = np.zeros(self._n, dtype=np.int8)
        rng = np.random.default_rng(init_seed(self.seed))
        if cfg.planted is not None:
            for node, name in cfg.planted.items():
                node = int(node)
                if not 0 <= node < self._n:
                    raise ConfigError(
                        f"planted node id {node} out of range")
                status[node] = self.status_code(name)
        else:
            base = self.statuses[0]
            counts = []
            total_frac = 0.0
            for name, frac in initial.items():
                code = self.status_code(name)
                if code == 0:
                    raise ConfigError(
                        f"the base status {base!r} takes the unassigned"
                        " mass; do not give it a fraction")
                if not _is_number(frac) or not 0.0 <= frac <= 1.0:
                    raise ConfigError(
                        f"initial fraction for {name!r} must be in [0, 1]")
                total_frac += float(frac)
            if total_frac > 1.0 + 1e-9:
                raise ConfigError("initial fractions sum to more than 1")
            # deterministic order: declaration order, not dict order
            for code in range(1, len(self.statuses)):
                name = self.statuses[code]
                if name not in initial:
                    continue
                frac = float(initial[name])
                k = int(math.floor(frac * self._n))
                if frac > 0.0 and k == 0:
                    k = 1  # a positive fraction never seeds an empty set
                counts.append((code, k))
            need = sum(k for _, k in counts)
            if need > self._n:
                raise ConfigError(
                    f"initial fractions require {need} nodes but the"
                    f" network has {self._n}")
            perm = rng.permutation(self._n)
            pos = 0
            for code, k in counts:
                status[perm[pos:pos + k]] = code
                pos += k
        self._post_initial(status, rng)
        return status

    def _post_initial(self, status, rng):
        """Hook: extra init-time sampling (continues the init stream)."""

    # -- iteration --------------------------------------------------------

    def iteration(self):
        """Advance one iteration and return its IterationDelta.

        The first call after (re)initialization returns the iteration-0
        dump: every node's status, zero deltas.
        """
        if self.status is None:
            raise SimulationError(
                "model is not initialized; call set_initial_status first")
        nstat = len(self.statuses)
        if self._iteration == 0:
            counts = np.bincount(self.status, minlength=nstat)
            self._prev_counts = counts
            self._replay = self.status.copy()
            changed = dict(enumerate(self.status.tolist()))
            self._iteration = 1
            return IterationDelta(
                0, changed, self._count_dict(counts),
                {c: 0 for c in range(nstat)})

        it = self._iteration
        frozen = self.status
        out = frozen.copy()
        self._step(frozen, out, it)

        idx = np.flatnonzero(out != frozen)
        changed = dict(zip(idx.tolist(), out[idx].tolist()))
        if idx.size and (out[idx].min() < 0 or out[idx].max() >= nstat):
            raise SimulationError(
                f"status code outside the declared set at iteration {it}")
        counts = np.bincount(out, minlength=nstat)
        if int(counts.sum()) != self._n or counts.size != nstat:
            raise SimulationError(
                f"status conservation violated at iteration {it}")
        delta = counts - self._prev_counts
        # replay audit: folding the emitted delta must land on the new state
        self._replay[idx] = out[idx]
        if not np.array_equal(self._replay, out):
            raise SimulationError(
                f"delta replay diverged from state at iteration {it}")
        self.status = out
        self._prev_counts = counts
        self._iteration = it + 1
        return IterationDelta(
            it, changed, self._count_dict(counts),
            {c: int(d) for c, d in enumerate(delta.tolist())})

    def iteration_bunch(self, bunch_size):
        """``bunch_size`` consecutive iterations (list of IterationDelta)."""
        n = int(bunch_size)
        if n < 1:
            raise ConfigError("bunch size must be at least 1")
        return [self.iteration() for _ in range(n)]

    def simulate(self, iterations, config=None, seed=None):
        """(Re)initialize and run: the dump plus ``iterations`` steps.

        Args:
            iterations: number of post-initialization iterations (>= 0).
            config: ModelConfig; omit to reuse the stored one.
            seed: optional seed override.

        Returns:
            Trajectory with ``iterations + 1`` deltas (indices 0..n).
        """
        n = int(iterations)
        if n < 0:
            raise ConfigError("iterations must be non-negative")
        if config is None and self.config is None:
            raise ConfigError("no configuration to run; pass a ModelConfig")
        self.set_initial_status(config, seed=seed)
        deltas = [self.iteration() for _ in range(n + 1)]
        return Trajectory(self.meta(), deltas)

    def reset(self):
        """Return to iteration 0, replanting/resampling under the run seed."""
        if self.config is None:
            raise SimulationError("model was never configured")
        self.set_initial_status(self.config, seed=self.seed)

    def spawn(self):
        """Fresh unconfigured instance over the same topology."""
        return type(self)(self._source)

    def _count_dict(self, counts):
        return {c: int(x) for c, x in enumerate(counts.tolist())}

    def _step(self, frozen, out, iteration):
        raise NotImplementedError

    # -- shared rule helpers (kernel dispatch) ------------------------------

    def _contact(self, g, frozen, out, attacker, victim, result, prob,
                 iteration):
        """One prob-trial per (attacker-status node, victim-status
        out-neighbor) contact."""
        if prob <= 0.0:
            return
        backend.kernels().contact_step(
            g.indptr, g.indices, frozen, out, attacker, victim, result,
            float(prob), np.uint64(self.seed), np.uint64(iteration))

    def _transition(self, frozen, out, from_code, to_code, prob, tag,
                    iteration):
        """Per-node prob-trial ``from_code`` -> ``to_code``."""
        backend.kernels().node_transition(
            frozen, out, from_code, to_code, float(prob), tag,
            np.uint64(self.seed), np.uint64(iteration))

    def _active_counts(self, g, frozen, code):
        """Per-node count of in-neighbors holding ``code``."""
        return backend.kernels().active_neighbor_counts(
            g.in_indptr, g.in_indices, frozen, code)

    def _draws(self, iteration, tag, a, b=0):
        """Vectorized keyed draws (model-level rules outside the kernels)."""
        return u01_array(self.seed, iteration, tag, a, b)


def multi_runs(model, config, executions, iterations, infected_sets=None,
               seed=None, jobs=None):
    """Independent repetitions of one configuration.

    Run ``k`` uses the derived child seed (base, k), so adding later runs
    never perturbs earlier ones and every run is individually reproducible.

    Args:
        model: a DiffusionModel instance acting as the prototype; each run
            gets a fresh spawn over the same topology.
        config: the shared ModelConfig.
        executions: number of runs (>= 1).
        iterations: post-initialization iterations per run.
        infected_sets: optional per-run explicit Infected seed sets; length
            must equal ``executions`` and replaces fraction sampling.
        seed: base seed; falls back to ``config.seed``, else drawn fresh.
        jobs: max concurrent runs (default: cpu count capped by runs).

    Returns:
        list of Trajectory, in run order.
    """
    executions = int(executions)
    if executions < 1:
        raise ConfigError("executions must be at least 1")
    if infected_sets is not None and len(infected_sets) != executions:
        raise ConfigError(
            f"infected_sets has {len(infected_sets)} entries for"
            f" {executions} executions")
    if seed is not None:
        base = normalize_seed(int(seed))
    elif config.seed is not None:
        base = normalize_seed(int(config.seed))
    else:
        base = fresh_seed()

    def one(k):
        cfg = config.replace(seed=derive_seed(base, k))
        if infected_sets is not None:
            cfg.initial = {}
            cfg.planted = {int(v): "Infected" for v in infected_sets[k]}
        return model.spawn().simulate(iterations, cfg)

    if jobs is None:
        jobs = min(executions, os.cpu_count() or 1)
    jobs = max(1, int(jobs))
    if jobs == 1:
        return [one(k) for k in range(executions)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, range(executions)))
