"""Compartmental models over time-varying topologies.

One engine iteration consumes one entry of the observed timeline: the
ordered snapshot ids (snapshots mode) or the ordered interaction timestamps
(interactions mode). The iteration-0 status dump occupies the first timeline
slot, so iteration k simulates the k-th observed instant; stepping past the
last observed instant raises SimulationError rather than wrapping around.

Contacts at step k are exactly the edges alive at that instant. Status
carry-over is verbatim: nodes absent from the current instant keep their
status and make no contacts, while removal and re-susceptibility trials
still fire for them (the discrete clock ticks for everyone). Nodes first
appearing mid-run were susceptible all along, having been seeded with the
full node universe at initialization.
"""

from __future__ import annotations

from .._rng import TAG_RECOVER, TAG_RESUSCEPT
from ..dyngraph import SnapshotSequence, TemporalGraph
from ..engine import ConfigError, DiffusionModel, ParamSpec, SimulationError
from .epidemic import SIModel, SIRModel, SISModel


class _DynamicModel(DiffusionModel):
    """Timeline plumbing shared by the dynamic compartmental models."""

    kind = "dynamic"

    def _bind_topology(self, source):
        if isinstance(source, TemporalGraph):
            if not source.frozen:
                raise ConfigError(
                    "freeze() the temporal graph before attaching a model")
        elif not isinstance(source, SnapshotSequence):
            raise ConfigError(
                f"model {self.name} requires a TemporalGraph or"
                f" SnapshotSequence, got {type(source).__name__}")
        self._source = source
        self.graph = None
        self._n = source.node_count
        self.mode = None
        self._timeline = []

    def _resolve_mode(self, cfg):
        mode = cfg.execution_mode
        if mode is None:
            mode = ("interactions" if isinstance(self._source, TemporalGraph)
                    else "snapshots")
        if mode == "interactions":
            if not isinstance(self._source, TemporalGraph):
                raise ConfigError(
                    "interactions mode requires a TemporalGraph")
            self._timeline = self._source.timestamps()
        elif mode == "snapshots":
            if not isinstance(self._source, SnapshotSequence):
                raise ConfigError(
                    "snapshots mode requires a SnapshotSequence")
            self._timeline = list(self._source.ids)
        else:
            raise ConfigError(
                "execution_mode must be 'snapshots' or 'interactions',"
                f" got {mode!r}")
        if not self._timeline:
            raise ConfigError("the dynamic topology observes no instants")
        self.mode = mode

    def _meta_extra(self, m):
        m["execution_mode"] = self.mode
        m["timeline"] = list(self._timeline)

    def _graph_at(self, k):
        if self.mode == "interactions":
            return self._source.slice(self._timeline[k])
        return self._source[k][1]

    def _step(self, frozen, out, iteration):
        if iteration >= len(self._timeline):
            raise SimulationError(
                f"the observed timeline ends after"
                f" {len(self._timeline) - 1} step(s); reset or extend the"
                " topology")
        self._dyn_step(self._graph_at(iteration), frozen, out, iteration)

    def _dyn_step(self, g, frozen, out, iteration):
        raise NotImplementedError


class DynSIModel(_DynamicModel):
    """SI over a time-varying topology."""

    name = "DynSI"
    statuses = SIModel.statuses
    params_spec = SIModel.params_spec

    def _dyn_step(self, g, frozen, out, iteration):
        self._contact(g, frozen, out, 1, 0, 1, self.params["beta"],
                      iteration)


class DynSISModel(_DynamicModel):
    """SIS over a time-varying topology; reversion ticks every instant."""

    name = "DynSIS"
    statuses = SISModel.statuses
    params_spec = SISModel.params_spec

    def _dyn_step(self, g, frozen, out, iteration):
        self._contact(g, frozen, out, 1, 0, 1, self.params["beta"],
                      iteration)
        self._transition(frozen, out, 1, 0, self.params["lambda"],
                         TAG_RESUSCEPT, iteration)


class DynSIRModel(_DynamicModel):
    """SIR over a time-varying topology; removal ticks every instant."""

    name = "DynSIR"
    statuses = SIRModel.statuses
    params_spec = SIRModel.params_spec

    def _dyn_step(self, g, frozen, out, iteration):
        self._contact(g, frozen, out, 1, 0, 1, self.params["beta"],
                      iteration)
        self._transition(frozen, out, 1, 2, self.params["gamma"],
                         TAG_RECOVER, iteration)
