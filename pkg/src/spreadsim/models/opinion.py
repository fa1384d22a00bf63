"""Discrete opinion-dynamics models.

Opinions are the two-valued spin -1/+1, carried as the status pair
(Susceptible = -1, Infected = +1) so that seeding and reporting work exactly
like the epidemic models. Each engine iteration performs one asynchronous
micro-update (pick someone, maybe copy an opinion); setting the ``sweep``
parameter to 1 performs node-count micro-updates per iteration instead and
labels the trajectory metadata accordingly.

The cognitive opinion-dynamics state vector is scaffolded as a validated
type, but its update rules are not implemented here; attaching the model and
iterating raises NotImplementedError pointing at the source literature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._rng import TAG_PANEL, TAG_PICK, u01
from ..engine import ConfigError, DiffusionModel, ParamSpec

OPINION_VALUES = {"Susceptible": -1, "Infected": 1}


class _OpinionModel(DiffusionModel):
    """Shared micro-update plumbing for the spin models."""

    statuses = ("Susceptible", "Infected")
    params_spec = {
        "sweep": ParamSpec("int", 0, 1, default=0,
                           doc="1: node-count micro-updates per iteration"),
    }

    def _meta_extra(self, m):
        m["update_unit"] = "sweep" if self.params.get("sweep") else "micro"
        m["opinion_values"] = dict(OPINION_VALUES)

    def _step(self, frozen, out, iteration):
        # micro-updates are sequential: each sees the previous one's writes
        reps = self._n if self.params.get("sweep") else 1
        for sub in range(reps):
            self._micro(out, iteration, sub)

    def _micro(self, state, iteration, sub):
        raise NotImplementedError

    def _pick(self, iteration, sub, size, slot=0):
        """Uniform index in [0, size) from the keyed pick stream."""
        return int(u01(self.seed, iteration, TAG_PICK, slot, sub) * size)

    def _panel_draw(self, iteration, sub, slot):
        return u01(self.seed, iteration, TAG_PANEL, slot, sub)


class VoterModel(_OpinionModel):
    """Voter dynamics: a random node copies a random neighbor's opinion.

    Picking an isolated node is a no-op micro-update.
    """

    name = "Voter"

    def _micro(self, state, iteration, sub):
        u = self._pick(iteration, sub, self._n)
        nbrs = self.graph.neighbors(u)
        if nbrs.size == 0:
            return
        j = int(self._panel_draw(iteration, sub, 0) * nbrs.size)
        state[u] = state[int(nbrs[j])]


class QVoterModel(_OpinionModel):
    """Q-voter dynamics: a unanimous panel of q neighbors converts the node.

    The panel is sampled without replacement; nodes with fewer than q
    neighbors use their whole neighborhood. With q = 1 every panel is
    unanimous and the dynamics coincide with the voter model draw for draw.
    The flip-on-disagreement probability is pinned to 0 in this release.
    """

    name = "QVoter"
    params_spec = {
        "q": ParamSpec("int", 1, None, doc="panel size"),
        "epsilon_flip": ParamSpec("float", 0.0, 1.0, default=0.0,
                                  doc="disagreement flip chance (pinned 0)"),
        "sweep": _OpinionModel.params_spec["sweep"],
    }

    def _validate_extra(self):
        if self.params["epsilon_flip"] != 0.0:
            raise ConfigError(
                "epsilon_flip is pinned to 0 in this release")

    def _micro(self, state, iteration, sub):
        u = self._pick(iteration, sub, self._n)
        nbrs = self.graph.neighbors(u)
        if nbrs.size == 0:
            return
        k = min(self.params["q"], int(nbrs.size))
        panel = nbrs.astype(np.int64)
        if k < panel.size:
            panel = panel.copy()
            # partial Fisher-Yates; slot j keys the j-th panel draw
            for j in range(k):
                r = self._panel_draw(iteration, sub, j)
                pick = j + int(r * (panel.size - j))
                panel[j], panel[pick] = panel[pick], panel[j]
            panel = panel[:k]
        opinions = state[panel]
        if (opinions == opinions[0]).all():
            state[u] = opinions[0]


class SznajdModel(_OpinionModel):
    """Sznajd dynamics: an agreeing random edge converts both endpoints'
    neighborhoods (the pair itself excluded, trivially unchanged)."""

    name = "Sznajd"

    def _bind_topology(self, graph):
        super()._bind_topology(graph)
        deg = np.diff(graph.indptr)
        rows = np.repeat(np.arange(self._n, dtype=np.int64), deg)
        cols = graph.indices.astype(np.int64)
        if graph.directed:
            self._edge_u, self._edge_v = rows, cols
        else:
            half = rows < cols
            self._edge_u, self._edge_v = rows[half], cols[half]

    def _micro(self, state, iteration, sub):
        m = self._edge_u.size
        if m == 0:
            return
        e = self._pick(iteration, sub, m)
        u = int(self._edge_u[e])
        v = int(self._edge_v[e])
        if state[u] != state[v]:
            return
        audience = np.union1d(self.graph.neighbors(u),
                              self.graph.neighbors(v))
        audience = audience[(audience != u) & (audience != v)]
        state[audience] = state[u]


class MajorityRuleModel(_OpinionModel):
    """Majority rule: a random group adopts its majority opinion.

    The group is drawn uniformly without replacement from all nodes (the
    topology does not constrain it); even-split ties resolve to +1.
    """

    name = "MajorityRule"
    params_spec = {
        "group_size": ParamSpec("int", 1, None, doc="agents per group"),
        "sweep": _OpinionModel.params_spec["sweep"],
    }

    def _validate_extra(self):
        if self.params["group_size"] > self._n:
            raise ConfigError(
                f"group_size {self.params['group_size']} exceeds the"
                f" {self._n}-node network")

    def _micro(self, state, iteration, sub):
        r = self.params["group_size"]
        ids = np.arange(self._n, dtype=np.int64)
        for j in range(r):
            d = self._panel_draw(iteration, sub, j)
            pick = j + int(d * (self._n - j))
            ids[j], ids[pick] = ids[pick], ids[j]
        group = ids[:r]
        plus = int((state[group] == 1).sum())
        state[group] = 1 if 2 * plus >= r else 0


@dataclass(frozen=True)
class CognitiveState:
    """Validated per-individual state vector for cognitive opinion dynamics.

    Fields:
        risk_perception: perceived risk degree, in [0, 1].
        risk_sensitivity: reaction direction, one of -1, 0, 1.
        inform_tendency: propensity to inform others, in [0, 1].
        institution_trust: trust in institutional information, in [0, 1].

    ``peer_trust`` is the exact complement of ``institution_trust``.
    """

    risk_perception: float
    risk_sensitivity: int
    inform_tendency: float
    institution_trust: float

    def __post_init__(self):
        if not 0.0 <= self.risk_perception <= 1.0:
            raise ValueError("risk_perception must be in [0, 1]")
        if self.risk_sensitivity not in (-1, 0, 1):
            raise ValueError("risk_sensitivity must be -1, 0 or 1")
        if not 0.0 <= self.inform_tendency <= 1.0:
            raise ValueError("inform_tendency must be in [0, 1]")
        if not 0.0 <= self.institution_trust <= 1.0:
            raise ValueError("institution_trust must be in [0, 1]")

    @property
    def peer_trust(self):
        return 1.0 - self.institution_trust


class CognitiveOpinionDynamicsModel(_OpinionModel):
    """Registered placeholder: state is scaffolded, dynamics are not.

    The update rules live in the source literature and are not reproduced
    here; any attempt to advance an iteration raises NotImplementedError.
    """

    name = "CognitiveOpinionDynamics"

    def _step(self, frozen, out, iteration):
        raise NotImplementedError(
            "cognitive opinion dynamics update rules are not implemented;"
            " see Vilone et al. (2016) for the model's dynamics")
