"""Static epidemic and adoption models.

Compartmental chains (SI, SIS, SIR, SEIS, SEIR, SWIR) use per-contact
infection: every infected node runs an independent beta-trial against each
susceptible out-neighbor per iteration, so a node with k infected
in-neighbors escapes with probability (1 - beta)^k. Exposure in SEIS/SEIR
follows the same per-contact rule. A node entering a compartment stays there
for at least one full iteration: removal and re-susceptibility trials only
apply to nodes already in the compartment when the iteration started.

Adoption models: strict-threshold activation (fraction of infected
neighbors must exceed tau), the blocked-node variant with spontaneous
adoption, single-chance cascades with per-edge probabilities, and
profile-based adoption (a personal coin decides, not the peer count).
"""

from __future__ import annotations

import math

import numpy as np

from .. import backend
from .._rng import (TAG_INCUBATE, TAG_PROFILE, TAG_RECOVER, TAG_RESUSCEPT,
                    TAG_SPONTANEOUS)
from ..engine import ConfigError, DiffusionModel, ParamSpec


class SIModel(DiffusionModel):
    """Susceptible-Infected: contact infection, infection is absorbing."""

    name = "SI"
    statuses = ("Susceptible", "Infected")
    params_spec = {
        "beta": ParamSpec("float", 0.0, 1.0,
                          doc="per-contact infection probability"),
    }

    def _step(self, frozen, out, iteration):
        self._contact(self.graph, frozen, out, 1, 0, 1,
                      self.params["beta"], iteration)


class SISModel(DiffusionModel):
    """Susceptible-Infected-Susceptible: infected nodes may revert."""

    name = "SIS"
    statuses = ("Susceptible", "Infected")
    params_spec = {
        "beta": ParamSpec("float", 0.0, 1.0,
                          doc="per-contact infection probability"),
        "lambda": ParamSpec("float", 0.0, 1.0,
                            doc="re-susceptibility probability"),
    }

    def _step(self, frozen, out, iteration):
        self._contact(self.graph, frozen, out, 1, 0, 1,
                      self.params["beta"], iteration)
        self._transition(frozen, out, 1, 0, self.params["lambda"],
                         TAG_RESUSCEPT, iteration)


class SIRModel(DiffusionModel):
    """Susceptible-Infected-Removed: removal is absorbing."""

    name = "SIR"
    statuses = ("Susceptible", "Infected", "Removed")
    params_spec = {
        "beta": ParamSpec("float", 0.0, 1.0,
                          doc="per-contact infection probability"),
        "gamma": ParamSpec("float", 0.0, 1.0, doc="removal probability"),
    }

    def _step(self, frozen, out, iteration):
        self._contact(self.graph, frozen, out, 1, 0, 1,
                      self.params["beta"], iteration)
        self._transition(frozen, out, 1, 2, self.params["gamma"],
                         TAG_RECOVER, iteration)


class SEISModel(DiffusionModel):
    """Susceptible-Exposed-Infected-Susceptible: contact exposes, exposure
    incubates, infection reverts."""

    name = "SEIS"
    statuses = ("Susceptible", "Exposed", "Infected")
    params_spec = {
        "beta": ParamSpec("float", 0.0, 1.0,
                          doc="per-contact exposure probability"),
        "epsilon": ParamSpec("float", 0.0, 1.0,
                             doc="exposed to infected probability"),
        "lambda": ParamSpec("float", 0.0, 1.0,
                            doc="re-susceptibility probability"),
    }

    def _step(self, frozen, out, iteration):
        self._contact(self.graph, frozen, out, 2, 0, 1,
                      self.params["beta"], iteration)
        self._transition(frozen, out, 1, 2, self.params["epsilon"],
                         TAG_INCUBATE, iteration)
        self._transition(frozen, out, 2, 0, self.params["lambda"],
                         TAG_RESUSCEPT, iteration)


class SEIRModel(DiffusionModel):
    """Susceptible-Exposed-Infected-Removed."""

    name = "SEIR"
    statuses = ("Susceptible", "Exposed", "Infected", "Removed")
    params_spec = {
        "beta": ParamSpec("float", 0.0, 1.0,
                          doc="per-contact exposure probability"),
        "epsilon": ParamSpec("float", 0.0, 1.0,
                             doc="exposed to infected probability"),
        "gamma": ParamSpec("float", 0.0, 1.0, doc="removal probability"),
    }

    def _step(self, frozen, out, iteration):
        self._contact(self.graph, frozen, out, 2, 0, 1,
                      self.params["beta"], iteration)
        self._transition(frozen, out, 1, 2, self.params["epsilon"],
                         TAG_INCUBATE, iteration)
        self._transition(frozen, out, 2, 3, self.params["gamma"],
                         TAG_RECOVER, iteration)


class SWIRModel(DiffusionModel):
    """Susceptible-Weakened-Infected-Removed.

    One draw per (infected, susceptible) contact partitions the target:
    infected with kappa, weakened with kappa..kappa+mu, else untouched; a
    susceptible target is claimed by its lowest-id infected neighbor.
    Weakened targets escalate to infected with nu per contact. Every node
    infected at the start of the iteration ends it removed.
    """

    name = "SWIR"
    statuses = ("Susceptible", "Weakened", "Infected", "Removed")
    params_spec = {
        "kappa": ParamSpec("float", 0.0, 1.0,
                           doc="contact probability susceptible to infected"),
        "mu": ParamSpec("float", 0.0, 1.0,
                        doc="contact probability susceptible to weakened"),
        "nu": ParamSpec("float", 0.0, 1.0,
                        doc="contact probability weakened to infected"),
    }

    def _validate_extra(self):
        if self.params["kappa"] + self.params["mu"] > 1.0 + 1e-12:
            raise ConfigError("kappa + mu must not exceed 1")

    def _step(self, frozen, out, iteration):
        g = self.graph
        backend.kernels().swir_step(
            g.indptr, g.indices, frozen, out, 0, 1, 2, 3,
            float(self.params["kappa"]), float(self.params["mu"]),
            float(self.params["nu"]),
            np.uint64(self.seed), np.uint64(iteration))


class ThresholdModel(DiffusionModel):
    """Deterministic strict-threshold adoption.

    A susceptible node adopts when the fraction of its in-neighbors that
    were infected at the previous iteration strictly exceeds its threshold;
    isolated nodes never adopt. No randomness is consumed after the initial
    sampling.
    """

    name = "Threshold"
    statuses = ("Susceptible", "Infected")
    node_params_spec = {
        "tau": ParamSpec("float", 0.0, 1.0,
                         doc="per-node adoption threshold"),
    }

    def _step(self, frozen, out, iteration):
        fire = self._threshold_fire(self.graph, frozen, 0, 1,
                                    self.node_arrays["tau"])
        out[fire] = 1

    def _threshold_fire(self, g, frozen, sus, inf, tau):
        counts = self._active_counts(g, frozen, inf)
        deg = g.in_degrees
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = counts / deg
        return (frozen == sus) & (deg > 0) & (frac > tau)


class KerteszThresholdModel(ThresholdModel):
    """Threshold adoption with a blocked fraction and spontaneous adoption.

    A density of nodes, drawn once at initialization from the susceptible
    pool, is blocked and never changes status (blocked neighbors still count
    in threshold denominators). Each remaining susceptible node adopts
    spontaneously with probability spontaneous_p, else by the strict
    threshold rule.
    """

    name = "KerteszThreshold"
    statuses = ("Susceptible", "Infected", "Blocked")
    params_spec = {
        "blocked_density": ParamSpec(
            "float", 0.0, 1.0,
            doc="fraction of nodes frozen in the blocked status"),
        "spontaneous_p": ParamSpec(
            "float", 0.0, 1.0, doc="spontaneous adoption probability"),
    }
    node_params_spec = {
        "tau": ParamSpec("float", 0.0, 1.0,
                         doc="per-node adoption threshold"),
    }

    def _post_initial(self, status, rng):
        k = int(math.floor(self.params["blocked_density"] * self._n))
        if k == 0:
            return
        pool = np.flatnonzero(status == 0)
        if k > pool.size:
            raise ConfigError(
                f"blocked_density needs {k} blocked nodes but only"
                f" {pool.size} susceptible node(s) remain")
        status[rng.choice(pool, size=k, replace=False)] = 2

    def _step(self, frozen, out, iteration):
        self._transition(frozen, out, 0, 1, self.params["spontaneous_p"],
                         TAG_SPONTANEOUS, iteration)
        fire = self._threshold_fire(self.graph, frozen, 0, 1,
                                    self.node_arrays["tau"])
        out[fire] = 1


class IndependentCascadesModel(DiffusionModel):
    """Single-chance cascade with per-edge success probabilities.

    Nodes activated in the previous iteration attempt each susceptible
    out-neighbor once (ascending neighbor id) with the edge's probability,
    then retire to Removed; the process quiesces when an iteration activates
    nobody.
    """

    name = "IndependentCascades"
    statuses = ("Susceptible", "Infected", "Removed")
    edge_params_spec = {
        "probability": ParamSpec(
            "float", 0.0, 1.0, doc="per-edge activation probability"),
    }

    def _step(self, frozen, out, iteration):
        g = self.graph
        backend.kernels().cascade_step(
            g.indptr, g.indices, self.edge_arrays["probability"], frozen,
            out, 0, 1, 2, np.uint64(self.seed), np.uint64(iteration))


class ProfileModel(DiffusionModel):
    """Profile adoption: exposure triggers a personal coin.

    A susceptible node with at least one infected in-neighbor flips once per
    iteration with its own profile probability; how many neighbors are
    infected does not matter beyond existence.
    """

    name = "Profile"
    statuses = ("Susceptible", "Infected")
    node_params_spec = {
        "profile": ParamSpec("float", 0.0, 1.0,
                             doc="per-node adoption probability"),
    }

    def _step(self, frozen, out, iteration):
        counts = self._active_counts(self.graph, frozen, 1)
        idx = np.flatnonzero((frozen == 0) & (counts > 0))
        if idx.size == 0:
            return
        r = self._draws(iteration, TAG_PROFILE, idx)
        out[idx[r < self.node_arrays["profile"][idx]]] = 1


class ProfileThresholdModel(DiffusionModel):
    """Profile adoption gated by a strict threshold: the personal coin is
    flipped only when the infected-neighbor fraction exceeds tau."""

    name = "ProfileThreshold"
    statuses = ("Susceptible", "Infected")
    node_params_spec = {
        "tau": ParamSpec("float", 0.0, 1.0,
                         doc="per-node adoption threshold"),
        "profile": ParamSpec("float", 0.0, 1.0,
                             doc="per-node adoption probability"),
    }

    def _step(self, frozen, out, iteration):
        g = self.graph
        counts = self._active_counts(g, frozen, 1)
        deg = g.in_degrees
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = counts / deg
        eligible = (frozen == 0) & (deg > 0) & (frac > self.node_arrays["tau"])
        idx = np.flatnonzero(eligible)
        if idx.size == 0:
            return
        r = self._draws(iteration, TAG_PROFILE, idx)
        out[idx[r < self.node_arrays["profile"][idx]]] = 1
