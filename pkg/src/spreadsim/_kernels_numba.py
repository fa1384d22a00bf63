"""Compiled per-iteration kernels (numba scalar loops over CSR adjacency).

Each kernel reads the frozen pre-iteration status array and writes changed
codes into ``out`` (a copy of the frozen array). Targets of distinct rules are
disjoint by frozen status, so write order inside one iteration cannot race.
fastmath stays off: draw comparisons must be bit-identical to the numpy
fallback in _kernels_numpy.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._rng import TAG_CONTACT

NJIT_OPTIONS = dict(cache=True, nogil=True, fastmath=False, error_model="numpy")

_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_K_ITER = np.uint64(0x9E3779B97F4A7C15)
_K_TAG = np.uint64(0xBF58476D1CE4E5B9)
_K_A = np.uint64(0x94D049BB133111EB)
_K_B = np.uint64(0xD6E8FEB86659FD93)
_INV53 = 1.0 / 9007199254740992.0


@njit(inline="always", **NJIT_OPTIONS)
def _scramble(h):
    h ^= h >> _U30
    h *= _M1
    h ^= h >> _U27
    h *= _M2
    h ^= h >> _U31
    return h


@njit(inline="always", **NJIT_OPTIONS)
def u01(seed, iteration, tag, a, b):
    # Must track _rng.u01 exactly; the equality is pinned by tests.
    h = _scramble(seed ^ (np.uint64(iteration) + _K_ITER))
    h = _scramble(h ^ (np.uint64(tag) + _K_TAG))
    h = _scramble(h ^ (np.uint64(a) + _K_A))
    h = _scramble(h ^ (np.uint64(b) + _K_B))
    return (h >> _U11) * _INV53


@njit(**NJIT_OPTIONS)
def contact_step(indptr, indices, frozen, out, attacker, victim, result, prob, seed, iteration):
    """Every frozen ``attacker`` runs one prob-trial against each frozen
    ``victim`` neighbor; successes become ``result``."""
    n = indptr.shape[0] - 1
    for u in range(n):
        if frozen[u] == attacker:
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if frozen[v] == victim:
                    if u01(seed, iteration, TAG_CONTACT, np.uint64(u), np.uint64(v)) < prob:
                        out[v] = result


@njit(**NJIT_OPTIONS)
def node_transition(frozen, out, from_code, to_code, prob, tag, seed, iteration):
    """Per-node geometric trial ``from_code`` -> ``to_code``. prob 0 is a no-op."""
    if prob <= 0.0:
        return
    n = frozen.shape[0]
    for u in range(n):
        if frozen[u] == from_code:
            if u01(seed, iteration, tag, np.uint64(u), np.uint64(0)) < prob:
                out[u] = to_code


@njit(**NJIT_OPTIONS)
def cascade_step(indptr, indices, edge_prob, frozen, out, sus, active, spent, seed, iteration):
    """Single-chance cascade: nodes activated last iteration attempt each
    susceptible neighbor once with the edge's probability, then retire."""
    n = indptr.shape[0] - 1
    for u in range(n):
        if frozen[u] == active:
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                # out check skips targets already activated this iteration;
                # the outcome is unchanged, the draw is just not needed.
                if frozen[v] == sus and out[v] == sus:
                    if u01(seed, iteration, TAG_CONTACT, np.uint64(u), np.uint64(v)) < edge_prob[e]:
                        out[v] = active
            out[u] = spent


@njit(**NJIT_OPTIONS)
def swir_step(indptr, indices, frozen, out, sus, weak, inf, rem, kappa, mu, nu, seed, iteration):
    """Weakened-state contact step: one draw partitions S -> I | W | stay,
    weakened neighbors escalate with nu, and every attacker retires to R.

    A susceptible target keeps the claim of its lowest-id infected neighbor
    (ascending scan order); later claims are skipped.
    """
    n = indptr.shape[0] - 1
    for u in range(n):
        if frozen[u] == inf:
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if frozen[v] == sus:
                    if out[v] != sus:
                        continue
                    r = u01(seed, iteration, TAG_CONTACT, np.uint64(u), np.uint64(v))
                    if r < kappa:
                        out[v] = inf
                    elif r < kappa + mu:
                        out[v] = weak
                elif frozen[v] == weak:
                    if out[v] == weak:
                        if u01(seed, iteration, TAG_CONTACT, np.uint64(u), np.uint64(v)) < nu:
                            out[v] = inf
            out[u] = rem


@njit(**NJIT_OPTIONS)
def active_neighbor_counts(indptr, indices, frozen, code):
    """Per-node count of neighbors (CSR rows) whose frozen status is ``code``."""
    n = indptr.shape[0] - 1
    counts = np.zeros(n, dtype=np.int64)
    for u in range(n):
        c = 0
        for e in range(indptr[u], indptr[u + 1]):
            if frozen[indices[e]] == code:
                c += 1
        counts[u] = c
    return counts
