"""Vectorized pure-numpy fallback kernels.

Signature-compatible with _kernels_numba and bit-identical in effect: draws
are keyed by (iteration, tag, event words), never by visitation order, so
evaluating them as array expressions instead of scalar loops changes nothing
observable. Used when numba is unavailable or SPREADSIM_BACKEND=numpy.
"""

from __future__ import annotations

import numpy as np

from ._rng import TAG_CONTACT, u01_array


def _expand_rows(indptr, rows):
    """Flat CSR positions of the adjacency slices of ``rows``.

    Returns (row_repeats, positions); zero-degree rows contribute nothing.
    """
    counts = (indptr[rows + 1] - indptr[rows]).astype(np.int64)
    keep = counts > 0
    rows = rows[keep]
    counts = counts[keep]
    if rows.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    starts = indptr[rows].astype(np.int64)
    total = int(counts.sum())
    steps = np.ones(total, dtype=np.int64)
    steps[0] = starts[0]
    if rows.size > 1:
        bounds = np.cumsum(counts[:-1])
        steps[bounds] = starts[1:] - (starts[:-1] + counts[:-1]) + 1
    pos = np.cumsum(steps)
    return np.repeat(rows.astype(np.int64), counts), pos


def contact_step(indptr, indices, frozen, out, attacker, victim, result, prob, seed, iteration):
    src = np.flatnonzero(frozen == attacker)
    if src.size == 0:
        return
    u, pos = _expand_rows(indptr, src)
    if pos.size == 0:
        return
    v = indices[pos].astype(np.int64)
    hit = frozen[v] == victim
    u, v = u[hit], v[hit]
    if v.size == 0:
        return
    r = u01_array(seed, iteration, TAG_CONTACT, u, v)
    out[v[r < prob]] = result


def node_transition(frozen, out, from_code, to_code, prob, tag, seed, iteration):
    if prob <= 0.0:
        return
    idx = np.flatnonzero(frozen == from_code)
    if idx.size == 0:
        return
    r = u01_array(seed, iteration, tag, idx, np.zeros(idx.size, dtype=np.uint64))
    out[idx[r < prob]] = to_code


def cascade_step(indptr, indices, edge_prob, frozen, out, sus, active, spent, seed, iteration):
    src = np.flatnonzero(frozen == active)
    if src.size == 0:
        return
    u, pos = _expand_rows(indptr, src)
    if pos.size:
        v = indices[pos].astype(np.int64)
        hit = frozen[v] == sus
        u, v, pos = u[hit], v[hit], pos[hit]
        if v.size:
            r = u01_array(seed, iteration, TAG_CONTACT, u, v)
            out[v[r < edge_prob[pos]]] = active
    out[src] = spent


def swir_step(indptr, indices, frozen, out, sus, weak, inf, rem, kappa, mu, nu, seed, iteration):
    src = np.flatnonzero(frozen == inf)
    if src.size == 0:
        return
    u, pos = _expand_rows(indptr, src)
    if pos.size:
        v = indices[pos].astype(np.int64)
        r = u01_array(seed, iteration, TAG_CONTACT, u, v)
        vs = frozen[v] == sus
        claim_i = vs & (r < kappa)
        claim_w = vs & ~claim_i & (r < kappa + mu)
        won = claim_i | claim_w
        if won.any():
            # the scalar path keeps the claim of the lowest-id attacker;
            # sort by (target, attacker) and take each target's first claim
            uw, vw, iw = u[won], v[won], claim_i[won]
            order = np.lexsort((uw, vw))
            vw = vw[order]
            iw = iw[order]
            first = np.ones(vw.size, dtype=bool)
            first[1:] = vw[1:] != vw[:-1]
            out[vw[first]] = np.where(iw[first], inf, weak).astype(out.dtype)
        escalate = (frozen[v] == weak) & (r < nu)
        out[v[escalate]] = inf
    out[src] = rem


def active_neighbor_counts(indptr, indices, frozen, code):
    if indices.size == 0:
        return np.zeros(indptr.shape[0] - 1, dtype=np.int64)
    mask = (frozen[indices] == code).astype(np.int64)
    csum = np.concatenate((np.zeros(1, dtype=np.int64), np.cumsum(mask)))
    return csum[indptr[1:]] - csum[indptr[:-1]]
