"""Static network container, edge-list IO and the three random generators.

The container is CSR adjacency over dense integer node ids: ``indptr``
(int64, length n+1) and ``indices`` (int32, neighbor ids sorted ascending per
row). Undirected graphs store each edge in both endpoint rows; directed
graphs keep a second CSR for in-neighbors, which threshold-style rules read.
Node labels from parsed files are kept as a sidecar list; everything
numerical runs on the dense ids.
"""

from __future__ import annotations

import hashlib
import logging

import numpy as np

from . import backend
from ._rng import fresh_seed

log = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised for malformed edge-list documents; carries the offending line."""


def _dedupe_pairs(n, u, v):
    keys = u.astype(np.int64) * np.int64(n) + v.astype(np.int64)
    keys = np.unique(keys)
    return keys // n, keys % n


def _build_csr(n, u, v):
    # expects deduped directed pairs; rows come out sorted by construction
    order = np.lexsort((v, u))
    u = u[order]
    v = v[order]
    counts = np.bincount(u, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, v.astype(np.int32)


class Graph:
    """Immutable static network over dense node ids 0..n-1."""

    def __init__(self, node_count, indptr, indices, directed,
                 in_indptr=None, in_indices=None, labels=None,
                 self_loops_dropped=0):
        self.node_count = int(node_count)
        self.indptr = indptr
        self.indices = indices
        self.directed = bool(directed)
        self.in_indptr = in_indptr if in_indptr is not None else indptr
        self.in_indices = in_indices if in_indices is not None else indices
        self.labels = labels
        self.self_loops_dropped = int(self_loops_dropped)
        self._digest = None

    @classmethod
    def from_edges(cls, node_count, u, v, directed=False, labels=None):
        """Build from parallel endpoint arrays; collapses duplicates and
        drops self-loops (counted, logged)."""
        n = int(node_count)
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.size and (u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n):
            raise ValueError("edge endpoint outside 0..node_count-1")
        loops = u == v
        dropped = int(loops.sum())
        if dropped:
            log.warning("dropped %d self-loop(s)", dropped)
            u, v = u[~loops], v[~loops]
        if directed:
            du, dv = _dedupe_pairs(n, u, v)
            indptr, indices = _build_csr(n, du, dv)
            in_indptr, in_indices = _build_csr(n, dv, du)
            return cls(n, indptr, indices, True, in_indptr, in_indices,
                       labels, dropped)
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        lo, hi = _dedupe_pairs(n, lo, hi)
        bu = np.concatenate((lo, hi))
        bv = np.concatenate((hi, lo))
        indptr, indices = _build_csr(n, bu, bv)
        return cls(n, indptr, indices, False, labels=labels,
                   self_loops_dropped=dropped)

    @property
    def edge_count(self):
        if self.directed:
            return int(self.indices.size)
        return int(self.indices.size) // 2

    @property
    def degrees(self):
        return np.diff(self.indptr)

    @property
    def in_degrees(self):
        return np.diff(self.in_indptr)

    def neighbors(self, u):
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def in_neighbors(self, u):
        return self.in_indices[self.in_indptr[u]:self.in_indptr[u + 1]]

    def degree(self, u):
        return int(self.indptr[u + 1] - self.indptr[u])

    def edges(self):
        """Iterate edges once: (u, v) with u < v when undirected."""
        for u in range(self.node_count):
            for v in self.neighbors(u):
                v = int(v)
                if self.directed or u < v:
                    yield u, v

    def label_of(self, node):
        if self.labels is None:
            return str(node)
        return self.labels[node]

    def label_map(self):
        """Dense id -> original token, for results-document sidecars."""
        return {i: self.label_of(i) for i in range(self.node_count)}

    @property
    def digest(self):
        """Stable hex digest of the dense structure (labels excluded)."""
        if self._digest is None:
            h = hashlib.sha256()
            h.update(b"directed" if self.directed else b"undirected")
            h.update(int(self.node_count).to_bytes(8, "little"))
            h.update(np.ascontiguousarray(self.indptr).tobytes())
            h.update(np.ascontiguousarray(self.indices).tobytes())
            self._digest = h.hexdigest()
        return self._digest

    def has_edge(self, u, v):
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.size and row[i] == v)

    def edge_value_array(self, mapping, default=np.nan):
        """CSR-aligned float array from an {(u, v): value} map.

        Undirected graphs accept either endpoint order and fill both stored
        directions. Unknown endpoints or absent edges raise ValueError.
        """
        values = np.full(self.indices.size, default, dtype=np.float64)
        for (a, b), val in mapping.items():
            a = int(a)
            b = int(b)
            if not (0 <= a < self.node_count and 0 <= b < self.node_count):
                raise ValueError(f"edge ({a}, {b}) endpoint out of range")
            placed = False
            pairs = ((a, b),) if self.directed else ((a, b), (b, a))
            for s, t in pairs:
                row = self.indices[self.indptr[s]:self.indptr[s + 1]]
                i = int(np.searchsorted(row, t))
                if i < row.size and row[i] == t:
                    values[self.indptr[s] + i] = float(val)
                    placed = True
            if not placed:
                raise ValueError(f"edge ({a}, {b}) not present in graph")
        return values

    def to_edge_list(self):
        """Serialize to the plain text format (dense ids, one edge per line).

        Edges introducing each node come first, ordered so that reloading
        assigns the same first-seen dense ids; remaining edges follow in
        sorted order.
        """
        seen = np.zeros(self.node_count, dtype=bool)
        intro = []
        used = set()

        def incident(w):
            for y in self.neighbors(w):
                yield int(y), (w, int(y))
            if self.directed:
                for y in self.in_neighbors(w):
                    yield int(y), (int(y), w)

        for w in range(self.node_count):
            if seen[w]:
                continue
            pairs = list(incident(w))
            if not pairs:
                continue  # isolated node: not expressible in this format
            older = [(y, e) for y, e in pairs if seen[y]]
            if older:
                _, edge = min(older)
            else:
                y, edge = min(pairs)
                seen[y] = True
            seen[w] = True
            intro.append(edge)
            used.add(edge)
        rest = [e for e in self.edges() if e not in used]
        if not self.directed:
            rest = [e for e in rest if (e[1], e[0]) not in used]
        lines = [f"{u} {v}" for u, v in intro + sorted(rest)]
        return "\n".join(lines) + ("\n" if lines else "")


def load_edge_list(text, directed=False):
    """Parse a whitespace-separated edge list.

    Lines starting with '#' and blank lines are skipped; the first two
    tokens are the endpoints and any further tokens are ignored; a line with
    a single token is an error. Node ids are assigned densely in first-seen
    order.

    Args:
        text: the document (str).
        directed: interpret each line as an arc u -> v.

    Returns:
        Graph.
    """
    ids = {}
    us = []
    vs = []

    def intern(tok):
        i = ids.get(tok)
        if i is None:
            i = len(ids)
            ids[tok] = i
        return i

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise GraphFormatError(
                f"line {ln}: expected at least two tokens, got {len(parts)}")
        us.append(intern(parts[0]))
        vs.append(intern(parts[1]))
    labels = list(ids.keys())
    return Graph.from_edges(len(ids), np.array(us, dtype=np.int64),
                            np.array(vs, dtype=np.int64), directed=directed,
                            labels=labels)


def _pair_decode(n, k):
    """Row-major (i, j) with i < j from linear pair index k (vectorized)."""
    kf = k.astype(np.float64)
    b = 2.0 * n - 1.0
    i = np.floor((b - np.sqrt(b * b - 8.0 * kf)) / 2.0).astype(np.int64)
    i = np.clip(i, 0, n - 2)
    for _ in range(2):  # fix float rounding at row boundaries
        off = i * (2 * n - i - 1) // 2
        i = np.where(off > k, i - 1, i)
        off_next = (i + 1) * (2 * n - i - 2) // 2
        i = np.where(off_next <= k, i + 1, i)
        i = np.clip(i, 0, n - 2)
    off = i * (2 * n - i - 1) // 2
    j = k - off + i + 1
    return i, j


def erdos_renyi_graph(n, p, seed=None):
    """G(n, p): every unordered pair becomes an edge with probability p.

    Uses geometric gap sampling, so the cost scales with the number of edges
    drawn rather than with n^2.

    Args:
        n: number of nodes (>= 0).
        p: edge probability in [0, 1].
        seed: RNG seed; drawn fresh when omitted.

    Returns:
        Undirected Graph on n nodes.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be between 0 and 1")
    npairs = n * (n - 1) // 2
    if p == 0.0 or npairs == 0:
        return Graph.from_edges(n, [], [])
    if p == 1.0:
        i, j = np.triu_indices(n, k=1)
        return Graph.from_edges(n, i.astype(np.int64), j.astype(np.int64))
    rng = np.random.default_rng(fresh_seed() if seed is None else seed)
    taken = []
    cursor = -1
    chunk = max(1024, int(npairs * p * 1.1))
    while cursor < npairs - 1:
        gaps = rng.geometric(p, size=chunk)
        pos = cursor + np.cumsum(gaps)
        taken.append(pos[pos < npairs])
        cursor = int(pos[-1])
    k = np.concatenate(taken) if taken else np.empty(0, dtype=np.int64)
    i, j = _pair_decode(n, k)
    return Graph.from_edges(n, i, j)


def _ba_fill(n, m, draws, src, dst, pool):
    # Preferential-attachment fill loop. The star seed occupies src/dst[:m]
    # and pool[:2m]; each later node picks m distinct targets from the pool
    # (entries repeat per degree, giving the preferential bias). Consumes
    # pre-drawn uniforms; returns -1 on success or the edge index reached
    # when draws ran out so the caller can extend the pool and rerun.
    plen = 2 * m
    e = m
    di = 0
    nd = draws.shape[0]
    for u in range(m + 1, n):
        got = 0
        while got < m:
            if di >= nd:
                return e
            t = pool[np.int64(draws[di] * plen)]
            di += 1
            dup = False
            for x in range(got):
                if dst[e + x] == t:
                    dup = True
                    break
            if not dup:
                src[e + got] = u
                dst[e + got] = t
                got += 1
        for x in range(m):
            pool[plen + 2 * x] = u
            pool[plen + 2 * x + 1] = dst[e + x]
        plen += 2 * m
        e += m
    return -1


def barabasi_albert_graph(n, m, seed=None):
    """Preferential attachment with a star seed on m+1 nodes.

    Node m+1..n-1 each attach m edges to distinct existing nodes chosen
    proportionally to degree (ties broken by the RNG draw order). Final edge
    count is exactly m * (n - m).

    Args:
        n: number of nodes; must exceed m.
        m: edges added per new node (>= 1).
        seed: RNG seed; drawn fresh when omitted.

    Returns:
        Undirected Graph on n nodes.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if n <= m:
        raise ValueError("n must exceed m")
    rng = np.random.default_rng(fresh_seed() if seed is None else seed)
    total = m * (n - m)
    src = np.empty(total, dtype=np.int64)
    dst = np.empty(total, dtype=np.int64)
    src[:m] = 0
    dst[:m] = np.arange(1, m + 1)
    pool = np.empty(2 * total, dtype=np.int64)
    pool[0:2 * m:2] = 0
    pool[1:2 * m:2] = np.arange(1, m + 1)
    draws = rng.random(m * max(n - m - 1, 0) + 256)
    fill = backend.jitted(_ba_fill)
    while fill(n, m, draws, src, dst, pool) != -1:
        # duplicates overflowed the pre-drawn uniforms; extend and rerun
        # (the prefix replays identically, extra draws continue the stream)
        draws = np.concatenate((draws, rng.random(draws.size)))
    return Graph.from_edges(n, src, dst)


def watts_strogatz_graph(n, k, beta, seed=None):
    """Ring lattice of degree k with probabilistic rewiring.

    Each ring edge (i, i+j) is rewired with probability beta to (i, w) for a
    uniformly drawn w that is neither i nor a current neighbor of i; the edge
    count n*k/2 is preserved exactly.

    Args:
        n: number of nodes.
        k: even ring degree, 0 <= k < n.
        beta: rewiring probability in [0, 1].
        seed: RNG seed; drawn fresh when omitted.

    Returns:
        Undirected Graph on n nodes.
    """
    if k % 2 != 0:
        raise ValueError("k must be even")
    if not 0 <= k < n:
        raise ValueError("k must satisfy 0 <= k < n")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must be between 0 and 1")
    rng = np.random.default_rng(fresh_seed() if seed is None else seed)
    adj = [set() for _ in range(n)]
    for j in range(1, k // 2 + 1):
        for i in range(n):
            w = (i + j) % n
            adj[i].add(w)
            adj[w].add(i)
    for j in range(1, k // 2 + 1):
        for i in range(n):
            if rng.random() >= beta:
                continue
            if len(adj[i]) >= n - 1:
                continue  # saturated node cannot be rewired
            old = (i + j) % n
            if old not in adj[i]:
                continue  # defensive: never remove an edge twice
            w = int(rng.random() * n)
            while w == i or w in adj[i]:
                w = int(rng.random() * n)
            adj[i].discard(old)
            adj[old].discard(i)
            adj[i].add(w)
            adj[w].add(i)
    us = []
    vs = []
    for i in range(n):
        for w in adj[i]:
            if i < w:
                us.append(i)
                vs.append(w)
    return Graph.from_edges(n, np.array(us, dtype=np.int64),
                            np.array(vs, dtype=np.int64))


GENERATORS = {
    "erdos_renyi": erdos_renyi_graph,
    "barabasi_albert": barabasi_albert_graph,
    "watts_strogatz": watts_strogatz_graph,
}


def generate(name, **params):
    """Dispatch a generator by registry name (CLI and server entry point)."""
    try:
        fn = GENERATORS[name]
    except KeyError:
        raise ValueError(
            f"unknown generator {name!r}; expected one of {sorted(GENERATORS)}"
        ) from None
    return fn(**params)
