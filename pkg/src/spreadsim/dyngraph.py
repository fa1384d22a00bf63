"""Time-varying networks: interval-compressed temporal graphs and snapshot
sequences.

A temporal graph stores, per node pair, the maximal half-open integer
intervals [t_start, t_end) during which the pair interacts; a point
interaction at t is [t, t+1), and touching or overlapping intervals merge.
A snapshot sequence is the discretized view: an ordered list of
(snapshot id, static Graph) over one shared node universe.
"""

from __future__ import annotations

import bisect
import hashlib

import numpy as np

from .graph import Graph, GraphFormatError


class TemporalGraph:
    """Mutable until frozen; simulation consumers require a frozen instance."""

    def __init__(self, directed=False):
        self.directed = bool(directed)
        self._pairs = {}  # canonical (u, v) -> sorted disjoint [ts, te) list
        self._timestamps = set()
        self._max_node = -1
        self.labels = None
        self.frozen = False
        self._slice_cache = {}

    def _key(self, u, v):
        if self.directed or u <= v:
            return (u, v)
        return (v, u)

    @property
    def node_count(self):
        return self._max_node + 1

    @property
    def pair_count(self):
        return len(self._pairs)

    def add_interaction(self, u, v, t_start, t_end=None):
        """Record that (u, v) interact over [t_start, t_end).

        Omitting t_end records the point interaction [t_start, t_start+1).
        Adjacent and overlapping intervals are merged into maximal ones.
        """
        if self.frozen:
            raise RuntimeError("temporal graph is frozen")
        u = int(u)
        v = int(v)
        if u < 0 or v < 0:
            raise ValueError("node ids must be non-negative")
        if u == v:
            raise ValueError("self-interactions are not supported")
        ts = int(t_start)
        te = ts + 1 if t_end is None else int(t_end)
        if te <= ts:
            raise ValueError(f"empty interval [{ts}, {te})")
        self._max_node = max(self._max_node, u, v)
        ivals = self._pairs.setdefault(self._key(u, v), [])
        i = bisect.bisect_left(ivals, (ts, te))
        ivals.insert(i, (ts, te))
        # merge with neighbors while they touch or overlap
        j = max(i - 1, 0)
        while j < len(ivals) - 1:
            a_s, a_e = ivals[j]
            b_s, b_e = ivals[j + 1]
            if b_s <= a_e:
                ivals[j] = (a_s, max(a_e, b_e))
                del ivals[j + 1]
            else:
                j += 1
        self._timestamps.update(range(ts, te))

    def freeze(self):
        """Make immutable; returns self for chaining."""
        self.frozen = True
        return self

    def intervals(self, u, v):
        """The merged presence intervals of a pair (copy)."""
        return list(self._pairs.get(self._key(int(u), int(v)), ()))

    def timestamps(self):
        """Ordered domain of instants at which any interaction is present."""
        return sorted(self._timestamps)

    def present_at(self, u, v, t):
        ivals = self._pairs.get(self._key(int(u), int(v)))
        if not ivals:
            return False
        i = bisect.bisect_right(ivals, (t, float("inf"))) - 1
        return i >= 0 and ivals[i][0] <= t < ivals[i][1]

    def slice(self, t):
        """Static Graph of the interactions alive at instant t.

        The returned graph always spans the full node universe, so status
        arrays carried across steps stay aligned.
        """
        t = int(t)
        if self.frozen and t in self._slice_cache:
            return self._slice_cache[t]
        us = []
        vs = []
        for (u, v), ivals in self._pairs.items():
            i = bisect.bisect_right(ivals, (t, float("inf"))) - 1
            if i >= 0 and ivals[i][0] <= t < ivals[i][1]:
                us.append(u)
                vs.append(v)
        g = Graph.from_edges(self.node_count, np.array(us, dtype=np.int64),
                             np.array(vs, dtype=np.int64),
                             directed=self.directed, labels=self.labels)
        if self.frozen:
            self._slice_cache[t] = g
        return g

    def flatten(self, t_start=None, t_end=None):
        """Union of all interactions intersecting the window [t_start, t_end).

        Omitted bounds extend to the full observed domain.
        """
        if t_start is not None and t_end is not None and t_start > t_end:
            raise ValueError("t_start must not exceed t_end")
        us = []
        vs = []
        for (u, v), ivals in self._pairs.items():
            for ts, te in ivals:
                if (t_start is None or te > t_start) and \
                        (t_end is None or ts < t_end):
                    us.append(u)
                    vs.append(v)
                    break
        return Graph.from_edges(self.node_count, np.array(us, dtype=np.int64),
                                np.array(vs, dtype=np.int64),
                                directed=self.directed, labels=self.labels)

    def snapshots_of(self):
        """One snapshot per distinct observed timestamp, in order."""
        items = [(t, self.slice(t)) for t in self.timestamps()]
        return SnapshotSequence(items, labels=self.labels,
                                node_count=self.node_count,
                                directed=self.directed)

    @property
    def digest(self):
        """Stable hex digest of the interaction structure."""
        h = hashlib.sha256()
        h.update(b"temporal-directed" if self.directed else b"temporal")
        h.update(int(self.node_count).to_bytes(8, "little"))
        for (u, v), ivals in sorted(self._pairs.items()):
            h.update(int(u).to_bytes(8, "little"))
            h.update(int(v).to_bytes(8, "little"))
            for ts, te in ivals:
                h.update(int(ts).to_bytes(8, "little", signed=True))
                h.update(int(te).to_bytes(8, "little", signed=True))
        return h.hexdigest()


class SnapshotSequence:
    """Ordered (snapshot id, Graph) pairs over one node universe."""

    def __init__(self, items, labels=None, node_count=None, directed=None):
        items = list(items)
        if not items and node_count is None:
            node_count = 0
        ids = [int(sid) for sid, _ in items]
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise ValueError("snapshot ids must be strictly increasing")
        counts = {g.node_count for _, g in items}
        if node_count is None:
            if len(counts) != 1:
                raise ValueError("snapshots must share one node universe")
            node_count = counts.pop()
        elif counts - {node_count}:
            raise ValueError("snapshots must share one node universe")
        dirs = {g.directed for _, g in items}
        if directed is None:
            directed = dirs.pop() if dirs else False
        self.items = [(sid, g) for sid, g in zip(ids, (g for _, g in items))]
        self.node_count = int(node_count)
        self.directed = bool(directed)
        self.labels = labels

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    @property
    def ids(self):
        return [sid for sid, _ in self.items]

    @property
    def graphs(self):
        return [g for _, g in self.items]

    @property
    def digest(self):
        """Stable hex digest: snapshot ids plus per-graph digests."""
        h = hashlib.sha256()
        h.update(b"snapshots")
        for sid, g in self.items:
            h.update(int(sid).to_bytes(8, "little", signed=True))
            h.update(bytes.fromhex(g.digest))
        return h.hexdigest()


def _parse_int(tok, ln, what):
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"line {ln}: {what} must be an integer, "
                               f"got {tok!r}") from None


def load_temporal_edge_list(text, directed=False):
    """Parse interaction records: "u v t" or "u v t_start t_end" per line.

    '#' lines and blanks are skipped, tokens beyond the fourth are ignored,
    node ids are assigned densely in first-seen order.
    """
    ids = {}

    def intern(tok):
        i = ids.get(tok)
        if i is None:
            i = len(ids)
            ids[tok] = i
        return i

    tg = TemporalGraph(directed=directed)
    records = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 3:
            raise GraphFormatError(
                f"line {ln}: expected 'u v t' or 'u v t_start t_end', "
                f"got {len(parts)} token(s)")
        u = intern(parts[0])
        v = intern(parts[1])
        ts = _parse_int(parts[2], ln, "timestamp")
        te = None
        if len(parts) >= 4:
            te = _parse_int(parts[3], ln, "interval end")
            if te <= ts:
                raise GraphFormatError(
                    f"line {ln}: interval end {te} must exceed start {ts}")
        records.append((u, v, ts, te, ln))
    for u, v, ts, te, ln in records:
        if u == v:
            raise GraphFormatError(f"line {ln}: self-interaction not allowed")
        tg.add_interaction(u, v, ts, te)
    tg.labels = list(ids.keys())
    tg._max_node = max(tg._max_node, len(ids) - 1)
    return tg


def load_snapshot_text(text, directed=False):
    """Parse a sectioned snapshot document.

    Sections open with "# snapshot <k>" (k strictly increasing) and contain
    static edge lines; other '#' lines are comments. The label map spans the
    whole document, so every snapshot shares the node universe.
    """
    ids = {}

    def intern(tok):
        i = ids.get(tok)
        if i is None:
            i = len(ids)
            ids[tok] = i
        return i

    sections = []  # (sid, [(u, v)])
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "snapshot":
                if len(parts) < 2:
                    raise GraphFormatError(
                        f"line {ln}: snapshot header needs an id")
                sid = _parse_int(parts[1], ln, "snapshot id")
                if sections and sid <= sections[-1][0]:
                    raise GraphFormatError(
                        f"line {ln}: snapshot id {sid} not increasing")
                sections.append((sid, []))
            continue
        if not sections:
            raise GraphFormatError(
                f"line {ln}: edge before any '# snapshot <k>' header")
        parts = line.split()
        if len(parts) < 2:
            raise GraphFormatError(
                f"line {ln}: expected at least two tokens, got {len(parts)}")
        sections[-1][1].append((intern(parts[0]), intern(parts[1])))
    labels = list(ids.keys())
    n = len(ids)
    items = []
    for sid, pairs in sections:
        us = np.array([p[0] for p in pairs], dtype=np.int64)
        vs = np.array([p[1] for p in pairs], dtype=np.int64)
        items.append((sid, Graph.from_edges(n, us, vs, directed=directed,
                                            labels=labels)))
    return SnapshotSequence(items, labels=labels, node_count=n,
                            directed=directed)
