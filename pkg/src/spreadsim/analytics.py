"""Trajectory post-processing: trend and prevalence series, cross-run
percentile bands, cross-series comparison, and csv/json/svg export.

The diffusion trend is the per-status node count over iterations; the
diffusion prevalence is its first difference (per-status signed change),
starting at iteration 1. Multi-run aggregation reduces many trajectories to
a median central line with nearest-rank percentile envelopes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Series:
    """Per-status (iteration, value) lists of one trajectory."""

    kind: str  # "trend" | "prevalence"
    label: str
    points: dict  # status name -> list of (iteration, value)

    def statuses(self):
        return list(self.points)

    def to_dict(self):
        return {"kind": self.kind, "label": self.label,
                "points": {s: [[i, v] for i, v in pts]
                           for s, pts in self.points.items()}}

    @classmethod
    def from_dict(cls, doc):
        return cls(kind=doc["kind"], label=doc["label"],
                   points={s: [(int(i), int(v)) for i, v in pts]
                           for s, pts in doc["points"].items()})


@dataclass
class BandedSeries:
    """Median line plus lower/upper nearest-rank percentile envelopes."""

    kind: str
    label: str
    lower_pct: float
    upper_pct: float
    central: str  # aggregation of the central line, recorded for readers
    points: dict  # status name -> {"median"|"lower"|"upper": [(it, value)]}

    def to_dict(self):
        return {"kind": self.kind, "label": self.label,
                "lower_pct": self.lower_pct, "upper_pct": self.upper_pct,
                "central": self.central,
                "points": {s: {k: [[i, v] for i, v in pts]
                               for k, pts in bands.items()}
                           for s, bands in self.points.items()}}


@dataclass
class Comparison:
    """Aligned columns pulled from several series for one plot."""

    kind: str
    columns: list = field(default_factory=list)  # (label, status, points)

    def to_dict(self):
        return {"kind": self.kind,
                "columns": [{"label": lab, "status": s,
                             "points": [[i, v] for i, v in pts]}
                            for lab, s, pts in self.columns]}


def _status_names(trajectory):
    names = trajectory.statuses
    if names:
        return names
    codes = sorted(int(c) for c in trajectory.deltas[0].node_count)
    return {c: str(c) for c in codes}


def trend(trajectory):
    """Per-status node-count series of one trajectory.

    Args:
        trajectory: engine Trajectory (non-empty).

    Returns:
        Series with kind "trend", one point list per status name.
    """
    if not trajectory.deltas:
        raise ValueError("empty trajectory")
    names = _status_names(trajectory)
    points = {name: [] for _, name in sorted(names.items())}
    for d in trajectory.deltas:
        for code, name in names.items():
            points[name].append((d.iteration, int(d.node_count.get(code, 0))))
    return Series("trend", trajectory.meta.get("model", ""), points)


def prevalence(trajectory):
    """Per-status signed count changes, starting at iteration 1."""
    if not trajectory.deltas:
        raise ValueError("empty trajectory")
    names = _status_names(trajectory)
    points = {name: [] for _, name in sorted(names.items())}
    for d in trajectory.deltas:
        if d.iteration == 0:
            continue
        for code, name in names.items():
            points[name].append(
                (d.iteration, int(d.status_delta.get(code, 0))))
    return Series("prevalence", trajectory.meta.get("model", ""), points)


def compare(series, statuses=None):
    """Columns of several series side by side, optionally status-filtered.

    Args:
        series: list of Series sharing one kind.
        statuses: optional status-name filter (keeps listed names only).

    Returns:
        Comparison in input order; a single unfiltered series passes
        through with all its statuses.
    """
    if not series:
        raise ValueError("nothing to compare")
    kinds = {s.kind for s in series}
    if len(kinds) != 1:
        raise ValueError(f"cannot mix series kinds {sorted(kinds)}")
    keep = None if statuses is None else set(statuses)
    cmp = Comparison(kinds.pop())
    for s in series:
        for name, pts in s.points.items():
            if keep is None or name in keep:
                cmp.columns.append((s.label, name, list(pts)))
    return cmp


def _nearest_rank(sorted_values, pct):
    # ceil(p/100 * m) with 1-based rank; pct 0 keeps the minimum
    m = sorted_values.shape[0]
    rank = max(1, int(math.ceil(pct / 100.0 * m)))
    return sorted_values[min(rank, m) - 1]


def aggregate_runs(trajectories, lower_pct=25, upper_pct=75):
    """Pointwise percentile bands over repeated runs.

    The central line is the median (nearest-rank, like the envelopes), which
    the output records in ``central``.

    Args:
        trajectories: >= 1 runs of equal length and status vocabulary.
        lower_pct, upper_pct: envelope percentiles, 0 <= lower < upper <= 100.

    Returns:
        BandedSeries over trend values.
    """
    if not trajectories:
        raise ValueError("no runs to aggregate")
    if not 0 <= lower_pct < upper_pct <= 100:
        raise ValueError("need 0 <= lower_pct < upper_pct <= 100")
    lengths = {len(t.deltas) for t in trajectories}
    if len(lengths) != 1:
        raise ValueError("runs have differing lengths")
    names = _status_names(trajectories[0])
    iters = [d.iteration for d in trajectories[0].deltas]
    points = {}
    for code, name in sorted(names.items()):
        table = np.array([[int(d.node_count.get(code, 0)) for d in t.deltas]
                          for t in trajectories], dtype=np.int64)
        table.sort(axis=0)
        med = [int(_nearest_rank(table[:, j], 50)) for j in range(table.shape[1])]
        low = [int(_nearest_rank(table[:, j], lower_pct))
               for j in range(table.shape[1])]
        high = [int(_nearest_rank(table[:, j], upper_pct))
                for j in range(table.shape[1])]
        points[name] = {
            "median": list(zip(iters, med)),
            "lower": list(zip(iters, low)),
            "upper": list(zip(iters, high)),
        }
    label = trajectories[0].meta.get("model", "")
    return BandedSeries("trend", label, float(lower_pct), float(upper_pct),
                        "median", points)


# -- export -----------------------------------------------------------------


def _csv_escape(name):
    if any(c in name for c in ",\"\n"):
        return '"' + name.replace('"', '""') + '"'
    return name


def _series_rows(series):
    names = series.statuses()
    by_iter = {}
    for name in names:
        for it, v in series.points[name]:
            by_iter.setdefault(it, {})[name] = v
    return names, sorted(by_iter.items())


def _to_csv(series):
    if isinstance(series, Series):
        names, rows = _series_rows(series)
        out = ["iteration," + ",".join(_csv_escape(n) for n in names)]
        for it, vals in rows:
            out.append(",".join([str(it)] + [str(vals.get(n, ""))
                                             for n in names]))
        return "\n".join(out) + "\n"
    if isinstance(series, BandedSeries):
        cols = [(n, band) for n in series.points
                for band in ("median", "lower", "upper")]
        out = ["iteration," + ",".join(
            _csv_escape(f"{n}:{band}") for n, band in cols)]
        if series.points:
            first = next(iter(series.points.values()))["median"]
            for j, (it, _) in enumerate(first):
                row = [str(it)]
                for n, band in cols:
                    row.append(str(series.points[n][band][j][1]))
                out.append(",".join(row))
        return "\n".join(out) + "\n"
    if isinstance(series, Comparison):
        out = ["iteration," + ",".join(
            _csv_escape(f"{lab}/{st}") for lab, st, _ in series.columns)]
        if series.columns:
            by_iter = {}
            for ci, (_, _, pts) in enumerate(series.columns):
                for it, v in pts:
                    by_iter.setdefault(it, {})[ci] = v
            for it, vals in sorted(by_iter.items()):
                out.append(",".join(
                    [str(it)] + [str(vals.get(ci, ""))
                                 for ci in range(len(series.columns))]))
        return "\n".join(out) + "\n"
    raise ValueError(f"cannot export {type(series).__name__} as csv")


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#7f7f7f")


def _svg_plot(named_lines, title):
    """Minimal static line plot: one polyline per named line."""
    width, height = 640, 400
    ml, mr, mt, mb = 48, 16, 28, 32
    xs = [p[0] for _, pts in named_lines for p in pts]
    ys = [p[1] for _, pts in named_lines for p in pts]
    x0, x1 = (min(xs), max(xs)) if xs else (0, 1)
    y0, y1 = (min(ys + [0]), max(ys)) if ys else (0, 1)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    sx = (width - ml - mr) / (x1 - x0)
    sy = (height - mt - mb) / (y1 - y0)

    def px(x):
        return ml + (x - x0) * sx

    def py(y):
        return height - mb - (y - y0) * sy

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1"'
        f' width="{width}" height="{height}"'
        f' viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{ml}" y="18" font-size="13" font-family="sans-serif">'
        f'{title}</text>',
        f'<line x1="{ml}" y1="{py(y0):.1f}" x2="{width - mr}"'
        f' y2="{py(y0):.1f}" stroke="#333" stroke-width="1"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}"'
        f' stroke="#333" stroke-width="1"/>',
        f'<text x="{ml - 4}" y="{py(y1) + 4:.1f}" font-size="10"'
        f' text-anchor="end" font-family="sans-serif">{y1}</text>',
        f'<text x="{ml - 4}" y="{py(y0) + 4:.1f}" font-size="10"'
        f' text-anchor="end" font-family="sans-serif">{y0}</text>',
        f'<text x="{px(x1):.1f}" y="{height - 8}" font-size="10"'
        f' text-anchor="end" font-family="sans-serif">{x1}</text>',
    ]
    for i, (name, pts) in enumerate(named_lines):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in pts)
        parts.append(f'<polyline fill="none" stroke="{color}"'
                     f' stroke-width="1.5" points="{coords}"/>')
        parts.append(f'<text x="{width - mr - 100}" y="{mt + 14 * (i + 1)}"'
                     f' font-size="11" fill="{color}"'
                     f' font-family="sans-serif">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _to_svg(series):
    if isinstance(series, Series):
        lines = [(n, series.points[n]) for n in series.statuses()]
        return _svg_plot(lines, f"{series.label} {series.kind}".strip())
    if isinstance(series, BandedSeries):
        lines = []
        for n, bands in series.points.items():
            lines.append((n, bands["median"]))
        return _svg_plot(lines, f"{series.label} median".strip())
    if isinstance(series, Comparison):
        lines = [(f"{lab}/{st}", pts) for lab, st, pts in series.columns]
        return _svg_plot(lines, f"comparison ({series.kind})")
    raise ValueError(f"cannot export {type(series).__name__} as svg")


def export(series, format):
    """Serialize a Series, BandedSeries or Comparison.

    Args:
        series: the object to serialize.
        format: "csv", "json" or "svg".

    Returns:
        The document as a string.
    """
    if format == "csv":
        return _to_csv(series)
    if format == "json":
        return json.dumps(series.to_dict(), indent=2) + "\n"
    if format == "svg":
        return _to_svg(series)
    raise ValueError(f"unknown export format {format!r};"
                     " expected csv, json or svg")
