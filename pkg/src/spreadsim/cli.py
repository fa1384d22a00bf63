"""Command-line front-end.

Three subcommands: ``run`` executes a JSON experiment document and writes
trajectory/series artifacts, ``bench`` times the SIR reference workload on
growing preferential-attachment graphs for both backends, and ``serve``
starts the HTTP experiment service.

Exit codes for ``run``: 0 success, 2 configuration error, 3 IO error,
4 simulation error.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time

from . import analytics, backend
from .dyngraph import TemporalGraph
from .engine import ConfigError, ModelConfig, SimulationError, multi_runs
from .graph import GENERATORS, barabasi_albert_graph, generate, load_edge_list
from .models import REGISTRY, create

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_SIMULATION = 4


class _SpecError(Exception):
    pass


def _network_from_spec(spec):
    if not isinstance(spec, dict):
        raise _SpecError("network must be an object")
    forms = [k for k in ("generator", "path", "interactions") if k in spec]
    if len(forms) != 1:
        raise _SpecError(
            "network needs exactly one of generator, path, interactions")
    if "generator" in spec:
        gen = spec["generator"]
        name = gen.get("name")
        if name not in GENERATORS:
            raise _SpecError(f"unknown generator {name!r};"
                             f" expected one of {sorted(GENERATORS)}")
        try:
            return generate(name, **gen.get("params", {}))
        except (TypeError, ValueError) as exc:
            raise _SpecError(f"generator {name}: {exc}")
    if "path" in spec:
        try:
            with open(spec["path"], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise OSError(f"cannot read network file: {exc}")
        try:
            return load_edge_list(text, directed=bool(spec.get("directed",
                                                               False)))
        except ValueError as exc:
            raise _SpecError(f"malformed edge list: {exc}")
    tg = TemporalGraph(directed=bool(spec.get("directed", False)))
    try:
        for row in spec["interactions"]:
            if len(row) == 3:
                tg.add_interaction(int(row[0]), int(row[1]), int(row[2]))
            elif len(row) == 4:
                tg.add_interaction(int(row[0]), int(row[1]),
                                   int(row[2]), int(row[3]))
            else:
                raise _SpecError(
                    "interaction rows are [u, v, t] or [u, v, t0, t1]")
    except (TypeError, ValueError) as exc:
        raise _SpecError(f"malformed interactions: {exc}")
    if not tg.pair_count:
        raise _SpecError("interactions list is empty")
    return tg.freeze()


def _model_slugs(entries):
    names = [e.get("name", "") for e in entries]
    slugs = []
    for i, name in enumerate(names):
        slugs.append(name if names.count(name) == 1 else f"{name}{i}")
    return slugs


_FORMATS = ("trajectory", "trend", "prevalence", "svg")


def run_spec(doc, output_dir=None, jobs=None):
    """Execute one experiment document. Returns written file paths."""
    if not isinstance(doc, dict):
        raise _SpecError("spec must be a JSON object")
    unknown = set(doc) - {"network", "models", "execution", "output"}
    if unknown:
        raise _SpecError(f"unknown spec fields: {sorted(unknown)}")
    if "network" not in doc or "models" not in doc:
        raise _SpecError("spec needs network and models")
    entries = doc["models"]
    if not isinstance(entries, list) or not entries:
        raise _SpecError("models must be a non-empty list")
    execution = doc.get("execution", {})
    iterations = execution.get("iterations", 25)
    if not isinstance(iterations, int) or iterations < 0:
        raise _SpecError("execution.iterations must be a non-negative int")
    runs = execution.get("runs", 1)
    if not isinstance(runs, int) or runs < 1:
        raise _SpecError("execution.runs must be a positive int")
    base_seed = execution.get("seed")
    jobs = jobs if jobs is not None else execution.get("jobs")

    output = doc.get("output", {})
    out_dir = output_dir or output.get("directory", ".")
    formats = output.get("formats", ["trajectory", "trend"])
    bad = set(formats) - set(_FORMATS)
    if bad:
        raise _SpecError(f"unknown output formats: {sorted(bad)};"
                         f" expected subset of {list(_FORMATS)}")

    net = _network_from_spec(doc["network"])
    prepared = []
    for entry in entries:
        name = entry.get("name")
        if name not in REGISTRY:
            raise _SpecError(f"unknown model {name!r};"
                             f" expected one of {sorted(REGISTRY)}")
        cfg = ModelConfig.from_dict(entry.get("config", {}))
        prepared.append((name, cfg))

    os.makedirs(out_dir, exist_ok=True)
    written = []

    def _emit(path, text):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        written.append(path)

    for (name, cfg), slug in zip(prepared, _model_slugs(entries)):
        model = create(name, net)
        if runs == 1:
            trajectories = [model.simulate(iterations, config=cfg,
                                           seed=base_seed)]
        else:
            trajectories = multi_runs(model, cfg, executions=runs,
                                      iterations=iterations, seed=base_seed,
                                      jobs=jobs)
        if "trajectory" in formats:
            for r, traj in enumerate(trajectories):
                _emit(os.path.join(out_dir, f"{slug}-{r}.trajectory.json"),
                      traj.to_json())
        first = analytics.trend(trajectories[0])
        if "trend" in formats:
            _emit(os.path.join(out_dir, f"{slug}.trend.csv"),
                  analytics.export(first, "csv"))
        if "prevalence" in formats:
            _emit(os.path.join(out_dir, f"{slug}.prevalence.csv"),
                  analytics.export(analytics.prevalence(trajectories[0]),
                                   "csv"))
        if "svg" in formats:
            _emit(os.path.join(out_dir, f"{slug}.trend.svg"),
                  analytics.export(first, "svg"))
        if runs > 1:
            band = analytics.aggregate_runs(trajectories)
            _emit(os.path.join(out_dir, f"{slug}.band.json"),
                  analytics.export(band, "json"))
            _emit(os.path.join(out_dir, f"{slug}.band.csv"),
                  analytics.export(band, "csv"))
    return written


BENCH_PARAMS = {"beta": 0.001, "gamma": 0.01, "percentage_infected": 0.05}
BENCH_ITERATIONS = 25


def run_bench(sizes, seed=42, reps=5):
    """Median SIR runtimes per backend and graph size.

    Graph construction is excluded from the timing; for the jitted backend
    the kernels are compiled on a small warm-up graph first, so measured
    times cover simulation work only.

    Returns:
        {backend name: {size: median seconds over reps}}.
    """
    previous = backend.active_name()
    results = {}
    try:
        for backend_name in ("numba", "numpy"):
            backend.set_backend(backend_name)
            warm = barabasi_albert_graph(200, 3, seed)
            create("SIR", warm).simulate(
                2, config=ModelConfig(params=dict(BENCH_PARAMS), seed=seed))
            timings = {}
            for n in sizes:
                g = barabasi_albert_graph(n, 3, seed)
                cfg = ModelConfig(params=dict(BENCH_PARAMS), seed=seed)
                samples = []
                for _ in range(reps):
                    model = create("SIR", g)
                    t0 = time.perf_counter()
                    model.simulate(BENCH_ITERATIONS, config=cfg)
                    samples.append(time.perf_counter() - t0)
                timings[n] = statistics.median(samples)
            results[backend_name] = timings
    finally:
        backend.set_backend(previous)
    return results


def _print_bench(results, sizes, out=None):
    out = out if out is not None else sys.stdout
    head = ["backend"] + [str(n) for n in sizes]
    rows = [[name] + [f"{results[name][n]:.4f}" for n in sizes]
            for name in results]
    widths = [max(len(r[i]) for r in [head] + rows)
              for i in range(len(head))]
    for row in [head] + rows:
        out.write("  ".join(c.rjust(w) for c, w in zip(row, widths)) + "\n")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="spreadsim",
        description="diffusion simulations over networks: batch runs,"
                    " benchmarks, and the HTTP experiment service")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a JSON experiment document")
    p_run.add_argument("spec", help="path to the experiment JSON document")
    p_run.add_argument("--output", help="artifact directory (overrides the"
                                        " document)")
    p_run.add_argument("--jobs", type=int,
                       help="parallel runs bound (overrides the document)")

    p_bench = sub.add_parser("bench", help="time the SIR reference workload")
    p_bench.add_argument("--sizes", default="1000,10000",
                         help="comma-separated node counts")
    p_bench.add_argument("--seed", type=int, default=42)
    p_bench.add_argument("--reps", type=int, default=5)

    p_serve = sub.add_parser("serve", help="start the experiment service")
    p_serve.add_argument("--listen", default="127.0.0.1:8801",
                         help="host:port to bind")
    p_serve.add_argument("--ttl", type=float, default=3600.0,
                         help="idle seconds before tokens expire")
    p_serve.add_argument("--exploratories", help="directory of extra"
                                                 " scenario JSON files")
    p_serve.add_argument("--snapshots", help="directory for write-through"
                                             " trajectory snapshots")

    args = parser.parse_args(argv)

    if args.command == "run":
        try:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            print(f"error: spec is not valid JSON: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        try:
            written = run_spec(doc, output_dir=args.output, jobs=args.jobs)
        except (_SpecError, ConfigError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        except (SimulationError, NotImplementedError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SIMULATION
        for path in written:
            print(path)
        return 0

    if args.command == "bench":
        try:
            sizes = [int(tok) for tok in args.sizes.split(",") if tok]
        except ValueError:
            print("error: --sizes needs comma-separated integers",
                  file=sys.stderr)
            return EXIT_CONFIG
        if not sizes:
            print("error: --sizes is empty", file=sys.stderr)
            return EXIT_CONFIG
        results = run_bench(sizes, seed=args.seed, reps=args.reps)
        _print_bench(results, sizes)
        return 0

    from .server import main as serve_main
    serve_main(listen=args.listen, ttl=args.ttl,
               exploratory_dir=args.exploratories,
               snapshot_dir=args.snapshots)
    return 0


if __name__ == "__main__":
    sys.exit(main())
