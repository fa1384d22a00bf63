"""Discrete-time diffusion simulation over static and time-varying networks.

A deterministic agent-based engine: epidemic compartmental models, threshold
and cascade adoption, spin opinion dynamics, and their dynamic-topology
variants, with incremental per-iteration deltas, seeded reproducibility,
post-processing into trend/prevalence series, a batch CLI and a stateful
REST experiment server. Hot kernels are compiled with numba when available;
a vectorized numpy fallback (env SPREADSIM_BACKEND=numpy) produces identical
trajectories.

Typical use:

    import spreadsim as ss

    g = ss.erdos_renyi_graph(1000, 0.1, seed=7)
    model = ss.create("SIR", g)
    cfg = ss.ModelConfig(
        params={"beta": 0.001, "gamma": 0.01, "percentage_infected": 0.05},
        seed=42)
    model.set_initial_status(cfg)
    deltas = model.iteration_bunch(200)
"""

from __future__ import annotations

from . import analytics, backend
from .dyngraph import (SnapshotSequence, TemporalGraph,
                       load_snapshot_text, load_temporal_edge_list)
from .engine import (ConfigError, DiffusionModel, IterationDelta,
                     ModelConfig, ParamSpec, SimulationError, Trajectory,
                     multi_runs)
from .graph import (GENERATORS, Graph, GraphFormatError,
                    barabasi_albert_graph, erdos_renyi_graph, generate,
                    load_edge_list, watts_strogatz_graph)
from .models import REGISTRY, CognitiveState, catalogue, create

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphFormatError", "load_edge_list", "generate", "GENERATORS",
    "erdos_renyi_graph", "barabasi_albert_graph", "watts_strogatz_graph",
    "TemporalGraph", "SnapshotSequence", "load_temporal_edge_list",
    "load_snapshot_text",
    "ModelConfig", "ParamSpec", "IterationDelta", "Trajectory",
    "DiffusionModel", "multi_runs", "ConfigError", "SimulationError",
    "REGISTRY", "create", "catalogue", "CognitiveState",
    "analytics", "backend",
    "__version__",
]
