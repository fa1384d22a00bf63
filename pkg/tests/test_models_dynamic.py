"""Models over temporal graphs and snapshot sequences: timeline indexing,
per-instant recovery, mode selection, and coupling with static runs."""

import numpy as np
import pytest

from spreadsim.dyngraph import TemporalGraph
from spreadsim.engine import ConfigError, ModelConfig, SimulationError
from spreadsim.graph import erdos_renyi_graph
from spreadsim.models import create


def _cfg(planted=None, seed=7, execution_mode=None, **params):
    return ModelConfig(params=params, planted=planted, seed=seed,
                       execution_mode=execution_mode)


def _constant_temporal(graph, horizon):
    tg = TemporalGraph()
    for u, v in graph.edges():
        tg.add_interaction(u, v, 0, horizon)
    return tg.freeze()


def test_requires_frozen_temporal_graph():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 0)
    with pytest.raises(ConfigError):
        create("DynSI", tg)
    create("DynSI", tg.freeze())


def test_static_graph_rejected_for_dynamic_model():
    g = erdos_renyi_graph(10, 0.3, seed=1)
    with pytest.raises(ConfigError):
        create("DynSI", g)


def test_dynamic_rejected_for_static_model():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 0)
    with pytest.raises(ConfigError):
        create("SI", tg.freeze())


def test_edge_alive_only_at_t5_infects_exactly_then():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 5)  # the only path to node 1
    for t in range(9):
        tg.add_interaction(7, 8, t)  # inert filler keeps the clock ticking
    tg.freeze()
    assert tg.timestamps() == list(range(9))
    model = create("DynSI", tg)
    traj = model.simulate(8, config=_cfg(beta=1.0, planted={0: "Infected"}))
    flips = {d.iteration: d.changed for d in traj.deltas if d.iteration}
    assert flips[5] == {1: 1}
    assert all(not ch for it, ch in flips.items() if it != 5)


def test_slot_zero_edges_never_simulated():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 0)  # alive only in the initial epoch
    tg.add_interaction(7, 8, 0, 4)
    tg.freeze()
    model = create("DynSI", tg)
    traj = model.simulate(3, config=_cfg(beta=1.0, planted={0: "Infected"}))
    final = traj.replay()
    assert final[1] == 0


def test_iteration_past_timeline_raises():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 0, 3)  # timeline 0,1,2
    tg.freeze()
    model = create("DynSI", tg)
    model.set_initial_status(_cfg(beta=0.5, planted={0: "Infected"}))
    model.iteration_bunch(3)  # dump + instants 1, 2
    with pytest.raises(SimulationError):
        model.iteration()


def test_recovery_fires_every_instant():
    # no edges touch node 0 after the initial epoch; gamma=1 must still
    # retire it at the first simulated instant
    tg = TemporalGraph()
    tg.add_interaction(5, 6, 0, 4)
    tg.add_interaction(0, 1, 0)
    tg.freeze()
    model = create("DynSIR", tg)
    model.set_initial_status(_cfg(beta=0.0, gamma=1.0,
                                  planted={0: "Infected"}))
    model.iteration()
    d = model.iteration()
    assert d.changed == {0: 2}
    assert d.iteration == 1


def test_meta_records_mode_and_timeline():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 0, 3)
    tg.freeze()
    model = create("DynSI", tg)
    traj = model.simulate(2, config=_cfg(beta=0.5, planted={0: "Infected"}))
    assert traj.meta["execution_mode"] == "interactions"
    assert traj.meta["timeline"] == [0, 1, 2]
    assert "graph_digest" in traj.meta


def test_snapshot_mode_on_snapshot_sequence():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 0, 3)
    tg.add_interaction(1, 2, 1, 3)
    seq = tg.freeze().snapshots_of()
    model = create("DynSI", seq)
    traj = model.simulate(2, config=_cfg(beta=1.0, planted={0: "Infected"}))
    assert traj.meta["execution_mode"] == "snapshots"
    assert traj.replay().tolist() == [1, 1, 1]


def test_mode_mismatch_rejected():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 0, 3)
    tg.freeze()
    model = create("DynSI", tg)
    with pytest.raises(ConfigError):
        model.set_initial_status(_cfg(beta=0.5, planted={0: "Infected"},
                                      execution_mode="snapshots"))
    seq = tg.snapshots_of()
    model2 = create("DynSI", seq)
    with pytest.raises(ConfigError):
        model2.set_initial_status(_cfg(beta=0.5, planted={0: "Infected"},
                                       execution_mode="interactions"))


def test_constant_graph_snapshot_equals_interaction_mode():
    g = erdos_renyi_graph(40, 0.1, seed=5)
    tg = _constant_temporal(g, 12)
    cfg = _cfg(beta=0.3, planted={0: "Infected"}, seed=9)
    a = create("DynSI", tg).simulate(11, config=cfg)
    b = create("DynSI", tg.snapshots_of()).simulate(11, config=cfg)
    assert [d.to_dict() for d in a.deltas] == [d.to_dict() for d in b.deltas]


def test_temporal_infections_subset_of_flattened_static():
    # same seed couples the contact draws edge-wise: anything the sparse
    # timeline infects, the full graph must infect no later
    rng = np.random.default_rng(3)
    tg = TemporalGraph()
    for t in range(10):
        for _ in range(15):
            u, v = rng.choice(30, size=2, replace=False)
            tg.add_interaction(int(u), int(v), t)
    tg.freeze()
    flat = tg.flatten()
    cfg = _cfg(beta=0.4, planted={0: "Infected"}, seed=77)
    dyn = create("DynSI", tg).simulate(9, config=cfg)
    static = create("SI", flat).simulate(9, config=cfg)

    def infected_after(traj, k):
        state = {}
        for d in traj.deltas:
            if d.iteration > k:
                break
            state.update(d.changed)
        return {n for n, s in state.items() if s == 1}

    for k in range(10):
        assert infected_after(dyn, k) <= infected_after(static, k)


def test_dyn_sis_relapse():
    tg = TemporalGraph()
    tg.add_interaction(0, 1, 0, 4)
    tg.freeze()
    model = create("DynSIS", tg)
    model.set_initial_status(_cfg(beta=0.0, planted={0: "Infected"},
                                  **{"lambda": 1.0}))
    model.iteration()
    d = model.iteration()
    assert d.changed == {0: 0}
