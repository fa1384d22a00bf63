"""Model registry: every simulation model keyed by its public name."""

from __future__ import annotations

from ..engine import ConfigError
from .dynamic import DynSIModel, DynSIRModel, DynSISModel
from .epidemic import (IndependentCascadesModel, KerteszThresholdModel,
                       ProfileModel, ProfileThresholdModel, SEIRModel,
                       SEISModel, SIModel, SIRModel, SISModel, SWIRModel,
                       ThresholdModel)
from .opinion import (CognitiveOpinionDynamicsModel, CognitiveState,
                      MajorityRuleModel, QVoterModel, SznajdModel,
                      VoterModel)

REGISTRY = {cls.name: cls for cls in (
    SIModel, SISModel, SIRModel, SEISModel, SEIRModel, SWIRModel,
    ThresholdModel, KerteszThresholdModel, IndependentCascadesModel,
    ProfileModel, ProfileThresholdModel,
    VoterModel, SznajdModel, QVoterModel, MajorityRuleModel,
    CognitiveOpinionDynamicsModel,
    DynSIModel, DynSISModel, DynSIRModel,
)}


def create(name, topology):
    """Instantiate a registered model over ``topology``.

    Args:
        name: public registry name, e.g. "SIR".
        topology: Graph, or TemporalGraph/SnapshotSequence for the dynamic
            models.

    Raises:
        ConfigError: unknown name, or topology kind the model rejects.
    """
    try:
        cls = REGISTRY[name]
    except KeyError:
        raise ConfigError(
            f"unknown model {name!r}; available: {sorted(REGISTRY)}"
        ) from None
    return cls(topology)


def catalogue():
    """Schema documents of every registered model (discovery endpoints)."""
    return {name: cls.describe() for name, cls in sorted(REGISTRY.items())}


__all__ = ["REGISTRY", "create", "catalogue", "CognitiveState"] + [
    cls.__name__ for cls in REGISTRY.values()]
