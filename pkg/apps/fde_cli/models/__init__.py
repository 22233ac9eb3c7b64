from .run_config import (
    ChannelConfig,
    DigsicSection,
    ModelSection,
    NetworkSection,
    OptimizeSection,
    RunConfig,
    ScenarioInput,
    SolverConfig,
    SweepSection,
)
from .reports import (
    CurveSummary,
    DigsicReport,
    ModelRunReport,
    NetworkRunReport,
    OptimizeRunReport,
    ScenarioResult,
    StageSummary,
)

__all__ = [
    "ChannelConfig",
    "DigsicSection",
    "ModelSection",
    "NetworkSection",
    "OptimizeSection",
    "RunConfig",
    "ScenarioInput",
    "SolverConfig",
    "SweepSection",
    "CurveSummary",
    "DigsicReport",
    "ModelRunReport",
    "NetworkRunReport",
    "OptimizeRunReport",
    "ScenarioResult",
    "StageSummary",
]
