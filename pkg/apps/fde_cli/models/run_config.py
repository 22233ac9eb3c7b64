"""
The JSON run configuration passed with --config.

Every section rejects unknown keys. A command whose section is absent
runs with that section's defaults.
"""

import json
from pathlib import Path
from typing import ClassVar, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from fdesic.cancopt import SolverMethod, SolverOptions
from fdesic.constraints import ConstraintSet, ParamBox, QuantizationSpec, default_constraints
from fdesic.digsic import MemPolySpec, OfdmParams, PaModel
from fdesic.netgain import AxisSpec, GainScenario, db_to_ratio
from fdesic.rfmodel import (
    MODEL_GRID_POINTS,
    MODEL_GRID_START_HZ,
    MODEL_GRID_STOP_HZ,
    CancellerConfig,
    CancellerFamily,
)
from fdesic.sichan import (
    BENCHMARK_CENTER_HZ,
    BENCHMARK_SPACING_HZ,
    BENCHMARK_SPAN_HZ,
)
from fdesic.sweep import DEFAULT_B_LIST_MHZ, DEFAULT_M_LIST, SweepMode

from fde_cli.config import Settings


CORNERS_PRESET = "table2-corners"
# older name, read as CORNERS_PRESET
CORNERS_PRESET_ALIAS = "tuning-corners"


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class ChannelConfig(_Section):
    """
    SI channel source: a channel CSV (`file`) or synthesis settings.

    Without `file` and `seed` the benchmark channel is used on the given
    grid; with `seed` a random multipath channel is drawn.
    """

    file: Optional[str] = None
    seed: Optional[int] = None
    n_paths: int = Field(default=4, ge=1)
    target_isolation_db: float = Field(default=-20.0, lt=0)
    center_hz: float = Field(default=BENCHMARK_CENTER_HZ, gt=0)
    span_hz: float = Field(default=BENCHMARK_SPAN_HZ, ge=0)
    spacing_hz: float = Field(default=BENCHMARK_SPACING_HZ, gt=0)
    max_delay_s: float = Field(default=40e-9, ge=0)
    amp_spread_db: float = Field(default=15.0, ge=0)

    @model_validator(mode="after")
    def _file_or_synthesis(self):
        if self.file is not None and self.model_fields_set - {"file"}:
            raise ValueError("give either a channel file or synthesis settings, not both")
        return self


class SolverConfig(_Section):
    method: SolverMethod = SolverMethod.NELDER_MEAD
    polish: bool = True
    restarts: Optional[int] = Field(default=None, ge=1)
    max_iterations: Optional[int] = Field(default=None, ge=1)
    rel_tol: float = Field(default=1e-12, gt=0)
    local_search_rounds: int = Field(default=10, ge=0)

    def to_options(self, settings: Settings, seed: int, n_jobs: int) -> SolverOptions:
        return SolverOptions(
            method=self.method,
            polish=self.polish,
            restarts=self.restarts or settings.restarts,
            max_iterations=self.max_iterations or settings.max_iterations,
            rel_tol=self.rel_tol,
            seed=seed,
            n_jobs=n_jobs,
            local_search_rounds=self.local_search_rounds,
        )


class ConstraintOverride(_Section):
    """Changes to a family's default boxes and lattices."""

    boxes: dict[str, ParamBox] = Field(default_factory=dict)
    quantization: Optional[QuantizationSpec] = None
    # false runs the family ideal-only
    quantized: bool = True


class GridConfig(_Section):
    start_hz: float = Field(default=MODEL_GRID_START_HZ, gt=0)
    stop_hz: float = Field(default=MODEL_GRID_STOP_HZ, gt=0)
    n_points: int = Field(default=MODEL_GRID_POINTS, ge=2)


class ModelEntry(_Section):
    label: str = Field(pattern=r"^[A-Za-z0-9_.-]+$")
    canceller: CancellerConfig


class ModelSection(_Section):
    grid: GridConfig = Field(default_factory=GridConfig)
    models: list[ModelEntry] = Field(default_factory=list)
    presets: list[Literal["table2-corners", "tuning-corners"]] = Field(default_factory=list)

    @field_validator("presets")
    @classmethod
    def _canonical_presets(cls, presets):
        names = [CORNERS_PRESET if name == CORNERS_PRESET_ALIAS else name for name in presets]
        return list(dict.fromkeys(names))


class OptimizeSection(_Section):
    family: CancellerFamily = CancellerFamily.PCB
    m_taps: int = Field(default=2, ge=1)
    # None keeps the whole channel grid
    bandwidth_mhz: Optional[float] = Field(default=20.0, gt=0)
    quantize: bool = True
    baseline: Optional[Literal["heur"]] = None


class SweepSection(_Section):
    families: list[CancellerFamily] = Field(default_factory=lambda: list(CancellerFamily), min_length=1)
    m_list: list[int] = Field(default_factory=lambda: list(DEFAULT_M_LIST), min_length=1)
    b_list_mhz: list[float] = Field(default_factory=lambda: list(DEFAULT_B_LIST_MHZ), min_length=1)
    modes: list[SweepMode] = Field(default_factory=lambda: [SweepMode.IDEAL, SweepMode.QUANTIZED], min_length=1)
    output: str = "sweep.csv"


class DbRatioModel(_Section):
    """Accepts `<name>_db` (power dB) in place of any listed linear ratio field."""

    ratio_fields: ClassVar[tuple[str, ...]] = ()

    @model_validator(mode="before")
    @classmethod
    def _convert_db(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        for name in cls.ratio_fields:
            key = f"{name}_db"
            if key not in data:
                continue
            if name in data:
                raise ValueError(f"give {name} or {key}, not both")
            data[name] = db_to_ratio(data.pop(key)).tolist()
        return data


class ScenarioInput(DbRatioModel):
    ratio_fields: ClassVar[tuple[str, ...]] = ("gamma_ul", "gamma_dl", "gamma_iui", "gamma_self", "snrs")

    name: str = "scenario"
    bandwidth_hz: float = Field(default=20e6, gt=0)
    gamma_ul: float = Field(default=0.0, ge=0)
    gamma_dl: float = Field(default=0.0, ge=0)
    gamma_iui: float = Field(default=0.0, ge=0)
    gamma_self: float = Field(default=1.0, ge=0)
    snrs: list[float] = Field(default_factory=list)
    fd_mask: list[bool] = Field(default_factory=list)

    def to_scenario(self) -> GainScenario:
        return GainScenario(**self.model_dump(exclude={"name"}))


def _default_scenarios() -> list[ScenarioInput]:
    return [
        ScenarioInput(name="uldl-10db", gamma_ul=10.0, gamma_dl=10.0, gamma_iui=0.0, gamma_self=1.0),
        ScenarioInput(name="three-node-20db", snrs=[100.0, 100.0], fd_mask=[True, True]),
    ]


class NetworkSection(DbRatioModel):
    ratio_fields: ClassVar[tuple[str, ...]] = ("gamma_self",)

    gamma_self: float = Field(default=1.0, ge=0)
    scenarios: list[ScenarioInput] = Field(default_factory=_default_scenarios)
    uldl_gamma_ul_db: list[float] = Field(default_factory=lambda: [10.0, 15.0, 20.0], min_length=1)
    dl_axis: AxisSpec = Field(default_factory=lambda: AxisSpec(start_db=0.0, stop_db=30.0, n_points=31))
    iui_axis: AxisSpec = Field(default_factory=lambda: AxisSpec(start_db=0.0, stop_db=30.0, n_points=31))
    three_node_axis: AxisSpec = Field(default_factory=lambda: AxisSpec(start_db=0.0, stop_db=30.0, n_points=31))


class DigsicSection(_Section):
    family: CancellerFamily = CancellerFamily.PCB
    m_taps: int = Field(default=2, ge=1)
    bandwidth_mhz: float = Field(default=20.0, gt=0)
    quantize: bool = True
    tx_power_dbm: float = 10.0
    # None disables receiver noise
    noise_floor_dbm: Optional[float] = -85.0
    n_symbols: int = Field(default=100, ge=1)
    ofdm: OfdmParams = Field(default_factory=OfdmParams)
    # lags cover the whole residual-channel FIR
    mempoly: MemPolySpec = Field(
        default_factory=lambda: MemPolySpec(max_odd_order=3, memory_depth=32, pre_cursor=32)
    )
    pa: PaModel = Field(default_factory=PaModel)
    write_iq: bool = False


class RunConfig(_Section):
    seed: Optional[int] = Field(default=None, ge=0)
    out_dir: Optional[str] = None
    channel: ChannelConfig = Field(default_factory=ChannelConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    constraints: dict[CancellerFamily, ConstraintOverride] = Field(default_factory=dict)
    model: ModelSection = Field(default_factory=ModelSection)
    optimize: OptimizeSection = Field(default_factory=OptimizeSection)
    sweep: SweepSection = Field(default_factory=SweepSection)
    network: NetworkSection = Field(default_factory=NetworkSection)
    digsic: DigsicSection = Field(default_factory=DigsicSection)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """Parse a config file. OSError propagates; bad JSON raises json.JSONDecodeError."""
        with open(path) as f:
            data = json.load(f)
        return cls.model_validate(data)

    def constraint_set(self, family: CancellerFamily) -> ConstraintSet:
        family = CancellerFamily(family)
        base = default_constraints(family)
        override = self.constraints.get(family)
        if override is None:
            return base
        quantization = override.quantization or base.quantization
        return base.model_copy(update={
            "boxes": {**base.boxes, **override.boxes},
            "quantization": quantization if override.quantized else None,
        })

    def constraint_sets(self) -> dict[CancellerFamily, ConstraintSet]:
        return {family: self.constraint_set(family) for family in CancellerFamily}
