from typing import Optional

from pydantic import BaseModel

from fdesic.cancopt import OptimizeReport, Stage, StageResult
from fdesic.netgain import GainScenario, ThreeNodeThroughput, UlDlSummary, UlDlThroughput
from fdesic.rfmodel import CancellerConfig, CancellerFamily


class CurveSummary(BaseModel):
    label: str
    file: str
    # None when the curve has no -3 dB band on the grid
    fc_hz: Optional[float] = None
    q: Optional[float] = None


class ModelRunReport(BaseModel):
    command: str = "model"
    n_points: int
    curves: list[CurveSummary]


class StageSummary(BaseModel):
    stage: Stage
    objective_value: float
    mean_rf_sic_db: float
    worst_rf_sic_db: float
    mean_rf_sic_db_dbmean: float
    config: CancellerConfig

    @classmethod
    def from_result(cls, result: StageResult) -> "StageSummary":
        return cls(
            stage=result.stage,
            objective_value=result.objective_value,
            mean_rf_sic_db=result.metrics.mean_rf_sic_db,
            worst_rf_sic_db=result.metrics.worst_rf_sic_db,
            mean_rf_sic_db_dbmean=result.metrics.mean_rf_sic_db_dbmean,
            config=result.config,
        )


class OptimizeRunReport(BaseModel):
    command: str = "optimize"
    seed: int
    family: CancellerFamily
    m_taps: int
    bandwidth_mhz: Optional[float]
    n_points: int
    converged: bool
    warning: Optional[str] = None
    restarts_used: int
    iterations: int
    objective_value: float
    mean_rf_sic_db: float
    worst_rf_sic_db: float
    stages: list[StageSummary]

    @classmethod
    def from_report(
        cls, report: OptimizeReport, seed: int, bandwidth_mhz: Optional[float], n_points: int
    ) -> "OptimizeRunReport":
        return cls(
            seed=seed,
            family=report.family,
            m_taps=report.m_taps,
            bandwidth_mhz=bandwidth_mhz,
            n_points=n_points,
            converged=report.converged,
            warning=report.warning,
            restarts_used=report.restarts_used,
            iterations=report.iterations,
            objective_value=report.objective_value,
            mean_rf_sic_db=report.metrics.mean_rf_sic_db,
            worst_rf_sic_db=report.metrics.worst_rf_sic_db,
            stages=[StageSummary.from_result(s) for s in report.stages],
        )


class ScenarioResult(BaseModel):
    name: str
    scenario: GainScenario
    uldl: UlDlThroughput
    three_node: Optional[ThreeNodeThroughput] = None
    tdma_user_rates: Optional[list[float]] = None
    tdma_throughput: Optional[float] = None
    tdma_jfi: Optional[float] = None


class NetworkRunReport(BaseModel):
    command: str = "network"
    scenarios: list[ScenarioResult]
    uldl_summary: UlDlSummary
    files: list[str]


class DigsicReport(BaseModel):
    """Power bookkeeping of the RF + digital cancellation chain (dB relative to TX)."""

    command: str = "digsic"
    seed: int
    family: CancellerFamily
    m_taps: int
    bandwidth_mhz: float
    converged: bool
    warning: Optional[str] = None
    tx_power_dbm: float
    noise_floor_db: Optional[float]
    n_samples: int
    n_coefficients: int
    rank_deficient: bool
    residual_si_db: float
    si_to_noise_db: Optional[float]
    rf_sic_db: float
    digital_sic_db: float
    overall_sic_db: float
    noise_limited: bool
