"""
Sweeps over tap count M and SIC bandwidth B for several canceller families.

Work is split into chains, one per (family, B). A chain runs its M values
in increasing order and warm-starts each M from the previous best
configuration with one tap split in two, so ideal-mode SIC cannot drop
as M grows. Chains are independent and run in a process pool.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field
from sklearn.model_selection import ParameterGrid

from .cancopt import OptimizeReport, SolverOptions, Stage, configure_canceller, split_largest_tap
from .constraints import ConstraintSet, default_constraints
from .errors import InvalidArgumentError
from .rfmodel import CancellerFamily, ComplexResponse

logger = logging.getLogger(__name__)

DEFAULT_M_LIST = (1, 2, 3, 4)
DEFAULT_B_LIST_MHZ = (20.0, 40.0, 80.0)

# SIC drops smaller than this are rounding, not monotonicity violations
MONOTONIC_TOL_DB = 1e-6


class SweepMode(str, Enum):
    IDEAL = "ideal"
    QUANTIZED = "quantized"


class SweepRow(BaseModel):
    """One output line of a sweep table."""

    model_config = ConfigDict(frozen=True)

    family: CancellerFamily
    m_taps: int = Field(ge=1)
    bandwidth_mhz: float = Field(gt=0)
    mode: SweepMode
    mean_sic_db: float
    worst_sic_db: float
    objective_value: float = Field(ge=0)
    converged: bool = True
    m_monotonic: bool = True


class SweepCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: CancellerFamily
    m_taps: int
    bandwidth_mhz: float
    mode: SweepMode
    report: OptimizeReport

    def row(self) -> SweepRow:
        stage = Stage.IDEAL if self.mode == SweepMode.IDEAL else Stage.SEARCHED
        result = self.report.stage_result(stage)
        return SweepRow(
            family=self.family,
            m_taps=self.m_taps,
            bandwidth_mhz=self.bandwidth_mhz,
            mode=self.mode,
            mean_sic_db=result.metrics.mean_rf_sic_db,
            worst_sic_db=result.metrics.worst_rf_sic_db,
            objective_value=result.objective_value,
            converged=self.report.converged,
        )


def chain_key(family: CancellerFamily, bandwidth_mhz: float) -> tuple[str, float]:
    return CancellerFamily(family).value, float(bandwidth_mhz)


def _warm_start(previous, m_taps: int, constraints: ConstraintSet):
    split = previous
    while split is not None and split.m_taps < m_taps:
        split = split_largest_tap(split, constraints)
    if split is None or split.m_taps != m_taps:
        return ()
    return (split,)


def run_chain(
    family: CancellerFamily,
    bandwidth_mhz: float,
    m_list: Sequence[int],
    modes: Sequence[SweepMode],
    h_band: ComplexResponse,
    constraints: ConstraintSet,
    solver_opts: SolverOptions,
) -> list[SweepCell]:
    """All cells of one (family, B) chain, in increasing M."""
    family = CancellerFamily(family)
    quantize = SweepMode.QUANTIZED in modes and constraints.quantization is not None
    cells: list[SweepCell] = []
    previous = None
    for m_taps in sorted(set(m_list)):
        if family == CancellerFamily.AMP_PHASE and m_taps != 1:
            continue
        report = configure_canceller(
            family,
            m_taps,
            h_band,
            constraints,
            solver_opts,
            quantize=quantize,
            warm_starts=_warm_start(previous, m_taps, constraints),
        )
        previous = report.stage_result(Stage.IDEAL).config
        for mode in modes:
            if mode == SweepMode.QUANTIZED and not quantize:
                continue
            cells.append(SweepCell(
                family=family, m_taps=m_taps, bandwidth_mhz=bandwidth_mhz, mode=mode, report=report,
            ))
    logger.info("chain %s B=%g MHz done (%d cells)", family.value, bandwidth_mhz, len(cells))
    return cells


def sort_rows(rows: Iterable[SweepRow], families: Sequence[CancellerFamily] = tuple(CancellerFamily)) -> list[SweepRow]:
    """Order by (family, B, M, mode) with families in the given order."""
    family_rank = {CancellerFamily(f): i for i, f in enumerate(families)}
    mode_rank = {mode: i for i, mode in enumerate(SweepMode)}
    return sorted(
        rows,
        key=lambda r: (family_rank.get(r.family, len(family_rank)), r.bandwidth_mhz, r.m_taps, mode_rank[r.mode]),
    )


def flag_monotonic(rows: Iterable[SweepRow]) -> list[SweepRow]:
    """Mark ideal rows whose mean SIC is below that of a smaller M at the same (family, B)."""
    rows = list(rows)
    best_so_far: dict[tuple, float] = {}
    flags: dict[int, bool] = {}
    order = sorted(
        (i for i, r in enumerate(rows) if r.mode == SweepMode.IDEAL),
        key=lambda i: (rows[i].family.value, rows[i].bandwidth_mhz, rows[i].m_taps),
    )
    for i in order:
        row = rows[i]
        key = (row.family, row.bandwidth_mhz)
        previous = best_so_far.get(key)
        flags[i] = previous is None or row.mean_sic_db >= previous - MONOTONIC_TOL_DB
        best_so_far[key] = row.mean_sic_db if previous is None else max(previous, row.mean_sic_db)
    return [r.model_copy(update={"m_monotonic": flags.get(i, True)}) for i, r in enumerate(rows)]


def sweep(
    h_si: ComplexResponse,
    families: Sequence[CancellerFamily] = tuple(CancellerFamily),
    m_list: Sequence[int] = DEFAULT_M_LIST,
    b_list_mhz: Sequence[float] = DEFAULT_B_LIST_MHZ,
    modes: Sequence[SweepMode] = (SweepMode.IDEAL, SweepMode.QUANTIZED),
    constraints: Optional[dict[CancellerFamily, ConstraintSet]] = None,
    solver_opts: Optional[SolverOptions] = None,
    n_jobs: int = 1,
    skip_chains: Iterable[tuple[str, float]] = (),
    on_chain_done: Optional[Callable[[list[SweepCell]], None]] = None,
) -> list[SweepCell]:
    """
    Optimize every (family, M, B) cell and report it in each mode.

    The grid of h_si is restricted to each B around its center. Families
    without a quantization lattice only produce ideal rows, and amp_phase
    only M = 1. Chains listed in skip_chains (see `chain_key`) are not run.

    Returns:
        Cells sorted by (family, B, M, mode)
    """
    if not families or not m_list or not b_list_mhz or not modes:
        raise InvalidArgumentError("families, m_list, b_list_mhz and modes must be non-empty")
    if any(m < 1 for m in m_list):
        raise InvalidArgumentError("tap counts must be >= 1")
    widest_hz = max(b_list_mhz) * 1e6
    if h_si.grid.span_hz < widest_hz * (1.0 - 1e-9):
        raise InvalidArgumentError(
            f"channel spans {h_si.grid.span_hz / 1e6:g} MHz, narrower than the {widest_hz / 1e6:g} MHz band"
        )

    families = [CancellerFamily(f) for f in families]
    modes = [SweepMode(m) for m in modes]
    constraints = constraints or {}
    opts = (solver_opts or SolverOptions()).model_copy(update={"n_jobs": 1})
    skip = {chain_key(*key) for key in skip_chains}
    center_hz = h_si.grid.center_hz

    chains = []
    for params in ParameterGrid({"family": families, "bandwidth_mhz": [float(b) for b in b_list_mhz]}):
        if chain_key(params["family"], params["bandwidth_mhz"]) in skip:
            continue
        family = params["family"]
        chains.append((
            family,
            params["bandwidth_mhz"],
            list(m_list),
            modes,
            h_si.restrict(center_hz, params["bandwidth_mhz"] * 1e6),
            constraints.get(family) or default_constraints(family),
            opts,
        ))
    logger.info("sweep: %d chains (%d skipped) on %d worker(s)", len(chains), len(skip), n_jobs)

    cells: list[SweepCell] = []
    if n_jobs > 1 and len(chains) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            futures = [pool.submit(run_chain, *chain) for chain in chains]
            for future in as_completed(futures):
                done = future.result()
                cells.extend(done)
                if on_chain_done is not None:
                    on_chain_done(done)
    else:
        for chain in chains:
            done = run_chain(*chain)
            cells.extend(done)
            if on_chain_done is not None:
                on_chain_done(done)

    family_rank = {f: i for i, f in enumerate(families)}
    mode_rank = {mode: i for i, mode in enumerate(SweepMode)}
    return sorted(
        cells,
        key=lambda c: (family_rank[c.family], c.bandwidth_mhz, c.m_taps, mode_rank[c.mode]),
    )
