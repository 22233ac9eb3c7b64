"""
Canceller configuration by constrained least squares.

Pipeline for one (family, M) pair:
1. Multi-start continuous optimization of sum_k |H_SI(f_k) - H(f_k)|^2
   inside the parameter boxes (phases wrap on the circle)
2. Rounding of every parameter to its hardware lattice
3. Cyclic coordinate descent over lattice neighbours
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from functools import partial
from typing import NamedTuple, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import Bounds, least_squares, minimize

from .constraints import (
    PARAM_NAMES,
    PHASE_PARAM,
    ConstraintSet,
    QuantizationSpec,
    default_constraints,
)
from .errors import InvalidArgumentError
from .rfmodel import (
    AmpPhaseCanceller,
    CancellerConfig,
    CancellerFamily,
    ComplexResponse,
    DelayLineCanceller,
    DelayLineTap,
    PcbCanceller,
    PcbCircuitConstants,
    PcbTapConfig,
    RficCanceller,
    RficTapConfig,
    canceller_response,
    delay_line_values,
    pcb_taps_values,
    rfic_taps_values,
)
from .sichan import SicMetrics, residual, sic_metrics

logger = logging.getLogger(__name__)

DEFAULT_RESTARTS = 16
DEFAULT_MAX_ITERATIONS = 2000

# Nelder-Mead simplex edge in normalized coordinates
SIMPLEX_STEP = 0.1

# Each half of a split tap carries half the amplitude
SPLIT_DB = 20.0 * math.log10(0.5)


class SolverMethod(str, Enum):
    NELDER_MEAD = "nelder-mead"
    LEAST_SQUARES = "least-squares"


class SolverOptions(BaseModel):
    """Multi-start solver settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    method: SolverMethod = SolverMethod.NELDER_MEAD
    # bounded trust-region least-squares refinement after Nelder-Mead
    polish: bool = True
    restarts: int = Field(default=DEFAULT_RESTARTS, ge=1)
    max_iterations: int = Field(default=DEFAULT_MAX_ITERATIONS, ge=1)
    rel_tol: float = Field(default=1e-12, gt=0)
    seed: int = Field(default=0, ge=0)
    n_jobs: int = Field(default=1, ge=1)
    local_search_rounds: int = Field(default=10, ge=0)


class Stage(str, Enum):
    IDEAL = "ideal"
    ROUNDED = "rounded"
    SEARCHED = "searched"
    HEURISTIC = "heuristic"


class StageResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    stage: Stage
    config: CancellerConfig
    objective_value: float = Field(ge=0)
    metrics: SicMetrics


class OptimizeReport(BaseModel):
    """
    Result of one configuration run.

    `stages` is ordered as produced (ideal, rounded, searched, and the
    heuristic baseline when requested). The best configuration is the
    last stage that is not the heuristic baseline.
    """

    model_config = ConfigDict(frozen=True)

    family: CancellerFamily
    m_taps: int = Field(ge=1)
    stages: list[StageResult] = Field(min_length=1)
    converged: bool = True
    restarts_used: int = Field(default=0, ge=0)
    iterations: int = Field(default=0, ge=0)
    # excluded from dumps so data outputs stay reproducible
    wall_time_s: float = Field(default=0.0, exclude=True)
    warning: Optional[str] = None

    @property
    def best(self) -> StageResult:
        for result in reversed(self.stages):
            if result.stage != Stage.HEURISTIC:
                return result
        return self.stages[-1]

    @property
    def best_config(self):
        return self.best.config

    @property
    def objective_value(self) -> float:
        return self.best.objective_value

    @property
    def metrics(self) -> SicMetrics:
        return self.best.metrics

    def stage_result(self, stage: Stage) -> Optional[StageResult]:
        for result in self.stages:
            if result.stage == stage:
                return result
        return None


# ---------------------------------------------------------------------------
# Parameter arrays
# ---------------------------------------------------------------------------


def _params_of(config) -> np.ndarray:
    """(M, P) parameter array in PARAM_NAMES order."""
    names = PARAM_NAMES[config.family]
    if isinstance(config, AmpPhaseCanceller):
        return np.array([[config.amp_linear, config.phase_rad]], dtype=float)
    return np.array([[getattr(tap, name) for name in names] for tap in config.taps], dtype=float)


def _wrap_phase(phase):
    return np.angle(np.exp(1j * np.asarray(phase, dtype=float)))


def _config_from(family: CancellerFamily, params: np.ndarray, constants: Optional[PcbCircuitConstants]):
    names = PARAM_NAMES[family]
    rows = [dict(zip(names, (float(v) for v in row))) for row in params]
    if family == CancellerFamily.PCB:
        return PcbCanceller(taps=[PcbTapConfig(**row) for row in rows], constants=constants or PcbCircuitConstants())
    if family == CancellerFamily.RFIC:
        return RficCanceller(taps=[RficTapConfig(**row) for row in rows])
    if family == CancellerFamily.DELAY_LINE:
        return DelayLineCanceller(taps=[DelayLineTap(**row) for row in rows])
    return AmpPhaseCanceller(**rows[0])


def _constants_of(config) -> Optional[PcbCircuitConstants]:
    return config.constants if isinstance(config, PcbCanceller) else None


class _TapModel:
    """Evaluates a family's tap bank from an (M, P) parameter array."""

    def __init__(self, family: CancellerFamily, freqs: np.ndarray, constants: Optional[PcbCircuitConstants]):
        self.family = family
        self.names = PARAM_NAMES[family]
        self.freqs = np.asarray(freqs, dtype=float)
        self.constants = constants or PcbCircuitConstants()

    def values(self, params: np.ndarray) -> np.ndarray:
        cols = dict(zip(self.names, params.T))
        if self.family == CancellerFamily.PCB:
            return pcb_taps_values(
                cols["amp_db"], cols[PHASE_PARAM], cols["c_f_farad"], cols["c_q_farad"],
                self.constants, self.freqs,
            )
        if self.family == CancellerFamily.RFIC:
            return rfic_taps_values(cols["amp_db"], cols[PHASE_PARAM], cols["fc_hz"], cols["q"], self.freqs)
        if self.family == CancellerFamily.DELAY_LINE:
            return delay_line_values(cols["amp_linear"], cols["tau_s"], cols[PHASE_PARAM], self.freqs)
        value = cols["amp_linear"][0] * np.exp(-1j * cols[PHASE_PARAM][0])
        return np.full(self.freqs.size, value, dtype=complex)

    def to_config(self, params: np.ndarray):
        return _config_from(self.family, params, self.constants)


class _UnitCodec:
    """
    Maps (M, P) parameters to flat solver vectors.

    Boxed parameters become [0, 1]; phases become turns (phi / 2pi) and
    are left unbounded, wrapping back onto [-pi, pi] when decoded.
    """

    def __init__(self, names: tuple[str, ...], m_taps: int, constraints: ConstraintSet):
        self.m_taps = m_taps
        self.n_params = len(names)
        periodic = [name == PHASE_PARAM for name in names]
        lo = [0.0 if p else constraints.boxes[n].min for n, p in zip(names, periodic)]
        hi = [0.0 if p else constraints.boxes[n].max for n, p in zip(names, periodic)]
        self.periodic = np.tile(periodic, m_taps)
        self.lo = np.tile(lo, m_taps)
        self.hi = np.tile(hi, m_taps)
        self.width = self.hi - self.lo

    @property
    def size(self) -> int:
        return self.periodic.size

    def encode(self, params: np.ndarray) -> np.ndarray:
        flat = np.asarray(params, dtype=float).reshape(-1)
        safe_width = np.where(self.width > 0, self.width, 1.0)
        unit = np.clip((flat - self.lo) / safe_width, 0.0, 1.0)
        unit = np.where(self.width > 0, unit, 0.0)
        return np.where(self.periodic, flat / (2.0 * np.pi), unit)

    def decode(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        boxed = np.clip(self.lo + np.clip(x, 0.0, 1.0) * self.width, self.lo, self.hi)
        flat = np.where(self.periodic, _wrap_phase(2.0 * np.pi * x), boxed)
        return flat.reshape(self.m_taps, self.n_params)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lb = np.where(self.periodic, -np.inf, 0.0)
        ub = np.where(self.periodic, np.inf, 1.0)
        return lb, ub

    def random(self, rng: np.random.Generator) -> np.ndarray:
        draw = rng.uniform(0.0, 1.0, self.size)
        return np.where(self.periodic, draw - 0.5, draw)

    def simplex(self, x0: np.ndarray) -> np.ndarray:
        vertices = [x0]
        for i in range(self.size):
            vertex = x0.copy()
            step = SIMPLEX_STEP
            if not self.periodic[i] and x0[i] + step > 1.0:
                step = -step
            vertex[i] += step
            vertices.append(vertex)
        return np.array(vertices)


class _Problem:
    def __init__(self, model: _TapModel, codec: _UnitCodec, target: np.ndarray):
        self.model = model
        self.codec = codec
        self.target = target

    def residuals(self, x: np.ndarray) -> np.ndarray:
        diff = self.target - self.model.values(self.codec.decode(x))
        return np.concatenate([diff.real, diff.imag])

    def objective(self, x: np.ndarray) -> float:
        diff = self.target - self.model.values(self.codec.decode(x))
        return float(np.sum(diff.real**2 + diff.imag**2))


class _RestartResult(NamedTuple):
    x: np.ndarray
    objective: float
    iterations: int
    converged: bool


def _run_restart(problem: _Problem, opts: SolverOptions, x0: np.ndarray) -> _RestartResult:
    """One local refinement from x0."""
    lb, ub = problem.codec.bounds()
    x = np.clip(np.asarray(x0, dtype=float), lb, ub)
    iterations = 0
    converged = False

    if opts.method == SolverMethod.NELDER_MEAD:
        f0 = problem.objective(x)
        result = minimize(
            problem.objective,
            x,
            method="Nelder-Mead",
            bounds=Bounds(lb, ub),
            options={
                "maxiter": opts.max_iterations,
                "initial_simplex": problem.codec.simplex(x),
                "xatol": 1e-10,
                "fatol": opts.rel_tol * max(f0, 1e-300),
            },
        )
        iterations += int(result.nit)
        converged = bool(result.success)
        if result.fun <= f0:
            x = np.asarray(result.x, dtype=float)

    if opts.method == SolverMethod.LEAST_SQUARES or opts.polish:
        before = problem.objective(x)
        result = least_squares(
            problem.residuals,
            np.clip(x, lb, ub),
            bounds=(lb, ub),
            method="trf",
            ftol=opts.rel_tol,
            xtol=1e-12,
            gtol=1e-12,
            max_nfev=opts.max_iterations,
        )
        iterations += int(result.nfev)
        converged = converged or result.status > 0
        if 2.0 * result.cost <= before:
            x = np.asarray(result.x, dtype=float)

    return _RestartResult(x, problem.objective(x), iterations, converged)


def _evaluate_stage(stage: Stage, config, h_si: ComplexResponse) -> StageResult:
    h_res = residual(h_si, canceller_response(config, h_si.grid))
    objective = float(np.sum(np.abs(h_res.values) ** 2))
    return StageResult(stage=stage, config=config, objective_value=objective, metrics=sic_metrics(h_res))


def _check_taps(family: CancellerFamily, m_taps: int) -> None:
    if m_taps < 1:
        raise InvalidArgumentError(f"m_taps must be >= 1, got {m_taps}")
    if family == CancellerFamily.AMP_PHASE and m_taps != 1:
        raise InvalidArgumentError("the amplitude/phase canceller has exactly one tap")


# ---------------------------------------------------------------------------
# Initial placements
# ---------------------------------------------------------------------------


def _subband_centers(freqs: np.ndarray, m_taps: int) -> tuple[np.ndarray, float]:
    f_lo, f_hi = float(freqs[0]), float(freqs[-1])
    width = (f_hi - f_lo) / m_taps
    return f_lo + (np.arange(m_taps) + 0.5) * width, width


def _interp_complex(f: np.ndarray, freqs: np.ndarray, values: np.ndarray) -> np.ndarray:
    return np.interp(f, freqs, values.real) + 1j * np.interp(f, freqs, values.imag)


def _fit_weights(columns: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Complex tap weights w minimizing |target - w @ columns|."""
    weights, *_ = np.linalg.lstsq(columns.T, target, rcond=None)
    return weights


def heuristic_rfic_config(
    m_taps: int,
    h_si: ComplexResponse,
    constraints: Optional[ConstraintSet] = None,
) -> RficCanceller:
    """
    Baseline RFIC setting without optimization.

    The band is cut into m_taps equal sub-bands; each tap is centered on
    its sub-band with Q = fc / (B / m_taps) and matches the amplitude and
    phase of H_SI at that center. Values are clamped to the boxes.
    """
    _check_taps(CancellerFamily.RFIC, m_taps)
    constraints = constraints or default_constraints(CancellerFamily.RFIC)
    constraints.check(CancellerFamily.RFIC)
    boxes = constraints.boxes
    freqs = h_si.freqs_hz

    centers, width = _subband_centers(freqs, m_taps)
    h_at = _interp_complex(centers, freqs, h_si.values)
    with np.errstate(divide="ignore"):
        amp_db = 20.0 * np.log10(np.abs(h_at))
        q = centers / width if width > 0 else np.full(m_taps, boxes["q"].max)

    taps = [
        RficTapConfig(
            amp_db=float(np.clip(amp_db[i], boxes["amp_db"].min, boxes["amp_db"].max)),
            phase_rad=float(_wrap_phase(-np.angle(h_at[i]))),
            fc_hz=float(np.clip(centers[i], boxes["fc_hz"].min, boxes["fc_hz"].max)),
            q=float(np.clip(q[i], boxes["q"].min, boxes["q"].max)),
        )
        for i in range(m_taps)
    ]
    return RficCanceller(taps=taps)


def initial_config(family: CancellerFamily, m_taps: int, h_si: ComplexResponse, constraints: ConstraintSet):
    """
    Deterministic starting point used as restart 0.

    RFIC uses the sub-band heuristic. The other families spread their
    tuning parameter (PCB C_F, delay-line tau) across its box and fit the
    complex tap weights by linear least squares.
    """
    family = CancellerFamily(family)
    if family == CancellerFamily.RFIC:
        return heuristic_rfic_config(m_taps, h_si, constraints)

    boxes = constraints.boxes
    freqs = h_si.freqs_hz
    target = np.asarray(h_si.values)
    spread = (np.arange(m_taps) + 0.5) / m_taps

    if family == CancellerFamily.AMP_PHASE:
        w = complex(np.mean(target))
        amp = float(np.clip(abs(w), boxes["amp_linear"].min, boxes["amp_linear"].max))
        return AmpPhaseCanceller(amp_linear=amp, phase_rad=float(_wrap_phase(-np.angle(w))))

    if family == CancellerFamily.DELAY_LINE:
        tau_box = boxes["tau_s"]
        taus = tau_box.min + spread * (tau_box.max - tau_box.min)
        columns = np.exp(-2j * np.pi * taus[:, None] * freqs[None, :])
        weights = _fit_weights(columns, target)
        amp_box = boxes["amp_linear"]
        return DelayLineCanceller(taps=[
            DelayLineTap(
                amp_linear=float(np.clip(abs(w), amp_box.min, amp_box.max)),
                tau_s=float(tau),
                phase_rad=float(_wrap_phase(-np.angle(w))),
            )
            for w, tau in zip(weights, taus)
        ])

    constants = constraints.pcb_constants()
    cf_box, cq_box, amp_box = boxes["c_f_farad"], boxes["c_q_farad"], boxes["amp_db"]
    c_f = cf_box.min + spread * (cf_box.max - cf_box.min)
    c_q = 0.5 * (cq_box.min + cq_box.max)
    columns = np.array([
        pcb_taps_values(np.zeros(1), np.zeros(1), np.array([cf]), np.array([c_q]), constants, freqs)
        for cf in c_f
    ])
    weights = _fit_weights(columns, target)
    amps_db = 20.0 * np.log10(np.maximum(np.abs(weights), 1e-12))
    return PcbCanceller(
        taps=[
            PcbTapConfig(
                amp_db=float(np.clip(a, amp_box.min, amp_box.max)),
                phase_rad=float(_wrap_phase(-np.angle(w))),
                c_f_farad=float(cf),
                c_q_farad=float(c_q),
            )
            for a, w, cf in zip(amps_db, weights, c_f)
        ],
        constants=constants,
    )


def split_largest_tap(config, constraints: ConstraintSet):
    """
    An (M+1)-tap configuration with exactly the response of config.

    The strongest tap is halved into two identical taps; a delay line
    instead gains a zero-amplitude tap. Returns None when halving would
    leave the amplitude box or the family has a fixed tap count.
    """
    family = config.family
    if family == CancellerFamily.AMP_PHASE:
        return None
    params = _params_of(config)
    if family == CancellerFamily.DELAY_LINE:
        extra = np.array([[0.0, constraints.boxes["tau_s"].min, 0.0]])
        return _config_from(family, np.vstack([params, extra]), None)

    k = int(np.argmax(params[:, 0]))
    half = params[k, 0] + SPLIT_DB
    if half < constraints.boxes["amp_db"].min:
        return None
    params[k, 0] = half
    split = np.insert(params, k + 1, params[k], axis=0)
    return _config_from(family, split, _constants_of(config))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def optimize_config(
    family: CancellerFamily,
    m_taps: int,
    h_si: ComplexResponse,
    constraints: Optional[ConstraintSet] = None,
    solver_opts: Optional[SolverOptions] = None,
    warm_starts: Sequence = (),
) -> OptimizeReport:
    """
    Continuous multi-start fit of an m_taps canceller to h_si.

    Restart 0 is the deterministic placement from `initial_config`, then
    each warm start, then `restarts - 1` uniform draws in the boxes. Draw i
    is seeded by child i of SeedSequence(seed), so a run with more restarts
    extends the starts of a run with fewer. The best restart is chosen by
    (objective, restart index), which makes threaded and serial runs agree.

    Args:
        family: Canceller family
        m_taps: Number of taps (exactly 1 for amp_phase)
        h_si: SI channel to emulate
        constraints: Parameter boxes (family defaults when omitted)
        solver_opts: Solver settings
        warm_starts: Extra starting configurations of the same family and size

    Returns:
        OptimizeReport with a single IDEAL stage; converged is False when
        the best restart stopped at the iteration cap
    """
    started = time.perf_counter()
    family = CancellerFamily(family)
    constraints = constraints or default_constraints(family)
    constraints.check(family)
    opts = solver_opts or SolverOptions()
    _check_taps(family, m_taps)

    model = _TapModel(family, h_si.freqs_hz, constraints.pcb_constants())
    codec = _UnitCodec(model.names, m_taps, constraints)
    problem = _Problem(model, codec, np.asarray(h_si.values))

    starts = [codec.encode(_params_of(initial_config(family, m_taps, h_si, constraints)))]
    for warm in warm_starts:
        if warm.family != family or warm.m_taps != m_taps:
            raise InvalidArgumentError(f"warm start must be a {m_taps}-tap {family.value} configuration")
        starts.append(codec.encode(_params_of(warm)))
    children = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    starts.extend(codec.random(np.random.default_rng(child)) for child in children[1:])

    run = partial(_run_restart, problem, opts)
    if opts.n_jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=opts.n_jobs) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(x0) for x0 in starts]

    for index, result in enumerate(results):
        logger.debug(
            "%s M=%d restart %d: objective %.6e after %d iterations",
            family.value, m_taps, index, result.objective, result.iterations,
        )
    best_index = min(range(len(results)), key=lambda i: (results[i].objective, i))
    best = results[best_index]

    stage = _evaluate_stage(Stage.IDEAL, model.to_config(codec.decode(best.x)), h_si)
    warning = None
    if not best.converged:
        warning = f"best restart stopped at the {opts.max_iterations}-iteration cap; result is best-so-far"
        logger.warning("%s M=%d: %s", family.value, m_taps, warning)

    wall_time = time.perf_counter() - started
    logger.info(
        "%s M=%d: mean SIC %.2f dB (restart %d of %d, %.2fs)",
        family.value, m_taps, stage.metrics.mean_rf_sic_db, best_index, len(starts), wall_time,
    )
    return OptimizeReport(
        family=family,
        m_taps=m_taps,
        stages=[stage],
        converged=best.converged,
        restarts_used=len(starts),
        iterations=sum(r.iterations for r in results),
        wall_time_s=wall_time,
        warning=warning,
    )


def quantize_config(config, qspec: QuantizationSpec):
    """
    Snap every parameter to its nearest lattice value (ties to the lower).

    Parameters without a lattice in qspec are left as they are. Values
    outside a lattice range raise InvalidArgumentError.
    """
    names = PARAM_NAMES[config.family]
    params = _params_of(config)
    for j, name in enumerate(names):
        for i in range(params.shape[0]):
            params[i, j] = qspec.snap(name, params[i, j])
    return _config_from(config.family, params, _constants_of(config))


def _lattice_neighbor(index: int, delta: int, size: int, periodic: bool) -> Optional[int]:
    if periodic:
        # first and last points of the phase lattice are the same angle
        return (index + delta) % (size - 1)
    candidate = index + delta
    if 0 <= candidate < size:
        return candidate
    return None


def local_search(
    config_quantized,
    h_si: ComplexResponse,
    qspec: QuantizationSpec,
    max_rounds: int = 10,
) -> OptimizeReport:
    """
    Coordinate descent over lattice neighbours.

    Each round visits every (tap, parameter) in order and moves it by one
    lattice step when that strictly lowers the objective. Stops after
    max_rounds rounds or a round without moves.

    Returns:
        OptimizeReport with ROUNDED (the input) and SEARCHED stages
    """
    if max_rounds < 0:
        raise InvalidArgumentError("max_rounds must be >= 0")
    started = time.perf_counter()
    family = config_quantized.family
    names = PARAM_NAMES[family]
    params = _params_of(config_quantized)
    m_taps, n_params = params.shape

    lattices: list[Optional[np.ndarray]] = []
    periodic: list[bool] = []
    index = np.zeros(params.shape, dtype=int)
    for j, name in enumerate(names):
        quant = qspec.params.get(name)
        if quant is None:
            lattices.append(None)
            periodic.append(False)
            continue
        lattice = quant.lattice()
        lattices.append(lattice)
        periodic.append(
            name == PHASE_PARAM
            and math.isclose(lattice[-1] - lattice[0], 2.0 * math.pi, rel_tol=1e-12)
        )
        for i in range(m_taps):
            k = quant.snap_index(params[i, j])
            if abs(lattice[k] - params[i, j]) > 1e-9 * (quant.max - quant.min):
                raise InvalidArgumentError(f"{name}={params[i, j]!r} is not on its lattice")
            index[i, j] = k

    model = _TapModel(family, h_si.freqs_hz, _constants_of(config_quantized))
    target = np.asarray(h_si.values)

    def values_at(idx: np.ndarray) -> np.ndarray:
        out = params.copy()
        for j, lattice in enumerate(lattices):
            if lattice is not None:
                out[:, j] = lattice[idx[:, j]]
        return out

    def objective(idx: np.ndarray) -> float:
        diff = target - model.values(values_at(idx))
        return float(np.sum(diff.real**2 + diff.imag**2))

    current = objective(index)
    moves = 0
    rounds = 0
    for _ in range(max_rounds):
        rounds += 1
        moved = False
        for i in range(m_taps):
            for j in range(n_params):
                lattice = lattices[j]
                if lattice is None:
                    continue
                best_value, best_k = current, index[i, j]
                for delta in (-1, 1):
                    k = _lattice_neighbor(int(index[i, j]), delta, lattice.size, periodic[j])
                    if k is None:
                        continue
                    trial = index.copy()
                    trial[i, j] = k
                    value = objective(trial)
                    if value < best_value:
                        best_value, best_k = value, k
                if best_k != index[i, j]:
                    index[i, j] = best_k
                    current = best_value
                    moved = True
                    moves += 1
        if not moved:
            break

    searched_config = config_quantized
    if moves:
        searched_config = model.to_config(values_at(index))
    rounded = _evaluate_stage(Stage.ROUNDED, config_quantized, h_si)
    searched = _evaluate_stage(Stage.SEARCHED, searched_config, h_si)
    logger.info(
        "local search: %d moves in %d rounds, mean SIC %.2f -> %.2f dB",
        moves, rounds, rounded.metrics.mean_rf_sic_db, searched.metrics.mean_rf_sic_db,
    )
    return OptimizeReport(
        family=family,
        m_taps=m_taps,
        stages=[rounded, searched],
        iterations=rounds,
        wall_time_s=time.perf_counter() - started,
    )


def configure_canceller(
    family: CancellerFamily,
    m_taps: int,
    h_si: ComplexResponse,
    constraints: Optional[ConstraintSet] = None,
    solver_opts: Optional[SolverOptions] = None,
    quantize: bool = True,
    warm_starts: Sequence = (),
    heuristic_baseline: bool = False,
) -> OptimizeReport:
    """
    Optimize, then round and search when the family has a lattice.

    The heuristic RFIC baseline is appended as an extra stage on request.
    """
    family = CancellerFamily(family)
    constraints = constraints or default_constraints(family)
    opts = solver_opts or SolverOptions()
    report = optimize_config(family, m_taps, h_si, constraints, opts, warm_starts)
    stages = list(report.stages)
    iterations = report.iterations
    wall_time = report.wall_time_s

    if quantize and constraints.quantization is not None:
        rounded = quantize_config(report.best_config, constraints.quantization)
        searched = local_search(rounded, h_si, constraints.quantization, opts.local_search_rounds)
        stages.extend(searched.stages)
        iterations += searched.iterations
        wall_time += searched.wall_time_s

    if heuristic_baseline:
        if family != CancellerFamily.RFIC:
            raise InvalidArgumentError("the heuristic baseline is defined for the rfic family only")
        stages.append(_evaluate_stage(Stage.HEURISTIC, heuristic_rfic_config(m_taps, h_si, constraints), h_si))

    return report.model_copy(update={"stages": stages, "iterations": iterations, "wall_time_s": wall_time})
