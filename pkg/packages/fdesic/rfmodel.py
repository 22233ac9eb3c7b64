"""
Frequency-response models for FDE RF cancellers.

Covers:
- RFIC FDE taps (2nd-order bandpass with amplitude, phase, center
  frequency and quality-factor controls)
- PCB FDE taps (RLC tank behind T-line impedance transformation networks)
- Delay-line taps and the single amplitude/phase tap

The PCB bandpass filter has two evaluation paths: a closed form and an
ABCD-matrix cascade of its five two-ports. They must agree to rounding.
"""

import math
from enum import Enum
from functools import reduce
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    field_serializer,
    field_validator,
    model_validator,
)

from .errors import BandTooNarrowError, InvalidArgumentError, NumericDegeneracyError


# |M_C| below this is treated as a singular cascade
DEGENERACY_THRESHOLD_S = 1e-30

FIXED_TANK_CAPACITANCE_F = 8.2e-12
BARE_TANK_Q = 2.7

# Tunable hardware ranges of the PCB tap
PCB_AMP_RANGE_DB = (-15.5, 0.0)
PCB_C_F_RANGE_F = (0.6e-12, 2.4e-12)
PCB_C_Q_RANGE_F = (2.0e-12, 14.0e-12)
# wide enough for a 3 dB band at every tuning corner
MODEL_GRID_START_HZ = 100e6
MODEL_GRID_STOP_HZ = 4e9
MODEL_GRID_POINTS = 39001


def db_to_linear(db):
    """Voltage dB to linear amplitude (factor 20)."""
    return 10.0 ** (np.asarray(db, dtype=float) / 20.0)


def linear_to_db(amp):
    """Linear amplitude to voltage dB. Zero maps to -inf."""
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(np.asarray(amp, dtype=float))


def calibrate_tank_resistance(
    q_tank: float = BARE_TANK_Q,
    l_henry: float = 1.65e-9,
    c_farad: float = FIXED_TANK_CAPACITANCE_F + 0.5 * sum(PCB_C_F_RANGE_F),
) -> float:
    """
    Parallel resistance giving a bare RLC tank the quality factor q_tank.

    Uses Q = R * sqrt(C / L) for a parallel tank. The default capacitance
    is the fixed tank capacitor plus the middle of the tunable range.

    Returns:
        Resistance in ohms (about 35.2 ohm with the defaults)
    """
    if q_tank <= 0 or l_henry <= 0 or c_farad <= 0:
        raise InvalidArgumentError("q_tank, l_henry and c_farad must be > 0")
    return q_tank * math.sqrt(l_henry / c_farad)


# ---------------------------------------------------------------------------
# Grids and responses
# ---------------------------------------------------------------------------


def active_subcarriers(n_fft: int = 64, n_active: int = 52) -> np.ndarray:
    """
    Signed FFT bin indices of the active subcarriers, DC excluded.

    Bins are split evenly around DC (the extra one goes to the positive
    side), e.g. 52 of 64 gives -26..-1 and 1..26.
    """
    if n_active < 1 or n_active > n_fft - 1:
        raise InvalidArgumentError("n_active must lie in [1, n_fft - 1]")
    n_pos = (n_active + 1) // 2
    n_neg = n_active // 2
    return np.concatenate([np.arange(-n_neg, 0), np.arange(1, n_pos + 1)])


class FrequencyGrid(BaseModel):
    """Ordered evaluation frequencies f_k in Hz."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    freqs_hz: np.ndarray

    @field_validator("freqs_hz", mode="before")
    @classmethod
    def _check_freqs(cls, value):
        freqs = np.array(value, dtype=float).reshape(-1)
        if freqs.size == 0:
            raise ValueError("frequency grid needs at least one point")
        if not np.all(np.isfinite(freqs)) or np.any(freqs <= 0):
            raise ValueError("frequencies must be finite and > 0")
        if np.any(np.diff(freqs) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        freqs.flags.writeable = False
        return freqs

    @field_serializer("freqs_hz")
    def _dump_freqs(self, freqs: np.ndarray) -> list[float]:
        return freqs.tolist()

    def __len__(self) -> int:
        return int(self.freqs_hz.size)

    @property
    def center_hz(self) -> float:
        return 0.5 * float(self.freqs_hz[0] + self.freqs_hz[-1])

    @property
    def span_hz(self) -> float:
        return float(self.freqs_hz[-1] - self.freqs_hz[0])

    @classmethod
    def uniform(cls, start_hz: float, stop_hz: float, n_points: int) -> "FrequencyGrid":
        return cls(freqs_hz=np.linspace(start_hz, stop_hz, n_points))

    @classmethod
    def spaced(cls, center_hz: float, span_hz: float, spacing_hz: float) -> "FrequencyGrid":
        """Grid symmetric around center_hz with a fixed spacing, center included."""
        if spacing_hz <= 0 or span_hz < 0:
            raise InvalidArgumentError("spacing must be > 0 and span >= 0")
        half = int(math.floor(0.5 * span_hz / spacing_hz + 1e-9))
        return cls(freqs_hz=center_hz + spacing_hz * np.arange(-half, half + 1))

    @classmethod
    def ofdm_bins(
        cls,
        center_hz: float,
        sample_rate_hz: float = 20e6,
        n_fft: int = 64,
        n_active: int = 52,
    ) -> "FrequencyGrid":
        """Grid at the active OFDM subcarrier frequencies around center_hz."""
        bins = active_subcarriers(n_fft, n_active)
        return cls(freqs_hz=center_hz + bins * (sample_rate_hz / n_fft))

    def band_mask(self, center_hz: float, span_hz: float) -> np.ndarray:
        tol = 1e-9 * max(span_hz, 1.0)
        return np.abs(self.freqs_hz - center_hz) <= 0.5 * span_hz + tol

    def restrict(self, center_hz: float, span_hz: float) -> "FrequencyGrid":
        mask = self.band_mask(center_hz, span_hz)
        if not np.any(mask):
            raise InvalidArgumentError("no grid point inside the requested band")
        return FrequencyGrid(freqs_hz=self.freqs_hz[mask])


class ComplexResponse(BaseModel):
    """Complex transfer function (voltage ratio) sampled on a FrequencyGrid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: FrequencyGrid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _check_values(cls, value):
        arr = np.asarray(value)
        if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
            arr = arr[:, 0] + 1j * arr[:, 1]
        values = np.array(arr, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ValueError("response values must be finite")
        values.flags.writeable = False
        return values

    @model_validator(mode="after")
    def _check_length(self):
        if self.values.size != len(self.grid):
            raise ValueError(
                f"response has {self.values.size} values for {len(self.grid)} frequencies"
            )
        return self

    @field_serializer("values")
    def _dump_values(self, values: np.ndarray) -> list[list[float]]:
        return [[float(v.real), float(v.imag)] for v in values]

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def freqs_hz(self) -> np.ndarray:
        return self.grid.freqs_hz

    def magnitude_db(self) -> np.ndarray:
        return 20.0 * np.log10(np.maximum(np.abs(self.values), 1e-20))

    def phase_deg(self) -> np.ndarray:
        return np.degrees(np.angle(self.values))

    def restrict(self, center_hz: float, span_hz: float) -> "ComplexResponse":
        mask = self.grid.band_mask(center_hz, span_hz)
        if not np.any(mask):
            raise InvalidArgumentError("no grid point inside the requested band")
        return ComplexResponse(
            grid=FrequencyGrid(freqs_hz=self.grid.freqs_hz[mask]),
            values=self.values[mask],
        )


# ---------------------------------------------------------------------------
# ABCD two-ports
# ---------------------------------------------------------------------------


class AbcdMatrix(BaseModel):
    """Transmission matrix [[a, b], [c, d]]; b in ohms, c in siemens."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: complex
    b: complex
    c: complex
    d: complex

    @field_validator("a", "b", "c", "d", mode="before")
    @classmethod
    def _as_complex(cls, value):
        entry = complex(value)
        if not (math.isfinite(entry.real) and math.isfinite(entry.imag)):
            raise ValueError("ABCD entries must be finite")
        return entry

    @classmethod
    def identity(cls) -> "AbcdMatrix":
        return cls(a=1, b=0, c=0, d=1)

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> "AbcdMatrix":
        return cls(a=matrix[0, 0], b=matrix[0, 1], c=matrix[1, 0], d=matrix[1, 1])

    def to_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)


def _tline_array(beta_l_rad: float, z0_ohm: float) -> np.ndarray:
    cos_bl, sin_bl = math.cos(beta_l_rad), math.sin(beta_l_rad)
    return np.array(
        [[cos_bl, 1j * z0_ohm * sin_bl], [1j * sin_bl / z0_ohm, cos_bl]],
        dtype=complex,
    )


def _shunt_array(y_siemens) -> np.ndarray:
    """Shunt-admittance two-port; a vector of admittances gives a (K, 2, 2) stack."""
    y = np.asarray(y_siemens, dtype=complex)
    out = np.zeros(y.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = 1.0
    out[..., 1, 0] = y
    return out


def _cascade_arrays(matrices: list) -> np.ndarray:
    # matmul broadcasts (K, 2, 2) stacks against single (2, 2) sections
    return reduce(np.matmul, matrices)


def tline_abcd(beta_l_rad: float, z0_ohm: float) -> AbcdMatrix:
    """ABCD matrix of a lossless transmission line of electrical length beta*l."""
    if z0_ohm <= 0:
        raise InvalidArgumentError(f"characteristic impedance must be > 0, got {z0_ohm}")
    return AbcdMatrix.from_array(_tline_array(beta_l_rad, z0_ohm))


def shunt_abcd(y_siemens: complex) -> AbcdMatrix:
    """ABCD matrix of a shunt admittance."""
    return AbcdMatrix.from_array(_shunt_array(complex(y_siemens)))


def abcd_cascade(matrices: list[AbcdMatrix]) -> AbcdMatrix:
    """Left-to-right product of two-port ABCD matrices."""
    if not matrices:
        raise InvalidArgumentError("cascade needs at least one two-port")
    return AbcdMatrix.from_array(_cascade_arrays([m.to_array() for m in matrices]))


def tank_admittance(r_ohm: float, l_henry: float, c_farad, f_hz):
    """
    Admittance of a parallel RLC tank: 1/R + j*2*pi*f*C + 1/(j*2*pi*f*L).

    r_ohm may be math.inf for a lossless tank. c_farad and f_hz broadcast.

    Returns:
        Complex admittance in siemens (a numpy array for array input)
    """
    c = np.asarray(c_farad, dtype=float)
    f = np.asarray(f_hz, dtype=float)
    if r_ohm <= 0 or l_henry <= 0 or np.any(c <= 0):
        raise InvalidArgumentError("tank R, L and C must be > 0")
    if np.any(f <= 0):
        raise InvalidArgumentError("frequency must be > 0")
    omega = 2.0 * np.pi * f
    y = 1.0 / r_ohm + 1j * omega * c + 1.0 / (1j * omega * l_henry)
    if np.ndim(y) == 0:
        return complex(y)
    return y


# ---------------------------------------------------------------------------
# Canceller configurations
# ---------------------------------------------------------------------------


class CancellerFamily(str, Enum):
    """Canceller architectures that can be modeled and optimized."""
    PCB = "pcb"
    RFIC = "rfic"
    DELAY_LINE = "delay_line"
    AMP_PHASE = "amp_phase"


class PcbCircuitConstants(BaseModel):
    """Fixed circuit values of the PCB canceller and its BPF taps."""

    model_config = ConfigDict(frozen=True)

    l_f_henry: float = Field(default=1.65e-9, gt=0)
    l_q_henry: float = Field(default=2.85e-9, gt=0)
    r_f_ohm: float = Field(default_factory=calibrate_tank_resistance, gt=0)
    # also the source/load resistance R_S = R_L
    r_q_ohm: float = Field(default=50.0, gt=0)
    beta_l_rad: float = 1.37
    z0_ohm: float = Field(default=50.0, gt=0)
    a0_db: float = -4.1
    tau0_s: float = Field(default=4.2e-9, ge=0)
    c_fixed_farad: float = Field(default=FIXED_TANK_CAPACITANCE_F, ge=0)


class PcbTapConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    amp_db: float = Field(le=0.0, allow_inf_nan=False)
    phase_rad: float = Field(ge=-math.pi, le=math.pi)
    c_f_farad: float = Field(gt=0)
    c_q_farad: float = Field(gt=0)


class RficTapConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    amp_db: float = Field(allow_inf_nan=False)
    phase_rad: float = Field(ge=-math.pi, le=math.pi)
    fc_hz: float = Field(gt=0, allow_inf_nan=False)
    q: float = Field(gt=0, allow_inf_nan=False)


class DelayLineTap(BaseModel):
    model_config = ConfigDict(frozen=True)

    amp_linear: float = Field(ge=0, allow_inf_nan=False)
    tau_s: float = Field(ge=0, allow_inf_nan=False)
    phase_rad: float = Field(default=0.0, allow_inf_nan=False)


class PcbCanceller(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["pcb"] = "pcb"
    taps: list[PcbTapConfig] = Field(min_length=1)
    constants: PcbCircuitConstants = Field(default_factory=PcbCircuitConstants)

    @property
    def family(self) -> CancellerFamily:
        return CancellerFamily.PCB

    @property
    def m_taps(self) -> int:
        return len(self.taps)


class RficCanceller(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["rfic"] = "rfic"
    taps: list[RficTapConfig] = Field(min_length=1)

    @property
    def family(self) -> CancellerFamily:
        return CancellerFamily.RFIC

    @property
    def m_taps(self) -> int:
        return len(self.taps)


class DelayLineCanceller(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["delay_line"] = "delay_line"
    taps: list[DelayLineTap] = Field(min_length=1)

    @property
    def family(self) -> CancellerFamily:
        return CancellerFamily.DELAY_LINE

    @property
    def m_taps(self) -> int:
        return len(self.taps)


class AmpPhaseCanceller(BaseModel):
    """Single amplitude/phase tap; exact at one frequency only."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["amp_phase"] = "amp_phase"
    amp_linear: float = Field(ge=0, allow_inf_nan=False)
    phase_rad: float = Field(ge=-math.pi, le=math.pi)

    @property
    def family(self) -> CancellerFamily:
        return CancellerFamily.AMP_PHASE

    @property
    def m_taps(self) -> int:
        return 1


CancellerConfig = Annotated[
    Union[PcbCanceller, RficCanceller, DelayLineCanceller, AmpPhaseCanceller],
    Field(discriminator="kind"),
]

CANCELLER_ADAPTER = TypeAdapter(CancellerConfig)


# ---------------------------------------------------------------------------
# Vectorized tap evaluation (shared by the public models and the optimizer)
# ---------------------------------------------------------------------------


def pcb_bpf_mc(c_f_total, c_q, constants: PcbCircuitConstants, freqs) -> np.ndarray:
    """
    Closed-form M_C entry of the PCB BPF cascade; arguments broadcast.

    Expanding Y_Q . T . Y_F . T . Y_Q gives
        M_C = j sin(2bl) Z0 Y_F Y_Q + cos^2(bl) Y_F + 2 cos(2bl) Y_Q
              + j sin(2bl) / Z0 + j sin(2bl) Z0 Y_Q^2 - sin^2(bl) Z0^2 Y_F Y_Q^2
    """
    y_f = tank_admittance(constants.r_f_ohm, constants.l_f_henry, c_f_total, freqs)
    y_q = tank_admittance(constants.r_q_ohm, constants.l_q_henry, c_q, freqs)
    bl, z0 = constants.beta_l_rad, constants.z0_ohm
    sin_2bl = math.sin(2.0 * bl)
    return (
        1j * sin_2bl * z0 * y_f * y_q
        + math.cos(bl) ** 2 * y_f
        + 2.0 * math.cos(2.0 * bl) * y_q
        + 1j * sin_2bl / z0
        + 1j * sin_2bl * z0 * y_q**2
        - math.sin(bl) ** 2 * z0**2 * y_f * y_q**2
    )


def _check_mc(m_c: np.ndarray, freqs: np.ndarray) -> None:
    small = np.abs(m_c) < DEGENERACY_THRESHOLD_S
    if np.any(small):
        idx = np.unravel_index(int(np.argmax(small)), small.shape)
        f_bad = float(np.broadcast_to(freqs, small.shape)[idx])
        raise NumericDegeneracyError(
            f"singular BPF cascade (|M_C| < {DEGENERACY_THRESHOLD_S:g} S) at {f_bad:.6g} Hz",
            freq_hz=f_bad,
        )


def pcb_taps_values(amp_db, phase_rad, c_f, c_q, constants: PcbCircuitConstants, freqs) -> np.ndarray:
    """Sum of PCB tap responses, including the fixed loss and delay, shape (K,)."""
    amp = db_to_linear(amp_db)[:, None]
    phase = np.asarray(phase_rad, dtype=float)[:, None]
    c_f_total = constants.c_fixed_farad + np.asarray(c_f, dtype=float)[:, None]
    m_c = pcb_bpf_mc(c_f_total, np.asarray(c_q, dtype=float)[:, None], constants, freqs[None, :])
    _check_mc(m_c, freqs[None, :])
    h_b = 1.0 / (constants.r_q_ohm * m_c)
    common = db_to_linear(constants.a0_db) * np.exp(-2j * np.pi * freqs * constants.tau0_s)
    return common * np.sum(amp * np.exp(-1j * phase) * h_b, axis=0)


def rfic_taps_values(amp_db, phase_rad, fc_hz, q, freqs) -> np.ndarray:
    amp = db_to_linear(amp_db)[:, None]
    phase = np.asarray(phase_rad, dtype=float)[:, None]
    fc = np.asarray(fc_hz, dtype=float)[:, None]
    qf = np.asarray(q, dtype=float)[:, None]
    f = freqs[None, :]
    taps = amp * np.exp(-1j * phase) / (1.0 - 1j * qf * (fc / f - f / fc))
    return np.sum(taps, axis=0)


def delay_line_values(amp_linear, tau_s, phase_rad, freqs) -> np.ndarray:
    amp = np.asarray(amp_linear, dtype=float)[:, None]
    tau = np.asarray(tau_s, dtype=float)[:, None]
    phase = np.asarray(phase_rad, dtype=float)[:, None]
    return np.sum(amp * np.exp(-1j * (2.0 * np.pi * freqs[None, :] * tau + phase)), axis=0)


# ---------------------------------------------------------------------------
# Public model evaluation
# ---------------------------------------------------------------------------


def pcb_bpf_response(tap: PcbTapConfig, constants: PcbCircuitConstants, grid: FrequencyGrid) -> ComplexResponse:
    """Closed-form PCB BPF response 1 / (R_S * M_C); amplitude/phase controls ignored."""
    freqs = grid.freqs_hz
    m_c = pcb_bpf_mc(constants.c_fixed_farad + tap.c_f_farad, tap.c_q_farad, constants, freqs)
    _check_mc(m_c, freqs)
    return ComplexResponse(grid=grid, values=1.0 / (constants.r_q_ohm * m_c))


def pcb_bpf_response_abcd(tap: PcbTapConfig, constants: PcbCircuitConstants, grid: FrequencyGrid) -> ComplexResponse:
    """PCB BPF response from the explicit Y_Q, T-line, Y_F, T-line, Y_Q cascade."""
    freqs = grid.freqs_hz
    y_f = tank_admittance(
        constants.r_f_ohm, constants.l_f_henry, constants.c_fixed_farad + tap.c_f_farad, freqs
    )
    y_q = tank_admittance(constants.r_q_ohm, constants.l_q_henry, tap.c_q_farad, freqs)
    tline = _tline_array(constants.beta_l_rad, constants.z0_ohm)
    shunt_q = _shunt_array(y_q)
    cascade = _cascade_arrays([shunt_q, tline, _shunt_array(y_f), tline, shunt_q])
    m_c = cascade[:, 1, 0]
    _check_mc(m_c, freqs)
    return ComplexResponse(grid=grid, values=1.0 / (constants.r_q_ohm * m_c))


def pcb_canceller_response(config: PcbCanceller, grid: FrequencyGrid) -> ComplexResponse:
    taps = config.taps
    values = pcb_taps_values(
        np.array([t.amp_db for t in taps]),
        np.array([t.phase_rad for t in taps]),
        np.array([t.c_f_farad for t in taps]),
        np.array([t.c_q_farad for t in taps]),
        config.constants,
        grid.freqs_hz,
    )
    return ComplexResponse(grid=grid, values=values)


def rfic_canceller_response(config: RficCanceller, grid: FrequencyGrid) -> ComplexResponse:
    taps = config.taps
    values = rfic_taps_values(
        np.array([t.amp_db for t in taps]),
        np.array([t.phase_rad for t in taps]),
        np.array([t.fc_hz for t in taps]),
        np.array([t.q for t in taps]),
        grid.freqs_hz,
    )
    return ComplexResponse(grid=grid, values=values)


def delay_line_response(config: DelayLineCanceller, grid: FrequencyGrid) -> ComplexResponse:
    taps = config.taps
    values = delay_line_values(
        np.array([t.amp_linear for t in taps]),
        np.array([t.tau_s for t in taps]),
        np.array([t.phase_rad for t in taps]),
        grid.freqs_hz,
    )
    return ComplexResponse(grid=grid, values=values)


def amp_phase_response(amp_linear: float, phase_rad: float, grid: FrequencyGrid) -> ComplexResponse:
    if amp_linear < 0:
        raise InvalidArgumentError("amplitude must be >= 0")
    value = amp_linear * np.exp(-1j * phase_rad)
    return ComplexResponse(grid=grid, values=np.full(len(grid), value, dtype=complex))


def canceller_response(config, grid: FrequencyGrid) -> ComplexResponse:
    """Evaluate any canceller configuration on a grid."""
    if isinstance(config, PcbCanceller):
        return pcb_canceller_response(config, grid)
    if isinstance(config, RficCanceller):
        return rfic_canceller_response(config, grid)
    if isinstance(config, DelayLineCanceller):
        return delay_line_response(config, grid)
    if isinstance(config, AmpPhaseCanceller):
        return amp_phase_response(config.amp_linear, config.phase_rad, grid)
    raise InvalidArgumentError(f"unknown canceller configuration: {type(config).__name__}")


# ---------------------------------------------------------------------------
# Measurable BPF properties
# ---------------------------------------------------------------------------


def extract_center_and_q(response: ComplexResponse) -> tuple[float, float]:
    """
    Center frequency and quality factor of a bandpass response.

    The center is the grid point with the highest amplitude (lowest
    frequency on ties). Q is the center over the 3 dB bandwidth, with both
    -3 dB crossings linearly interpolated in dB between grid points.

    Returns:
        (fc_hz, q)
    """
    if len(response) < 3:
        raise BandTooNarrowError("need at least three grid points to find a 3 dB band")
    freqs = response.freqs_hz
    mag_db = response.magnitude_db()
    peak = int(np.argmax(mag_db))
    threshold = mag_db[peak] - 3.0

    left = np.nonzero(mag_db[:peak] < threshold)[0]
    right = np.nonzero(mag_db[peak + 1:] < threshold)[0]
    if left.size == 0 or right.size == 0:
        raise BandTooNarrowError(
            f"no -3 dB crossing on both sides of the peak at {freqs[peak]:.6g} Hz"
        )

    i = int(left[-1])
    f_lo = _crossing(freqs[i], freqs[i + 1], mag_db[i], mag_db[i + 1], threshold)
    j = peak + 1 + int(right[0])
    f_hi = _crossing(freqs[j - 1], freqs[j], mag_db[j - 1], mag_db[j], threshold)

    fc = float(freqs[peak])
    return fc, fc / (f_hi - f_lo)


def _crossing(f0: float, f1: float, y0: float, y1: float, level: float) -> float:
    if y1 == y0:
        return 0.5 * (f0 + f1)
    return float(f0 + (level - y0) * (f1 - f0) / (y1 - y0))


def tuning_corner_taps(
    c_f_range: tuple[float, float] = PCB_C_F_RANGE_F,
    c_q_range: tuple[float, float] = PCB_C_Q_RANGE_F,
) -> dict[str, PcbTapConfig]:
    """
    The four (C_F, C_Q) corners of the PCB BPF tuning range.

    Ordered: (min, min), (max, min), (min, max), (max, max). With the
    default constants C_F trims the peak by some tens of MHz while C_Q
    moves it by more than a GHz and raises Q as it grows.
    """
    c_f_min, c_f_max = c_f_range
    c_q_min, c_q_max = c_q_range
    corners = {
        "cfmin-cqmin": (c_f_min, c_q_min),
        "cfmax-cqmin": (c_f_max, c_q_min),
        "cfmin-cqmax": (c_f_min, c_q_max),
        "cfmax-cqmax": (c_f_max, c_q_max),
    }
    return {
        label: PcbTapConfig(amp_db=0.0, phase_rad=0.0, c_f_farad=c_f, c_q_farad=c_q)
        for label, (c_f, c_q) in corners.items()
    }


def span_of_centers(
    constants: Optional[PcbCircuitConstants] = None,
    grid: Optional[FrequencyGrid] = None,
    c_q_farad: float = PCB_C_Q_RANGE_F[0],
) -> float:
    """Peak-frequency span of the PCB BPF over the full C_F range (diagnostic)."""
    constants = constants or PcbCircuitConstants()
    grid = grid or FrequencyGrid.uniform(MODEL_GRID_START_HZ, MODEL_GRID_STOP_HZ, MODEL_GRID_POINTS)
    centers = []
    for c_f in PCB_C_F_RANGE_F:
        tap = PcbTapConfig(amp_db=0.0, phase_rad=0.0, c_f_farad=c_f, c_q_farad=c_q_farad)
        response = pcb_bpf_response(tap, constants, grid)
        centers.append(float(grid.freqs_hz[int(np.argmax(np.abs(response.values)))]))
    return abs(centers[0] - centers[1])
