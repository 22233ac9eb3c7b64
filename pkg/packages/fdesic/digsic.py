"""
Baseband digital SIC on synthetic OFDM streams.

- gen_ofdm: unit-power OFDM with a cyclic prefix
- apply_residual_si: PA nonlinearity, residual RF channel and receiver noise
- fit_digital_canceller: least-squares memory polynomial (odd orders only)
- write_iq / read_iq: interleaved little-endian float64 IQ files
"""

import logging
import math
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator
from sklearn.linear_model import LinearRegression, Ridge

from .errors import InvalidArgumentError, IqFormatError
from .rfmodel import ComplexResponse, active_subcarriers

logger = logging.getLogger(__name__)

IQ_MAGIC = b"FDEIQ001"
OVERLAP_SAVE_FFT = 256
MAX_SIC_DB = 200.0
# training block length relative to the coefficient count
MIN_SAMPLES_PER_COEFFICIENT = 10


class Constellation(str, Enum):
    BPSK = "bpsk"
    QPSK = "qpsk"
    QAM16 = "16qam"
    QAM64 = "64qam"


def constellation_points(constellation: Constellation) -> np.ndarray:
    """Unit average power symbol alphabet."""
    constellation = Constellation(constellation)
    if constellation == Constellation.BPSK:
        return np.array([-1.0, 1.0], dtype=complex)
    side = {Constellation.QPSK: 2, Constellation.QAM16: 4, Constellation.QAM64: 8}[constellation]
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    points = (levels[:, None] + 1j * levels[None, :]).reshape(-1)
    return points / np.sqrt(np.mean(np.abs(points) ** 2))


class OfdmParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_subcarriers: int = Field(default=64, ge=2)
    cp_len: int = Field(default=16, ge=0)
    n_active: int = Field(default=52, ge=1)
    sample_rate_hz: float = Field(default=20e6, gt=0)
    constellation: Constellation = Constellation.QPSK

    @model_validator(mode="after")
    def _check(self):
        if self.cp_len >= self.n_subcarriers:
            raise ValueError("cp_len must be < n_subcarriers")
        if self.n_active > self.n_subcarriers - 1:
            raise ValueError("n_active must be <= n_subcarriers - 1")
        return self

    @property
    def symbol_len(self) -> int:
        return self.n_subcarriers + self.cp_len

    @property
    def subcarrier_spacing_hz(self) -> float:
        return self.sample_rate_hz / self.n_subcarriers

    def active_bins(self) -> np.ndarray:
        """Signed active subcarrier indices."""
        return active_subcarriers(self.n_subcarriers, self.n_active)


def power(x: np.ndarray) -> float:
    return float(np.mean(np.abs(x) ** 2))


def power_db(x: np.ndarray) -> float:
    p = power(x)
    return 10.0 * math.log10(p) if p > 0 else -math.inf


def gen_ofdm(params: OfdmParams, n_symbols: int, seed: int = 0) -> np.ndarray:
    """
    Random-data OFDM stream, CP prepended to every symbol.

    Only the active bins carry symbols. The stream is scaled to an average
    power of exactly 1.
    """
    if n_symbols < 1:
        raise InvalidArgumentError("n_symbols must be >= 1")
    rng = np.random.default_rng(seed)
    points = constellation_points(params.constellation)
    n = params.n_subcarriers

    freq = np.zeros((n_symbols, n), dtype=complex)
    freq[:, params.active_bins() % n] = points[rng.integers(0, points.size, (n_symbols, params.n_active))]
    time_symbols = np.fft.ifft(freq, axis=1)
    stream = np.concatenate([time_symbols[:, n - params.cp_len:], time_symbols], axis=1).reshape(-1)
    return stream / math.sqrt(power(stream))


class PaModel(BaseModel):
    """
    Static odd-order power-amplifier model y = sum_p c_p x |x|^(p-1).

    coeffs[i] = (re, im) of the coefficient for order 2i+1.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    coeffs: list[tuple[float, float]] = Field(default_factory=lambda: [(1.0, 0.0)], min_length=1, max_length=4)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        magnitude = np.abs(x)
        out = np.zeros_like(x)
        for i, (re, im) in enumerate(self.coeffs):
            out += complex(re, im) * x * magnitude ** (2 * i)
        return out


def _overlap_save(x: np.ndarray, h: np.ndarray, n_fft: int = OVERLAP_SAVE_FFT) -> np.ndarray:
    """Full linear convolution x * h computed block-wise in the frequency domain."""
    m = h.size
    while n_fft < 2 * m:
        n_fft *= 2
    step = n_fft - (m - 1)
    out_len = x.size + m - 1
    padded = np.concatenate([np.zeros(m - 1, dtype=complex), x, np.zeros(n_fft + step, dtype=complex)])
    n_blocks = -(-out_len // step)
    blocks = sliding_window_view(padded, n_fft)[::step][:n_blocks]
    filtered = np.fft.ifft(np.fft.fft(blocks, axis=1) * np.fft.fft(h, n_fft)[None, :], axis=1)
    return filtered[:, m - 1:].reshape(-1)[:out_len]


def residual_fir(h_res: ComplexResponse, params: OfdmParams, center_hz: Optional[float] = None) -> np.ndarray:
    """
    n_subcarriers-tap FIR whose DFT matches h_res at the baseband bins.

    h_res is linearly interpolated onto the bin frequencies around
    center_hz (the grid center by default) and the impulse response is
    rotated by n_subcarriers // 2 samples to make it causal.
    """
    center_hz = h_res.grid.center_hz if center_hz is None else center_hz
    n = params.n_subcarriers
    spacing = params.subcarrier_spacing_hz
    active = center_hz + params.active_bins() * spacing
    freqs = h_res.freqs_hz
    tol = 1e-9 * spacing
    if active[0] < freqs[0] - tol or active[-1] > freqs[-1] + tol:
        raise InvalidArgumentError(
            f"channel grid [{freqs[0]:.6g}, {freqs[-1]:.6g}] Hz does not cover the signal band "
            f"[{active[0]:.6g}, {active[-1]:.6g}] Hz"
        )
    bin_freqs = center_hz + np.fft.fftfreq(n, d=1.0 / params.sample_rate_hz)
    values = np.interp(bin_freqs, freqs, h_res.values.real) + 1j * np.interp(bin_freqs, freqs, h_res.values.imag)
    return np.roll(np.fft.ifft(values), n // 2)


def apply_residual_si(
    tx: np.ndarray,
    h_res: ComplexResponse,
    pa: Optional[PaModel] = None,
    noise_floor_db: Optional[float] = None,
    params: Optional[OfdmParams] = None,
    seed: int = 0,
    center_hz: Optional[float] = None,
) -> np.ndarray:
    """
    Received residual SI for a transmitted stream.

    tx passes through the PA model, then the residual RF channel (applied
    by overlap-save with the FIR delay removed), then white complex noise
    at noise_floor_db relative to unit TX power. None disables the noise.
    """
    params = params or OfdmParams()
    tx = np.asarray(tx, dtype=complex)
    fir = residual_fir(h_res, params, center_hz)
    distorted = pa.apply(tx) if pa is not None else tx
    delay = params.n_subcarriers // 2
    rx = _overlap_save(distorted, fir)[delay:delay + tx.size]
    if noise_floor_db is not None:
        rng = np.random.default_rng(seed)
        sigma = math.sqrt(10.0 ** (noise_floor_db / 10.0) / 2.0)
        rx = rx + sigma * (rng.standard_normal(tx.size) + 1j * rng.standard_normal(tx.size))
    return rx


class MemPolySpec(BaseModel):
    """
    Memory polynomial structure: odd orders 1..max_odd_order, lags
    -pre_cursor .. memory_depth - 1 for every order.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_odd_order: int = Field(default=7, ge=1, le=7)
    memory_depth: int = Field(default=5, ge=1)
    pre_cursor: int = Field(default=0, ge=0)
    regularization: float = Field(default=0.0, ge=0)

    @field_validator("max_odd_order")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("max_odd_order must be odd")
        return value

    @property
    def orders(self) -> list[int]:
        return list(range(1, self.max_odd_order + 1, 2))

    @property
    def lags(self) -> list[int]:
        return list(range(-self.pre_cursor, self.memory_depth))

    @property
    def n_coefficients(self) -> int:
        return len(self.orders) * len(self.lags)


def _shift(x: np.ndarray, lag: int) -> np.ndarray:
    """x[n - lag] with zeros outside the block."""
    out = np.zeros_like(x)
    if lag >= 0:
        out[lag:] = x[:x.size - lag]
    else:
        out[:lag] = x[-lag:]
    return out


def regressors(tx: np.ndarray, spec: MemPolySpec) -> np.ndarray:
    """Columns x[n-m] |x[n-m]|^(p-1), order-major."""
    columns = []
    for p in spec.orders:
        basis = tx * np.abs(tx) ** (p - 1)
        columns.extend(_shift(basis, lag) for lag in spec.lags)
    return np.stack(columns, axis=1)


class DigitalFit(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: MemPolySpec
    # shape (n_orders, n_lags)
    coefficients: np.ndarray
    achieved_digital_sic_db: float
    rank: int
    rank_deficient: bool

    @field_serializer("coefficients")
    def _dump_coefficients(self, coefficients: np.ndarray) -> list[list[list[float]]]:
        return [[[float(c.real), float(c.imag)] for c in row] for row in coefficients]

    def predict(self, tx: np.ndarray) -> np.ndarray:
        return regressors(np.asarray(tx, dtype=complex), self.spec) @ self.coefficients.reshape(-1)

    def cancel(self, tx: np.ndarray, rx: np.ndarray) -> np.ndarray:
        return np.asarray(rx, dtype=complex) - self.predict(tx)


def sic_db(before: np.ndarray, after: np.ndarray) -> float:
    """10*log10(P(before) / P(after)), capped at MAX_SIC_DB."""
    p_before, p_after = power(before), power(after)
    if p_before <= 0:
        raise InvalidArgumentError("received block has zero power")
    if p_after <= 0:
        return MAX_SIC_DB
    return min(10.0 * math.log10(p_before / p_after), MAX_SIC_DB)


def fit_digital_canceller(tx: np.ndarray, rx: np.ndarray, spec: MemPolySpec) -> DigitalFit:
    """
    Least-squares memory polynomial predicting rx from tx.

    The complex problem is solved as a real one of twice the size. Without
    regularization the solution is the minimum-norm one and a rank-deficient
    regressor matrix is flagged; with regularization a ridge penalty is used.
    """
    tx = np.asarray(tx, dtype=complex).reshape(-1)
    rx = np.asarray(rx, dtype=complex).reshape(-1)
    if tx.size != rx.size:
        raise InvalidArgumentError(f"tx has {tx.size} samples, rx has {rx.size}")
    n_coeff = spec.n_coefficients
    if tx.size < MIN_SAMPLES_PER_COEFFICIENT * n_coeff:
        raise InvalidArgumentError(
            f"need at least {MIN_SAMPLES_PER_COEFFICIENT * n_coeff} samples for {n_coeff} coefficients"
        )

    phi = regressors(tx, spec)
    stacked = np.block([[phi.real, -phi.imag], [phi.imag, phi.real]])
    target = np.concatenate([rx.real, rx.imag])

    if spec.regularization > 0:
        solver = Ridge(alpha=spec.regularization, fit_intercept=False).fit(stacked, target)
        rank = int(np.linalg.matrix_rank(stacked))
    else:
        solver = LinearRegression(fit_intercept=False).fit(stacked, target)
        rank = int(solver.rank_)
    weights = np.asarray(solver.coef_, dtype=float).reshape(-1)
    coefficients = weights[:n_coeff] + 1j * weights[n_coeff:]

    achieved = sic_db(rx, rx - phi @ coefficients)
    rank_deficient = rank < 2 * n_coeff
    if rank_deficient:
        logger.warning("regressor matrix has rank %d of %d; using the minimum-norm fit", rank, 2 * n_coeff)
    logger.debug("digital canceller: %d coefficients, %.2f dB", n_coeff, achieved)
    return DigitalFit(
        spec=spec,
        coefficients=coefficients.reshape(len(spec.orders), len(spec.lags)),
        achieved_digital_sic_db=achieved,
        rank=rank,
        rank_deficient=rank_deficient,
    )


def write_iq(path: Union[str, Path], samples: np.ndarray) -> None:
    """Magic header then interleaved little-endian float64 (re, im) pairs."""
    data = np.asarray(samples, dtype=complex).reshape(-1)
    interleaved = np.empty(2 * data.size, dtype="<f8")
    interleaved[0::2] = data.real
    interleaved[1::2] = data.imag
    with open(path, "wb") as f:
        f.write(IQ_MAGIC)
        f.write(interleaved.tobytes())


def read_iq(path: Union[str, Path]) -> np.ndarray:
    with open(path, "rb") as f:
        raw = f.read()
    if raw[:len(IQ_MAGIC)] != IQ_MAGIC:
        raise IqFormatError(f"{path}: missing {IQ_MAGIC.decode()} header")
    payload = raw[len(IQ_MAGIC):]
    if len(payload) % 16:
        raise IqFormatError(f"{path}: payload of {len(payload)} bytes is not a whole number of IQ pairs")
    values = np.frombuffer(payload, dtype="<f8")
    return values[0::2] + 1j * values[1::2]
