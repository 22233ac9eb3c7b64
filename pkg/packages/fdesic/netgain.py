"""
Closed-form throughput of half-duplex (HD) and full-duplex (FD) networks.

All SNR/INR arguments are linear power ratios; use `db_to_ratio` at the
boundary. Rates follow Shannon capacity B*log2(1 + SINR) with equal-time
TDMA sharing for every HD baseline.
"""

import math
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InvalidArgumentError


DEFAULT_BANDWIDTH_HZ = 20e6
# residual self-interference at the noise floor
DEFAULT_GAMMA_SELF = 1.0


def db_to_ratio(db):
    """Power dB to linear ratio (factor 10)."""
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


class GainScenario(BaseModel):
    """
    Link budget of a network scenario.

    gamma_ul/gamma_dl/gamma_iui describe the UL-DL network; snrs and
    fd_mask describe per-user links of the TDMA (3-node, n-user) networks.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    bandwidth_hz: float = Field(default=DEFAULT_BANDWIDTH_HZ, gt=0)
    gamma_ul: float = Field(default=0.0, ge=0)
    gamma_dl: float = Field(default=0.0, ge=0)
    gamma_iui: float = Field(default=0.0, ge=0)
    gamma_self: float = Field(default=DEFAULT_GAMMA_SELF, ge=0)
    snrs: list[float] = Field(default_factory=list)
    fd_mask: list[bool] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_users(self):
        if any(not (g >= 0) for g in self.snrs):
            raise ValueError("per-user SNRs must be >= 0")
        if self.fd_mask and len(self.fd_mask) != len(self.snrs):
            raise ValueError(f"fd_mask has {len(self.fd_mask)} entries for {len(self.snrs)} users")
        return self


class UlDlThroughput(BaseModel):
    model_config = ConfigDict(frozen=True)

    r_hd: float
    r_fd: float
    # None when the HD throughput is zero
    gain: Optional[float]


class ThreeNodeThroughput(BaseModel):
    model_config = ConfigDict(frozen=True)

    r_hd: float
    r_user1_fd: float
    r_user2_fd: float
    r_both_fd: float
    gain_user1_fd: Optional[float]
    gain_user2_fd: Optional[float]
    gain_both_fd: Optional[float]
    jfi_hd: Optional[float]
    jfi_both_fd: Optional[float]


def shannon_rate(bandwidth_hz, gamma_linear):
    """B * log2(1 + gamma) in bits/s; arrays broadcast."""
    gamma = np.asarray(gamma_linear, dtype=float)
    if np.any(np.isnan(gamma)) or np.any(gamma < 0):
        raise InvalidArgumentError("SNR must be >= 0")
    if np.any(np.asarray(bandwidth_hz, dtype=float) < 0):
        raise InvalidArgumentError("bandwidth must be >= 0")
    rate = bandwidth_hz * np.log2(1.0 + gamma)
    if np.ndim(rate) == 0:
        return float(rate)
    return rate


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    if denominator <= 0:
        return None
    return numerator / denominator


def uldl_throughputs(s: GainScenario) -> UlDlThroughput:
    """
    One FD access point serving an UL and a DL user.

    HD shares time between the links; FD runs both at once, with the UL
    degraded by residual self-interference and the DL by inter-user
    interference.
    """
    b = s.bandwidth_hz
    r_hd = 0.5 * shannon_rate(b, s.gamma_ul) + 0.5 * shannon_rate(b, s.gamma_dl)
    r_fd = shannon_rate(b, s.gamma_ul / (1.0 + s.gamma_self)) + shannon_rate(b, s.gamma_dl / (1.0 + s.gamma_iui))
    return UlDlThroughput(r_hd=r_hd, r_fd=r_fd, gain=_ratio(r_fd, r_hd))


def tdma_user_rates(
    snrs: Sequence[float],
    fd_mask: Sequence[bool],
    gamma_self: float = DEFAULT_GAMMA_SELF,
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ,
) -> np.ndarray:
    """
    Per-user throughput under equal-time TDMA.

    In its 1/n share an FD user sends and receives at once, each direction
    at SINR gamma / (1 + gamma_self); an HD user gets one link at gamma.
    """
    snrs = np.asarray(snrs, dtype=float)
    fd = np.asarray(fd_mask, dtype=bool)
    if snrs.size == 0:
        raise InvalidArgumentError("at least one user is required")
    if fd.shape != snrs.shape:
        raise InvalidArgumentError(f"fd_mask has {fd.size} entries for {snrs.size} users")
    share = bandwidth_hz / snrs.size
    fd_rate = 2.0 * shannon_rate(share, snrs / (1.0 + gamma_self))
    hd_rate = shannon_rate(share, snrs)
    return np.where(fd, fd_rate, hd_rate)


def tdma_network_throughput(
    snrs: Sequence[float],
    fd_mask: Sequence[bool],
    gamma_self: float = DEFAULT_GAMMA_SELF,
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ,
) -> float:
    return float(np.sum(tdma_user_rates(snrs, fd_mask, gamma_self, bandwidth_hz)))


def jains_fairness(rates: Sequence[float]) -> float:
    """(sum r)^2 / (n * sum r^2); 1 is perfectly fair, 1/n the worst case."""
    r = np.asarray(rates, dtype=float)
    if r.size == 0:
        raise InvalidArgumentError("need at least one rate")
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise InvalidArgumentError("rates must be finite and >= 0")
    total_sq = float(np.sum(r**2))
    if total_sq == 0.0:
        raise InvalidArgumentError("fairness is undefined when every rate is zero")
    return float(np.sum(r)) ** 2 / (r.size * total_sq)


def _fairness_or_none(rates) -> Optional[float]:
    if not np.any(np.asarray(rates) > 0):
        return None
    return jains_fairness(rates)


def three_node_throughputs(s: GainScenario) -> ThreeNodeThroughput:
    """
    Two users behind one FD access point with TDMA: all-HD, either user FD,
    and both users FD. Needs exactly two entries in s.snrs.
    """
    if len(s.snrs) != 2:
        raise InvalidArgumentError(f"the 3-node network needs 2 user SNRs, got {len(s.snrs)}")
    args = (s.gamma_self, s.bandwidth_hz)
    hd_rates = tdma_user_rates(s.snrs, [False, False], *args)
    both_rates = tdma_user_rates(s.snrs, [True, True], *args)
    r_hd = float(np.sum(hd_rates))
    r_user1 = tdma_network_throughput(s.snrs, [True, False], *args)
    r_user2 = tdma_network_throughput(s.snrs, [False, True], *args)
    r_both = float(np.sum(both_rates))
    return ThreeNodeThroughput(
        r_hd=r_hd,
        r_user1_fd=r_user1,
        r_user2_fd=r_user2,
        r_both_fd=r_both,
        gain_user1_fd=_ratio(r_user1, r_hd),
        gain_user2_fd=_ratio(r_user2, r_hd),
        gain_both_fd=_ratio(r_both, r_hd),
        jfi_hd=_fairness_or_none(hd_rates),
        jfi_both_fd=_fairness_or_none(both_rates),
    )


# ---------------------------------------------------------------------------
# Surfaces
# ---------------------------------------------------------------------------


class SurfaceKind(str, Enum):
    # x = gamma_DL, y = gamma_IUI
    ULDL = "uldl"
    # x = gamma_1, y = gamma_2, both users FD
    THREE_NODE = "three_node"


class AxisSpec(BaseModel):
    """Evenly spaced axis in dB."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    start_db: float
    stop_db: float
    n_points: int = Field(default=21, ge=1)

    def values_db(self) -> np.ndarray:
        return np.linspace(self.start_db, self.stop_db, self.n_points)

    def values(self) -> np.ndarray:
        return db_to_ratio(self.values_db())


class GainSurface(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: SurfaceKind
    x_db: list[float]
    y_db: list[float]
    # gain[i][j] at (x_db[i], y_db[j]); None where the HD rate is zero
    gain: list[list[Optional[float]]]

    def rows(self) -> list[tuple[float, float, Optional[float]]]:
        return [
            (x, y, self.gain[i][j])
            for i, x in enumerate(self.x_db)
            for j, y in enumerate(self.y_db)
        ]


def gain_surface(kind: SurfaceKind, x_axis: AxisSpec, y_axis: AxisSpec, base: GainScenario) -> GainSurface:
    """
    FD gain tabulated over two SNR/INR axes.

    ULDL keeps base.gamma_ul and base.gamma_self fixed; THREE_NODE keeps
    base.gamma_self fixed. Bandwidth cancels in every gain.
    """
    kind = SurfaceKind(kind)
    x = x_axis.values()[:, None]
    y = y_axis.values()[None, :]
    b, g_self = base.bandwidth_hz, base.gamma_self
    if kind == SurfaceKind.ULDL:
        r_hd = 0.5 * shannon_rate(b, base.gamma_ul) + 0.5 * shannon_rate(b, x) + 0.0 * y
        r_fd = shannon_rate(b, base.gamma_ul / (1.0 + g_self)) + shannon_rate(b, x / (1.0 + y))
    else:
        r_hd = 0.5 * shannon_rate(b, x) + 0.5 * shannon_rate(b, y)
        r_fd = shannon_rate(b, x / (1.0 + g_self)) + shannon_rate(b, y / (1.0 + g_self))
    with np.errstate(invalid="ignore", divide="ignore"):
        gain = np.where(r_hd > 0, r_fd / np.where(r_hd > 0, r_hd, 1.0), np.nan)
    return GainSurface(
        kind=kind,
        x_db=x_axis.values_db().tolist(),
        y_db=y_axis.values_db().tolist(),
        gain=[[None if math.isnan(g) else float(g) for g in row] for row in gain],
    )


class UlDlSummaryRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma_ul_db: float
    mean_gain: float
    min_gain: float
    max_gain: float


class UlDlSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: list[UlDlSummaryRow]
    # gain strictly decreasing in gamma_UL at every (gamma_DL, gamma_IUI) point
    ordering_holds: bool


def uldl_gain_summary(
    gamma_ul_db: Sequence[float],
    dl_axis: AxisSpec,
    iui_axis: AxisSpec,
    gamma_self: float = DEFAULT_GAMMA_SELF,
) -> UlDlSummary:
    """UL-DL gain statistics over a (gamma_DL, gamma_IUI) grid for each UL SNR."""
    if not gamma_ul_db:
        raise InvalidArgumentError("need at least one UL SNR")
    surfaces = []
    rows = []
    for ul_db in gamma_ul_db:
        base = GainScenario(gamma_ul=float(db_to_ratio(ul_db)), gamma_self=gamma_self)
        surface = gain_surface(SurfaceKind.ULDL, dl_axis, iui_axis, base)
        values = np.array([[np.nan if g is None else g for g in row] for row in surface.gain])
        surfaces.append(values)
        rows.append(UlDlSummaryRow(
            gamma_ul_db=float(ul_db),
            mean_gain=float(np.nanmean(values)),
            min_gain=float(np.nanmin(values)),
            max_gain=float(np.nanmax(values)),
        ))
    order = np.argsort(gamma_ul_db, kind="stable")
    ordering_holds = all(
        bool(np.all(surfaces[order[k]] > surfaces[order[k + 1]]))
        for k in range(len(order) - 1)
    )
    return UlDlSummary(rows=rows, ordering_holds=ordering_holds)
