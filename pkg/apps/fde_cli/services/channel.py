import logging
from typing import Optional

from fdesic.rfmodel import ComplexResponse, FrequencyGrid
from fdesic.sichan import SiChannelSpec, benchmark_channel, load_channel_csv, synth_si_channel

from fde_cli.models.run_config import ChannelConfig

logger = logging.getLogger(__name__)


def load_channel(cfg: ChannelConfig) -> ComplexResponse:
    """SI channel described by the config: a CSV file, a seeded draw, or the benchmark."""
    if cfg.file is not None:
        logger.info("channel: %s", cfg.file)
        return load_channel_csv(cfg.file)
    grid = FrequencyGrid.spaced(cfg.center_hz, cfg.span_hz, cfg.spacing_hz)
    if cfg.seed is None:
        logger.info("channel: benchmark, %d points", len(grid))
        return benchmark_channel(grid)
    spec = SiChannelSpec.random(
        grid,
        n_paths=cfg.n_paths,
        seed=cfg.seed,
        max_delay_s=cfg.max_delay_s,
        amp_spread_db=cfg.amp_spread_db,
        target_isolation_db=cfg.target_isolation_db,
    )
    logger.info("channel: %d-path draw with seed %d, %d points", cfg.n_paths, cfg.seed, len(grid))
    return synth_si_channel(spec)


def restrict_band(h_si: ComplexResponse, bandwidth_mhz: Optional[float]) -> ComplexResponse:
    if bandwidth_mhz is None:
        return h_si
    return h_si.restrict(h_si.grid.center_hz, bandwidth_mhz * 1e6)
