import logging

from fdesic.cancopt import configure_canceller
from fdesic.digsic import apply_residual_si, fit_digital_canceller, gen_ofdm, power_db, write_iq
from fdesic.rfmodel import canceller_response
from fdesic.sichan import residual

from fde_cli.models.reports import DigsicReport
from fde_cli.services.channel import load_channel, restrict_band
from fde_cli.services.context import RunContext
from fde_cli.services.output import write_json

logger = logging.getLogger(__name__)

POWER_FLOOR_DB = -300.0
# residual after digital SIC within this much of the floor counts as noise-limited
NOISE_LIMIT_MARGIN_DB = 1.0


def run_digsic(ctx: RunContext) -> DigsicReport:
    """
    RF canceller followed by the digital canceller on an OFDM stream.

    Powers are relative to the TX power, which is normalized to 1 in the
    baseband stream and corresponds to tx_power_dbm.
    """
    section = ctx.config.digsic
    h_si = restrict_band(load_channel(ctx.config.channel), section.bandwidth_mhz)
    rf = configure_canceller(
        section.family,
        section.m_taps,
        h_si,
        ctx.config.constraint_set(section.family),
        ctx.solver_options(),
        quantize=section.quantize,
    )
    h_res = residual(h_si, canceller_response(rf.best_config, h_si.grid))

    noise_floor_db = None
    if section.noise_floor_dbm is not None:
        noise_floor_db = section.noise_floor_dbm - section.tx_power_dbm

    tx = gen_ofdm(section.ofdm, section.n_symbols, ctx.seed)
    si = apply_residual_si(tx, h_res, section.pa, None, section.ofdm)
    rx = apply_residual_si(tx, h_res, section.pa, noise_floor_db, section.ofdm, seed=ctx.seed)
    fit = fit_digital_canceller(tx, rx, section.mempoly)
    cancelled = fit.cancel(tx, rx)

    residual_si_db = max(power_db(si), POWER_FLOOR_DB)
    after_db = max(power_db(cancelled), POWER_FLOOR_DB)
    noise_limited = noise_floor_db is not None and after_db - noise_floor_db <= NOISE_LIMIT_MARGIN_DB
    rf_sic_db = rf.metrics.mean_rf_sic_db
    digital_sic_db = fit.achieved_digital_sic_db

    if section.write_iq:
        write_iq(ctx.path("tx.iq"), tx)
        write_iq(ctx.path("rx.iq"), rx)
        write_iq(ctx.path("cancelled.iq"), cancelled)

    report = DigsicReport(
        seed=ctx.seed,
        family=section.family,
        m_taps=section.m_taps,
        bandwidth_mhz=section.bandwidth_mhz,
        converged=rf.converged,
        warning=rf.warning,
        tx_power_dbm=section.tx_power_dbm,
        noise_floor_db=noise_floor_db,
        n_samples=int(tx.size),
        n_coefficients=section.mempoly.n_coefficients,
        rank_deficient=fit.rank_deficient,
        residual_si_db=residual_si_db,
        si_to_noise_db=None if noise_floor_db is None else residual_si_db - noise_floor_db,
        rf_sic_db=rf_sic_db,
        digital_sic_db=digital_sic_db,
        overall_sic_db=rf_sic_db + digital_sic_db,
        noise_limited=noise_limited,
    )
    logger.info(
        "RF %.2f dB + digital %.2f dB = %.2f dB overall%s",
        rf_sic_db, digital_sic_db, report.overall_sic_db, " (noise-limited)" if noise_limited else "",
    )
    write_json(ctx.path("digsic_report.json"), report)
    return report
