import logging
from typing import Optional

from fdesic.cancopt import configure_canceller
from fdesic.rfmodel import CancellerFamily, canceller_response
from fdesic.sichan import residual

from fde_cli.models.reports import OptimizeRunReport
from fde_cli.services.channel import load_channel, restrict_band
from fde_cli.services.context import RunContext
from fde_cli.services.output import RESPONSE_HEADER, response_rows, write_csv, write_json

logger = logging.getLogger(__name__)


def run_optimize(
    ctx: RunContext,
    family: Optional[CancellerFamily] = None,
    baseline: Optional[str] = None,
) -> OptimizeRunReport:
    """
    Channel, optimize, quantize, local search.

    Writes optimize_report.json with every stage and residual.csv for the
    best stage. A non-converged solver is reported through `warning`.
    """
    section = ctx.config.optimize
    family = CancellerFamily(family or section.family)
    baseline = baseline or section.baseline

    h_si = restrict_band(load_channel(ctx.config.channel), section.bandwidth_mhz)
    report = configure_canceller(
        family,
        section.m_taps,
        h_si,
        ctx.config.constraint_set(family),
        ctx.solver_options(),
        quantize=section.quantize,
        heuristic_baseline=baseline == "heur",
    )
    logger.info("optimize finished in %.2fs", report.wall_time_s)
    for stage in report.stages:
        logger.info("  %-9s mean SIC %.2f dB, worst %.2f dB", stage.stage.value,
                    stage.metrics.mean_rf_sic_db, stage.metrics.worst_rf_sic_db)

    h_res = residual(h_si, canceller_response(report.best_config, h_si.grid))
    write_csv(ctx.path("residual.csv"), RESPONSE_HEADER, response_rows(h_res))
    run_report = OptimizeRunReport.from_report(report, ctx.seed, section.bandwidth_mhz, len(h_si))
    write_json(ctx.path("optimize_report.json"), run_report)
    return run_report
