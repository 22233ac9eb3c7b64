import logging

import numpy as np

from fdesic.netgain import (
    GainScenario,
    SurfaceKind,
    gain_surface,
    jains_fairness,
    tdma_user_rates,
    three_node_throughputs,
    uldl_gain_summary,
    uldl_throughputs,
)

from fde_cli.models.reports import NetworkRunReport, ScenarioResult
from fde_cli.models.run_config import ScenarioInput
from fde_cli.services.context import RunContext
from fde_cli.services.output import write_csv, write_json

logger = logging.getLogger(__name__)

SURFACE_HEADER = ("x", "y", "gain")
THREE_NODE_HEADER = (
    "gamma_1_db",
    "gamma_2_db",
    "r_hd",
    "r_user1_fd",
    "r_user2_fd",
    "r_both_fd",
    "gain_user1_fd",
    "gain_user2_fd",
    "gain_both_fd",
    "jfi_hd",
    "jfi_both_fd",
)


def evaluate_scenario(item: ScenarioInput) -> ScenarioResult:
    scenario = item.to_scenario()
    result = ScenarioResult(name=item.name, scenario=scenario, uldl=uldl_throughputs(scenario))
    updates = {}
    if len(scenario.snrs) == 2:
        updates["three_node"] = three_node_throughputs(scenario)
    if scenario.snrs and scenario.fd_mask:
        rates = tdma_user_rates(scenario.snrs, scenario.fd_mask, scenario.gamma_self, scenario.bandwidth_hz)
        updates["tdma_user_rates"] = rates.tolist()
        updates["tdma_throughput"] = float(np.sum(rates))
        updates["tdma_jfi"] = jains_fairness(rates) if np.any(rates > 0) else None
    return result.model_copy(update=updates)


def run_network(ctx: RunContext) -> NetworkRunReport:
    """
    Gain surfaces, 3-node throughput/fairness table and scenario echoes.

    Files: uldl_gain_ul<N>db.csv per UL SNR (x = gamma_DL dB, y = gamma_IUI dB),
    three_node_gain.csv (x = gamma_1 dB, y = gamma_2 dB), three_node.csv and
    network_summary.json.
    """
    section = ctx.config.network
    files = []

    for ul_db in section.uldl_gamma_ul_db:
        base = GainScenario(gamma_ul=10.0 ** (ul_db / 10.0), gamma_self=section.gamma_self)
        surface = gain_surface(SurfaceKind.ULDL, section.dl_axis, section.iui_axis, base)
        name = f"uldl_gain_ul{ul_db:g}db.csv"
        write_csv(ctx.path(name), SURFACE_HEADER, surface.rows())
        files.append(name)

    axis = section.three_node_axis
    base = GainScenario(gamma_self=section.gamma_self)
    surface = gain_surface(SurfaceKind.THREE_NODE, axis, axis, base)
    write_csv(ctx.path("three_node_gain.csv"), SURFACE_HEADER, surface.rows())
    files.append("three_node_gain.csv")

    table = []
    for g1_db, g1 in zip(axis.values_db(), axis.values()):
        for g2_db, g2 in zip(axis.values_db(), axis.values()):
            t = three_node_throughputs(base.model_copy(update={"snrs": [float(g1), float(g2)]}))
            table.append((
                float(g1_db), float(g2_db), t.r_hd, t.r_user1_fd, t.r_user2_fd, t.r_both_fd,
                t.gain_user1_fd, t.gain_user2_fd, t.gain_both_fd, t.jfi_hd, t.jfi_both_fd,
            ))
    write_csv(ctx.path("three_node.csv"), THREE_NODE_HEADER, table)
    files.append("three_node.csv")

    summary = uldl_gain_summary(section.uldl_gamma_ul_db, section.dl_axis, section.iui_axis, section.gamma_self)
    for row in summary.rows:
        logger.info("UL %g dB: mean gain %.3f (min %.3f, max %.3f)", row.gamma_ul_db, row.mean_gain, row.min_gain, row.max_gain)
    if not summary.ordering_holds:
        logger.info("UL-DL gain is not decreasing in UL SNR at every grid point")

    report = NetworkRunReport(
        scenarios=[evaluate_scenario(item) for item in section.scenarios],
        uldl_summary=summary,
        files=files,
    )
    write_json(ctx.path("network_summary.json"), report)
    return report
