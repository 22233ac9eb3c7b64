import logging

from fdesic.errors import BandTooNarrowError
from fdesic.rfmodel import (
    CancellerFamily,
    FrequencyGrid,
    canceller_response,
    extract_center_and_q,
    pcb_bpf_response,
    tuning_corner_taps,
)

from fde_cli.models.reports import CurveSummary, ModelRunReport
from fde_cli.models.run_config import CORNERS_PRESET
from fde_cli.services.context import RunConfigError, RunContext
from fde_cli.services.output import RESPONSE_HEADER, response_rows, write_csv, write_json

logger = logging.getLogger(__name__)


def run_model(ctx: RunContext) -> ModelRunReport:
    """
    Evaluate the configured canceller models and presets.

    Writes model_<label>.csv per curve and model_summary.json with the
    center frequency and Q of every curve that has a 3 dB band.
    """
    section = ctx.config.model
    if not section.models and not section.presets:
        raise RunConfigError("model: the model list is empty")
    grid = FrequencyGrid.uniform(section.grid.start_hz, section.grid.stop_hz, section.grid.n_points)

    curves = [(entry.label, canceller_response(entry.canceller, grid)) for entry in section.models]
    if CORNERS_PRESET in section.presets:
        pcb = ctx.config.constraint_set(CancellerFamily.PCB)
        corners = tuning_corner_taps(
            (pcb.boxes["c_f_farad"].min, pcb.boxes["c_f_farad"].max),
            (pcb.boxes["c_q_farad"].min, pcb.boxes["c_q_farad"].max),
        )
        for corner, tap in corners.items():
            curves.append((f"{CORNERS_PRESET}-{corner}", pcb_bpf_response(tap, pcb.pcb_constants(), grid)))

    labels = [label for label, _ in curves]
    if len(set(labels)) != len(labels):
        raise RunConfigError("model: curve labels must be unique")

    summaries = []
    for label, response in curves:
        file_name = f"model_{label}.csv"
        write_csv(ctx.path(file_name), RESPONSE_HEADER, response_rows(response))
        try:
            fc_hz, q = extract_center_and_q(response)
        except BandTooNarrowError:
            fc_hz, q = None, None
        summaries.append(CurveSummary(label=label, file=file_name, fc_hz=fc_hz, q=q))
        logger.info("%s: fc=%s Q=%s", label, f"{fc_hz / 1e6:.2f} MHz" if fc_hz else "-", f"{q:.2f}" if q else "-")

    report = ModelRunReport(n_points=len(grid), curves=summaries)
    write_json(ctx.path("model_summary.json"), report)
    return report
