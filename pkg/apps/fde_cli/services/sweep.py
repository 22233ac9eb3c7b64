import logging
from pathlib import Path

from fdesic.sweep import SweepRow, chain_key, flag_monotonic, sort_rows, sweep

from fde_cli.services.channel import load_channel
from fde_cli.services.context import RunContext
from fde_cli.services.output import read_csv_dicts, write_csv

logger = logging.getLogger(__name__)

SWEEP_HEADER = (
    "family",
    "m_taps",
    "bandwidth_mhz",
    "mode",
    "mean_sic_db",
    "worst_sic_db",
    "objective_value",
    "converged",
    "m_monotonic",
)


def _row_key(row: SweepRow) -> tuple:
    return row.family.value, row.bandwidth_mhz, row.m_taps, row.mode.value


def read_sweep_table(path: Path) -> list[SweepRow]:
    return [SweepRow.model_validate(record) for record in read_csv_dicts(path)]


def write_sweep_table(path: Path, rows, families) -> list[SweepRow]:
    table = flag_monotonic(sort_rows(rows, families))
    write_csv(path, SWEEP_HEADER, ([getattr(row, name) for name in SWEEP_HEADER] for row in table))
    return table


def run_sweep(ctx: RunContext) -> list[SweepRow]:
    """
    Full factorial sweep written to one CSV.

    The table is rewritten after every finished (family, B) chain. Chains
    already present in an existing table are skipped, so an interrupted
    sweep resumes where it stopped.
    """
    section = ctx.config.sweep
    path = ctx.path(section.output)

    rows: dict[tuple, SweepRow] = {}
    if path.exists():
        for row in read_sweep_table(path):
            rows[_row_key(row)] = row
    done_chains = {chain_key(row.family, row.bandwidth_mhz) for row in rows.values()}
    if done_chains:
        logger.info("resuming: %d chain(s) already in %s", len(done_chains), path)

    def on_chain_done(cells) -> None:
        for cell in cells:
            row = cell.row()
            rows[_row_key(row)] = row
        write_sweep_table(path, rows.values(), section.families)

    h_si = load_channel(ctx.config.channel)
    sweep(
        h_si,
        families=section.families,
        m_list=section.m_list,
        b_list_mhz=section.b_list_mhz,
        modes=section.modes,
        constraints=ctx.config.constraint_sets(),
        solver_opts=ctx.solver_options(),
        n_jobs=ctx.n_jobs,
        skip_chains=done_chains,
        on_chain_done=on_chain_done,
    )
    table = write_sweep_table(path, rows.values(), section.families)
    violations = [row for row in table if not row.m_monotonic]
    if violations:
        logger.warning("%d ideal row(s) lose SIC as M grows", len(violations))
    logger.info("sweep: %d rows in %s", len(table), path)
    return table
