import pytest

from fdesic.errors import InvalidArgumentError
from fdesic.rfmodel import CancellerFamily
from fdesic.sweep import SweepMode, SweepRow, chain_key, flag_monotonic, sort_rows, sweep

AMP_PHASE = CancellerFamily.AMP_PHASE
DELAY_LINE = CancellerFamily.DELAY_LINE


def _row(family, m_taps, mean, mode=SweepMode.IDEAL, b=20.0):
    return SweepRow(
        family=family, m_taps=m_taps, bandwidth_mhz=b, mode=mode,
        mean_sic_db=mean, worst_sic_db=mean - 5, objective_value=1.0,
    )


def test_small_sweep_cells(band_20mhz, quick_opts):
    cells = sweep(
        band_20mhz,
        families=[AMP_PHASE, DELAY_LINE],
        m_list=[1, 2],
        b_list_mhz=[20.0],
        solver_opts=quick_opts,
    )
    keys = [(c.family, c.m_taps, c.mode) for c in cells]
    # amp_phase has one tap and neither family has a lattice
    assert keys == [
        (AMP_PHASE, 1, SweepMode.IDEAL),
        (DELAY_LINE, 1, SweepMode.IDEAL),
        (DELAY_LINE, 2, SweepMode.IDEAL),
    ]
    rows = flag_monotonic(c.row() for c in cells)
    assert all(r.m_monotonic for r in rows)
    assert rows[2].mean_sic_db >= rows[1].mean_sic_db - 1e-6


def test_quantized_rows_for_hardware_families(band_20mhz, quick_opts):
    cells = sweep(
        band_20mhz,
        families=[CancellerFamily.RFIC],
        m_list=[1],
        b_list_mhz=[10.0],
        solver_opts=quick_opts,
    )
    assert [c.mode for c in cells] == [SweepMode.IDEAL, SweepMode.QUANTIZED]
    ideal, quantized = (c.row() for c in cells)
    assert ideal.bandwidth_mhz == quantized.bandwidth_mhz == 10.0
    assert quantized.objective_value == cells[1].report.best.objective_value


def test_skipped_chains_and_callback(band_20mhz, quick_opts):
    finished = []
    cells = sweep(
        band_20mhz,
        families=[AMP_PHASE, DELAY_LINE],
        m_list=[1],
        b_list_mhz=[20.0],
        solver_opts=quick_opts,
        skip_chains=[chain_key(DELAY_LINE, 20)],
        on_chain_done=finished.append,
    )
    assert [c.family for c in cells] == [AMP_PHASE]
    assert len(finished) == 1


def test_sweep_rejects_band_wider_than_channel(band_20mhz):
    with pytest.raises(InvalidArgumentError):
        sweep(band_20mhz, families=[AMP_PHASE], m_list=[1], b_list_mhz=[40.0])


@pytest.mark.parametrize(
    "kwargs",
    [dict(families=[]), dict(m_list=[0]), dict(b_list_mhz=[]), dict(modes=[])],
)
def test_sweep_rejects_empty_or_bad_lists(band_20mhz, kwargs):
    args = dict(families=[AMP_PHASE], m_list=[1], b_list_mhz=[20.0])
    args.update(kwargs)
    with pytest.raises(InvalidArgumentError):
        sweep(band_20mhz, **args)


def test_flag_monotonic_marks_regressions_only_in_ideal_rows():
    rows = [
        _row(DELAY_LINE, 1, 30.0),
        _row(DELAY_LINE, 2, 29.0),
        _row(DELAY_LINE, 3, 31.0),
        _row(DELAY_LINE, 2, 10.0, mode=SweepMode.QUANTIZED),
        _row(DELAY_LINE, 2, 25.0, b=40.0),
    ]
    flags = [r.m_monotonic for r in flag_monotonic(rows)]
    assert flags == [True, False, True, True, True]


def test_sort_rows():
    rows = [
        _row(DELAY_LINE, 1, 1.0),
        _row(AMP_PHASE, 1, 1.0, b=40.0),
        _row(AMP_PHASE, 1, 1.0),
        _row(DELAY_LINE, 1, 1.0, mode=SweepMode.QUANTIZED),
    ]
    ordered = sort_rows(rows, families=[AMP_PHASE, DELAY_LINE])
    assert [(r.family, r.bandwidth_mhz, r.mode) for r in ordered] == [
        (AMP_PHASE, 20.0, SweepMode.IDEAL),
        (AMP_PHASE, 40.0, SweepMode.IDEAL),
        (DELAY_LINE, 20.0, SweepMode.IDEAL),
        (DELAY_LINE, 20.0, SweepMode.QUANTIZED),
    ]


@pytest.mark.slow
def test_full_sweep_on_benchmark(benchmark):
    cells = sweep(benchmark, n_jobs=4)
    rows = flag_monotonic(c.row() for c in cells)
    # amp_phase 1 x 3 bands, delay line 4 x 3, rfic and pcb 4 x 3 in two modes
    assert len(rows) == 3 + 12 + 24 + 24
    for row in rows:
        # these chains warm-start every M from the split M-1 optimum
        if row.mode == SweepMode.IDEAL and row.family in (DELAY_LINE, CancellerFamily.RFIC):
            assert row.m_monotonic
