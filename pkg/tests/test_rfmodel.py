import math

import numpy as np
import pytest

from fdesic.errors import BandTooNarrowError, InvalidArgumentError
from fdesic.rfmodel import (
    CANCELLER_ADAPTER,
    MODEL_GRID_POINTS,
    MODEL_GRID_START_HZ,
    MODEL_GRID_STOP_HZ,
    AbcdMatrix,
    AmpPhaseCanceller,
    DelayLineCanceller,
    DelayLineTap,
    FrequencyGrid,
    PcbCanceller,
    PcbCircuitConstants,
    PcbTapConfig,
    RficCanceller,
    RficTapConfig,
    abcd_cascade,
    amp_phase_response,
    calibrate_tank_resistance,
    canceller_response,
    delay_line_response,
    extract_center_and_q,
    pcb_bpf_response,
    pcb_bpf_response_abcd,
    pcb_canceller_response,
    rfic_canceller_response,
    shunt_abcd,
    span_of_centers,
    tank_admittance,
    tline_abcd,
    tuning_corner_taps,
)


def _close(m: AbcdMatrix, expected, tol=1e-12):
    np.testing.assert_allclose(m.to_array(), np.array(expected, dtype=complex), atol=tol)


# ---------------------------------------------------------------------------
# Two-ports
# ---------------------------------------------------------------------------


def test_tline_zero_length_is_identity():
    _close(tline_abcd(0.0, 50.0), [[1, 0], [0, 1]])


def test_tline_quarter_wave():
    _close(tline_abcd(math.pi / 2, 50.0), [[0, 50j], [1j / 50, 0]])


def test_tline_general_length():
    bl = 1.37
    _close(tline_abcd(bl, 50.0), [[math.cos(bl), 50j * math.sin(bl)], [1j * math.sin(bl) / 50, math.cos(bl)]])


def test_tline_rejects_non_positive_impedance():
    with pytest.raises(InvalidArgumentError):
        tline_abcd(1.0, 0.0)


@pytest.mark.parametrize("y", [0.0, 0.02, 0.01 + 0.005j])
def test_shunt_puts_admittance_in_c(y):
    _close(shunt_abcd(y), [[1, 0], [y, 1]])


def test_cascade():
    y = shunt_abcd(0.02)
    _close(abcd_cascade([AbcdMatrix.identity()]), [[1, 0], [0, 1]])
    _close(abcd_cascade([y, AbcdMatrix.identity()]), y.to_array())
    half_wave = abcd_cascade([tline_abcd(math.pi / 2, 50.0), tline_abcd(math.pi / 2, 50.0)])
    _close(half_wave, [[-1, 0], [0, -1]])


def test_cascade_rejects_empty_list():
    with pytest.raises(InvalidArgumentError):
        abcd_cascade([])


# ---------------------------------------------------------------------------
# Tank admittance
# ---------------------------------------------------------------------------


def test_tank_at_resonance_is_real():
    r, l, c = 35.0, 1.65e-9, 9.7e-12
    f0 = 1.0 / (2.0 * math.pi * math.sqrt(l * c))
    y = tank_admittance(r, l, c, f0)
    assert y.real == pytest.approx(1.0 / 35.0)
    assert y.real == pytest.approx(0.02857, abs=1e-5)
    assert abs(y.imag) < 1e-12


def test_lossless_tank():
    f = 900e6
    y = tank_admittance(math.inf, 1.65e-9, 9.7e-12, f)
    w = 2.0 * math.pi * f
    assert y.real == 0.0
    assert y.imag == pytest.approx(w * 9.7e-12 - 1.0 / (w * 1.65e-9))


def test_tank_rejects_non_positive_frequency():
    with pytest.raises(InvalidArgumentError):
        tank_admittance(35.0, 1.65e-9, 9.7e-12, 0.0)


def test_default_tank_resistance_calibration():
    assert calibrate_tank_resistance() == pytest.approx(35.2, abs=0.05)
    assert PcbCircuitConstants().r_f_ohm == pytest.approx(calibrate_tank_resistance())


# ---------------------------------------------------------------------------
# PCB BPF
# ---------------------------------------------------------------------------


def test_closed_form_matches_abcd_cascade():
    rng = np.random.default_rng(7)
    constants = PcbCircuitConstants()
    worst = 0.0
    for _ in range(1000):
        tap = PcbTapConfig(
            amp_db=0.0,
            phase_rad=0.0,
            c_f_farad=rng.uniform(0.6e-12, 2.4e-12),
            c_q_farad=rng.uniform(2.0e-12, 14.0e-12),
        )
        lo = rng.uniform(860e6, 950e6)
        grid = FrequencyGrid.uniform(lo, lo + rng.uniform(1e6, 10e6), 16)
        closed = pcb_bpf_response(tap, constants, grid).values
        cascade = pcb_bpf_response_abcd(tap, constants, grid).values
        worst = max(worst, float(np.max(np.abs(closed - cascade) / np.abs(cascade))))
    assert worst <= 1e-9


def _model_grid():
    return FrequencyGrid.uniform(MODEL_GRID_START_HZ, MODEL_GRID_STOP_HZ, MODEL_GRID_POINTS)


def test_tuning_corners_center_and_q():
    grid = _model_grid()
    constants = PcbCircuitConstants()
    measured = {
        label: extract_center_and_q(pcb_bpf_response(tap, constants, grid))
        for label, tap in tuning_corner_taps().items()
    }
    fc = {label: v[0] for label, v in measured.items()}
    q = {label: v[1] for label, v in measured.items()}

    # small C_F: higher peak and higher Q at either C_Q setting
    assert fc["cfmin-cqmin"] > fc["cfmax-cqmin"]
    assert q["cfmin-cqmin"] > q["cfmax-cqmin"]
    assert q["cfmin-cqmax"] > q["cfmax-cqmax"]
    # C_Q shifts the peak by far more than C_F does
    assert fc["cfmin-cqmin"] - fc["cfmin-cqmax"] > 1e9
    assert q["cfmin-cqmax"] > q["cfmin-cqmin"]


def test_center_span_over_c_f_range():
    span = span_of_centers()
    assert 10e6 < span < 40e6


def test_pcb_amplitude_scales_linearly():
    grid = FrequencyGrid.ofdm_bins(900e6)
    base = dict(phase_rad=0.3, c_f_farad=1.2e-12, c_q_farad=8e-12)
    full = pcb_canceller_response(PcbCanceller(taps=[PcbTapConfig(amp_db=0.0, **base)]), grid)
    low = pcb_canceller_response(PcbCanceller(taps=[PcbTapConfig(amp_db=-15.5, **base)]), grid)
    np.testing.assert_allclose(low.values, full.values * 10 ** (-15.5 / 20), rtol=1e-12)


def test_pcb_opposite_phases_cancel():
    grid = FrequencyGrid.ofdm_bins(900e6)
    tap = dict(amp_db=-3.0, c_f_farad=1.2e-12, c_q_farad=8e-12)
    config = PcbCanceller(taps=[
        PcbTapConfig(phase_rad=-math.pi / 2, **tap),
        PcbTapConfig(phase_rad=math.pi / 2, **tap),
    ])
    assert np.max(np.abs(pcb_canceller_response(config, grid).values)) < 1e-12


def test_pcb_matches_symbol_by_symbol_evaluation():
    grid = FrequencyGrid.ofdm_bins(900e6)
    k = PcbCircuitConstants()
    taps = [
        PcbTapConfig(amp_db=-2.0, phase_rad=0.4, c_f_farad=0.96e-12, c_q_farad=9.8e-12),
        PcbTapConfig(amp_db=-7.5, phase_rad=-2.1, c_f_farad=2.04e-12, c_q_farad=12.14e-12),
    ]
    got = pcb_canceller_response(PcbCanceller(taps=taps), grid).values

    expected = []
    for f in grid.freqs_hz:
        w = 2 * math.pi * f
        total = 0j
        for tap in taps:
            yf = 1 / k.r_f_ohm + 1j * w * (k.c_fixed_farad + tap.c_f_farad) + 1 / (1j * w * k.l_f_henry)
            yq = 1 / k.r_q_ohm + 1j * w * tap.c_q_farad + 1 / (1j * w * k.l_q_henry)
            bl, z0 = k.beta_l_rad, k.z0_ohm
            t = np.array([[math.cos(bl), 1j * z0 * math.sin(bl)], [1j * math.sin(bl) / z0, math.cos(bl)]])
            sq = np.array([[1, 0], [yq, 1]])
            sf = np.array([[1, 0], [yf, 1]])
            m_c = (sq @ t @ sf @ t @ sq)[1, 0]
            total += 10 ** (tap.amp_db / 20) * np.exp(-1j * tap.phase_rad) / (k.r_q_ohm * m_c)
        expected.append(10 ** (k.a0_db / 20) * np.exp(-2j * math.pi * f * k.tau0_s) * total)
    np.testing.assert_allclose(got, expected, rtol=1e-9)


# ---------------------------------------------------------------------------
# RFIC, delay line, amplitude/phase
# ---------------------------------------------------------------------------


def _rfic(amp_db=0.0, phase=0.0, fc=900e6, q=10.0):
    return RficCanceller(taps=[RficTapConfig(amp_db=amp_db, phase_rad=phase, fc_hz=fc, q=q)])


def test_rfic_hand_evaluated_point():
    value = rfic_canceller_response(_rfic(), FrequencyGrid(freqs_hz=[910e6])).values[0]
    assert value.real == pytest.approx(0.95343, abs=1e-5)
    assert value.imag == pytest.approx(-0.21071, abs=1e-5)
    assert abs(value) == pytest.approx(0.97642, abs=1e-5)


def test_rfic_center_identity():
    value = rfic_canceller_response(_rfic(amp_db=-6.0, phase=1.1), FrequencyGrid(freqs_hz=[900e6])).values[0]
    assert abs(value) == pytest.approx(10 ** (-6 / 20), rel=1e-14)
    assert np.angle(value) == pytest.approx(-1.1, abs=1e-14)


def test_rfic_peak_at_grid_point_nearest_center():
    grid = FrequencyGrid.uniform(850e6, 950e6, 1001)
    values = np.abs(rfic_canceller_response(_rfic(fc=903.33e6, q=4.0), grid).values)
    assert grid.freqs_hz[int(np.argmax(values))] == pytest.approx(903.3e6)


def test_extract_rfic_center_and_q():
    grid = FrequencyGrid.uniform(700e6, 1100e6, 40001)
    fc, q = extract_center_and_q(rfic_canceller_response(_rfic(), grid))
    assert fc == pytest.approx(900e6, rel=0.01)
    assert q == pytest.approx(10.0, rel=0.01)


def test_extract_needs_both_crossings():
    grid = FrequencyGrid.uniform(899e6, 901e6, 101)
    with pytest.raises(BandTooNarrowError):
        extract_center_and_q(rfic_canceller_response(_rfic(), grid))


def test_delay_line_single_tap_is_flat():
    grid = FrequencyGrid.ofdm_bins(900e6)
    config = DelayLineCanceller(taps=[DelayLineTap(amp_linear=1.0, tau_s=0.0)])
    np.testing.assert_allclose(delay_line_response(config, grid).values, 1.0)


def test_delay_line_pure_delay_phase_slope():
    grid = FrequencyGrid.uniform(890e6, 910e6, 201)
    config = DelayLineCanceller(taps=[DelayLineTap(amp_linear=1.0, tau_s=50e-9)])
    phase = np.unwrap(np.angle(delay_line_response(config, grid).values))
    slope = np.polyfit(grid.freqs_hz, phase, 1)[0]
    assert slope == pytest.approx(-2 * math.pi * 50e-9, rel=1e-6)


def test_delay_line_comb_nulls():
    grid = FrequencyGrid(freqs_hz=[20e6, 40e6, 60e6])
    config = DelayLineCanceller(taps=[
        DelayLineTap(amp_linear=1.0, tau_s=0.0),
        DelayLineTap(amp_linear=1.0, tau_s=25e-9),
    ])
    values = np.abs(delay_line_response(config, grid).values)
    assert values[0] < 1e-12
    assert values[1] == pytest.approx(2.0)
    assert values[2] < 1e-12


def test_amp_phase_response():
    grid = FrequencyGrid.ofdm_bins(900e6)
    np.testing.assert_allclose(amp_phase_response(1.0, 0.0, grid).values, 1.0)
    np.testing.assert_allclose(amp_phase_response(0.5, math.pi / 2, grid).values, -0.5j, atol=1e-15)


def test_amp_phase_emulates_one_frequency(band_20mhz):
    h = band_20mhz.values[0]
    response = amp_phase_response(abs(h), -np.angle(h), band_20mhz.grid)
    assert response.values[0] == pytest.approx(h, abs=1e-15)
    assert np.max(np.abs(response.values - band_20mhz.values)) > 1e-4


# ---------------------------------------------------------------------------
# Config dispatch and grids
# ---------------------------------------------------------------------------


def test_adapter_dispatches_on_kind():
    grid = FrequencyGrid.ofdm_bins(900e6)
    config = CANCELLER_ADAPTER.validate_python({"kind": "amp_phase", "amp_linear": 0.25, "phase_rad": 0.0})
    assert isinstance(config, AmpPhaseCanceller)
    np.testing.assert_allclose(canceller_response(config, grid).values, 0.25)

    pcb = CANCELLER_ADAPTER.validate_python({
        "kind": "pcb",
        "taps": [{"amp_db": 0.0, "phase_rad": 0.0, "c_f_farad": 1e-12, "c_q_farad": 5e-12}],
    })
    assert isinstance(pcb, PcbCanceller)
    assert pcb.m_taps == 1


def test_ofdm_bin_grid():
    grid = FrequencyGrid.ofdm_bins(900e6)
    assert len(grid) == 52
    assert grid.freqs_hz[0] == pytest.approx(900e6 - 26 * 312.5e3)
    assert grid.freqs_hz[-1] == pytest.approx(900e6 + 26 * 312.5e3)
    assert 900e6 not in grid.freqs_hz


def test_grid_rejects_non_increasing_frequencies():
    with pytest.raises(ValueError):
        FrequencyGrid(freqs_hz=[2e6, 1e6])
