import math

import numpy as np
import pytest

from fdesic.errors import ChannelParseError, InvalidArgumentError
from fdesic.rfmodel import ComplexResponse, FrequencyGrid
from fdesic.sichan import (
    BENCHMARK_SEED,
    CSV_HEADER,
    MultipathComponent,
    SiChannelSpec,
    benchmark_channel,
    benchmark_channel_spec,
    benchmark_grid,
    load_channel_csv,
    residual,
    sic_metrics,
    store_channel_csv,
    synth_si_channel,
)


def test_synth_hits_target_isolation():
    spec = SiChannelSpec.random(benchmark_grid(), n_paths=4, seed=3, target_isolation_db=-25.0)
    h = synth_si_channel(spec)
    assert 10 * math.log10(np.mean(np.abs(h.values) ** 2)) == pytest.approx(-25.0, abs=1e-9)


def test_single_path_is_flat_with_linear_phase():
    grid = FrequencyGrid.uniform(880e6, 920e6, 101)
    spec = SiChannelSpec(
        paths=[MultipathComponent(amp_linear=0.3, tau_s=10e-9, phase_rad=0.2)],
        target_isolation_db=-30.0,
        grid=grid,
    )
    h = synth_si_channel(spec)
    np.testing.assert_allclose(h.magnitude_db(), -30.0, atol=1e-9)
    expected = np.exp(-1j * (2 * np.pi * grid.freqs_hz * 10e-9 + 0.2))
    np.testing.assert_allclose(h.values / np.abs(h.values), expected, atol=1e-9)


def test_random_spec_depends_only_on_seed():
    grid = benchmark_grid()
    a = SiChannelSpec.random(grid, seed=11)
    b = SiChannelSpec.random(grid, seed=11)
    c = SiChannelSpec.random(grid, seed=12)
    assert a.paths == b.paths
    assert a.paths != c.paths
    for path in a.paths:
        assert 0.0 <= path.tau_s <= 40e-9
        assert 20 * math.log10(path.amp_linear) >= -15.0


def test_rejects_all_zero_paths():
    spec = SiChannelSpec(
        paths=[MultipathComponent(amp_linear=0.0, tau_s=0.0)],
        target_isolation_db=-20.0,
        grid=benchmark_grid(),
    )
    with pytest.raises(InvalidArgumentError):
        synth_si_channel(spec)


def test_benchmark_channel_properties(benchmark):
    grid = benchmark.grid
    assert len(grid) == 257
    assert grid.center_hz == pytest.approx(900e6)
    assert grid.span_hz == pytest.approx(80e6)
    assert 10 * math.log10(np.mean(np.abs(benchmark.values) ** 2)) == pytest.approx(-20.0, abs=1e-9)

    probe = benchmark.restrict(900e6, 20e6)
    assert len(probe) == 65
    assert 3.0 <= np.ptp(probe.magnitude_db()) <= 8.0

    spec = benchmark_channel_spec()
    assert len(spec.paths) == 4
    assert spec.rng_seed == BENCHMARK_SEED


def test_benchmark_channel_is_reproducible(benchmark):
    again = benchmark_channel()
    np.testing.assert_array_equal(again.values, benchmark.values)


def test_residual_requires_shared_grid(benchmark, band_20mhz):
    with pytest.raises(InvalidArgumentError):
        residual(benchmark, band_20mhz)
    zero = residual(band_20mhz, band_20mhz)
    assert not np.any(zero.values)


def test_sic_metrics_floor_and_constant_residual():
    grid = FrequencyGrid.uniform(890e6, 910e6, 11)
    perfect = sic_metrics(ComplexResponse(grid=grid, values=np.zeros(11)))
    assert perfect.mean_rf_sic_db == pytest.approx(200.0)
    assert perfect.worst_rf_sic_db == pytest.approx(200.0)

    flat = sic_metrics(ComplexResponse(grid=grid, values=np.full(11, 1e-3j)))
    assert flat.mean_rf_sic_db == pytest.approx(60.0)
    assert flat.worst_rf_sic_db == pytest.approx(60.0)
    assert flat.mean_rf_sic_db_dbmean == pytest.approx(60.0)
    assert flat.isolation_db_per_freq == pytest.approx([-60.0] * 11)


def test_sic_metrics_worst_tracks_largest_residual():
    grid = FrequencyGrid.uniform(890e6, 910e6, 3)
    metrics = sic_metrics(ComplexResponse(grid=grid, values=[1e-4, 1e-2, 1e-4]))
    assert metrics.worst_rf_sic_db == pytest.approx(40.0)
    assert metrics.worst_rf_sic_db <= metrics.mean_rf_sic_db <= metrics.mean_rf_sic_db_dbmean


def test_channel_csv_round_trip(tmp_path, band_20mhz):
    path = tmp_path / "channel.csv"
    store_channel_csv(band_20mhz, path)
    assert path.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    loaded = load_channel_csv(path)
    np.testing.assert_array_equal(loaded.freqs_hz, band_20mhz.freqs_hz)
    np.testing.assert_array_equal(loaded.values, band_20mhz.values)


def test_channel_csv_ignores_extra_columns(tmp_path):
    path = tmp_path / "extra.csv"
    path.write_text("freq_hz,re,im,note\n9e8,0.1,-0.2,a\n9.1e8,0.3,0.4,b\n")
    loaded = load_channel_csv(path)
    np.testing.assert_allclose(loaded.values, [0.1 - 0.2j, 0.3 + 0.4j])


@pytest.mark.parametrize(
    "text, line",
    [
        ("f,re,im\n9e8,0,0\n", 1),
        ("freq_hz,re,im\n9e8,0,0\n8e8,0,0\n", 3),
        ("freq_hz,re,im\n9e8,abc,0\n", 2),
        ("freq_hz,re,im\n9e8,0\n", 2),
        ("freq_hz,re,im\n-1,0,0\n", 2),
        ("freq_hz,re,im\n", 2),
    ],
)
def test_channel_csv_errors_name_the_line(tmp_path, text, line):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ChannelParseError) as excinfo:
        load_channel_csv(path)
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"line {line}:")
