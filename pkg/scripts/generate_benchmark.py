#!/usr/bin/env python3
"""
Write the benchmark SI channel (and optionally a few random draws) as channel CSVs.
Usage: python scripts/generate_benchmark.py [--random N]
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "packages"))

from fdesic.sichan import (  # noqa: E402
    BENCHMARK_SEED,
    SiChannelSpec,
    benchmark_channel,
    benchmark_channel_spec,
    benchmark_grid,
    store_channel_csv,
    synth_si_channel,
)

CHANNELS_DIR = ROOT / "data" / "channels"


def generate(n_random: int) -> None:
    CHANNELS_DIR.mkdir(parents=True, exist_ok=True)

    spec = benchmark_channel_spec()
    print(f"Benchmark channel (seed {BENCHMARK_SEED}):")
    for path in spec.paths:
        print(f"  tau={path.tau_s * 1e9:6.2f} ns  |a|={path.amp_linear:.4f}  phase={path.phase_rad:+.3f} rad")
    out = CHANNELS_DIR / "benchmark.csv"
    store_channel_csv(benchmark_channel(), out)
    print(f"  Wrote {out}")

    grid = benchmark_grid()
    for k in range(n_random):
        seed = BENCHMARK_SEED + 1 + k
        out = CHANNELS_DIR / f"random_{seed}.csv"
        store_channel_csv(synth_si_channel(SiChannelSpec.random(grid, seed=seed)), out)
        print(f"  Wrote {out}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--random", type=int, default=0, help="number of extra random channels")
    generate(parser.parse_args().random)
