"""
FDE self-interference cancellation toolkit.
Canceller models, SI channels, configuration optimization, network
throughput analysis and a baseband digital SIC stage.
"""

from .errors import (
    BandTooNarrowError,
    ChannelParseError,
    FdeSicError,
    InvalidArgumentError,
    IqFormatError,
    NumericDegeneracyError,
)
from .rfmodel import (
    CancellerFamily,
    ComplexResponse,
    FrequencyGrid,
    PcbCircuitConstants,
    abcd_cascade,
    canceller_response,
    extract_center_and_q,
    pcb_bpf_response,
    pcb_bpf_response_abcd,
    rfic_canceller_response,
    pcb_canceller_response,
    shunt_abcd,
    tank_admittance,
    tline_abcd,
)
from .sichan import (
    SiChannelSpec,
    SicMetrics,
    benchmark_channel,
    load_channel_csv,
    residual,
    sic_metrics,
    store_channel_csv,
    synth_si_channel,
)
from .constraints import ConstraintSet, QuantizationSpec, default_constraints
from .cancopt import (
    OptimizeReport,
    SolverOptions,
    configure_canceller,
    heuristic_rfic_config,
    local_search,
    optimize_config,
    quantize_config,
)
from .sweep import SweepMode, SweepRow, sweep
from .netgain import (
    GainScenario,
    gain_surface,
    jains_fairness,
    shannon_rate,
    tdma_network_throughput,
    three_node_throughputs,
    uldl_throughputs,
)
from .digsic import MemPolySpec, OfdmParams, apply_residual_si, fit_digital_canceller, gen_ofdm

__all__ = [
    "BandTooNarrowError",
    "ChannelParseError",
    "FdeSicError",
    "InvalidArgumentError",
    "IqFormatError",
    "NumericDegeneracyError",
    "CancellerFamily",
    "ComplexResponse",
    "FrequencyGrid",
    "PcbCircuitConstants",
    "abcd_cascade",
    "canceller_response",
    "extract_center_and_q",
    "pcb_bpf_response",
    "pcb_bpf_response_abcd",
    "rfic_canceller_response",
    "pcb_canceller_response",
    "shunt_abcd",
    "tank_admittance",
    "tline_abcd",
    "SiChannelSpec",
    "SicMetrics",
    "benchmark_channel",
    "load_channel_csv",
    "residual",
    "sic_metrics",
    "store_channel_csv",
    "synth_si_channel",
    "ConstraintSet",
    "QuantizationSpec",
    "default_constraints",
    "OptimizeReport",
    "SolverOptions",
    "configure_canceller",
    "heuristic_rfic_config",
    "local_search",
    "optimize_config",
    "quantize_config",
    "SweepMode",
    "SweepRow",
    "sweep",
    "GainScenario",
    "gain_surface",
    "jains_fairness",
    "shannon_rate",
    "tdma_network_throughput",
    "three_node_throughputs",
    "uldl_throughputs",
    "MemPolySpec",
    "OfdmParams",
    "apply_residual_si",
    "fit_digital_canceller",
    "gen_ofdm",
]
