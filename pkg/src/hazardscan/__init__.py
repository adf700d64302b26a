"""Symbolic hazard analysis of asynchronous combinational circuits.

Signals are sums of Heaviside steps whose switching instants stay symbolic in
the gate delays; a separate event-driven simulator serves as the oracle.
"""

from .analyze import (
    Hazard,
    HazardReport,
    Pulse,
    classify,
    enumerate_transitions,
    ideal_output,
    propagate,
)
from .circuit import (
    Gate,
    Netlist,
    Stimulus,
    format_netlist,
    netlist_from_expr,
    parse_netlist,
    stimulus_waveforms,
    topo_order,
)
from .errors import AmbiguousOrdering, HazardScanError
from .expr import MultilinearPoly, arithmetize, parse_expr, poly_eval, poly_to_bool
from .oracle import simulate, trace_vs_waveform, write_vcd
from .waveform import (
    SymbolicTime,
    Waveform,
    compare_times,
    format_waveform,
    wf_and,
    wf_delay,
    wf_eval,
    wf_not,
    wf_or,
    wf_xor,
)

__all__ = [
    "Hazard",
    "HazardReport",
    "Pulse",
    "classify",
    "enumerate_transitions",
    "ideal_output",
    "propagate",
    "Gate",
    "Netlist",
    "Stimulus",
    "format_netlist",
    "netlist_from_expr",
    "parse_netlist",
    "stimulus_waveforms",
    "topo_order",
    "SymbolicTime",
    "Waveform",
    "compare_times",
    "format_waveform",
    "wf_and",
    "wf_delay",
    "wf_eval",
    "wf_not",
    "wf_or",
    "wf_xor",
    "AmbiguousOrdering",
    "HazardScanError",
    "MultilinearPoly",
    "arithmetize",
    "parse_expr",
    "poly_eval",
    "poly_to_bool",
    "simulate",
    "trace_vs_waveform",
    "write_vcd",
]

__version__ = "0.1.0"
