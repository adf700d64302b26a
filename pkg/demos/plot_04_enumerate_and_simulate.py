"""
Finding every hazard, then checking with a simulator
====================================================

Enumerate input transitions, keep the hazardous ones, and replay one of
them in an event-driven simulator with tau = 1.
"""

import tempfile
from pathlib import Path

from hazardscan import Stimulus, classify, enumerate_transitions, propagate, simulate, stimulus_waveforms
from hazardscan.corpus import fig1, mux, mux_consensus
from hazardscan.oracle import render_ascii, trace_vs_waveform, write_vcd

n = fig1()

# single-bit changes never glitch here
print(len(list(enumerate_transitions(n, mode="hamming1"))))

# two bits changing together can
for stim, report in enumerate_transitions(n, mode="all_pairs"):
    frm, to = stim.bits(n)
    print(frm, "->", to, report.classification.label)

# replay the worked example
stim = Stimulus.from_bits(n, "1111", "1001", 5)
trace = simulate(n, stim, {"tau": 1})
print(render_ascii(trace, width=48))

# simulator and symbolic waveforms agree at every event
waves = propagate(n, stimulus_waveforms(stim))
print(trace_vs_waveform(trace, waves, {"tau": 1}).ok)

# a VCD for an external viewer
path = Path(tempfile.gettempdir()) / "worked_example.vcd"
write_vcd(trace, path)
print(path)

# the textbook mux glitches when X falls; the consensus term B C holds Y up
for circuit in (mux(), mux_consensus()):
    s = Stimulus.from_bits(circuit, "111", "011", 0)
    verdict = classify(circuit, s).classification.label
    changes = len(simulate(circuit, s, {"tau": 1}).events["Y1"])
    print(verdict, changes)
