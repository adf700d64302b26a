"""Symbolic hazard search.

Input transitions become step waveforms, which are pushed through the
netlist gate by gate (delay each input, then apply the ideal gate).  The
resulting output waveform is compared with the zero-delay Boolean model:

* ideal values equal, output toggles (at least twice)  -> static-0 / static-1
* ideal values differ, output toggles three or more times -> dynamic
* otherwise -> no hazard
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Mapping

from .circuit import Netlist, Stimulus, stimulus_waveforms, topo_order
from .errors import AmbiguousOrdering, TooManyInputs
from .expr import Bit, arithmetize, poly_eval
from .waveform import (
    SymbolicTime,
    Waveform,
    format_waveform,
    transition_count,
    wf_and,
    wf_delay,
    wf_not,
    wf_or,
    wf_xor,
)

ALL_PAIRS_INPUT_LIMIT = 16


class Hazard(enum.Enum):
    NONE = "none"
    STATIC0 = "static0"
    STATIC1 = "static1"
    DYNAMIC = "dynamic"

    @property
    def label(self) -> str:
        return {"none": "none", "static0": "STATIC-0", "static1": "STATIC-1", "dynamic": "DYNAMIC"}[self.value]


@dataclass(frozen=True)
class Pulse:
    start: SymbolicTime
    end: SymbolicTime
    width: SymbolicTime

    def to_dict(self) -> dict:
        return {"start": str(self.start), "end": str(self.end), "width": str(self.width)}


@dataclass(frozen=True)
class HazardReport:
    output_name: str
    classification: Hazard
    ideal_before: Bit
    ideal_after: Bit
    waveform: Waveform
    pulses: tuple = ()
    signals: Mapping[str, Waveform] = field(default_factory=dict, compare=False, repr=False)

    @property
    def expression_text(self) -> str:
        return format_waveform(self.waveform)

    @property
    def hazardous(self) -> bool:
        return self.classification is not Hazard.NONE

    def to_dict(self) -> dict:
        return {
            "output": self.output_name,
            "class": self.classification.value,
            "ideal_before": self.ideal_before,
            "ideal_after": self.ideal_after,
            "expression": self.expression_text,
            "pulses": [p.to_dict() for p in self.pulses],
            "signals": {name: format_waveform(w) for name, w in self.signals.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def summary(self, with_name: bool = True) -> str:
        """One-line text verdict as printed by the command line tool."""
        if not self.hazardous:
            return f"no hazard on {self.output_name}" if with_name else "no hazard"
        pulses = "".join(f"; pulse [{p.start}, {p.end}), width {p.width}" for p in self.pulses)
        return f"{self.classification.label} hazard on {self.output_name}: {self.expression_text}{pulses}"


def _gate_waveform(kind: str, operands: list[Waveform]) -> Waveform:
    if kind == "NOT":
        return wf_not(operands[0])
    if kind == "XOR":
        return wf_xor(*operands)
    if kind in ("AND", "NAND"):
        w = reduce(wf_and, operands)
    else:
        w = reduce(wf_or, operands)
    return wf_not(w) if kind in ("NAND", "NOR") else w


def propagate(netlist: Netlist, inputs: Mapping[str, Waveform]) -> dict[str, Waveform]:
    """Waveform of every primary input and gate output.

    Each gate sees its inputs shifted by their pure delays, e.g. an AND with
    delay ``tau`` on both inputs produces ``f1(t - tau) * f2(t - tau)``.
    """
    missing = [n for n in netlist.primary_inputs if n not in inputs]
    if missing:
        raise ValueError(f"no waveform for primary inputs {', '.join(missing)}")
    signals = {n: inputs[n] for n in netlist.primary_inputs}
    for g in topo_order(netlist):
        try:
            delayed = [wf_delay(signals[s], d) for s, d in zip(g.inputs, g.input_delays)]
            signals[g.name] = _gate_waveform(g.kind, delayed)
        except AmbiguousOrdering as err:
            raise AmbiguousOrdering(err.a, err.b, gate=g.name) from err
    return signals


@lru_cache(maxsize=256)
def _output_poly(netlist: Netlist, out: str):
    return arithmetize(netlist.expr_for(out))


def ideal_output(netlist: Netlist, vector: Mapping[str, Bit], out: str) -> Bit:
    """Zero-delay value of ``out`` under an input vector, via the polynomial form."""
    return poly_eval(_output_poly(netlist, out), vector)


def extract_pulses(w: Waveform, ideal_before: Bit, ideal_after: Bit) -> list[Pulse]:
    """Excursions away from the steady level, as ``[start, end)`` pairs.

    For a changing output the last step is taken as the real transition and
    the pulses are the excursions before it.
    """
    steps = list(w.steps)
    if ideal_before != ideal_after:
        steps = steps[:-1]
    return [Pulse(a, b, b - a) for a, b in zip(steps[0::2], steps[1::2])]


def classify_waveform(w: Waveform, ideal_before: Bit, ideal_after: Bit) -> Hazard:
    n = transition_count(w)
    expected = 0 if ideal_before == ideal_after else 1
    if n == expected:
        return Hazard.NONE
    if ideal_before == ideal_after:
        if n >= 2:
            return Hazard.STATIC1 if ideal_before else Hazard.STATIC0
    elif n >= 3:
        return Hazard.DYNAMIC
    raise AssertionError(f"waveform {w} inconsistent with ideal {ideal_before}->{ideal_after}")


def classify(netlist: Netlist, stimulus: Stimulus, out: str | None = None) -> HazardReport:
    """Run the stimulus through the netlist and classify the output waveform."""
    stimulus.check(netlist)
    if out is None:
        out = netlist.primary_outputs[0][0]
    signals = propagate(netlist, stimulus_waveforms(stimulus))
    w = signals[netlist.driver(out)]
    before = ideal_output(netlist, stimulus.from_vector, out)
    after = ideal_output(netlist, stimulus.to_vector, out)
    kind = classify_waveform(w, before, after)
    pulses = tuple(extract_pulses(w, before, after)) if kind is not Hazard.NONE else ()
    return HazardReport(out, kind, before, after, w, pulses, signals)


def analyze_outputs(netlist: Netlist, stimulus: Stimulus) -> list[HazardReport]:
    return [classify(netlist, stimulus, out) for out, _ in netlist.primary_outputs]


def transition_pairs(n_inputs: int, mode: str = "hamming1"):
    """Ordered ``(from, to)`` vector pairs as integers, sorted."""
    size = 1 << n_inputs
    if mode == "hamming1":
        for a in range(size):
            for b in sorted(a ^ (1 << i) for i in range(n_inputs)):
                yield a, b
    elif mode in ("all_pairs", "all"):
        if n_inputs > ALL_PAIRS_INPUT_LIMIT:
            raise TooManyInputs(f"{n_inputs} inputs; all_pairs mode allows at most {ALL_PAIRS_INPUT_LIMIT}")
        for a in range(size):
            for b in range(size):
                if a != b:
                    yield a, b
    else:
        raise ValueError(f"unknown enumeration mode {mode!r}")


def enumerate_transitions(
    netlist: Netlist, out: str | None = None, mode: str = "hamming1"
) -> list[tuple[Stimulus, HazardReport]]:
    """Every hazardous truth-table transition, switch time 0, ordered by (from, to)."""
    if out is None:
        out = netlist.primary_outputs[0][0]
    n = len(netlist.primary_inputs)
    found = []
    for a, b in transition_pairs(n, mode):
        stim = Stimulus.from_ints(netlist, a, b, 0)
        report = classify(netlist, stim, out)
        if report.hazardous:
            found.append((stim, report))
    return found
