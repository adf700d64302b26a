"""Concrete-delay event-driven gate simulator.

This is the ground truth the symbolic engine is checked against.  It shares
nothing with :mod:`hazardscan.waveform` except the netlist data model: values
are plain bits, time is a ``Fraction`` and an event queue does the work.

Each gate input has its own delay line.  Changes arriving on lines at the
same instant are all applied before the gate is re-evaluated, so a gate
output changes at most once per instant.  Gates are evaluated in
topological order, which lets zero-delay lines settle within the instant.
"""

from __future__ import annotations

import heapq
import io
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .circuit import Netlist, Stimulus, topo_order
from .errors import NonPositiveDelay
from .expr import Bit
from .waveform import Waveform, to_fraction, wf_eval

_GATE_FN = {
    "NOT": lambda v: 1 - v[0],
    "AND": lambda v: int(all(v)),
    "OR": lambda v: int(any(v)),
    "NAND": lambda v: int(not all(v)),
    "NOR": lambda v: int(not any(v)),
    "XOR": lambda v: v[0] ^ v[1],
}


@dataclass(frozen=True, order=True)
class Event:
    time: Fraction
    signal: str
    new_value: Bit


@dataclass
class Trace:
    signals: tuple
    initial: dict
    events: dict
    final: dict
    settle_time: Fraction
    switch_time: Fraction = Fraction(0)

    def value_at(self, signal: str, t) -> Bit:
        """Value at ``t``; a change at exactly ``t`` is already visible."""
        t = to_fraction(t)
        v = self.initial[signal]
        for ev in self.events[signal]:
            if ev.time > t:
                break
            v = ev.new_value
        return v

    def event_times(self) -> list[Fraction]:
        return sorted({ev.time for evs in self.events.values() for ev in evs})

    def all_events(self) -> list[Event]:
        return sorted(ev for evs in self.events.values() for ev in evs)


def _check_delays(netlist: Netlist, delays: Mapping[str, Fraction]) -> dict:
    out = {}
    for sym in sorted(netlist.delay_symbols()):
        if sym in delays:
            val = to_fraction(delays[sym])
            if val <= 0:
                raise NonPositiveDelay(f"delay symbol {sym} = {val}; delays must be positive")
            out[sym] = val
    return out


def simulate(
    netlist: Netlist,
    stimulus: Stimulus,
    delays: Mapping[str, Fraction] | None = None,
    delay_model: str = "pure",
) -> Trace:
    """Event-driven run of one stimulus.

    ``delay_model="pure"`` forwards every change after the line delay.
    ``"inertial"`` drops a change that would revert a still-pending one on
    the same line, i.e. pulses strictly narrower than the line delay.
    """
    if delay_model not in ("pure", "inertial"):
        raise ValueError(f"unknown delay model {delay_model!r}")
    stimulus.check(netlist)
    sym = _check_delays(netlist, delays or {})
    gates = topo_order(netlist)
    pos = {g.name: i for i, g in enumerate(gates)}
    line_delay = [[d.evaluate(sym) for d in g.input_delays] for g in gates]
    consumers: dict[str, list[tuple[int, int]]] = {}
    for i, g in enumerate(gates):
        for k, src in enumerate(g.inputs):
            consumers.setdefault(src, []).append((i, k))

    value = dict(stimulus.from_vector)
    for g in gates:
        value[g.name] = _GATE_FN[g.kind]([value[s] for s in g.inputs])
    initial = dict(value)
    line = [[value[s] for s in g.inputs] for g in gates]
    events: dict[str, list[Event]] = {s: [] for s in netlist.signals}

    queue: list = []
    seq = 0
    pending: dict[tuple[int, int], tuple] = {}
    cancelled: set[int] = set()

    def drive(name, new, now, dirty):
        nonlocal seq
        value[name] = new
        events[name].append(Event(now, name, new))
        for i, k in consumers.get(name, ()):
            d = line_delay[i][k]
            if d == 0:
                line[i][k] = new
                dirty.add(i)
                continue
            if delay_model == "inertial" and (i, k) in pending:
                # the previous change has not reached the gate yet: both vanish
                cancelled.add(pending.pop((i, k))[1])
                continue
            seq += 1
            heapq.heappush(queue, (now + d, gates[i].name, k, seq, new))
            pending[(i, k)] = (now + d, seq)

    now = stimulus.switch_time
    dirty: set[int] = set()
    for name in netlist.primary_inputs:
        if stimulus.to_vector[name] != value[name]:
            drive(name, stimulus.to_vector[name], now, dirty)
    while True:
        _settle(gates, line, value, dirty, drive, now)
        if not queue:
            break
        now = queue[0][0]
        dirty = set()
        while queue and queue[0][0] == now:
            _, gname, k, s, new = heapq.heappop(queue)
            if s in cancelled:
                continue
            i = pos[gname]
            if pending.get((i, k), (None, None))[1] == s:
                del pending[(i, k)]
            line[i][k] = new
            dirty.add(i)

    last = max((evs[-1].time for evs in events.values() if evs), default=stimulus.switch_time)
    return Trace(
        tuple(netlist.signals), initial, events, dict(value), last, stimulus.switch_time
    )


def _settle(gates, line, value, dirty, drive, now):
    for i, g in enumerate(gates):
        if i not in dirty:
            continue
        new = _GATE_FN[g.kind](line[i])
        if new != value[g.name]:
            drive(g.name, new, now, dirty)


# ---------------------------------------------------------------------------
# Cross-check against symbolic waveforms


@dataclass(frozen=True)
class Divergence:
    signal: str
    time: Fraction
    trace_value: Bit
    waveform_value: Bit


@dataclass
class Agreement:
    per_signal: dict
    first_divergence: Divergence | None = None
    sample_times: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return all(self.per_signal.values())


def trace_vs_waveform(
    trace: Trace, waveforms: Mapping[str, Waveform], delays: Mapping[str, Fraction] | None = None
) -> Agreement:
    """Compare simulated values with symbolic waveforms evaluated at the same delays.

    Values are checked at every event time of either side and just before
    it (half the smallest gap between distinct instants earlier), plus once
    before the switch and once after everything has settled.
    """
    delays = {k: to_fraction(v) for k, v in (delays or {}).items()}
    names = [n for n in waveforms if n in trace.initial]
    missing = [n for n in waveforms if n not in trace.initial]
    points = set(trace.event_times()) | {trace.switch_time}
    for n in names:
        points.update(s.evaluate(delays) for s in waveforms[n].steps)
    points = sorted(points)
    gaps = [b - a for a, b in zip(points, points[1:])]
    eps = min(gaps) / 2 if gaps else Fraction(1, 2)
    samples = sorted({p - eps for p in points} | set(points) | {points[-1] + 1})

    per_signal = {n: True for n in names}
    per_signal.update({n: False for n in missing})
    first = None
    for t in samples:
        for n in names:
            if not per_signal[n]:
                continue
            tv = trace.value_at(n, t)
            wv = wf_eval(waveforms[n], t, delays)
            if tv != wv:
                per_signal[n] = False
                if first is None:
                    first = Divergence(n, t, tv, wv)
    return Agreement(per_signal, first, samples)


# ---------------------------------------------------------------------------
# Output formats


def _vcd_id(i: int) -> str:
    chars = [chr(c) for c in range(33, 127)]
    out = ""
    while True:
        out = chars[i % len(chars)] + out
        i = i // len(chars) - 1
        if i < 0:
            return out


def write_vcd(trace: Trace, dest=None, timescale: str = "1ps", signals=None) -> str:
    """Write the trace as a Value Change Dump.

    Times are multiplied by the LCM of their denominators so the VCD
    timestamps are integers; the factor is recorded in a ``$comment``.
    Returns the text; ``dest`` may be a path or a writable text file.
    """
    signals = list(signals or trace.signals)
    times = [trace.switch_time] + [ev.time for n in signals for ev in trace.events[n]]
    if any(t < 0 for t in times):
        raise ValueError("VCD cannot hold negative times; shift the stimulus")
    scale = 1
    for t in times:
        scale = scale * t.denominator // math.gcd(scale, t.denominator)
    ids = {n: _vcd_id(i) for i, n in enumerate(signals)}

    buf = io.StringIO()
    buf.write(f"$comment hazardscan trace; 1 tick = 1/{scale} time unit $end\n")
    buf.write(f"$timescale {timescale} $end\n")
    buf.write("$scope module top $end\n")
    for n in signals:
        buf.write(f"$var wire 1 {ids[n]} {n} $end\n")
    buf.write("$upscope $end\n$enddefinitions $end\n")
    buf.write("#0\n$dumpvars\n")
    for n in signals:
        buf.write(f"{trace.initial[n]}{ids[n]}\n")
    buf.write("$end\n")
    by_time: dict[Fraction, list[Event]] = {}
    for n in signals:
        for ev in trace.events[n]:
            by_time.setdefault(ev.time, []).append(ev)
    for t in sorted(by_time):
        buf.write(f"#{int(t * scale)}\n")
        for ev in by_time[t]:
            buf.write(f"{ev.new_value}{ids[ev.signal]}\n")
    text = buf.getvalue()
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="ascii") as fh:
            fh.write(text)
    elif dest is not None:
        dest.write(text)
    return text


_HIGH, _LOW, _EDGE = "▔", "_", "|"


def render_ascii(trace: Trace, width: int = 60, signals=None, color: bool | None = None) -> str:
    """One row per signal: ``_`` low, ``▔`` high, ``|`` at a change.

    Colour follows ``HAZARD_COLOR=1`` unless ``color`` is given.
    """
    if color is None:
        color = os.environ.get("HAZARD_COLOR", "0") == "1"
    signals = list(signals or trace.signals)
    t0 = trace.switch_time
    t1 = max(trace.settle_time, t0)
    span = t1 - t0
    margin = span / 8 if span else Fraction(1)
    start, stop = t0 - margin, t1 + margin
    step = (stop - start) / width
    label = max((len(n) for n in signals), default=0)

    rows = []
    for n in signals:
        cells = []
        for c in range(width):
            cells.append(_HIGH if trace.value_at(n, start + c * step) else _LOW)
        for ev in trace.events[n]:
            cells[min(width - 1, int((ev.time - start) / step))] = _EDGE
        line = "".join(cells)
        if color:
            line = line.replace(_EDGE, f"\x1b[33m{_EDGE}\x1b[0m").replace(_HIGH, f"\x1b[32m{_HIGH}\x1b[0m")
        rows.append(f"{n.rjust(label)} {line}")
    axis = f"{'t'.rjust(label)} {_fmt(start)}".ljust(label + 1 + width - len(_fmt(stop))) + _fmt(stop)
    rows.append(axis)
    return "\n".join(rows)


def _fmt(t: Fraction) -> str:
    return f"{float(t):g}"
