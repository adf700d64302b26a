"""Gate-level netlists with a pure delay on every gate input.

Text format (line oriented, ``#`` starts a comment)::

    input  X1 X2 X3 X4
    gate   N1 NOT X3            delay=tau
    gate   A1 AND X1 X2         delay=tau
    gate   A2 AND N1 X4         delays=tau,2*tau
    gate   O1 OR  A1 A2
    output Y = O1

``delay=`` sets the delay of every input of the gate, ``delays=`` sets them
positionally (an empty slot keeps the ``delay=`` value).  A gate without
either gets ``tau`` on every input.  Gates may be listed in any order as
long as the connection graph is acyclic.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import expr as ex
from .errors import (
    ArityError,
    CycleDetected,
    DuplicateName,
    NegativeDelay,
    ParseError,
    UndefinedSignal,
)
from .waveform import SymbolicTime, Waveform, as_time, parse_time, to_fraction

GATE_KINDS = ("NOT", "AND", "OR", "NAND", "NOR", "XOR")
DEFAULT_DELAY = SymbolicTime.of(tau=1)

_EXPR_NODE = {"AND": ex.And, "OR": ex.Or, "NAND": ex.Nand, "NOR": ex.Nor, "XOR": ex.Xor}


def check_arity(kind: str, n: int, name: str = "?") -> None:
    if kind == "NOT":
        ok, want = n == 1, "exactly 1"
    elif kind == "XOR":
        ok, want = n == 2, "exactly 2"
    else:
        ok, want = n >= 2, "at least 2"
    if not ok:
        raise ArityError(f"gate {name}: {kind} takes {want} inputs, got {n}")


@dataclass(frozen=True)
class Gate:
    name: str
    kind: str
    inputs: tuple
    input_delays: tuple = None

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "inputs", tuple(self.inputs))
        check_arity(kind, len(self.inputs), self.name)
        delays = self.input_delays
        if delays is None:
            delays = (DEFAULT_DELAY,) * len(self.inputs)
        elif isinstance(delays, (str, SymbolicTime, int, Fraction)):
            delays = (delays,) * len(self.inputs)
        delays = tuple(parse_time(d) if isinstance(d, str) else as_time(d) for d in delays)
        if len(delays) != len(self.inputs):
            raise ArityError(f"gate {self.name}: {len(delays)} delays for {len(self.inputs)} inputs")
        for d in delays:
            if d.constant < 0:
                raise NegativeDelay(f"gate {self.name}: negative delay {d}")
        object.__setattr__(self, "input_delays", delays)

    def expr(self, operands) -> ex.BoolExpr:
        if self.kind == "NOT":
            return ex.Not(operands[0])
        return _EXPR_NODE[self.kind](tuple(operands))


@dataclass(frozen=True)
class Netlist:
    primary_inputs: tuple
    gates: tuple
    primary_outputs: tuple = ()
    order: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "primary_inputs", tuple(self.primary_inputs))
        object.__setattr__(self, "gates", tuple(self.gates))
        outs = self.primary_outputs
        outs = tuple(outs.items()) if isinstance(outs, Mapping) else tuple(tuple(o) for o in outs)
        object.__setattr__(self, "primary_outputs", outs)

        seen = set()
        for name in list(self.primary_inputs) + [g.name for g in self.gates]:
            if name in seen:
                raise DuplicateName(f"signal {name} defined twice")
            seen.add(name)
        for g in self.gates:
            for src in g.inputs:
                if src not in seen:
                    raise UndefinedSignal(f"gate {g.name} reads undefined signal {src}")
        out_names = set()
        for out, src in outs:
            if out in out_names or (out in seen and out != src):
                raise DuplicateName(f"output {out} clashes with another name")
            if src not in seen:
                raise UndefinedSignal(f"output {out} driven by undefined signal {src}")
            out_names.add(out)
        object.__setattr__(self, "order", _topo_sort(self.gates, set(self.primary_inputs)))

    @property
    def outputs(self) -> dict[str, str]:
        return dict(self.primary_outputs)

    @property
    def signals(self) -> list[str]:
        return list(self.primary_inputs) + [g.name for g in self.gates]

    def gate(self, name: str) -> Gate:
        for g in self.gates:
            if g.name == name:
                return g
        raise KeyError(name)

    def driver(self, signal_or_output: str) -> str:
        """Signal behind an output name; signal names map to themselves."""
        return self.outputs.get(signal_or_output, signal_or_output)

    def delay_symbols(self) -> frozenset[str]:
        return frozenset(s for g in self.gates for d in g.input_delays for s in d.symbols)

    def substitute(self, delays: Mapping[str, Fraction]) -> "Netlist":
        """Copy with the given delay symbols replaced by numbers."""
        gates = tuple(
            Gate(g.name, g.kind, g.inputs, tuple(d.substitute(delays) for d in g.input_delays))
            for g in self.gates
        )
        return Netlist(self.primary_inputs, gates, self.primary_outputs)

    def map_delays(self, fn) -> "Netlist":
        gates = tuple(
            Gate(g.name, g.kind, g.inputs, tuple(fn(d) for d in g.input_delays)) for g in self.gates
        )
        return Netlist(self.primary_inputs, gates, self.primary_outputs)

    def expr_for(self, signal: str) -> ex.BoolExpr:
        """Zero-delay Boolean function of a signal or output over the primary inputs."""
        by_name = {g.name: g for g in self.gates}
        memo: dict[str, ex.BoolExpr] = {}

        def build(name):
            if name in memo:
                return memo[name]
            if name in by_name:
                g = by_name[name]
                memo[name] = g.expr([build(s) for s in g.inputs])
            else:
                memo[name] = ex.Var(name)
            return memo[name]

        return build(self.driver(signal))


def _topo_sort(gates, primary_inputs) -> tuple:
    # Kahn's algorithm; the ready set is a heap keyed on declaration index
    index = {g.name: i for i, g in enumerate(gates)}
    pending = {}
    consumers: dict[str, list[int]] = {}
    ready = []
    for i, g in enumerate(gates):
        drivers = {s for s in g.inputs if s in index}
        pending[i] = len(drivers)
        for s in drivers:
            consumers.setdefault(s, []).append(i)
        if not drivers:
            heapq.heappush(ready, i)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(gates[i])
        for j in consumers.get(gates[i].name, ()):
            pending[j] -= 1
            if pending[j] == 0:
                heapq.heappush(ready, j)
    if len(order) != len(gates):
        stuck = sorted(gates[i].name for i, n in pending.items() if n > 0)
        raise CycleDetected(f"combinational loop through gates {', '.join(stuck)}")
    return tuple(order)


def topo_order(netlist: Netlist) -> list[Gate]:
    """Gates with every driver before its consumers; ties keep declaration order."""
    return list(netlist.order)


# ---------------------------------------------------------------------------
# Text format


_OPTION = re.compile(r"\s(delays?)\s*=")


def _col(raw: str, token: str, start: int = 0) -> int:
    return raw.find(token, start) + 1


def parse_netlist(text: str) -> Netlist:
    inputs: list[str] = []
    gates: list[Gate] = []
    outputs: list[tuple[str, str]] = []
    where: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        words = line.split()
        keyword = words[0].lower()
        if keyword == "input":
            if len(words) < 2:
                raise ParseError("input needs at least one name", lineno, len(line) + 1)
            for w in words[1:]:
                _check_ident(w, lineno, raw)
                if w in where:
                    raise DuplicateName(f"line {lineno}: signal {w} already defined on line {where[w]}")
                where[w] = lineno
                inputs.append(w)
        elif keyword == "gate":
            gates.append(_parse_gate_line(line, raw, lineno, where))
        elif keyword == "output":
            body = line.split(None, 1)[1] if len(words) > 1 else ""
            if "=" in body:
                out, src = (p.strip() for p in body.split("=", 1))
            else:
                out = src = body.strip()
            for w in (out, src):
                if not w:
                    raise ParseError("output needs a name", lineno, len(line) + 1)
                _check_ident(w, lineno, raw)
            outputs.append((out, src))
        else:
            raise ParseError(f"unknown keyword {words[0]!r}", lineno, _col(raw, words[0]))

    known = set(where)
    for g in gates:
        for src in g.inputs:
            if src not in known:
                raise UndefinedSignal(
                    f"line {where[g.name]}: gate {g.name} reads undefined signal {src}"
                )
    for out, src in outputs:
        if src not in known:
            raise UndefinedSignal(f"output {out} driven by undefined signal {src}")
    return Netlist(tuple(inputs), tuple(gates), tuple(outputs))


def _check_ident(word, lineno, raw):
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", word):
        raise ParseError(f"invalid name {word!r}", lineno, _col(raw, word))


def _parse_gate_line(line, raw, lineno, where) -> Gate:
    m = _OPTION.search(line)
    head, opts = (line[: m.start()], line[m.start():]) if m else (line, "")
    words = head.split()
    if len(words) < 3:
        raise ParseError("expected: gate NAME KIND INPUT...", lineno, len(line) + 1)
    _, name, kind, *ins = words
    _check_ident(name, lineno, raw)
    if kind.upper() not in GATE_KINDS:
        raise ParseError(f"unknown gate kind {kind!r}", lineno, _col(raw, kind))
    for w in ins:
        _check_ident(w, lineno, raw)
    check_arity(kind.upper(), len(ins), name)
    if name in where:
        raise DuplicateName(f"line {lineno}: signal {name} already defined on line {where[name]}")
    where[name] = lineno

    common = DEFAULT_DELAY
    positional = None
    for key, value in re.findall(r"(delays?)\s*=\s*(.*?)(?=\s+delays?\s*=|$)", opts.strip()):
        try:
            if key == "delay":
                common = parse_time(value)
            else:
                positional = [v.strip() for v in value.split(",")]
        except ParseError as err:
            raise ParseError(f"gate {name}: {err.message}", lineno, _col(raw, value)) from None
    delays = [common] * len(ins)
    if positional is not None:
        if len(positional) != len(ins):
            raise ArityError(f"line {lineno}: gate {name} lists {len(positional)} delays for {len(ins)} inputs")
        for i, v in enumerate(positional):
            if v:
                try:
                    delays[i] = parse_time(v)
                except ParseError as err:
                    raise ParseError(f"gate {name}: {err.message}", lineno, _col(raw, v)) from None
    return Gate(name, kind, tuple(ins), tuple(delays))


def format_netlist(netlist: Netlist) -> str:
    """Text form that :func:`parse_netlist` reads back to an equal Netlist."""
    lines = []
    if netlist.primary_inputs:
        lines.append("input  " + " ".join(netlist.primary_inputs))
    width = max((len(g.name) + len(g.kind) + sum(len(s) + 1 for s in g.inputs) for g in netlist.gates), default=0)
    for g in netlist.gates:
        body = f"{g.name} {g.kind} {' '.join(g.inputs)}"
        if len(set(g.input_delays)) == 1:
            opt = f"delay={g.input_delays[0]}"
        else:
            opt = "delays=" + ",".join(str(d) for d in g.input_delays)
        lines.append(f"gate   {body.ljust(width + 2)} {opt}")
    for out, src in netlist.primary_outputs:
        lines.append(f"output {out} = {src}")
    return "\n".join(lines) + "\n"


def netlist_from_expr(e: ex.BoolExpr | str, output: str = "Y", delay="tau") -> Netlist:
    """One gate per operator of ``e``, every input delayed by ``delay``.

    Repeated subexpressions are shared.  Gate names are ``G1, G2, ...`` in
    bottom-up order.
    """
    if isinstance(e, str):
        e = ex.parse_expr(e)
    inputs = sorted(ex.variables(e))
    gates: list[Gate] = []
    memo: dict = {}

    def build(node):
        if node in memo:
            return memo[node]
        if isinstance(node, ex.Var):
            return node.name
        if isinstance(node, ex.Const):
            raise ValueError("constants have no gate; simplify the expression first")
        if isinstance(node, ex.Not):
            kind, operands = "NOT", [node.child]
        else:
            kind = type(node).__name__.upper()
            operands = node.children
        srcs = [build(c) for c in operands]
        name = f"G{len(gates) + 1}"
        gates.append(Gate(name, kind, tuple(srcs), delay))
        memo[node] = name
        return name

    top = build(e)
    return Netlist(tuple(inputs), tuple(gates), ((output, top),))


# ---------------------------------------------------------------------------
# Stimuli


@dataclass(frozen=True)
class Stimulus:
    """One truth-table transition: ``from_vector`` until ``switch_time``, then ``to_vector``."""

    from_vector: Mapping[str, int]
    to_vector: Mapping[str, int]
    switch_time: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "from_vector", {k: ex.check_bit(v) for k, v in dict(self.from_vector).items()})
        object.__setattr__(self, "to_vector", {k: ex.check_bit(v) for k, v in dict(self.to_vector).items()})
        object.__setattr__(self, "switch_time", to_fraction(self.switch_time))
        if set(self.from_vector) != set(self.to_vector):
            raise ValueError("from and to vectors assign different inputs")

    @classmethod
    def from_bits(cls, netlist: Netlist, frm: str, to: str, at=0) -> "Stimulus":
        """Bit strings in input declaration order, e.g. ``"1111"`` -> ``"1001"``."""
        names = netlist.primary_inputs
        for bits in (frm, to):
            if len(bits) != len(names) or set(bits) - {"0", "1"}:
                raise ValueError(f"expected {len(names)} bits for inputs {' '.join(names)}, got {bits!r}")
        return cls(dict(zip(names, map(int, frm))), dict(zip(names, map(int, to))), at)

    @classmethod
    def from_ints(cls, netlist: Netlist, frm: int, to: int, at=0) -> "Stimulus":
        n = len(netlist.primary_inputs)
        return cls.from_bits(netlist, format(frm, f"0{n}b") if n else "", format(to, f"0{n}b") if n else "", at)

    def bits(self, netlist: Netlist) -> tuple[str, str]:
        names = netlist.primary_inputs
        return (
            "".join(str(self.from_vector[n]) for n in names),
            "".join(str(self.to_vector[n]) for n in names),
        )

    def check(self, netlist: Netlist) -> None:
        if set(self.from_vector) != set(netlist.primary_inputs):
            raise ValueError(
                f"stimulus assigns {sorted(self.from_vector)}, netlist inputs are {list(netlist.primary_inputs)}"
            )


def stimulus_waveforms(s: Stimulus) -> dict[str, Waveform]:
    """Constant waveform per unchanged input, a single step at the switch time otherwise."""
    out = {}
    for name, before in s.from_vector.items():
        if before == s.to_vector[name]:
            out[name] = Waveform.constant(before)
        else:
            out[name] = Waveform.step(s.switch_time, initial=before)
    return out
