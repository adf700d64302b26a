"""Reference circuits and a random netlist generator for tests and demos."""

from __future__ import annotations

import random
from fractions import Fraction

from .circuit import GATE_KINDS, Gate, Netlist, parse_netlist
from .waveform import SymbolicTime

# Y = X1 X2 | !X3 X4, every gate input delayed by tau
FIG1_TEXT = """\
input  X1 X2 X3 X4
gate   N1 NOT X3            delay=tau
gate   A1 AND X1 X2         delay=tau
gate   A2 AND N1 X4         delay=tau
gate   O1 OR  A1 A2         delay=tau
output Y = O1
"""

# Y = X B | !X C, the textbook static-1 hazard when X falls with B = C = 1
MUX_TEXT = """\
input  X B C
gate   NX NOT X            delay=tau
gate   P  AND X B          delay=tau
gate   Q  AND NX C         delay=tau
gate   Y1 OR  P Q          delay=tau
output Y = Y1
"""

# same function with the consensus term B C added
MUX_CONSENSUS_TEXT = """\
input  X B C
gate   NX NOT X            delay=tau
gate   P  AND X B          delay=tau
gate   Q  AND NX C         delay=tau
gate   R  AND B C          delay=tau
gate   Y1 OR  P Q R        delay=tau
output Y = Y1
"""


def fig1() -> Netlist:
    return parse_netlist(FIG1_TEXT)


def mux() -> Netlist:
    return parse_netlist(MUX_TEXT)


def mux_consensus() -> Netlist:
    return parse_netlist(MUX_CONSENSUS_TEXT)


DELAY_STYLES = ("concrete", "tau", "mixed", "two_symbols", "zero")


def _random_delay(rng: random.Random, style: str) -> SymbolicTime:
    if style == "zero":
        return SymbolicTime()
    if style == "concrete":
        return SymbolicTime(Fraction(rng.randint(1, 12), rng.randint(1, 4)))
    if style == "tau":
        return SymbolicTime.of(0, tau=rng.randint(1, 3))
    if style == "mixed":
        return SymbolicTime.of(Fraction(rng.randint(0, 2), 2), tau=rng.randint(1, 2))
    if style == "two_symbols":
        return SymbolicTime.of(0, **{rng.choice(("tau", "delta")): rng.randint(1, 2)})
    raise ValueError(f"unknown delay style {style!r}")


def random_netlist(
    rng: random.Random,
    n_inputs: int = 4,
    n_gates: int = 8,
    delay_style: str = "concrete",
    kinds=GATE_KINDS,
    shuffle: bool = True,
) -> Netlist:
    """Random acyclic netlist; the last gate drives output ``Y``.

    Gates read from primary inputs or earlier gates, so the graph is a DAG
    by construction.  With ``shuffle`` the declaration order is permuted to
    exercise the topological sort.
    """
    inputs = [f"I{i}" for i in range(n_inputs)]
    signals = list(inputs)
    gates = []
    for gi in range(n_gates):
        kind = rng.choice(kinds)
        if kind == "NOT":
            arity = 1
        elif kind == "XOR":
            arity = 2
        else:
            arity = rng.choice((2, 2, 2, 3))
        # prefer recent signals so the circuit gets some depth
        srcs = [signals[max(0, len(signals) - 1 - int(rng.expovariate(0.5)))] if rng.random() < 0.6
                else rng.choice(signals) for _ in range(arity)]
        delays = tuple(_random_delay(rng, delay_style) for _ in srcs)
        name = f"G{gi}"
        gates.append(Gate(name, kind, tuple(srcs), delays))
        signals.append(name)
    outputs = [("Y", gates[-1].name)]
    if n_gates > 2 and rng.random() < 0.3:
        outputs.append(("Z", rng.choice(gates[:-1]).name))
    if shuffle:
        rng.shuffle(gates)
    return Netlist(tuple(inputs), tuple(gates), tuple(outputs))
