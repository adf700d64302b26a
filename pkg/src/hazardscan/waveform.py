"""Binary step signals with transition instants affine in delay symbols.

A :class:`Waveform` is a value for ``t -> -inf`` plus a strictly increasing
list of toggle instants.  Its Heaviside form is::

    initial + sum_i s_i * h(t - tau_i),  h(x) = 1 for x >= 0 else 0

with alternating signs ``s_i``.  Step instants are :class:`SymbolicTime`
values ``c + k1*tau1 + k2*tau2 + ...`` where the ``tau`` are positive delay
symbols.  Two instants are ordered only when the order holds for every
positive assignment of the symbols; otherwise operations that need the order
raise :class:`~hazardscan.errors.AmbiguousOrdering`.

All arithmetic is exact (``fractions.Fraction``): a hazard is a question of
whether two steps cancel, which rounding would decide arbitrarily.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import AmbiguousOrdering, MissingDelayAssignment, NegativeDelay, ParseError
from .expr import Bit, check_bit

Delays = Mapping[str, Fraction]


def to_fraction(value) -> Fraction:
    """Exact conversion; floats go through ``str`` so ``0.1`` means 1/10."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """``5``, ``1.5``, ``-0.25`` when the decimal is exact, ``1/3`` otherwise."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    places = max(twos, fives)
    scaled = abs(q.numerator) * (10 ** places // q.denominator)
    sign = "-" if q < 0 else ""
    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class SymbolicTime:
    """``constant + sum(k * symbol)`` with integer coefficients ``k >= 0``."""

    constant: Fraction = Fraction(0)
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "constant", to_fraction(self.constant))
        items = dict(self.coeffs) if not isinstance(self.coeffs, Mapping) else self.coeffs
        clean = []
        for name, k in sorted(items.items()):
            if int(k) != k:
                raise ValueError(f"coefficient of {name} must be an integer, got {k!r}")
            if k < 0:
                raise NegativeDelay(f"negative coefficient {k} for delay symbol {name}")
            if k:
                clean.append((name, int(k)))
        object.__setattr__(self, "coeffs", tuple(clean))

    @classmethod
    def of(cls, constant=0, **coeffs) -> "SymbolicTime":
        """``SymbolicTime.of(5, tau=2)`` is ``5 + 2*tau``."""
        return cls(constant, coeffs)

    @classmethod
    def parse(cls, text: str) -> "SymbolicTime":
        return parse_time(text)

    @property
    def symbols(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.coeffs)

    def coeff(self, name: str) -> int:
        return dict(self.coeffs).get(name, 0)

    def is_concrete(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        if not isinstance(other, SymbolicTime):
            try:
                other = SymbolicTime(to_fraction(other))
            except (TypeError, ValueError):
                return NotImplemented
        acc = dict(self.coeffs)
        for name, k in other.coeffs:
            acc[name] = acc.get(name, 0) + k
        return SymbolicTime(self.constant + other.constant, acc)

    __radd__ = __add__

    def __sub__(self, other: "SymbolicTime") -> "SymbolicTime":
        """Difference; defined only when no symbol coefficient goes negative."""
        acc = dict(self.coeffs)
        for name, k in other.coeffs:
            acc[name] = acc.get(name, 0) - k
        return SymbolicTime(self.constant - other.constant, acc)

    def evaluate(self, delays: Delays) -> Fraction:
        total = self.constant
        for name, k in self.coeffs:
            try:
                total += k * to_fraction(delays[name])
            except KeyError:
                raise MissingDelayAssignment(name) from None
        return total

    def substitute(self, delays: Delays) -> "SymbolicTime":
        """Replace the assigned symbols by their values, keep the others."""
        const = self.constant
        rest = {}
        for name, k in self.coeffs:
            if name in delays:
                const += k * to_fraction(delays[name])
            else:
                rest[name] = k
        return SymbolicTime(const, rest)

    def __str__(self):
        parts = []
        if self.constant != 0 or not self.coeffs:
            parts.append(format_rational(self.constant))
        for name, k in self.coeffs:
            parts.append(name if k == 1 else f"{k}*{name}")
        return "+".join(parts)

    def __repr__(self):
        return f"SymbolicTime({self})"


def as_time(value) -> SymbolicTime:
    return value if isinstance(value, SymbolicTime) else SymbolicTime(to_fraction(value))


_TIME_TERM = re.compile(r"\s*(?:(\d+/\d+|\d+(?:\.\d*)?|\.\d+)(?:\s*\*\s*([A-Za-z_]\w*))?|([A-Za-z_]\w*))\s*")


def parse_time(text: str) -> SymbolicTime:
    """Parse ``1.5+2*tau+delta``.

    Terms are nonnegative constants (``2``, ``0.5`` or ``1/3``), symbols and
    ``k*symbol`` with an integer ``k``; repeated terms add up.
    """
    const = Fraction(0)
    coeffs: dict[str, int] = {}
    pos = 0
    if not text.strip():
        raise ParseError("empty delay expression", 1, 1)
    while True:
        m = _TIME_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"bad delay term in {text!r}", 1, pos + 1)
        number, sym_after, sym = m.groups()
        if sym is not None:
            coeffs[sym] = coeffs.get(sym, 0) + 1
        elif sym_after is not None:
            k = Fraction(number)
            if k.denominator != 1:
                raise ParseError(f"coefficient of {sym_after} must be an integer", 1, m.start(1) + 1)
            coeffs[sym_after] = coeffs.get(sym_after, 0) + int(k)
        else:
            try:
                const += Fraction(number)
            except ZeroDivisionError:
                raise ParseError(f"zero denominator in {text!r}", 1, m.start(1) + 1) from None
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != "+":
            raise ParseError(f"expected '+' in {text!r}", 1, pos + 1)
        pos += 1
    return SymbolicTime(const, coeffs)


def compare_times(a: SymbolicTime, b: SymbolicTime) -> Ordering:
    """Order that holds for every positive assignment of the delay symbols.

    ``a < b`` iff each component of ``a`` (constant and every coefficient) is
    at most the matching component of ``b`` and at least one is strictly
    smaller.  Any sign disagreement between components can be flipped by
    choosing the symbol values, so the result is then INCOMPARABLE.
    """
    if a == b:
        return Ordering.EQUAL
    names = a.symbols | b.symbols
    diffs = [b.constant - a.constant] + [b.coeff(n) - a.coeff(n) for n in names]
    if all(d >= 0 for d in diffs):
        return Ordering.LESS
    if all(d <= 0 for d in diffs):
        return Ordering.GREATER
    return Ordering.INCOMPARABLE


def max_time(times: Iterable[SymbolicTime]) -> SymbolicTime:
    """Largest of pairwise comparable times; AmbiguousOrdering otherwise."""
    it = iter(times)
    best = next(it)
    for t in it:
        order = compare_times(best, t)
        if order is Ordering.INCOMPARABLE:
            raise AmbiguousOrdering(best, t)
        if order is Ordering.LESS:
            best = t
    return best


@dataclass(frozen=True)
class Waveform:
    initial: Bit
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "initial", check_bit(self.initial))
        steps = tuple(as_time(s) for s in self.steps)
        for a, b in zip(steps, steps[1:]):
            order = compare_times(a, b)
            if order is Ordering.INCOMPARABLE:
                raise AmbiguousOrdering(a, b)
            if order is not Ordering.LESS:
                raise ValueError(f"step times not strictly increasing: {a} then {b}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def constant(cls, value: Bit) -> "Waveform":
        return cls(value)

    @classmethod
    def step(cls, at, initial: Bit = 0) -> "Waveform":
        """``h(t - at)``, or ``1 - h(t - at)`` when ``initial`` is 1."""
        return cls(initial, (as_time(at),))

    @classmethod
    def from_heaviside(cls, constant: int, terms: Iterable[tuple[int, SymbolicTime]]) -> "Waveform":
        """Normalize ``constant + sum(c * h(t - time))`` into canonical form.

        Terms at equal times are summed first, so ``h(t-a) - h(t-a)``
        vanishes.  Raises ValueError if the sum leaves {0, 1} anywhere.
        """
        grouped: list[list] = []
        for coef, time in terms:
            time = as_time(time)
            for g in grouped:
                if g[0] == time:
                    g[1] += coef
                    break
            else:
                grouped.append([time, coef])
        ordered = _sort_times([g[0] for g in grouped])
        coef_at = {g[0]: g[1] for g in grouped}
        value = constant
        if value not in (0, 1):
            raise ValueError(f"initial value {value} is not a bit")
        steps = []
        for t in ordered:
            new = value + coef_at[t]
            if new not in (0, 1):
                raise ValueError(f"Heaviside sum reaches {new} at t={t}")
            if new != value:
                steps.append(t)
            value = new
        return cls(constant, tuple(steps))

    @property
    def final(self) -> Bit:
        return self.initial ^ (len(self.steps) & 1)

    def heaviside_terms(self) -> tuple[int, list[tuple[int, SymbolicTime]]]:
        """``(constant, [(sign, time), ...])`` of the Heaviside-sum form."""
        sign = -1 if self.initial else 1
        terms = []
        for t in self.steps:
            terms.append((sign, t))
            sign = -sign
        return self.initial, terms

    def symbols(self) -> frozenset[str]:
        return frozenset().union(*(s.symbols for s in self.steps)) if self.steps else frozenset()

    def __str__(self):
        return format_waveform(self)


def format_step(t: SymbolicTime) -> str:
    """``h(t)``, ``h(t-5)``, ``h(t-tau)``, ``h(t-(5+2*tau))``."""
    if t.is_concrete():
        if t.constant == 0:
            return "h(t)"
        if t.constant < 0:
            return f"h(t+{format_rational(-t.constant)})"
        return f"h(t-{format_rational(t.constant)})"
    if t.constant == 0 and len(t.coeffs) == 1:
        return f"h(t-{t})"
    return f"h(t-({t}))"


def format_waveform(w: Waveform) -> str:
    """Display form, e.g. ``1 - h(t-(5+2*tau)) + h(t-(5+3*tau))``."""
    constant, terms = w.heaviside_terms()
    parts = []
    if constant or not terms:
        parts.append(str(constant))
    for sign, t in terms:
        if not parts:
            parts.append(format_step(t) if sign > 0 else "-" + format_step(t))
        else:
            parts.append(("+ " if sign > 0 else "- ") + format_step(t))
    return " ".join(parts)


def _sort_times(times: Sequence[SymbolicTime]) -> list[SymbolicTime]:
    # insertion sort: every inserted element is compared against its final
    # neighbours, so the result is a valid chain for all symbol values
    out: list[SymbolicTime] = []
    for t in times:
        i = len(out)
        while i > 0:
            order = compare_times(out[i - 1], t)
            if order is Ordering.INCOMPARABLE:
                raise AmbiguousOrdering(out[i - 1], t)
            if order is not Ordering.GREATER:
                break
            i -= 1
        if i < len(out):
            order = compare_times(t, out[i])
            if order is Ordering.INCOMPARABLE:
                raise AmbiguousOrdering(t, out[i])
        out.insert(i, t)
    return out


def combine(op: Callable[[int, int], int], a: Waveform, b: Waveform) -> Waveform:
    """Pointwise ``op`` of two waveforms by merging their step lists.

    Steps at equal times are applied together before ``op`` is evaluated, so
    coincident opposite transitions leave no zero-width pulse.
    """
    va, vb = a.initial, b.initial
    out_initial = op(va, vb)
    value = out_initial
    steps = []
    i = j = 0
    sa, sb = a.steps, b.steps
    while i < len(sa) or j < len(sb):
        if j == len(sb):
            order = Ordering.LESS
        elif i == len(sa):
            order = Ordering.GREATER
        else:
            order = compare_times(sa[i], sb[j])
            if order is Ordering.INCOMPARABLE:
                raise AmbiguousOrdering(sa[i], sb[j])
        if order is Ordering.LESS:
            t = sa[i]
            va ^= 1
            i += 1
        elif order is Ordering.GREATER:
            t = sb[j]
            vb ^= 1
            j += 1
        else:
            t = sa[i]
            va ^= 1
            vb ^= 1
            i += 1
            j += 1
        new = op(va, vb)
        if new != value:
            steps.append(t)
            value = new
    return Waveform(out_initial, tuple(steps))


def wf_not(w: Waveform) -> Waveform:
    return Waveform(1 - w.initial, w.steps)


def wf_and(a: Waveform, b: Waveform) -> Waveform:
    return combine(lambda x, y: x & y, a, b)


def wf_or(a: Waveform, b: Waveform) -> Waveform:
    return combine(lambda x, y: x | y, a, b)


def wf_xor(a: Waveform, b: Waveform) -> Waveform:
    return combine(lambda x, y: x ^ y, a, b)


def wf_delay(w: Waveform, d) -> Waveform:
    """``w(t - d)``: every step moves ``d`` later."""
    d = as_time(d)
    if d.constant < 0:
        raise NegativeDelay(f"delay {d} has a negative constant part")
    if d == SymbolicTime():
        return w
    return Waveform(w.initial, tuple(s + d for s in w.steps))


def wf_eval(w: Waveform, t, delays: Delays | None = None) -> Bit:
    """Signal value at instant ``t``; at a step instant the new value applies."""
    t = to_fraction(t)
    delays = delays or {}
    count = 0
    for s in w.steps:
        if s.evaluate(delays) <= t:
            count += 1
    return w.initial ^ (count & 1)


def transition_count(w: Waveform) -> int:
    return len(w.steps)


def concrete_steps(w: Waveform, delays: Delays | None = None) -> list[Fraction]:
    return [s.evaluate(delays or {}) for s in w.steps]


def substitute(w: Waveform, delays: Delays) -> Waveform:
    """Plug in some symbol values; steps that become equal cancel in pairs."""
    constant, terms = w.heaviside_terms()
    return Waveform.from_heaviside(constant, [(s, t.substitute(delays)) for s, t in terms])


def step_product(times: Iterable) -> Waveform:
    """``prod_i h(t - time_i)`` reduced to canonical form."""
    result = Waveform.constant(1)
    for t in times:
        result = wf_and(result, Waveform.step(t))
    return result
