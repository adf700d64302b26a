import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hazardscan.errors import AmbiguousOrdering, MissingDelayAssignment, NegativeDelay, ParseError
from hazardscan.waveform import (
    Ordering,
    SymbolicTime,
    Waveform,
    compare_times,
    format_rational,
    format_waveform,
    max_time,
    parse_time,
    step_product,
    substitute,
    transition_count,
    wf_and,
    wf_delay,
    wf_eval,
    wf_not,
    wf_or,
    wf_xor,
)

from oracles import grid, heaviside_sum

T = SymbolicTime.of
H = Waveform.step
TAU = T(0, tau=1)
DELTA = T(0, delta=1)


def notch(a, b):
    """1 - h(t-a) + h(t-b)"""
    return Waveform(1, (a, b))


# -- symbolic times ----------------------------------------------------------


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (T(5, tau=2), T(5, tau=3), Ordering.LESS),
        (T(5, tau=1), T(5, tau=1), Ordering.EQUAL),
        (T(4, tau=2), T(5, tau=1), Ordering.INCOMPARABLE),
        (T(6), T(5), Ordering.GREATER),
        (T(5, tau=1), T(5, delta=1), Ordering.INCOMPARABLE),
        (T(5, tau=1), T(5, tau=1, delta=1), Ordering.LESS),
    ],
)
def test_compare_times(a, b, expected):
    assert compare_times(a, b) is expected


@pytest.mark.parametrize(
    "text, expected",
    [
        ("tau", T(0, tau=1)),
        ("1.5+2*tau", T(Fraction(3, 2), tau=2)),
        ("0", T(0)),
        ("tau + delta + tau", T(0, tau=2, delta=1)),
        (" 3 ", T(3)),
    ],
)
def test_parse_time(text, expected):
    assert parse_time(text) == expected


@pytest.mark.parametrize("text", ["", "-1", "1.5*tau", "tau-1", "2 tau", "+"])
def test_parse_time_rejects(text):
    with pytest.raises(ParseError):
        parse_time(text)


def test_time_str():
    assert str(T(5, tau=2)) == "5+2*tau"
    assert str(T(0, tau=1)) == "tau"
    assert str(T(0)) == "0"
    assert str(T(Fraction(1, 3), delta=1, tau=2)) == "1/3+delta+2*tau"


@pytest.mark.parametrize(
    "q, text", [(Fraction(5), "5"), (Fraction(3, 2), "1.5"), (Fraction(-1, 8), "-0.125"), (Fraction(1, 3), "1/3"),
                (Fraction(7, 20), "0.35"), (Fraction(-7, 3), "-7/3")]
)
def test_format_rational(q, text):
    assert format_rational(q) == text


def test_negative_coefficient_rejected():
    with pytest.raises(NegativeDelay):
        T(5, tau=-1)
    with pytest.raises(NegativeDelay):
        T(5, tau=1) - T(0, tau=2)


def test_max_time():
    assert max_time([T(1, tau=1), T(1, tau=3), T(0, tau=1)]) == T(1, tau=3)
    with pytest.raises(AmbiguousOrdering):
        max_time([T(1, tau=1), T(0, tau=3)])


# -- operations ---------------------------------------------------------------


def test_not_examples():
    assert wf_not(Waveform.constant(1)) == Waveform.constant(0)
    assert wf_not(H(5)) == H(5, initial=1)
    assert format_waveform(wf_not(H(5))) == "1 - h(t-5)"
    a, b = T(5, tau=2), T(5, tau=3)
    pulse = wf_not(notch(a, b))
    assert pulse == Waveform(0, (a, b))
    assert format_waveform(pulse) == "h(t-(5+2*tau)) - h(t-(5+3*tau))"


def test_and_of_rising_steps_is_later_step():
    assert wf_and(H(5), H(7)) == H(7)


def _grid_oracle(op, a, b, delays, points):
    ca, ta = a.heaviside_terms()
    cb, tb = b.heaviside_terms()
    return [op(heaviside_sum(ca, ta, t, delays), heaviside_sum(cb, tb, t, delays)) for t in points]


def test_and_of_falling_and_later_rising_is_zero():
    d = {"tau": 1, "delta": 1}
    a = H(T(5, delta=1), initial=1)
    b = H(T(5, tau=1, delta=1))
    points = grid(0, 12, 241)
    oracle = _grid_oracle(min, a, b, d, points)
    assert set(oracle) == {0}
    result = wf_and(a, b)
    assert result == Waveform.constant(0)
    assert [wf_eval(result, t, d) for t in points] == oracle


def test_or_of_complementary_skewed_signals_is_notch():
    d = {"tau": 1, "delta": 1}
    a = H(T(5, delta=1), initial=1)
    b = H(T(5, tau=1, delta=1))
    result = wf_or(a, b)
    assert result == notch(T(5, delta=1), T(5, tau=1, delta=1))
    assert format_waveform(result) == "1 - h(t-(5+delta)) + h(t-(5+delta+tau))"
    points = grid(0, 12, 241)
    assert [wf_eval(result, t, d) for t in points] == _grid_oracle(max, a, b, d, points)


def test_or_examples():
    assert wf_or(H(5), H(7)) == H(5)
    w = notch(T(1), T(2))
    assert wf_or(w, Waveform.constant(1)) == Waveform.constant(1)


def test_xor_examples():
    w = notch(T(5, tau=1), T(5, tau=2))
    assert wf_xor(w, w) == Waveform.constant(0)
    assert wf_xor(w, Waveform.constant(0)) == w
    pulse = wf_xor(H(5), H(7))
    assert pulse == Waveform(0, (T(5), T(7)))
    assert format_waveform(pulse) == "h(t-5) - h(t-7)"
    points = grid(0, 10, 101)
    assert [wf_eval(pulse, t) for t in points] == _grid_oracle(lambda u, v: int(u != v), H(5), H(7), {}, points)


def test_and_idempotent():
    w = notch(T(5, tau=1), T(5, tau=3))
    assert wf_and(w, w) == w


def test_incomparable_merge_raises():
    with pytest.raises(AmbiguousOrdering):
        wf_and(H(TAU), H(T(1)))


def test_coincident_opposite_steps_cancel():
    assert wf_and(H(5), H(5, initial=1)) == Waveform.constant(0)
    assert wf_xor(H(T(2, tau=1)), H(T(2, tau=1))) == Waveform.constant(0)
    assert transition_count(Waveform.from_heaviside(0, [(1, T(3)), (-1, T(3))])) == 0


def test_delay_examples():
    assert wf_delay(H(5, initial=1), TAU) == H(T(5, tau=1), initial=1)
    w = notch(T(1), T(2))
    assert wf_delay(w, T(0)) == w
    assert wf_delay(H(T(5, tau=1)), TAU) == H(T(5, tau=2))
    assert wf_delay(Waveform.constant(1), TAU) == Waveform.constant(1)


def test_negative_delay():
    with pytest.raises(NegativeDelay):
        wf_delay(H(5), T(-1))


def test_eval_at_and_around_steps():
    y = notch(T(5, tau=2), T(5, tau=3))
    d = {"tau": 1}
    assert wf_eval(y, 7, d) == 0
    assert wf_eval(y, Fraction(69, 10), d) == 1
    assert wf_eval(y, 8, d) == 1
    assert wf_eval(y, Fraction(799, 100), d) == 0


def test_eval_missing_delay():
    with pytest.raises(MissingDelayAssignment):
        wf_eval(H(TAU), 3, {})


def test_transition_count_examples():
    assert transition_count(Waveform.constant(1)) == 0
    assert transition_count(notch(T(1, tau=1), T(1, tau=2))) == 2


def test_constructor_enforces_increasing_steps():
    with pytest.raises(ValueError):
        Waveform(0, (T(5), T(5)))
    with pytest.raises(ValueError):
        Waveform(0, (T(7), T(5)))
    with pytest.raises(AmbiguousOrdering):
        Waveform(0, (TAU, T(1)))


def test_from_heaviside_normalizes():
    w = Waveform.from_heaviside(1, [(1, T(5, tau=3)), (-1, T(5, tau=2))])
    assert w == notch(T(5, tau=2), T(5, tau=3))
    with pytest.raises(ValueError):
        Waveform.from_heaviside(0, [(1, T(1)), (1, T(2))])


def test_substitute():
    w = notch(T(5, tau=1), T(5, tau=1, delta=1))
    assert substitute(w, {"tau": 2}) == notch(T(7), T(7, delta=1))
    assert substitute(w, {}) == w


@pytest.mark.parametrize(
    "w, text",
    [
        (Waveform.constant(0), "0"),
        (Waveform.constant(1), "1"),
        (H(0), "h(t)"),
        (H(-2), "h(t+2)"),
        (H(Fraction(3, 2)), "h(t-1.5)"),
        (H(TAU), "h(t-tau)"),
        (H(T(0, tau=2)), "h(t-2*tau)"),
        (H(T(5, tau=1)), "h(t-(5+tau))"),
        (notch(T(5, tau=2), T(5, tau=3)), "1 - h(t-(5+2*tau)) + h(t-(5+3*tau))"),
        (Waveform(0, (T(1), T(Fraction(4, 3)), T(2))), "h(t-1) - h(t-4/3) + h(t-2)"),
    ],
)
def test_display(w, text):
    assert format_waveform(w) == text


# -- properties ------------------------------------------------------------------


def chain_times(draw_ints, n, symbols=("tau",)):
    """Strictly increasing chain of symbolic times built from nonneg increments."""
    times = []
    const = Fraction(draw_ints(0, 4))
    coeffs = {s: draw_ints(0, 2) for s in symbols}
    for _ in range(n):
        times.append(SymbolicTime(const, dict(coeffs)))
        while True:
            inc_c = Fraction(draw_ints(0, 3), 2)
            incs = {s: draw_ints(0, 1) for s in symbols}
            if inc_c or any(incs.values()):
                break
        const += inc_c
        for s in symbols:
            coeffs[s] += incs[s]
    return times


@st.composite
def waveform_pairs(draw):
    ints = lambda lo, hi: draw(st.integers(lo, hi))
    symbols = draw(st.sampled_from([(), ("tau",), ("tau", "delta")]))
    # one shared chain keeps every pair of step times comparable
    pool = chain_times(ints, draw(st.integers(0, 8)), symbols)
    picks = [draw(st.lists(st.sampled_from(pool), unique=True, max_size=len(pool))) if pool else [] for _ in range(2)]
    a = Waveform(ints(0, 1), tuple(t for t in pool if t in picks[0]))
    b = Waveform(ints(0, 1), tuple(t for t in pool if t in picks[1]))
    delays = {s: Fraction(ints(1, 12), ints(1, 4)) for s in ("tau", "delta")}
    return a, b, delays


def _values_at(w, delays, times):
    c, terms = w.heaviside_terms()
    return [heaviside_sum(c, terms, t, delays) for t in times]


def _sample_times(ws, delays, rng, n=60):
    steps = sorted({s.evaluate(delays) for w in ws for s in w.steps})
    out = list(steps) + [s - Fraction(1, 1000) for s in steps]
    hi = (steps[-1] if steps else 0) + 2
    out += [Fraction(rng.randint(-200, int(hi * 100)), 100) for _ in range(n)]
    return out


@settings(max_examples=200, deadline=None)
@given(waveform_pairs(), st.randoms(use_true_random=False))
def test_pointwise_semantics(pair, rng):
    a, b, delays = pair
    times = _sample_times([a, b], delays, rng)
    va, vb = _values_at(a, delays, times), _values_at(b, delays, times)
    for op, fn in ((wf_and, min), (wf_or, max), (wf_xor, lambda u, v: int(u != v))):
        r = op(a, b)
        assert [wf_eval(r, t, delays) for t in times] == [fn(u, v) for u, v in zip(va, vb)]
    n = wf_not(a)
    assert [wf_eval(n, t, delays) for t in times] == [1 - u for u in va]


@settings(max_examples=100, deadline=None)
@given(waveform_pairs(), st.randoms(use_true_random=False))
def test_canonical_form_matches_heaviside_sum(pair, rng):
    a, b, delays = pair
    w = wf_or(wf_and(a, wf_not(b)), wf_xor(a, b))
    c, terms = w.heaviside_terms()
    lo = -2
    hi = max([s.evaluate(delays) for s in w.steps], default=0) + 2
    for _ in range(1000):
        t = Fraction(rng.randint(lo * 1000, int(hi * 1000)), 1000)
        assert wf_eval(w, t, delays) == heaviside_sum(c, terms, t, delays)


@settings(max_examples=200, deadline=None)
@given(waveform_pairs())
def test_alternation(pair):
    a, b, _ = pair
    for w in (wf_and(a, b), wf_or(a, b), wf_xor(a, b)):
        _, terms = w.heaviside_terms()
        signs = [s for s, _ in terms]
        assert all(s1 == -s2 for s1, s2 in zip(signs, signs[1:]))
        assert all(compare_times(t1, t2) is Ordering.LESS for t1, t2 in zip(w.steps, w.steps[1:]))


@settings(max_examples=100, deadline=None)
@given(waveform_pairs(), st.integers(0, 5), st.integers(0, 3), st.integers(0, 5), st.integers(0, 3))
def test_delay_composition(pair, c1, k1, c2, k2):
    w = pair[0]
    d1, d2 = T(Fraction(c1, 2), tau=k1), T(Fraction(c2, 3), tau=k2)
    assert wf_delay(wf_delay(w, d1), d2) == wf_delay(w, d1 + d2)


def test_step_product_is_step_at_max():
    rng = random.Random(7)
    for _ in range(100):
        times = chain_times(rng.randint, rng.randint(1, 5), ("tau", "delta"))
        rng.shuffle(times)
        assert step_product(times) == H(max_time(times))
