from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tmchaos import fastsim
from tmchaos.census import MachineFamily
from tmchaos.debugger import EXHAUSTED, NO, SOUND, YES, debug_run, history_phases
from tmchaos.fastsim import _round_ratio, fast_survey
from tmchaos.machine import InputContainsBlank, MachineError

from test_machine import machine_and_input


def check_same(spec, word, budget):
    rep = debug_run(spec, word, budget, SOUND)
    fast = fast_survey(spec, word, budget)
    orbit = history_phases(rep)
    assert fast.kind == rep.outcome.kind
    assert fast.steps == rep.steps_executed
    if fast.kind == NO:
        assert fast.loop == rep.outcome.loop
    if fast.kind == YES:
        assert fast.halt == rep.outcome.halt
    assert np.array_equal(fast.values, orbit.samples)
    assert fast.repeat == orbit.has_repeat()
    return fast


@settings(max_examples=300, deadline=None)
@given(machine_and_input(), st.integers(1, 300))
def test_matches_sound_debugger(case, budget):
    check_same(*case, budget)


def test_matches_sound_debugger_on_family_sample():
    fam = MachineFamily(2, 2)
    rng = np.random.default_rng(7)
    for i in rng.choice(fam.size, 150, replace=False):
        check_same(fam.machine(int(i)), "", 2000)


@settings(max_examples=100, deadline=None)
@given(machine_and_input(), st.integers(1, 300), st.integers(1, 3))
def test_short_digit_window_falls_back_to_exact(case, budget, k):
    # a tiny digit window forces most long tapes through the exact rounding path
    spec, word = case
    saved = fastsim._digits_for
    fastsim._digits_for = lambda b: k
    try:
        check_same(spec, word, budget)
    finally:
        fastsim._digits_for = saved


def test_fallback_is_exercised(corpus):
    saved = fastsim._digits_for
    fastsim._digits_for = lambda b: 2
    try:
        fast = check_same(corpus["right_mover"], "", 200)
    finally:
        fastsim._digits_for = saved
    assert fast.kind == EXHAUSTED and fast.exact_roundings > 0


@settings(max_examples=500)
@given(st.integers(1, 2 ** 62), st.integers(1, 2 ** 62), st.booleans())
def test_round_ratio_is_correctly_rounded(a, d, sticky):
    a, d = min(a, d), max(a, d)
    got = _round_ratio(a, d, sticky)
    exact = Fraction(a, d)
    if a == d:
        assert got == 1.0
        return
    nearest = float(exact)
    if sticky:
        # rounding of a value just above a/d: differs only at an exact tie
        up = np.nextafter(nearest, 2.0)
        lo_mid = (Fraction(nearest) + Fraction(up)) / 2
        if exact == lo_mid:
            nearest = float(up)
    assert got == nearest


def test_argument_errors(corpus):
    with pytest.raises(MachineError):
        fast_survey(corpus["halter"], "", 0)
    with pytest.raises(InputContainsBlank):
        fast_survey(corpus["incrementer"], "0_", 10)
