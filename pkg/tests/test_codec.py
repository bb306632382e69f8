from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tmchaos.codec import (Alphabet, CodecError, GodelMap, SymbolNotInAlphabet, build_godel_map,
                           godelize, phase_of_tape, rationalize)

TERNARY = build_godel_map(Alphabet.from_symbols("_01"))
DECIMAL = build_godel_map(Alphabet.from_symbols("0123456789"))


def test_canonical_map_puts_blank_first():
    assert TERNARY.as_dict() == {"_": 0, "0": 1, "1": 2}
    assert build_godel_map(Alphabet.from_symbols("_a")).as_dict() == {"_": 0, "a": 1}


def test_decimal_map_is_identity():
    assert DECIMAL.as_dict() == {str(d): d for d in range(10)}


def test_blank_need_not_be_declared_first():
    gmap = build_godel_map(Alphabet(("a", "_", "b"), ("a", "b"), "_"))
    assert gmap.as_dict() == {"_": 0, "a": 1, "b": 2}


@pytest.mark.parametrize("tape, inputs, blank", [
    ("_", (), "_"),                # b < 2
    ("_0", ("_",), "_"),           # blank is an input symbol
    ("_00", ("0",), "_"),          # duplicate symbol
    ("01", ("0",), "_"),           # blank missing
    ("_0", ("1",), "_"),           # input not in tape alphabet
])
def test_alphabet_invariants(tape, inputs, blank):
    with pytest.raises(CodecError):
        Alphabet(tuple(tape), inputs, blank)


def test_godelize_examples():
    assert godelize("", TERNARY) == 0
    assert godelize("42", DECIMAL) == 42
    assert godelize("10", TERNARY) == 7


def test_godelize_rejects_foreign_symbol():
    with pytest.raises(SymbolNotInAlphabet):
        godelize("1x", TERNARY)


def test_rationalize_examples():
    assert rationalize("", TERNARY).value == 0
    assert rationalize("5", DECIMAL).value == Fraction(5, 10)
    assert rationalize("10", TERNARY).value == Fraction(7, 9)


def test_phase_of_tape_examples():
    blank = phase_of_tape("___", TERNARY)
    assert blank.value == 0 and blank.canonical_word == ""
    p = phase_of_tape("101__", TERNARY)
    assert p.canonical_word == "101" and p.value == Fraction(23, 27)
    # trimmed at the first blank even though a 1 follows it
    assert phase_of_tape("1_1", TERNARY).value == Fraction(2, 3)


def test_float_projection_is_correctly_rounded():
    p = rationalize("1" * 5000, TERNARY)
    assert float(p) == float(p.value)


@st.composite
def alphabet_and_word(draw, blank_free=True, min_size=0):
    b = draw(st.integers(2, 12))
    symbols = "_abcdefghijk"[:b]
    gmap = build_godel_map(Alphabet.from_symbols(symbols))
    pool = symbols[1:] if blank_free else symbols
    word = draw(st.text(alphabet=pool, min_size=min_size, max_size=40))
    return gmap, word


@given(alphabet_and_word(min_size=1))
def test_round_trip(case):
    gmap, word = case
    assert gmap.decode(godelize(word, gmap), len(word)) == word
    assert rationalize(word, gmap).canonical_word == word


@given(alphabet_and_word(blank_free=False), st.data())
def test_order_embedding(case, data):
    gmap, w1 = case
    pool = "".join(gmap.symbols)
    w2 = data.draw(st.text(alphabet=pool, min_size=len(w1), max_size=len(w1)))
    d1, d2 = gmap.digits(w1), gmap.digits(w2)
    r1, r2 = rationalize(w1, gmap).value, rationalize(w2, gmap).value
    assert (d1 < d2) == (r1 < r2)
    assert (d1 == d2) == (r1 == r2)


@given(alphabet_and_word(blank_free=False))
def test_bounds(case):
    gmap, word = case
    x = rationalize(word, gmap).value
    assert 0 <= x < 1
    assert (x == 0) == all(s == gmap.symbols[0] for s in word)


@given(alphabet_and_word(blank_free=False), st.integers(0, 10))
def test_blank_tail_stability(case, pad):
    gmap, word = case
    blank = gmap.symbols[0]
    assert phase_of_tape(word + blank * pad, gmap) == phase_of_tape(word, gmap)


def test_map_must_be_bijective():
    with pytest.raises(CodecError):
        GodelMap(("_", "0", "0"))
