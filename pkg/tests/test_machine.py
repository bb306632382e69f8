import pytest
from hypothesis import given, settings, strategies as st

from tmchaos.codec import Alphabet
from tmchaos.machine import (ACCEPT, BUDGET, BINARY, Configuration, DuplicateTransition,
                             HaltedConfiguration, InputContainsBlank, MachineSpec, MalformedEncoding,
                             MissingTransition, ParseError, TargetTooSmall, UndeclaredState,
                             UndeclaredSymbol, decode_machine, encode_machine, encoding_length,
                             format_machine, parse_machine, run, simulate_universal, step)

HALTER = """\
states: q0 qa
input_alphabet: 1
tape_alphabet: _ 1
blank: _
start: q0
accept: qa
reject: qa
delta: q0 _ -> qa _ R
delta: q0 1 -> qa 1 R
"""


def test_parse_minimal_halter():
    spec = parse_machine(HALTER)
    assert len(spec.states) == 2
    assert spec.accept == spec.reject == "qa"
    assert spec.delta[("q0", "_")] == ("qa", "_", "R")


def test_parse_reports_missing_transition():
    text = HALTER.replace("delta: q0 1 -> qa 1 R\n", "")
    with pytest.raises(MissingTransition) as exc:
        parse_machine(text)
    assert exc.value.pair == ("q0", "1")


def test_parse_reports_undeclared_state():
    with pytest.raises(UndeclaredState) as exc:
        parse_machine(HALTER + "delta: q0 1 -> q9 1 R\n")
    assert exc.value.line == 10


def test_parse_reports_undeclared_symbol():
    with pytest.raises(UndeclaredSymbol):
        parse_machine(HALTER.replace("delta: q0 1 -> qa 1 R", "delta: q0 1 -> qa x R"))


def test_parse_reports_duplicate():
    with pytest.raises(DuplicateTransition):
        parse_machine(HALTER + "delta: q0 1 -> qa _ L\n")


def test_parse_syntax_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_machine(HALTER.replace("delta: q0 _ -> qa _ R", "delta: q0 _ => qa _ R"))
    assert exc.value.line == 8
    assert exc.value.column > 1


def test_parse_enforces_section_order():
    lines = HALTER.splitlines()
    lines[0], lines[1] = lines[1], lines[0]
    with pytest.raises(ParseError):
        parse_machine("\n".join(lines))


def test_parse_ignores_comments_and_round_trips(corpus):
    for spec in corpus.values():
        assert parse_machine("# header\n" + format_machine(spec)) == spec


def test_step_left_at_edge_stays(corpus):
    res = step(corpus["toggler"], Configuration("a", 0, "0"))
    assert res.next.head == 0 and res.next.tape == "1" and res.wrote


def test_step_into_accept(corpus):
    res = step(corpus["halter"], Configuration("q0", 0, ""))
    assert res.halted == ACCEPT


def test_step_on_halted_configuration(corpus):
    with pytest.raises(HaltedConfiguration):
        step(corpus["halter"], Configuration("qa", 0, ""))


def test_step_beyond_tape_fills_gap(corpus):
    res = step(corpus["right_mover"], Configuration("r", 2, "1"))
    assert res.next.tape == "1_1"
    assert res.next == naive_step(corpus["right_mover"], Configuration("r", 2, "1"))


def test_identity_write_counts_unless_changed_only(corpus):
    inc = corpus["incrementer"]
    assert step(inc, Configuration("scan", 0, "0")).wrote
    assert not step(inc, Configuration("scan", 0, "0"), changed_only=True).wrote


def test_run_examples(corpus):
    out = run(corpus["halter"], "", 5)
    assert (out.status, out.steps) == (ACCEPT, 1)
    out = run(corpus["right_mover"], "", 100)
    assert (out.status, out.steps) == (BUDGET, 100)
    out = run(corpus["incrementer"], "011", 100)
    assert out.status == ACCEPT and out.final.tape.rstrip("_") == "100"


def test_run_rejects_blank_in_input(corpus):
    with pytest.raises(InputContainsBlank):
        run(corpus["incrementer"], "0_1", 10)


# independent oracle: dict-backed tape, no shared code with the executor
def naive_step(spec, config):
    cells = dict(enumerate(config.tape))
    sym = cells.get(config.head, spec.alphabet.blank)
    q2, s2, move = spec.delta[(config.state, sym)]
    cells[config.head] = s2
    width = max(cells) + 1
    tape = "".join(cells.get(i, spec.alphabet.blank) for i in range(width))
    head = config.head + 1 if move == "R" else max(0, config.head - 1)
    return Configuration(q2, head, tape)


@st.composite
def machines(draw, max_states=4, max_symbols=3):
    nq = draw(st.integers(1, max_states))
    nb = draw(st.integers(2, max_symbols))
    states = tuple(f"q{i}" for i in range(nq)) + ("h",)
    alphabet = Alphabet.from_symbols("_abc"[:nb])
    delta = {}
    for q in states[:-1]:
        for s in alphabet.tape_symbols:
            delta[(q, s)] = (draw(st.sampled_from(states)), draw(st.sampled_from(alphabet.tape_symbols)),
                             draw(st.sampled_from("LR")))
    return MachineSpec(states, alphabet, delta, "q0", "h", "h")


@st.composite
def machine_and_input(draw):
    spec = draw(machines())
    word = draw(st.text(alphabet="".join(spec.alphabet.input_symbols), max_size=6))
    return spec, word


@settings(max_examples=150)
@given(machine_and_input(), st.integers(1, 60))
def test_run_matches_naive_stepping(case, budget):
    spec, word = case
    config, steps = Configuration(spec.start, 0, word), 0
    while steps < budget and not spec.is_halting(config.state):
        nxt = naive_step(spec, config)
        res = step(spec, config)
        assert res.next == nxt
        assert res.next.head >= 0
        assert len(res.next.tape) <= max(len(config.tape), config.head + 1)
        assert len(res.next.tape) - len(config.tape) <= 1
        config, steps = nxt, steps + 1
    out = run(spec, word, budget)
    assert out.steps == steps and out.final == config
    assert out.halted == spec.is_halting(config.state)
    assert out.steps <= budget and (out.halted or out.steps == budget)
    assert run(spec, word, budget) == out


def test_encoding_round_trip(corpus):
    for spec in corpus.values():
        assert decode_machine(encode_machine(spec)) == spec


def test_encoding_over_other_target(corpus):
    target = Alphabet.from_symbols("#xyz")
    enc = encode_machine(corpus["incrementer"], target)
    assert set(enc) <= {"x", "y"}
    assert decode_machine(enc, target) == corpus["incrementer"]


def test_encoding_needs_two_symbols(corpus):
    with pytest.raises(TargetTooSmall):
        encode_machine(corpus["halter"], Alphabet.from_symbols("_1"))


def test_encoding_is_injective(corpus):
    inc = corpus["incrementer"]
    delta = dict(inc.delta)
    delta[("carry", "0")] = ("done", "1", "R")
    other = MachineSpec(inc.states, inc.alphabet, delta, inc.start, inc.accept, inc.reject)
    assert encode_machine(other) != encode_machine(inc)


@settings(max_examples=100)
@given(machines(), machines())
def test_encoding_injective_random(m1, m2):
    assert (encode_machine(m1) == encode_machine(m2)) == (m1 == m2)


def counter_family(n):
    """n scanning states cycling right, one halt; the incrementer's shape widened."""
    states = tuple(f"s{i}" for i in range(n)) + ("done",)
    alphabet = Alphabet.from_symbols("_01")
    delta = {}
    for i in range(n):
        nxt = states[(i + 1) % n]
        delta[(states[i], "_")] = ("done", "1", "L")
        delta[(states[i], "0")] = (nxt, "0", "R")
        delta[(states[i], "1")] = (nxt, "0", "R")
    return MachineSpec(states, alphabet, delta, "s0", "done", "done")


def test_encoding_length_linear_in_table_size():
    ratios = []
    for n in range(2, 6):
        spec = counter_family(n)
        enc = encode_machine(spec)
        assert len(enc) == encoding_length(spec)
        ratios.append(len(enc) / ((n + 1) * 3))
    # per-cell cost stays bounded across the family
    assert max(ratios) <= 2 * min(ratios)
    assert max(ratios) < 40


def test_universal_simulation_matches_direct_run(corpus):
    inputs = {"halter": ["", "01"], "toggler": ["0", "1"], "right_mover": [""], "incrementer": ["011", "0", "1011"]}
    for name, spec in corpus.items():
        enc = encode_machine(spec)
        for word in inputs[name]:
            for budget in (10, 100, 10_000):
                assert simulate_universal(enc, word, budget) == run(spec, word, budget)


def test_universal_halter():
    enc = encode_machine(parse_machine(HALTER))
    out = simulate_universal(enc, "1", 10)
    assert (out.status, out.steps) == (ACCEPT, 1)


def test_truncated_encoding_is_malformed(corpus):
    enc = encode_machine(corpus["incrementer"])
    for cut in (1, 7, len(enc) // 2):
        with pytest.raises(MalformedEncoding):
            simulate_universal(enc[:-cut], "011", 10)
    with pytest.raises(MalformedEncoding):
        decode_machine(enc + "0")


@settings(max_examples=100)
@given(machine_and_input(), st.integers(1, 200))
def test_universal_equivalence_random(case, budget):
    spec, word = case
    assert simulate_universal(encode_machine(spec), word, budget) == run(spec, word, budget)


def test_binary_target_is_default():
    assert BINARY.input_symbols == ("0", "1")
