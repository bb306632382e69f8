"""Single-tape Turing machines on a left-bounded, right-infinite tape.

A machine is described by a :class:`MachineSpec`; ``.tm`` text is parsed by
:func:`parse_machine`. Execution is always budgeted: :func:`run` returns either
a halt with its step count or ``budget`` exhaustion.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .codec import Alphabet, CodecError

LEFT, RIGHT = "L", "R"
ACCEPT, REJECT, BUDGET = "accept", "reject", "budget"


class MachineError(ValueError):
    pass


class ParseError(MachineError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndeclaredState(ParseError):
    pass


class UndeclaredSymbol(ParseError):
    pass


class DuplicateTransition(ParseError):
    pass


class MissingTransition(MachineError):
    def __init__(self, state: str, symbol: str):
        super().__init__(f"no transition for ({state}, {symbol!r})")
        self.pair = (state, symbol)


class HaltedConfiguration(MachineError):
    pass


class InputContainsBlank(MachineError):
    pass


class MalformedEncoding(MachineError):
    pass


class TargetTooSmall(MachineError):
    pass


@dataclass(frozen=True)
class MachineSpec:
    states: tuple[str, ...]
    alphabet: Alphabet
    delta: Mapping[tuple[str, str], tuple[str, str, str]]
    start: str
    accept: str
    reject: str
    _table: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "delta", dict(self.delta))
        if len(set(states)) != len(states):
            raise MachineError("states must be distinct")
        for role in ("start", "accept", "reject"):
            if getattr(self, role) not in states:
                raise MachineError(f"{role} state {getattr(self, role)!r} is not declared")
        gamma = self.alphabet.tape_symbols
        halting = {self.accept, self.reject}
        for (q, s), (q2, s2, move) in self.delta.items():
            if q not in states or q2 not in states:
                raise MachineError(f"transition ({q}, {s!r}) uses an undeclared state")
            if s not in gamma or s2 not in gamma:
                raise MachineError(f"transition ({q}, {s!r}) uses an undeclared symbol")
            if move not in (LEFT, RIGHT):
                raise MachineError(f"bad move {move!r}")
            if q in halting:
                raise MachineError(f"transition out of halting state {q!r}")
        for q in states:
            if q in halting:
                continue
            for s in gamma:
                if (q, s) not in self.delta:
                    raise MissingTransition(q, s)
        object.__setattr__(self, "_table", self._compile())

    def __hash__(self):
        return hash((self.states, self.alphabet, tuple(sorted(self.delta.items())),
                     self.start, self.accept, self.reject))

    def _compile(self):
        # integer form used by the hot loops: state index * b + digit -> (state, digit, +-1)
        qi = {q: i for i, q in enumerate(self.states)}
        gamma = (self.alphabet.blank,) + tuple(s for s in self.alphabet.tape_symbols
                                               if s != self.alphabet.blank)
        si = {s: d for d, s in enumerate(gamma)}
        b = len(gamma)
        table = [None] * (len(self.states) * b)
        for (q, s), (q2, s2, move) in self.delta.items():
            table[qi[q] * b + si[s]] = (qi[q2], si[s2], 1 if move == RIGHT else -1)
        return qi, gamma, si, table

    @property
    def halting_states(self) -> frozenset[str]:
        return frozenset((self.accept, self.reject))

    def is_halting(self, state: str) -> bool:
        return state == self.accept or state == self.reject

    def halt_kind(self, state: str) -> str | None:
        if state == self.accept:
            return ACCEPT
        if state == self.reject:
            return REJECT
        return None


@dataclass(frozen=True)
class Configuration:
    state: str
    head: int
    tape: str

    def __post_init__(self):
        if self.head < 0:
            raise MachineError("head position must be >= 0")

    def read(self, blank: str) -> str:
        return self.tape[self.head] if self.head < len(self.tape) else blank


@dataclass(frozen=True)
class StepResult:
    next: Configuration
    wrote: bool
    halted: str | None


@dataclass(frozen=True)
class RunOutcome:
    status: str  # ACCEPT, REJECT or BUDGET
    steps: int
    final: Configuration

    @property
    def halted(self) -> bool:
        return self.status != BUDGET


def initial_configuration(spec: MachineSpec, word: str) -> Configuration:
    if spec.alphabet.blank in word:
        raise InputContainsBlank(f"input {word!r} contains the blank symbol")
    bad = [s for s in word if s not in spec.alphabet.input_symbols]
    if bad:
        raise MachineError(f"input symbols {bad} are not in the input alphabet")
    return Configuration(spec.start, 0, word)


def step(spec: MachineSpec, config: Configuration, changed_only: bool = False) -> StepResult:
    """Apply one transition.

    ``wrote`` is true for every transition (each one emits a symbol); with
    ``changed_only`` it is true only when the cell content actually changed.
    """
    if spec.is_halting(config.state):
        raise HaltedConfiguration(f"configuration is in halting state {config.state!r}")
    blank = spec.alphabet.blank
    read = config.read(blank)
    q2, s2, move = spec.delta[(config.state, read)]
    tape = config.tape
    if config.head >= len(tape):
        tape = tape + blank * (config.head - len(tape)) + s2
    else:
        tape = tape[:config.head] + s2 + tape[config.head + 1:]
    head = config.head + 1 if move == RIGHT else max(config.head - 1, 0)
    wrote = (s2 != read) if changed_only else True
    return StepResult(Configuration(q2, head, tape), wrote, spec.halt_kind(q2))


class Executor:
    """Mutable fast-path state for long runs; semantics identical to :func:`step`."""

    __slots__ = ("spec", "table", "b", "state", "head", "tape", "halt_idx", "steps")

    def __init__(self, spec: MachineSpec, config: Configuration):
        qi, gamma, si, table = spec._table
        self.spec = spec
        self.table = table
        self.b = len(gamma)
        self.state = qi[config.state]
        self.head = config.head
        self.tape = [si[s] for s in config.tape]
        self.halt_idx = (qi[spec.accept], qi[spec.reject])
        self.steps = 0

    @property
    def halted(self) -> bool:
        return self.state in self.halt_idx

    def advance(self) -> tuple[int, int, int]:
        """One step; returns (position written, old digit, new digit)."""
        tape, head = self.tape, self.head
        if head >= len(tape):
            tape.extend([0] * (head + 1 - len(tape)))
        old = tape[head]
        q2, d2, move = self.table[self.state * self.b + old]
        tape[head] = d2
        self.state = q2
        self.head = head + move if move > 0 or head > 0 else 0
        self.steps += 1
        return head, old, d2

    def configuration(self) -> Configuration:
        _, gamma, _, _ = self.spec._table
        return Configuration(self.spec.states[self.state], self.head,
                             "".join(gamma[d] for d in self.tape))


def run(spec: MachineSpec, word: str, budget: int) -> RunOutcome:
    """Run from (q0, head 0, tape = word) for at most ``budget`` steps."""
    if budget < 1:
        raise MachineError("budget must be >= 1")
    ex = Executor(spec, initial_configuration(spec, word))
    halt_idx = ex.halt_idx
    while ex.state not in halt_idx and ex.steps < budget:
        ex.advance()
    final = ex.configuration()
    kind = spec.halt_kind(final.state)
    return RunOutcome(kind or BUDGET, ex.steps, final)


# ---------------------------------------------------------------- .tm format

_HEADERS = ("states", "input_alphabet", "tape_alphabet", "blank", "start", "accept", "reject")
_DELTA = re.compile(r"^(\S+)\s+(\S)\s+->\s+(\S+)\s+(\S)\s+(\S+)$")


def parse_machine(text: str) -> MachineSpec:
    """Parse the line-oriented ``.tm`` format.

    Sections come in fixed order (``states``, ``input_alphabet``,
    ``tape_alphabet``, ``blank``, ``start``, ``accept``, ``reject``) followed by
    any number of ``delta: q s -> q' s' L|R`` lines. ``#`` starts a comment.
    """
    values: dict[str, tuple[list[str], int]] = {}
    delta: dict[tuple[str, str], tuple[str, str, str]] = {}
    expected = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        line = line.strip()
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError("expected '<section>: ...'", lineno, indent + 1)
        key = key.strip()
        col = indent + len(key) + 2
        if key == "delta":
            if expected < len(_HEADERS):
                raise ParseError(f"section {_HEADERS[expected]!r} must precede transitions", lineno, indent + 1)
            m = _DELTA.match(rest.strip())
            if not m:
                raise ParseError("expected 'delta: <state> <sym> -> <state> <sym> <L|R>'", lineno, col)
            q, s, q2, s2, move = m.groups()
            if move not in (LEFT, RIGHT):
                raise ParseError(f"move must be L or R, got {move!r}", lineno, raw.find(move, col) + 1)
            states = values["states"][0]
            gamma = values["tape_alphabet"][0]
            for name in (q, q2):
                if name not in states:
                    raise UndeclaredState(f"undeclared state {name!r}", lineno, raw.find(name, col) + 1)
            for sym in (s, s2):
                if sym not in gamma:
                    raise UndeclaredSymbol(f"undeclared symbol {sym!r}", lineno, raw.find(sym, col) + 1)
            if (q, s) in delta:
                raise DuplicateTransition(f"duplicate transition for ({q}, {s!r})", lineno, col)
            if q in (values["accept"][0][0], values["reject"][0][0]):
                raise ParseError(f"transition out of halting state {q!r}", lineno, col)
            delta[(q, s)] = (q2, s2, move)
            continue
        if key not in _HEADERS:
            raise ParseError(f"unknown section {key!r}", lineno, indent + 1)
        if expected >= len(_HEADERS) or key != _HEADERS[expected]:
            want = _HEADERS[expected] if expected < len(_HEADERS) else "delta"
            raise ParseError(f"expected section {want!r}, got {key!r}", lineno, indent + 1)
        items = rest.split()
        if not items:
            raise ParseError(f"section {key!r} is empty", lineno, col)
        if key in ("blank", "start", "accept", "reject") and len(items) != 1:
            raise ParseError(f"section {key!r} takes exactly one value", lineno, col)
        if key in ("input_alphabet", "tape_alphabet", "blank"):
            for sym in items:
                if len(sym) != 1:
                    raise ParseError(f"symbol {sym!r} must be a single code point", lineno, raw.find(sym, col) + 1)
        if key == "input_alphabet" and items == ["-"]:
            items = []
        values[key] = (items, lineno)
        expected += 1
        if key in ("start", "accept", "reject"):
            if items[0] not in values["states"][0]:
                raise UndeclaredState(f"undeclared state {items[0]!r}", lineno, col)
        if key == "blank" and items[0] not in values["tape_alphabet"][0]:
            raise UndeclaredSymbol(f"blank {items[0]!r} is not a tape symbol", lineno, col)
        if key == "tape_alphabet":
            for sym in values["input_alphabet"][0]:
                if sym not in items:
                    raise UndeclaredSymbol(f"input symbol {sym!r} is not a tape symbol", lineno, col)
    if expected < len(_HEADERS):
        raise ParseError(f"missing section {_HEADERS[expected]!r}", len(text.splitlines()) + 1)
    try:
        alphabet = Alphabet(tuple(values["tape_alphabet"][0]), tuple(values["input_alphabet"][0]),
                            values["blank"][0][0])
    except CodecError as exc:
        raise ParseError(str(exc), values["tape_alphabet"][1]) from None
    return MachineSpec(tuple(values["states"][0]), alphabet, delta, values["start"][0][0],
                       values["accept"][0][0], values["reject"][0][0])


def format_machine(spec: MachineSpec) -> str:
    a = spec.alphabet
    lines = [
        "states: " + " ".join(spec.states),
        "input_alphabet: " + (" ".join(a.input_symbols) or "-"),
        "tape_alphabet: " + " ".join(a.tape_symbols),
        f"blank: {a.blank}",
        f"start: {spec.start}",
        f"accept: {spec.accept}",
        f"reject: {spec.reject}",
    ]
    for q in spec.states:
        for s in a.tape_symbols:
            if (q, s) in spec.delta:
                q2, s2, move = spec.delta[(q, s)]
                lines.append(f"delta: {q} {s} -> {q2} {s2} {move}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ encoding
#
# Bit layout (bit 0 / bit 1 written as the target's first two input symbols):
#   gamma(|Q|) gamma(|G|) gamma(|S|+1)
#   per state:       gamma(len(utf8)) + 8 bits per byte
#   per tape symbol: gamma(len(utf8)) + 8 bits per byte
#   per input symbol: tape-symbol index (wg bits)
#   blank index (wg), start, accept, reject (wq bits each)
#   per non-halting state (Q order) x tape symbol (G order):
#       next state (wq) | written symbol (wg) | move (1 bit, 1 = R)
# where gamma(n) is the Elias gamma code of n >= 1, wq = bits(|Q|-1), wg = bits(|G|-1).


def _width(n: int) -> int:
    return max(1, (n - 1).bit_length())


def _gamma(n: int) -> str:
    bits = bin(n)[2:]
    return "0" * (len(bits) - 1) + bits


def _fixed(v: int, width: int) -> str:
    return format(v, f"0{width}b")


class _BitReader:
    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def take(self, n: int) -> str:
        if self.pos + n > len(self.bits):
            raise MalformedEncoding("encoding ends early")
        chunk = self.bits[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def fixed(self, width: int, limit: int) -> int:
        v = int(self.take(width), 2)
        if v >= limit:
            raise MalformedEncoding(f"field value {v} out of range {limit}")
        return v

    def gamma(self) -> int:
        zeros = 0
        while self.take(1) == "0":
            zeros += 1
            if zeros > 64:
                raise MalformedEncoding("runaway length prefix")
        return int("1" + self.take(zeros), 2) if zeros else 1

    def name(self) -> str:
        n = self.gamma()
        raw = bytes(int(self.take(8), 2) for _ in range(n))
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedEncoding("name is not UTF-8") from None


def _bit_symbols(target: Alphabet) -> tuple[str, str]:
    if len(target.input_symbols) < 2:
        raise TargetTooSmall("target alphabet needs at least two non-blank symbols")
    return target.input_symbols[0], target.input_symbols[1]


BINARY = Alphabet(("_", "0", "1"), ("0", "1"), "_")


def encode_machine(spec: MachineSpec, target: Alphabet = BINARY) -> str:
    zero, one = _bit_symbols(target)
    a = spec.alphabet
    nq, ng = len(spec.states), len(a.tape_symbols)
    wq, wg = _width(nq), _width(ng)
    qi = {q: i for i, q in enumerate(spec.states)}
    gi = {s: i for i, s in enumerate(a.tape_symbols)}
    parts = [_gamma(nq), _gamma(ng), _gamma(len(a.input_symbols) + 1)]
    for name in spec.states + a.tape_symbols:
        raw = name.encode("utf-8")
        parts.append(_gamma(len(raw)) + "".join(_fixed(byte, 8) for byte in raw))
    parts += [_fixed(gi[s], wg) for s in a.input_symbols]
    parts.append(_fixed(gi[a.blank], wg))
    parts += [_fixed(qi[q], wq) for q in (spec.start, spec.accept, spec.reject)]
    for q in spec.states:
        if spec.is_halting(q):
            continue
        for s in a.tape_symbols:
            q2, s2, move = spec.delta[(q, s)]
            parts.append(_fixed(qi[q2], wq) + _fixed(gi[s2], wg) + ("1" if move == RIGHT else "0"))
    bits = "".join(parts)
    return bits.translate(str.maketrans({"0": zero, "1": one}))


def decode_machine(encoded: str, target: Alphabet = BINARY) -> MachineSpec:
    zero, one = _bit_symbols(target)
    if any(c not in (zero, one) for c in encoded):
        raise MalformedEncoding("encoding contains foreign symbols")
    r = _BitReader(encoded.translate(str.maketrans({zero: "0", one: "1"})))
    nq, ng, ns = r.gamma(), r.gamma(), r.gamma() - 1
    if ng < 2 or ns >= ng:
        raise MalformedEncoding("inconsistent alphabet sizes")
    wq, wg = _width(nq), _width(ng)
    states = tuple(r.name() for _ in range(nq))
    gamma = tuple(r.name() for _ in range(ng))
    sigma = tuple(gamma[r.fixed(wg, ng)] for _ in range(ns))
    blank = gamma[r.fixed(wg, ng)]
    start, accept, reject = (states[r.fixed(wq, nq)] for _ in range(3))
    delta = {}
    for q in states:
        if q in (accept, reject):
            continue
        for s in gamma:
            q2 = states[r.fixed(wq, nq)]
            s2 = gamma[r.fixed(wg, ng)]
            delta[(q, s)] = (q2, s2, RIGHT if r.take(1) == "1" else LEFT)
    if r.pos != len(r.bits):
        raise MalformedEncoding("trailing symbols after machine description")
    try:
        return MachineSpec(states, Alphabet(gamma, sigma, blank), delta, start, accept, reject)
    except (MachineError, CodecError) as exc:
        raise MalformedEncoding(str(exc)) from None


def encoding_length(spec: MachineSpec) -> int:
    """Length of :func:`encode_machine`'s output, counted field by field."""
    a = spec.alphabet
    nq, ng = len(spec.states), len(a.tape_symbols)
    wq, wg = _width(nq), _width(ng)
    glen = lambda n: 2 * n.bit_length() - 1
    total = glen(nq) + glen(ng) + glen(len(a.input_symbols) + 1)
    for name in spec.states + a.tape_symbols:
        k = len(name.encode("utf-8"))
        total += glen(k) + 8 * k
    total += wg * (len(a.input_symbols) + 1) + 3 * wq
    working = sum(1 for q in spec.states if not spec.is_halting(q))
    return total + working * ng * (wq + wg + 1)


def simulate_universal(encoded: str, word: str, budget: int, target: Alphabet = BINARY) -> RunOutcome:
    """Interpret an encoded machine description on ``word``.

    The interpreter decodes the description into its transition table and
    drives it with the same executor as :func:`run`.
    """
    return run(decode_machine(encoded, target), word, budget)

