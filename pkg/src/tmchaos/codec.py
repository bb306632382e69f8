"""Exact Gödel numbering of tape words and their rational phases.

Words are plain ``str`` objects; every symbol is a single code point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence


class CodecError(ValueError):
    pass


class SymbolNotInAlphabet(CodecError):
    def __init__(self, symbol: str):
        super().__init__(f"symbol {symbol!r} is not in the alphabet")
        self.symbol = symbol


@dataclass(frozen=True)
class Alphabet:
    tape_symbols: tuple[str, ...]
    input_symbols: tuple[str, ...]
    blank: str

    def __post_init__(self):
        object.__setattr__(self, "tape_symbols", tuple(self.tape_symbols))
        object.__setattr__(self, "input_symbols", tuple(self.input_symbols))
        gamma = self.tape_symbols
        if len(set(gamma)) != len(gamma):
            raise CodecError("tape symbols must be pairwise distinct")
        if len(set(self.input_symbols)) != len(self.input_symbols):
            raise CodecError("input symbols must be pairwise distinct")
        if len(gamma) < 2:
            raise CodecError("tape alphabet needs at least 2 symbols")
        if self.blank not in gamma:
            raise CodecError("blank must be a tape symbol")
        if self.blank in self.input_symbols:
            raise CodecError("blank may not be an input symbol")
        missing = [s for s in self.input_symbols if s not in gamma]
        if missing:
            raise CodecError(f"input symbols {missing} are not tape symbols")
        for s in gamma:
            if len(s) != 1 or s.isspace():
                raise CodecError(f"symbol {s!r} must be a single non-whitespace code point")

    @property
    def base(self) -> int:
        return len(self.tape_symbols)

    @classmethod
    def from_symbols(cls, symbols: str, blank: str | None = None) -> "Alphabet":
        """Alphabet over ``symbols`` whose input symbols are everything but the blank.

        The blank defaults to the first symbol.
        """
        blank = symbols[0] if blank is None else blank
        return cls(tuple(symbols), tuple(s for s in symbols if s != blank), blank)


@dataclass(frozen=True)
class GodelMap:
    """Bijection from tape symbols onto ``0..b-1``; ``symbols[d]`` is the symbol of digit d."""

    symbols: tuple[str, ...]
    _digits: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise CodecError("Gödel map must be one-to-one")
        object.__setattr__(self, "_digits", {s: d for d, s in enumerate(self.symbols)})

    @property
    def base(self) -> int:
        return len(self.symbols)

    def __getitem__(self, symbol: str) -> int:
        try:
            return self._digits[symbol]
        except KeyError:
            raise SymbolNotInAlphabet(symbol) from None

    def __contains__(self, symbol) -> bool:
        return symbol in self._digits

    def as_dict(self) -> dict[str, int]:
        return dict(self._digits)

    def digits(self, word: str) -> list[int]:
        return [self[s] for s in word]

    def decode(self, numerator: int, length: int) -> str:
        """Inverse of :func:`godelize` for words of a known length."""
        b = self.base
        if numerator < 0 or numerator >= b ** length:
            raise CodecError(f"{numerator} does not fit in {length} base-{b} digits")
        out = []
        for _ in range(length):
            numerator, d = divmod(numerator, b)
            out.append(self.symbols[d])
        return "".join(reversed(out))


def build_godel_map(alphabet: Alphabet) -> GodelMap:
    """Canonical map: blank -> 0, other tape symbols -> 1, 2, ... in declaration order."""
    rest = tuple(s for s in alphabet.tape_symbols if s != alphabet.blank)
    return GodelMap((alphabet.blank,) + rest)


@lru_cache(maxsize=None)
def _power_table(base: int) -> list[int]:
    return [1]


def powers(base: int, upto: int) -> list[int]:
    """Cached list whose item k is ``base ** k``, holding at least ``upto + 1`` items."""
    table = _power_table(base)
    while len(table) <= upto:
        table.append(table[-1] * base)
    return table


def power(base: int, k: int) -> int:
    return powers(base, k)[k]


def digits_value(digits: Sequence[int], base: int) -> int:
    """Big-endian digit list to integer (leftmost digit most significant)."""
    n = len(digits)
    if n == 0:
        return 0
    if n <= 64:
        acc = 0
        for d in digits:
            acc = acc * base + d
        return acc
    # divide and conquer keeps long words from going quadratic
    half = n // 2
    return digits_value(digits[:half], base) * power(base, n - half) + digits_value(digits[half:], base)


def godelize(word: str, gmap: GodelMap) -> int:
    """Sum of g(w_k) * b**k where w_0 is the rightmost symbol."""
    return digits_value(gmap.digits(word), gmap.base)


@dataclass(frozen=True)
class Phase:
    """The rational ``numerator / base**length`` together with the word it came from."""

    numerator: int
    base: int
    length: int
    gmap: GodelMap = field(repr=False)

    def __post_init__(self):
        if not 0 <= self.numerator < power(self.base, self.length):
            raise CodecError("numerator out of range for phase length")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, power(self.base, self.length))

    @property
    def canonical_word(self) -> str:
        return self.gmap.decode(self.numerator, self.length)

    def __float__(self) -> float:
        # int / int is correctly rounded for arbitrarily large operands
        return self.numerator / power(self.base, self.length)

    def to_record(self) -> dict:
        return {"numerator": str(self.numerator), "base": self.base, "length": self.length}


def rationalize(word: str, gmap: GodelMap) -> Phase:
    return Phase(godelize(word, gmap), gmap.base, len(word), gmap)


def trim_at_blank(tape: str, blank: str) -> str:
    cut = tape.find(blank)
    return tape if cut < 0 else tape[:cut]


def phase_of_tape(tape: str, gmap: GodelMap) -> Phase:
    """Phase of the tape prefix up to (not including) the first blank."""
    return rationalize(trim_at_blank(tape, gmap.symbols[0]), gmap)
