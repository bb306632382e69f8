"""The debugger machine: budgeted simulation that records the rationalized tape
after every write and stops on a repeated key (``N``), a halt (``Y``) or budget
exhaustion.

Two keying modes:

``paper``
    key is the tape content up to the first blank and nothing else; a repeat
    may be spurious when state or head differ.
``sound``
    key is (state, head, whole tape); a repeat is a genuine configuration
    cycle, so ``N`` certifies non-termination.
"""
from __future__ import annotations

from dataclasses import dataclass

from .codec import GodelMap, Phase, build_godel_map, digits_value, power, powers
from .machine import Executor, MachineError, MachineSpec, initial_configuration
from .orbits import Orbit

PAPER, SOUND = "paper", "sound"
YES, NO, EXHAUSTED = "Y", "N", "BudgetExhausted"

# projection of a value in [0, 1) to float64 is correctly rounded: error <= half an ulp of 1
PROJECTION_ERROR = 2.0 ** -53


@dataclass(frozen=True)
class DebugOutcome:
    kind: str  # YES, NO or EXHAUSTED
    loop: tuple[int, int] | None = None  # (earlier step, repeating step) for NO
    halt: str | None = None  # "accept" / "reject" for YES

    def __post_init__(self):
        if self.kind == NO and not (self.loop and self.loop[0] < self.loop[1]):
            raise ValueError("a loop outcome needs step indices i < j")


class HistoryTable:
    """Ordered phases ``h_n`` with an exact-membership index."""

    def __init__(self, gmap: GodelMap, mode: str):
        self.gmap = gmap
        self.mode = mode
        self.steps: list[int] = []
        self.numerators: list[int] = []
        self.lengths: list[int] = []
        self.index: dict = {}

    def __len__(self):
        return len(self.steps)

    def add(self, step: int, numerator: int, length: int, key) -> None:
        self.index[key] = len(self.steps)
        self.steps.append(step)
        self.numerators.append(numerator)
        self.lengths.append(length)

    def phase(self, i: int) -> Phase:
        return Phase(self.numerators[i], self.gmap.base, self.lengths[i], self.gmap)

    @property
    def entries(self) -> list[tuple[int, Phase]]:
        return [(self.steps[i], self.phase(i)) for i in range(len(self))]

    def floats(self) -> list[float]:
        pw = powers(self.gmap.base, max(self.lengths, default=0))
        return [num / pw[n] for num, n in zip(self.numerators, self.lengths)]

    def records(self):
        """Serializable trace records, one per entry."""
        b = self.gmap.base
        for step, num, n in zip(self.steps, self.numerators, self.lengths):
            yield {"step": step, "numerator": str(num), "base": b, "length": n,
                   "value": num / power(b, n)}


@dataclass
class DebugReport:
    outcome: DebugOutcome
    history: HistoryTable
    steps_executed: int
    mode: str

    def to_dict(self) -> dict:
        return {"outcome": self.outcome.kind, "halt": self.outcome.halt,
                "loop": None if self.outcome.loop is None else list(self.outcome.loop),
                "steps_executed": self.steps_executed, "history_length": len(self.history),
                "mode": self.mode}


def debug_run(spec: MachineSpec, word: str, budget: int, mode: str = SOUND) -> DebugReport:
    if budget < 1:
        raise MachineError("budget must be >= 1")
    if mode not in (PAPER, SOUND):
        raise ValueError(f"unknown detection mode {mode!r}")
    ex = Executor(spec, initial_configuration(spec, word))
    gmap = build_godel_map(spec.alphabet)
    b = ex.b
    tape = ex.tape
    # a run of `budget` steps never touches a cell beyond len(tape) + budget
    pw = powers(b, budget + len(tape) + 1)

    # canonical prefix: tape[:f] with f the first blank cell
    f = tape.index(0) if 0 in tape else len(tape)
    num = digits_value(tape[:f], b)
    # whole tape read little-endian; trailing blanks contribute nothing
    full = digits_value(tape[::-1], b)

    sound = mode == SOUND
    history = HistoryTable(gmap, mode)
    halt_idx = ex.halt_idx
    history.add(0, num, f, (ex.state, ex.head, full) if sound else (num, f))
    index = history.index
    steps_rec, nums, lens = history.steps, history.numerators, history.lengths

    # hot loop: Executor.advance inlined, locals only
    table = ex.table
    state, head, t = ex.state, ex.head, ex.steps
    outcome = None
    while True:
        if state in halt_idx:
            outcome = DebugOutcome(YES, halt=spec.halt_kind(spec.states[state]))
            break
        if t >= budget:
            outcome = DebugOutcome(EXHAUSTED)
            break
        p = head
        if p >= len(tape):
            tape.extend([0] * (p + 1 - len(tape)))
        old = tape[p]
        state, new, move = table[state * b + old]
        tape[p] = new
        head = p + 1 if move > 0 else (p - 1 if p > 0 else 0)
        t += 1
        if new != old:
            full += (new - old) * pw[p]
            if p < f:
                if new:
                    num += (new - old) * pw[f - 1 - p]
                else:
                    num //= pw[f - p]
                    f = p
            elif p == f:
                e = p + 1
                n = len(tape)
                while e < n and tape[e]:
                    e += 1
                num = num * pw[e - p] + (new if e == p + 1 else digits_value(tape[p:e], b))
                f = e
        if state in halt_idx:
            continue
        key = (state, head, full) if sound else (num, f)
        hit = index.get(key)
        if hit is not None:
            outcome = DebugOutcome(NO, loop=(steps_rec[hit], t))
            break
        index[key] = len(steps_rec)
        steps_rec.append(t)
        nums.append(num)
        lens.append(f)
    ex.state, ex.head, ex.steps = state, head, t
    return DebugReport(outcome, history, ex.steps, mode)


def history_phases(report: DebugReport) -> Orbit:
    """Float64 projection of the recorded phases, keeping the exact values for repeat tests."""
    h = report.history
    return Orbit(h.floats(), precision="exact-rational", bounds=(0.0, 1.0),
                 projection_error=PROJECTION_ERROR,
                 terminated=report.outcome.kind != EXHAUSTED,
                 exact=list(zip(h.numerators, h.lengths)))

