"""Budgeted halting census over a family of small machines.

The family for (states, symbols) is every complete transition table on
``states`` working states plus one halting state ``H`` (used as both accept and
reject), tape symbols ``0..symbols-1`` with ``0`` blank. Each table entry picks
(next state, written symbol, move); entries are enumerated in a fixed mixed
radix so machine ``i`` is the same machine in every run.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .codec import Alphabet
from .debugger import EXHAUSTED, NO, PROJECTION_ERROR, SOUND, YES, debug_run, history_phases
from .fastsim import fast_survey
from .machine import LEFT, RIGHT, MachineSpec
from .orbits import AnalysisParams, Orbit, classify_orbit

ENUMERATE, SAMPLE, EXPLICIT = "enumerate", "sample", "explicit"
DEFAULT_ENUMERATION_CAP = 100_000
HALT = "H"
DISTRIBUTION = "uniform over complete transition tables of the family"


class CensusError(ValueError):
    pass


class FamilyTooLarge(CensusError):
    pass


@dataclass(frozen=True)
class MachineFamily:
    states: int
    symbols: int

    def __post_init__(self):
        if self.states < 1:
            raise CensusError("need at least one working state")
        if not 2 <= self.symbols <= 10:
            raise CensusError("symbols must be between 2 and 10")

    @property
    def choices(self) -> int:
        return (self.states + 1) * self.symbols * 2

    @property
    def entries(self) -> int:
        return self.states * self.symbols

    @property
    def size(self) -> int:
        return self.choices ** self.entries

    @property
    def state_names(self) -> tuple[str, ...]:
        return tuple(_state_name(i) for i in range(self.states)) + (HALT,)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet.from_symbols("".join(str(d) for d in range(self.symbols)))

    def machine(self, index: int) -> MachineSpec:
        if not 0 <= index < self.size:
            raise CensusError(f"machine index {index} outside family of size {self.size}")
        names = self.state_names
        syms = self.alphabet.tape_symbols
        delta = {}
        # entry 0 is the least significant digit of the index
        for e in range(self.entries):
            index, choice = divmod(index, self.choices)
            nxt, rest = divmod(choice, self.symbols * 2)
            write, move = divmod(rest, 2)
            delta[(names[e // self.symbols], syms[e % self.symbols])] = (
                names[nxt], syms[write], RIGHT if move else LEFT)
        return MachineSpec(names, self.alphabet, delta, names[0], HALT, HALT)

    def to_dict(self) -> dict:
        return {"states": self.states, "symbols": self.symbols, "halting_states": 1,
                "size": self.size}


def _state_name(i: int) -> str:
    return chr(ord("A") + i) if i < 26 else f"S{i}"


@dataclass
class CensusReport:
    family: MachineFamily
    mode: str
    budget: int
    detection: str
    seed: int | None
    input_policy: str
    total: int
    outcomes: dict
    labels: dict
    mixture_k: dict
    params: AnalysisParams = field(default_factory=AnalysisParams)
    indices: list | None = None

    def to_dict(self) -> dict:
        extra = {} if self.indices is None else {"indices": list(self.indices)}
        return {**extra, "family": self.family.to_dict(), "mode": self.mode, "budget": self.budget,
                "detection": self.detection, "seed": self.seed, "input_policy": self.input_policy,
                "distribution": DISTRIBUTION, "total": self.total, "outcomes": self.outcomes,
                "labels": self.labels, "mixture_k": self.mixture_k,
                "analysis_params": self.params.as_dict(),
                "note": "finite-budget empirical frequencies"}


def machine_indices(family: MachineFamily, mode: str, count: int | None = None,
                    seed: int | None = None, cap: int = DEFAULT_ENUMERATION_CAP) -> list[int]:
    if mode == ENUMERATE:
        if family.size > cap:
            raise FamilyTooLarge(f"family has {family.size} machines, enumeration cap is {cap}")
        return list(range(family.size))
    if mode == SAMPLE:
        if count is None or count < 1 or seed is None:
            raise CensusError("sampling needs a positive count and a seed")
        rng = np.random.default_rng(seed)
        # draw each table entry independently: uniform over tables without big-int sampling
        digits = rng.integers(0, family.choices, size=(count, family.entries))
        return [sum(int(d) * family.choices ** e for e, d in enumerate(row)) for row in digits]
    raise CensusError(f"unknown census mode {mode!r}")


def census_input(family: MachineFamily, policy: str, seed: int | None, index: int) -> str:
    """Input word for machine ``index``: ``blank`` or ``random:<length>``."""
    if policy == "blank":
        return ""
    kind, _, length = policy.partition(":")
    if kind != "random" or not length.isdigit():
        raise CensusError(f"unknown input policy {policy!r}")
    rng = np.random.default_rng([0 if seed is None else seed, index])
    sigma = family.alphabet.input_symbols
    return "".join(sigma[i] for i in rng.integers(0, len(sigma), size=int(length)))


def survey_machine(spec: MachineSpec, word: str, budget: int, detection: str,
                   params: AnalysisParams) -> tuple[str, str | None, int | None]:
    """Outcome of one debugger run and, when the budget ran out, the orbit label.

    Sound detection goes through the compiled survey, which yields the same
    outcome and phase floats as :func:`debug_run` without exact numerators.
    """
    if detection == SOUND:
        fast = fast_survey(spec, word, budget)
        if fast.kind != EXHAUSTED:
            return fast.kind, None, None
        orbit = Orbit(fast.values, precision="exact-rational", bounds=(0.0, 1.0),
                      projection_error=PROJECTION_ERROR, repeat=fast.repeat)
    else:
        report = debug_run(spec, word, budget, detection)
        if report.outcome.kind != EXHAUSTED:
            return report.outcome.kind, None, None
        orbit = history_phases(report)
    cls = classify_orbit(orbit, params)
    return EXHAUSTED, cls.label, cls.k


def halting_census(family: MachineFamily, budget: int, mode: str = ENUMERATE, count: int | None = None,
                   seed: int | None = None, input_policy: str = "blank", detection: str = SOUND,
                   params: AnalysisParams = AnalysisParams(), cap: int = DEFAULT_ENUMERATION_CAP,
                   workers: int = 1, indices: list[int] | None = None) -> CensusReport:
    """Run the debugger on every machine in scope and tally outcomes.

    Passing ``indices`` surveys exactly those family members (mode ``explicit``).
    """
    explicit = indices is not None
    if explicit:
        mode = EXPLICIT
        for i in indices:
            family.machine(i)  # range check
    else:
        indices = machine_indices(family, mode, count, seed, cap)
    jobs = [(i, family, budget, input_policy, seed, detection, params) for i in indices]
    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            # imap keeps machine-index order, so aggregation is order-independent of scheduling
            results = list(pool.imap(_job, jobs, chunksize=64))
    else:
        results = [_job(j) for j in jobs]
    outcomes = Counter({YES: 0, NO: 0, EXHAUSTED: 0})
    labels = Counter()
    mixture_k = Counter()
    for kind, label, k in results:
        outcomes[kind] += 1
        if label is not None:
            labels[label] += 1
            if label == "NonCauchyMixture":
                mixture_k[str(k)] += 1
    return CensusReport(family, mode, budget, detection, seed, input_policy, len(indices),
                        dict(sorted(outcomes.items())), dict(sorted(labels.items())),
                        dict(sorted(mixture_k.items(), key=lambda kv: int(kv[0]))), params,
                        list(indices) if explicit else None)


def _job(args):
    i, family, budget, policy, seed, detection, params = args
    spec = family.machine(i)
    return survey_machine(spec, census_input(family, policy, seed, i), budget, detection, params)
