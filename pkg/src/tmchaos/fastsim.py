"""Compiled sound-mode debugger for bulk surveys.

Produces the same outcome, loop indices and float64 phase history as
:func:`tmchaos.debugger.debug_run` in sound mode, plus an exact "some phase
repeats" flag, without keeping big-integer numerators.

Configurations and canonical prefixes are indexed by 64-bit polynomial hashes;
every hash hit is confirmed by replaying the machine to the earlier step and
comparing tapes, so collisions cannot change a verdict. Phase floats come from
the leading K digits: when the tail beyond K digits could move the rounding,
the step is flagged and its canonical word is copied out so the caller can
round it exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .codec import digits_value, power
from .debugger import EXHAUSTED, NO, YES
from .machine import MachineError, MachineSpec, initial_configuration


@numba.njit(cache=True)
def _round_ratio(a, d, sticky):
    """Correctly rounded a/d for 0 < a <= d <= 2**62; ``sticky`` adds an
    infinitesimal so the result is the rounding of a value just above a/d."""
    if a >= d:
        return 1.0
    e = 0
    r = a
    while r < d:
        r <<= 1
        e += 1
    r -= d
    mant = 1
    for _ in range(52):
        r <<= 1
        mant <<= 1
        if r >= d:
            mant |= 1
            r -= d
    r <<= 1
    rb = r >= d
    if rb:
        r -= d
    if rb and (r != 0 or sticky or (mant & 1) == 1):
        mant += 1
    return mant * 2.0 ** -(e + 52)


@numba.njit(cache=True)
def _replay(table, b, start, init, steps, scratch):
    scratch[:] = 0
    scratch[:init.size] = init
    state, head = start, 0
    for _ in range(steps):
        row = state * b + scratch[head]
        scratch[head] = table[row, 1]
        state = table[row, 0]
        if table[row, 2] > 0:
            head += 1
        elif head > 0:
            head -= 1
    return state, head


@numba.njit(cache=True)
def _slot(h, bits):
    h = (h ^ (h >> np.uint64(31))) * np.uint64(0x94D049BB133111EB)
    return np.int64(h >> np.uint64(64 - bits))


@numba.njit(cache=True)
def _survey(table, halting, b, start, init, budget, K, arena):
    L = init.size + budget + 2
    tape = np.zeros(L, dtype=np.uint8)
    tape[:init.size] = init
    scratch = np.zeros(L, dtype=np.uint8)

    R = np.empty(L, dtype=np.uint64)
    acc = np.uint64(1)
    for i in range(L):
        R[i] = acc
        acc = acc * np.uint64(0x9E3779B97F4A7C15)
    bk = np.empty(K + 1, dtype=np.int64)
    bk[0] = 1
    for i in range(1, K + 1):
        bk[i] = bk[i - 1] * b

    bits = 1
    while (1 << bits) < 2 * (budget + 1):
        bits += 1
    M = 1 << bits
    cfg_slots = np.full(M, -1, dtype=np.int64)
    pre_slots = np.full(M, -1, dtype=np.int64)
    rec_state = np.empty(budget + 1, dtype=np.int64)
    rec_head = np.empty(budget + 1, dtype=np.int64)
    rec_hash = np.empty(budget + 1, dtype=np.uint64)
    rec_pre = np.empty(budget + 1, dtype=np.uint64)
    rec_f = np.empty(budget + 1, dtype=np.int64)
    values = np.empty(budget + 1, dtype=np.float64)
    fallback = np.empty(budget + 1, dtype=np.int64)
    offsets = np.empty(budget + 2, dtype=np.int64)
    n_fb = 0
    offsets[0] = 0
    overflow = False

    f = 0
    while f < init.size and init[f] != 0:
        f += 1
    H = np.uint64(0)
    G = np.uint64(0)
    A = 0
    for i in range(init.size):
        H += np.uint64(init[i]) * R[i]
        if i < f:
            G += np.uint64(init[i]) * R[i]
        if i < K:
            A += init[i] * bk[K - 1 - i]

    state, head, t = start, 0, 0
    halted_at_start = False
    repeat = False
    kind, loop_i, halt = 2, -1, -1
    while True:
        if t > 0 and halting[state]:
            kind, halt = 0, state
            break
        # record (or detect) the configuration reached after t steps
        mix = H ^ (np.uint64(state) * np.uint64(0xBF58476D1CE4E5B9))
        s = _slot(mix ^ (np.uint64(head) * np.uint64(0x9E3779B97F4A7C15)), bits)
        found = -1
        while cfg_slots[s] != -1:
            k = cfg_slots[s]
            if rec_state[k] == state and rec_head[k] == head and rec_hash[k] == H:
                q, hd = _replay(table, b, start, init, k, scratch)
                if q == state and hd == head and np.array_equal(scratch, tape):
                    found = k
                    break
            s = (s + 1) & (M - 1)
        if found >= 0:
            kind, loop_i = 1, found
            break
        cfg_slots[s] = t
        rec_state[t] = state
        rec_head[t] = head
        rec_hash[t] = H
        rec_pre[t] = G
        rec_f[t] = f

        # phase float from the leading digits
        if f == 0:
            values[t] = 0.0
        elif f <= K:
            values[t] = _round_ratio(A // bk[K - f], bk[f], False)
        else:
            lo = _round_ratio(A, bk[K], True)
            hi = _round_ratio(A + 1, bk[K], False)
            values[t] = lo
            if lo != hi:
                start_off = offsets[n_fb]
                if start_off + f > arena.size:
                    overflow = True
                else:
                    arena[start_off:start_off + f] = tape[:f]
                    fallback[n_fb] = t
                    offsets[n_fb + 1] = start_off + f
                    n_fb += 1

        # exact phase repeat, checked until the first one is confirmed
        if not repeat:
            s = _slot(G ^ (np.uint64(f) * np.uint64(0xBF58476D1CE4E5B9)), bits)
            while pre_slots[s] != -1:
                k = pre_slots[s]
                if rec_f[k] == f and rec_pre[k] == G:
                    _replay(table, b, start, init, k, scratch)
                    if np.array_equal(scratch[:f], tape[:f]):
                        repeat = True
                        break
                s = (s + 1) & (M - 1)
            if not repeat:
                pre_slots[s] = t

        if halting[state]:  # only at t == 0
            kind, halt = 0, state
            halted_at_start = True
            break
        if t >= budget:
            break
        # one transition
        p = head
        old = tape[p]
        row = state * b + old
        new = table[row, 1]
        state = table[row, 0]
        if table[row, 2] > 0:
            head = p + 1
        elif p > 0:
            head = p - 1
        t += 1
        if new != old:
            tape[p] = new
            H = H - np.uint64(old) * R[p] + np.uint64(new) * R[p]
            if p < K:
                A += (new - old) * bk[K - 1 - p]
            if p < f:
                if new != 0:
                    G = G - np.uint64(old) * R[p] + np.uint64(new) * R[p]
                else:
                    G -= np.uint64(old) * R[p]
                    for i in range(p + 1, f):
                        G -= np.uint64(tape[i]) * R[i]
                    f = p
            elif p == f:
                e = p
                while e < L and tape[e] != 0:
                    G += np.uint64(tape[e]) * R[e]
                    e += 1
                f = e
    # the repeating or halting configuration is not recorded, except a halting start
    n = t + 1 if kind == 2 or halted_at_start else t
    return (kind, loop_i, halt, t, values[:n].copy(), repeat,
            fallback[:n_fb].copy(), offsets[:n_fb + 1].copy(), overflow)


@dataclass
class FastSurvey:
    kind: str
    loop: tuple[int, int] | None
    halt: str | None
    steps: int
    values: np.ndarray
    repeat: bool
    exact_roundings: int = 0  # steps whose float needed the full canonical word


def _digits_for(b: int) -> int:
    k = 0
    while b ** (k + 1) <= 2 ** 62:
        k += 1
    return k


def compile_machine(spec: MachineSpec):
    qi, gamma, _, table = spec._table
    b = len(gamma)
    arr = np.full((len(spec.states) * b, 3), -1, dtype=np.int64)
    for row, entry in enumerate(table):
        if entry is not None:
            arr[row] = entry
    halting = np.zeros(len(spec.states), dtype=np.bool_)
    halting[qi[spec.accept]] = halting[qi[spec.reject]] = True
    return arr, halting, b, qi[spec.start]


def fast_survey(spec: MachineSpec, word: str, budget: int) -> FastSurvey:
    """Sound-mode debugger run returning only what a census needs."""
    if budget < 1:
        raise MachineError("budget must be >= 1")
    initial_configuration(spec, word)
    table, halting, b, start = compile_machine(spec)
    if b > 255:
        raise MachineError("compiled survey supports at most 255 tape symbols")
    _, _, si, _ = spec._table
    init = np.array([si[s] for s in word], dtype=np.uint8)
    arena = np.empty(4 * (budget + 2) + 64, dtype=np.uint8)
    while True:
        kind, loop_i, halt, t, values, repeat, fb, offsets, overflow = _survey(
            table, halting, b, start, init, budget, _digits_for(b), arena)
        if not overflow:
            break
        arena = np.empty(arena.size * 8, dtype=np.uint8)
    for step, lo, hi in zip(fb, offsets[:-1], offsets[1:]):
        digits = arena[lo:hi].tolist()
        values[step] = digits_value(digits, b) / power(b, len(digits))
    kinds = (YES, NO, EXHAUSTED)
    return FastSurvey(kinds[kind], (int(loop_i), int(t)) if kind == 1 else None,
                      spec.halt_kind(spec.states[halt]) if kind == 0 else None, int(t), values, bool(repeat), len(fb))
