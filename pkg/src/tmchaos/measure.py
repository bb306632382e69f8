"""Sequence space: sorted limit vectors in [0,1]^n measured by n! times volume."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


class MeasureError(ValueError):
    pass


@dataclass(frozen=True)
class SequencePoint:
    coords: tuple

    def __post_init__(self):
        c = self.coords
        if any(not 0 <= v <= 1 for v in c):
            raise MeasureError("coordinates must lie in [0, 1]")
        if any(c[i] > c[i + 1] for i in range(len(c) - 1)):
            raise MeasureError("coordinates must be ascending")

    @property
    def n(self) -> int:
        return len(self.coords)


def sequence_to_space(limits: Sequence, n: int) -> SequencePoint:
    """Pad the ascending limit points of an m-component mixture out to n coordinates
    by repeating the last limit."""
    m = len(limits)
    if not 1 <= m <= n:
        raise MeasureError(f"need 1 <= m <= n, got m={m}, n={n}")
    if any(limits[i] > limits[i + 1] for i in range(m - 1)):
        raise MeasureError("limits must be ascending")
    return SequencePoint(tuple(limits) + (limits[-1],) * (n - m))


@dataclass(frozen=True)
class MeasureEstimate:
    value: float
    stderr: float
    exact: bool
    samples: int = 0

    def to_dict(self) -> dict:
        return {"value": float(self.value), "stderr": self.stderr, "exact": self.exact,
                "samples": self.samples}


def sorted_box_volume(lows: Sequence, highs: Sequence):
    """Volume of {x in box : x_1 <= ... <= x_n}, exactly.

    Cut [0, 1] at every box endpoint. A sorted point puts its coordinates in
    non-decreasing elementary segments; c coordinates sharing a segment of
    length L sweep L**c / c! of volume. Summing over admissible placements is a
    small dynamic program. Fractions in give a Fraction out.
    """
    n = len(lows)
    if len(highs) != n or n == 0:
        raise MeasureError("box needs matching, nonempty bounds")
    for lo, hi in zip(lows, highs):
        if not 0 <= lo <= 1 or not 0 <= hi <= 1:
            raise MeasureError("box must lie within [0, 1]^n")
    if any(hi <= lo for lo, hi in zip(lows, highs)):
        return 0 * lows[0]
    cuts = sorted(set(lows) | set(highs) | {0, 1}, key=float)
    # dp[k]: volume with the first k coordinates placed in segments seen so far
    dp = [1] + [0] * n
    for a, b in zip(cuts[:-1], cuts[1:]):
        length = b - a
        ok = [lows[k] <= a and b <= highs[k] for k in range(n)]
        new = list(dp)
        for k in range(n):
            if not dp[k]:
                continue
            term = dp[k]
            for c in range(1, n - k + 1):
                if not ok[k + c - 1]:
                    break
                term = term * length / c
                new[k + c] += term
        dp = new
    return dp[n]


def sequence_measure_box(lows: Sequence, highs: Sequence) -> MeasureEstimate:
    """n! times the volume of the box intersected with the sorted region."""
    n = len(lows)
    vol = sorted_box_volume(lows, highs)
    value = math.factorial(n) * vol
    return MeasureEstimate(value, 0.0, True)


def mc_sequence_measure_box(lows, highs, samples: int, seed: int) -> MeasureEstimate:
    """Monte-Carlo counterpart of :func:`sequence_measure_box` (sort uniform points)."""
    n = len(lows)
    rng = np.random.default_rng(seed)
    lo, hi = np.asarray(lows, float), np.asarray(highs, float)
    hits = 0
    for size in _chunks(samples):
        pts = np.sort(rng.random((size, n)), axis=1)
        hits += int(np.count_nonzero(np.all((pts >= lo) & (pts <= hi), axis=1)))
    p = hits / samples
    # sorted uniform points have density n! on the sorted region, so the fraction is the measure
    return MeasureEstimate(p, math.sqrt(p * (1 - p) / samples), False, samples)


def _chunks(total: int, size: int = 200_000):
    while total > 0:
        yield min(size, total)
        total -= size


def mc_near_diagonal_fraction(n: int, delta: float, samples: int, seed: int) -> MeasureEstimate:
    """Fraction of sorted uniform n-tuples with r_n - r_1 < delta."""
    if n < 2:
        raise MeasureError("dimension must be >= 2")
    if not 0 <= delta <= 1:
        raise MeasureError("delta must lie in [0, 1]")
    if samples < 1:
        raise MeasureError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    hits = 0
    for size in _chunks(samples):
        pts = np.sort(rng.random((size, n)), axis=1)
        hits += int(np.count_nonzero(pts[:, -1] - pts[:, 0] < delta))
    p = hits / samples
    return MeasureEstimate(p, math.sqrt(p * (1 - p) / samples), False, samples)


def near_diagonal_probability(n: int, delta: float) -> float:
    """P(max - min < delta) for n i.i.d. uniforms."""
    return n * delta ** (n - 1) * (1 - delta) + delta ** n
