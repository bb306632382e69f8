"""Fixed-point iterations x_n = f(x_{n-1}) and contraction diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from fractions import Fraction

import numpy as np

from .orbits import Orbit

COMPLETED, SINGULARITY, OVERFLOWED = "Completed", "SingularityHit", "Overflowed"
CONTRACTION, NOT_CONTRACTION = "Contraction", "NotContraction"


class DomainError(ValueError):
    pass


class MapUndefined(ArithmeticError):
    pass


class PrecisionCapExceeded(ArithmeticError):
    pass


@dataclass(frozen=True)
class Babylonian:
    """Heron's square-root step for S; converges to sqrt(S) when S > 0."""

    S: float
    name = "babylonian"
    bounds = None

    def __call__(self, x):
        return (x + self.S / x) / 2

    def check_start(self, x0):
        if x0 == 0:
            raise DomainError("babylonian map is undefined at x0 = 0")


@dataclass(frozen=True)
class Logistic:
    r: float
    name = "logistic"
    bounds = (0.0, 1.0)

    def __post_init__(self):
        if not 0 <= self.r <= 4:
            raise DomainError(f"logistic parameter r={self.r} outside [0, 4]")

    def __call__(self, x):
        return self.r * x * (1 - x)

    def check_start(self, x0):
        if not 0 < x0 < 1:
            raise DomainError(f"logistic start {x0} outside (0, 1)")


@dataclass(frozen=True)
class Tan:
    name = "tan"
    bounds = None

    def __call__(self, x):
        return math.tan(x)

    def check_start(self, x0):
        if not math.isfinite(x0):
            raise DomainError("tan start must be finite")


@dataclass(frozen=True)
class Affine:
    """f(x) = a*x + b; a test fixture with known slope."""

    a: float
    b: float = 0.0
    name = "affine"
    bounds = None

    def __call__(self, x):
        return self.a * x + self.b

    def check_start(self, x0):
        if not math.isfinite(x0):
            raise DomainError("affine start must be finite")


MAPS = {"babylonian": Babylonian, "logistic": Logistic, "tan": Tan, "affine": Affine}


def map_params(fmap) -> dict:
    return {"map": fmap.name, **asdict(fmap)}


@dataclass
class IterationRun:
    map: object
    x0: float
    steps: int
    orbit: Orbit
    termination: str
    stopped_at: int | None = None  # index of the iterate that could not be produced

    def summary(self) -> dict:
        x = self.orbit.samples
        finite = x[np.isfinite(x)]
        return {**map_params(self.map), "x0": self.x0, "steps": self.steps,
                "samples": int(x.size), "termination": self.termination,
                "stopped_at": self.stopped_at,
                "max_abs": float(np.max(np.abs(finite))) if finite.size else None}


def iterate_map(fmap, x0: float, steps: int) -> IterationRun:
    """Iterate in float64; stops early on a singularity or a non-finite value."""
    fmap.check_start(x0)
    if steps < 0:
        raise ValueError("steps must be >= 0")
    f = fmap.__call__
    out = [float(x0)]
    x = float(x0)
    termination, stopped = COMPLETED, None
    isfinite = math.isfinite
    for n in range(1, steps + 1):
        try:
            x = f(x)
        except ZeroDivisionError:
            termination, stopped = SINGULARITY, n
            break
        except OverflowError:
            termination, stopped = OVERFLOWED, n
            break
        if not isfinite(x):
            termination, stopped = OVERFLOWED, n
            break
        out.append(x)
    orbit = Orbit(np.array(out), precision="float64", bounds=fmap.bounds)
    return IterationRun(fmap, x0, steps, orbit, termination, stopped)


def iterate_exact(S: Fraction, x0: Fraction, steps: int, max_denominator_bits: int = 4096) -> list[Fraction]:
    """Exact rational Babylonian iteration; fails once a denominator outgrows the cap."""
    S, x = Fraction(S), Fraction(x0)
    if x == 0:
        raise DomainError("babylonian map is undefined at x0 = 0")
    out = [x]
    for n in range(1, steps + 1):
        if x == 0:
            raise MapUndefined(f"division by zero at step {n}")
        x = (x + S / x) / 2
        if x.denominator.bit_length() > max_denominator_bits:
            raise PrecisionCapExceeded(
                f"denominator needs {x.denominator.bit_length()} bits at step {n} (cap {max_denominator_bits})")
        out.append(x)
    return out


@dataclass(frozen=True)
class ContractionEstimate:
    q: float
    verdict: str
    points: int

    def to_dict(self) -> dict:
        return {"q": self.q, "verdict": self.verdict, "points": self.points,
                "note": "sampled lower bound on the Lipschitz constant"}


def contraction_estimate(fmap, interval: tuple[float, float], samples: int = 101) -> ContractionEstimate:
    """Largest secant slope |f(x)-f(y)|/|x-y| over all pairs of a uniform grid and its midpoints."""
    lo, hi = interval
    if not lo < hi or samples < 2:
        raise ValueError("need lo < hi and samples >= 2")
    x = np.linspace(lo, hi, 2 * samples - 1)  # grid of `samples` points plus midpoints
    with np.errstate(all="ignore"):
        try:
            y = np.array([fmap(float(v)) for v in x])
        except (ZeroDivisionError, OverflowError) as exc:
            raise MapUndefined(str(exc)) from None
    if not np.all(np.isfinite(y)):
        raise MapUndefined("map is not finite on the interval")
    dx = np.abs(x[:, None] - x[None, :])
    dy = np.abs(y[:, None] - y[None, :])
    off = dx > 0
    q = float(np.max(dy[off] / dx[off]))
    return ContractionEstimate(q, CONTRACTION if q < 1 else NOT_CONTRACTION, x.size)
