"""Finite-horizon analysis of bounded orbits.

An orbit's tail is split into clusters of approximate limit points, each
cluster gets an interval ``[min, max]`` of its members, and the cluster
labels along the orbit give a transition graph used as a mixing proxy.
Everything here works on a finite prefix, so "Cauchy" means a small tail
diameter and "aperiodic" means no exact repeat; both are heuristics.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

FINITE = "Finite"
CONVERGENT = "Convergent"
MIXTURE = "NonCauchyMixture"
UNBOUNDED = "Unbounded"
INCONCLUSIVE = "Inconclusive"
LABELS = (FINITE, CONVERGENT, MIXTURE, UNBOUNDED, INCONCLUSIVE)


class AnalysisError(ValueError):
    pass


class TooFewSamples(AnalysisError):
    pass


class NoClusterMeetsMinimum(AnalysisError):
    pass


class EmptyCentroids(AnalysisError):
    pass


class DisjointnessViolation(AnalysisError):
    def __init__(self, pair: tuple[int, int], intervals):
        i, j = pair
        super().__init__(f"intervals {i} {intervals[i]} and {j} {intervals[j]} are not disjoint")
        self.pair = pair
        self.intervals = intervals


class TrajectoryUndefined(ArithmeticError):
    pass


@dataclass
class Orbit:
    """Ordered samples plus how they were obtained.

    ``exact`` optionally holds hashable exact values (one per sample) used
    for repeat detection when the floats are only projections. A source that
    already knows whether an exact value repeats can pass ``repeat`` instead.
    """

    samples: np.ndarray
    precision: str = "float64"
    bounds: tuple[float, float] | None = None
    projection_error: float = 0.0
    terminated: bool = False
    exact: Sequence | None = None
    repeat: bool | None = None

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1:
            raise AnalysisError("orbit samples must be one-dimensional")
        if self.exact is not None and len(self.exact) != len(self.samples):
            raise AnalysisError("exact values must match samples one-to-one")

    def __len__(self):
        return len(self.samples)

    def within_bounds(self) -> bool:
        x = self.samples
        if not np.all(np.isfinite(x)):
            return False
        if self.bounds is None:
            return True
        lo, hi = self.bounds
        return bool(np.all((x >= lo) & (x <= hi)))

    def has_repeat(self) -> bool:
        if self.repeat is not None:
            return self.repeat
        if self.exact is not None:
            return len(set(self.exact)) != len(self.exact)
        return len(np.unique(self.samples)) != len(self.samples)


@dataclass(frozen=True)
class AnalysisParams:
    epsilon: float = 1e-6
    gamma: float | None = None
    m_min: int = 8
    window: int | None = None
    horizon: int | None = None
    density_eps: float | None = None

    @property
    def gap(self) -> float:
        return 10 * self.epsilon if self.gamma is None else self.gamma

    def window_for(self, n: int) -> int:
        w = max(64, n // 10) if self.window is None else self.window
        return max(1, min(n, w))

    def as_dict(self) -> dict:
        return {"epsilon": self.epsilon, "gamma": self.gap, "m_min": self.m_min,
                "window": self.window, "horizon": self.horizon, "density_eps": self.density_eps}


@dataclass
class ClusterDecomposition:
    centroids: np.ndarray
    intervals: list[tuple[float, float]]
    assignments: np.ndarray  # cluster index per tail-window sample
    window_start: int
    params: AnalysisParams
    singletons: list[int] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.centroids)

    @property
    def psi(self) -> list[tuple[float, float]]:
        """The union of the intervals, as its (disjoint) components."""
        return list(self.intervals)

    def to_dict(self) -> dict:
        return {"k": self.k, "centroids": [float(c) for c in self.centroids],
                "intervals": [[float(lo), float(hi)] for lo, hi in self.intervals],
                "window_start": self.window_start, "singletons": list(self.singletons),
                "params": self.params.as_dict()}


def assign_to_centroids(points, centroids) -> np.ndarray:
    """Index of the nearest centroid for every point; exact ties go to the lower index."""
    c = np.asarray(centroids, dtype=float)
    if c.size == 0:
        raise EmptyCentroids("no centroids to assign to")
    if np.any(np.diff(c) <= 0):
        raise AnalysisError("centroids must be strictly increasing")
    x = np.asarray(points, dtype=float)
    hi = np.clip(np.searchsorted(c, x, side="left"), 0, c.size - 1)
    lo = np.clip(hi - 1, 0, c.size - 1)
    d_lo = np.abs(x - c[lo])
    d_hi = np.abs(x - c[hi])
    out = np.where(d_lo <= d_hi, lo, hi)
    # outside the centroid range the nearest is the end centroid, whatever rounding says
    out[x <= c[0]] = 0
    out[x >= c[-1]] = c.size - 1
    return out.astype(np.int64)


def build_intervals(points, assignments, k: int | None = None) -> list[tuple[float, float]]:
    """Per-cluster ``[min, max]`` intervals, checked to be strictly ordered and disjoint."""
    x = np.asarray(points, dtype=float)
    a = np.asarray(assignments, dtype=np.int64)
    k = int(a.max()) + 1 if k is None else k
    intervals = []
    for i in range(k):
        members = x[a == i]
        if members.size == 0:
            raise AnalysisError(f"cluster {i} has no members")
        intervals.append((float(members.min()), float(members.max())))
    for i in range(k - 1):
        if not intervals[i][1] < intervals[i + 1][0]:
            raise DisjointnessViolation((i, i + 1), intervals)
    return intervals


def tail_diameter(orbit: Orbit, params: AnalysisParams = AnalysisParams()) -> float:
    n = len(orbit)
    if n == 0:
        return 0.0
    tail = orbit.samples[n - params.window_for(n):]
    return float(tail.max() - tail.min())


def extract_cauchy_subsequences(orbit: Orbit, params: AnalysisParams = AnalysisParams()) -> ClusterDecomposition:
    """Split the tail window at gaps wider than ``params.gap`` and keep clusters of
    at least ``m_min`` members as approximate limit points.
    """
    n = len(orbit)
    if n < params.m_min:
        raise TooFewSamples(f"{n} samples, need at least {params.m_min}")
    start = n - params.window_for(n)
    tail = orbit.samples[start:]
    if not np.all(np.isfinite(tail)):
        raise AnalysisError("tail window contains non-finite samples")
    ordered = np.sort(tail)
    cuts = np.nonzero(np.diff(ordered) > params.gap)[0] + 1
    groups = np.split(ordered, cuts)
    centroids = np.array([g.mean() for g in groups if g.size >= params.m_min])
    if centroids.size == 0:
        raise NoClusterMeetsMinimum(f"no gap-separated cluster has {params.m_min} members")
    assignments = assign_to_centroids(tail, centroids)
    intervals = build_intervals(tail, assignments, centroids.size)
    singletons = [i for i, (lo, hi) in enumerate(intervals) if lo == hi]
    return ClusterDecomposition(centroids, intervals, assignments, start, params, singletons)


@dataclass
class MixingReport:
    matrix: np.ndarray
    reach: np.ndarray  # shortest path length i -> j (>= 1), -1 if not within horizon
    horizon: int
    mixing: bool

    def to_dict(self) -> dict:
        return {"matrix": self.matrix.tolist(), "reach": self.reach.tolist(),
                "horizon": self.horizon, "mixing": self.mixing}


def mixing_check(orbit: Orbit, decomp: ClusterDecomposition, horizon: int | None = None) -> MixingReport:
    """Cluster-label transition graph of the tail window; mixing means every ordered
    pair of clusters is joined by a path of length 1..horizon.
    """
    k = decomp.k
    horizon = k if horizon is None else horizon
    if horizon < 1:
        raise AnalysisError("horizon must be >= 1")
    labels = assign_to_centroids(orbit.samples[decomp.window_start:], decomp.centroids)
    matrix = np.zeros((k, k), dtype=np.int64)
    np.add.at(matrix, (labels[:-1], labels[1:]), 1)
    succ = [np.nonzero(matrix[i])[0] for i in range(k)]
    reach = np.full((k, k), -1, dtype=np.int64)
    for i in range(k):
        queue = deque((j, 1) for j in succ[i])
        while queue:
            j, d = queue.popleft()
            if d > horizon or reach[i, j] != -1:
                continue
            reach[i, j] = d
            queue.extend((m, d + 1) for m in succ[j] if reach[i, m] == -1)
    return MixingReport(matrix, reach, horizon, bool(np.all(reach > 0)))


def density_check(orbit: Orbit, region, eps: float) -> bool:
    """Every grid point at spacing ``eps`` across each interval has a sample within ``eps``.

    ``region`` is a :class:`ClusterDecomposition` or a list of ``(lo, hi)`` pairs.
    """
    intervals = region.intervals if isinstance(region, ClusterDecomposition) else region
    x = np.sort(orbit.samples[np.isfinite(orbit.samples)])
    if x.size == 0:
        return False
    slack = eps * (1 + 1e-9)
    for lo, hi in intervals:
        m = int(math.floor((hi - lo) / eps + 1e-9))
        grid = np.append(lo + eps * np.arange(m + 1), hi)
        idx = np.searchsorted(x, grid)
        left = x[np.clip(idx - 1, 0, x.size - 1)]
        right = x[np.clip(idx, 0, x.size - 1)]
        if np.any(np.minimum(np.abs(grid - left), np.abs(right - grid)) > slack):
            return False
    return True


@dataclass
class ClassificationReport:
    label: str
    k: int | None
    evidence: dict
    decomposition: ClusterDecomposition | None = None
    mixing: MixingReport | None = None

    def to_dict(self) -> dict:
        return {"label": self.label, "k": self.k, "evidence": self.evidence,
                "decomposition": None if self.decomposition is None else self.decomposition.to_dict(),
                "mixing": None if self.mixing is None else self.mixing.to_dict()}


def classify_orbit(orbit: Orbit, params: AnalysisParams = AnalysisParams()) -> ClassificationReport:
    n = len(orbit)
    evidence = {"length": n, "tail_diameter": None, "cluster_count": None, "mixing": None,
                "dense": None, "aperiodic": None, "singletons": None}
    if n < params.m_min or orbit.terminated:
        evidence["terminated"] = orbit.terminated
        return ClassificationReport(FINITE, None, evidence)
    if not orbit.within_bounds():
        return ClassificationReport(UNBOUNDED, None, evidence)
    diameter = tail_diameter(orbit, params)
    evidence["tail_diameter"] = diameter
    evidence["aperiodic"] = not orbit.has_repeat()
    if diameter < params.epsilon:
        return ClassificationReport(CONVERGENT, 1, evidence)
    try:
        decomp = extract_cauchy_subsequences(orbit, params)
    except AnalysisError as exc:
        evidence["failure"] = str(exc)
        return ClassificationReport(INCONCLUSIVE, None, evidence)
    mix = mixing_check(orbit, decomp, params.horizon)
    density_eps = params.gap if params.density_eps is None else params.density_eps
    evidence.update(cluster_count=decomp.k, mixing=mix.mixing, singletons=decomp.singletons,
                    dense=density_check(orbit, decomp, density_eps))
    if decomp.k >= 2 and evidence["aperiodic"] and mix.mixing:
        return ClassificationReport(MIXTURE, decomp.k, evidence, decomp, mix)
    return ClassificationReport(INCONCLUSIVE, decomp.k, evidence, decomp, mix)


def sensitivity_exponent(f: Callable[[float], float], x0: float, delta0: float, steps: int) -> float:
    """Mean log growth rate of a ``delta0`` separation, renormalised every step."""
    if delta0 <= 0 or steps < 1:
        raise ValueError("need delta0 > 0 and steps >= 1")
    x, y = x0, x0 + delta0
    total = 0.0
    for n in range(steps):
        try:
            x, y = f(x), f(y)
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise TrajectoryUndefined(f"trajectory undefined at step {n + 1}: {exc}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise TrajectoryUndefined(f"non-finite value at step {n + 1}")
        d = abs(y - x)
        if d == 0.0:
            return -math.inf
        total += math.log(d / delta0)
        y = x + delta0 if y > x else x - delta0
    return total / steps
