import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tmchaos.maps import (COMPLETED, CONTRACTION, NOT_CONTRACTION, OVERFLOWED, SINGULARITY, Affine, Babylonian,
                          DomainError, Logistic, MapUndefined, PrecisionCapExceeded, Tan, contraction_estimate,
                          iterate_exact, iterate_map)
from tmchaos.orbits import CONVERGENT, Orbit, classify_orbit, extract_cauchy_subsequences, sensitivity_exponent


def two_cycle(r):
    # period-2 points solve r^2 x^2 - r(r+1) x + (r+1) = 0
    a, b, c = r * r, -r * (r + 1), r + 1
    disc = math.sqrt(b * b - 4 * a * c)
    return sorted([(-b - disc) / (2 * a), (-b + disc) / (2 * a)])


def test_babylonian_first_steps():
    x = iterate_map(Babylonian(2.0), 1.0, 2).orbit.samples
    assert x[1] == 1.5
    assert x[2] == pytest.approx(17 / 12, abs=1e-15)
    assert iterate_exact(Fraction(2), Fraction(1), 2) == [1, Fraction(3, 2), Fraction(17, 12)]


def test_logistic_fixed_point_and_tan_zero():
    assert np.all(iterate_map(Logistic(2.0), 0.5, 100).orbit.samples == 0.5)
    assert np.all(iterate_map(Tan(), 0.0, 100).orbit.samples == 0.0)


def test_orbit_length_and_start():
    run = iterate_map(Logistic(4.0), 0.3, 1000)
    assert len(run.orbit) == 1001 and run.termination == COMPLETED
    assert run.orbit.samples[0] == 0.3
    assert run.orbit.bounds == (0.0, 1.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        Logistic(4.5)
    with pytest.raises(DomainError):
        iterate_map(Logistic(3.0), 1.0, 10)
    with pytest.raises(DomainError):
        iterate_map(Babylonian(2.0), 0.0, 10)
    with pytest.raises(DomainError):
        iterate_exact(Fraction(2), Fraction(0), 3)


def test_singularity_and_overflow_stop_early():
    # with S = -1 the start 1 maps to 0 and the next step divides by zero
    run = iterate_map(Babylonian(-1.0), 1.0, 10)
    assert run.termination == SINGULARITY and run.stopped_at == 2
    assert len(run.orbit) == 2 <= run.steps + 1
    run = iterate_map(Affine(1e200), 1e200, 10)
    assert run.termination == OVERFLOWED and run.stopped_at == 1


def test_exact_mode_hits_denominator_cap():
    with pytest.raises(PrecisionCapExceeded):
        iterate_exact(Fraction(2), Fraction(1), 20, max_denominator_bits=256)
    assert len(iterate_exact(Fraction(2), Fraction(1), 6)) == 7


def test_exact_and_float_agree():
    exact = iterate_exact(Fraction(2), Fraction(1), 8)
    floats = iterate_map(Babylonian(2.0), 1.0, 8).orbit.samples
    assert np.allclose([float(v) for v in exact], floats, rtol=0, atol=1e-15)


def test_contraction_examples():
    est = contraction_estimate(Affine(0.5), (0.0, 1.0))
    assert est.q == pytest.approx(0.5) and est.verdict == CONTRACTION
    est = contraction_estimate(Babylonian(2.0), (1.4, 1.43))
    # |f'(x)| = |1 - 2/x^2| / 2 peaks at the right end
    assert est.q < 0.02 and est.verdict == CONTRACTION
    assert est.q <= abs(1 - 2 / 1.43 ** 2) / 2 + 1e-12
    est = contraction_estimate(Logistic(4.0), (0.01, 0.99))
    assert est.q > 1 and est.verdict == NOT_CONTRACTION
    assert est.q <= 3.92 + 1e-9


def test_contraction_on_singular_interval():
    with pytest.raises(MapUndefined):
        contraction_estimate(Babylonian(2.0), (-1.0, 1.0))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(-2, 2))
def test_affine_contraction_constant(a, b):
    est = contraction_estimate(Affine(a, b), (-1.0, 1.0), samples=21)
    assert est.q == pytest.approx(a, rel=1e-9)


def test_babylonian_converges_to_sqrt2():
    run = iterate_map(Babylonian(2.0), 1.0, 8)
    x = run.orbit.samples
    assert np.ptp(x[-3:]) < 1e-12
    assert x[-1] == pytest.approx(math.sqrt(2), abs=1e-15)
    long = iterate_map(Babylonian(2.0), 1.0, 100)
    assert classify_orbit(long.orbit).label == CONVERGENT


def test_babylonian_minus_one_never_converges():
    run = iterate_map(Babylonian(-1.0), 0.5, 10_000)
    assert run.termination == COMPLETED
    for n in range(8, 10_002, 500):
        prefix = Orbit(run.orbit.samples[:n])
        assert classify_orbit(prefix).label != CONVERGENT
    assert sensitivity_exponent(Babylonian(-1.0), 0.5, 1e-9, 10_000) > 0


def test_logistic_two_cycle():
    run = iterate_map(Logistic(3.2), 0.3, 10_000)
    d = extract_cauchy_subsequences(run.orbit)
    assert d.k == 2
    assert np.all(np.abs(d.centroids - two_cycle(3.2)) < 1e-6)
    assert two_cycle(3.2)[0] == pytest.approx(0.51304, abs=1e-5)


def test_tan_summary_reports_excursion():
    run = iterate_map(Tan(), 1.0, 10_000)
    s = run.summary()
    assert s["map"] == "tan" and s["samples"] == len(run.orbit)
    assert s["max_abs"] >= 1.0
