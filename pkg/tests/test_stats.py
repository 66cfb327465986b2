import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dtlab.arith import prime_pi
from dtlab.modforms import Interval, sato_tate_measure, zero_coefficient_census
from dtlab.stats import (
    CLASSES,
    classify_factorization,
    coefficient_growth_exponent,
    condition_diagnostics,
    decompose_divisor_sum,
    default_beta,
    density_report,
    divisor_moment,
    factor_coefficients,
    h_model,
    pi_x_delta_I,
    sato_tate_census,
)

FULL = Interval.full()
angle = st.floats(0, math.pi, allow_nan=False)


def test_moment_against_sympy_oracle(tau_angles, tau_factors):
    rep = divisor_moment(tau_angles, tau_factors, FULL, 1, [1000])
    divs = [sympy.divisor_count(abs(a)) for a in tau_angles.a_p[:168]]
    row = rep.rows[0]
    assert row.count == 168
    assert row.numerator == sum(divs)
    assert row.moment == pytest.approx(sum(divs) / 168)
    assert row.ratio == pytest.approx(row.moment / math.log(1000))
    assert rep.failures == 0


def test_moment_edge_cases(tau_angles, tau_factors):
    rep = divisor_moment(tau_angles, tau_factors, Interval(1.0, 1.0), 1, [1000])
    assert rep.rows[0].count == 0 and rep.rows[0].moment is None
    rep = divisor_moment(tau_angles, tau_factors, FULL, 0, [100, 1000])
    assert [row.moment for row in rep.rows] == [1.0, 1.0]
    with pytest.raises(ValueError):
        divisor_moment(tau_angles, tau_factors, FULL, 1, [1000, 100])
    with pytest.raises(ValueError):
        divisor_moment(tau_angles, tau_factors, FULL, 1, [10**6])
    with pytest.raises(ValueError):
        divisor_moment(tau_angles, tau_factors, FULL, -1, [100])


@settings(max_examples=40, deadline=None)
@given(angle, angle, angle, st.sampled_from([300, 3000, 10_000]), st.integers(0, 2))
def test_counts_and_numerators_additive(tau_angles, tau_factors, a, b, c, x, r):
    lo, mid, hi = sorted((a, b, c))
    whole = divisor_moment(tau_angles, tau_factors, Interval(lo, hi), r, [x]).rows[0]
    left = divisor_moment(tau_angles, tau_factors, Interval(lo, mid), r, [x]).rows[0]
    right = divisor_moment(tau_angles, tau_factors, Interval(mid, hi), r, [x]).rows[0]
    # closed endpoints: an angle sitting exactly on mid is counted on both sides
    stop = tau_angles.upto(x)
    on_mid = [j for j in range(stop) if tau_angles.theta[j] == mid]
    dup_num = sum(math.prod(e + 1 for _, e in tau_factors.factorizations[j]) ** r for j in on_mid)
    assert whole.count == left.count + right.count - len(on_mid)
    assert whole.numerator == left.numerator + right.numerator - dup_num


def test_pi_x_delta_examples(tau_angles, sieve):
    assert pi_x_delta_I(tau_angles, 2, FULL, 100) == 25
    assert pi_x_delta_I(tau_angles, 5, Interval(0, 0), 10_000) == 0
    with pytest.raises(ValueError):
        pi_x_delta_I(tau_angles, 0, FULL, 100)
    for x in (10, 100, 1000, 10_000):
        assert pi_x_delta_I(tau_angles, 1, FULL, x) + zero_coefficient_census(tau_angles, x) == prime_pi(sieve, x)


def test_pi_x_delta_matches_direct_scan(tau_angles):
    lo, hi = math.pi / 3, 2 * math.pi / 3
    for delta in (3, 4, 11, 23):
        direct = sum(
            1
            for p, a, _, th in tau_angles.records
            if p <= 5000 and a != 0 and a % delta == 0 and lo <= th <= hi
        )
        assert pi_x_delta_I(tau_angles, delta, Interval(lo, hi), 5000) == direct


def test_h_model_examples(sieve):
    exc = frozenset({2, 3, 5, 7, 23, 691})
    assert h_model(11, exc, sieve) == pytest.approx(11 / 120)
    assert h_model(121, exc, sieve) == pytest.approx(1 / 120)
    assert h_model(11 * 13, exc, sieve) == pytest.approx(11 / 120 * 13 / 168)
    assert h_model(1, exc, sieve) == 1.0
    assert h_model(691, exc, sieve) is None
    assert h_model(22, exc, sieve) is None


def test_multiplicative_density_consistency(tau_angles, sieve):
    exc = tau_angles.spec.exceptional_primes
    n = tau_angles.upto(10_000)
    model = h_model(11, exc, sieve) * h_model(13, exc, sieve)
    emp = pi_x_delta_I(tau_angles, 143, FULL, 10_000) / n
    sd = math.sqrt(model * (1 - model) / n)
    assert abs(emp - model) <= 4 * sd


def test_density_report_model_column(tau_angles, sieve):
    rep = density_report(tau_angles, 11, FULL, [1000, 10_000], sieve)
    assert [row.model for row in rep.rows] == [pytest.approx(11 / 120)] * 2
    assert rep.rows[1].prime_count == 1229
    rep = density_report(tau_angles, 11, Interval(math.pi / 3, 2 * math.pi / 3), [10_000], sieve)
    assert rep.rows[0].model == pytest.approx(11 / 120 * (1 / 3 + math.sqrt(3) / (2 * math.pi)))
    assert density_report(tau_angles, 691, FULL, [10_000], sieve).rows[0].model is None


def test_condition_diagnostics(tau_angles):
    size, rows = condition_diagnostics(tau_angles, FULL, 10_000, 30)
    assert size == 1229
    assert rows[0].delta == 1 and rows[0].delta_ratio == 1.0 and rows[0].phi_ratio == 1.0
    assert rows[0].in_window and not rows[1].in_window
    for row in rows:
        assert row.phi_ratio <= row.delta_ratio + 1e-15


def test_growth_exponent_below_ramanujan(tau_angles):
    beta = coefficient_growth_exponent(tau_angles, 10_000)
    assert 5.0 < beta <= 5.5 + math.log(2) / math.log(10_000)


def test_sato_tate_census(tau_angles):
    rows = sato_tate_census(tau_angles, FULL, [100, 1000, 10_000])
    assert [row.frequency for row in rows] == [1.0, 1.0, 1.0]
    rows = sato_tate_census(tau_angles, Interval(math.pi / 4, 3 * math.pi / 4), [10_000])
    assert rows[0].mass == pytest.approx(0.5 + 1 / math.pi)
    assert abs(rows[0].deviation) < 0.05
    assert rows[0].count == int(np.sum((tau_angles.theta >= math.pi / 4) & (tau_angles.theta <= 3 * math.pi / 4)))


def test_classify_examples():
    x, c, beta = 10_000.0, 0.5, default_beta(12)
    assert classify_factorization([(10_007, 1)], x, c, beta) == ("sigma1", None)
    assert classify_factorization([], x, c, beta) == ("sigma1", None)
    assert classify_factorization([(2, 3), (3, 1)], x, c, beta) == ("S1", None)
    # many small factors: j large but J - j still large, so the s split applies
    fact = [(2, 6), (10_007, 30)]
    cls, s = classify_factorization(fact, x, c, beta)
    assert cls in ("S3", "S4")
    assert 2**s < x <= 2 ** (s + 1)
    assert cls == ("S3" if s < math.log(x) / (2 * math.log(math.log(x))) else "S4")


def test_decomposition_partitions_divisor_sum(tau_angles, tau_factors):
    for x, r in ((1000, 1), (10_000, 1), (10_000, 2)):
        rep = decompose_divisor_sum(tau_angles, tau_factors, x, r, 0.5)
        moment = divisor_moment(tau_angles, tau_factors, FULL, r, [x]).rows[0]
        assert set(rep.counts) == set(CLASSES)
        assert rep.total == moment.numerator
        assert sum(rep.counts.values()) == moment.count == len(rep.classification)
        assert rep.failures == 0
    with pytest.raises(ValueError):
        decompose_divisor_sum(tau_angles, tau_factors, 100, 1, 1.5)


def test_decomposition_total_independent_of_c(tau_angles, tau_factors):
    numer = divisor_moment(tau_angles, tau_factors, FULL, 1, [10_000]).rows[0].numerator
    seen = set()
    for c in (0.05, 0.1, 0.5, 0.9):
        rep = decompose_divisor_sum(tau_angles, tau_factors, 10_000, 1, c)
        assert rep.total == numer
        seen |= {cls for cls, n in rep.counts.items() if n}
    # x^0.05 < 2 leaves every coefficient with j = 0
    assert seen == {"sigma1", "S1"}


def test_parallel_factoring_matches_serial(tau_angles, factorizer):
    serial = factor_coefficients(tau_angles, factorizer, x=600)
    parallel = factor_coefficients(tau_angles, factorizer, x=600, workers=2)
    assert parallel.factorizations == serial.factorizations
    assert parallel.failures == serial.failures == []
