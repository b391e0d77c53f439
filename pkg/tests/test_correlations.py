import math
from fractions import Fraction

import pytest

import oracles
from selberg_lab.correlations import (REPORT_COLUMNS, CorrelationReport, diagonal_sum,
                                      error_exponent_fit, gcd_main_term, generalized_offdiagonal,
                                      interval_bounds, mixed_correlation, offdiagonal_sum,
                                      singular_series)
from selberg_lab.errors import CapacityError, DomainError
from selberg_lab.arith_tables import build_tables
from selberg_lab.sieve_core import WeightTable, compute_rho_table, lambda_batch

TWIN = 1.32032363169373914785562422


def test_interval_bounds_examples():
    assert interval_bounds(100, 7) == (0, 93)
    assert interval_bounds(100, -7) == (7, 100)
    assert interval_bounds(5, 5) == (0, 0)
    with pytest.raises(DomainError, match="k exceeds X"):
        interval_bounds(10, 100)
    with pytest.raises(DomainError):
        interval_bounds(10, 0)


def test_report_invariants():
    r = CorrelationReport.build(10, 3, 2, 7.5, 10.0, 1.0)
    assert r.abs_error == 2.5 and r.relative_error == 0.25
    r = CorrelationReport.build(10, 3, 1, -0.5, 0.0, 1.0)
    assert r.abs_error == 0.5 and r.relative_error == 0.5
    assert tuple(r.as_row()) == REPORT_COLUMNS


def test_diagonal_examples():
    r = diagonal_sum(lambda_batch(6, compute_rho_table(3)))
    assert r.empirical_sum == 15.0 and r.predicted_main == 15.0
    r = diagonal_sum(lambda_batch(10, compute_rho_table(1)))
    assert r.empirical_sum == 10 == r.predicted_main


def test_diagonal_large(tables_big):
    r = diagonal_sum(lambda_batch(10**6, compute_rho_table(250, tables_big)))
    assert r.relative_error <= 0.05
    assert r.claimed_error_bound == min(250**2, (10**6) ** 0.51 * 250**0.5)


def test_offdiagonal_examples():
    s = lambda_batch(6, compute_rho_table(2))
    assert offdiagonal_sum(s, 2).empirical_sum == 8
    r = offdiagonal_sum(s, 1)
    assert r.predicted_main == 0 and r.empirical_sum == 0
    with pytest.raises(DomainError, match="k exceeds X"):
        offdiagonal_sum(s, 7)


def test_offdiagonal_matches_exact_rationals():
    X, z = 300, 12
    rho = [oracles.rho_exact(z, d) if d else Fraction(0) for d in range(z + 1)]
    lam = [sum((rho[d] for d in range(1, z + 1) if n % d == 0), Fraction(0)) if n else 0
           for n in range(X + 1)]
    s = lambda_batch(X, compute_rho_table(z))
    for k in (1, 2, 6, -4, 299):
        x1, x2 = max(0, -k), min(X, X - k)
        exact = sum((lam[n] * lam[n + k] for n in range(x1 + 1, x2 + 1)), Fraction(0))
        assert math.isclose(offdiagonal_sum(s, k).empirical_sum, float(exact),
                            rel_tol=1e-12, abs_tol=1e-9)


def test_negative_shift_matches_positive(tables_small):
    s = lambda_batch(20000, compute_rho_table(30, tables_small))
    for k in (2, 5, 12):
        assert offdiagonal_sum(s, -k).empirical_sum == offdiagonal_sum(s, k).empirical_sum


def test_parity_odd_shifts(tables_small):
    X = 10**5
    s = lambda_batch(X, compute_rho_table(50, tables_small))
    for k in (1, 3, 5):
        assert abs(offdiagonal_sum(s, k).empirical_sum) <= 0.1 * X


def test_generalized_examples():
    w = compute_rho_table(2)
    g = generalized_offdiagonal(w, w, 6, 2)
    o = offdiagonal_sum(lambda_batch(6, w), 2)
    assert g.empirical_sum == o.empirical_sum
    unit = WeightTable.custom({1: 1.0})
    r = generalized_offdiagonal(unit, unit, 50, -3)
    assert r.empirical_sum == 47 and r.predicted_main == 47
    odd = WeightTable.custom({1: 1.0, 2: -1.0})
    r = generalized_offdiagonal(odd, odd, 10, 2)
    assert r.empirical_sum == 4 and r.predicted_main == 4


def test_generalized_specializes_bit_for_bit(tables_small):
    w = compute_rho_table(60, tables_small)
    s = lambda_batch(20000, w)
    for k in (2, 7, -6):
        assert generalized_offdiagonal(w, w, 20000, k).empirical_sum == \
            offdiagonal_sum(s, k).empirical_sum


def test_gcd_main_term_examples():
    assert gcd_main_term(compute_rho_table(2), 2) == 2.0
    for k in (1, 5, -8):
        assert gcd_main_term(compute_rho_table(1), k) == 1.0
    assert abs(gcd_main_term(compute_rho_table(100), 2) - TWIN) <= 0.2


def _gcd_brute(ra, rb, k):
    total = Fraction(0)
    for d1, a in enumerate(ra):
        for d2, b in enumerate(rb):
            if d1 and d2 and a and b and k % math.gcd(d1, d2) == 0:
                total += Fraction(a) / d1 * Fraction(b) / d2 * math.gcd(d1, d2)
    return total


def test_gcd_main_term_against_rationals():
    wa = compute_rho_table(25, exact=True)
    wb = WeightTable.custom({1: 0.5, 2: -0.25, 6: 1.0, 9: 3.0, 20: -2.0})
    for k in (1, 2, 12, 18, 60):
        exact = _gcd_brute(wa.exact, wa.exact, k)
        for method in ("direct", "divisor"):
            assert math.isclose(gcd_main_term(wa, k, method=method), float(exact),
                                rel_tol=1e-13, abs_tol=1e-12)
        mixed = float(_gcd_brute(wa.rho.tolist(), wb.rho.tolist(), k))
        for method in ("direct", "divisor"):
            assert math.isclose(gcd_main_term(wa, k, wb, method), mixed, rel_tol=1e-13, abs_tol=1e-12)


@pytest.mark.parametrize("z", [10, 77, 500])
def test_gcd_paths_agree(z, tables_small):
    w = compute_rho_table(z, tables_small)
    for k in (1, 2, 6, 30, 210, 997, 1000, -12):
        a = gcd_main_term(w, k, method="direct")
        b = gcd_main_term(w, k, method="divisor")
        assert abs(a - b) <= 1e-10 * max(abs(a), 1e-300)


def test_gcd_bad_input():
    with pytest.raises(DomainError):
        gcd_main_term(compute_rho_table(3), 0)
    with pytest.raises(ValueError):
        gcd_main_term(compute_rho_table(3), 2, method="nope")


def test_singular_series_examples():
    assert singular_series(3).value == 0
    v = singular_series(2, 10**7)
    assert v.value - v.tail_bound <= TWIN <= v.value
    assert abs(v.value - 1.3203236) < 1e-7
    assert singular_series(6).value / singular_series(2).value == 2


def test_singular_series_kernel_relations():
    S = lambda k: singular_series(k).value  # noqa: E731
    assert S(4) == S(2)
    assert S(12) == S(6)
    assert S(-10) == S(10)
    assert S(30) == pytest.approx(S(2) * 2 * 4 / 3, rel=1e-15)
    assert singular_series(2, 10**4).tail_bound > singular_series(2, 10**5).tail_bound


def test_singular_series_errors():
    with pytest.raises(DomainError):
        singular_series(0)
    with pytest.raises(DomainError):
        singular_series(2, 2)


def test_mixed_examples():
    t = build_tables(100)
    r = mixed_correlation(t, compute_rho_table(2, t), 6, 0)
    assert r.empirical_sum == pytest.approx(2 * math.log(3) + 2 * math.log(5), rel=1e-15)
    r = mixed_correlation(t, compute_rho_table(1, t), 10, 0)
    assert r.empirical_sum == pytest.approx(3 * math.log(2) + 2 * math.log(3) + math.log(5)
                                            + math.log(7), rel=1e-15)
    assert r.predicted_main == 10
    for k in (1, -3, 7):
        assert mixed_correlation(t, compute_rho_table(5, t), 50, k).predicted_main == 0
    with pytest.raises(CapacityError):
        mixed_correlation(t, compute_rho_table(5, t), 95, 10)


def test_mixed_shift_against_brute_force(tables_small):
    X, z, k = 3000, 20, 4
    w = compute_rho_table(z, tables_small)
    lam = lambda_batch(X + k, w).values
    expected = math.fsum(lam[n] * oracles.von_mangoldt(n + k) for n in range(1, X - k + 1))
    r = mixed_correlation(tables_small, w, X, k)
    assert r.empirical_sum == pytest.approx(expected, rel=1e-13)


def test_error_exponent_fit():
    assert error_exponent_fit([(10, 10), (100, 100), (1000, 1000)]) == pytest.approx(1.0)
    assert error_exponent_fit([(10, 1), (100, 1), (1000, 1)]) == pytest.approx(0.0, abs=1e-12)
    assert error_exponent_fit([(10, 1), (100, 0), (1000, 1)]) == float("-inf")
    with pytest.raises(DomainError):
        error_exponent_fit([(10, 1), (100, 1)])
    with pytest.raises(DomainError):
        error_exponent_fit([(100, 1), (10, 1), (1000, 1)])
