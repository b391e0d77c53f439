import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from selberg_lab.arith_tables import (build_tables, divisor_sum_pow, divisors, factorize,
                                      prime_sieve)
from selberg_lab.errors import CapacityError, DomainError


def test_mobius_of_12_is_zero():
    assert build_tables(12).mobius[12] == 0


def test_phi_of_10():
    assert build_tables(10).euler_phi[10] == 4


def test_von_mangoldt_prime_power_vs_composite():
    vm = build_tables(8).von_mangoldt()
    assert vm[8] == math.log(2)
    assert vm[6] == 0.0


def test_tables_match_trial_division(tables_small):
    t = tables_small
    for n in range(1, 3000):
        assert t.mobius[n] == oracles.mobius(n)
        assert t.euler_phi[n] == oracles.phi(n)
        lpf = min(oracles.trial_factor(n)) if n > 1 else 0
        assert t.least_prime_factor[n] == lpf
    vm = t.von_mangoldt(3000)
    assert np.array_equal(vm[1:], [oracles.von_mangoldt(n) for n in range(1, 3001)])


def test_tables_are_read_only(tables_small):
    with pytest.raises(ValueError):
        tables_small.mobius[5] = 1


def test_mobius_identity(tables_small):
    t = tables_small
    N = t.limit
    acc = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        if t.mobius[d]:
            acc[d::d] += t.mobius[d]
    assert acc[1] == 1
    assert not acc[2:].any()


def test_phi_divisor_sum_and_primes(tables_small):
    t = tables_small
    N = t.limit
    acc = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        acc[d::d] += t.euler_phi[d]
    assert np.array_equal(acc[1:], np.arange(1, N + 1))
    p = t.primes()
    assert np.array_equal(t.euler_phi[p], p - 1)
    assert np.array_equal(p, prime_sieve(N))


def test_lambda_divisor_sum_is_log(tables_small):
    t = tables_small
    N = t.limit
    vm = t.von_mangoldt()
    acc = np.zeros(N + 1)
    for d in np.flatnonzero(vm):
        acc[d::d] += vm[d]
    n = np.arange(1, N + 1)
    assert np.allclose(acc[1:], np.log(n), rtol=1e-12, atol=1e-15)


def test_von_mangoldt_base_marks_prime_powers(tables_small):
    t = tables_small
    for n in range(2, 5000):
        f = oracles.trial_factor(n)
        assert (t.von_mangoldt_base[n] != 0) == (len(f) == 1)


def test_divisor_sum_pow_examples():
    assert divisor_sum_pow(6, -1) == 2.0
    assert divisor_sum_pow(6, 0) == 4
    assert divisor_sum_pow(1, 0.37) == 1.0
    assert divisor_sum_pow(1, -5) == 1.0


def test_divisor_sum_pow_multiplicative_exhaustive():
    N = 10**4
    for theta in (-1.0, -0.5, 0.5):
        tau = [None] + [divisor_sum_pow(n, theta) for n in range(1, N + 1)]
        for a in range(2, N // 2 + 1):
            for b in range(a + 1, N // a + 1):
                if math.gcd(a, b) == 1:
                    assert math.isclose(tau[a * b], tau[a] * tau[b], rel_tol=1e-12)


@given(st.integers(1, 10**9))
def test_factorize_round_trip(n):
    fac = factorize(n)
    assert math.prod(p**e for p, e in fac) == n
    assert all(len(oracles.trial_factor(p)) == 1 for p, _ in fac)


@given(st.integers(1, 5000))
def test_divisors_match_brute_force(n):
    assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]


def test_capacity_error(monkeypatch):
    monkeypatch.setenv("SELBERG_LAB_MEMORY_BUDGET", "1000")
    with pytest.raises(CapacityError):
        build_tables(10**4)


def test_bad_limits():
    with pytest.raises(DomainError):
        build_tables(0)
    with pytest.raises(DomainError):
        divisor_sum_pow(0, 1)
