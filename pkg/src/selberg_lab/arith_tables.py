"""Sieve-built tables of mu, phi, least prime factor and von Mangoldt bases.

The tables are produced by a single linear (least-prime-factor driven) sieve
pass and are read-only afterwards, so they can be shared between threads.
"""

import math
import os
from dataclasses import dataclass

import numba
import numpy as np

from .errors import CapacityError, DomainError, FactorizationError

MEMORY_BUDGET_ENV = "SELBERG_LAB_MEMORY_BUDGET"
DEFAULT_MEMORY_BUDGET = 2 << 30
# int8 mobius + int64 phi + int32 lpf + int32 Lambda base
BYTES_PER_ENTRY = 17


def memory_budget():
    env = os.environ.get(MEMORY_BUDGET_ENV)
    return int(env) if env else DEFAULT_MEMORY_BUDGET


def check_capacity(n, bytes_per_entry, what):
    need = (int(n) + 1) * bytes_per_entry
    if need > memory_budget():
        raise CapacityError(
            f"{what} of size {n} needs ~{need} bytes, over the budget of {memory_budget()} "
            f"(set {MEMORY_BUDGET_ENV} to raise it)"
        )


@dataclass(frozen=True)
class ArithTables:
    """Arithmetic functions for ``0 <= n <= limit`` (index 0 unused).

    ``von_mangoldt_base[n]`` is ``p`` when ``n`` is a power of the prime ``p``
    and 0 otherwise; ``least_prime_factor[1]`` is 0.
    """

    limit: int
    mobius: np.ndarray
    euler_phi: np.ndarray
    least_prime_factor: np.ndarray
    von_mangoldt_base: np.ndarray

    def von_mangoldt(self, upto=None):
        """Float array of Lambda(n) for ``n <= upto`` (default: the whole table)."""
        upto = self.limit if upto is None else int(upto)
        if upto > self.limit:
            raise CapacityError(f"Lambda requested up to {upto}, tables stop at {self.limit}")
        base = self.von_mangoldt_base[: upto + 1]
        out = np.zeros(upto + 1, dtype=np.float64)
        mask = base > 0
        out[mask] = np.log(base[mask].astype(np.float64))
        return out

    def primes(self, upto=None):
        upto = self.limit if upto is None else min(int(upto), self.limit)
        lpf = self.least_prime_factor[: upto + 1]
        n = np.arange(upto + 1)
        return n[(lpf == n) & (n >= 2)]

    def is_squarefree(self, n):
        return self.mobius[n] != 0


@numba.njit(cache=True)
def _linear_sieve(N):
    lpf = np.zeros(N + 1, dtype=np.int32)
    mu = np.zeros(N + 1, dtype=np.int8)
    phi = np.zeros(N + 1, dtype=np.int64)
    vm = np.zeros(N + 1, dtype=np.int32)
    primes = np.empty(max(16, int(1.3 * N / max(1.0, math.log(N + 1))) + 16), dtype=np.int64)
    nprimes = 0
    mu[1] = 1
    phi[1] = 1
    for i in range(2, N + 1):
        if lpf[i] == 0:
            lpf[i] = i
            mu[i] = -1
            phi[i] = i - 1
            vm[i] = i
            primes[nprimes] = i
            nprimes += 1
        else:
            p = lpf[i]
            if vm[i // p] == p:
                vm[i] = p
        li = lpf[i]
        for j in range(nprimes):
            p = primes[j]
            ip = i * p
            if p > li or ip > N:
                break
            lpf[ip] = p
            if p == li:
                mu[ip] = 0
                phi[ip] = phi[i] * p
            else:
                mu[ip] = -mu[i]
                phi[ip] = phi[i] * (p - 1)
    return lpf, mu, phi, vm


def build_tables(N):
    """Build :class:`ArithTables` up to ``N`` with one linear sieve pass."""
    N = int(N)
    if N < 1:
        raise DomainError(f"table limit must be >= 1, got {N}")
    check_capacity(N, BYTES_PER_ENTRY, "arithmetic tables")
    lpf, mu, phi, vm = _linear_sieve(N)
    for a in (lpf, mu, phi, vm):
        a.setflags(write=False)
    return ArithTables(N, mu, phi, lpf, vm)


def prime_sieve(n):
    """Primes ``<= n`` as an int64 array (plain Eratosthenes, bit array)."""
    n = int(n)
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    check_capacity(n, 1, "prime sieve")
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


TRIAL_DIVISION_LIMIT = 10**7


def factorize(n, tables=None):
    """Prime factorization of ``|n|`` as a list of ``(p, e)`` pairs, p ascending."""
    n = abs(int(n))
    if n == 0:
        raise DomainError("cannot factor 0")
    out = []
    if tables is not None and n <= tables.limit:
        lpf = tables.least_prime_factor
        while n > 1:
            p = int(lpf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    p = 2
    while p * p <= n:
        if p > TRIAL_DIVISION_LIMIT:
            raise FactorizationError(f"trial division exhausted at {p} while factoring {n}")
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n, tables=None):
    """Sorted list of the positive divisors of ``|n|``."""
    divs = [1]
    for p, e in factorize(n, tables):
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def prime_divisors(n, tables=None):
    return [p for p, _ in factorize(n, tables)]


def divisor_sum_pow(k, theta):
    """tau_theta(k) = sum of d**theta over the divisors d of k."""
    k = int(k)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if theta == 0:
        return float(len(divisors(k)))
    return math.fsum(float(d) ** theta for d in divisors(k))
