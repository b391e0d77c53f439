"""Correlation sums of lambda_z with itself and with Lambda, their predicted
main terms, and the singular series.

Error bounds attached to reports are the claimed O-terms evaluated with all
implied constants set to 1.  They describe the shape of the error only and
are never used as pass/fail thresholds.
"""

import math
from dataclasses import astuple, dataclass
from functools import lru_cache

import numpy as np

from .arith_tables import build_tables, divisors, factorize, prime_sieve
from .errors import CapacityError, DomainError
from .reduction import compensated_dot
from .sieve_core import compute_L, lambda_batch

DEFAULT_EPS = 0.01
DEFAULT_PRIME_BOUND = 10**6

REPORT_COLUMNS = ("X", "z", "k", "empirical_sum", "predicted_main", "abs_error",
                  "relative_error", "claimed_error_bound")


@dataclass(frozen=True)
class CorrelationReport:
    X: int
    z: int
    k: int
    empirical_sum: float
    predicted_main: float
    abs_error: float
    relative_error: float
    claimed_error_bound: float

    @classmethod
    def build(cls, X, z, k, empirical, predicted, bound):
        err = abs(empirical - predicted)
        return cls(int(X), int(z), int(k), float(empirical), float(predicted), err,
                   err / max(abs(predicted), 1.0), float(bound))

    def as_row(self):
        return dict(zip(REPORT_COLUMNS, astuple(self)))


@dataclass(frozen=True)
class SingularSeriesValue:
    """Truncated singular series; the true value lies in ``[value - tail_bound, value]``."""

    k: int
    value: float
    truncation_prime_bound: int
    tail_bound: float


def interval_bounds(X, k):
    """(X1, X2) = (max(0, -k), min(X, X - k)); sums run over X1 < n <= X2."""
    X, k = int(X), int(k)
    if k == 0:
        raise DomainError("k must be nonzero")
    if abs(k) > X:
        raise DomainError(f"k exceeds X (|k| = {abs(k)}, X = {X})")
    return max(0, -k), min(X, X - k)


@lru_cache(maxsize=8)
def _log_twin_product(P):
    # log of prod_{2 < p <= P} (1 - 1/(p-1)^2)
    p = prime_sieve(P)[1:].astype(np.float64)
    return math.fsum(np.log1p(-1.0 / (p - 1.0) ** 2))


def singular_series(k, P=DEFAULT_PRIME_BOUND):
    """Hardy-Littlewood singular series S(k), Euler product truncated at ``P``.

    The neglected factor prod_{p > P} (1 - 1/(p-1)^2) lies in
    ``[exp(-2/(P log P)), 1]``, which gives ``tail_bound``.
    """
    k, P = int(k), int(P)
    if k == 0:
        raise DomainError("k must be nonzero")
    if P < 3:
        raise DomainError(f"prime bound must be >= 3, got {P}")
    if k % 2:
        return SingularSeriesValue(k, 0.0, P, 0.0)
    correction = 1.0
    for p in factorize(k):
        p = p[0]
        if p > 2:
            correction *= (p - 1) / (p - 2)
    value = 2.0 * math.exp(_log_twin_product(P)) * correction
    tail_log = 2.0 / (P * math.log(P))
    return SingularSeriesValue(k, value, P, -math.expm1(-tail_log) * value)


def _pair_sum(a, b, X, k, threads=None):
    x1, x2 = interval_bounds(X, k)
    return compensated_dot(a[x1 + 1 : x2 + 1], b[x1 + 1 + k : x2 + 1 + k], threads)


def offdiagonal_bound(X, z, k, eps=DEFAULT_EPS):
    k = abs(int(k))
    phik = float(np.prod([(p - 1) * p ** (e - 1) for p, e in factorize(k)]))
    first = k * len(divisors(k)) * X / (phik * z)
    return first + min(z * z, X ** (0.75 + eps) * z ** (15 / 32))


def diagonal_sum(series, eps=DEFAULT_EPS, threads=None):
    """sum_{n <= X} lambda(n)^2 against the main term X L(z)."""
    v = series.values[1:]
    X, z = series.X, series.z
    emp = compensated_dot(v, v, threads)
    bound = min(z * z, X ** (0.5 + eps) * z**0.5)
    return CorrelationReport.build(X, z, 0, emp, X * compute_L(z), bound)


def offdiagonal_sum(series, k, P=DEFAULT_PRIME_BOUND, eps=DEFAULT_EPS, threads=None):
    """sum_{X1 < n <= X2} lambda(n) lambda(n+k) against S(k)(X - |k|)."""
    X, z, k = series.X, series.z, int(k)
    emp = _pair_sum(series.values, series.values, X, k, threads)
    pred = singular_series(k, P).value * (X - abs(k))
    return CorrelationReport.build(X, z, k, emp, pred, offdiagonal_bound(X, z, k, eps))


def generalized_offdiagonal(weights_a, weights_b, X, k, eps=DEFAULT_EPS, threads=None):
    """Correlation of two arbitrary weight sequences against the exact gcd main term."""
    interval_bounds(X, k)
    la = lambda_batch(X, weights_a, threads)
    lb = la if weights_b is weights_a else lambda_batch(X, weights_b, threads)
    emp = _pair_sum(la.values, lb.values, X, int(k), threads)
    pred = (X - abs(int(k))) * gcd_main_term(weights_a, k, other=weights_b)
    z = max(weights_a.z, weights_b.z)
    B = max(weights_a.sup_bound, weights_b.sup_bound)
    bound = B * B * X ** (0.75 + eps) * z ** (15 / 32)
    return CorrelationReport.build(X, z, k, emp, pred, bound)


def gcd_main_term(weights, k, other=None, method="direct"):
    """sum_{d1, d2 <= z, (d1,d2) | k} (rho(d1)/d1) (rho'(d2)/d2) (d1, d2).

    ``method="direct"`` is the O(z^2) double sum over a gcd table;
    ``method="divisor"`` groups pairs by g = (d1, d2), which must divide k,
    and removes the coprimality condition on d1/g, d2/g by Mobius inversion.
    """
    k = abs(int(k))
    if k == 0:
        raise DomainError("k must be nonzero")
    other = weights if other is None else other
    if method == "direct":
        return _gcd_direct(weights, other, k)
    if method == "divisor":
        return _gcd_divisor(weights, other, k)
    raise ValueError(f"unknown method {method!r}")


def _gcd_direct(wa, wb, k, block=256):
    da, ra = wa.support()
    db, rb = wb.support()
    a = ra / da
    b = rb / db
    parts = []
    for lo in range(0, da.size, block):
        g = np.gcd.outer(da[lo : lo + block], db)
        terms = a[lo : lo + block, None] * b[None, :] * g
        terms[k % g != 0] = 0.0
        parts.extend(terms.sum(axis=1))
    return math.fsum(parts)


def _gcd_divisor(wa, wb, k):
    z = max(wa.z, wb.z)
    mu = build_tables(z).mobius
    ra = np.zeros(z + 1)
    rb = np.zeros(z + 1)
    ra[: wa.z + 1] = wa.rho
    rb[: wb.z + 1] = wb.rho
    total = []
    for g in divisors(k):
        if g > z:
            break
        y = z // g
        inner = []
        for e in range(1, y + 1):
            if mu[e] == 0:
                continue
            m = np.arange(1, y // e + 1)
            idx = g * e * m
            sa = math.fsum(ra[idx] / (e * m))
            sb = math.fsum(rb[idx] / (e * m))
            inner.append(int(mu[e]) * sa * sb)
        total.append(math.fsum(inner) / g)
    return math.fsum(total)


def mixed_correlation(tables, weights, X, k=0, P=DEFAULT_PRIME_BOUND, eps=DEFAULT_EPS,
                      threads=None):
    """sum Lambda(n) lambda(n) (k = 0) or sum_{X1 < n <= X2} lambda(n) Lambda(n+k)."""
    X, k = int(X), int(k)
    if X < 1:
        raise DomainError(f"X must be >= 1, got {X}")
    if X > tables.limit - abs(k):
        raise CapacityError(f"X + |k| = {X + abs(k)} exceeds the table limit {tables.limit}")
    z = weights.z
    lam = lambda_batch(X, weights, threads).values
    vm = tables.von_mangoldt(X)
    nu = math.log(z) / math.log(X) if X > 1 else 1.0
    if k == 0:
        emp = compensated_dot(lam[1:], vm[1:], threads)
        pred = X * compute_L(z, tables)
        bound = X ** (nu + eps)
    else:
        emp = _pair_sum(lam, vm, X, k, threads)
        pred = singular_series(k, P).value * (X - abs(k))
        bound = X ** (max(0.5 + nu / 2, 1 - nu) + eps)
    return CorrelationReport.build(X, z, k, emp, pred, bound)


def error_exponent_fit(observations):
    """Least-squares slope of log(abs_error) against log(X).

    Returns ``-inf`` when some error is exactly zero, since no power law fits.
    """
    obs = [(float(x), float(e)) for x, e in observations]
    if len(obs) < 3:
        raise DomainError("need at least 3 observations")
    xs = np.array([x for x, _ in obs])
    es = np.array([e for _, e in obs])
    if np.any(np.diff(xs) <= 0) or xs[0] <= 0:
        raise DomainError("X values must be positive and strictly increasing")
    if np.any(es < 0):
        raise DomainError("errors must be nonnegative")
    if np.any(es == 0):
        return float("-inf")
    return float(np.polyfit(np.log(xs), np.log(es), 1)[0])

