"""Finite Dirichlet series built from the Selberg weights, and a zeta evaluator.

F_z(s) = sum_{d1, d2 <= z} rho_{d1} rho_{d2} / [d1, d2]^s is evaluated
directly and through the rearrangement

    F_z(s) = sum_{u <= z} phi(u, s) mu^2(u) u^{-2s} Gamma_z(u, s)^2,

where Gamma_z(u, s) = sum_{d <= z/u, (d,u) = 1} rho_{du} / d^s.  Both forms
are exact identities, so they agree to rounding.  Powers d^s are computed as
exp(s log d).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import bernoulli

from .arith_tables import build_tables, factorize, prime_sieve
from .errors import CapacityError, ConvergenceError, DomainError, PoleError, PrecisionError
from .reduction import map_ordered


@dataclass(frozen=True)
class ComplexPoint:
    sigma: float
    t: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise DomainError("complex point must be finite")

    @property
    def s(self):
        return complex(self.sigma, self.t)

    def conjugate(self):
        return ComplexPoint(self.sigma, -self.t)


@dataclass(frozen=True)
class SeriesEvaluation:
    s: ComplexPoint
    value: complex
    method: str
    terms_used: int


def as_point(s):
    if isinstance(s, ComplexPoint):
        return s
    s = complex(s)
    return ComplexPoint(s.real, s.imag)


def _fsum_complex(re, im):
    return complex(math.fsum(re), math.fsum(im))


def _neg_power_terms(coef, logs, s):
    """Real and imaginary parts of coef * exp(-s * logs), kept conjugate-symmetric in t."""
    mag = coef * np.exp(-s.sigma * logs)
    ang = s.t * logs
    return mag * np.cos(ang), -(mag * np.sin(ang))


def F_z(s, weights, threads=None, block=128, full=False):
    """Double sum of rho(d1) rho(d2) / lcm(d1, d2)^s over the weight support."""
    s = as_point(s)
    ds, rho = weights.support()
    logd = np.log(ds.astype(np.float64))

    def rows(lo):
        g = np.gcd.outer(ds[lo : lo + block], ds)
        log_lcm = logd[lo : lo + block, None] + logd[None, :] - np.log(g.astype(np.float64))
        re, im = _neg_power_terms(rho[lo : lo + block, None] * rho[None, :], log_lcm, s)
        return re.sum(axis=1), im.sum(axis=1)

    parts = map_ordered(rows, range(0, ds.size, block), threads)
    value = _fsum_complex([x for p in parts for x in p[0]], [x for p in parts for x in p[1]])
    if full:
        return SeriesEvaluation(s, value, "direct", int(ds.size) ** 2)
    return value


def F_z_exact(weights, s=1):
    """Exact rational F_z(s) for an integer s >= 0; needs exact-mode weights."""
    if weights.exact is None:
        raise DomainError("weights were not built in exact mode")
    s = int(s)
    if s < 0:
        raise DomainError("exact evaluation needs an integer s >= 0")
    sup = [(d, r) for d, r in enumerate(weights.exact) if r != 0]
    total = Fraction(0)
    for d1, r1 in sup:
        for d2, r2 in sup:
            lcm = d1 * d2 // math.gcd(d1, d2)
            total += r1 * r2 / Fraction(lcm) ** s
    return total


def phi_u_s(u, s):
    """phi(u, s) = prod over primes p | u of (p^s - 1), for squarefree u."""
    s = as_point(s).s
    fac = factorize(u)
    if any(e > 1 for _, e in fac):
        raise DomainError(f"u = {u} is not squarefree")
    out = complex(1.0)
    for p, _ in fac:
        out *= np.exp(s * math.log(p)) - 1.0
    return complex(out)


def _check_u(u, weights):
    u = int(u)
    if u < 1 or u > weights.z:
        raise DomainError(f"u = {u} must lie in [1, z = {weights.z}]")
    if any(e > 1 for _, e in factorize(u)):
        raise DomainError(f"u = {u} is not squarefree")
    return u


def M_polynomial(D, k, s, tables=None):
    """M_{D,k}(s) = sum_{d <= D, (d,k) = 1} mu(d) d / (phi(d) d^s)."""
    if D < 1:
        raise DomainError(f"D must be >= 1, got {D}")
    top = int(math.floor(D))
    if tables is None:
        tables = build_tables(top)
    elif tables.limit < top:
        raise CapacityError(f"D = {D} exceeds the table limit {tables.limit}")
    s = as_point(s)
    d = np.arange(1, top + 1)
    mu = tables.mobius[1 : top + 1]
    keep = (mu != 0) & (np.gcd(d, int(k)) == 1)
    d = d[keep]
    coef = mu[keep] * d / tables.euler_phi[d].astype(np.float64)
    re, im = _neg_power_terms(coef, np.log(d.astype(np.float64)), s)
    return _fsum_complex(re, im)


def gamma_z(u, s, weights, method="definition", tables=None):
    """Gamma_z(u, s), by its defining sum or expanded through M_{D,k}.

    The expanded form reads
    (u mu(u)/phi(u)) sum_{u' <= z/u, (u',u)=1} mu^2(u')/phi(u') M_{z/(u u'), u u'}(s)
    and is only valid for Selberg weights.
    """
    u = _check_u(u, weights)
    s = as_point(s)
    z = weights.z
    if method == "definition":
        d = np.arange(1, z // u + 1)
        d = d[np.gcd(d, u) == 1]
        re, im = _neg_power_terms(weights.rho[d * u], np.log(d.astype(np.float64)), s)
        return _fsum_complex(re, im)
    if method != "expanded":
        raise ValueError(f"unknown method {method!r}")
    if tables is None:
        tables = build_tables(z)
    mu, phi = tables.mobius, tables.euler_phi
    re, im = [], []
    for v in range(1, z // u + 1):
        if mu[v] == 0 or math.gcd(v, u) != 1:
            continue
        m = M_polynomial(z // (u * v), u * v, s, tables) / float(phi[v])
        re.append(m.real)
        im.append(m.imag)
    return u * int(mu[u]) / float(phi[u]) * _fsum_complex(re, im)


def hooley_decomposition(s, weights, tables=None):
    """Right-hand side sum_u phi(u,s) mu^2(u) u^{-2s} Gamma_z(u,s)^2."""
    if weights.kind != "selberg":
        raise DomainError("the decomposition is stated for Selberg weights")
    s = as_point(s)
    z = weights.z
    tables = build_tables(z) if tables is None else tables
    re, im = [], []
    for u in np.flatnonzero(tables.mobius[1 : z + 1]) + 1:
        u = int(u)
        term = phi_u_s(u, s) * np.exp(-2.0 * s.s * math.log(u)) * gamma_z(u, s, weights) ** 2
        re.append(term.real)
        im.append(term.imag)
    return _fsum_complex(re, im)


def zeta_eval(s, tol=1e-12, full=False):
    """zeta(s) for Re s > 0 by Euler-Maclaurin summation with a certified remainder.

    After the B_{2m} term the remainder is at most |s + 2m + 1| / (sigma + 2m + 1)
    times the first omitted term.
    """
    p = as_point(s)
    s = p.s
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if p.sigma <= 0:
        raise PrecisionError("zeta_eval supports Re s > 0 only")
    if tol < 1e-15:
        raise PrecisionError(f"tolerance {tol} is below double-precision reach")
    B = bernoulli(122)
    N = max(10, int(abs(p.t) / 4) + 10)
    for _ in range(12):
        logN = math.log(N)
        Npow = np.exp(-s * logN)
        tail = [np.exp((1 - s) * logN) / (s - 1), Npow / 2]
        rising = s  # s (s+1) ... (s + 2j - 2)
        fact = 2.0  # (2j)!
        for j in range(1, 61):
            term = B[2 * j] / fact * rising * Npow * (1.0 / N) ** (2 * j - 1)
            tail.append(term)
            rising_next = rising * (s + 2 * j - 1) * (s + 2 * j)
            fact_next = fact * (2 * j + 1) * (2 * j + 2)
            nxt = B[2 * j + 2] / fact_next * rising_next * Npow * (1.0 / N) ** (2 * j + 1)
            bound = abs(nxt) * abs(s + 2 * j + 1) / (p.sigma + 2 * j + 1)
            if bound < tol / 4:
                n = np.arange(1, N, dtype=np.float64)
                re, im = _neg_power_terms(np.ones_like(n), np.log(n), p)
                value = _fsum_complex(np.concatenate((re, [x.real for x in tail])),
                                      np.concatenate((im, [x.imag for x in tail])))
                if full:
                    return SeriesEvaluation(p, value, "direct", int(N - 1 + j))
                return value
            rising, fact = rising_next, fact_next
        N *= 2
    raise PrecisionError(f"could not reach tolerance {tol} at s = {s}")


def H_factor(k, w):
    """prod_{p | k} (1 - (1 - 1/p)^{-1} p^{-w})^{-1}: restores coprimality to k in G_k."""
    w = as_point(w).s
    out = complex(1.0)
    for p, _ in factorize(k):
        out /= 1.0 - np.exp(-w * math.log(p)) * p / (p - 1.0)
    return complex(out)


def B_product(w, P):
    """Euler product prod_{p <= P} (1 - p^{-w} / ((p - 1)(1 - p^{-w})))."""
    w = as_point(w).s
    p = prime_sieve(P).astype(np.float64)
    x = np.exp(-w * np.log(p))
    logs = np.log(1.0 - x / ((p - 1.0) * (1.0 - x)))
    return complex(np.exp(complex(math.fsum(logs.real), math.fsum(logs.imag))))


def G_factorization_check(k, w, P, D, tables=None):
    """Partial sum of G_k(w) to D against H_k(w) B_P(w) / zeta(w).

    Returns ``(lhs, rhs)``; they agree up to the truncation errors in D and P.
    """
    w = as_point(w)
    if w.sigma <= 1:
        raise ConvergenceError("G_k(w) converges absolutely only for Re w > 1")
    lhs = M_polynomial(D, k, w, tables)
    rhs = H_factor(k, w) * B_product(w, P) / zeta_eval(w)
    return lhs, rhs


def F_z_growth_scan(weights, sigma, t_grid, threads=None):
    """Rows (t, |F_z(sigma + it)|, z^(1 - sigma)) for inspecting growth in t."""
    if not 0.5 < sigma < 1:
        raise DomainError(f"sigma must lie in (1/2, 1), got {sigma}")
    env = float(weights.z) ** (1.0 - sigma)
    return [(float(t), abs(F_z(ComplexPoint(sigma, t), weights, threads)), env) for t in t_grid]
