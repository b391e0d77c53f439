"""Slow, independent reference implementations used only by the tests."""

import cmath
import math
from fractions import Fraction

import numpy as np


def trial_factor(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n):
    f = trial_factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


def phi(n):
    out = n
    for p in trial_factor(n):
        out = out // p * (p - 1)
    return out


def von_mangoldt(n):
    f = trial_factor(n)
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def L_exact(z):
    return sum((Fraction(1, phi(q)) for q in range(1, z + 1) if mobius(q)), Fraction(0))


def rho_exact(z, d):
    """Selberg weight straight from its definition, as a Fraction."""
    if mobius(d) == 0:
        return Fraction(0)
    inner = sum((Fraction(1, phi(q)) for q in range(1, z // d + 1)
                 if mobius(q) and math.gcd(q, d) == 1), Fraction(0))
    return Fraction(d * mobius(d), phi(d)) * inner


def F_brute(z, s, rho):
    """sum rho(d1) rho(d2) lcm^-s with Python's complex power."""
    total = 0j
    for d1 in range(1, z + 1):
        for d2 in range(1, z + 1):
            if rho[d1] and rho[d2]:
                lcm = d1 * d2 // math.gcd(d1, d2)
                total += rho[d1] * rho[d2] * lcm ** (-s)
    return total


def form_factor_brute(g, T, alpha):
    g = [x for x in g if 0 < x <= T]
    total = 0j
    for a in g:
        for b in g:
            d = a - b
            total += cmath.exp(2j * math.pi * alpha * math.log(T) / (2 * math.pi) * d) * 4 / (4 + d * d)
    return total / (T * math.log(T) / (2 * math.pi))


def primes_upto(n):
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i in range(n + 1) if flags[i]]


def prime_power_jumps(n):
    pts, sizes = [], []
    for p in primes_upto(n):
        q = p
        while q <= n:
            pts.append(q)
            sizes.append(math.log(p))
            q *= p
    order = np.argsort(pts)
    return np.array(pts)[order], np.array(sizes)[order]


def variance_riemann(points, sizes, lower, upper, h, step, chunk=1 << 20):
    """Midpoint rule for the integral of (psi(x+h) - psi(x) - h)^2 on a uniform grid."""
    cum = np.concatenate(([0.0], np.cumsum(sizes)))
    n = int(math.ceil((upper - lower) / step))
    dx = (upper - lower) / n
    total = 0.0
    for a in range(0, n, chunk):
        x = lower + (np.arange(a, min(a + chunk, n)) + 0.5) * dx
        c = cum[np.searchsorted(points, x + h, "right")] - cum[np.searchsorted(points, x, "right")]
        total += float(np.sum((c - h) ** 2)) * dx
    return total
