"""Variance of primes in short intervals, integrated exactly.

For fixed h the function x -> psi(x + h) - psi(x) is a step function whose
breakpoints are the prime powers p^j and the shifted points p^j - h.  The
integrand (psi(x + h) - psi(x) - h)^2 is therefore constant between
consecutive breakpoints and the integral is a finite sum.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError


@dataclass(frozen=True)
class PsiFunction:
    """psi(x) = sum_{n <= x} Lambda(n) in jump form, valid for x <= ``limit``.

    ``cumulative[i]`` is psi just after ``jump_points[i]``; psi includes the
    jump at x itself.
    """

    limit: int
    jump_points: np.ndarray
    jump_sizes: np.ndarray
    cumulative: np.ndarray

    @classmethod
    def from_jumps(cls, limit, points, sizes):
        points = np.asarray(points, dtype=np.int64)
        sizes = np.asarray(sizes, dtype=np.float64)
        if points.shape != sizes.shape:
            raise DomainError("points and sizes differ in length")
        if points.size and (np.any(np.diff(points) <= 0) or points[-1] > limit or points[0] < 1):
            raise DomainError("jump points must be increasing and within [1, limit]")
        if np.any(sizes < 0):
            raise DomainError("jump sizes must be nonnegative")
        cum = _running_fsum(sizes)
        for a in (points, sizes, cum):
            a.setflags(write=False)
        return cls(int(limit), points, sizes, cum)

    def __call__(self, x):
        """psi at a point or array of points."""
        idx = np.searchsorted(self.jump_points, x, "right")
        out = np.concatenate(([0.0], self.cumulative))[idx]
        return float(out) if np.ndim(out) == 0 else out


def _running_fsum(values):
    # prefix sums with a compensated running total (Neumaier)
    out = np.empty(values.size)
    s = 0.0
    c = 0.0
    for i, x in enumerate(values.tolist()):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[i] = s + c
    return out


def build_psi(N, tables):
    """psi up to ``N`` from the von Mangoldt bases in ``tables``."""
    N = int(N)
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if N > tables.limit:
        raise CapacityError(f"N = {N} exceeds the table limit {tables.limit}")
    base = tables.von_mangoldt_base[: N + 1]
    points = np.flatnonzero(base)
    return PsiFunction.from_jumps(N, points, np.log(base[points].astype(np.float64)))


def variance_integral(psi, lower, upper, h):
    """Exact integral of (psi(x + h) - psi(x) - h)^2 over [lower, upper]."""
    lower, upper, h = float(lower), float(upper), float(h)
    if not lower < upper:
        raise DomainError("need lower < upper")
    if h <= 0:
        raise DomainError("h must be positive")
    if lower < 0:
        raise DomainError("lower must be >= 0")
    if upper + h > psi.limit:
        raise CapacityError(f"upper + h = {upper + h} exceeds the psi coverage {psi.limit}")
    p = psi.jump_points.astype(np.float64)
    inner = p[(p > lower) & (p < upper)]
    shifted = p - h
    shifted = shifted[(shifted > lower) & (shifted < upper)]
    cuts = np.unique(np.concatenate(([lower, upper], inner, shifted)))
    length = np.diff(cuts)
    mid = 0.5 * (cuts[:-1] + cuts[1:])
    # jumps in (x, x + h] for x inside each piece
    cum = np.concatenate(([0.0], psi.cumulative))
    count = cum[np.searchsorted(p, mid + h, "right")] - cum[np.searchsorted(p, mid, "right")]
    return math.fsum((count - h) ** 2 * length)


def variance_predictions(X, h):
    """(h X log(X/h), (1/2) h X log(X/h^3), (8/15) h X log(X/h^4)), lower bounds clamped at 0."""
    X, h = float(X), float(h)
    if not 0 < h < X:
        raise DomainError("need 0 < h < X")
    conjecture = h * X * math.log(X / h)
    gy = max(0.0, 0.5 * h * X * math.log(X / h**3))
    thm113 = max(0.0, 8 / 15 * h * X * math.log(X / h**4))
    return conjecture, gy, thm113
