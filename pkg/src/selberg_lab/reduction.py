"""Deterministic, compensated reductions.

All long accumulations in the package go through here.  Work is cut into
chunks whose boundaries depend only on the input length, each chunk is
summed with Neumaier compensation, and the chunk partials are combined with
``math.fsum`` (correctly rounded, hence order independent).  The result is
therefore bit-identical for any thread count.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numba
import numpy as np

THREADS_ENV = "SELBERG_LAB_THREADS"
CHUNK = 1 << 16


def resolve_threads(threads=None):
    """Explicit argument wins, then the environment variable, then 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else 1
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def map_ordered(fn, items, threads=None):
    """``[fn(x) for x in items]``, optionally on a thread pool; order preserved."""
    items = list(items)
    threads = resolve_threads(threads)
    if threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def chunk_bounds(n, chunk=CHUNK):
    """Half-open index ranges covering ``range(n)`` in fixed-size chunks."""
    return [(a, min(a + chunk, n)) for a in range(0, n, chunk)]


@numba.njit(cache=True, nogil=True)
def _neumaier(a, lo, hi):
    s = 0.0
    c = 0.0
    for i in range(lo, hi):
        x = a[i]
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


@numba.njit(cache=True, nogil=True)
def _neumaier_prod(a, b, lo, hi):
    s = 0.0
    c = 0.0
    for i in range(lo, hi):
        x = a[i] * b[i]
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


def compensated_sum(values, threads=None):
    """Sum a 1-D float array deterministically."""
    a = np.ascontiguousarray(values, dtype=np.float64)
    parts = map_ordered(lambda r: _neumaier(a, r[0], r[1]), chunk_bounds(a.size), threads)
    return math.fsum(parts)


def compensated_dot(x, y, threads=None):
    """``sum(x[i] * y[i])`` with the same guarantees as :func:`compensated_sum`."""
    a = np.ascontiguousarray(x, dtype=np.float64)
    b = np.ascontiguousarray(y, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    parts = map_ordered(lambda r: _neumaier_prod(a, b, r[0], r[1]), chunk_bounds(a.size), threads)
    return math.fsum(parts)
