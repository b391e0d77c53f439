"""Selberg weights rho_{z,d}, the normalizer L(z), and the divisor sums lambda_z(n).

The sieve level ``z`` is an integer and every condition ``q <= z/d`` is read
as ``q <= z // d``.
"""

import math
import struct
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .arith_tables import build_tables, check_capacity, divisors
from .errors import CapacityError, DomainError
from .reduction import chunk_bounds, map_ordered

EXACT_Z_LIMIT = 200
SELBERG = "selberg"
CUSTOM = "custom"


@dataclass(frozen=True)
class WeightTable:
    """Weights ``rho[d]`` for ``1 <= d <= z`` (``rho[0]`` is unused and zero).

    ``sup_bound`` is ``max |rho[d]|``; for Selberg weights it equals L(z),
    attained at d = 1.  ``exact`` holds the rational weights when the table
    was built in exact mode.
    """

    z: int
    rho: np.ndarray
    sup_bound: float
    kind: str = SELBERG
    exact: tuple = None

    @classmethod
    def custom(cls, weights):
        """Arbitrary weights, from a ``{d: value}`` mapping or a sequence for d = 1, 2, ..."""
        if isinstance(weights, dict):
            if not weights:
                raise DomainError("empty weight mapping")
            if min(weights) < 1:
                raise DomainError("weights are indexed by d >= 1")
            z = max(weights)
            rho = np.zeros(z + 1)
            for d, v in weights.items():
                rho[d] = float(v)
        else:
            vals = np.asarray(weights, dtype=np.float64)
            if vals.ndim != 1 or vals.size == 0:
                raise DomainError("weights must be a non-empty 1-D sequence")
            z = vals.size
            rho = np.concatenate(([0.0], vals))
        rho.setflags(write=False)
        return cls(int(z), rho, float(np.max(np.abs(rho))), CUSTOM)

    def support(self):
        """Indices d with ``rho[d] != 0``, ascending, and their weights."""
        ds = np.flatnonzero(self.rho)
        return ds.astype(np.int64), self.rho[ds]


@dataclass(frozen=True)
class LambdaSeries:
    """``values[n] = lambda_z(n)`` for ``1 <= n <= X``; ``values[0]`` is unused."""

    X: int
    z: int
    values: np.ndarray
    kind: str = SELBERG


def _tables_for(z, tables):
    if tables is None:
        return build_tables(max(int(z), 1))
    if tables.limit < z:
        raise CapacityError(f"z = {z} exceeds the table limit {tables.limit}")
    return tables


def compute_L(z, tables=None, exact=False):
    """L(z) = sum over squarefree q <= z of 1/phi(q)."""
    z = int(z)
    if z < 1:
        raise DomainError(f"z must be >= 1, got {z}")
    t = _tables_for(z, tables)
    q = np.flatnonzero(t.mobius[1 : z + 1]) + 1
    phi = t.euler_phi[q]
    if exact:
        return sum((Fraction(1, int(f)) for f in phi), Fraction(0))
    return math.fsum(1.0 / phi)


def compute_rho_table(z, tables=None, exact=False):
    """Selberg weights rho_{z,d} = (d mu(d)/phi(d)) * sum_{q <= z/d, (q,d)=1} mu^2(q)/phi(q)."""
    z = int(z)
    if z < 1:
        raise DomainError(f"z must be >= 1, got {z}")
    if exact and z > EXACT_Z_LIMIT:
        raise CapacityError(f"exact rational weights are limited to z <= {EXACT_Z_LIMIT}")
    t = _tables_for(z, tables)
    mu = t.mobius[: z + 1]
    phi = t.euler_phi[: z + 1]
    rho = np.zeros(z + 1)
    exact_rho = [Fraction(0)] * (z + 1) if exact else None
    for d in np.flatnonzero(mu[1:]) + 1:
        d = int(d)
        q = np.arange(1, z // d + 1)
        q = q[(mu[q] != 0) & (np.gcd(q, d) == 1)]
        if exact:
            inner = sum((Fraction(1, int(f)) for f in phi[q]), Fraction(0))
            exact_rho[d] = Fraction(d * int(mu[d]), int(phi[d])) * inner
            rho[d] = float(exact_rho[d])
        else:
            rho[d] = d * int(mu[d]) / float(phi[d]) * math.fsum(1.0 / phi[q])
    rho.setflags(write=False)
    return WeightTable(z, rho, float(np.max(np.abs(rho[1:]))), SELBERG,
                       tuple(exact_rho) if exact else None)


@numba.njit(cache=True, nogil=True)
def _lambda_block(ds, vals, a, b, out):
    # ascending d for every n: same addition order as divisor enumeration
    for i in range(ds.size):
        d = ds[i]
        v = vals[i]
        m = ((a + d - 1) // d) * d
        while m < b:
            out[m] += v
            m += d


LAMBDA_BLOCK = 1 << 16


def lambda_batch(X, weights, threads=None):
    """lambda(n) = sum_{d | n, d <= z} rho[d] for all n <= X.

    One additive pass over the multiples of each supported d, cut into
    fixed blocks of n so the result does not depend on ``threads``.
    """
    X = int(X)
    if X < 1:
        raise DomainError(f"X must be >= 1, got {X}")
    check_capacity(X, 8, "lambda series")
    ds, vals = weights.support()
    out = np.zeros(X + 1)

    def run(r):
        _lambda_block(ds, vals, max(r[0], 1), r[1], out)

    map_ordered(run, chunk_bounds(X + 1, LAMBDA_BLOCK), threads)
    out.setflags(write=False)
    return LambdaSeries(X, weights.z, out, weights.kind)


def lambda_at(n, weights):
    """lambda(n) by enumerating the divisors of n; the oracle for :func:`lambda_batch`."""
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    s = 0.0
    for d in divisors(n):
        if d > weights.z:
            break
        v = float(weights.rho[d])
        if v != 0.0:
            s += v
    return s


# Binary cache: header then raw little-endian float64 values.
CACHE_MAGIC = b"SLBW"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIQQB7x")
_KINDS = {SELBERG: 0, CUSTOM: 1}


def save_cache(obj, path):
    """Write a WeightTable (X = 0 in the header) or LambdaSeries to ``path``."""
    if isinstance(obj, WeightTable):
        X, data = 0, obj.rho[1:]
    elif isinstance(obj, LambdaSeries):
        X, data = obj.X, obj.values[1:]
    else:
        raise TypeError(f"cannot cache {type(obj).__name__}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, obj.z, X, _KINDS[obj.kind]))
        fh.write(np.ascontiguousarray(data, dtype="<f8").tobytes())


def load_cache(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated cache header")
    magic, version, z, X, kind = _HEADER.unpack_from(raw)
    if magic != CACHE_MAGIC or version != CACHE_VERSION:
        raise ValueError(f"{path}: not a version {CACHE_VERSION} cache file")
    kind = {v: k for k, v in _KINDS.items()}[kind]
    data = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).astype(np.float64)
    values = np.concatenate(([0.0], data))
    values.setflags(write=False)
    expected = X if X else z
    if data.size != expected:
        raise ValueError(f"{path}: expected {expected} values, found {data.size}")
    if X == 0:
        return WeightTable(z, values, float(np.max(np.abs(data))), kind)
    return LambdaSeries(X, z, values, kind)
