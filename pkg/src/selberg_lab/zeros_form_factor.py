"""Zeta-zero tables and the pair correlation form factor.

    F_T(alpha) = (T log T / 2 pi)^{-1} sum_{0 < g, g' <= T} e(alpha (log T / 2 pi)(g - g')) w(g - g'),
    w(u) = 4 / (4 + u^2),  e(x) = exp(2 pi i x),

with natural logarithms throughout.  The sum runs over ordered pairs,
including the diagonal, so it is real up to rounding and even in alpha.
"""

import gzip
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from .errors import CoverageError, DomainError, ZeroTableError
from .reduction import map_ordered

PAIR_BLOCK = 256


@dataclass(frozen=True)
class ZeroSet:
    """Ascending zero ordinates (repeated for multiplicity).

    ``coverage`` is the height up to which the list is complete; it defaults
    to the largest ordinate.
    """

    ordinates: np.ndarray
    source: str = ""
    coverage: float = None

    def __post_init__(self):
        g = np.ascontiguousarray(self.ordinates, dtype=np.float64)
        if g.size == 0:
            raise ZeroTableError("zero set is empty")
        if not np.all(np.isfinite(g)) or g[0] <= 0:
            raise ZeroTableError("ordinates must be finite and positive")
        bad = np.flatnonzero(np.diff(g) < 0)
        if bad.size:
            raise ZeroTableError(f"ordinates decrease at index {bad[0] + 1}")
        g.setflags(write=False)
        object.__setattr__(self, "ordinates", g)
        cov = float(g[-1]) if self.coverage is None else float(self.coverage)
        if cov < g[-1]:
            raise DomainError("coverage height is below the largest ordinate")
        object.__setattr__(self, "coverage", cov)

    def __len__(self):
        return self.ordinates.size


def load_zeros(path):
    """Read a zero table: one decimal ordinate per line, '#' lines ignored.

    Files ending in ``.gz`` are decompressed transparently.
    """
    path = str(path)
    opener = gzip.open if path.endswith(".gz") else open
    values = []
    prev = 0.0
    with opener(path, "rt", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                x = float(text)
            except ValueError:
                raise ZeroTableError(f"cannot parse {text!r} as an ordinate", lineno) from None
            if not math.isfinite(x) or x <= 0:
                raise ZeroTableError(f"ordinate {text!r} is not a positive number", lineno)
            if x < prev:
                raise ZeroTableError(f"ordinate {x} is smaller than its predecessor {prev}", lineno)
            values.append(x)
            prev = x
    if not values:
        raise ZeroTableError(f"{path}: no ordinates found")
    return ZeroSet(np.array(values), source=path)


@dataclass(frozen=True)
class FormFactorCurve:
    T: float
    alphas: np.ndarray
    values: np.ndarray
    pair_cutoff: float
    normalization: float
    imag_residues: np.ndarray
    truncation_bound: float
    zero_count: int
    source: str = ""


@numba.njit(cache=True, nogil=True)
def _pair_block(g, lo, hi, left, right, c, cutoff):
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    for i in range(lo, hi):
        gi = g[i]
        for j in range(left[i], right[i]):
            d = gi - g[j]
            if cutoff >= 0.0 and abs(d) > cutoff:
                continue
            w = 4.0 / (4.0 + d * d)
            x = w * math.cos(c * d)
            t = sr + x
            if abs(sr) >= abs(x):
                cr += (sr - t) + x
            else:
                cr += (x - t) + sr
            sr = t
            y = w * math.sin(c * d)
            t = si + y
            if abs(si) >= abs(y):
                ci += (si - t) + y
            else:
                ci += (y - t) + si
            si = t
    return sr + cr, si + ci


def _truncation_bound(g, U):
    """Upper bound on sum of w over ordered pairs with |g - g'| > U, via dyadic shells."""
    total = 0.0
    span = g[-1] - g[0]
    a = U
    while a < span:
        b = 2.0 * a
        right = np.searchsorted(g, g + b, "right") - np.searchsorted(g, g + a, "right")
        left = np.searchsorted(g, g - a, "left") - np.searchsorted(g, g - b, "left")
        total += float(np.sum(right + left)) * 4.0 / (4.0 + a * a)
        a = b
    return total


def form_factor(zeros, T=None, alphas=(0.0,), pair_cutoff=None, threads=None):
    """Sample F_T on ``alphas``; exact over all pairs unless ``pair_cutoff`` is set.

    With a cutoff U, pairs with |g - g'| > U are dropped and
    ``truncation_bound`` bounds the resulting change of every F_T value.
    """
    T = zeros.coverage if T is None else float(T)
    if T > zeros.coverage:
        raise CoverageError(f"T = {T} exceeds the zero set coverage {zeros.coverage}")
    if T <= 1:
        raise DomainError(f"T must exceed 1, got {T}")
    g = zeros.ordinates[: np.searchsorted(zeros.ordinates, T, "right")]
    n = g.size
    norm = T * math.log(T) / (2 * math.pi)
    if pair_cutoff is None:
        left = np.zeros(n, dtype=np.int64)
        right = np.full(n, n, dtype=np.int64)
        cutoff = -1.0
        bound = 0.0
    else:
        cutoff = float(pair_cutoff)
        if cutoff <= 0:
            raise DomainError("pair cutoff must be positive")
        slack = cutoff * (1 + 1e-9) + 1e-9
        left = np.searchsorted(g, g - slack, "left").astype(np.int64)
        right = np.searchsorted(g, g + slack, "right").astype(np.int64)
        bound = _truncation_bound(g, cutoff) / norm if n else 0.0
    alphas = np.asarray(alphas, dtype=np.float64)
    blocks = [(lo, min(lo + PAIR_BLOCK, n)) for lo in range(0, n, PAIR_BLOCK)]
    values = np.zeros(alphas.size)
    imag = np.zeros(alphas.size)
    for i, alpha in enumerate(alphas):
        c = alpha * math.log(T)
        parts = map_ordered(lambda r: _pair_block(g, r[0], r[1], left, right, c, cutoff),
                            blocks, threads)
        values[i] = math.fsum(p[0] for p in parts) / norm
        imag[i] = math.fsum(p[1] for p in parts) / norm
    return FormFactorCurve(T, alphas, values, pair_cutoff, norm, imag, bound, n, zeros.source)


class Prediction(NamedTuple):
    value: float
    valid: bool


def montgomery_prediction(alpha, T):
    """T^(-2 alpha) log T + alpha, the leading terms for 0 <= alpha <= 1."""
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if T <= 1:
        raise DomainError("T must exceed 1")
    return Prediction(T ** (-2.0 * alpha) * math.log(T) + alpha, alpha <= 1.0)


CURVE_COLUMNS = ("montgomery_shape", "ggos_lower", "thm110_lower", "ah_line", "conjecture")


def reference_curves(alpha_grid):
    """Reference lines per alpha; ``None`` outside each line's stated range.

    montgomery_shape  min(alpha, 1)          on [0, 1]
    ggos_lower        3/2 - alpha            on [1, 3/2)
    thm110_lower      47/15 - 39 alpha / 15  on [1, 49/48)
    ah_line           2 - alpha              on [1, 2)
    conjecture        1                      on [1, inf)
    """
    rows = []
    for a in alpha_grid:
        a = float(a)
        if a < 0:
            raise DomainError("alpha grid values must be >= 0")
        rows.append({
            "alpha": a,
            "montgomery_shape": min(a, 1.0) if a <= 1 else None,
            "ggos_lower": 1.5 - a if 1 <= a < 1.5 else None,
            "thm110_lower": 47 / 15 - 39 * a / 15 if 1 <= a < 49 / 48 else None,
            "ah_line": 2 - a if 1 <= a < 2 else None,
            "conjecture": 1.0 if a >= 1 else None,
        })
    return rows


def normalize_zeros(zeros, return_flags=False):
    """Unfolded ordinates (g / 2 pi) log(g / 2 pi), mean spacing about 1.

    Ordinates at or below 2 pi still go through the formula but are flagged.
    """
    g = zeros.ordinates if isinstance(zeros, ZeroSet) else np.asarray(zeros, dtype=np.float64)
    x = g / (2 * math.pi)
    out = x * np.log(x)
    flags = g <= 2 * math.pi
    if flags.any():
        warnings.warn(f"{int(flags.sum())} ordinates lie at or below 2*pi", stacklevel=2)
    return (out, flags) if return_flags else out


def unfold_inverse(y):
    """Ordinates g > 2 pi with (g / 2 pi) log(g / 2 pi) = y, for y > 0."""
    from scipy.special import lambertw

    y = np.asarray(y, dtype=np.float64)
    if np.any(y <= 0):
        raise DomainError("unfolded values must be positive")
    return 2 * math.pi * y / np.real(lambertw(y))


def synthetic_zero_set(unfolded, source="synthetic", coverage=None):
    """ZeroSet whose normalized ordinates are ``unfolded``."""
    return ZeroSet(np.sort(unfold_inverse(unfolded)), source, coverage)


def lattice_zero_set(T, steps, source="half-lattice"):
    """Zeros whose gaps, measured in units of 2 pi / log T, are the given ``steps``.

    With every step in (1/2)Z the form factor at height T is 2-periodic in alpha.
    """
    scale = 2 * math.pi / math.log(T)
    y = np.cumsum(np.asarray(steps, dtype=np.float64))
    g = scale * y
    if g[0] <= 0 or g[-1] > T:
        raise DomainError("lattice does not fit in (0, T]")
    return ZeroSet(g, source, coverage=T)
