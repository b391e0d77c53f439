import math

import numpy as np
import pytest

from selberg_lab.reduction import (chunk_bounds, compensated_dot, compensated_sum, map_ordered,
                                   resolve_threads)


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("SELBERG_LAB_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("SELBERG_LAB_THREADS", "6")
    assert resolve_threads() == 6
    assert resolve_threads(2) == 2
    with pytest.raises(ValueError):
        resolve_threads(0)


def test_chunks_cover_range():
    assert chunk_bounds(5, 2) == [(0, 2), (2, 4), (4, 5)]
    assert chunk_bounds(0, 2) == []


def test_map_ordered_keeps_order():
    assert map_ordered(lambda x: x * x, range(50), 4) == [x * x for x in range(50)]


def test_compensated_sums_are_accurate_and_thread_invariant():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(300000) * 10.0 ** rng.integers(-8, 8, 300000)
    y = rng.standard_normal(300000)
    s1 = compensated_sum(x, 1)
    assert abs(s1 - math.fsum(x)) <= 1e-12 * math.fsum(np.abs(x))
    d1 = compensated_dot(x, y, 1)
    for t in (2, 4, 8):
        assert compensated_sum(x, t) == s1
        assert compensated_dot(x, y, t) == d1
