"""Exact minimum-inversion ordering of disjoint blocks.

Given m blocks of nodes and a reference permutation, find the order of the
blocks that minimizes the number of node pairs placed opposite to their
reference order.  Pairwise preferences between blocks can be cyclic, so the
minimum is found by dynamic programming over block subsets: O(2^m * m)
table work plus an O(m^3) reconstruction.  A hard cap on m guards the
exponential table.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CapacityError

__all__ = ["cross_weight", "solve_block_order"]

_INF = 1 << 60
# Above this many blocks the vectorized table pays for itself.
_NUMPY_MIN_ITEMS = 11


def cross_weight(sorted_pos_a: Sequence[int], sorted_pos_b: Sequence[int]) -> int:
    """Pairs (a, b) with a in A, b in B and a's reference position after b's.

    Both inputs must be sorted ascending.  This is the inversion cost of
    laying block A entirely before block B.
    """
    count = 0
    j = 0
    nb = len(sorted_pos_b)
    for a in sorted_pos_a:
        while j < nb and sorted_pos_b[j] < a:
            j += 1
        count += j
    return count


@lru_cache(maxsize=8)
def _popcount_layers(m: int) -> tuple[np.ndarray, ...]:
    """Subset ints grouped by popcount, one array per count 0..m."""
    full = 1 << m
    v = np.arange(full, dtype=np.int64)
    lut = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)
    pc = lut[v & 0xFFFF] + lut[(v >> 16) & 0xFFFF]
    order = np.argsort(pc, kind="stable")
    bounds = np.searchsorted(pc[order], np.arange(m + 2))
    return tuple(order[bounds[c] : bounds[c + 1]] for c in range(m + 1))


def _subset_costs_py(w: Sequence[Sequence[int]], m: int) -> list[int]:
    full = 1 << m
    g = [0] * full
    for s in range(1, full):
        bits = [j for j in range(m) if s >> j & 1]
        best = _INF
        for j in bits:
            row = w[j]
            c = g[s ^ (1 << j)]
            for i in bits:
                c += row[i]
            if c < best:
                best = c
        g[s] = best
    return g


def _subset_costs_np(w: Sequence[Sequence[int]], m: int) -> np.ndarray:
    full = 1 << m
    # int32 keeps the table small near the item cap; the summed weights stay
    # below C(n, 2) for any realistic node count.
    warr = np.asarray(w, dtype=np.int32)
    # swf[s, j] = sum of w[j][i] over i in s (diagonal is zero).
    swf = np.zeros((full, m), dtype=np.int32)
    for i in range(m):
        lo = 1 << i
        swf[lo : 2 * lo] = swf[:lo] + warr[:, i]
    g = np.full(full, _INF, dtype=np.int64)
    g[0] = 0
    layers = _popcount_layers(m)
    for c in range(1, m + 1):
        rs = layers[c]
        for j in range(m):
            bit = 1 << j
            sel = rs[(rs & bit) != 0]
            if sel.size == 0:
                continue
            cand = g[sel ^ bit] + swf[sel, j]
            g[sel] = np.minimum(g[sel], cand)
    return g


def solve_block_order(
    w: Sequence[Sequence[int]], tie_keys: Sequence[int], cap: int = 22
) -> tuple[int, list[int]]:
    """Minimum total cross cost and an optimal block order.

    ``w[i][j]`` is the cost of placing block i anywhere before block j; the
    order returned minimizes the sum of ``w`` over all ordered block pairs.
    Among minimum-cost orders, ties resolve to the order whose blocks appear
    by ascending ``tie_keys`` as early as possible, which yields the
    lexicographically smallest concatenation when the keys are the blocks'
    leading node ids.
    """
    m = len(w)
    if m > cap:
        raise CapacityError(f"{m} blocks exceed the exact-search cap of {cap}")
    if m == 0:
        return 0, []
    if m == 1:
        return 0, [0]
    if m <= _NUMPY_MIN_ITEMS:
        g = _subset_costs_py(w, m)
    else:
        g = _subset_costs_np(w, m)

    order: list[int] = []
    remaining = (1 << m) - 1
    while remaining:
        bits = [j for j in range(m) if remaining >> j & 1]
        target = int(g[remaining])
        best_j = -1
        best_key = None
        for j in bits:
            row = w[j]
            head_cost = 0
            for i in bits:
                head_cost += row[i]
            if head_cost + int(g[remaining ^ (1 << j)]) == target:
                key = tie_keys[j]
                if best_j < 0 or key < best_key:
                    best_j, best_key = j, key
        order.append(best_j)
        remaining ^= 1 << best_j
    return int(g[(1 << m) - 1]), order
