"""Shared brute-force oracles for the test suite.

These stay deliberately naive and independent of the library's fast paths:
quadratic pair counting, full permutation enumeration, literal cost sums.
"""

import itertools

from minla import Permutation, is_minla


def naive_kendall(p: Permutation, q: Permutation) -> int:
    """All-pairs discordance count, O(n^2)."""
    n = len(p)
    count = 0
    for x in range(n):
        for y in range(x + 1, n):
            if (p.pos_of[x] < p.pos_of[y]) != (q.pos_of[x] < q.pos_of[y]):
                count += 1
    return count


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(n))]


def feasible_permutations(parts, model, n: int) -> list[Permutation]:
    """Every permutation the contiguity characterization accepts."""
    return [p for p in all_permutations(n) if is_minla(p, parts, model)]
