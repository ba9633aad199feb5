"""Shared fixtures and independent oracles for the test suite.

Oracles here are deliberately naive (permutation sums, exhaustive
enumeration) so they stay independent of the kernels they check.
"""

import itertools
import math

import numpy as np
import pytest


def permanent_bruteforce(a) -> complex:
    """O(n * n!) permutation-sum definition of the permanent."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    total = 0j
    for perm in itertools.permutations(range(n)):
        prod = 1.0 + 0j
        for i, j in enumerate(perm):
            prod *= a[i, j]
        total += prod
    return total


def binomial_pascal(n: int, k: int) -> int:
    """Pascal-triangle binomial, exact integers, independent of math.comb."""
    if k < 0 or k > n:
        return 0
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row[k]


def random_complex(rng, n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
