"""Permanent kernels against the permutation-sum oracle."""

import math

import numpy as np
import pytest

from photonsim.permanent import (GLYNN_CUTOFF, leave_one_out_permanents,
                                 permanent, permanent_glynn, permanent_ryser,
                                 reference)

from conftest import permanent_bruteforce, random_complex


def test_empty_matrix_is_one():
    empty = np.zeros((0, 0), dtype=complex)
    assert permanent(empty) == 1
    assert permanent_ryser(empty) == 1
    assert permanent_glynn(empty) == 1


def test_two_by_two_definition():
    a, b, c, d = 1.5 + 2j, -0.25, 3j, 0.75 - 1j
    mat = np.array([[a, b], [c, d]])
    for fn in (permanent, permanent_ryser, permanent_glynn):
        assert abs(fn(mat) - (a * d + b * c)) < 1e-12


def test_swap_matrix():
    assert permanent(np.array([[0.0, 1.0], [1.0, 0.0]])) == 1


def test_identity_glynn():
    for n in range(1, 11):
        assert abs(permanent_glynn(np.eye(n)) - 1.0) < 1e-12


def test_all_ones_exact_factorial():
    for n in range(1, 16):
        value = permanent(np.ones((n, n)))
        assert value == complex(math.factorial(n))


@pytest.mark.parametrize("n", range(0, 8))
def test_kernels_match_bruteforce(n, rng):
    mat = random_complex(rng, n)
    ref = permanent_bruteforce(mat)
    scale = 1.0 + abs(ref)
    assert abs(permanent_ryser(mat) - ref) / scale < 1e-9
    assert abs(permanent_glynn(mat) - ref) / scale < 1e-9
    assert abs(permanent(mat) - ref) / scale < 1e-9


def test_glynn_ryser_agree_on_random_10x10(rng):
    for _ in range(100):
        mat = random_complex(rng, 10) / math.sqrt(10)
        r = permanent_ryser(mat)
        g = permanent_glynn(mat)
        assert abs(g - r) < 1e-9 * (1 + abs(r))


def test_row_permutation_invariance(rng):
    for n in range(2, 8):
        mat = random_complex(rng, n)
        ref = permanent(mat)
        perm = rng.permutation(n)
        assert abs(permanent(mat[perm]) - ref) < 1e-9 * (1 + abs(ref))


def test_row_scaling_multilinearity(rng):
    mat = random_complex(rng, 6)
    ref = permanent(mat)
    scaled = mat.copy()
    scaled[3] *= 2.5 - 1j
    assert abs(permanent(scaled) - (2.5 - 1j) * ref) < 1e-9 * (1 + abs(ref))


def test_threads_bit_identical(rng):
    mat = random_complex(rng, GLYNN_CUTOFF + 2)
    values = {permanent_ryser(mat, threads=t) for t in (1, 2, 4, 8)}
    assert len(values) == 1


def test_dispatch_matches_kernels(rng):
    small = random_complex(rng, 6)
    assert permanent(small) == permanent_glynn(small)
    big = random_complex(rng, GLYNN_CUTOFF)
    assert permanent(big) == permanent_ryser(big)


def test_non_square_rejected(rng):
    with pytest.raises(ValueError):
        permanent(random_complex(rng, 3, 4))


def test_subpermanents_match_column_deletion(rng):
    for k in range(1, 9):
        mat = random_complex(rng, k - 1, k)
        got = leave_one_out_permanents(mat)
        for j in range(k):
            ref = permanent_bruteforce(np.delete(mat, j, axis=1))
            assert abs(got[j] - ref) < 1e-9 * (1 + abs(ref))


class TestReferenceImplementation:
    """The numpy fallback must agree with the compiled kernels."""

    def test_glynn(self, rng):
        for n in range(0, 10):
            mat = random_complex(rng, n)
            ref = permanent_bruteforce(mat) if n <= 7 else permanent_glynn(mat)
            assert abs(reference.glynn(mat) - ref) < 1e-8 * (1 + abs(ref))

    def test_ryser_range_full(self, rng):
        for n in range(1, 10):
            mat = random_complex(rng, n)
            got = reference.ryser_range(mat, 1, 1 << n)
            ref = permanent_glynn(mat)
            assert abs(got - ref) < 1e-8 * (1 + abs(ref))

    def test_ryser_range_chunks_sum(self, rng):
        mat = random_complex(rng, 8)
        total = 1 << 8
        mid = 97
        split = (reference.ryser_range(mat, 1, mid)
                 + reference.ryser_range(mat, mid, total))
        assert abs(split - reference.ryser_range(mat, 1, total)) < 1e-10

    def test_subpermanents(self, rng):
        for k in (1, 2, 4, 6):
            mat = random_complex(rng, k - 1, k)
            got = reference.subpermanents(mat)
            want = leave_one_out_permanents(mat)
            assert np.abs(got - want).max() < 1e-9
