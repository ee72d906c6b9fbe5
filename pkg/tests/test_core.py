import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from egmgames.core import check_complex, euclidean_norm, make_rng, matvec, random_orthogonal


def test_matvec_examples():
    assert matvec(np.eye(3), [1, 2, 3]).tolist() == [1, 2, 3]
    assert matvec(np.zeros((2, 2)), [5, 7]).tolist() == [0, 0]
    assert matvec([[0, -1], [1, 0]], [1, 0]).tolist() == [0, 1]


def test_matvec_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        matvec(np.eye(3), [1, 2])


@pytest.mark.parametrize("x, expected", [([0, 0], 0.0), ([3, 4], 5.0), ([1, 1, 1, 1], 2.0)])
def test_euclidean_norm(x, expected):
    assert euclidean_norm(x) == expected


def test_random_orthogonal_1x1():
    q = random_orthogonal(1, make_rng(0))
    assert abs(q[0, 0]) == 1.0


def test_random_orthogonal_3x3_seed0():
    q = random_orthogonal(3, make_rng(0))
    assert np.max(np.abs(q.T @ q - np.eye(3))) <= 1e-12


def test_random_orthogonal_deterministic():
    a = random_orthogonal(2, make_rng(0))
    b = random_orthogonal(2, make_rng(0))
    assert np.array_equal(a, b)


def test_random_orthogonal_rejects_zero():
    with pytest.raises(ValueError):
        random_orthogonal(0, make_rng(0))


@pytest.mark.parametrize("d", range(1, 65))
def test_random_orthogonal_orthonormal(d):
    q = random_orthogonal(d, make_rng(d))
    assert np.max(np.abs(q.T @ q - np.eye(d))) <= 1e-12


def test_rng_stream_is_reproducible():
    assert np.array_equal(make_rng(42).standard_normal(5), make_rng(42).standard_normal(5))
    with pytest.raises(ValueError):
        make_rng(-1)


def test_check_complex_rejects_nonfinite():
    with pytest.raises(ValueError):
        check_complex(complex(float("nan"), 0))
    with pytest.raises(ValueError):
        check_complex(complex(0, float("inf")))
    assert check_complex(1) == 1 + 0j


angles = st.floats(0, 2 * np.pi, allow_nan=False)


@settings(max_examples=200)
@given(angles, angles, angles)
def test_complex_multiplication_associative(a, b, c):
    x, y, z = (cmath.exp(1j * t) for t in (a, b, c))
    lhs, rhs = (x * y) * z, x * (y * z)
    assert abs(lhs - rhs) <= 1e-14 * abs(rhs)
