from fractions import Fraction

import numpy as np
import pytest

from combcluster import Dyadic, DyadicMatrix, NotDyadicError


def test_lowest_terms():
    d = Dyadic(6, 8)
    assert (d.numerator, d.denominator) == (3, 4)
    assert Dyadic(0, 16).denominator == 1


def test_non_dyadic_denominator_rejected():
    with pytest.raises(NotDyadicError):
        Dyadic(1, 3)
    with pytest.raises(NotDyadicError):
        Dyadic.coerce(Fraction(1, 10))


@pytest.mark.parametrize("value,expected", [
    (3, Fraction(3)),
    (Fraction(-5, 4), Fraction(-5, 4)),
    (0.375, Fraction(3, 8)),
    ("1/2", Fraction(1, 2)),
    (np.int64(7), Fraction(7)),
])
def test_coerce(value, expected):
    assert Dyadic.coerce(value).as_fraction() == expected


def test_arithmetic_matches_fraction():
    a, b = Dyadic(3, 4), Dyadic(-5, 8)
    fa, fb = Fraction(3, 4), Fraction(-5, 8)
    assert (a + b).as_fraction() == fa + fb
    assert (a - b).as_fraction() == fa - fb
    assert (a * b).as_fraction() == fa * fb
    assert abs(b).as_fraction() == abs(fb)
    assert (1 - a).as_fraction() == 1 - fa
    assert b < a and a > b and a >= a and b <= b
    assert float(b) == -0.625
    assert str(b) == "-5/8" and str(Dyadic(4)) == "4"


def test_hash_consistent_with_fraction():
    assert hash(Dyadic(1, 2)) == hash(Fraction(1, 2))
    assert Dyadic(1, 2) == Fraction(1, 2)


def test_matrix_normalises_exponent():
    m = DyadicMatrix(np.array([[2, 4], [4, 6]]), 2)
    assert m.exponent == 1
    assert m.numerators.tolist() == [[1, 2], [2, 3]]
    assert DyadicMatrix.zeros(2).exponent == 0


def test_matrix_read_only():
    m = DyadicMatrix.identity(3)
    with pytest.raises(ValueError):
        m.numerators[0, 0] = 5


def test_from_values_and_indexing():
    m = DyadicMatrix.from_values([[Fraction(1, 2), 0], [0, "3/4"]])
    assert m[1, 1] == Dyadic(3, 4)
    assert m[0:1, 0:2].shape == (1, 2)
    assert m.to_float().tolist() == [[0.5, 0.0], [0.0, 0.75]]
    assert m.to_fractions()[0, 0] == Fraction(1, 2)


def test_matmul_against_fraction_oracle(oracles):
    rng = np.random.default_rng(3)
    A = DyadicMatrix(rng.integers(-9, 10, (5, 4)), 3)
    B = DyadicMatrix(rng.integers(-9, 10, (4, 6)), 2)
    expect = oracles.matmul(oracles.fractions(A), oracles.fractions(B))
    assert oracles.fractions(A @ B) == expect


def test_matmul_overflow_falls_back_to_python_ints():
    big = DyadicMatrix(np.array([[2**40 + 1, 0], [0, 1]]), 0)
    sq = big @ big
    assert int(sq.numerators[0, 0]) == (2**40 + 1) ** 2


def test_kron_add_scale():
    a = DyadicMatrix.from_values([[1, 2], [3, 4]])
    b = DyadicMatrix.from_values([["1/2", 0], [0, "1/2"]])
    k = a.kron(b)
    assert k.shape == (4, 4) and k[3, 2] == 0 and k[3, 3] == 2
    assert (a + a) == a * 2
    assert (a - a).is_zero()
    assert (-a)[0, 1] == -2
    assert a.T[0, 1] == 3
    assert not a.is_symmetric() and b.is_symmetric()
    assert b.nonzero() == [(0, 0), (1, 1)]
