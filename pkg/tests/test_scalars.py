from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerian_dmod.scalars import (
    QQ,
    CharSpec,
    FieldScalar,
    InputError,
    binom_field,
    binom_int,
    binom_mod,
    binom_table,
)
from oracles import binom_brute

ints = st.integers(-40, 40)
small_r = st.integers(0, 12)
primes = st.sampled_from([2, 3, 5, 7])


@pytest.mark.parametrize("a,b,want", [(5, 2, 10), (-1, 3, -1), (0, 1, 0), (0, 7, 0), (7, 0, 1)])
def test_binom_int_examples(a, b, want):
    assert binom_int(a, b) == want


def test_binom_field_examples():
    assert binom_field(2, 1, CharSpec(2)) == 0
    for p in (2, 3, 5):
        for r in range(8):
            assert binom_field(-1, r, CharSpec(p)) == FieldScalar((-1) ** r, CharSpec(p))


@given(ints, small_r)
def test_binom_matches_falling_factorial(a, r):
    assert binom_int(a, r) == binom_brute(a, r)


@given(ints, st.integers(1, 12))
def test_pascal(a, r):
    assert binom_int(a, r) == binom_int(a - 1, r) + binom_int(a - 1, r - 1)


@given(ints, ints, st.integers(0, 10))
def test_vandermonde(a, b, r):
    assert binom_int(a + b, r) == sum(binom_int(a, i) * binom_int(b, r - i) for i in range(r + 1))


@given(st.lists(st.integers(-8, 8), min_size=1, max_size=3), st.integers(0, 8))
def test_sum_over_compositions(js, r):
    from eulerian_dmod.weyl import compositions

    total = 0
    for comp in compositions(r, len(js)):
        prod = 1
        for j, i in zip(js, comp):
            prod *= binom_int(j, i)
        total += prod
    assert total == binom_int(sum(js), r)


@given(st.integers(0, 500), st.integers(0, 40), primes)
def test_lucas_agrees_with_reduction(a, r, p):
    assert binom_mod(a, r, p) == binom_int(a, r) % p


@given(st.integers(-60, -1), st.integers(0, 20), primes)
def test_negative_top_mod_p(a, r, p):
    assert binom_mod(a, r, p) == binom_brute(a, r) % p


@pytest.mark.parametrize("p", [2, 3, 5])
def test_frobenius_digit_congruence(p):
    # binom(p^e c + d, r) == binom(d, r) mod p when r < p^e, d >= 0
    for e in (1, 2, 3):
        q = p**e
        for c in range(-2, 3):
            for d in range(0, 2 * q):
                for r in range(q):
                    a = q * c + d
                    assert binom_field(a, r, CharSpec(p)) == binom_field(d, r, CharSpec(p))


def test_charspec_validation():
    for bad in (4, 1, -3, 9):
        with pytest.raises(InputError):
            CharSpec(bad)
    assert CharSpec(7).p == 7


@given(st.fractions(max_denominator=20), st.fractions(max_denominator=20))
def test_rational_field_axioms(x, y):
    a, b = QQ.scalar(x), QQ.scalar(y)
    assert a + b == b + a
    assert (a * b).value == Fraction(x) * Fraction(y)
    if y != 0:
        assert (a / b) * b == a


@given(st.integers(-50, 50), primes)
def test_fp_inverse(x, p):
    ch = CharSpec(p)
    a = ch.scalar(x)
    if x % p:
        assert a * a.inverse() == 1
    else:
        with pytest.raises(ZeroDivisionError):
            a.inverse()


def test_mixed_characteristics_rejected():
    with pytest.raises(InputError):
        FieldScalar(1, CharSpec(2)) + FieldScalar(1, CharSpec(3))


def test_fraction_without_image_mod_p():
    with pytest.raises(InputError):
        CharSpec(3).reduce(Fraction(1, 3))


def test_binom_table_dtypes():
    t = binom_table(-5, 5, 4, QQ)
    assert t.dtype == np.int64 and t[5 + 3, 2] == 3
    big = binom_table(0, 200, 60, QQ)
    assert big.dtype == object and big[200, 60] == binom_int(200, 60)
    tp = binom_table(-5, 5, 4, CharSpec(3))
    assert tp.dtype == np.int64 and int(tp[0, 1]) == (-5) % 3
