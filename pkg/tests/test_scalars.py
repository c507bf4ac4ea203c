import random
from fractions import Fraction

import pytest

from oretower.errors import DivisionByZero, ZeroInput
from oretower.scalars import (
    GF,
    QQ,
    CyclotomicField,
    FunctionField,
    Matrix,
    canonicalize,
    cyclotomic_polynomial,
    divisors,
    parse_field,
    root_of_unity_order,
    solve_linear_system,
)

from conftest import random_scalar

FIELDS = [
    QQ,
    GF(5),
    GF(7),
    CyclotomicField(3),
    CyclotomicField(5),
    FunctionField(QQ, "t"),
]


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.name)
def test_field_axioms_on_samples(field):
    rng = random.Random(7)
    for _ in range(40):
        a = random_scalar(field, rng)
        b = random_scalar(field, rng)
        c = random_scalar(field, rng)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert a + b == b + a
        assert a * b == b * a
        if not a.is_zero():
            assert a * a.inverse() == field.one
        assert a + field.zero == a
        assert a * field.one == a


def test_canonicalize_examples():
    half = QQ.coerce(Fraction(2, 4))
    assert half == Fraction(1, 2)
    assert canonicalize(half) == half

    z = CyclotomicField(3).gen
    assert z**3 == 1

    t = FunctionField(QQ, "t").gen
    assert (t**2 - 1) / (t - 1) == t + 1


def test_canonicalize_idempotent_on_samples():
    rng = random.Random(11)
    for field in FIELDS:
        for _ in range(10):
            s = random_scalar(field, rng)
            assert canonicalize(s) == s
            assert canonicalize(canonicalize(s)) == canonicalize(s)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        QQ.one / QQ.zero
    with pytest.raises(DivisionByZero):
        CyclotomicField(3).zero.inverse()


def test_root_of_unity_examples():
    assert root_of_unity_order(CyclotomicField(3).gen) == 3
    assert root_of_unity_order(QQ.coerce(-1)) == 2
    assert root_of_unity_order(QQ.coerce(1)) == 1
    assert root_of_unity_order(QQ.coerce(2)) is None
    assert root_of_unity_order(FunctionField(QQ, "t").gen) is None
    assert root_of_unity_order(FunctionField(QQ, "t").coerce(-1)) == 2
    assert root_of_unity_order(CyclotomicField(2).gen) == 2
    assert root_of_unity_order(-CyclotomicField(3).gen) == 6
    with pytest.raises(ZeroInput):
        root_of_unity_order(QQ.zero)


def test_root_of_unity_minimality():
    # order N means s^N = 1 and s^d != 1 for every proper divisor d of N
    samples = [
        CyclotomicField(5).gen,
        CyclotomicField(5).gen ** 2,
        -CyclotomicField(3).gen,
        CyclotomicField(12).gen,
        GF(7).coerce(3),
        GF(7).coerce(2),
    ]
    for s in samples:
        n = root_of_unity_order(s)
        assert n is not None
        assert s**n == s.field.one
        for d in divisors(n)[:-1]:
            assert s**d != s.field.one


def test_prime_field_orders_divide_p_minus_1():
    p = 11
    field = GF(p)
    for a in range(1, p):
        n = root_of_unity_order(field.coerce(a))
        assert n is not None and (p - 1) % n == 0


def test_cyclotomic_polynomials():
    def poly(*coeffs):
        return tuple(Fraction(c) for c in coeffs)

    assert cyclotomic_polynomial(1) == poly(-1, 1)
    assert cyclotomic_polynomial(2) == poly(1, 1)
    assert cyclotomic_polynomial(3) == poly(1, 1, 1)
    assert cyclotomic_polynomial(4) == poly(1, 0, 1)
    assert cyclotomic_polynomial(6) == poly(1, -1, 1)
    assert cyclotomic_polynomial(12) == poly(1, 0, -1, 0, 1)


def test_solve_identity():
    ident = Matrix.identity(QQ, 3)
    b = [QQ.coerce(4), QQ.coerce(-1), QQ.coerce(0)]
    assert solve_linear_system(ident, b) == b


def test_solve_inconsistent():
    a = Matrix(QQ, [[1, 1], [2, 2]])
    assert solve_linear_system(a, [1, 3]) is None


def test_solve_hand_elimination():
    a = Matrix(QQ, [[1, 1], [0, 1]])
    assert solve_linear_system(a, [3, 1]) == [QQ.coerce(2), QQ.coerce(1)]


def test_solve_homogeneous_returns_nonzero():
    a = Matrix(QQ, [[1, 1], [2, 2]])
    x = solve_linear_system(a, [0, 0])
    assert x is not None and any(not v.is_zero() for v in x)
    # and it really solves the system
    for row in a.rows:
        acc = QQ.zero
        for coeff, val in zip(row, x):
            acc = acc + coeff * val
        assert acc.is_zero()


def test_solve_free_variables_default_to_zero():
    # one pivot, one free column: particular solution keeps the free var at 0
    a = Matrix(QQ, [[1, 1]])
    assert solve_linear_system(a, [5]) == [QQ.coerce(5), QQ.zero]


def test_solve_exactness_on_random_systems():
    rng = random.Random(13)
    for _ in range(25):
        nrows = rng.randint(1, 4)
        ncols = rng.randint(1, 4)
        a = Matrix(QQ, [[rng.randint(-4, 4) for _ in range(ncols)] for _ in range(nrows)])
        b = [QQ.coerce(rng.randint(-4, 4)) for _ in range(nrows)]
        x = solve_linear_system(a, b)
        if x is None:
            continue
        for row, rhs in zip(a.rows, b):
            acc = QQ.zero
            for coeff, val in zip(row, x):
                acc = acc + coeff * val
            assert acc == rhs


def test_matrix_inverse_round_trip():
    rng = random.Random(17)
    field = FunctionField(QQ, "q")
    for _ in range(10):
        m = Matrix(field, [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)])
        if not m.is_invertible():
            continue
        assert m * m.inverse() == Matrix.identity(field, 2)
        assert m.inverse() * m == Matrix.identity(field, 2)


def test_matrix_scalar_part():
    ident = Matrix.identity(QQ, 2)
    assert (ident * QQ.coerce(3)).scalar_part() == 3
    assert Matrix.unit(QQ, 2, 0, 1).scalar_part() is None


def test_parse_field_descriptors():
    assert parse_field("Q") is QQ
    assert parse_field("gf(5)").p == 5
    assert parse_field("cyclotomic(3)").n == 3
    assert parse_field("Q(t)").var == "t"
    assert parse_field("gf(5)(t)").inner.p == 5
    with pytest.raises(ValueError):
        parse_field("R")


def test_cross_field_coercion():
    t = FunctionField(QQ, "t").gen
    assert t + 1 == FunctionField(QQ, "t").from_polys([1, 1])
    assert QQ.coerce(2) * t == FunctionField(QQ, "t").from_polys([0, 2])
    z = CyclotomicField(3).gen
    assert z + Fraction(1, 2) == CyclotomicField(3).coerce([Fraction(1, 2), 1])


def test_function_field_normal_form():
    field = FunctionField(QQ, "t")
    t = field.gen
    a = (t**2 + 2 * t + 1) / (t + 1)
    assert a == t + 1
    # denominator is kept monic
    b = field.one / (2 * t + 2)
    num, den = b.rep
    assert den[-1] == QQ.one
