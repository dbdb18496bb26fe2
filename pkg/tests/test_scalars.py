"""Exact scalar layer: field axioms, parsing, roots of unity."""
import random

import pytest

from mbim.errors import DivisionByZero, FieldMismatch, UnsupportedField
from mbim.scalars import (
    ExactScalar,
    PrimeField,
    Rationals,
    find_root_of_unity,
    is_prime,
    parse_field_spec,
    parse_scalar,
)

Q = Rationals()
F5 = PrimeField(5)


def test_primality_trial_division():
    primes = [2, 3, 5, 7, 11, 13, 97, 101]
    composites = [0, 1, 4, 6, 9, 15, 91, 100]
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(c) for c in composites)


def test_prime_field_rejects_composite_modulus():
    with pytest.raises(UnsupportedField):
        PrimeField(6)


def test_parse_field_spec():
    assert parse_field_spec("q") == Q
    assert parse_field_spec("fp:7") == PrimeField(7)
    with pytest.raises(UnsupportedField):
        parse_field_spec("gf:8")


@pytest.mark.parametrize("field", [Q, F5, PrimeField(7)])
def test_field_axioms_on_seeded_triples(field):
    """Ring and inverse laws on 10^4 seeded triples per field."""
    rng = random.Random(42)

    def sample():
        if isinstance(field, PrimeField):
            return rng.randrange(field.p)
        return field.parse(f"{rng.randint(-9, 9)}/{rng.randint(1, 9)}")

    for _ in range(10_000):
        a, b, c = sample(), sample(), sample()
        assert field.add(a, b) == field.add(b, a)
        assert field.mul(a, b) == field.mul(b, a)
        assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
        assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
        assert field.mul(a, field.add(b, c)) == field.add(
            field.mul(a, b), field.mul(a, c)
        )
        assert field.add(a, field.neg(a)) == field.zero
        if not field.is_zero(a):
            assert field.mul(a, field.inv(a)) == field.one


@pytest.mark.parametrize(
    "token,expected",
    [("3/4", "3/4"), ("-2", "-2"), ("6/4", "3/2"), ("0", "0")],
)
def test_rational_parse_serialize_roundtrip(token, expected):
    assert Q.serialize(Q.parse(token)) == expected


def test_prime_field_parse_serialize():
    assert F5.serialize(F5.parse("fp5:3")) == "fp5:3"
    assert F5.serialize(F5.parse("8")) == "fp5:3"
    with pytest.raises(FieldMismatch):
        F5.parse("fp7:3")


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        Q.inv(Q.zero)
    with pytest.raises(DivisionByZero):
        F5.inv(0)


def test_exact_scalar_boundary_ops():
    a = parse_scalar("3/4", Q)
    b = parse_scalar("1/4", Q)
    assert (a + b) == parse_scalar("1", Q)
    assert (a - b) == parse_scalar("1/2", Q)
    assert (a * b) == parse_scalar("3/16", Q)
    assert (a / b) == parse_scalar("3", Q)
    assert str(-a) == "-3/4"
    with pytest.raises(FieldMismatch):
        a + ExactScalar(F5, 3)


def test_power_negative_exponent():
    assert F5.power(2, -1) == 3
    assert Q.power(Q.from_int(2), -2) == Q.parse("1/4")


def test_root_of_unity_frozen_values():
    assert find_root_of_unity(F5, 4) == 2
    assert find_root_of_unity(F5, 3) is None
    assert find_root_of_unity(F5, 2) == 4
    assert find_root_of_unity(F5, 1) == 1
    assert find_root_of_unity(Q, 2) == Q.from_int(-1)
    assert find_root_of_unity(Q, 1) == Q.one
    with pytest.raises(UnsupportedField):
        find_root_of_unity(Q, 3)


def test_root_of_unity_orders_are_exact():
    f13 = PrimeField(13)
    for n in (1, 2, 3, 4, 6, 12):
        a = find_root_of_unity(f13, n)
        assert pow(a, n, 13) == 1
        for k in range(1, n):
            assert pow(a, k, 13) != 1
    assert find_root_of_unity(f13, 5) is None
