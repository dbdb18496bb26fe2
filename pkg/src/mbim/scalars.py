"""Exact scalar arithmetic over the two coefficient fields.

Rationals are arbitrary-precision reduced fractions (gmpy2.mpq when
available, fractions.Fraction otherwise); prime fields store residues as
small ints in [0, p).  There is no floating point anywhere: every
comparison downstream is an exact equality of these payloads.

Internal code works on raw payloads next to a Field object; ExactScalar
wraps a payload only at API boundaries (parsers, CLI, reports).
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DivisionByZero, FieldMismatch, UnsupportedField

try:
    from gmpy2 import mpq as _frac
except ImportError:  # pragma: no cover - gmpy2 is an install dependency
    from fractions import Fraction as _frac


def is_prime(n: int) -> bool:
    """Trial division; moduli here are desk-scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Arithmetic on raw payloads plus parsing and serialization."""

    name: str = "?"

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, n: int):
        if n < 0:
            return self.power(self.inv(a), -n)
        out = self.one
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def is_zero(self, a) -> bool:
        return a == self.zero

    def from_int(self, n: int):
        raise NotImplementedError

    def parse(self, token: str):
        raise NotImplementedError

    def serialize(self, a) -> str:
        raise NotImplementedError

    def elements(self):
        raise UnsupportedField(f"{self!r} is not enumerable")


class Rationals(Field):
    name = "q"
    zero = _frac(0)
    one = _frac(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("1/0 in Q")
        return 1 / a

    def from_int(self, n):
        return _frac(n)

    def parse(self, token):
        token = token.strip()
        try:
            if "/" in token:
                num, den = token.split("/")
                den_i = int(den)
                if den_i == 0:
                    raise DivisionByZero("zero denominator")
                return _frac(int(num), den_i)
            return _frac(int(token))
        except ValueError:
            raise ValueError(f"bad rational scalar {token!r}") from None

    def serialize(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("q")

    def __repr__(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise UnsupportedField(f"modulus {p} is not prime")
        self.p = p
        self.name = f"fp:{p}"
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"1/0 in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n):
        return n % self.p

    def parse(self, token):
        token = token.strip()
        if token.startswith("fp"):
            head, _, tail = token.partition(":")
            if int(head[2:]) != self.p:
                raise FieldMismatch(f"scalar {token!r} is not in F_{self.p}")
            return int(tail) % self.p
        return int(token) % self.p

    def serialize(self, a):
        return f"fp{self.p}:{a % self.p}"

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"F{self.p}"


def parse_field_spec(spec: str) -> Field:
    spec = spec.strip()
    if spec == "q":
        return Rationals()
    if spec.startswith("fp:"):
        return PrimeField(int(spec[3:]))
    raise UnsupportedField(f"unknown field spec {spec!r}")


@dataclass(frozen=True)
class ExactScalar:
    """Boundary wrapper pairing a payload with its field.

    Mixed-field arithmetic raises FieldMismatch instead of silently
    coercing; internal hot paths never build these.
    """

    field: Field
    value: object

    def _peer(self, other: "ExactScalar"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other.value

    def __add__(self, other):
        return ExactScalar(self.field, self.field.add(self.value, self._peer(other)))

    def __sub__(self, other):
        return ExactScalar(self.field, self.field.sub(self.value, self._peer(other)))

    def __mul__(self, other):
        return ExactScalar(self.field, self.field.mul(self.value, self._peer(other)))

    def __truediv__(self, other):
        return ExactScalar(self.field, self.field.div(self.value, self._peer(other)))

    def __neg__(self):
        return ExactScalar(self.field, self.field.neg(self.value))

    def inv(self):
        return ExactScalar(self.field, self.field.inv(self.value))

    def is_zero(self):
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.field == other.field and self.value == other.value

    def __str__(self):
        return self.field.serialize(self.value)


def parse_scalar(token: str, field: Field) -> ExactScalar:
    return ExactScalar(field, field.parse(token))


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def find_root_of_unity(field: Field, n: int):
    """Smallest element of exact multiplicative order n, or None.

    Over Q only n = 1, 2 are realizable; larger orders raise
    UnsupportedField (cyclotomic extensions are out of scope).  Over F_p
    an order-n element exists iff n divides p - 1.
    """
    if n <= 0:
        raise ValueError("order must be positive")
    if isinstance(field, Rationals):
        if n == 1:
            return field.one
        if n == 2:
            return field.from_int(-1)
        raise UnsupportedField(f"Q has no elements of order {n}")
    assert isinstance(field, PrimeField)
    p = field.p
    if (p - 1) % n != 0:
        return None
    checks = [n // q for q in _prime_factors(n)]
    for a in range(1, p):
        if pow(a, n, p) != 1:
            continue
        if all(pow(a, c, p) != 1 for c in checks):
            return a
    return None
