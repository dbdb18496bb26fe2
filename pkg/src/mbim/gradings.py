"""Grading groups and bicharacters.

Degrees live in a small abelian group: the one-element group, Z/n, or Z.
A bicharacter assigns each pair of degrees an invertible scalar,
multiplicative in both slots; crossing two homogeneous factors in the
braiding multiplies by that scalar.  All built-in bicharacters are power
laws b(g, h) = q^(g*h), the trivial one being q = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedField
from .scalars import Field


class GradingGroup:
    name: str = "?"

    @property
    def identity(self):
        raise NotImplementedError

    def add(self, g, h):
        raise NotImplementedError

    def neg(self, g):
        raise NotImplementedError

    def parse(self, token: str):
        raise NotImplementedError

    def serialize(self, g) -> str:
        return str(g)

    def sum(self, elements):
        total = self.identity
        for g in elements:
            total = self.add(total, g)
        return total


class TrivialGroup(GradingGroup):
    name = "trivial"

    @property
    def identity(self):
        return 0

    def add(self, g, h):
        return 0

    def neg(self, g):
        return 0

    def parse(self, token):
        if int(token) != 0:
            raise ValueError("trivial grading admits only degree 0")
        return 0

    def __eq__(self, other):
        return isinstance(other, TrivialGroup)

    def __hash__(self):
        return hash("trivial")


class CyclicGroup(GradingGroup):
    def __init__(self, n: int):
        if n < 1:
            raise ValueError("cyclic order must be >= 1")
        self.n = n
        self.name = f"cyclic:{n}"

    @property
    def identity(self):
        return 0

    def add(self, g, h):
        return (g + h) % self.n

    def neg(self, g):
        return (-g) % self.n

    def parse(self, token):
        return int(token) % self.n

    def __eq__(self, other):
        return isinstance(other, CyclicGroup) and other.n == self.n

    def __hash__(self):
        return hash(("cyclic", self.n))


class IntegerGroup(GradingGroup):
    name = "integers"

    @property
    def identity(self):
        return 0

    def add(self, g, h):
        return g + h

    def neg(self, g):
        return -g

    def parse(self, token):
        return int(token)

    def __eq__(self, other):
        return isinstance(other, IntegerGroup)

    def __hash__(self):
        return hash("integers")


def parse_grading_spec(spec: str) -> GradingGroup:
    spec = spec.strip()
    if spec == "trivial":
        return TrivialGroup()
    if spec.startswith("cyclic:"):
        return CyclicGroup(int(spec[7:]))
    if spec == "integers":
        return IntegerGroup()
    raise ValueError(f"unknown grading spec {spec!r}")


class Bicharacter:
    """Power-law bicharacter b(g, h) = q^(g*h) on integer-represented degrees.

    q = None means the trivial bicharacter.  On Z/n the law is well defined
    only when q^n = 1; the constructor enforces that.
    """

    def __init__(self, group: GradingGroup, field: Field, q=None):
        self.group = group
        self.field = field
        if q is not None and field.is_zero(q):
            raise ValueError("bicharacter base must be invertible")
        if q == field.one:
            q = None
        if q is not None and isinstance(group, CyclicGroup):
            if field.power(q, group.n) != field.one:
                raise UnsupportedField(
                    f"q^{group.n} != 1, power bicharacter ill-defined on Z/{group.n}"
                )
        self.q = q

    def value(self, g, h):
        if self.q is None:
            return self.field.one
        return self.field.power(self.q, g * h)

    def value_inv(self, g, h):
        if self.q is None:
            return self.field.one
        return self.field.power(self.q, -(g * h))

    def is_trivial(self):
        return self.q is None

    def __eq__(self, other):
        return (
            isinstance(other, Bicharacter)
            and other.group == self.group
            and other.field == self.field
            and other.q == self.q
        )

    def __hash__(self):
        return hash((self.group, self.field, self.q))


@dataclass(frozen=True)
class GradingContext:
    """The pair (grading group, bicharacter) every graded object carries."""

    group: GradingGroup
    bichar: Bicharacter

    @staticmethod
    def trivial(field: Field) -> "GradingContext":
        grp = TrivialGroup()
        return GradingContext(grp, Bicharacter(grp, field))

    @staticmethod
    def power(group: GradingGroup, field: Field, q) -> "GradingContext":
        return GradingContext(group, Bicharacter(group, field, q))
