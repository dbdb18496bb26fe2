"""Graded objects, tensor shapes, and degree-preserving sparse maps.

A Shape is a finite list of graded-object factors over one field and one
grading context; its basis is the set of index tuples, ordered
lexicographically.  The empty shape is the monoidal unit: one basis
tuple (), degree = group identity.  Maps are stored column-wise and drop
zero entries at construction; every stored entry must preserve degree,
which is what keeps all downstream algebra inside the graded category.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import kernels
from .errors import FieldMismatch, ShapeMismatch
from .gradings import GradingContext
from .scalars import Field, PrimeField


@dataclass(frozen=True)
class GradedObject:
    name: str
    field: Field
    context: GradingContext
    labels: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.degrees):
            raise ShapeMismatch("labels and degrees must align")
        if len(set(self.labels)) != len(self.labels):
            raise ShapeMismatch("duplicate basis labels")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no basis label {label!r} in {self.name}") from None


class Shape:
    __slots__ = ("factors", "field", "context")

    def __init__(self, factors, field=None, context=None):
        factors = tuple(factors)
        if factors:
            field = factors[0].field
            context = factors[0].context
            for f in factors[1:]:
                if f.field != field:
                    raise FieldMismatch("mixed fields in one shape")
                if f.context != context:
                    raise ShapeMismatch("mixed grading contexts in one shape")
        else:
            if field is None or context is None:
                raise ShapeMismatch("empty shape needs explicit field and context")
        self.factors = factors
        self.field = field
        self.context = context

    def __mul__(self, other: "Shape") -> "Shape":
        if self.field != other.field:
            raise FieldMismatch("tensor of shapes over different fields")
        if self.context != other.context:
            raise ShapeMismatch("tensor of shapes over different gradings")
        return Shape(self.factors + other.factors, self.field, self.context)

    def power(self, k: int) -> "Shape":
        return Shape(self.factors * k, self.field, self.context)

    @property
    def arity(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        d = 1
        for f in self.factors:
            d *= f.dim
        return d

    def basis(self):
        return itertools.product(*(range(f.dim) for f in self.factors))

    def degree(self, t):
        grp = self.context.group
        return grp.sum(f.degrees[i] for f, i in zip(self.factors, t))

    def label(self, t) -> str:
        return "(" + ",".join(f.labels[i] for f, i in zip(self.factors, t)) + ")"

    def is_unit(self) -> bool:
        return not self.factors

    def __eq__(self, other):
        return (
            isinstance(other, Shape)
            and self.factors == other.factors
            and self.field == other.field
            and self.context == other.context
        )

    def __hash__(self):
        return hash((self.factors, self.field, self.context))

    def __repr__(self):
        if not self.factors:
            return "I"
        return "*".join(f.name for f in self.factors)


def unit_shape(field: Field, context: GradingContext) -> Shape:
    return Shape((), field, context)


class LinMap:
    """Sparse degree-preserving linear map between two shapes.

    cols[in_tuple] = {out_tuple: payload}; zero entries never stored;
    keys kept sorted so iteration order, and hence every report built
    from it, is deterministic.
    """

    __slots__ = ("src", "dst", "field", "cols")

    def __init__(self, src: Shape, dst: Shape, cols, *, _normalized=False):
        if src.field != dst.field:
            raise FieldMismatch("source and target field differ")
        if src.context != dst.context:
            raise ShapeMismatch("source and target grading differ")
        self.src = src
        self.dst = dst
        self.field = src.field
        if _normalized:
            self.cols = cols
            return
        field = self.field
        dims_in = tuple(f.dim for f in src.factors)
        dims_out = tuple(f.dim for f in dst.factors)
        clean = {}
        for cin in sorted(cols):
            if len(cin) != len(dims_in) or any(
                not 0 <= i < d for i, d in zip(cin, dims_in)
            ):
                raise ShapeMismatch(f"input tuple {cin} outside source shape")
            din = src.degree(cin)
            col = {}
            for cout in sorted(cols[cin]):
                v = cols[cin][cout]
                if isinstance(field, PrimeField):
                    v = v % field.p
                if field.is_zero(v):
                    continue
                if len(cout) != len(dims_out) or any(
                    not 0 <= i < d for i, d in zip(cout, dims_out)
                ):
                    raise ShapeMismatch(f"output tuple {cout} outside target shape")
                if dst.degree(cout) != din:
                    raise ShapeMismatch(
                        f"degree-mixing entry {cin} -> {cout}"
                    )
                col[cout] = v
            if col:
                clean[cin] = col
        self.cols = clean

    @classmethod
    def identity(cls, shape: Shape) -> "LinMap":
        if hasattr(shape, "windowed_identity"):
            return shape.windowed_identity()
        one = shape.field.one
        return cls(
            shape, shape, {t: {t: one} for t in shape.basis()}, _normalized=True
        )

    @classmethod
    def zero(cls, src: Shape, dst: Shape) -> "LinMap":
        return cls(src, dst, {}, _normalized=True)

    @classmethod
    def from_entries(cls, src: Shape, dst: Shape, entries) -> "LinMap":
        cols = {}
        for cin, cout, v in entries:
            cols.setdefault(tuple(cin), {})[tuple(cout)] = v
        return cls(src, dst, cols)

    def compose(self, other: "LinMap") -> "LinMap":
        """self o other (apply other first)."""
        if other.dst != self.src:
            raise ShapeMismatch(f"cannot compose {self.src!r} after {other.dst!r}")
        field = self.field
        if isinstance(field, PrimeField):
            cols = kernels.compose_cols_mod(self.cols, other.cols, field.p)
        else:
            cols = kernels.compose_cols_obj(self.cols, other.cols)
        cols = {cin: dict(sorted(cols[cin].items())) for cin in sorted(cols)}
        return LinMap(other.src, self.dst, cols, _normalized=True)

    def tensor(self, other: "LinMap") -> "LinMap":
        if self.field != other.field:
            raise FieldMismatch("tensor over different fields")
        mul = self.field.mul
        cols = {}
        for cin1, col1 in self.cols.items():
            for cin2, col2 in other.cols.items():
                col = {}
                for cout1, v1 in col1.items():
                    for cout2, v2 in col2.items():
                        col[cout1 + cout2] = mul(v1, v2)
                cols[cin1 + cin2] = dict(sorted(col.items()))
        cols = dict(sorted(cols.items()))
        return LinMap(
            self.src * other.src, self.dst * other.dst, cols, _normalized=True
        )

    def add(self, other: "LinMap") -> "LinMap":
        if other.src != self.src or other.dst != self.dst:
            raise ShapeMismatch("sum of maps with different shapes")
        field = self.field
        cols = {cin: dict(col) for cin, col in self.cols.items()}
        for cin, col in other.cols.items():
            acc = cols.setdefault(cin, {})
            for cout, v in col.items():
                w = field.add(acc.get(cout, field.zero), v)
                if field.is_zero(w):
                    acc.pop(cout, None)
                else:
                    acc[cout] = w
            if not acc:
                del cols[cin]
        cols = {cin: dict(sorted(cols[cin].items())) for cin in sorted(cols)}
        return LinMap(self.src, self.dst, cols, _normalized=True)

    def scale(self, c) -> "LinMap":
        field = self.field
        if field.is_zero(c):
            return LinMap.zero(self.src, self.dst)
        cols = {
            cin: {cout: field.mul(c, v) for cout, v in col.items()}
            for cin, col in self.cols.items()
        }
        return LinMap(self.src, self.dst, cols, _normalized=True)

    def apply(self, t) -> dict:
        """Image of the basis vector indexed by t, as {out_tuple: payload}."""
        return dict(self.cols.get(tuple(t), {}))

    def entry(self, cin, cout):
        return self.cols.get(tuple(cin), {}).get(tuple(cout), self.field.zero)

    def with_entry(self, cin, cout, v) -> "LinMap":
        cols = {k: dict(c) for k, c in self.cols.items()}
        cols.setdefault(tuple(cin), {})[tuple(cout)] = v
        return LinMap(self.src, self.dst, cols)

    def entries(self):
        for cin, col in self.cols.items():
            for cout, v in col.items():
                yield cin, cout, v

    def is_zero(self) -> bool:
        return not self.cols

    def equal(self, other: "LinMap") -> bool:
        return self.first_difference(other) is None

    def first_difference(self, other: "LinMap"):
        """Lexicographically first input tuple where the two maps differ."""
        if other.src != self.src or other.dst != self.dst:
            raise ShapeMismatch("comparing maps with different shapes")
        for cin in sorted(set(self.cols) | set(other.cols)):
            if self.cols.get(cin, {}) != other.cols.get(cin, {}):
                return cin
        return None

    def __repr__(self):
        return f"LinMap({self.src!r} -> {self.dst!r}, {len(self.cols)} cols)"


def tensor_map(f: LinMap, g: LinMap) -> LinMap:
    return f.tensor(g)


def compose(*maps: LinMap) -> LinMap:
    """Composite in mathematical order: compose(f, g, h) = f o g o h."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = m.compose(out)
    return out


def maps_equal(f: LinMap, g: LinMap):
    """(equal?, witness) where witness is the first differing input tuple."""
    w = f.first_difference(g)
    return w is None, w


def braiding(x: Shape, y: Shape, inverse: bool = False) -> LinMap:
    """The braiding c: X*Y -> Y*X, or its inverse Y*X -> X*Y.

    On basis tuples c(a, b) = beta(deg a, deg b) (b, a); with the trivial
    bicharacter this is the plain swap.  Block degrees add up, so a
    multi-factor block braids with the product of its factor degrees'
    values, matching the hexagon identities (tested, not assumed).
    """
    if hasattr(x, "windowed_swap"):
        return x.windowed_swap(y, inverse)
    if x.field != y.field or x.context != y.context:
        raise ShapeMismatch("braiding needs one field and one grading")
    bichar = x.context.bichar
    cols = {}
    if not inverse:
        src, dst = x * y, y * x
        for ta in x.basis():
            da = x.degree(ta)
            for tb in y.basis():
                coeff = bichar.value(da, y.degree(tb))
                cols[ta + tb] = {tb + ta: coeff}
    else:
        src, dst = y * x, x * y
        for tb in y.basis():
            db = y.degree(tb)
            for ta in x.basis():
                coeff = bichar.value_inv(x.degree(ta), db)
                cols[tb + ta] = {ta + tb: coeff}
    cols = dict(sorted(cols.items()))
    return LinMap(src, dst, cols, _normalized=True)
