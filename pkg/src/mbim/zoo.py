"""Built-in example bimonoids, finite-dimensional and fully certified.

Three families: the function algebra of a finite abelian group, the
group algebra of a finite abelian group (both over Q with trivial
grading) and the truncated polynomial line over a prime field, graded
by the integers with a root-of-unity bicharacter.  Construction fails
loudly when a certificate or a vanishing condition does not hold, so
anything the registry hands out is safe to feed to the checkers.
"""

import itertools
import re
from functools import lru_cache

from .bimonoid import MultiplierBimonoidData
from .errors import NoRootOfUnity, QBinomialNonzero
from .gradings import GradingContext, IntegerGroup
from .linmaps import GradedObject, LinMap, Shape, unit_shape
from .scalars import PrimeField, Rationals, find_root_of_unity
from .semigroups import Semigroup
from .windowed import build_windowed_KZ

_GROUP_SPEC = re.compile(r"^Z(\d+)(?:xZ(\d+))*$")


class FiniteAbelianGroup:
    """Direct product of cyclic groups; elements are index tuples."""

    __slots__ = ("moduli",)

    def __init__(self, moduli):
        moduli = tuple(int(n) for n in moduli)
        if not moduli or any(n < 1 for n in moduli):
            raise ValueError(f"bad cyclic moduli {moduli}")
        self.moduli = moduli

    @property
    def order(self) -> int:
        total = 1
        for n in self.moduli:
            total *= n
        return total

    @property
    def identity(self):
        return (0,) * len(self.moduli)

    def elements(self):
        return list(itertools.product(*(range(n) for n in self.moduli)))

    def op(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def inv(self, a):
        return tuple((-x) % n for x, n in zip(a, self.moduli))


def parse_group_spec(spec: str) -> FiniteAbelianGroup:
    """\"Z2\" or \"Z2xZ3\" style products of cyclic groups."""
    if not _GROUP_SPEC.match(spec):
        raise ValueError(f"cannot parse group spec {spec!r}")
    moduli = [int(tok[1:]) for tok in spec.split("x")]
    return FiniteAbelianGroup(moduli)


def _element_labels(prefix, elements):
    def render(g):
        if len(g) == 1:
            return f"{prefix}{g[0]}"
        return prefix + ".".join(str(x) for x in g)
    return tuple(render(g) for g in elements)


def _trivially_graded(name, labels, field, ctx):
    degrees = (ctx.group.identity,) * len(labels)
    return GradedObject(name, field, ctx, labels, degrees)


def _finish(A, t1_entries, t2_entries, e_entries, name):
    sa = A.shape
    sq = sa.power(2)
    unit = unit_shape(A.field, A.context)
    t1 = LinMap.from_entries(sq, sq, t1_entries)
    t2 = LinMap.from_entries(sq, sq, t2_entries)
    e = LinMap.from_entries(sa, unit, e_entries)
    return MultiplierBimonoidData(A, t1, t2, e, name=name)


def build_group_function_algebra(spec: str) -> MultiplierBimonoidData:
    """Functions on a finite abelian group under pointwise product.

    Delta basis, so the product keeps the diagonal and e evaluates at
    the identity; t1 and t2 shear one leg by the other.
    """
    G = parse_group_spec(spec)
    if G.order > 12:
        raise ValueError(f"group of order {G.order} is past the size cap")
    field = Rationals()
    ctx = GradingContext.trivial(field)
    elements = G.elements()
    index = {g: i for i, g in enumerate(elements)}
    labels = _element_labels("d", elements)
    carrier = _trivially_graded(f"functions({spec})", labels, field, ctx)
    one = field.one
    mult = [((i, i), (i,), one) for i in range(len(elements))]
    A = Semigroup(carrier, LinMap.from_entries(Shape((carrier,)).power(2), Shape((carrier,)), mult))
    t1, t2 = [], []
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            t1.append(((i, j), (index[G.op(g, G.inv(h))], j), one))
            t2.append(((i, j), (i, index[G.op(G.inv(g), h)]), one))
    e = [((index[G.identity],), (), one)]
    return _finish(A, t1, t2, e, f"fnalg:{spec}")


def build_group_algebra(spec: str) -> MultiplierBimonoidData:
    """Group algebra of a finite abelian group over Q.

    Basis indexed by group elements, product is the group law, e is
    identically one, t1 and t2 are the usual translation maps.
    """
    G = parse_group_spec(spec)
    if G.order > 12:
        raise ValueError(f"group of order {G.order} is past the size cap")
    field = Rationals()
    ctx = GradingContext.trivial(field)
    elements = G.elements()
    index = {g: i for i, g in enumerate(elements)}
    labels = _element_labels("g", elements)
    carrier = _trivially_graded(f"group({spec})", labels, field, ctx)
    one = field.one
    mult = [
        ((i, j), (index[G.op(g, h)],), one)
        for i, g in enumerate(elements)
        for j, h in enumerate(elements)
    ]
    A = Semigroup(carrier, LinMap.from_entries(Shape((carrier,)).power(2), Shape((carrier,)), mult))
    t1, t2 = [], []
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            gh = index[G.op(g, h)]
            t1.append(((i, j), (i, gh), one))
            t2.append(((i, j), (gh, j), one))
    e = [((i,), (), one) for i in range(len(elements))]
    return _finish(A, t1, t2, e, f"grpalg:{spec}")


def qbinomial(n: int, k: int, field, q):
    """Gaussian binomial via the twisted Pascal recursion."""
    if k < 0 or k > n:
        return field.zero
    row = [field.one]
    for m in range(1, n + 1):
        nxt = [field.one]
        for j in range(1, m):
            nxt.append(field.add(row[j - 1], field.mul(field.power(q, j), row[j])))
        nxt.append(field.one)
        row = nxt
    return row[k]


def build_q_line(p: int, N: int) -> MultiplierBimonoidData:
    """Truncated polynomial line F_p[x]/(x^N) with x in degree one.

    Braided by q^(degree product) for q of exact order N; the q-Pascal
    triangle must vanish at (N, k) for 0 < k < N or the translation
    maps would leak past the truncation, so that is demanded up front.
    """
    if N < 1:
        raise ValueError("need a positive truncation order")
    field = PrimeField(p)
    q = field.one if N == 1 else find_root_of_unity(field, N)
    if q is None:
        raise NoRootOfUnity(f"F_{p} has no element of exact order {N}")
    for k in range(1, N):
        v = qbinomial(N, k, field, q)
        if not field.is_zero(v):
            raise QBinomialNonzero(
                f"({N} choose {k})_q = {field.serialize(v)} in F_{p}, expected 0"
            )
    grp = IntegerGroup()
    ctx = GradingContext.power(grp, field, q)
    labels = tuple(f"x{k}" for k in range(N))
    carrier = GradedObject(f"qline({p},{N})", field, ctx, labels, tuple(range(N)))
    one = field.one
    mult = [
        ((s, t), (s + t,), one)
        for s in range(N)
        for t in range(N)
        if s + t < N
    ]
    A = Semigroup(carrier, LinMap.from_entries(Shape((carrier,)).power(2), Shape((carrier,)), mult))
    t1, t2 = [], []
    for s in range(N):
        for t in range(N):
            for j in range(s + 1):
                if s - j + t < N:
                    v = qbinomial(s, j, field, q)
                    if not field.is_zero(v):
                        t1.append(((s, t), (j, s - j + t), v))
            for j in range(t + 1):
                if s + j < N:
                    v = qbinomial(t, j, field, q)
                    if not field.is_zero(v):
                        t2.append(((s, t), (s + j, t - j), v))
    e = [((0,), (), one)]
    return _finish(A, t1, t2, e, f"qline:{p}:{N}")


_BUILDERS = {
    "fnalg:Z2": lambda: build_group_function_algebra("Z2"),
    "fnalg:Z3": lambda: build_group_function_algebra("Z3"),
    "grpalg:Z2": lambda: build_group_algebra("Z2"),
    "qline:5:4": lambda: build_q_line(5, 4),
    "kz:W8": lambda: build_windowed_KZ(8),
}


def list_examples():
    return tuple(_BUILDERS)


@lru_cache(maxsize=None)
def build_example(name: str) -> MultiplierBimonoidData:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        known = ", ".join(list_examples())
        raise ValueError(f"unknown example {name!r}; known: {known}") from None
    return builder()
