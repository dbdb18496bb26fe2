"""Multiplier bimonoid data and the equation battery that certifies it.

The data of interest is a certified semigroup together with two
endomorphisms of its square and an augmentation to the tensor unit.
Everything here is decided by exact linear algebra on finite bases;
a report line either passes or carries the first basis tuple where
the two sides of its equation differ.
"""

from dataclasses import dataclass, field as dc_field
from functools import reduce

from .errors import CertificateFailure, ShapeMismatch
from .linmaps import LinMap, Shape, braiding, compose, tensor_map, unit_shape
from .semigroups import Semigroup, check_in_Q
from . import formats


def tensor_chain(*maps):
    """Tensor of several maps, left to right."""
    return reduce(tensor_map, maps)


@dataclass
class MultiplierBimonoidData:
    """A candidate (base, t1, t2, e); no axiom is assumed to hold.

    t1 and t2 act on base^2, e lands in the tensor unit.  The base
    must carry full certificates (associativity, non-degeneracy and
    surjective multiplication) since every downstream argument leans
    on them.
    """

    base: Semigroup
    t1: LinMap
    t2: LinMap
    e: LinMap
    name: str = ""
    _cache: dict = dc_field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        sa = self.base.shape
        sq = sa.power(2)
        for tag, f in (("t1", self.t1), ("t2", self.t2)):
            if f.src != sq or f.dst != sq:
                raise ShapeMismatch(f"{tag} must be an endomap of the square")
        if self.e.src != sa or not self.e.dst.is_unit():
            raise ShapeMismatch("e must map the base to the tensor unit")
        if not self.base.certificates.all_true:
            raise CertificateFailure(
                f"base {self.base.name} is missing a certificate"
            )
        if not self.name:
            self.name = self.base.name

    def derived(self):
        """The comultiplication components induced by (t1, t2)."""
        if "derived" not in self._cache:
            self._cache["derived"] = derive_comultiplication(
                self.t1, self.t2, self.base
            )
        return self._cache["derived"]


def derive_comultiplication(t1: LinMap, t2: LinMap, A: Semigroup):
    """Fold t1 and t2 with the multiplication into maps cube -> square.

    d1 = (m ox 1)(1 ox c)(t1 ox 1)(1 ox c^-1)
    d2 = (1 ox m)(c ox 1)(1 ox t2)(c^-1 ox 1)
    """
    sa = A.shape
    sq = sa.power(2)
    if t1.src != sq or t1.dst != sq or t2.src != sq or t2.dst != sq:
        raise ShapeMismatch("t1 and t2 must be endomaps of the square")
    one = LinMap.identity(sa)
    c = braiding(sa, sa)
    cinv = braiding(sa, sa, inverse=True)
    m = A.mult
    d1 = compose(
        tensor_chain(m, one),
        tensor_chain(one, c),
        tensor_chain(t1, one),
        tensor_chain(one, cinv),
    )
    d2 = compose(
        tensor_chain(one, m),
        tensor_chain(c, one),
        tensor_chain(one, t2),
        tensor_chain(cinv, one),
    )
    return d1, d2


@dataclass(frozen=True)
class CheckLine:
    """One verified statement: a tag, a boolean, and on failure the
    first basis tuple (rendered with labels) where it broke."""

    tag: str
    passed: bool
    witness: str | None = None

    def render(self) -> str:
        if self.passed:
            return f"{self.tag} PASS"
        if self.witness is None:
            return f"{self.tag} FAIL"
        return f"{self.tag} FAIL at {self.witness}"


@dataclass
class AxiomReport:
    lines: list
    conclusion: bool

    def line(self, tag: str) -> CheckLine:
        for ln in self.lines:
            if ln.tag == tag:
                return ln
        raise KeyError(f"no line tagged {tag}")

    def passed(self, tag: str) -> bool:
        return self.line(tag).passed

    def failed_tags(self):
        return tuple(ln.tag for ln in self.lines if not ln.passed)

    def render(self) -> str:
        return "\n".join(ln.render() for ln in self.lines)


def render_witness(shape: Shape, t) -> str:
    return shape.label(t)


def _eq_line(tag, lhs, rhs) -> CheckLine:
    w = lhs.first_difference(rhs)
    if w is None:
        return CheckLine(tag, True)
    return CheckLine(tag, False, render_witness(lhs.src, w))


def _q_line(tag, f) -> CheckLine:
    # no witness: failure here is rank deficiency, not a basis tuple
    return CheckLine(tag, check_in_Q(f))


# Exhaustive report order.  5.6 is deliberately absent: it is the
# mirror of 5.5 and carries no independent information.
EQUATION_TAGS = (
    "EQ(5.1)", "EQ(5.2)", "EQ(5.3)", "EQ(5.4)", "EQ(5.5)",
    "EQ(5.7)", "EQ(5.8)", "EQ(5.9)", "EQ(5.10)",
    "EQ(5.13)", "EQ(5.14)", "EQ(5.15)",
    "Q(e)", "Q(d1)", "Q(d2)",
)

# The axioms proper: the conjunction defining a multiplier bimonoid
# whose counit and comultiplication land in the surjection class.
BIMONOID_TAGS = (
    "EQ(5.1)", "EQ(5.7)", "EQ(5.9)", "EQ(5.13)", "EQ(5.14)",
    "Q(e)", "Q(d1)", "Q(d2)",
)

# Cheap first: single-output equations on the square, then the cube
# equations, then the rank computations on derived maps.
_SHORT_CIRCUIT_ORDER = (
    "EQ(5.7)", "EQ(5.9)", "EQ(5.1)", "Q(e)",
    "EQ(5.14)", "EQ(5.13)", "Q(d1)", "Q(d2)",
)


def equation_thunks(data: MultiplierBimonoidData):
    """Tag -> lazy evaluator.  Nothing is composed until forced."""
    A = data.base
    sa = A.shape
    m = A.mult
    one = LinMap.identity(sa)
    c = braiding(sa, sa)
    cinv = braiding(sa, sa, inverse=True)
    t1, t2, e = data.t1, data.t2, data.e

    def eq_5_1():
        return _eq_line("EQ(5.1)", compose(e, m), tensor_chain(e, e))

    def eq_5_2():
        lhs = compose(tensor_chain(m, one), tensor_chain(one, t1))
        rhs = compose(tensor_chain(one, m), tensor_chain(t2, one))
        return _eq_line("EQ(5.2)", lhs, rhs)

    def eq_5_3():
        d1, _ = data.derived()
        lhs = compose(d1, tensor_chain(one, d1))
        rhs = compose(d1, tensor_chain(m, one, one))
        return _eq_line("EQ(5.3)", lhs, rhs)

    def eq_5_4():
        lhs = compose(
            tensor_chain(m, one),
            tensor_chain(cinv, one),
            tensor_chain(one, t1),
            tensor_chain(c, one),
            tensor_chain(one, t1),
        )
        rhs = compose(t1, tensor_chain(m, one))
        return _eq_line("EQ(5.4)", lhs, rhs)

    def eq_5_5():
        lhs = compose(t1, tensor_chain(one, m))
        rhs = compose(tensor_chain(one, m), tensor_chain(t1, one))
        return _eq_line("EQ(5.5)", lhs, rhs)

    def eq_5_7():
        return _eq_line("EQ(5.7)", compose(tensor_chain(e, one), t1), m)

    def eq_5_8():
        eo = tensor_chain(e, one)
        return _eq_line("EQ(5.8)", compose(eo, t2), eo)

    def eq_5_9():
        return _eq_line("EQ(5.9)", compose(tensor_chain(one, e), t2), m)

    def eq_5_10():
        oe = tensor_chain(one, e)
        return _eq_line("EQ(5.10)", compose(oe, t1), oe)

    def eq_5_13():
        lhs = compose(
            tensor_chain(t1, one),
            tensor_chain(one, c),
            tensor_chain(t1, one),
            tensor_chain(one, cinv),
            tensor_chain(one, t1),
        )
        rhs = compose(tensor_chain(one, t1), tensor_chain(t1, one))
        return _eq_line("EQ(5.13)", lhs, rhs)

    def eq_5_14():
        lhs = compose(tensor_chain(t2, one), tensor_chain(one, t1))
        rhs = compose(tensor_chain(one, t1), tensor_chain(t2, one))
        return _eq_line("EQ(5.14)", lhs, rhs)

    def eq_5_15():
        d1, _ = data.derived()
        lhs = compose(
            tensor_chain(t1, one),
            tensor_chain(cinv, one),
            tensor_chain(one, t1),
            tensor_chain(c, one),
            tensor_chain(one, d1),
        )
        rhs = compose(tensor_chain(one, d1), tensor_chain(t1, one, one))
        return _eq_line("EQ(5.15)", lhs, rhs)

    def q_e():
        return _q_line("Q(e)", e)

    def q_d1():
        return _q_line("Q(d1)", data.derived()[0])

    def q_d2():
        return _q_line("Q(d2)", data.derived()[1])

    return {
        "EQ(5.1)": eq_5_1,
        "EQ(5.2)": eq_5_2,
        "EQ(5.3)": eq_5_3,
        "EQ(5.4)": eq_5_4,
        "EQ(5.5)": eq_5_5,
        "EQ(5.7)": eq_5_7,
        "EQ(5.8)": eq_5_8,
        "EQ(5.9)": eq_5_9,
        "EQ(5.10)": eq_5_10,
        "EQ(5.13)": eq_5_13,
        "EQ(5.14)": eq_5_14,
        "EQ(5.15)": eq_5_15,
        "Q(e)": q_e,
        "Q(d1)": q_d1,
        "Q(d2)": q_d2,
    }


def check_bimonoid_axioms(data: MultiplierBimonoidData, exhaustive: bool = True) -> AxiomReport:
    """Evaluate the battery.

    Exhaustive mode reports every registered equation in canonical
    order and concludes from the defining subset.  Otherwise the
    defining subset is run cheapest first and evaluation stops at the
    first failure, which is what the mutation campaign lives on.
    """
    thunks = equation_thunks(data)
    lines = []
    if exhaustive:
        for tag in EQUATION_TAGS:
            lines.append(thunks[tag]())
        by_tag = {ln.tag: ln for ln in lines}
        conclusion = all(by_tag[tag].passed for tag in BIMONOID_TAGS)
        return AxiomReport(lines, conclusion)
    for tag in _SHORT_CIRCUIT_ORDER:
        ln = thunks[tag]()
        lines.append(ln)
        if not ln.passed:
            return AxiomReport(lines, False)
    return AxiomReport(lines, True)


def bimonoid_from_doc(doc: formats.BimonoidDoc) -> MultiplierBimonoidData:
    """Assemble checked data from a parsed document."""
    A = formats.build_semigroup(doc.algebra)
    sq = A.shape.power(2)
    unit = unit_shape(A.field, A.context)
    t1 = LinMap.from_entries(sq, sq, doc.t1_entries)
    t2 = LinMap.from_entries(sq, sq, doc.t2_entries)
    e = LinMap.from_entries(A.shape, unit, doc.e_entries)
    return MultiplierBimonoidData(A, t1, t2, e, name=doc.algebra.name)
