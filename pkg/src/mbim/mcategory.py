"""Two-component morphisms into a non-degenerate semigroup.

A morphism A -> B here is a pair (f1: A@B -> B, f2: B@A -> B) tied
together by the target's multiplication.  Composition is not defined by
a formula: the composite's first component is solved along a section of
g1 and then verified against its defining equation, turning the
uniqueness argument into a runtime assertion.  All flags are recomputed
from scratch on every certify; nothing is inherited on trust.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import solve
from .errors import (
    CertificateFailure,
    NotInverse,
    NotMultiplicative,
    ShapeMismatch,
    SolveInconsistent,
    UnsupportedField,
)
from .linmaps import GradedObject, LinMap, Shape, compose, maps_equal, tensor_map
from .semigroups import Semigroup, unit_semigroup


@dataclass(frozen=True)
class MorphismFlags:
    compatible: bool
    multiplicative: object  # True/False, or None when the source is bare
    dense: bool

    @property
    def arrow_in_category(self) -> bool:
        return self.compatible and self.multiplicative is True and self.dense


def source_shape(source) -> Shape:
    # anything carrying a shape and a multiplication quacks enough:
    # finite semigroups and windowed carriers both land here
    if hasattr(source, "mult") and hasattr(source, "shape"):
        return source.shape
    if isinstance(source, GradedObject):
        return Shape((source,))
    raise ShapeMismatch(f"bad morphism source {source!r}")


def source_mult(source):
    return getattr(source, "mult", None)


class MMorphism:
    __slots__ = ("source", "target", "f1", "f2", "flags")

    def __init__(self, source, target: Semigroup, f1: LinMap, f2: LinMap, flags=None):
        a = source_shape(source)
        b = target.shape
        if f1.src != a * b or f1.dst != b:
            raise ShapeMismatch("first component must map source@target to target")
        if f2.src != b * a or f2.dst != b:
            raise ShapeMismatch("second component must map target@source to target")
        self.source = source
        self.target = target
        self.f1 = f1
        self.f2 = f2
        self.flags = flags

    @property
    def src_shape(self) -> Shape:
        return source_shape(self.source)

    def __repr__(self):
        src = getattr(self.source, "name", "?")
        return f"MMorphism({src} -> {self.target.name}, flags={self.flags})"


def certify(f: MMorphism) -> MMorphism:
    """Recompute all flags; returns a new value, never mutates.

    The target must be a certified associative non-degenerate
    semigroup: the consistency assertions below lean on exactly those
    two facts, so they are demanded up front.
    """
    tgt = f.target
    if not (tgt.certificates.associative and tgt.certificates.nondegenerate):
        raise CertificateFailure(
            f"target {tgt.name} must be certified associative and non-degenerate"
        )
    a, b = f.src_shape, tgt.shape
    m = tgt.mult
    ib = LinMap.identity(b)
    ia = LinMap.identity(a)

    lhs = compose(m, tensor_map(ib, f.f1))
    rhs = compose(m, tensor_map(f.f2, ib))
    compatible = lhs.equal(rhs)

    ma = source_mult(f.source)
    if ma is None:
        multiplicative = None
    else:
        d1 = compose(f.f1, tensor_map(ma, ib)).equal(
            compose(f.f1, tensor_map(ia, f.f1))
        )
        d2 = compose(f.f2, tensor_map(ib, ma)).equal(
            compose(f.f2, tensor_map(f.f2, ia))
        )
        # with a compatible pair over a non-degenerate target, each
        # multiplicativity square implies the other; disagreement means
        # the engine (not the data) is broken
        if compatible and d1 != d2:
            raise CertificateFailure(
                "multiplicativity squares disagree on a compatible pair"
            )
        multiplicative = d1 and d2

    dense = solve.is_surjective(f.f1) and solve.is_surjective(f.f2)

    if compatible:
        _assert_module_maps(f, m, ia, ib)

    flags = MorphismFlags(compatible, multiplicative, dense)
    return MMorphism(f.source, f.target, f.f1, f.f2, flags)


def _assert_module_maps(f: MMorphism, m, ia, ib):
    """A compatible pair must interact with the target's multiplication
    like a pair of module maps; failure here indicts the engine."""
    ok1 = compose(f.f1, tensor_map(ia, m)).equal(compose(m, tensor_map(f.f1, ib)))
    ok2 = compose(f.f2, tensor_map(m, ia)).equal(compose(m, tensor_map(ib, f.f2)))
    if not (ok1 and ok2):
        raise CertificateFailure("module-map squares fail for a compatible pair")


def make_mmorphism(source, target, f1, f2) -> MMorphism:
    return certify(MMorphism(source, target, f1, f2))


def compatibility_witness(f: MMorphism):
    """First basis tuple of target@source@target where the two
    compatibility composites differ, or None."""
    b = f.target.shape
    m = f.target.mult
    ib = LinMap.identity(b)
    lhs = compose(m, tensor_map(ib, f.f1))
    rhs = compose(m, tensor_map(f.f2, ib))
    return lhs.first_difference(rhs)


def identity_mmorphism(A: Semigroup) -> MMorphism:
    return certify(MMorphism(A, A, A.mult, A.mult))


def mmorphisms_equal(f: MMorphism, g: MMorphism) -> bool:
    return (
        f.src_shape == g.src_shape
        and f.target.shape == g.target.shape
        and f.f1.equal(g.f1)
        and f.f2.equal(g.f2)
    )


def _demand_arrow(g: MMorphism, role: str):
    if g.flags is None:
        raise ValueError(f"{role} must be certified before composing")
    if not g.flags.arrow_in_category:
        raise ValueError(f"{role} must be compatible, dense and multiplicative")


def _composite_sections(f, g, h1, h2, s1, s2, ia, ic):
    """Attach constructive sections to composite components.

    Windowed carriers certify density only through an explicit right
    inverse, and composing through a section destroys the propagated
    one.  The defining squares rebuild it: (1 (x) g1)(sf1 (x) 1)s1
    right-inverts h1 because the square collapses g1 against s1, and
    symmetrically on the other side.  Finite carriers get density from
    rank computations and skip this."""
    if not hasattr(h1, "with_section") or h1.section is not None:
        return h1, h2
    sf1, sf2 = f.f1.section, f.f2.section
    if sf1 is None or sf2 is None:
        return h1, h2
    w1 = compose(tensor_map(ia, g.f1), tensor_map(sf1, ic), s1)
    w2 = compose(tensor_map(g.f2, ia), tensor_map(ic, sf2), s2)
    return h1.with_section(w1), h2.with_section(w2)


def mcompose(g: MMorphism, f: MMorphism, pivot: str = "first") -> MMorphism:
    """The composite of f: A -> B then g: B -> C, solved and verified.

    Both components are built along sections of g's components and then
    checked against their defining squares; SolveInconsistent means a
    section was not a genuine right inverse in context (for windowed
    data) or the flags lied.
    """
    if f.target.shape != g.src_shape or (
        isinstance(g.source, Semigroup) and not g.source.mult.equal(f.target.mult)
    ):
        raise ShapeMismatch("morphisms do not share the middle object")
    if f.flags is None:
        raise ValueError("right factor must be certified before composing")
    _demand_arrow(g, "left factor")
    a = f.src_shape
    c = g.target.shape
    ia = LinMap.identity(a)
    ic = LinMap.identity(c)

    _, s1 = solve.rank_and_section(g.f1, pivot=pivot)
    if s1 is None:
        raise SolveInconsistent("no section: first component is not surjective")
    h1 = compose(g.f1, tensor_map(f.f1, ic), tensor_map(ia, s1))
    want1 = compose(g.f1, tensor_map(f.f1, ic))
    got1 = compose(h1, tensor_map(ia, g.f1))
    if not got1.equal(want1):
        raise SolveInconsistent("first component fails its defining square")

    _, s2 = solve.rank_and_section(g.f2, pivot=pivot)
    if s2 is None:
        raise SolveInconsistent("no section: second component is not surjective")
    h2 = compose(g.f2, tensor_map(ic, f.f2), tensor_map(s2, ia))
    want2 = compose(g.f2, tensor_map(ic, f.f2))
    got2 = compose(h2, tensor_map(g.f2, ia))
    if not got2.equal(want2):
        raise SolveInconsistent("second component fails its defining square")

    h1, h2 = _composite_sections(f, g, h1, h2, s1, s2, ia, ic)
    out = certify(MMorphism(f.source, g.target, h1, h2))
    if not out.flags.compatible:
        raise CertificateFailure("composite is not a compatible pair")
    if f.flags.dense and not out.flags.dense:
        raise CertificateFailure("density did not propagate through composition")
    if f.flags.multiplicative is True and out.flags.multiplicative is not True:
        raise CertificateFailure(
            "multiplicativity did not propagate through composition"
        )
    return out


def initial_morphism(A: Semigroup) -> MMorphism:
    """The unique arrow out of the tensor unit: both components id."""
    I = unit_semigroup(A.field, A.context)
    ident = LinMap.identity(A.shape)
    return certify(MMorphism(I, A, ident, ident))


def _rational_probe_pool(field):
    return [field.parse(s) for s in ("0", "1", "-1", "2", "1/2", "-1/2")]


def check_initial(A: Semigroup, cap: int = 300000) -> bool:
    """Initiality of the tensor unit over this carrier.

    The canonical arrow must certify with every flag true.  Uniqueness
    is checked by first solving the linear half of the constraint: the
    endo pairs (v1, v2) with a.v1(b) = v2(a).b form a finite
    dimensional space, and any surjective idempotent pair in it is a
    dense multiplicative arrow out of the unit, so must equal the
    canonical one.  Coefficients range over the whole field when it is
    enumerable and over a fixed probe pool for the rationals (the rank
    argument makes the statement field-independent; the probe guards
    the implementation, it cannot exhaust an infinite field).
    """
    u = initial_morphism(A)
    if not u.flags.arrow_in_category:
        return False
    field = A.field
    sh = A.shape
    pairs = _hom_pairs(sh, sh)
    n = len(pairs)
    rows = []
    for ta in sh.basis():
        for tb in sh.basis():
            for tc in sh.basis():
                row = [field.zero] * (2 * n)
                for col, (tin, tout) in enumerate(pairs):
                    if tin == tb:
                        coeff = A.mult.entry(ta + tout, tc)
                        if not field.is_zero(coeff):
                            row[col] = field.add(row[col], coeff)
                    if tin == ta:
                        coeff = A.mult.entry(tout + tb, tc)
                        if not field.is_zero(coeff):
                            row[n + col] = field.sub(row[n + col], coeff)
                if any(not field.is_zero(x) for x in row):
                    rows.append(row)
    basis = solve.dense_kernel(rows, 2 * n, field)
    try:
        elements = list(field.elements())
    except UnsupportedField:
        elements = _rational_probe_pool(field)
    if basis and len(elements) ** len(basis) > cap:
        raise ValueError("solution space search exceeds the cap")
    ident = LinMap.identity(sh)
    for coeffs in itertools.product(elements, repeat=len(basis)):
        v1, v2 = _pair_from_coords(coeffs, basis, pairs, sh, field)
        if not (compose(v1, v1).equal(v1) and compose(v2, v2).equal(v2)):
            continue
        if solve.rank(v1) < sh.dim or solve.rank(v2) < sh.dim:
            continue
        if not (v1.equal(ident) and v2.equal(ident)):
            return False
    return True


def _pair_from_coords(coeffs, basis, pairs, sh, field):
    n = len(pairs)
    acc = [field.zero] * (2 * n)
    for c, vec in zip(coeffs, basis):
        if field.is_zero(c):
            continue
        for j, v in enumerate(vec):
            if not field.is_zero(v):
                acc[j] = field.add(acc[j], field.mul(c, v))
    first = [
        (pairs[j][0], pairs[j][1], acc[j])
        for j in range(n)
        if not field.is_zero(acc[j])
    ]
    second = [
        (pairs[j][0], pairs[j][1], acc[n + j])
        for j in range(n)
        if not field.is_zero(acc[n + j])
    ]
    return LinMap.from_entries(sh, sh, first), LinMap.from_entries(sh, sh, second)


def check_multiplicative_map(f: LinMap, src: Semigroup, dst: Semigroup) -> bool:
    return compose(f, src.mult).equal(compose(dst.mult, tensor_map(f, f)))


def sharp(f: LinMap, src: Semigroup, dst: Semigroup) -> MMorphism:
    """Promote a multiplicative carrier map to a two-component morphism."""
    if f.src != src.shape or f.dst != dst.shape:
        raise ShapeMismatch("map must run between the two carriers")
    if not check_multiplicative_map(f, src, dst):
        raise NotMultiplicative(f"{src.name} -> {dst.name} map is not multiplicative")
    b = dst.shape
    ib = LinMap.identity(b)
    f1 = compose(dst.mult, tensor_map(f, ib))
    f2 = compose(dst.mult, tensor_map(ib, f))
    out = certify(MMorphism(src, dst, f1, f2))
    if not out.flags.compatible or out.flags.multiplicative is not True:
        raise CertificateFailure("promoted morphism failed its certification")
    return out


def verify_sharp_composition(g: MMorphism, f: LinMap, f_sharp: MMorphism) -> bool:
    """The composite through a promoted map has closed-form components."""
    gf = mcompose(g, f_sharp)
    ic = LinMap.identity(g.target.shape)
    ok1 = gf.f1.equal(compose(g.f1, tensor_map(f, ic)))
    ok2 = gf.f2.equal(compose(g.f2, tensor_map(ic, f)))
    return ok1 and ok2


def flat(f: MMorphism, g: MMorphism, pivot: str = "first") -> LinMap:
    """Recover the carrier map underlying an invertible morphism pair.

    f: A -> B and g: B -> A must compose to the identities both ways;
    the result is solved along a section of g's first component, then
    verified on its defining equation, multiplicativity, and the
    round-trip back to f.
    """
    for h in (f, g):
        if h.flags is None or not h.flags.arrow_in_category:
            raise NotInverse("both morphisms must be certified category arrows")
    if not mmorphisms_equal(mcompose(f, g), identity_mmorphism(g.source)):
        raise NotInverse("f after g is not the identity")
    if not mmorphisms_equal(mcompose(g, f), identity_mmorphism(f.source)):
        raise NotInverse("g after f is not the identity")
    _, s = solve.rank_and_section(g.f1, pivot=pivot)
    if s is None:
        raise SolveInconsistent("no section for the inverse's first component")
    flat_map = compose(f.f2, s)
    if not compose(flat_map, g.f1).equal(f.f2):
        raise SolveInconsistent("recovered map fails its defining equation")
    src = f.source
    dst = f.target
    if not check_multiplicative_map(flat_map, src, dst):
        raise CertificateFailure("recovered map is not multiplicative")
    ib = LinMap.identity(dst.shape)
    if not compose(dst.mult, tensor_map(flat_map, ib)).equal(f.f1):
        raise CertificateFailure("round-trip does not recover the first component")
    if not compose(dst.mult, tensor_map(ib, flat_map)).equal(f.f2):
        raise CertificateFailure("round-trip does not recover the second component")
    return flat_map


def _hom_pairs(src_shape: Shape, dst_shape: Shape):
    out = []
    for tin in src_shape.basis():
        d = src_shape.degree(tin)
        for tout in dst_shape.basis():
            if dst_shape.degree(tout) == d:
                out.append((tin, tout))
    return out


def reconstruct_component(f_known: LinMap, source, target: Semigroup, known_first=True):
    """Solve the compatibility square for the missing component.

    With a non-degenerate target the solution is unique; a nonzero
    kernel or an unsolvable system raises.
    """
    a = source_shape(source)
    b = target.shape
    m = target.mult
    ib = LinMap.identity(b)
    if known_first:
        rhs = compose(m, tensor_map(ib, f_known))
        unknown_src, op = b * a, lambda e: compose(m, tensor_map(e, ib))
    else:
        rhs = compose(m, tensor_map(f_known, ib))
        unknown_src, op = a * b, lambda e: compose(m, tensor_map(ib, e))
    pairs = _hom_pairs(unknown_src, b)
    field = b.field
    columns = []
    row_keys = set()
    for tin, tout in pairs:
        e = LinMap.from_entries(unknown_src, b, [(tin, tout, field.one)])
        img = {}
        for cin, cout, v in op(e).entries():
            img[(cin, cout)] = v
        row_keys.update(img)
        columns.append(img)
    rhs_entries = {}
    for cin, cout, v in rhs.entries():
        rhs_entries[(cin, cout)] = v
    row_keys.update(rhs_entries)
    keys = sorted(row_keys)
    mat = [[col.get(k, field.zero) for col in columns] for k in keys]
    if solve.dense_kernel(mat, len(columns), field):
        raise CertificateFailure(
            "compatibility solve is not unique; target non-degeneracy is broken"
        )
    rhs_col = [rhs_entries.get(k, field.zero) for k in keys]
    sols = solve.solve_columns(mat, [rhs_col], field)
    if sols[0] is None:
        raise SolveInconsistent("no component satisfies the compatibility square")
    entries = [
        (tin, tout, v)
        for (tin, tout), v in zip(pairs, sols[0])
        if not field.is_zero(v)
    ]
    return LinMap.from_entries(unknown_src, b, entries)
