"""Morphisms between multiplier bimonoids and between their comonoids.

Every public predicate here computes its answer two or three
independent ways and asserts the answers coincide before returning.
The redundancy is the point: these equivalences are exactly what the
underlying theory promises, so any divergence is an engine defect and
raises instead of returning.
"""

from . import solve
from .bimonoid import MultiplierBimonoidData, tensor_chain
from .comonoid import (
    AGREE_PASS,
    ComonoidInM,
    check_equivalence,
    comonoid_from_bimonoid,
)
from .errors import CertificateFailure, ShapeMismatch, SolveInconsistent
from .linmaps import LinMap, braiding, compose
from .mcategory import MMorphism, _demand_arrow, sharp


def _solved_vertical(top, bottom):
    if hasattr(top, "has_verified_section"):
        if not top.has_verified_section():
            return None
        section = top.section
    else:
        _, section = solve.rank_and_section(top)
        if section is None:
            return None
    u = compose(bottom, section)
    if compose(u, top).equal(bottom):
        return u
    return None


def _counit_conditions(f: MMorphism, src: ComonoidInM, dst: ComonoidInM):
    e, e_dst = src.counit, dst.counit
    first = compose(e_dst, f.f1).equal(tensor_chain(e, e_dst))
    mirror = compose(e_dst, f.f2).equal(tensor_chain(e_dst, e))
    return first, mirror


def _solve_exchange_map(f: MMorphism, dst: ComonoidInM):
    """The map g with d1'(1 (x) g) == d1'(f2 (x) 1 (x) 1), or None.

    g is pinned one input column at a time by a stacked linear system
    whose matrix is v |-> d1'(c' (x) v) over all basis c' of the
    target.  Solutions are taken with free variables zeroed, then
    verified against the defining equation, so a returned g is exact
    even when the stacked matrix is column-rank deficient.
    """
    sd = dst.object.shape
    sq = sd.power(2)
    field = sd.field
    d1_dst = dst.d1
    rows = [(cp, w) for cp in sd.basis() for w in sq.basis()]
    row_pos = {key: i for i, key in enumerate(rows)}
    unknowns = list(sq.basis())
    mat = [[field.zero] * len(unknowns) for _ in rows]
    for j, v in enumerate(unknowns):
        for cp in sd.basis():
            for w, val in d1_dst.cols.get(cp + v, {}).items():
                mat[row_pos[(cp, w)]][j] = val
    rhs_map = compose(d1_dst, tensor_chain(f.f2, LinMap.identity(sq)))
    domain = f.src_shape * sq
    cols = list(domain.basis())
    rhs_cols = []
    for x in cols:
        b = [field.zero] * len(rows)
        for cp in sd.basis():
            for w, val in rhs_map.cols.get(cp + x, {}).items():
                b[row_pos[(cp, w)]] = val
        rhs_cols.append(b)
    sols = solve.solve_columns(mat, rhs_cols, field)
    entries = []
    for x, sol in zip(cols, sols):
        if sol is None:
            return None
        for j, val in enumerate(sol):
            if not field.is_zero(val):
                entries.append((x, unknowns[j], val))
    g = LinMap.from_entries(domain, sq, entries)
    lhs = compose(d1_dst, tensor_chain(LinMap.identity(sd), g))
    if not lhs.equal(rhs_map):
        return None
    return g


def check_comonoid_morphism(f: MMorphism, src: ComonoidInM, dst: ComonoidInM) -> bool:
    """Is f a morphism of comonoids?

    The answer is read off the counit condition and one comultiplication
    square; it is then re-derived through the two solved verticals and,
    on finite carriers, through the exchange map, and every computed
    answer must agree.
    """
    if f.source is not src.object or f.target is not dst.object:
        raise ShapeMismatch("morphism endpoints must be the two comonoid objects")
    _demand_arrow(f, "comonoid morphism candidate")
    sc = src.object.shape
    sd = dst.object.shape
    onec = LinMap.identity(sc)
    oned = LinMap.identity(sd)
    c_over = braiding(sc, sd)
    d1, d2 = src.d1, src.d2
    d1_dst, d2_dst = dst.d1, dst.d2

    first, mirror_first = _counit_conditions(f, src, dst)

    second = compose(
        d1_dst,
        tensor_chain(oned, f.f1, f.f1),
        tensor_chain(oned, onec, c_over, oned),
        tensor_chain(oned, d1, oned, oned),
    ).equal(
        compose(
            d1_dst,
            tensor_chain(f.f2, f.f1, f.f1),
            tensor_chain(oned, onec, onec, c_over, oned),
        )
    )
    result = first and second

    c_back = braiding(sd, sc)
    mirror_second = compose(
        d2_dst,
        tensor_chain(f.f2, f.f2, oned),
        tensor_chain(oned, c_back, onec, oned),
        tensor_chain(oned, oned, d2, oned),
    ).equal(
        compose(
            d2_dst,
            tensor_chain(f.f2, f.f2, f.f1),
            tensor_chain(oned, c_back, onec, onec, oned),
        )
    )
    if (mirror_first and mirror_second) != result:
        raise SolveInconsistent("mirror comonoid-morphism conditions disagree")

    # vertical route: both squares must factor through the same map
    u1 = _solved_vertical(
        tensor_chain(onec, d1_dst),
        compose(d1_dst, tensor_chain(f.f1, oned, oned)),
    )
    u2 = _solved_vertical(
        compose(
            tensor_chain(onec, f.f1, f.f1),
            tensor_chain(onec, onec, c_over, oned),
        ),
        compose(
            tensor_chain(f.f1, f.f1),
            tensor_chain(onec, c_over, oned),
            tensor_chain(d1, oned, oned),
        ),
    )
    via_verticals = u1 is not None and u2 is not None and u1.equal(u2)
    if via_verticals != second:
        raise SolveInconsistent("vertical route disagrees with the direct square")

    # exchange route: the solved g must make the same square commute.
    # The stacked solve needs a finite basis, so windowed carriers keep
    # only the two cross-checks above.
    if not hasattr(sd, "windowed_identity"):
        g = _solve_exchange_map(f, dst)
        if g is None:
            via_exchange = False
        else:
            top = compose(
                tensor_chain(onec, f.f1, f.f1),
                tensor_chain(onec, onec, c_over, oned),
            )
            bottom = compose(
                tensor_chain(f.f1, f.f1),
                tensor_chain(onec, c_over, oned),
                tensor_chain(d1, oned, oned),
            )
            via_exchange = compose(g, top).equal(bottom)
        if via_exchange != second:
            raise SolveInconsistent("exchange route disagrees with the direct square")
        if second and u1 is not None and g is not None and not u1.equal(g):
            raise SolveInconsistent("exchange map differs from the solved vertical")
    return result


def _demand_verified(data: MultiplierBimonoidData, role: str):
    if check_equivalence(data, exhaustive=False).kind != AGREE_PASS:
        raise CertificateFailure(f"{role} data must pass its axiom battery first")


def check_mbm_morphism(f: MMorphism, src: MultiplierBimonoidData, dst: MultiplierBimonoidData) -> bool:
    """Is f a morphism of multiplier bimonoids?

    Decided on the counit condition plus the fusion-exchange square.
    The symmetric forms, the two single-letter variants, and the
    comonoid-morphism reading on the derived comultiplications are all
    evaluated as well; disagreement raises.
    """
    if f.source is not src.base or f.target is not dst.base:
        raise ShapeMismatch("morphism endpoints must be the two underlying semigroups")
    _demand_arrow(f, "bimonoid morphism candidate")
    _demand_verified(src, "source")
    _demand_verified(dst, "target")
    sa = src.base.shape
    sb = dst.base.shape
    onea = LinMap.identity(sa)
    oneb = LinMap.identity(sb)

    first = compose(dst.e, f.f2).equal(tensor_chain(dst.e, src.e))
    second = compose(
        tensor_chain(oneb, f.f2),
        tensor_chain(dst.t2, onea),
        tensor_chain(oneb, f.f2, onea),
    ).equal(
        compose(
            tensor_chain(f.f2, f.f2),
            tensor_chain(oneb, braiding(sb, sa), onea),
            tensor_chain(dst.t2, src.t1),
        )
    )
    result = first and second

    mirror_first = compose(dst.e, f.f1).equal(tensor_chain(src.e, dst.e))
    mirror_second = compose(
        tensor_chain(f.f1, oneb),
        tensor_chain(onea, dst.t1),
        tensor_chain(onea, f.f1, oneb),
    ).equal(
        compose(
            tensor_chain(f.f1, f.f1),
            tensor_chain(onea, braiding(sa, sb), oneb),
            tensor_chain(src.t2, dst.t1),
        )
    )
    if (mirror_first and mirror_second) != result:
        raise SolveInconsistent("mirror bimonoid-morphism conditions disagree")

    left_variant = compose(dst.t1, tensor_chain(f.f2, f.f1)).equal(
        compose(
            tensor_chain(f.f2, oneb),
            tensor_chain(braiding(sb, sa, inverse=True), oneb),
            tensor_chain(onea, dst.t1),
            tensor_chain(braiding(sb, sa), oneb),
            tensor_chain(oneb, onea, f.f1),
            tensor_chain(oneb, src.t1, oneb),
        )
    )
    right_variant = compose(dst.t2, tensor_chain(f.f2, f.f1)).equal(
        compose(
            tensor_chain(oneb, f.f1),
            tensor_chain(oneb, braiding(sa, sb, inverse=True)),
            tensor_chain(dst.t2, onea),
            tensor_chain(oneb, braiding(sa, sb)),
            tensor_chain(f.f2, onea, oneb),
            tensor_chain(oneb, src.t2, oneb),
        )
    )
    if left_variant != second or right_variant != second:
        raise SolveInconsistent("single-sided variants disagree with the exchange square")

    as_comonoid = check_comonoid_morphism(
        f, comonoid_from_bimonoid(src), comonoid_from_bimonoid(dst)
    )
    if as_comonoid != result:
        raise SolveInconsistent("comonoid reading disagrees with the bimonoid reading")
    return result


def check_sharp_morphism_criterion(g: LinMap, src: MultiplierBimonoidData, dst: MultiplierBimonoidData) -> bool:
    """Two-condition test for promoted carrier maps.

    A multiplicative g promotes to a bimonoid morphism exactly when it
    respects the counit and intertwines the first fusion maps.  The
    promoted morphism is pushed through the full diagram check and the
    two answers must agree.
    """
    cond = compose(dst.e, g).equal(src.e) and compose(
        dst.t1, tensor_chain(g, g)
    ).equal(compose(tensor_chain(g, g), src.t1))
    promoted = sharp(g, src.base, dst.base)
    full = check_mbm_morphism(promoted, src, dst)
    if full != cond:
        raise SolveInconsistent("promotion criterion disagrees with the diagram check")
    return cond
