"""Products of semigroups and morphisms, functoriality, associators."""
import pytest

from conftest import F5, Q, make_rng, semigroup_from_constants
from mbim.errors import CertificateFailure, ShapeMismatch
from mbim.gradings import Bicharacter, GradingContext, IntegerGroup
from mbim.linmaps import GradedObject, LinMap, Shape, compose, tensor_map
from mbim.mcategory import identity_mmorphism, mcompose, mmorphisms_equal, sharp
from mbim.monoidal import ProductSemigroup, associator, tensor_mmorphism, tensor_semigroup
from mbim.semigroups import Semigroup, unit_semigroup


def kfun(n, field=Q, name=None):
    return semigroup_from_constants(
        field, n, {(i, i, i): field.one for i in range(n)}, name=name or f"K{n}"
    )


def pullback(phi, src, dst):
    one = src.field.one
    entries = [((phi[h],), (h,), one) for h in range(dst.dim)]
    return LinMap.from_entries(src.shape, dst.shape, entries)


def nilpotent_line(q_token="2"):
    """span{1, x} with x.x = 0, deg x = 1, braided by powers of q."""
    grp = IntegerGroup()
    ctx = GradingContext.power(grp, F5, F5.parse(q_token))
    obj = GradedObject("L", F5, ctx, ("one", "x"), (0, 1))
    sh = Shape((obj,))
    one = F5.one
    entries = [((0, 0), (0,), one), ((0, 1), (1,), one), ((1, 0), (1,), one)]
    return Semigroup(obj, LinMap.from_entries(sh.power(2), sh, entries), name="L")


def test_product_of_point_algebras_is_point_algebra():
    A = kfun(2)
    P = tensor_semigroup(A, A)
    assert isinstance(P, ProductSemigroup)
    assert P.dim == 4
    assert P.certificates.all_true
    for i in range(4):
        for j in range(4):
            for k in range(4):
                expect = Q.one if i == j == k else Q.zero
                assert P.mult.entry((i, j), (k,)) == expect
    assert P.carrier.labels == ("e0*e0", "e0*e1", "e1*e0", "e1*e1")


def test_unit_factor_collapses():
    A = kfun(3)
    I = unit_semigroup(Q, A.context)
    assert tensor_semigroup(I, A) is A
    assert tensor_semigroup(A, I) is A


def test_uncertified_factor_rejected():
    A = kfun(2)
    bad = semigroup_from_constants(Q, 1, {}, name="zero")
    with pytest.raises(CertificateFailure):
        tensor_semigroup(A, bad)


def test_braiding_factor_in_mixed_products():
    L = nilpotent_line()
    P = tensor_semigroup(L, L)
    sh = P.shape
    # (x@1).(1@x) has no crossing; (1@x).(x@1) crosses x past x
    lab = {lbl: k for k, lbl in enumerate(P.carrier.labels)}
    plain = P.mult.entry((lab["x*one"], lab["one*x"]), (lab["x*x"],))
    crossed = P.mult.entry((lab["one*x"], lab["x*one"]), (lab["x*x"],))
    assert plain == F5.one
    assert crossed == F5.parse("2")
    assert P.certificates.associative


def test_tensor_of_identities_is_identity():
    A, B = kfun(2), kfun(3)
    P = tensor_semigroup(A, B)
    t = tensor_mmorphism(
        identity_mmorphism(A), identity_mmorphism(B),
        product_source=P, product_target=P,
    )
    assert mmorphisms_equal(t, identity_mmorphism(P))


def test_tensor_propagates_flags():
    A = kfun(2)
    P = tensor_semigroup(A, A)
    inv = sharp(pullback([1, 0], A, A), A, A)
    t = tensor_mmorphism(inv, inv, product_source=P, product_target=P)
    assert t.flags.arrow_in_category
    proj = sharp(LinMap.from_entries(A.shape, A.shape, [((0,), (0,), Q.one)]), A, A)
    tp = tensor_mmorphism(inv, proj, product_source=P, product_target=P)
    assert tp.flags.multiplicative is True
    assert not tp.flags.dense


def test_counit_products_land_in_unit():
    A = kfun(2)
    I = unit_semigroup(Q, A.context)
    ev = LinMap.from_entries(A.shape, I.shape, [((0,), (), Q.one)])
    from mbim.mcategory import MMorphism, certify

    e = certify(MMorphism(A, I, ev, ev))
    P = tensor_semigroup(A, A)
    t = tensor_mmorphism(e, e, product_source=P, product_target=I)
    assert t.target is I
    expect = tensor_map(ev, ev)
    packed = compose(expect, P.unpack)
    assert t.f1.equal(packed)
    assert t.f2.equal(packed)


def test_functoriality_random_quadruples():
    rng = make_rng(23)
    A = kfun(2)
    B = kfun(2)
    C = kfun(2)
    PA = tensor_semigroup(A, A)
    PB = tensor_semigroup(B, B)
    PC = tensor_semigroup(C, C)
    perms = [[0, 1], [1, 0]]
    for _ in range(20):
        f = sharp(pullback(rng.choice(perms), A, B), A, B)
        fp = sharp(pullback(rng.choice(perms), A, B), A, B)
        g = sharp(pullback(rng.choice(perms), B, C), B, C)
        gp = sharp(pullback(rng.choice(perms), B, C), B, C)
        lhs = tensor_mmorphism(
            mcompose(g, f), mcompose(gp, fp), product_source=PA, product_target=PC
        )
        rhs = mcompose(
            tensor_mmorphism(g, gp, product_source=PB, product_target=PC),
            tensor_mmorphism(f, fp, product_source=PA, product_target=PB),
        )
        assert mmorphisms_equal(lhs, rhs)


def test_associator_is_multiplicative_relabeling():
    A, B, C = kfun(2), kfun(2, name="K2b"), kfun(3)
    left, right, iso = associator(A, B, C)
    assert left.dim == right.dim == 12
    from mbim.solve import rank

    assert rank(iso) == 12


def test_associator_naturality_on_sharps():
    A = kfun(2)
    f = sharp(pullback([1, 0], A, A), A, A)
    left, right, iso = associator(A, A, A)
    iso_sharp = sharp(iso, left, right)
    inner = tensor_mmorphism(
        tensor_mmorphism(f, f), f, product_source=left, product_target=left
    )
    outer = tensor_mmorphism(
        f, tensor_mmorphism(f, f), product_source=right, product_target=right
    )
    assert mmorphisms_equal(
        mcompose(iso_sharp, inner), mcompose(outer, iso_sharp)
    )


def test_product_source_shape_mismatch_rejected():
    A, B = kfun(2), kfun(3)
    PA = tensor_semigroup(A, A)
    with pytest.raises(ShapeMismatch):
        tensor_mmorphism(
            identity_mmorphism(A), identity_mmorphism(B),
            product_source=PA, product_target=PA,
        )
