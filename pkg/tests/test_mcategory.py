"""Morphism pairs: certification, solved composition, category laws."""
import pytest

from conftest import F5, Q, semigroup_from_constants
from mbim.errors import (
    CertificateFailure,
    NotInverse,
    NotMultiplicative,
    SolveInconsistent,
)
from mbim.linmaps import LinMap, compose, tensor_map
from mbim.mcategory import (
    MMorphism,
    MorphismFlags,
    certify,
    check_initial,
    check_multiplicative_map,
    compatibility_witness,
    flat,
    identity_mmorphism,
    initial_morphism,
    make_mmorphism,
    mcompose,
    mmorphisms_equal,
    reconstruct_component,
    sharp,
    verify_sharp_composition,
)
from mbim.semigroups import unit_semigroup


def kfun(n, field=Q, name=None):
    """Pointwise function algebra on n points."""
    return semigroup_from_constants(
        field, n, {(i, i, i): field.one for i in range(n)}, name=name or f"K{n}"
    )


def pullback(phi, src, dst):
    """delta_g maps to the sum of delta_h over the phi-fibre of g."""
    one = src.field.one
    entries = [
        ((g,), (h,), one) for h in range(dst.dim) for g in [phi[h]]
    ]
    return LinMap.from_entries(src.shape, dst.shape, entries)


def z2_group_algebra():
    one = Q.one
    return semigroup_from_constants(
        Q, 2, {(0, 0, 0): one, (0, 1, 1): one, (1, 0, 1): one, (1, 1, 0): one},
        name="QZ2",
    )


def test_identity_mmorphism_fully_flagged():
    for A in (kfun(2), kfun(3), z2_group_algebra()):
        i = identity_mmorphism(A)
        assert i.flags.compatible
        assert i.flags.multiplicative is True
        assert i.flags.dense
        assert i.flags.arrow_in_category


def test_mismatched_pair_flagged_with_witness():
    A = kfun(2)
    f1 = A.mult
    f2 = A.mult.with_entry((0, 0), (0,), Q.parse("2"))
    f = certify(MMorphism(A, A, f1, f2))
    assert not f.flags.compatible
    w = compatibility_witness(f)
    assert w == (0, 0, 0)


def test_scalar_morphism_to_unit_multiplicative_iff_algebra_map():
    A = kfun(2)
    I = unit_semigroup(Q, A.context)
    # evaluation at the first point is an algebra map
    ev = LinMap.from_entries(A.shape, I.shape, [((0,), (), Q.one)])
    f = certify(MMorphism(A, I, ev, ev))
    assert f.flags.compatible and f.flags.multiplicative is True and f.flags.dense
    # summing both points is not: it sends a product of distinct points
    # to 0 but the product of their sums to 1
    total = LinMap.from_entries(
        A.shape, I.shape, [((0,), (), Q.one), ((1,), (), Q.one)]
    )
    g = certify(MMorphism(A, I, total, total))
    assert g.flags.compatible
    assert g.flags.multiplicative is False


def test_sharp_of_inversion_is_dense_multiplicative():
    A = kfun(3)
    inv = pullback([0, 2, 1], A, A)
    f = sharp(inv, A, A)
    assert f.flags.arrow_in_category
    assert verify_sharp_composition(identity_mmorphism(A), inv, f)


def test_sharp_rejects_non_multiplicative_map():
    A = kfun(2)
    bad = LinMap.from_entries(A.shape, A.shape, [((0,), (0,), Q.parse("2"))])
    assert not check_multiplicative_map(bad, A, A)
    with pytest.raises(NotMultiplicative):
        sharp(bad, A, A)


def test_sharp_of_zero_map_multiplicative_but_not_dense():
    A = kfun(2)
    zero = LinMap.zero(A.shape, A.shape)
    f = sharp(zero, A, A)
    assert f.flags.multiplicative is True
    assert not f.flags.dense


def test_unit_laws_of_composition():
    A = kfun(3)
    inv = sharp(pullback([0, 2, 1], A, A), A, A)
    iA = identity_mmorphism(A)
    assert mmorphisms_equal(mcompose(inv, iA), inv)
    assert mmorphisms_equal(mcompose(iA, inv), inv)


def test_associativity_of_composition():
    A = kfun(3)
    f = sharp(pullback([0, 2, 1], A, A), A, A)
    g = sharp(pullback([1, 2, 0], A, A), A, A)
    h = sharp(pullback([2, 0, 1], A, A), A, A)
    lhs = mcompose(mcompose(h, g), f)
    rhs = mcompose(h, mcompose(g, f))
    assert mmorphisms_equal(lhs, rhs)


def test_section_independence_of_composition():
    B = kfun(2)
    C = kfun(3)
    # pull back along a surjection of point sets: 3 points onto 2
    fmap = pullback([0, 0, 1], B, C)
    f = sharp(fmap, B, C)
    g = sharp(pullback([0, 2, 1], C, C), C, C)
    first = mcompose(g, f, pivot="first")
    alt = mcompose(g, f, pivot="alt")
    assert first.f1.cols == alt.f1.cols
    assert first.f2.cols == alt.f2.cols


def test_initial_morphism_and_check_initial():
    for A in (kfun(2), kfun(3), z2_group_algebra()):
        u = initial_morphism(A)
        assert u.flags.arrow_in_category
        assert check_initial(A)
    assert check_initial(kfun(2, field=F5))


def test_nonidentity_idempotent_is_multiplicative_not_dense():
    A = kfun(2)
    I = unit_semigroup(Q, A.context)
    p = LinMap.from_entries(A.shape, A.shape, [((0,), (0,), Q.one)])
    v = certify(MMorphism(I, A, p, p))
    assert v.flags.compatible
    assert v.flags.multiplicative is True
    assert not v.flags.dense


def test_flat_round_trip_recovers_inversion():
    A = kfun(3)
    inv = pullback([0, 2, 1], A, A)
    f = sharp(inv, A, A)
    recovered = flat(f, f)
    assert recovered.equal(inv)

    i = identity_mmorphism(A)
    assert flat(i, i).equal(A.mult.compose(_section_of(A.mult)))


def _section_of(m):
    from mbim.solve import rank_and_section

    return rank_and_section(m)[1]


def test_flat_rejects_non_inverses():
    A = kfun(3)
    f = sharp(pullback([0, 2, 1], A, A), A, A)
    g = sharp(pullback([1, 2, 0], A, A), A, A)
    with pytest.raises(NotInverse):
        flat(f, g)


def test_faithfulness_of_promotion():
    A = kfun(3)
    maps = [
        pullback([0, 1, 2], A, A),
        pullback([0, 2, 1], A, A),
        pullback([1, 2, 0], A, A),
        LinMap.zero(A.shape, A.shape),
    ]
    for i, fm in enumerate(maps):
        for gm in maps[i + 1 :]:
            fs, gs = sharp(fm, A, A), sharp(gm, A, A)
            assert not mmorphisms_equal(fs, gs)


def test_reconstruct_missing_component():
    A = kfun(3)
    f = sharp(pullback([0, 2, 1], A, A), A, A)
    assert reconstruct_component(f.f1, A, A, known_first=True).equal(f.f2)
    assert reconstruct_component(f.f2, A, A, known_first=False).equal(f.f1)

    B = z2_group_algebra()
    i = identity_mmorphism(B)
    assert reconstruct_component(i.f1, B, B, known_first=True).equal(i.f2)


def test_compose_demands_certified_dense_left_factor():
    A = kfun(2)
    zero_sharp = sharp(LinMap.zero(A.shape, A.shape), A, A)
    i = identity_mmorphism(A)
    with pytest.raises(ValueError):
        mcompose(zero_sharp, i)
    with pytest.raises(ValueError):
        mcompose(MMorphism(A, A, A.mult, A.mult), i)


def test_forged_flags_caught_by_verification():
    A = kfun(2)
    zero = LinMap.zero(A.shape.power(2), A.shape)
    forged = MMorphism(A, A, zero, zero, MorphismFlags(True, True, True))
    with pytest.raises(SolveInconsistent):
        mcompose(forged, identity_mmorphism(A))


def test_certify_demands_sound_target():
    degenerate = semigroup_from_constants(Q, 1, {})
    with pytest.raises(CertificateFailure):
        certify(MMorphism(degenerate, degenerate, degenerate.mult, degenerate.mult))


def test_multiplicativity_cross_validation_on_unital_targets():
    # compatible pairs over these targets must pass or fail both
    # multiplicativity squares together; certify would raise otherwise
    A = kfun(3)
    for phi in ([0, 1, 2], [0, 2, 1], [0, 0, 0], [1, 1, 2]):
        fm = pullback(phi, A, A)
        f1 = compose(A.mult, tensor_map(fm, LinMap.identity(A.shape)))
        f2 = compose(A.mult, tensor_map(LinMap.identity(A.shape), fm))
        certify(MMorphism(A, A, f1, f2))
