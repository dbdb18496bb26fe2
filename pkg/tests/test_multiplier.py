"""Multiplier space: solving, monoid laws, embedding, extension."""
import pytest

from conftest import Q, make_rng, semigroup_from_constants
from mbim.errors import CertificateFailure, ShapeMismatch, SolveInconsistent
from mbim.gradings import Bicharacter, CyclicGroup, GradingContext
from mbim.linmaps import GradedObject, LinMap, Shape, compose, tensor_map
from mbim.mcategory import MMorphism, MorphismFlags, identity_mmorphism, sharp
from mbim.multiplier import (
    compute_multiplier_monoid,
    components_from_map,
    embed,
    extend_to_multiplier_monoid,
    induced_map,
    map_vs_morphism_multiplicativity,
)
from mbim.semigroups import Semigroup


def kfun(n, field=Q, name=None):
    return semigroup_from_constants(
        field, n, {(i, i, i): field.one for i in range(n)}, name=name or f"K{n}"
    )


def z2_group_algebra():
    one = Q.one
    return semigroup_from_constants(
        Q, 2, {(0, 0, 0): one, (0, 1, 1): one, (1, 0, 1): one, (1, 1, 0): one},
        name="QZ2",
    )


def dual_numbers_truncated():
    """Unital span{1, x} with x.x = 0, graded by the parity of the
    x-exponent."""
    grp = CyclicGroup(2)
    ctx = GradingContext(grp, Bicharacter(grp, Q, None))
    obj = GradedObject("D", Q, ctx, ("one", "x"), (0, 1))
    sh = Shape((obj,))
    entries = [((0, 0), (0,), Q.one), ((0, 1), (1,), Q.one), ((1, 0), (1,), Q.one)]
    return Semigroup(obj, LinMap.from_entries(sh.power(2), sh, entries), name="D")


def test_unital_bases_give_isomorphic_embedding():
    for A in (z2_group_algebra(), kfun(2), kfun(3)):
        M = compute_multiplier_monoid(A)
        assert M.dim == A.dim
        assert M.embedding_is_iso()
        assert M.coset_witnesses() == ()
        lines = M.report_lines()
        assert lines[0].endswith(f"dim {A.dim}")
        assert lines[1].endswith("yes")


def test_one_dim_idempotent_line():
    A = semigroup_from_constants(Q, 1, {(0, 0, 0): Q.one}, name="line")
    M = compute_multiplier_monoid(A)
    assert M.dim == 1
    u = M.multiplier(0)
    assert u.check(A)
    assert u.left == {(0,): {(0,): Q.one}}
    assert u.right == {(0,): {(0,): Q.one}}


def test_degenerate_base_rejected():
    A = semigroup_from_constants(Q, 1, {}, name="zero")
    with pytest.raises(CertificateFailure):
        compute_multiplier_monoid(A)


def test_embedding_injective_and_unit_image():
    A = kfun(3)
    M = compute_multiplier_monoid(A)
    i = embed(A, M)
    from mbim.solve import rank

    assert rank(i) == 3
    # the sum of all points is the unit of K3; its image is the unit pair
    total = {}
    for t in A.shape.basis():
        for tout, v in i.apply(t).items():
            total[tout] = Q.add(total.get(tout, Q.zero), v)
    unit_col = M.unit.apply(())
    assert total == unit_col


def test_embed_evaluation_squares():
    A = z2_group_algebra()
    M = compute_multiplier_monoid(A)
    im = LinMap.identity(M.shape)
    assert compose(M.mult, tensor_map(im, M.embed)).equal(
        compose(M.embed, M.eval_left)
    )
    assert compose(M.mult, tensor_map(M.embed, im)).equal(
        compose(M.embed, M.eval_right)
    )


def test_graded_shifts_tracked():
    A = dual_numbers_truncated()
    M = compute_multiplier_monoid(A)
    assert M.dim == 2
    assert M.embedding_is_iso()
    degs = sorted(M.carrier.degrees)
    assert degs == [0, 1]
    shifted = M.multiplier(M.carrier.degrees.index(1))
    assert shifted.shift == 1
    assert shifted.check(A)


def test_bijection_round_trip_random():
    A = kfun(3)
    M = compute_multiplier_monoid(A)
    rng = make_rng(11)
    ctx = A.context
    X = GradedObject("X", Q, ctx, ("p", "q"), (0, 0))
    xsh = Shape((X,))
    for _ in range(10):
        entries = [
            (tx, (k,), Q.parse(str(rng.randint(-3, 3))))
            for tx in xsh.basis()
            for k in range(M.dim)
        ]
        entries = [(a, b, v) for a, b, v in entries if not Q.is_zero(v)]
        u = LinMap.from_entries(xsh, M.shape, entries)
        f1, f2 = components_from_map(u, M)
        assert induced_map(f1, f2, xsh, M).equal(u)


def test_induced_map_rejects_incompatible_pair():
    A = kfun(2)
    M = compute_multiplier_monoid(A)
    ctx = A.context
    X = GradedObject("X", Q, ctx, ("p",), (0,))
    xsh = Shape((X,))
    f1 = LinMap.from_entries(xsh * A.shape, A.shape, [((0, 0), (1,), Q.one)])
    f2 = LinMap.zero(A.shape * xsh, A.shape)
    with pytest.raises(SolveInconsistent):
        induced_map(f1, f2, xsh, M)


def test_multiplicativity_correspondence_random():
    A = z2_group_algebra()
    M = compute_multiplier_monoid(A)
    rng = make_rng(7)
    cases = []
    # constructed multiplicative maps: embed composed with an algebra map
    for auto_entries in (
        [((0,), (0,), Q.one), ((1,), (1,), Q.one)],
        [((0,), (0,), Q.one), ((1,), (1,), Q.neg(Q.one))],
        [((0,), (0,), Q.one), ((1,), (0,), Q.one)],
        [((0,), (0,), Q.one)],
    ):
        f = LinMap.from_entries(A.shape, A.shape, auto_entries)
        cases.append((A, compose(M.embed, f)))
    while len(cases) < 20:
        trial = len(cases)
        consts = {}
        for i in range(2):
            for j in range(2):
                consts[(i, j, rng.randrange(2))] = Q.parse(str(rng.randint(0, 2)))
        B = semigroup_from_constants(Q, 2, consts, name=f"B{trial}")
        entries = [
            ((i,), (k,), Q.parse(str(rng.randint(-2, 2))))
            for i in range(2)
            for k in range(M.dim)
        ]
        entries = [(a, b, v) for a, b, v in entries if not Q.is_zero(v)]
        cases.append((B, LinMap.from_entries(B.shape, M.shape, entries)))
    seen_true = seen_false = False
    for B, u in cases:
        map_side, morphism_side = map_vs_morphism_multiplicativity(u, B, M)
        assert map_side == morphism_side
        seen_true = seen_true or map_side
        seen_false = seen_false or not map_side
    assert len(cases) == 20
    assert seen_true and seen_false


def test_extension_of_identity_is_identity():
    for A in (z2_group_algebra(), kfun(3)):
        M = compute_multiplier_monoid(A)
        ext = extend_to_multiplier_monoid(
            identity_mmorphism(A), source_monoid=M, target_monoid=M
        )
        assert ext.equal(LinMap.identity(M.shape))


def test_extension_conjugates_an_automorphism():
    A = z2_group_algebra()
    M = compute_multiplier_monoid(A)
    auto = LinMap.from_entries(
        A.shape, A.shape, [((0,), (0,), Q.one), ((1,), (1,), Q.neg(Q.one))]
    )
    g = sharp(auto, A, A)
    ext = extend_to_multiplier_monoid(g, source_monoid=M, target_monoid=M)
    assert compose(ext, M.embed).equal(compose(M.embed, auto))
    assert not ext.equal(LinMap.identity(M.shape))


def test_extension_rejects_corrupted_components():
    A = kfun(2)
    M = compute_multiplier_monoid(A)
    broken = A.mult.with_entry((0, 1), (1,), Q.one)
    forged = MMorphism(A, A, broken, broken, MorphismFlags(True, True, True))
    with pytest.raises(SolveInconsistent):
        extend_to_multiplier_monoid(forged, source_monoid=M, target_monoid=M)


def test_extension_demands_matching_monoids():
    A, B = kfun(2), kfun(3)
    MA = compute_multiplier_monoid(A)
    MB = compute_multiplier_monoid(B)
    with pytest.raises(ShapeMismatch):
        extend_to_multiplier_monoid(
            identity_mmorphism(A), source_monoid=MB, target_monoid=MA
        )


def test_monoid_laws_verified_on_construction():
    # a successful construction already certifies; spot-check anyway
    A = kfun(2)
    M = compute_multiplier_monoid(A)
    assert M.semigroup.certificates.associative
    u = M.unit
    left = compose(M.mult, tensor_map(u, LinMap.identity(M.shape)))
    right = compose(M.mult, tensor_map(LinMap.identity(M.shape), u))
    ident = LinMap.identity(M.shape)
    assert left.equal(ident) and right.equal(ident)
