"""Comonoid checks, the equivalence verdict, and the derivation chains."""
import random

import pytest

from mbim.bimonoid import MultiplierBimonoidData, check_bimonoid_axioms
from mbim.comonoid import (
    AGREE_FAIL,
    AGREE_PASS,
    ComonoidInM,
    certified_square,
    check_comonoid_in_M,
    check_derivation_chains,
    check_equivalence,
    coassociativity_closed_form,
    coassociativity_verticals,
    comonoid_from_bimonoid,
    comonoid_from_parts,
)
from mbim.errors import ShapeMismatch
from mbim.linmaps import LinMap, unit_shape
from mbim.mcategory import identity_mmorphism, mcompose, mmorphisms_equal
from mbim.monoidal import tensor_mmorphism
from mbim.semigroups import unit_semigroup
from mbim.zoo import build_example, list_examples


def mutate_one_entry(data, which, rng):
    """Bump one structure constant; stays degree-homogeneous."""
    field = data.base.field
    f = getattr(data, which)
    if hasattr(f, "terms"):
        cin = tuple(rng.randrange(-2, 3) for _ in range(f.src.arity))
        cout = tuple(rng.randrange(-2, 3) for _ in range(f.dst.arity))
        old = f.evaluate(cin).get(cout, field.zero)
        v = field.add(old, field.from_int(rng.randrange(1, 5)))
        bumped = f.with_entry(cin, cout, v)
    else:
        entries = [
            (cin, cout, v)
            for cin, colvals in sorted(f.cols.items())
            for cout, v in sorted(colvals.items())
        ]
        cin, cout, v = entries[rng.randrange(len(entries))]
        bumped = f.with_entry(
            cin, cout, field.add(v, field.from_int(rng.randrange(1, 5)))
        )
    parts = {"t1": data.t1, "t2": data.t2, "e": data.e}
    parts[which] = bumped
    return MultiplierBimonoidData(
        data.base, parts["t1"], parts["t2"], parts["e"], name=data.name + "+mut"
    )


def test_examples_are_comonoids():
    for name in list_examples():
        data = build_example(name)
        c = comonoid_from_bimonoid(data)
        report = check_comonoid_in_M(c, fusion_map=data.t1)
        assert report.conclusion, (name, report.render())
        assert [ln.tag for ln in report.lines] == [
            "CERT(e)", "CERT(d)", "COUNIT(left)", "COUNIT(right)", "COASSOC",
        ]


def test_counit_laws_in_the_category():
    # (e (x) 1) . d and (1 (x) e) . d must both be the identity arrow,
    # computed with the genuine categorical composition
    for name in list_examples():
        data = build_example(name)
        c = comonoid_from_bimonoid(data)
        A = data.base
        sq = certified_square(A)
        ident = identity_mmorphism(A)
        left = mcompose(tensor_mmorphism(c.e, ident, product_source=sq), c.d)
        right = mcompose(tensor_mmorphism(ident, c.e, product_source=sq), c.d)
        assert mmorphisms_equal(left, ident), name
        assert mmorphisms_equal(right, ident), name


def test_solved_vertical_matches_closed_form():
    for name in list_examples():
        data = build_example(name)
        d1, _ = data.derived()
        verticals = coassociativity_verticals(data.base, d1)
        assert verticals["passed"]
        closed = coassociativity_closed_form(data.base, data.t1, d1)
        assert verticals["u_left"].equal(closed), name


def test_equivalence_verdicts_on_examples():
    for name in list_examples():
        v = check_equivalence(build_example(name))
        assert v.kind == AGREE_PASS
        assert v.passed


def test_verdict_caching():
    data = build_example("fnalg:Z2")
    assert check_equivalence(data) is check_equivalence(data)
    assert check_equivalence(data, exhaustive=False) is check_equivalence(
        data, exhaustive=False
    )


def test_mutations_agree_fail_never_disagree():
    rng = random.Random(20260817)
    for name in list_examples():
        base = build_example(name)
        for _ in range(20):
            which = rng.choice(["t1", "t2", "e"])
            data = mutate_one_entry(base, which, rng)
            v = check_equivalence(data, exhaustive=False)
            assert v.kind == AGREE_FAIL, (name, which, v.kind)


def test_scaled_counit_fails_certification():
    good = build_example("grpalg:Z2")
    Q = good.base.field
    doubled = LinMap.from_entries(
        good.e.src, good.e.dst,
        [(cin, cout, Q.mul(Q.from_int(2), v))
         for cin, col in good.e.cols.items() for cout, v in col.items()],
    )
    data = MultiplierBimonoidData(good.base, good.t1, good.t2, doubled)
    report = check_comonoid_in_M(comonoid_from_bimonoid(data))
    line = report.line("CERT(e)")
    assert not line.passed
    assert line.render() == "CERT(e) FAIL at [multiplicative]"


def test_broken_comultiplication_detected():
    rng = random.Random(7)
    good = build_example("qline:5:4")
    data = mutate_one_entry(good, "t1", rng)
    report = check_comonoid_in_M(comonoid_from_bimonoid(data))
    assert not report.conclusion
    assert not report.passed("CERT(d)")


def test_chains_hold_on_examples():
    for name in list_examples():
        for chain in check_derivation_chains(build_example(name)):
            assert chain.premises_hold, (name, chain.name)
            assert chain.conclusion_holds is True, (name, chain.name)
            assert not chain.spurious


def test_chains_never_fire_spuriously_under_mutation():
    rng = random.Random(31337)
    for name in list_examples():
        base = build_example(name)
        for _ in range(10):
            data = mutate_one_entry(base, rng.choice(["t1", "t2", "e"]), rng)
            for chain in check_derivation_chains(data):
                assert not chain.spurious, (name, chain.name)
                if not chain.premises_hold:
                    assert chain.conclusion_holds is None


def test_trivial_comonoid_on_the_unit():
    from mbim.gradings import GradingContext
    from mbim.scalars import Rationals

    Q = Rationals()
    I = unit_semigroup(Q, GradingContext.trivial(Q))
    ident = LinMap.identity(I.shape)
    c = comonoid_from_parts(I, ident, ident, ident)
    report = check_comonoid_in_M(c)
    assert report.conclusion


def test_comonoid_from_parts_shape_checks():
    data = build_example("fnalg:Z2")
    d1, d2 = data.derived()
    with pytest.raises(ShapeMismatch):
        comonoid_from_parts(data.base, data.t1, d2, data.e)
    with pytest.raises(ShapeMismatch):
        comonoid_from_parts(data.base, d1, d2, LinMap.identity(data.base.shape))


def test_exhaustive_reports_have_all_lines_even_after_failure():
    rng = random.Random(11)
    good = build_example("fnalg:Z3")
    data = mutate_one_entry(good, "t1", rng)
    report = check_comonoid_in_M(comonoid_from_bimonoid(data), exhaustive=True)
    assert len(report.lines) == 5
    short = check_comonoid_in_M(comonoid_from_bimonoid(data), exhaustive=False)
    assert len(short.lines) <= len(report.lines)
    assert not short.conclusion
