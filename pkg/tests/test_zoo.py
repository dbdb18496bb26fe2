"""Construction and arithmetic of the built-in examples."""
import pytest

from mbim.errors import NoRootOfUnity
from mbim.scalars import PrimeField, Rationals
from mbim.zoo import (
    FiniteAbelianGroup,
    build_example,
    build_group_algebra,
    build_group_function_algebra,
    build_q_line,
    list_examples,
    parse_group_spec,
    qbinomial,
)


def test_registry_names():
    names = list_examples()
    for expected in ("fnalg:Z2", "fnalg:Z3", "grpalg:Z2", "qline:5:4"):
        assert expected in names


def test_build_example_is_cached():
    assert build_example("fnalg:Z2") is build_example("fnalg:Z2")


def test_unknown_example():
    with pytest.raises(ValueError, match="unknown example"):
        build_example("nope:Z2")


def test_group_spec_parsing():
    assert parse_group_spec("Z2").order == 2
    assert parse_group_spec("Z2xZ3").order == 6
    g = parse_group_spec("Z4")
    assert g.op((3,), (2,)) == (1,)
    assert g.inv((3,)) == (1,)
    for bad in ("", "Z", "Zx", "S3", "Z2x", "z2"):
        with pytest.raises(ValueError):
            parse_group_spec(bad)


def test_size_cap():
    with pytest.raises(ValueError, match="size cap"):
        build_group_function_algebra("Z4xZ4")
    with pytest.raises(ValueError, match="size cap"):
        build_group_algebra("Z13")


def test_all_bases_certified():
    for name in list_examples():
        data = build_example(name)
        assert data.base.certificates.all_true


def test_function_algebra_structure():
    data = build_example("fnalg:Z2")
    Q = data.base.field
    # pointwise product keeps only the diagonal
    assert data.base.mult.entry((0, 0), (0,)) == Q.one
    assert data.base.mult.entry((0, 1), (0,)) == Q.zero
    # t1 shears the first leg by the inverse of the second
    assert data.t1.entry((1, 1), (0, 1)) == Q.one
    assert data.t1.entry((0, 1), (1, 1)) == Q.one
    assert data.t2.entry((1, 0), (1, 1)) == Q.one
    # e evaluates at the group identity
    assert data.e.entry((0,), ()) == Q.one
    assert data.e.entry((1,), ()) == Q.zero


def test_group_algebra_structure():
    data = build_example("grpalg:Z2")
    Q = data.base.field
    assert data.base.mult.entry((1, 1), (0,)) == Q.one
    assert data.t1.entry((1, 1), (1, 0)) == Q.one
    assert data.t2.entry((1, 1), (0, 1)) == Q.one
    assert data.e.entry((1,), ()) == Q.one


def test_gaussian_binomials_over_q():
    # frozen against the product formula evaluated by hand at q = 2
    Q = Rationals()
    two = Q.from_int(2)
    assert qbinomial(2, 1, Q, two) == Q.from_int(3)
    assert qbinomial(3, 1, Q, two) == Q.from_int(7)
    assert qbinomial(4, 1, Q, two) == Q.from_int(15)
    assert qbinomial(4, 2, Q, two) == Q.from_int(35)
    assert qbinomial(4, 0, Q, two) == Q.one
    assert qbinomial(4, 4, Q, two) == Q.one
    assert qbinomial(3, 5, Q, two) == Q.zero


def test_qline_structure():
    data = build_example("qline:5:4")
    F = data.base.field
    # q = 2 is the smallest element of exact order 4 in F_5
    assert data.base.context.bichar.value(1, 1) == 2
    # t1(x^2 (x) x^1) picks up the Gaussian coefficient 3 in the middle
    assert data.t1.entry((2, 1), (0, 3)) == 1
    assert data.t1.entry((2, 1), (1, 2)) == 3
    assert data.t1.entry((2, 1), (2, 1)) == 1
    # truncation drops everything past x^3: only j = 0 survives here
    assert data.t2.cols[(3, 2)] == {(3, 2): 1}
    assert data.e.entry((0,), ()) == F.one
    assert data.e.entry((2,), ()) == F.zero


def test_qline_needs_a_root_of_unity():
    with pytest.raises(NoRootOfUnity):
        build_q_line(5, 3)
    with pytest.raises(NoRootOfUnity):
        build_q_line(2, 2)


def test_qline_dual_numbers():
    # N = 2 over F_5 works with the sign braiding q = 4
    data = build_q_line(5, 2)
    assert data.base.context.bichar.value(1, 1) == 4
    assert data.base.dim == 2
