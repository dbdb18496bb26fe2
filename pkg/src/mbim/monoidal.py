"""Tensor products of semigroups and of two-component morphisms.

The working category is strict: a product carrier is one graded object
whose labels concatenate the factor labels, and the packing map between
the two-factor picture and the flattened one is a relabeling bijection.
Product structure is never assumed correct: the product semigroup is
re-certified from scratch and product morphisms are re-certified with
the propagation facts asserted afterwards.
"""

from .errors import CertificateFailure, ShapeMismatch
from .linmaps import GradedObject, LinMap, Shape, braiding, compose, tensor_map
from .mcategory import MMorphism, certify
from .semigroups import Semigroup


class ProductSemigroup(Semigroup):
    """Tensor of two semigroups, flattened to a single carrier.

    `pack` relabels the two-factor shape onto the carrier, `unpack`
    inverts it.
    """

    __slots__ = ("left", "right", "pack", "unpack")

    def __init__(self, left: Semigroup, right: Semigroup):
        if left.field != right.field or left.context != right.context:
            raise ShapeMismatch("factors live over different scalars")
        self.left = left
        self.right = right
        field = left.field
        grp = left.context.group
        two = left.shape * right.shape
        labels = []
        degrees = []
        for ta in left.shape.basis():
            for tb in right.shape.basis():
                labels.append(
                    f"{left.carrier.labels[ta[0]]}*{right.carrier.labels[tb[0]]}"
                )
                degrees.append(grp.add(left.shape.degree(ta), right.shape.degree(tb)))
        carrier = GradedObject(
            f"({left.name}@{right.name})",
            field,
            left.context,
            tuple(labels),
            tuple(degrees),
        )
        flat = Shape((carrier,))
        index = {}
        for k, tab in enumerate(two.basis()):
            index[tab] = (k,)
        self.pack = LinMap.from_entries(
            two, flat, [(tab, index[tab], field.one) for tab in two.basis()]
        )
        self.unpack = LinMap.from_entries(
            flat, two, [(index[tab], tab, field.one) for tab in two.basis()]
        )
        swap = braiding(right.shape, left.shape)
        il = LinMap.identity(left.shape)
        ir = LinMap.identity(right.shape)
        mult_two = compose(
            tensor_map(left.mult, right.mult), tensor_map(il, tensor_map(swap, ir))
        )
        mult = compose(
            self.pack, mult_two, tensor_map(self.unpack, self.unpack)
        )
        super().__init__(carrier, mult, name=carrier.name)


def tensor_semigroup(A: Semigroup, B: Semigroup) -> Semigroup:
    """Product semigroup, re-certified from scratch.

    Tensoring with the unit semigroup returns the other factor
    unchanged: the unit shape has no factors, so the unitors are
    genuine identities here.
    """
    if A.shape.is_unit():
        return B
    if B.shape.is_unit():
        return A
    if hasattr(A, "windowed_tensor"):
        return A.windowed_tensor(B)
    for S in (A, B):
        if not S.certificates.all_true:
            raise CertificateFailure(f"factor {S.name} is not fully certified")
    out = ProductSemigroup(A, B)
    if not out.certificates.all_true:
        raise CertificateFailure(
            "product lost a certificate its factors carried"
        )
    return out


def _packer(S: Semigroup):
    if isinstance(S, ProductSemigroup):
        return S.pack, S.unpack
    ident = LinMap.identity(S.shape)
    return ident, ident


def tensor_mmorphism(f: MMorphism, g: MMorphism, product_source=None, product_target=None) -> MMorphism:
    """Tensor of morphisms: braid the middle factors, apply
    componentwise, repack.  Compatibility always propagates; density
    and multiplicativity propagate when both factors have them, and
    all three are re-certified rather than copied."""
    for end in (f.source, g.source):
        if not (hasattr(end, "mult") and hasattr(end, "shape")):
            raise ShapeMismatch("tensor needs semigroup sources")
    if f.flags is None:
        f = certify(f)
    if g.flags is None:
        g = certify(g)
    src = product_source if product_source is not None else tensor_semigroup(f.source, g.source)
    dst = product_target if product_target is not None else tensor_semigroup(f.target, g.target)
    sp, su = _packer(src)
    tp, tu = _packer(dst)
    if sp.src != f.src_shape * g.src_shape:
        raise ShapeMismatch("product source does not match the factors")
    if tp.src != f.target.shape * g.target.shape:
        raise ShapeMismatch("product target does not match the factors")
    ia = LinMap.identity(f.src_shape)
    ib = LinMap.identity(f.target.shape)
    c1 = braiding(g.src_shape, f.target.shape)
    comp1 = compose(
        tp,
        tensor_map(f.f1, g.f1),
        tensor_map(ia, tensor_map(c1, LinMap.identity(g.target.shape))),
        tensor_map(su, tu),
    )
    c2 = braiding(g.target.shape, f.src_shape)
    comp2 = compose(
        tp,
        tensor_map(f.f2, g.f2),
        tensor_map(ib, tensor_map(c2, LinMap.identity(g.src_shape))),
        tensor_map(tu, su),
    )
    out = certify(MMorphism(src, dst, comp1, comp2))
    if not out.flags.compatible:
        raise CertificateFailure("product morphism lost compatibility")
    if f.flags.dense and g.flags.dense and not out.flags.dense:
        raise CertificateFailure("product morphism lost density")
    if (
        f.flags.multiplicative is True
        and g.flags.multiplicative is True
        and out.flags.multiplicative is not True
    ):
        raise CertificateFailure("product morphism lost multiplicativity")
    return out


def associator(A: Semigroup, B: Semigroup, C: Semigroup):
    """Relabeling between the two ways of flattening a triple product.

    Returns (left_product, right_product, iso) where iso maps the
    carrier of (A@B)@C onto that of A@(B@C).  The map is verified to
    be bijective and multiplicative, so its promotion is an arrow."""
    AB_C = tensor_semigroup(tensor_semigroup(A, B), C)
    A_BC = tensor_semigroup(A, tensor_semigroup(B, C))
    if AB_C.dim != A_BC.dim:
        raise ShapeMismatch("flattenings disagree in dimension")
    field = A.field
    entries = []
    for k, t in enumerate(AB_C.shape.basis()):
        entries.append((t, (k,), field.one))
    iso = LinMap.from_entries(AB_C.shape, A_BC.shape, entries)
    lhs = compose(iso, AB_C.mult)
    rhs = compose(A_BC.mult, tensor_map(iso, iso))
    if not lhs.equal(rhs):
        raise CertificateFailure("associator relabeling is not multiplicative")
    return AB_C, A_BC, iso
