"""Multiplier pairs of a non-degenerate semigroup and their monoid.

A multiplier is a pair of endo-actions (left, right) tied together by
right(a).b = a.left(b).  The pairs of a fixed degree shift form the
solution space of that linear system; the monoid collects every shift
block, carries composition as its multiplication, the identity pair as
its unit, and the embedding a |-> (multiply-by-a on either side).
Everything the construction promises is re-verified after solving, so
a value of this type is itself a certificate.
"""

from dataclasses import dataclass

from . import solve
from .errors import CertificateFailure, ShapeMismatch, SolveInconsistent
from .linmaps import GradedObject, LinMap, Shape, compose, tensor_map, unit_shape
from .mcategory import MMorphism, _demand_arrow, certify
from .semigroups import MonoidStructure, Semigroup


@dataclass(frozen=True)
class Multiplier:
    """One pair: `left` and `right` map carrier basis tuples to
    {output tuple: coefficient} columns; both raise the carrier degree
    by `shift`."""

    shift: object
    left: dict
    right: dict

    def check(self, A: Semigroup) -> bool:
        """right(a).b = a.left(b) on every basis pair."""
        field = A.field
        for ta in A.shape.basis():
            for tb in A.shape.basis():
                for tc in A.shape.basis():
                    lhs = field.zero
                    for ty, v in self.right.get(ta, {}).items():
                        lhs = field.add(lhs, field.mul(v, A.mult.entry(ty + tb, tc)))
                    rhs = field.zero
                    for tx, v in self.left.get(tb, {}).items():
                        rhs = field.add(rhs, field.mul(v, A.mult.entry(ta + tx, tc)))
                    if lhs != rhs:
                        return False
        return True


class _ShiftBlock:
    __slots__ = ("shift", "pairs", "basis", "free_cols", "start")

    def __init__(self, shift, pairs, basis, free_cols, start):
        self.shift = shift
        self.pairs = pairs
        self.basis = basis
        self.free_cols = free_cols
        self.start = start


def _shift_pairs(sh: Shape, shift):
    grp = sh.context.group
    out = []
    for tin in sh.basis():
        want = grp.add(sh.degree(tin), shift)
        for tout in sh.basis():
            if sh.degree(tout) == want:
                out.append((tin, tout))
    return out


def _solve_shift_block(A: Semigroup, shift):
    """Kernel basis of the compatibility system at one degree shift.

    Unknown layout: left-action entries first, right-action entries
    second, both over the same (input, output) pair list.
    """
    field = A.field
    sh = A.shape
    pairs = _shift_pairs(sh, shift)
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
    free_cols = []
    for vec in basis:
        # dense_kernel sets exactly one free coordinate to one and the
        # other free coordinates to zero; recover which
        for j, v in enumerate(vec):
            if v == field.one and all(
                field.is_zero(other[j]) for other in basis if other is not vec
            ):
                free_cols.append(j)
                break
        else:
            raise AssertionError("kernel basis lost its free-column structure")
    return pairs, basis, free_cols


def _vector_coords(block: _ShiftBlock, vec, field):
    """Coordinates of vec in the block basis, or None if outside it."""
    coords = [vec[j] for j in block.free_cols]
    recon = [field.zero] * len(vec)
    for c, bvec in zip(coords, block.basis):
        if field.is_zero(c):
            continue
        for j, v in enumerate(bvec):
            if not field.is_zero(v):
                recon[j] = field.add(recon[j], field.mul(c, v))
    if recon != list(vec):
        return None
    return coords


class MultiplierMonoid:
    """Solved multiplier space of a semigroup, with its verified
    monoid structure and the canonical embedding.

    Attributes: base (the input semigroup), carrier/shape (the solved
    space as a graded object), eval_left: carrier@base -> base,
    eval_right: base@carrier -> base, mult, unit, embed, semigroup
    (the carrier with mult, certified at construction), monoid (unit
    laws verified).
    """

    __slots__ = (
        "base",
        "carrier",
        "shape",
        "eval_left",
        "eval_right",
        "mult",
        "unit",
        "embed",
        "semigroup",
        "monoid",
        "_blocks",
    )

    def __init__(self, base: Semigroup):
        if not (base.certificates.associative and base.certificates.nondegenerate):
            raise CertificateFailure(
                "multiplier space needs an associative non-degenerate base"
            )
        self.base = base
        field = base.field
        grp = base.context.group
        sh = base.shape
        shifts = sorted(
            {grp.add(sh.degree(to), grp.neg(sh.degree(ti)))
             for ti in sh.basis() for to in sh.basis()}
        )
        self._blocks = []
        labels = []
        degrees = []
        for shift in shifts:
            pairs, basis, free_cols = _solve_shift_block(base, shift)
            block = _ShiftBlock(shift, pairs, basis, free_cols, len(labels))
            self._blocks.append(block)
            for _ in basis:
                labels.append(f"u{len(labels)}")
                degrees.append(shift)
        self.carrier = GradedObject(
            f"Mult({base.name})", field, base.context, tuple(labels), tuple(degrees)
        )
        self.shape = Shape((self.carrier,))
        self.eval_left = self._evaluation(left=True)
        self.eval_right = self._evaluation(left=False)
        self.mult = self._composition_law()
        self.unit = self._identity_pair_coords()
        self.semigroup = Semigroup(self.carrier, self.mult, name=f"Mult({base.name})")
        if not self.semigroup.certificates.associative:
            raise CertificateFailure("composition of multipliers not associative")
        self.monoid = MonoidStructure(self.semigroup, self.unit)
        self.embed = self._embedding()
        self._verify_embedding()

    @property
    def dim(self):
        return self.carrier.dim

    def multiplier(self, k: int) -> Multiplier:
        """The k-th basis pair as explicit action columns."""
        block, offset = self._locate(k)
        vec = block.basis[offset]
        n = len(block.pairs)
        left, right = {}, {}
        field = self.base.field
        for col, (tin, tout) in enumerate(block.pairs):
            if not field.is_zero(vec[col]):
                left.setdefault(tin, {})[tout] = vec[col]
            if not field.is_zero(vec[n + col]):
                right.setdefault(tin, {})[tout] = vec[n + col]
        return Multiplier(block.shift, left, right)

    def _locate(self, k):
        for block in self._blocks:
            if block.start <= k < block.start + len(block.basis):
                return block, k - block.start
        raise IndexError(k)

    def _evaluation(self, left: bool):
        field = self.base.field
        sh = self.base.shape
        entries = []
        for k in range(self.dim):
            block, offset = self._locate(k)
            vec = block.basis[offset]
            n = len(block.pairs)
            for col, (tin, tout) in enumerate(block.pairs):
                v = vec[col] if left else vec[n + col]
                if field.is_zero(v):
                    continue
                cin = ((k,) + tin) if left else (tin + (k,))
                entries.append((cin, tout, v))
        src = self.shape * sh if left else sh * self.shape
        return LinMap.from_entries(src, sh, entries)

    def _pair_vector(self, block, left, right):
        field = self.base.field
        n = len(block.pairs)
        vec = [field.zero] * (2 * n)
        for col, (tin, tout) in enumerate(block.pairs):
            vec[col] = left.get(tin, {}).get(tout, field.zero)
            vec[n + col] = right.get(tin, {}).get(tout, field.zero)
        for tin, outs in left.items():
            for tout, v in outs.items():
                if not field.is_zero(v) and (tin, tout) not in block.pairs:
                    return None
        for tin, outs in right.items():
            for tout, v in outs.items():
                if not field.is_zero(v) and (tin, tout) not in block.pairs:
                    return None
        return vec

    def _coords_of_pair(self, shift, left, right):
        """Coordinates in the solved basis, or None when the pair is
        not a multiplier (wrong support or compatibility fails)."""
        field = self.base.field
        for block in self._blocks:
            if block.shift == shift:
                vec = self._pair_vector(block, left, right)
                if vec is None:
                    return None
                coords = _vector_coords(block, vec, field)
                if coords is None:
                    return None
                return block.start, coords
        # a shift with no solved block: only the zero pair fits
        if any(left.values()) or any(right.values()):
            return None
        return 0, []

    def _composition_law(self):
        field = self.base.field
        grp = self.base.context.group
        entries = []
        for j in range(self.dim):
            mj = self.multiplier(j)
            for k in range(self.dim):
                mk = self.multiplier(k)
                left = _compose_columns(mj.left, mk.left, field)
                right = _compose_columns(mk.right, mj.right, field)
                located = self._coords_of_pair(
                    grp.add(mj.shift, mk.shift), left, right
                )
                if located is None:
                    raise CertificateFailure(
                        "composition left the solved multiplier space"
                    )
                start, coords = located
                for off, c in enumerate(coords):
                    if not field.is_zero(c):
                        entries.append(((j, k), (start + off,), c))
        return LinMap.from_entries(self.shape.power(2), self.shape, entries)

    def _identity_pair_coords(self):
        field = self.base.field
        ident = {t: {t: field.one} for t in self.base.shape.basis()}
        located = self._coords_of_pair(
            self.base.context.group.identity, ident, ident
        )
        if located is None:
            raise CertificateFailure("identity pair is not a multiplier")
        start, coords = located
        entries = [
            ((), (start + off,), c)
            for off, c in enumerate(coords)
            if not field.is_zero(c)
        ]
        return LinMap.from_entries(
            unit_shape(field, self.base.context), self.shape, entries
        )

    def _embedding(self):
        field = self.base.field
        sh = self.base.shape
        entries = []
        for ta in sh.basis():
            left = {}
            right = {}
            for tb in sh.basis():
                for tc in sh.basis():
                    v = self.base.mult.entry(ta + tb, tc)
                    if not field.is_zero(v):
                        left.setdefault(tb, {})[tc] = v
                    w = self.base.mult.entry(tb + ta, tc)
                    if not field.is_zero(w):
                        right.setdefault(tb, {})[tc] = w
            located = self._coords_of_pair(sh.degree(ta), left, right)
            if located is None:
                raise CertificateFailure(
                    "a multiply-by-basis-element pair escaped the solved space"
                )
            start, coords = located
            for off, c in enumerate(coords):
                if not field.is_zero(c):
                    entries.append((ta, (start + off,), c))
        return LinMap.from_entries(sh, self.shape, entries)

    def _verify_embedding(self):
        if solve.rank(self.embed) < self.base.dim:
            raise CertificateFailure("embedding has a kernel")
        lhs = compose(self.embed, self.base.mult)
        rhs = compose(self.mult, tensor_map(self.embed, self.embed))
        if not lhs.equal(rhs):
            raise CertificateFailure("embedding is not multiplicative")
        im = LinMap.identity(self.shape)
        left_sq = compose(self.mult, tensor_map(im, self.embed))
        if not left_sq.equal(compose(self.embed, self.eval_left)):
            raise CertificateFailure("left embed-evaluation square broke")
        right_sq = compose(self.mult, tensor_map(self.embed, im))
        if not right_sq.equal(compose(self.embed, self.eval_right)):
            raise CertificateFailure("right embed-evaluation square broke")

    def embedding_is_iso(self) -> bool:
        return solve.rank(self.embed) == self.dim

    def coset_witnesses(self):
        """Basis multipliers extending the embedding's column space."""
        field = self.base.field
        flat_basis = list(self.shape.basis())
        index = {t: i for i, t in enumerate(flat_basis)}
        rows = []
        for ta in self.base.shape.basis():
            colvec = [field.zero] * len(flat_basis)
            for tout, v in self.embed.apply(ta).items():
                colvec[index[tout]] = v
            rows.append(colvec)
        out = []
        for k in range(self.dim):
            probe = [field.zero] * len(flat_basis)
            probe[k] = field.one
            stacked = [list(r) for r in rows] + [list(p) for p in [probe]]
            before, _ = solve.rref([list(r) for r in rows], field)
            after, _ = solve.rref(stacked, field)
            if after > before:
                out.append(self.carrier.labels[k])
                rows.append(probe)
        return tuple(out)

    def report_lines(self):
        lines = [
            f"multiplier monoid of {self.base.name}: dim {self.dim}",
            f"embedding is an isomorphism: "
            f"{'yes' if self.embedding_is_iso() else 'no'}",
        ]
        witnesses = () if self.embedding_is_iso() else self.coset_witnesses()
        if witnesses:
            lines.append("coset witnesses: " + " ".join(witnesses))
        return lines


def _compose_columns(outer, inner, field):
    """Column form of (outer after inner)."""
    out = {}
    for tin, mids in inner.items():
        acc = {}
        for tmid, v in mids.items():
            for tout, w in outer.get(tmid, {}).items():
                c = field.add(acc.get(tout, field.zero), field.mul(v, w))
                if field.is_zero(c):
                    acc.pop(tout, None)
                else:
                    acc[tout] = c
        if acc:
            out[tin] = acc
    return out


def compute_multiplier_monoid(A: Semigroup) -> MultiplierMonoid:
    return MultiplierMonoid(A)


def embed(A: Semigroup, monoid: MultiplierMonoid = None) -> LinMap:
    """The canonical injection into the multiplier space."""
    if monoid is None:
        monoid = MultiplierMonoid(A)
    if monoid.base is not A:
        raise ShapeMismatch("monoid was solved for a different base")
    return monoid.embed


def induced_map(f1: LinMap, f2: LinMap, src_shape: Shape, monoid: MultiplierMonoid):
    """The unique map into the multiplier space whose evaluations
    recover the given component pair.

    Raises SolveInconsistent when some basis slice of (f1, f2) is not
    a multiplier, which is exactly a failure of the compatibility
    square."""
    base_sh = monoid.base.shape
    if f1.src != src_shape * base_sh or f1.dst != base_sh:
        raise ShapeMismatch("first component must map source@base to base")
    if f2.src != base_sh * src_shape or f2.dst != base_sh:
        raise ShapeMismatch("second component must map base@source to base")
    field = monoid.base.field
    entries = []
    for tx in src_shape.basis():
        left = {}
        right = {}
        for ta in base_sh.basis():
            col = f1.apply(tx + ta)
            if col:
                left[ta] = dict(col)
            col = f2.apply(ta + tx)
            if col:
                right[ta] = dict(col)
        located = monoid._coords_of_pair(src_shape.degree(tx), left, right)
        if located is None:
            raise SolveInconsistent(
                "component pair fails the multiplier compatibility square"
            )
        start, coords = located
        for off, c in enumerate(coords):
            if not field.is_zero(c):
                entries.append((tx, (start + off,), c))
    return LinMap.from_entries(src_shape, monoid.shape, entries)


def components_from_map(f: LinMap, monoid: MultiplierMonoid):
    """Evaluate a map into the multiplier space back to a component pair."""
    if f.dst != monoid.shape:
        raise ShapeMismatch("map must land in the multiplier space")
    src = f.src
    ident = LinMap.identity(monoid.base.shape)
    f1 = compose(monoid.eval_left, tensor_map(f, ident))
    f2 = compose(monoid.eval_right, tensor_map(ident, f))
    return f1, f2


def map_vs_morphism_multiplicativity(u: LinMap, B: Semigroup, monoid: MultiplierMonoid):
    """Both sides of the multiplicativity correspondence.

    Returns (map side, morphism side): whether u respects the two
    multiplications, and whether the component pair it evaluates to is
    multiplicative as a two-component morphism into the base."""
    map_side = compose(u, B.mult).equal(
        compose(monoid.mult, tensor_map(u, u))
    )
    f1, f2 = components_from_map(u, monoid)
    morphism = certify(MMorphism(B, monoid.base, f1, f2))
    return map_side, morphism.flags.multiplicative


def extend_to_multiplier_monoid(
    g: MMorphism,
    source_monoid: MultiplierMonoid = None,
    target_monoid: MultiplierMonoid = None,
    pivot: str = "first",
) -> LinMap:
    """Extend a dense multiplicative morphism to the multiplier spaces.

    The two components of the extension are pinned by one square each:
    composing with (1 @ g1) must equal g1 . (eval_left @ 1), and
    symmetrically on the right.  Both are solved along a section of
    the corresponding component of g, verified against the square, and
    re-solved along a differently pivoted section to confirm the
    square admits exactly one solution.  The result is verified to be
    unital, multiplicative, and to restrict to g along the embeddings.
    """
    if g.flags is None:
        g = certify(g)
    _demand_arrow(g, "extension input")
    if not isinstance(g.source, Semigroup):
        raise ShapeMismatch("extension needs a semigroup source")
    MA = source_monoid if source_monoid is not None else MultiplierMonoid(g.source)
    MB = target_monoid if target_monoid is not None else MultiplierMonoid(g.target)
    if MA.base is not g.source or MB.base is not g.target:
        raise ShapeMismatch("monoids were solved for different carriers")
    ib = LinMap.identity(g.target.shape)
    imm = LinMap.identity(MA.shape)

    def solve_component(component, evaluation, left: bool, pv):
        _, section = solve.rank_and_section(component, pivot=pv)
        if section is None:
            raise SolveInconsistent("component of g admits no section")
        if left:
            ext = compose(
                component, tensor_map(evaluation, ib), tensor_map(imm, section)
            )
            lhs = compose(ext, tensor_map(imm, component))
            rhs = compose(component, tensor_map(evaluation, ib))
        else:
            ext = compose(
                component, tensor_map(ib, evaluation), tensor_map(section, imm)
            )
            lhs = compose(ext, tensor_map(component, imm))
            rhs = compose(component, tensor_map(ib, evaluation))
        if not lhs.equal(rhs):
            raise SolveInconsistent("extension square has no solution")
        return ext

    ext1 = solve_component(g.f1, MA.eval_left, True, pivot)
    alt1 = solve_component(g.f1, MA.eval_left, True, "alt" if pivot == "first" else "first")
    if not ext1.equal(alt1):
        raise SolveInconsistent("extension square has multiple solutions")
    ext2 = solve_component(g.f2, MA.eval_right, False, pivot)
    alt2 = solve_component(g.f2, MA.eval_right, False, "alt" if pivot == "first" else "first")
    if not ext2.equal(alt2):
        raise SolveInconsistent("extension square has multiple solutions")

    gtilde = induced_map(ext1, ext2, MA.shape, MB)
    ghat = induced_map(g.f1, g.f2, g.src_shape, MB)
    if not compose(gtilde, MA.embed).equal(ghat):
        raise CertificateFailure("extension does not restrict to g")
    if not compose(gtilde, MA.mult).equal(
        compose(MB.mult, tensor_map(gtilde, gtilde))
    ):
        raise CertificateFailure("extension is not multiplicative")
    if not compose(gtilde, MA.unit).equal(MB.unit):
        raise CertificateFailure("extension does not preserve the unit")
    return gtilde
