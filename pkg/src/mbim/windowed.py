"""The function algebra on the integer line, handled through a window.

The carrier has one basis vector per integer; only the slice indexed by
[-W, W] is ever named, and nothing is ever stored as a matrix over that
slice.  Structure maps are kept as exact symbolic rules instead: each
map is a finite sum of terms "on the affine locus E x = f, send delta_x
to c * delta_(A x + b)".  Rules compose, tensor and evaluate exactly,
so an intermediate result is free to leave the window; truncating it
there is precisely the mistake this representation exists to avoid.

Two maps are compared on the core box of input tuples, the window
shrunk by the deepest structural composite the checkers form (three
applications, one index step of support growth each).  The built-in
rules are translation equivariant, which is what promotes agreement on
that finite box to agreement on all of Z; the stability tests exercise
the promotion by re-running verdicts at a wider window.

Surjectivity onto the window span is never decided by elimination.  A
map is credited as a member of the distinguished surjection class only
when it carries a constructive section, a symbolic right inverse
verified against the map itself.  Sections ride along composition and
tensoring, so the derived comultiplications inherit them; a mutated map
loses its section and with it every density credit, which is the
honest reading when no finite certificate exists.
"""

import itertools
from typing import NamedTuple

from . import intlat, kernels
from .errors import (
    CertificateFailure,
    FieldMismatch,
    InfiniteShape,
    ShapeMismatch,
    SolveInconsistent,
    WindowTooSmall,
)
from .gradings import GradingContext
from .scalars import PrimeField, Rationals
from .semigroups import Certificates

# deepest chain of structural rule applications any checker composes
_CORE_MARGIN = 3
# smallest window whose core box still contains every pinned mutation
# site together with its full reach under depth-3 composites
_MIN_WINDOW = 8


class ZShape:
    """A tensor power of the windowed integer line.

    Basis tuples are integer vectors; `label` renders them in the d#
    naming the window uses for its slice.  There is no finite basis to
    enumerate, so anything that wants one gets InfiniteShape and must
    go through the symbolic route instead.
    """

    __slots__ = ("window", "arity", "field", "context")

    def __init__(self, window: int, arity: int, field, context):
        if window < 1:
            raise WindowTooSmall("window must be a positive integer")
        self.window = window
        self.arity = arity
        self.field = field
        self.context = context

    def __mul__(self, other: "ZShape") -> "ZShape":
        if not isinstance(other, ZShape):
            raise ShapeMismatch("cannot mix windowed and finite factors")
        if (
            other.window != self.window
            or other.field != self.field
            or other.context != self.context
        ):
            raise ShapeMismatch("windowed factors disagree on window or scalars")
        return ZShape(self.window, self.arity + other.arity, self.field, self.context)

    def power(self, k: int) -> "ZShape":
        return ZShape(self.window, self.arity * k, self.field, self.context)

    def is_unit(self) -> bool:
        return self.arity == 0

    def label(self, t) -> str:
        return "(" + ",".join(f"d{i}" for i in t) + ")"

    def basis(self):
        raise InfiniteShape(
            "the windowed line has no finite basis; comparisons run on "
            "the core box and density needs a constructive section"
        )

    @property
    def dim(self):
        raise InfiniteShape("windowed shapes have no finite dimension")

    def core_radius(self) -> int:
        r = self.window - _CORE_MARGIN
        if self.arity and r < 1:
            raise WindowTooSmall(
                f"window {self.window} leaves no core box after shrinking "
                f"by the composite depth {_CORE_MARGIN}"
            )
        return r

    def windowed_identity(self) -> "ZMap":
        k = self.arity
        rows = tuple(
            tuple(1 if i == j else 0 for j in range(k)) for i in range(k)
        )
        term = ZTerm((), rows, (0,) * k, self.field.one)
        out = ZMap(self, self, (term,), _normalized=True)
        out.section = out
        return out

    def windowed_swap(self, other: "ZShape", inverse: bool = False) -> "ZMap":
        """The braiding block swap; trivial grading makes it plain.

        Forward maps self*other to other*self; `inverse` returns the
        map other*self -> self*other (the two agree here up to shape
        bookkeeping, since every bicharacter value is 1).
        """
        if not isinstance(other, ZShape):
            raise ShapeMismatch("cannot braid windowed with finite factors")
        p, q = self.arity, other.arity
        src = other * self if inverse else self * other
        dst = self * other if inverse else other * self
        k = p + q
        first, second = (p, q) if inverse else (q, p)
        rows = []
        for i in range(first):
            rows.append(tuple(1 if j == second + i else 0 for j in range(k)))
        for i in range(second):
            rows.append(tuple(1 if j == i else 0 for j in range(k)))
        term = ZTerm((), tuple(rows), (0,) * k, self.field.one)
        out = ZMap(src, dst, (term,), _normalized=True)
        out.section = ZMap(dst, src, (term_transpose(term, self.field),), _normalized=True)
        out.section.section = out
        return out

    def __eq__(self, other):
        return (
            isinstance(other, ZShape)
            and self.window == other.window
            and self.arity == other.arity
            and self.field == other.field
            and self.context == other.context
        )

    def __hash__(self):
        return hash((self.window, self.arity, self.field, self.context))

    def __repr__(self):
        return f"Z[{-self.window}..{self.window}]^{self.arity}"


class ZTerm(NamedTuple):
    """One rule clause: on the locus {x : eqs hold}, delta_x goes to
    coeff * delta_(mat @ x + off)."""

    eqs: tuple  # ((row, rhs), ...) integer equality constraints
    mat: tuple  # output rows, one integer row per output coordinate
    off: tuple  # integer offset per output coordinate
    coeff: object  # field payload

    def active(self, x) -> bool:
        for row, rhs in self.eqs:
            s = 0
            for a, b in zip(row, x):
                s += a * b
            if s != rhs:
                return False
        return True

    def out(self, x):
        return tuple(
            sum(m * v for m, v in zip(row, x)) + o
            for row, o in zip(self.mat, self.off)
        )


def term_transpose(term: ZTerm, field) -> ZTerm:
    """Inverse of a permutation term (unit coefficient, no constraints)."""
    k = len(term.mat)
    rows = [[0] * k for _ in range(k)]
    for i, row in enumerate(term.mat):
        for j, v in enumerate(row):
            if v:
                rows[j][i] = v
    return ZTerm((), tuple(tuple(r) for r in rows), (0,) * k, field.one)


def _normalize(terms, arity, field):
    """Drop infeasible clauses, merge clauses with one locus and rule,
    drop vanished coefficients."""
    merged = {}
    order = []
    for term in terms:
        lat = intlat.lattice_from_constraints(arity, term.eqs)
        if lat is None:
            continue
        key = (lat.key(), term.mat, term.off)
        if key in merged:
            old = merged[key]
            merged[key] = ZTerm(old.eqs, old.mat, old.off, field.add(old.coeff, term.coeff))
        else:
            merged[key] = term
            order.append(key)
    out = []
    for key in order:
        term = merged[key]
        if not field.is_zero(term.coeff):
            out.append(term)
    return tuple(out)


class ZMap:
    """An exact symbolic map between windowed shapes.

    The term list is the whole state; evaluation at any integer tuple
    is literal substitution, so composites never lose support that
    wanders outside the window.  `section`, when set, is a claimed
    right inverse; it is verified once on first use and the result is
    cached.
    """

    __slots__ = ("src", "dst", "terms", "section", "_section_ok")

    def __init__(self, src: ZShape, dst: ZShape, terms, section=None, _normalized=False):
        if not isinstance(src, ZShape) or not isinstance(dst, ZShape):
            raise ShapeMismatch("ZMap endpoints must be windowed shapes")
        if src.field != dst.field:
            raise FieldMismatch("map endpoints over different fields")
        if src.window != dst.window or src.context != dst.context:
            raise ShapeMismatch("map endpoints disagree on window or grading")
        self.src = src
        self.dst = dst
        self.terms = tuple(terms) if _normalized else _normalize(terms, src.arity, src.field)
        self.section = section
        self._section_ok = None

    @property
    def field(self):
        return self.src.field

    @classmethod
    def zero(cls, src: ZShape, dst: ZShape) -> "ZMap":
        return cls(src, dst, (), _normalized=True)

    def evaluate(self, x) -> dict:
        """Exact image of the basis vector at x, as {out_tuple: payload}."""
        field = self.field
        out = {}
        for term in self.terms:
            if not term.active(x):
                continue
            y = term.out(x)
            prev = out.get(y)
            acc = term.coeff if prev is None else field.add(prev, term.coeff)
            if field.is_zero(acc):
                out.pop(y, None)
            else:
                out[y] = acc
        return out

    def entry(self, cin, cout):
        return self.evaluate(cin).get(cout, self.field.zero)

    def compose(self, other: "ZMap") -> "ZMap":
        if not isinstance(other, ZMap):
            raise ShapeMismatch("cannot compose a windowed map with a finite one")
        if other.dst != self.src:
            raise ShapeMismatch(f"cannot compose {self!r} after {other!r}")
        field = self.field
        terms = []
        for to in other.terms:
            for ts in self.terms:
                eqs = list(to.eqs)
                for row, rhs in ts.eqs:
                    comb = tuple(
                        sum(row[i] * to.mat[i][j] for i in range(len(row)))
                        for j in range(other.src.arity)
                    )
                    shift = sum(r * o for r, o in zip(row, to.off))
                    eqs.append((comb, rhs - shift))
                mat = tuple(
                    tuple(
                        sum(srow[i] * to.mat[i][j] for i in range(len(srow)))
                        for j in range(other.src.arity)
                    )
                    for srow in ts.mat
                )
                off = tuple(
                    sum(srow[i] * to.off[i] for i in range(len(srow))) + so
                    for srow, so in zip(ts.mat, ts.off)
                )
                terms.append(ZTerm(tuple(eqs), mat, off, field.mul(ts.coeff, to.coeff)))
        section = None
        if self.section is not None and other.section is not None:
            section = other.section._compose_plain(self.section)
        out = ZMap(other.src, self.dst, terms)
        out.section = section
        return out

    def _compose_plain(self, other: "ZMap") -> "ZMap":
        """Compose without attempting section propagation (sections of
        sections are never needed and would recurse)."""
        saved_self, saved_other = self.section, other.section
        self.section = None
        other.section = None
        try:
            return self.compose(other)
        finally:
            self.section = saved_self
            other.section = saved_other

    def tensor(self, other: "ZMap") -> "ZMap":
        if not isinstance(other, ZMap):
            raise ShapeMismatch("cannot tensor a windowed map with a finite one")
        field = self.field
        k1, k2 = self.src.arity, other.src.arity
        terms = []
        for t1 in self.terms:
            for t2 in other.terms:
                eqs = [(row + (0,) * k2, rhs) for row, rhs in t1.eqs]
                eqs += [((0,) * k1 + row, rhs) for row, rhs in t2.eqs]
                mat = tuple(row + (0,) * k2 for row in t1.mat) + tuple(
                    (0,) * k1 + row for row in t2.mat
                )
                off = t1.off + t2.off
                terms.append(ZTerm(tuple(eqs), mat, off, field.mul(t1.coeff, t2.coeff)))
        section = None
        if self.section is not None and other.section is not None:
            section = self.section._tensor_plain(other.section)
        out = ZMap(self.src * other.src, self.dst * other.dst, terms)
        out.section = section
        return out

    def _tensor_plain(self, other: "ZMap") -> "ZMap":
        saved_self, saved_other = self.section, other.section
        self.section = None
        other.section = None
        try:
            return self.tensor(other)
        finally:
            self.section = saved_self
            other.section = saved_other

    def with_entry(self, cin, cout, value) -> "ZMap":
        """A copy whose action on delta_cin has coefficient `value` at
        cout.  Any genuine change discards the section: the corrected
        map carries no constructive density certificate."""
        field = self.field
        delta = field.sub(value, self.entry(cin, cout))
        if field.is_zero(delta):
            return self
        k = self.src.arity
        eqs = tuple(
            (tuple(1 if j == i else 0 for j in range(k)), cin[i]) for i in range(k)
        )
        mat = tuple((0,) * k for _ in range(self.dst.arity))
        patch = ZTerm(eqs, mat, tuple(cout), delta)
        return ZMap(self.src, self.dst, self.terms + (patch,))

    def with_section(self, section: "ZMap") -> "ZMap":
        """A copy carrying `section` as its density certificate.

        The claim is not trusted: the first has_verified_section call
        checks the defining equation and raises on a false attachment."""
        if section.src != self.dst or section.dst != self.src:
            raise ShapeMismatch("section must run opposite to the map")
        return ZMap(self.src, self.dst, self.terms, section=section, _normalized=True)

    def first_difference(self, other: "ZMap"):
        """First core-box tuple where the two maps differ, or None.

        A small inner box is scanned first: failures injected anywhere
        near the origin surface immediately, and a clean inner box
        costs under a tenth of the full certification sweep that
        follows it.
        """
        if not isinstance(other, ZMap):
            raise ShapeMismatch("can only compare against another windowed map")
        if other.src != self.src or other.dst != self.dst:
            raise ShapeMismatch("cannot compare maps with different shapes")
        k = self.src.arity
        if k == 0:
            return None if self.evaluate(()) == other.evaluate(()) else ()
        radius = self.src.core_radius()
        stages = [3, radius] if radius > 3 else [radius]
        enc = _encode_pair(self, other)
        for r in stages:
            if enc is None:
                w = _box_diff_generic(self, other, k, r)
            else:
                w = kernels.box_first_difference(enc[0], enc[1], k, r, enc[2])
            if w is not None:
                return tuple(w)
        return None

    def equal(self, other: "ZMap") -> bool:
        return self.first_difference(other) is None

    def has_verified_section(self) -> bool:
        """True when the attached section really is a right inverse.

        No section means no certificate, reported as False; an attached
        section that fails its defining equation is an engine bug and
        raises instead of downgrading."""
        if self.section is None:
            return False
        if self._section_ok is None:
            ident = self.dst.windowed_identity()
            w = self._compose_plain(self.section).first_difference(ident)
            if w is not None:
                raise SolveInconsistent(
                    f"declared section fails its defining equation at {w}"
                )
            self._section_ok = True
        return self._section_ok

    def __repr__(self):
        return f"ZMap({self.src!r} -> {self.dst!r}, {len(self.terms)} terms)"


def _encode_pair(f: ZMap, g: ZMap):
    """Kernel encoding of both term lists, or None when payloads are
    not plain integers (the generic path handles those)."""
    field = f.field
    if isinstance(field, PrimeField):
        p = field.p
    elif isinstance(field, Rationals):
        p = 0
    else:
        return None
    enc = []
    for m in (f, g):
        rows = []
        for term in m.terms:
            c = term.coeff
            if p == 0:
                if c.denominator != 1:
                    return None
                c = int(c)
            rows.append((term.eqs, term.mat, term.off, c))
        enc.append(tuple(rows))
    return enc[0], enc[1], p


def _box_diff_generic(f: ZMap, g: ZMap, arity: int, radius: int):
    rng = range(-radius, radius + 1)
    for x in itertools.product(rng, repeat=arity):
        if f.evaluate(x) != g.evaluate(x):
            return x
    return None


class NamedMultiplier(NamedTuple):
    """A declared multiplier: a left and a right action rule plus the
    support growth its composites are allowed to add."""

    name: str
    left: ZMap
    right: ZMap
    growth: int


class WindowedSemigroup:
    """Windowed peer of the finite semigroup carrier.

    Quacks like one where the checkers look: shape, mult, name,
    certificates, field and context.  Multiplier structure is exposed
    only through the declared named multipliers; there is no ambient
    finite-dimensional multiplier construction to fall back on.
    """

    __slots__ = ("name", "shape", "mult", "certificates", "named_multipliers")

    def __init__(self, shape: ZShape, mult: ZMap, name: str, named_multipliers=()):
        if mult.src != shape.power(2) or mult.dst != shape:
            raise ShapeMismatch("multiplication must map carrier^2 to carrier")
        self.shape = shape
        self.mult = mult
        self.name = name
        self.named_multipliers = tuple(named_multipliers)
        self.certificates = _certify_windowed(shape, mult)

    @property
    def field(self):
        return self.shape.field

    @property
    def context(self):
        return self.shape.context

    def windowed_tensor(self, other: "WindowedSemigroup") -> "WindowedSemigroup":
        if not isinstance(other, WindowedSemigroup):
            raise ShapeMismatch("cannot tensor windowed with finite carriers")
        sa, sb = self.shape, other.shape
        ia = sa.windowed_identity()
        ib = sb.windowed_identity()
        mid = ia.tensor(sb.windowed_swap(sa)).tensor(ib)
        mult = self.mult.tensor(other.mult).compose(mid)
        return WindowedSemigroup(
            sa * sb, mult, name=f"{self.name}(x){other.name}"
        )

    def windowed_unit(self) -> "WindowedSemigroup":
        point = ZShape(self.shape.window, 0, self.field, self.context)
        return WindowedSemigroup(point, point.windowed_identity(), name="I")

    def __repr__(self):
        return f"WindowedSemigroup({self.name}, window={self.shape.window})"


def _certify_windowed(shape: ZShape, mult: ZMap) -> Certificates:
    one = shape.windowed_identity()
    assoc = mult.compose(mult.tensor(one)).equal(mult.compose(one.tensor(mult)))
    nondeg = _window_annihilator_free(shape, mult)
    in_q = mult.section is not None and mult.has_verified_section()
    return Certificates(assoc, nondeg, in_q)


def _window_annihilator_free(shape: ZShape, mult: ZMap) -> bool:
    """No window-supported vector annihilates under either action.

    Probes run one step past the window on the free side, so boundary
    basis vectors meet partners their rules reach for.  Together with
    translation equivariance of the rules this covers every finitely
    supported candidate: translate its support into the window and the
    probe rows here see it.
    """
    w = shape.window
    support = list(itertools.product(range(-w, w + 1), repeat=shape.arity))
    probes = list(itertools.product(range(-w - 1, w + 2), repeat=shape.arity))
    index = {s: i for i, s in enumerate(support)}
    field = shape.field
    for side in ("left", "right"):
        rows = {}
        for t in probes:
            for s in support:
                pair = s + t if side == "left" else t + s
                for out, c in mult.evaluate(pair).items():
                    rows.setdefault((t, out), {})[index[s]] = c
        if not _kernel_trivial(list(rows.values()), len(support), field):
            return False
    return True


def _kernel_trivial(rows, n, field) -> bool:
    """True when the sparse system rows @ a == 0 forces a == 0."""
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = field.inv(row[col])
                pivots[col] = {c: field.mul(inv, v) for c, v in row.items()}
                break
            factor = row[col]
            for c, v in piv.items():
                acc = field.sub(row.get(c, field.zero), field.mul(factor, v))
                if field.is_zero(acc):
                    row.pop(c, None)
                else:
                    row[c] = acc
        if len(pivots) == n:
            return True
    return len(pivots) == n


def build_windowed_KZ(window: int = 8, field=None):
    """Pointwise function algebra on Z, windowed at the given width.

    Structure rules: pointwise product, the two translation kernels
    delta_s (x) delta_t -> delta_(s-t) (x) delta_t and
    delta_s (x) delta_t -> delta_s (x) delta_(t-s), and evaluation at
    zero as the counit candidate.  Every rule adds at most one index
    step of support per application, and all of them are translation
    equivariant.  Windows below the certified minimum are refused.
    """
    from .bimonoid import MultiplierBimonoidData

    if window < _MIN_WINDOW:
        raise WindowTooSmall(
            f"window {window} is below the smallest certified window {_MIN_WINDOW}"
        )
    if field is None:
        field = Rationals()
    ctx = GradingContext.trivial(field)
    line = ZShape(window, 1, field, ctx)
    sq = line.power(2)
    point = ZShape(window, 0, field, ctx)
    one = field.one

    mult = ZMap(sq, line, (ZTerm((((1, -1), 0),), ((1, 0),), (0,), one),))
    mult.section = ZMap(line, sq, (ZTerm((), ((1,), (1,)), (0, 0), one),))

    t1 = ZMap(sq, sq, (ZTerm((), ((1, -1), (0, 1)), (0, 0), one),))
    t1.section = ZMap(sq, sq, (ZTerm((), ((1, 1), (0, 1)), (0, 0), one),))

    t2 = ZMap(sq, sq, (ZTerm((), ((1, 0), (-1, 1)), (0, 0), one),))
    t2.section = ZMap(sq, sq, (ZTerm((), ((1, 0), (1, 1)), (0, 0), one),))

    e = ZMap(line, point, (ZTerm((((1,), 0),), (), (), one),))
    e.section = ZMap(point, line, (ZTerm((), ((),), (0,), one),))

    ident = line.windowed_identity()
    named = (
        NamedMultiplier("1", ident, ident, 0),
        NamedMultiplier("0", ZMap.zero(line, line), ZMap.zero(line, line), 0),
        _i_pair(line, mult, 0),
        _i_pair(line, mult, 1),
    )
    base = WindowedSemigroup(
        line, mult, name=f"functions(Z)|W{window}", named_multipliers=named
    )
    return MultiplierBimonoidData(base, t1, t2, e, name=f"kz:W{window}")


def _i_pair(line: ZShape, mult: ZMap, s: int) -> NamedMultiplier:
    k = 1
    eqs = (((1,), s),)
    ident_row = ((1,),)
    left = ZMap(line, line, (ZTerm(eqs, ident_row, (0,), line.field.one),))
    right = ZMap(line, line, (ZTerm(eqs, ident_row, (0,), line.field.one),))
    return NamedMultiplier(f"i(d{s})", left, right, 0)


def i_multiplier(A: WindowedSemigroup, s: int) -> NamedMultiplier:
    """The multiplier pair of the window basis vector at index s:
    both actions multiply by delta_s through the declared product."""
    return _i_pair(A.shape, A.mult, s)


def check_named_multiplier(A: WindowedSemigroup, nm: NamedMultiplier) -> bool:
    """The two module laws and the exchange law for one declared pair."""
    m = A.mult
    one = A.shape.windowed_identity()
    left_law = nm.left.compose(m).equal(m.compose(nm.left.tensor(one)))
    right_law = nm.right.compose(m).equal(m.compose(one.tensor(nm.right)))
    exchange = m.compose(nm.right.tensor(one)).equal(m.compose(one.tensor(nm.left)))
    return left_law and right_law and exchange


def multiplier_table(A: WindowedSemigroup) -> dict:
    """Composition table of the declared multipliers.

    Verifies each declared pair, closure of the list under the
    multiplier product, and that the pair named "1" is a two-sided
    unit for it.  Escaping the list is a certificate failure: the
    windowed carrier promises no multipliers beyond the named ones.
    """
    named = A.named_multipliers
    for nm in named:
        if not check_named_multiplier(A, nm):
            raise CertificateFailure(f"declared multiplier {nm.name} fails its laws")
    table = {}
    for a in named:
        for b in named:
            left = a.left.compose(b.left)
            right = b.right.compose(a.right)
            match = None
            for c in named:
                if left.equal(c.left) and right.equal(c.right):
                    match = c.name
                    break
            if match is None:
                raise CertificateFailure(
                    f"product {a.name}*{b.name} leaves the declared multipliers"
                )
            table[(a.name, b.name)] = match
    unit = next((nm for nm in named if nm.name == "1"), None)
    if unit is None:
        raise CertificateFailure("no declared unit multiplier")
    for nm in named:
        if table[("1", nm.name)] != nm.name or table[(nm.name, "1")] != nm.name:
            raise CertificateFailure("declared unit multiplier fails the unit law")
    return table


def unit_gap_witness(A: WindowedSemigroup) -> int:
    """An index just past the window where no window-supported element
    can act as the identity.

    The product of any window basis vector with the basis vector at
    that index vanishes, so every combination supported inside the
    window kills it, while the identity multiplier fixes it.  This is
    simultaneously the no-unit certificate for the algebra and the
    witness that the unit multiplier lies outside the windowed image
    of the embedding of the algebra into its multipliers.
    """
    w = A.shape.window
    probe = w + 1
    for s in range(-w, w + 1):
        if A.mult.evaluate((s, probe)) or A.mult.evaluate((probe, s)):
            raise CertificateFailure(
                f"window element d{s} reaches past the window at d{probe}"
            )
    if not A.mult.evaluate((probe, probe)):
        raise CertificateFailure("probe vector is its own annihilator")
    return probe
