"""Comonoids in the multiplier category and the equivalence verdict.

A comonoid here is a semigroup with a comultiplication morphism into
its square and a counit morphism into the tensor unit, both living in
the multiplier category.  The check battery certifies the two arrows,
verifies the counit laws, and settles coassociativity by solving for
the unique maps through the epi top rows of the defining diagrams.

The other half of the module turns bimonoid data into a comonoid and
compares the two axiom batteries; the verdict is the only place the
engine is allowed to say DISAGREE, and a DISAGREE is always a bug in
the engine rather than in the data.
"""

from dataclasses import dataclass

from . import solve
from .bimonoid import (
    AxiomReport,
    CheckLine,
    MultiplierBimonoidData,
    check_bimonoid_axioms,
    equation_thunks,
    render_witness,
    tensor_chain,
)
from .errors import ShapeMismatch, SolveInconsistent
from .linmaps import LinMap, braiding, compose
from .mcategory import MMorphism, make_mmorphism
from .monoidal import _packer, tensor_semigroup
from .semigroups import Semigroup, unit_semigroup


@dataclass
class ComonoidInM:
    """Certified arrows plus the raw component maps they package.

    d1 and d2 are the honest cube-to-square components; d holds the
    same data as an arrow into the (flattened) square object, which is
    what certification and composition want.
    """

    object: Semigroup
    d: MMorphism
    e: MMorphism
    d1: LinMap
    d2: LinMap
    counit: LinMap


# squares are re-certified from scratch, which is not free; mutation
# campaigns hit the same base thousands of times, so memoize by
# identity (strong refs, process lifetime, a handful of bases)
_square_memo = {}


def certified_square(A: Semigroup) -> Semigroup:
    hit = _square_memo.get(id(A))
    if hit is not None and hit[0] is A:
        return hit[1]
    CC = tensor_semigroup(A, A)
    _square_memo[id(A)] = (A, CC)
    return CC


def comonoid_from_parts(A: Semigroup, d1: LinMap, d2: LinMap, counit: LinMap) -> ComonoidInM:
    """Package raw maps as certified arrows; no axiom is checked here."""
    sa = A.shape
    if d1.src != sa.power(3) or d1.dst != sa.power(2):
        raise ShapeMismatch("d1 must map the cube to the square")
    if d2.src != sa.power(3) or d2.dst != sa.power(2):
        raise ShapeMismatch("d2 must map the cube to the square")
    if counit.src != sa or not counit.dst.is_unit():
        raise ShapeMismatch("counit must map the object to the tensor unit")
    CC = certified_square(A)
    pack, unpack = _packer(CC)
    ia = LinMap.identity(sa)
    f1 = compose(pack, d1, tensor_chain(ia, unpack))
    f2 = compose(pack, d2, tensor_chain(unpack, ia))
    d = make_mmorphism(A, CC, f1, f2)
    if hasattr(A, "windowed_unit"):
        I = A.windowed_unit()
    else:
        I = unit_semigroup(A.field, A.context)
    e = make_mmorphism(A, I, counit, counit)
    return ComonoidInM(A, d, e, d1, d2, counit)


def comonoid_from_bimonoid(data: MultiplierBimonoidData) -> ComonoidInM:
    if "comonoid" not in data._cache:
        d1, d2 = data.derived()
        data._cache["comonoid"] = comonoid_from_parts(data.base, d1, d2, data.e)
    return data._cache["comonoid"]


def _cert_line(tag: str, f: MMorphism) -> CheckLine:
    flags = f.flags
    bad = [
        name
        for name, ok in (
            ("compatible", flags.compatible),
            ("multiplicative", flags.multiplicative),
            ("dense", flags.dense),
        )
        if not ok
    ]
    if not bad:
        return CheckLine(tag, True)
    return CheckLine(tag, False, "[" + ",".join(bad) + "]")


def _diagram(tag, lhs, rhs) -> CheckLine:
    w = lhs.first_difference(rhs)
    if w is None:
        return CheckLine(tag, True)
    return CheckLine(tag, False, render_witness(lhs.src, w))


def counit_diagrams(A: Semigroup, d1: LinMap, d2: LinMap, e: LinMap):
    """The four counit squares, each over the fourth power.

    L1/R1 feed the report; L2/R2 are the braided companions used by
    the consistency asserts and the derivation chains.
    """
    sa = A.shape
    m = A.mult
    one = LinMap.identity(sa)
    c = braiding(sa, sa)
    return {
        "L1": _diagram(
            "COUNIT(left)",
            compose(m, tensor_chain(one, e, m)),
            compose(tensor_chain(e, m), tensor_chain(d1, one)),
        ),
        "L2": _diagram(
            "COUNIT(left')",
            compose(m, tensor_chain(e, m, one), tensor_chain(c, one, one)),
            compose(tensor_chain(e, m), tensor_chain(c, one), tensor_chain(one, d2)),
        ),
        "R1": _diagram(
            "COUNIT(right)",
            compose(m, tensor_chain(m, e, one)),
            compose(tensor_chain(m, e), tensor_chain(one, d2)),
        ),
        "R2": _diagram(
            "COUNIT(right')",
            compose(m, tensor_chain(one, m, e), tensor_chain(one, one, c)),
            compose(tensor_chain(m, e), tensor_chain(one, c), tensor_chain(d1, one)),
        ),
    }


def _solve_vertical(top: LinMap, bottom: LinMap):
    """The unique u with u . top == bottom, via a verified section.

    Returns (u, None) on success, (None, witness_tuple) when the
    candidate fails on some basis tuple, and (None, None) when top is
    not epi so no unique u exists.
    """
    _, section = solve.rank_and_section(top)
    if section is None:
        return None, None
    u = compose(bottom, section)
    w = compose(u, top).first_difference(bottom)
    if w is not None:
        return None, w
    return u, None


def coassociativity_verticals(A: Semigroup, d1: LinMap):
    """Solve both defining diagrams for their dashed verticals.

    Each diagram has a sixth-power top row ending in a square-to-cube
    corner; the vertical is unique whenever d1 and the multiplication
    are surjective.  Returns a dict with the solved maps (or None) and
    rendered witnesses for any failure.
    """
    sa = A.shape
    m = A.mult
    one = LinMap.identity(sa)
    c = braiding(sa, sa)
    first_leg = tensor_chain(d1, one, one, one)
    top_left = compose(
        tensor_chain(one, d1, m),
        tensor_chain(one, one, one, c, one),
        tensor_chain(one, one, c, one, one),
    )
    bottom_left = compose(
        tensor_chain(d1, m),
        tensor_chain(one, one, c, one),
        tensor_chain(one, c, one, one),
        first_leg,
    )
    top_right = compose(
        tensor_chain(one, m, d1),
        tensor_chain(one, one, c, one, one),
    )
    bottom_right = compose(
        tensor_chain(m, d1),
        tensor_chain(one, c, one, one),
        first_leg,
    )
    u_left, w_left = _solve_vertical(top_left, bottom_left)
    u_right, w_right = _solve_vertical(top_right, bottom_right)
    out = {"u_left": u_left, "u_right": u_right, "witness": None}
    if u_left is None:
        out["witness"] = (
            render_witness(top_left.src, w_left) if w_left else "[left vertical not determined]"
        )
    elif u_right is None:
        out["witness"] = (
            render_witness(top_right.src, w_right) if w_right else "[right vertical not determined]"
        )
    else:
        w = u_left.first_difference(u_right)
        if w is not None:
            out["witness"] = render_witness(u_left.src, w)
    out["passed"] = u_left is not None and u_right is not None and out["witness"] is None
    return out


def coassociativity_closed_form(A: Semigroup, t1: LinMap, d1: LinMap) -> LinMap:
    """What the left vertical must be, written without solving."""
    sa = A.shape
    one = LinMap.identity(sa)
    c = braiding(sa, sa)
    cinv = braiding(sa, sa, inverse=True)
    return compose(
        tensor_chain(d1, one),
        tensor_chain(cinv, c),
        tensor_chain(one, t1, one),
        tensor_chain(c, cinv),
    )


def check_comonoid_in_M(c: ComonoidInM, fusion_map: LinMap | None = None, exhaustive: bool = True) -> AxiomReport:
    """Certify the arrows, then counits, then coassociativity.

    With exhaustive=False the battery stops at the first failing line;
    either way the order runs cheapest first, so the expensive
    vertical-solving only happens for data that survived the rest.

    When fusion_map is supplied and d's certificate holds, the solved
    left vertical is asserted against its closed form; a mismatch is
    an engine bug, not a property of the data, hence the raise.
    """
    A = c.object
    lines = []

    def bail():
        return AxiomReport(lines, False)

    lines.append(_cert_line("CERT(e)", c.e))
    if not exhaustive and not lines[-1].passed:
        return bail()
    lines.append(_cert_line("CERT(d)", c.d))
    d_ok = lines[-1].passed
    if not exhaustive and not d_ok:
        return bail()

    diagrams = counit_diagrams(A, c.d1, c.d2, c.counit)
    if d_ok:
        for near, far in (("L1", "L2"), ("R1", "R2")):
            if diagrams[near].passed != diagrams[far].passed:
                raise SolveInconsistent(
                    f"counit squares {near}/{far} disagree on a certified arrow"
                )
    lines.append(diagrams["L1"])
    if not exhaustive and not lines[-1].passed:
        return bail()
    lines.append(diagrams["R1"])
    if not exhaustive and not lines[-1].passed:
        return bail()

    verticals = coassociativity_verticals(A, c.d1)
    if d_ok and fusion_map is not None:
        closed = coassociativity_closed_form(A, fusion_map, c.d1)
        if verticals["u_left"] is None or not verticals["u_left"].equal(closed):
            raise SolveInconsistent(
                "solved left vertical disagrees with its closed form"
            )
    lines.append(CheckLine("COASSOC", verticals["passed"], verticals["witness"]))
    conclusion = all(ln.passed for ln in lines)
    return AxiomReport(lines, conclusion)


AGREE_PASS = "AGREE_PASS"
AGREE_FAIL = "AGREE_FAIL"
DISAGREE = "DISAGREE"


@dataclass
class Verdict:
    kind: str
    bimonoid: AxiomReport
    comonoid: AxiomReport

    @property
    def passed(self) -> bool:
        return self.kind == AGREE_PASS


def check_equivalence(data: MultiplierBimonoidData, exhaustive: bool = True) -> Verdict:
    """Run both sides of the correspondence and compare conclusions.

    The comonoid side always sees the comultiplication derived from
    the fusion maps, and the fusion map is handed over so the closed
    form stays under test on every run.
    """
    key = ("verdict", exhaustive)
    if key in data._cache:
        return data._cache[key]
    bim = check_bimonoid_axioms(data, exhaustive=exhaustive)
    com = check_comonoid_in_M(
        comonoid_from_bimonoid(data), fusion_map=data.t1, exhaustive=exhaustive
    )
    if bim.conclusion and com.conclusion:
        kind = AGREE_PASS
    elif not bim.conclusion and not com.conclusion:
        kind = AGREE_FAIL
    else:
        kind = DISAGREE
    verdict = Verdict(kind, bim, com)
    data._cache[key] = verdict
    return verdict


@dataclass(frozen=True)
class ChainResult:
    """One implication: premises, and the conclusion where they hold.

    conclusion_holds is None when a premise failed (the implication is
    vacuous there and the conclusion is not even computed)."""

    name: str
    premise_tags: tuple
    premises_hold: bool
    conclusion_holds: bool | None

    @property
    def spurious(self) -> bool:
        return self.premises_hold and self.conclusion_holds is False


def check_derivation_chains(data: MultiplierBimonoidData):
    """The implications the engine relies on, checked as implications.

    Each one is evaluated on the given data: when the premises hold
    the conclusion must too, whatever else is broken.  Used across the
    zoo and the mutation campaign to catch wiring drift.
    """
    thunks = equation_thunks(data)
    evaluated = {}

    def holds(tag):
        if tag not in evaluated:
            evaluated[tag] = thunks[tag]().passed
        return evaluated[tag]

    A = data.base
    d1, d2 = data.derived()
    out = []

    def chain(name, premise_tags, conclusion):
        premises = all(holds(t) for t in premise_tags)
        out.append(
            ChainResult(name, tuple(premise_tags), premises, conclusion() if premises else None)
        )

    chain("linearity-from-compatibility", ("EQ(5.2)",), lambda: holds("EQ(5.5)"))
    chain("fusion-short-form", ("EQ(5.3)", "EQ(5.5)"), lambda: holds("EQ(5.4)"))
    chain(
        "fusion-forms-agree",
        ("EQ(5.5)",),
        lambda: holds("EQ(5.13)") == holds("EQ(5.15)"),
    )

    def closed_form_matches():
        verticals = coassociativity_verticals(A, d1)
        if verticals["u_left"] is None:
            return False
        closed = coassociativity_closed_form(A, data.t1, d1)
        return verticals["u_left"].equal(closed)

    chain(
        "coassoc-closed-form",
        ("EQ(5.3)", "EQ(5.5)", "Q(d1)"),
        closed_form_matches,
    )

    def counit_forms_match():
        diagrams = counit_diagrams(A, d1, d2, data.e)
        pairs = (
            ("L1", "EQ(5.7)"),
            ("L2", "EQ(5.8)"),
            ("R1", "EQ(5.9)"),
            ("R2", "EQ(5.10)"),
        )
        return all(diagrams[k].passed == holds(tag) for k, tag in pairs)

    chain("counit-closed-forms", ("EQ(5.1)", "Q(e)"), counit_forms_match)
    return tuple(out)
