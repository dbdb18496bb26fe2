"""Exact integer linear algebra on Z^k.

Column-style Hermite reduction with a tracked unimodular transform,
Diophantine solving, and canonical forms for affine sublattices.  The
windowed backend leans on this to decide feasibility of the integer
constraint systems its symbolic terms carry, and to merge terms that
describe the same locus.
"""

from .errors import SolveInconsistent


def column_hnf(rows):
    """Bring an integer matrix to column echelon form by unimodular
    column operations.

    Returns (cols, trans, pivots): `cols` is the reduced matrix as a
    list of columns, `trans` the matching columns of the transform U
    (so mat @ U == reduced), and `pivots` a list of (row, col) pairs.
    Pivot entries are positive and every entry to their left in the
    same row is reduced into [0, pivot).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    cols = [[rows[i][j] for i in range(m)] for j in range(n)]
    trans = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    pivots = []
    r = 0
    for i in range(m):
        if r == n:
            break
        while True:
            live = [j for j in range(r, n) if cols[j][i] != 0]
            if len(live) <= 1:
                break
            j0 = min(live, key=lambda j: abs(cols[j][i]))
            for j in live:
                if j == j0:
                    continue
                q = cols[j][i] // cols[j0][i]
                if q:
                    _addmul(cols[j], cols[j0], -q)
                    _addmul(trans[j], trans[j0], -q)
        live = [j for j in range(r, n) if cols[j][i] != 0]
        if not live:
            continue
        j0 = live[0]
        cols[r], cols[j0] = cols[j0], cols[r]
        trans[r], trans[j0] = trans[j0], trans[r]
        if cols[r][i] < 0:
            cols[r] = [-v for v in cols[r]]
            trans[r] = [-v for v in trans[r]]
        p = cols[r][i]
        for j in range(r):
            q = cols[j][i] // p
            if q:
                _addmul(cols[j], cols[r], -q)
                _addmul(trans[j], trans[r], -q)
        pivots.append((i, r))
        r += 1
    return cols, trans, pivots


def _addmul(dst, src, k):
    for i in range(len(dst)):
        dst[i] += k * src[i]


def solve_integer(rows, rhs):
    """One integer solution of rows @ x == rhs, or None.

    Also returns a basis of the integer kernel: (solution, kernel_cols).
    A zero-row system is solvable by the zero vector, with the full
    standard basis as kernel.
    """
    if not rows:
        raise ValueError("solve_integer needs at least one row")
    cols, trans, pivots = column_hnf(rows)
    n = len(cols)
    res = list(rhs)
    coeff = [0] * n
    for i, c in pivots:
        p = cols[c][i]
        if res[i] % p:
            return None, None
        q = res[i] // p
        coeff[c] = q
        if q:
            _addmul(res, [-v for v in cols[c]], q)
    if any(res):
        return None, None
    x = [0] * (len(trans[0]) if trans else 0)
    for c in range(n):
        if coeff[c]:
            _addmul(x, trans[c], coeff[c])
    rank = len(pivots)
    kernel = [tuple(trans[c]) for c in range(rank, n)]
    return tuple(x), kernel


class AffineLattice:
    """A nonempty coset x0 + span_Z(basis) inside Z^k, canonicalized.

    `basis` columns are in canonical Hermite form and `x0` is the
    canonical coset representative, so equal lattices compare equal as
    values.  The empty set is represented by None at the call sites,
    never by an instance.
    """

    __slots__ = ("dim", "x0", "basis")

    def __init__(self, dim, x0, basis):
        self.dim = dim
        if basis:
            reduced, _, pivots = column_hnf([
                [col[i] for col in basis] for i in range(dim)
            ])
            keep = [tuple(reduced[c]) for _, c in pivots]
        else:
            keep = []
        x0 = list(x0)
        # reduce x0 against the echelon columns front to back
        for col in keep:
            lead = next(i for i, v in enumerate(col) if v != 0)
            q = x0[lead] // col[lead]
            if q:
                _addmul(x0, [-v for v in col], q)
        self.x0 = tuple(x0)
        self.basis = tuple(keep)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def key(self):
        return (self.dim, self.x0, self.basis)

    def __eq__(self, other):
        return isinstance(other, AffineLattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def member(self, x) -> bool:
        diff = [a - b for a, b in zip(x, self.x0)]
        if not self.basis:
            return not any(diff)
        rows = [[col[i] for col in self.basis] for i in range(self.dim)]
        sol, _ = solve_integer(rows, diff)
        return sol is not None

    def __repr__(self):
        return f"AffineLattice(x0={self.x0}, rank={self.rank})"


def lattice_from_constraints(dim, eqs):
    """Solution set of the system {row . x == rhs} as an AffineLattice,
    or None when the system has no integer solution.

    `eqs` is a sequence of (row, rhs) pairs; an empty sequence gives
    all of Z^dim.
    """
    if not eqs:
        ident = [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]
        return AffineLattice(dim, (0,) * dim, ident)
    rows = [list(r) for r, _ in eqs]
    rhs = [v for _, v in eqs]
    if dim == 0:
        if any(rhs):
            return None
        return AffineLattice(0, (), [])
    sol, kernel = solve_integer(rows, rhs)
    if sol is None:
        return None
    return AffineLattice(dim, sol, kernel)


def intersect(a: AffineLattice, b: AffineLattice):
    """Intersection of two cosets in the same Z^k, or None when disjoint."""
    if a.dim != b.dim:
        raise SolveInconsistent("affine lattices live in different spaces")
    dim = a.dim
    if not a.basis:
        return a if b.member(a.x0) else None
    if not b.basis:
        return b if a.member(b.x0) else None
    ra, rb = len(a.basis), len(b.basis)
    rows = [
        [a.basis[j][i] for j in range(ra)] + [-b.basis[j][i] for j in range(rb)]
        for i in range(dim)
    ]
    rhs = [b.x0[i] - a.x0[i] for i in range(dim)]
    sol, kernel = solve_integer(rows, rhs)
    if sol is None:
        return None
    point = list(a.x0)
    for j in range(ra):
        if sol[j]:
            _addmul(point, a.basis[j], sol[j])
    cols = []
    for vec in kernel:
        col = [0] * dim
        for j in range(ra):
            if vec[j]:
                _addmul(col, a.basis[j], vec[j])
        if any(col):
            cols.append(tuple(col))
    return AffineLattice(dim, point, cols)
