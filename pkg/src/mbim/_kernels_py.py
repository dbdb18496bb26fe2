"""Pure-Python composition and box-scan kernels.

Sparse maps are stored column-wise: cols[in_tuple] = {out_tuple: payload}.
Composition is the single hottest loop in the package (every axiom check
and the whole mutation campaign sit on top of it), so the same two
functions also exist in the compiled module; mbim.kernels picks one at
import time.  Zero results are dropped, never stored.

The box scan compares two windowed rule lists on every integer tuple in
a centered box; it is the other hot loop, since the windowed carrier
answers every equality question through it.  Terms arrive as
(eqs, mat, off, coeff) with integer payloads, coefficient arithmetic is
exact for p == 0 and mod p otherwise.
"""

import itertools


def compose_cols_mod(g_cols, f_cols, p):
    """Columns of g o f with int payloads mod p."""
    out = {}
    for cin, col in f_cols.items():
        acc = {}
        for mid, a in col.items():
            gcol = g_cols.get(mid)
            if gcol is None:
                continue
            for cout, b in gcol.items():
                v = acc.get(cout, 0) + a * b
                acc[cout] = v
        cleaned = {k: v % p for k, v in acc.items() if v % p}
        if cleaned:
            out[cin] = cleaned
    return out


def box_first_difference(terms_a, terms_b, arity, radius, p):
    """First tuple in [-radius, radius]^arity (lex order) where the two
    integer term lists evaluate differently, or None."""
    rng = range(-radius, radius + 1)
    for x in itertools.product(rng, repeat=arity):
        if _eval_terms(terms_a, x, p) != _eval_terms(terms_b, x, p):
            return x
    return None


def _eval_terms(terms, x, p):
    out = {}
    for eqs, mat, off, c in terms:
        live = True
        for row, rhs in eqs:
            s = 0
            for a, b in zip(row, x):
                s += a * b
            if s != rhs:
                live = False
                break
        if not live:
            continue
        y = tuple(
            sum(m * v for m, v in zip(row, x)) + o for row, o in zip(mat, off)
        )
        acc = out.get(y, 0) + c
        if p:
            acc %= p
        if acc:
            out[y] = acc
        else:
            out.pop(y, None)
    return out


def compose_cols_obj(g_cols, f_cols):
    """Columns of g o f with payloads supporting + and * (exact fractions)."""
    out = {}
    for cin, col in f_cols.items():
        acc = {}
        for mid, a in col.items():
            gcol = g_cols.get(mid)
            if gcol is None:
                continue
            for cout, b in gcol.items():
                prev = acc.get(cout)
                acc[cout] = a * b if prev is None else prev + a * b
        cleaned = {k: v for k, v in acc.items() if v}
        if cleaned:
            out[cin] = cleaned
    return out
