# Compiled twin of _kernels_py; same contract, same results, just faster
# dict traffic and box scanning.  Keep the two files in lockstep (tests
# compare them).

from libc.stdlib cimport free, malloc

# capacity limits for the box scan; inputs beyond them fall back to the
# pure mirror rather than failing
DEF MAXK = 16
DEF MAXT = 96


cdef struct FlatTerms:
    long *eq_rows      # total_eqs * arity
    long *eq_rhs       # total_eqs
    int *eq_start      # n + 1 prefix offsets into eq_rows / eq_rhs
    long *mat          # n * out_arity * arity
    long *off          # n * out_arity
    long *coeff        # n
    int n


cdef int _flatten(tuple terms, int arity, int out_arity, FlatTerms *ft) except -1:
    cdef int n = len(terms)
    cdef int total = 0
    cdef int i, j, k, pos
    for i in range(n):
        total += len(terms[i][0])
    ft.n = n
    ft.eq_rows = <long *>malloc(sizeof(long) * max(1, total * arity))
    ft.eq_rhs = <long *>malloc(sizeof(long) * max(1, total))
    ft.eq_start = <int *>malloc(sizeof(int) * (n + 1))
    ft.mat = <long *>malloc(sizeof(long) * max(1, n * out_arity * arity))
    ft.off = <long *>malloc(sizeof(long) * max(1, n * out_arity))
    ft.coeff = <long *>malloc(sizeof(long) * max(1, n))
    if (ft.eq_rows == NULL or ft.eq_rhs == NULL or ft.eq_start == NULL
            or ft.mat == NULL or ft.off == NULL or ft.coeff == NULL):
        raise MemoryError()
    pos = 0
    for i in range(n):
        eqs, mat, off, c = terms[i]
        ft.eq_start[i] = pos
        for row, rhs in eqs:
            for k in range(arity):
                ft.eq_rows[pos * arity + k] = row[k]
            ft.eq_rhs[pos] = rhs
            pos += 1
        for j in range(out_arity):
            for k in range(arity):
                ft.mat[(i * out_arity + j) * arity + k] = mat[j][k]
            ft.off[i * out_arity + j] = off[j]
        ft.coeff[i] = c
    ft.eq_start[n] = pos
    return 0


cdef void _free_flat(FlatTerms *ft):
    free(ft.eq_rows)
    free(ft.eq_rhs)
    free(ft.eq_start)
    free(ft.mat)
    free(ft.off)
    free(ft.coeff)


cdef int _eval_flat(FlatTerms *ft, long *x, int arity, int out_arity,
                    long p, long *ybuf, long *cbuf) nogil:
    """Evaluate one side at x; returns the entry count written into
    ybuf (count * out_arity longs) and cbuf, zeros dropped."""
    cdef int cnt = 0
    cdef int i, j, k, e, hit
    cdef long s, acc
    for i in range(ft.n):
        hit = 1
        for e in range(ft.eq_start[i], ft.eq_start[i + 1]):
            s = 0
            for k in range(arity):
                s += ft.eq_rows[e * arity + k] * x[k]
            if s != ft.eq_rhs[e]:
                hit = 0
                break
        if not hit:
            continue
        # output vector for this term
        for j in range(out_arity):
            s = ft.off[i * out_arity + j]
            for k in range(arity):
                s += ft.mat[(i * out_arity + j) * arity + k] * x[k]
            ybuf[cnt * out_arity + j] = s
        # merge into existing entries
        hit = -1
        for j in range(cnt):
            hit = j
            for k in range(out_arity):
                if ybuf[j * out_arity + k] != ybuf[cnt * out_arity + k]:
                    hit = -1
                    break
            if hit >= 0:
                break
        if hit >= 0:
            acc = cbuf[hit] + ft.coeff[i]
            if p:
                acc = acc % p
            if acc:
                cbuf[hit] = acc
            else:
                # drop by swapping the last entry in
                cnt -= 1
                if hit != cnt:
                    for k in range(out_arity):
                        ybuf[hit * out_arity + k] = ybuf[cnt * out_arity + k]
                    cbuf[hit] = cbuf[cnt]
        else:
            acc = ft.coeff[i]
            if p:
                acc = acc % p
            if acc:
                cbuf[cnt] = acc
                cnt += 1
    return cnt


cdef int _sides_differ(long *ya, long *ca, int na, long *yb, long *cb,
                       int nb, int out_arity) nogil:
    cdef int i, j, k, match
    if na != nb:
        return 1
    for i in range(na):
        match = -1
        for j in range(nb):
            match = j
            for k in range(out_arity):
                if ya[i * out_arity + k] != yb[j * out_arity + k]:
                    match = -1
                    break
            if match >= 0:
                break
        if match < 0 or ca[i] != cb[match]:
            return 1
    return 0


def box_first_difference(tuple terms_a, tuple terms_b, int arity, int radius, long p):
    """First tuple in [-radius, radius]^arity (lex order) where the two
    integer term lists evaluate differently, or None."""
    cdef int out_arity = 0
    if terms_a:
        out_arity = len(terms_a[0][1])
    elif terms_b:
        out_arity = len(terms_b[0][1])
    else:
        return None
    if (arity > MAXK or out_arity > MAXK
            or len(terms_a) > MAXT or len(terms_b) > MAXT):
        from . import _kernels_py
        return _kernels_py.box_first_difference(terms_a, terms_b, arity, radius, p)
    if arity == 0:
        from . import _kernels_py
        return _kernels_py.box_first_difference(terms_a, terms_b, arity, radius, p)

    cdef FlatTerms fa, fb
    _flatten(terms_a, arity, out_arity, &fa)
    try:
        _flatten(terms_b, arity, out_arity, &fb)
    except BaseException:
        _free_flat(&fa)
        raise

    cdef long x[MAXK]
    cdef long ya[MAXT * MAXK]
    cdef long yb[MAXT * MAXK]
    cdef long ca[MAXT]
    cdef long cb[MAXT]
    cdef int na, nb, i, done
    cdef long lo = -radius, hi = radius
    cdef object result = None
    for i in range(arity):
        x[i] = lo
    with nogil:
        while True:
            na = _eval_flat(&fa, x, arity, out_arity, p, ya, ca)
            nb = _eval_flat(&fb, x, arity, out_arity, p, yb, cb)
            if _sides_differ(ya, ca, na, yb, cb, nb, out_arity):
                break
            # odometer step, last coordinate fastest
            done = 1
            for i in range(arity - 1, -1, -1):
                if x[i] < hi:
                    x[i] += 1
                    done = 0
                    break
                x[i] = lo
            if done:
                na = -1
                break
    if na >= 0:
        result = tuple(x[i] for i in range(arity))
    _free_flat(&fa)
    _free_flat(&fb)
    return result

def compose_cols_mod(dict g_cols, dict f_cols, long p):
    cdef dict out = {}
    cdef dict acc, cleaned, gcol, col
    cdef object cin, mid, cout, a, b, v
    for cin, col in f_cols.items():
        acc = {}
        for mid, a in (<dict>col).items():
            gcol = <dict>g_cols.get(mid)
            if gcol is None:
                continue
            for cout, b in gcol.items():
                v = acc.get(cout)
                if v is None:
                    acc[cout] = a * b
                else:
                    acc[cout] = v + a * b
        cleaned = {}
        for cout, v in acc.items():
            v = v % p
            if v:
                cleaned[cout] = v
        if cleaned:
            out[cin] = cleaned
    return out


def compose_cols_obj(dict g_cols, dict f_cols):
    cdef dict out = {}
    cdef dict acc, cleaned, gcol, col
    cdef object cin, mid, cout, a, b, v
    for cin, col in f_cols.items():
        acc = {}
        for mid, a in (<dict>col).items():
            gcol = <dict>g_cols.get(mid)
            if gcol is None:
                continue
            for cout, b in gcol.items():
                v = acc.get(cout)
                if v is None:
                    acc[cout] = a * b
                else:
                    acc[cout] = v + a * b
        cleaned = {}
        for cout, v in acc.items():
            if v:
                cleaned[cout] = v
        if cleaned:
            out[cin] = cleaned
    return out
