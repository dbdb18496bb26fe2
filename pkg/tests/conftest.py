"""Shared helpers: seeded random graded objects and degree-preserving maps."""
from __future__ import annotations

import random

from mbim.gradings import GradingContext
from mbim.linmaps import GradedObject, LinMap, Shape
from mbim.scalars import PrimeField, Rationals
from mbim.semigroups import Semigroup


def rational_pool(field):
    return [field.parse(s) for s in ("1", "-1", "2", "-2", "3", "1/2", "-1/3", "5/2")]


def random_payload(rng, field, nonzero=True):
    if isinstance(field, PrimeField):
        lo = 1 if nonzero else 0
        return rng.randrange(lo, field.p)
    pool = rational_pool(field)
    if not nonzero:
        pool = pool + [field.zero]
    return rng.choice(pool)


def random_object(rng, field, context, dim, name="X", degrees=None):
    if degrees is None:
        grp = context.group
        if type(grp).__name__ == "TrivialGroup":
            degrees = tuple(0 for _ in range(dim))
        else:
            degrees = tuple(rng.choice([0, 1, 2]) for _ in range(dim))
    labels = tuple(f"{name.lower()}{i}" for i in range(dim))
    return GradedObject(name, field, context, labels, degrees)


def random_linmap(rng, src: Shape, dst: Shape, density=0.5):
    """Random degree-preserving map; entries only where degrees agree."""
    dst_by_deg = {}
    for t in dst.basis():
        dst_by_deg.setdefault(dst.degree(t), []).append(t)
    cols = {}
    for cin in src.basis():
        targets = dst_by_deg.get(src.degree(cin), [])
        col = {}
        for cout in targets:
            if rng.random() < density:
                col[cout] = random_payload(rng, src.field)
        if col:
            cols[cin] = col
    return LinMap(src, dst, cols)


def random_surjection(rng, src: Shape, dst: Shape):
    """Random surjective degree-preserving map (src must cover dst
    degreewise); built as a coordinate projection plus random noise."""
    dst_by_deg = {}
    for t in dst.basis():
        dst_by_deg.setdefault(dst.degree(t), []).append(t)
    src_by_deg = {}
    for t in src.basis():
        src_by_deg.setdefault(src.degree(t), []).append(t)
    cols = {}
    for deg, outs in dst_by_deg.items():
        ins = src_by_deg.get(deg, [])
        assert len(ins) >= len(outs), "source too small to surject"
        for i, cout in enumerate(outs):
            cols.setdefault(ins[i], {})[cout] = src.field.one
    f = LinMap(src, dst, cols)
    noise = random_linmap(rng, src, dst, density=0.2)
    cand = f.add(noise.scale(src.field.from_int(rng.choice([0, 1, 2]))))
    from mbim.solve import rank_and_section

    if rank_and_section(cand)[1] is None:
        return f
    return cand


def trivial_ctx(field):
    return GradingContext.trivial(field)


def semigroup_from_constants(field, dim, constants, name="A"):
    """Trivially graded semigroup from structure constants {(i, j, k): payload}."""
    ctx = GradingContext.trivial(field)
    obj = GradedObject(
        name, field, ctx, tuple(f"e{i}" for i in range(dim)), (ctx.group.identity,) * dim
    )
    sh = Shape((obj,))
    entries = [
        ((i, j), (k,), v)
        for (i, j, k), v in constants.items()
        if not field.is_zero(v)
    ]
    return Semigroup(obj, LinMap.from_entries(sh.power(2), sh, entries))


def make_rng(seed=20260817):
    return random.Random(seed)


Q = Rationals()
F5 = PrimeField(5)
F2 = PrimeField(2)
