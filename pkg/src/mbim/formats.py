"""Text formats for algebras, bimonoid data, and morphism files.

Every syntactic or resolution failure raises ParseError carrying the
1-based line number.  Blank lines and `#` comments are allowed anywhere.

Algebra files:

    algebra <name> dim <n> field <spec> grading <spec>
    bichar <scalar>                  # optional, grading must be nontrivial
    basis <label> deg <g>            # exactly n of these
    mult <i> <j> -> <k> : <scalar>   # absent triples are zero

Bimonoid files extend algebra files with sparse tensor lines

    t1 (i,j) -> (k,l) : <scalar>
    t2 (i,j) -> (k,l) : <scalar>
    e <i> : <scalar>

Morphism files name their endpoints and give two sparse-map blocks in
the generic `out_tuple <- in_tuple : scalar` format:

    source <algebra-name>
    target <algebra-name>
    f1:
    (b) <- (a,b) : <scalar>
    f2:
    (b) <- (b,a) : <scalar>
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .errors import FieldMismatch, ParseError, UnsupportedField
from .gradings import Bicharacter, GradingContext, TrivialGroup, parse_grading_spec
from .linmaps import GradedObject, LinMap, Shape
from .scalars import parse_field_spec
from .semigroups import Semigroup

_LABEL = re.compile(r"^[A-Za-z0-9_.+\-]+$")


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _scalar(field, token, lineno):
    try:
        return field.parse(token)
    except (ValueError, ZeroDivisionError, TypeError, FieldMismatch) as exc:
        raise ParseError(f"bad scalar {token!r}: {exc}", line=lineno) from None


def _label_tuple(token, lineno):
    if not (token.startswith("(") and token.endswith(")")):
        raise ParseError(f"expected a (label,...) tuple, got {token!r}", line=lineno)
    inner = token[1:-1].strip()
    if not inner:
        return ()
    parts = tuple(p.strip() for p in inner.split(","))
    for p in parts:
        if not _LABEL.match(p):
            raise ParseError(f"bad basis label {p!r}", line=lineno)
    return parts


@dataclass
class AlgebraDoc:
    name: str
    field: object
    group: object
    context: GradingContext
    labels: tuple
    degrees: tuple
    mult_entries: list  # ((i, j), (k,), payload) index tuples
    header_line: int = 1


@dataclass
class BimonoidDoc:
    algebra: AlgebraDoc
    t1_entries: list  # ((i, j), (k, l), payload)
    t2_entries: list
    e_entries: list  # ((i,), (), payload)


@dataclass
class MorphismDoc:
    source: str
    target: str
    f1_lines: list = dc_field(default_factory=list)  # (out_labels, in_labels, token, lineno)
    f2_lines: list = dc_field(default_factory=list)


def _parse_header(tokens, lineno):
    if (
        len(tokens) != 8
        or tokens[0] != "algebra"
        or tokens[2] != "dim"
        or tokens[4] != "field"
        or tokens[6] != "grading"
    ):
        raise ParseError(
            "expected header `algebra <name> dim <n> field <spec> grading <spec>`",
            line=lineno,
        )
    name = tokens[1]
    try:
        dim = int(tokens[3])
    except ValueError:
        raise ParseError(f"bad dimension {tokens[3]!r}", line=lineno) from None
    if dim < 1:
        raise ParseError("dimension must be positive", line=lineno)
    try:
        fld = parse_field_spec(tokens[5])
    except (UnsupportedField, ValueError) as exc:
        raise ParseError(str(exc), line=lineno) from None
    try:
        group = parse_grading_spec(tokens[7])
    except ValueError as exc:
        raise ParseError(str(exc), line=lineno) from None
    return name, dim, fld, group


def _parse_algebra_lines(text, extra_handler=None):
    """Shared walk for algebra and bimonoid files.

    extra_handler(tokens, lineno, state) consumes non-algebra lines and
    returns True when it recognized the line.
    """
    name = dim = fld = group = None
    bichar_q = None
    bichar_line = None
    labels = []
    degrees = []
    label_index = {}
    mult_lines = []  # deferred: degree checks need the full basis
    state = {}
    header_line = None
    for lineno, line in _lines(text):
        tokens = line.split()
        kind = tokens[0]
        if kind == "algebra":
            if name is not None:
                raise ParseError("second algebra header", line=lineno)
            name, dim, fld, group = _parse_header(tokens, lineno)
            header_line = lineno
            continue
        if name is None:
            raise ParseError("file must start with the algebra header", line=lineno)
        if kind == "bichar":
            if len(tokens) != 2:
                raise ParseError("expected `bichar <scalar>`", line=lineno)
            if labels:
                raise ParseError("bichar must precede basis lines", line=lineno)
            if isinstance(group, TrivialGroup):
                raise ParseError("bichar requires a nontrivial grading", line=lineno)
            bichar_q = _scalar(fld, tokens[1], lineno)
            bichar_line = lineno
            continue
        if kind == "basis":
            if len(tokens) != 4 or tokens[2] != "deg":
                raise ParseError("expected `basis <label> deg <g>`", line=lineno)
            label = tokens[1]
            if not _LABEL.match(label):
                raise ParseError(f"bad basis label {label!r}", line=lineno)
            if label in label_index:
                raise ParseError(f"duplicate basis label {label!r}", line=lineno)
            try:
                deg = group.parse(tokens[3])
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
            label_index[label] = len(labels)
            labels.append(label)
            degrees.append(deg)
            continue
        if kind == "mult":
            if len(tokens) != 7 or tokens[3] != "->" or tokens[5] != ":":
                raise ParseError(
                    "expected `mult <i> <j> -> <k> : <scalar>`", line=lineno
                )
            mult_lines.append((tokens[1], tokens[2], tokens[4], tokens[6], lineno))
            continue
        if extra_handler is not None and extra_handler(tokens, lineno, state):
            continue
        raise ParseError(f"unrecognized line {line!r}", line=lineno)
    if name is None:
        raise ParseError("missing algebra header", line=1)
    if len(labels) != dim:
        raise ParseError(
            f"header declares dim {dim} but {len(labels)} basis lines found",
            line=header_line,
        )
    if bichar_q is not None:
        try:
            context = GradingContext.power(group, fld, bichar_q)
        except UnsupportedField as exc:
            raise ParseError(str(exc), line=bichar_line) from None
    else:
        context = GradingContext(group, Bicharacter(group, fld, None))

    def resolve(label, lineno):
        try:
            return label_index[label]
        except KeyError:
            raise ParseError(f"unknown basis label {label!r}", line=lineno) from None

    mult_entries = []
    seen = set()
    for li, lj, lk, tok, lineno in mult_lines:
        i, j, k = resolve(li, lineno), resolve(lj, lineno), resolve(lk, lineno)
        if (i, j, k) in seen:
            raise ParseError(
                f"duplicate structure constant for ({li},{lj}) -> {lk}", line=lineno
            )
        seen.add((i, j, k))
        if group.add(degrees[i], degrees[j]) != degrees[k]:
            raise ParseError(
                f"degree-mixing structure constant ({li},{lj}) -> {lk}", line=lineno
            )
        v = _scalar(fld, tok, lineno)
        if not fld.is_zero(v):
            mult_entries.append(((i, j), (k,), v))
    doc = AlgebraDoc(
        name=name,
        field=fld,
        group=group,
        context=context,
        labels=tuple(labels),
        degrees=tuple(degrees),
        mult_entries=mult_entries,
        header_line=header_line,
    )
    return doc, state, resolve


def parse_algebra_text(text) -> AlgebraDoc:
    doc, _, _ = _parse_algebra_lines(text)
    return doc


def parse_bimonoid_text(text) -> BimonoidDoc:
    def handler(tokens, lineno, state):
        kind = tokens[0]
        if kind in ("t1", "t2"):
            if (
                len(tokens) != 6
                or tokens[2] != "->"
                or tokens[4] != ":"
            ):
                raise ParseError(
                    f"expected `{kind} (i,j) -> (k,l) : <scalar>`", line=lineno
                )
            tin = _label_tuple(tokens[1], lineno)
            tout = _label_tuple(tokens[3], lineno)
            if len(tin) != 2 or len(tout) != 2:
                raise ParseError(f"{kind} entries join pairs to pairs", line=lineno)
            state.setdefault(kind, []).append((tin, tout, tokens[5], lineno))
            return True
        if kind == "e":
            if len(tokens) != 4 or tokens[2] != ":":
                raise ParseError("expected `e <i> : <scalar>`", line=lineno)
            state.setdefault("e", []).append(((tokens[1],), (), tokens[3], lineno))
            return True
        return False

    doc, state, resolve = _parse_algebra_lines(text, handler)

    def realize(raw):
        entries = []
        seen = set()
        for tin, tout, tok, lineno in raw:
            iin = tuple(resolve(l, lineno) for l in tin)
            iout = tuple(resolve(l, lineno) for l in tout)
            if (iin, iout) in seen:
                raise ParseError("duplicate tensor entry", line=lineno)
            seen.add((iin, iout))
            v = _scalar(doc.field, tok, lineno)
            grp = doc.group
            din = grp.sum(doc.degrees[i] for i in iin)
            dout = grp.sum(doc.degrees[i] for i in iout)
            if din != dout:
                raise ParseError("degree-mixing tensor entry", line=lineno)
            if not doc.field.is_zero(v):
                entries.append((iin, iout, v))
        return entries

    return BimonoidDoc(
        algebra=doc,
        t1_entries=realize(state.get("t1", [])),
        t2_entries=realize(state.get("t2", [])),
        e_entries=realize(state.get("e", [])),
    )


def parse_morphism_text(text) -> MorphismDoc:
    source = target = None
    blocks = {"f1:": [], "f2:": []}
    current = None
    for lineno, line in _lines(text):
        tokens = line.split()
        kind = tokens[0]
        if kind in ("source", "target"):
            if len(tokens) != 2:
                raise ParseError(f"expected `{kind} <algebra-name>`", line=lineno)
            if kind == "source":
                if source is not None:
                    raise ParseError("second source line", line=lineno)
                source = tokens[1]
            else:
                if target is not None:
                    raise ParseError("second target line", line=lineno)
                target = tokens[1]
            continue
        if kind in blocks and len(tokens) == 1:
            current = kind
            continue
        if len(tokens) == 5 and tokens[1] == "<-" and tokens[3] == ":":
            if current is None:
                raise ParseError("map entry outside an f1:/f2: block", line=lineno)
            out_t = _label_tuple(tokens[0], lineno)
            in_t = _label_tuple(tokens[2], lineno)
            blocks[current].append((out_t, in_t, tokens[4], lineno))
            continue
        raise ParseError(f"unrecognized line {line!r}", line=lineno)
    if source is None or target is None:
        raise ParseError("morphism file must name source and target", line=1)
    return MorphismDoc(
        source=source, target=target, f1_lines=blocks["f1:"], f2_lines=blocks["f2:"]
    )


def build_graded_object(doc: AlgebraDoc) -> GradedObject:
    return GradedObject(doc.name, doc.field, doc.context, doc.labels, doc.degrees)


def build_semigroup(doc: AlgebraDoc) -> Semigroup:
    carrier = build_graded_object(doc)
    shape = Shape((carrier,))
    mult = LinMap.from_entries(shape.power(2), shape, doc.mult_entries)
    return Semigroup(carrier, mult)


def realize_map(lines, src_shape: Shape, dst_shape: Shape) -> LinMap:
    """Build a LinMap from parsed `out <- in : scalar` lines."""
    field = src_shape.field
    entries = []
    seen = set()
    for out_labels, in_labels, tok, lineno in lines:
        if len(in_labels) != src_shape.arity:
            raise ParseError(
                f"input tuple arity {len(in_labels)}, expected {src_shape.arity}",
                line=lineno,
            )
        if len(out_labels) != dst_shape.arity:
            raise ParseError(
                f"output tuple arity {len(out_labels)}, expected {dst_shape.arity}",
                line=lineno,
            )
        try:
            tin = tuple(
                f.index_of(l) for f, l in zip(src_shape.factors, in_labels)
            )
            tout = tuple(
                f.index_of(l) for f, l in zip(dst_shape.factors, out_labels)
            )
        except KeyError as exc:
            raise ParseError(str(exc.args[0]), line=lineno) from None
        if (tin, tout) in seen:
            raise ParseError("duplicate map entry", line=lineno)
        seen.add((tin, tout))
        if src_shape.degree(tin) != dst_shape.degree(tout):
            raise ParseError("degree-mixing map entry", line=lineno)
        v = _scalar(field, tok, lineno)
        if not field.is_zero(v):
            entries.append((tin, tout, v))
    return LinMap.from_entries(src_shape, dst_shape, entries)


def realize_morphism_maps(doc: MorphismDoc, src: Semigroup, dst: Semigroup):
    """The two structure maps of a morphism file, as plain LinMaps."""
    a, b = src.shape, dst.shape
    f1 = realize_map(doc.f1_lines, a * b, b)
    f2 = realize_map(doc.f2_lines, b * a, b)
    return f1, f2


def parse_algebra_file(path) -> AlgebraDoc:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra_text(fh.read())


def parse_bimonoid_file(path) -> BimonoidDoc:
    with open(path, encoding="utf-8") as fh:
        return parse_bimonoid_text(fh.read())


def parse_morphism_file(path) -> MorphismDoc:
    with open(path, encoding="utf-8") as fh:
        return parse_morphism_text(fh.read())
