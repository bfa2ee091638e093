"""Line-oriented text formats: surface model files, splitting datum files.

The grammar is documented in FORMATS.md at the repository root.  Sections
start with a bracketed header; the body is `key = value` lines, where the
key may carry one qualifier token (`place C1`, `s C2`, ...).  Polynomials
are comma-separated coefficient lists, low degree first; coefficients are
the integer codes of field elements.  Rational functions are `num / den`
(den defaults to 1).  `#` starts a comment.
"""

from __future__ import annotations

import re

from .curvebr import CyclicCoverData
from .ffield import Place, RationalFunction, function_field
from .gfq import GF, FqField
from .ramgraph import CurveKind, CurveNode, NodePoint, RamGraph, TailBI, TailBII
from .splitdrv import MeetRecord, SplittingDatum, SurfaceModel


class FormatError(ValueError):
    def __init__(self, message, lineno=None):
        where = f"line {lineno}: " if lineno else ""
        super().__init__(where + message)
        self.lineno = lineno


_HEADER = re.compile(r"^\[(\w+)(?:\s+([^\]\s]+))?\]$")


def _tokenize(text: str):
    """Yield (lineno, kind, payload): kind is 'section' or 'kv'."""
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            yield i, "section", (m.group(1), m.group(2))
            continue
        if "=" not in line:
            raise FormatError(f"expected 'key = value', got {line!r}", i)
        key, value = line.split("=", 1)
        yield i, "kv", (key.strip(), value.strip())


def _sections(text: str):
    current = None
    body: list[tuple[int, str, str]] = []
    for lineno, kind, payload in _tokenize(text):
        if kind == "section":
            if current is not None:
                yield current, body
            current = (lineno, *payload)
            body = []
        else:
            if current is None:
                raise FormatError("key/value before any section header", lineno)
            body.append((lineno, *payload))
    if current is not None:
        yield current, body


def _parse_ints(value: str, lineno: int) -> list[int]:
    try:
        return [int(x.strip()) for x in value.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise FormatError(f"bad integer list {value!r}", lineno) from exc


def _parse_rational(field, value: str, lineno: int) -> RationalFunction:
    if "/" in value:
        num_s, den_s = value.split("/", 1)
    else:
        num_s, den_s = value, "1"
    num = _parse_ints(num_s, lineno)
    den = _parse_ints(den_s, lineno)
    try:
        return field.rational(num, den)
    except Exception as exc:
        raise FormatError(f"bad rational function {value!r}: {exc}", lineno) from exc


def _parse_place(field, value: str, lineno: int) -> Place:
    if value.strip() == "inf":
        return field.infinite_place()
    try:
        return field.place(_parse_ints(value, lineno))
    except Exception as exc:
        raise FormatError(f"bad place {value!r}: {exc}", lineno) from exc


_TAIL_I = re.compile(r"^I\s+u=(\d+)\s+v=(\d+)$")
_TAIL_II = re.compile(r"^II\s+m=(-?\d+)\s+u=(\d+)\s+v=(\d+)$")


def parse_model(text: str, name: str = "model") -> SurfaceModel:
    q = None
    fields: dict[str, FqField] = {}
    curve_specs = []
    node_specs = []
    meet_specs = []
    relations = []
    qset: list[str] = []
    model_name = name

    for (ln, sec, label), body in _sections(text):
        kv = {}
        multi = []
        for lineno, key, value in body:
            multi.append((lineno, key, value))
            kv[key] = (lineno, value)
        if sec == "model":
            if "q" not in kv:
                raise FormatError("[model] section needs q", ln)
            q = int(kv["q"][1])
            if q < 2 or any(q % d == 0 for d in range(2, int(q ** 0.5) + 1)):
                raise FormatError(f"q = {q} is not prime", kv["q"][0])
            if "name" in kv:
                model_name = kv["name"][1]
        elif sec == "field":
            if label is None:
                raise FormatError("[field] needs a name", ln)
            if q is None:
                raise FormatError("[model] with q must come first", ln)
            if "base" in kv:
                base_name = kv["base"][1]
                if base_name not in fields:
                    raise FormatError(f"unknown base field {base_name}", ln)
                base = fields[base_name]
                if "modulus" not in kv:
                    raise FormatError("[field] with base needs modulus", ln)
                lineno, value = kv["modulus"]
                mod = _parse_ints(value, lineno)
                try:
                    fields[label] = base.extension(len(mod) - 1, tuple(mod))
                except ValueError as exc:
                    raise FormatError(str(exc), lineno) from exc
            else:
                if "ell" not in kv:
                    raise FormatError("[field] needs ell or base", ln)
                ell = int(kv["ell"][1])
                d = int(kv["deg"][1]) if "deg" in kv else 1
                try:
                    fields[label] = GF(q, ell, d)
                except ValueError as exc:
                    raise FormatError(str(exc), ln) from exc
        elif sec == "curve":
            curve_specs.append((ln, label, kv))
        elif sec == "node":
            node_specs.append((ln, label, kv))
        elif sec == "meet":
            meet_specs.append((ln, label, kv))
        elif sec == "relations":
            for lineno, key, value in multi:
                if key != "rel":
                    raise FormatError(f"unexpected key {key!r} in [relations]", lineno)
                rel = {}
                for part in value.split(","):
                    part = part.strip()
                    if not part:
                        continue
                    if ":" not in part:
                        raise FormatError(f"relation term {part!r} needs curve:coeff", lineno)
                    cid, coeff = part.split(":", 1)
                    rel[cid.strip()] = int(coeff)
                relations.append(rel)
        elif sec == "qset":
            if "points" in kv:
                lineno, value = kv["points"]
                qset = [x.strip() for x in value.split(",") if x.strip()]
        else:
            raise FormatError(f"unknown section [{sec}]", ln)

    if q is None:
        raise FormatError("missing [model] section with q")
    graph = RamGraph(q)

    for ln, label, kv in curve_specs:
        if label is None:
            raise FormatError("[curve] needs a name", ln)
        kind_s = kv.get("kind", (ln, "vertical"))[1]
        try:
            kind = CurveKind(kind_s)
        except ValueError:
            raise FormatError(f"bad curve kind {kind_s!r}", ln) from None
        constants = None
        cover = None
        if "field" in kv:
            lineno, fname = kv["field"]
            if fname not in fields:
                raise FormatError(f"unknown field {fname}", lineno)
            constants = fields[fname]
        if "cover" in kv:
            lineno, value = kv["cover"]
            if constants is None:
                raise FormatError("cover given but no field declared", lineno)
            ff = function_field(constants)
            cover = CyclicCoverData(ff, _parse_rational(ff, value, lineno))
        if kind is CurveKind.HORIZONTAL and cover is not None:
            raise FormatError("horizontal curves cannot carry covers", ln)
        parent = kv.get("parent", (None, None))[1]
        graph.add_curve(CurveNode(label, kind, constants=constants, cover=cover, parent_blowup=parent))

    for ln, label, kv in node_specs:
        if label is None:
            raise FormatError("[node] needs a name", ln)
        if "curves" not in kv:
            raise FormatError(f"node {label} needs curves", ln)
        lineno, value = kv["curves"]
        pair = tuple(x.strip() for x in value.split(","))
        if len(pair) != 2:
            raise FormatError("node needs exactly two curves", lineno)
        places = {}
        for key, (lineno2, value2) in kv.items():
            if key.startswith("place "):
                cid = key.split(None, 1)[1]
                if cid not in pair:
                    raise FormatError(f"place for {cid} not incident to node {label}", lineno2)
                curve = graph.curves.get(cid)
                if curve is None or curve.constants is None:
                    raise FormatError(f"curve {cid} has no residue curve for places", lineno2)
                places[cid] = _parse_place(function_field(curve.constants), value2, lineno2)
        rf = None
        for cid in pair:
            if cid in places:
                cand = places[cid].residue_field
                if rf is None or rf.is_ancestor_of(cand):
                    rf = cand
        if rf is None:
            raise FormatError(f"node {label} needs at least one marked place", ln)
        tail = None
        if "tail" in kv:
            lineno2, value2 = kv["tail"]
            if value2 != "none":
                m1 = _TAIL_I.match(value2)
                m2 = _TAIL_II.match(value2)
                if m1:
                    tail = TailBI(int(m1.group(1)), int(m1.group(2)))
                elif m2:
                    tail = TailBII(int(m2.group(1)), int(m2.group(2)), int(m2.group(3)))
                else:
                    raise FormatError(f"bad tail {value2!r}", lineno2)
        graph.add_node(NodePoint(label, pair, rf, tail, places))

    model = SurfaceModel(model_name, q, graph, {}, relations, qset)

    for ln, label, kv in meet_specs:
        if label is None:
            raise FormatError("[meet] needs a name", ln)
        if "curves" not in kv:
            raise FormatError(f"meet {label} needs curves (aux, curve)", ln)
        lineno, value = kv["curves"]
        pair = [x.strip() for x in value.split(",")]
        if len(pair) != 2:
            raise FormatError("meet needs exactly two curves", lineno)
        aux, cid = pair
        mult = int(kv.get("mult", (ln, "1"))[1])
        place = None
        for key, (lineno2, value2) in kv.items():
            if key.startswith("place "):
                pcid = key.split(None, 1)[1]
                if pcid != cid:
                    raise FormatError(f"meet place must be on {cid}", lineno2)
                curve = graph.curves.get(cid)
                if curve is None or curve.constants is None:
                    raise FormatError(f"curve {cid} has no residue curve", lineno2)
                place = _parse_place(function_field(curve.constants), value2, lineno2)
        if place is None:
            raise FormatError(f"meet {label} needs a place on {cid}", ln)
        if label in model.meets:
            raise FormatError(f"duplicate meet id {label}", ln)
        model.meets[label] = MeetRecord(label, aux, cid, place, mult)

    return model


# ---- serialization ----------------------------------------------------------


def _field_names(model: SurfaceModel) -> dict[int, str]:
    """Stable names for every field reachable from the model, base-first."""
    found: list[FqField] = []

    def visit(f: FqField | None):
        if f is None:
            return
        if f.base is not None:
            visit(f.base)
        if all(f is not g for g in found):
            found.append(f)

    for cid in sorted(model.graph.curves):
        visit(model.graph.curves[cid].constants)
    for nid in sorted(model.graph.nodes):
        visit(model.graph.nodes[nid].residue_field)
    names: dict[int, str] = {}
    used = set()
    for f in found:
        base = f"F{f.ell}" if f.degree == 1 else f"F{f.ell}_{f.degree}"
        name = base
        k = 2
        while name in used:
            name = f"{base}_{k}"
            k += 1
        used.add(name)
        names[id(f)] = name
    return names


def _fmt_ints(cs) -> str:
    return ",".join(str(c) for c in cs)


def _fmt_rational(r: RationalFunction) -> str:
    num = _fmt_ints(r.num) if r.num else "0"
    if r.den == (1,):
        return num
    return f"{num} / {_fmt_ints(r.den)}"


def _fmt_place(P: Place) -> str:
    return "inf" if P.is_infinite else _fmt_ints(P.poly)


def serialize_model(model: SurfaceModel) -> str:
    names = _field_names(model)
    out = ["[model]", f"name = {model.name}", f"q = {model.q}", ""]
    emitted = set()
    for cid in sorted(model.graph.curves):
        f = model.graph.curves[cid].constants
        chain = []
        while f is not None:
            chain.append(f)
            f = f.base
        for f in reversed(chain):
            if id(f) in emitted:
                continue
            emitted.add(id(f))
            out.append(f"[field {names[id(f)]}]")
            if f.base is None:
                out.append(f"ell = {f.ell}")
            else:
                out.append(f"base = {names[id(f.base)]}")
                out.append(f"modulus = {_fmt_ints(f.modulus)}")
            out.append("")
    for cid in sorted(model.graph.curves):
        c = model.graph.curves[cid]
        out.append(f"[curve {cid}]")
        out.append(f"kind = {c.kind.value}")
        if c.constants is not None:
            out.append(f"field = {names[id(c.constants)]}")
        if c.cover is not None:
            out.append(f"cover = {_fmt_rational(c.cover.c)}")
        if c.parent_blowup:
            out.append(f"parent = {c.parent_blowup}")
        out.append("")
    for nid in sorted(model.graph.nodes):
        n = model.graph.nodes[nid]
        out.append(f"[node {nid}]")
        out.append(f"curves = {n.curves[0]}, {n.curves[1]}")
        if isinstance(n.tail, TailBI):
            out.append(f"tail = I u={n.tail.u} v={n.tail.v}")
        elif isinstance(n.tail, TailBII):
            out.append(f"tail = II m={n.tail.m} u={n.tail.u} v={n.tail.v}")
        else:
            out.append("tail = none")
        for cid in n.curves:
            if cid in n.places:
                out.append(f"place {cid} = {_fmt_place(n.places[cid])}")
        out.append("")
    for mid in sorted(model.meets):
        m = model.meets[mid]
        out.append(f"[meet {mid}]")
        out.append(f"curves = {m.aux}, {m.curve}")
        out.append(f"place {m.curve} = {_fmt_place(m.place)}")
        out.append(f"mult = {m.mult}")
        out.append("")
    if model.relations:
        out.append("[relations]")
        for rel in model.relations:
            terms = ", ".join(f"{cid}:{rel[cid]}" for cid in sorted(rel))
            out.append(f"rel = {terms}")
        out.append("")
    if model.q_set:
        out.append("[qset]")
        out.append("points = " + ", ".join(sorted(model.q_set)))
        out.append("")
    return "\n".join(out)


def serialize_datum(model: SurfaceModel, datum: SplittingDatum) -> str:
    out = ["[datum]", f"model = {model.name}", f"q = {datum.q}", f"mode = {datum.mode}"]
    for cid in sorted(datum.s):
        out.append(f"s {cid} = {datum.s[cid]}")
    for cid in sorted(datum.e):
        if datum.e[cid] % datum.q:
            out.append(f"e {cid} = {datum.e[cid] % datum.q}")
    for cid in sorted(datum.v):
        out.append(f"v {cid} = {_fmt_rational(datum.v[cid])}")
    for nid in sorted(datum.node_units):
        out.append(f"w {nid} = {datum.node_units[nid]}")
    out.append(f"m = {datum.m_element()}")
    return "\n".join(out) + "\n"


def parse_datum(text: str, model: SurfaceModel) -> SplittingDatum:
    q = model.q
    s: dict[str, int] = {}
    e: dict[str, int] = {}
    v: dict[str, RationalFunction] = {}
    w: dict[str, int] = {}
    mode = "oracle"
    for (ln, sec, _label), body in _sections(text):
        if sec != "datum":
            raise FormatError(f"unexpected section [{sec}] in datum file", ln)
        for lineno, key, value in body:
            parts = key.split(None, 1)
            if parts[0] == "q":
                if int(value) != q:
                    raise FormatError(f"datum q={value} but model q={q}", lineno)
            elif parts[0] == "mode":
                mode = value
            elif parts[0] in ("model", "m"):
                continue
            elif parts[0] == "s" and len(parts) == 2:
                if parts[1] not in model.graph.curves:
                    raise FormatError(f"datum coefficient for unknown curve {parts[1]}", lineno)
                s[parts[1]] = int(value) % q
            elif parts[0] == "e" and len(parts) == 2:
                if parts[1] not in model.graph.curves:
                    raise FormatError(f"datum E-coefficient for unknown curve {parts[1]}", lineno)
                e[parts[1]] = int(value) % q
            elif parts[0] == "v" and len(parts) == 2:
                curve = model.graph.curves.get(parts[1])
                if curve is None or curve.constants is None:
                    raise FormatError(f"gluing unit for unknown residue curve {parts[1]}", lineno)
                v[parts[1]] = _parse_rational(function_field(curve.constants), value, lineno)
            elif parts[0] == "w" and len(parts) == 2:
                if parts[1] not in model.graph.nodes:
                    raise FormatError(f"datum unit for unknown node {parts[1]}", lineno)
                w[parts[1]] = int(value)
            else:
                raise FormatError(f"unexpected datum key {key!r}", lineno)
    return SplittingDatum(q, s, e, v, w, mode)
