"""End-to-end splitting pipeline: hot-point index criterion, residual-class
assembly and killing, splitting-datum construction, and the sitewise verifier
certifying that the constructed degree-q Kummer extension splits all
ramification.

The verifier's "all discrete valuations over a point" obligation is
discharged by the finite certificates the theory factors through: monomial
valuation grids with 1 <= a, b <= 3q at chilly points (coefficients of a
valuation only matter mod q, so the grid samples every class, q-divisible
ones included), the cold-point ramification character chi_P, and explicit
witness valuations with a, b <= q for refutations.

Divisor classes are an oracle: the model either supplies integer relations
among curve classes, making the mod-q system for the auxiliary divisor E
solvable, or the constructor runs in formal mode (coefficients of auxiliary
curves stay zero / free) and the report flags that the Picard step was
assumed rather than checked.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dfield

from .curvebr import (
    CoverBehavior,
    CurveDataError,
    ResidueVector,
    cover_behavior,
    residual_transform,
    split_by_cover,
    symbol_residues,
)
from .ffield import Place, RationalFunction, valuation
from .gfq import FqField, frobenius_invariant, mu_q_closure
from .ramgraph import CurveKind, ModelError, RamGraph, TailBII
from .twovar import (
    MonomialValuation,
    SplitMode,
    TwoVarRational,
    ramification_of_sum,
    split_check,
    two_x,
    two_y,
)
from . import polys


class GateError(Exception):
    """A pipeline gate refused: hot points, unresolved surgery, infeasible E,
    or unkillable residual classes."""

    def __init__(self, kind: str, message: str, witnesses=()):
        super().__init__(message)
        self.kind = kind
        self.witnesses = list(witnesses)


@dataclass(frozen=True)
class MeetRecord:
    """Intersection of an auxiliary curve with another curve at a marked place."""

    id: str
    aux: str
    curve: str
    place: Place
    mult: int


@dataclass
class SurfaceModel:
    name: str
    q: int
    graph: RamGraph
    meets: dict[str, MeetRecord] = dfield(default_factory=dict)
    relations: list[dict[str, int]] = dfield(default_factory=list)
    q_set: list[str] = dfield(default_factory=list)

    def validate(self):
        self.graph.validate()
        for mid, m in sorted(self.meets.items()):
            for cid in (m.aux, m.curve):
                if cid not in self.graph.curves:
                    raise ModelError(f"meet {mid}: unknown curve {cid}")
            if self.graph.curves[m.aux].ramified:
                raise ModelError(f"meet {mid}: auxiliary curve {m.aux} is ramified")
            if m.mult < 1:
                raise ModelError(f"meet {mid}: multiplicity must be >= 1")
            if m.place.is_infinite:
                raise ModelError(f"meet {mid}: meets at the infinite place are not supported")
            curve = self.graph.curves[m.curve]
            if curve.ramified:
                behavior, _ = cover_behavior(curve.cover, m.place)
                if behavior is CoverBehavior.RAMIFIED:
                    raise ModelError(
                        f"meet {mid}: cover of {m.curve} ramifies at {m.place!r}; "
                        "auxiliary curves through cover-ramified points are rejected"
                    )
        for rel in self.relations:
            for cid in rel:
                if cid not in self.graph.curves:
                    raise ModelError(f"divisor relation references unknown curve {cid}")
        for mid in self.q_set:
            if mid not in self.meets:
                raise ModelError(f"q-set references unknown meet {mid}")
            m = self.meets[mid]
            curve = self.graph.curves[m.curve]
            if curve.ramified:
                behavior, _ = cover_behavior(curve.cover, m.place)
                if behavior is not CoverBehavior.SPLIT:
                    raise ModelError(f"q-set meet {mid} is not a split curve point")

    # ---- views ---------------------------------------------------------

    def residual_curves(self) -> list[str]:
        """Ramified curves that carry residue-curve Brauer arithmetic."""
        out = []
        for cid in self.graph.ramified_curves():
            c = self.graph.curves[cid]
            if c.kind in (CurveKind.VERTICAL, CurveKind.EXCEPTIONAL):
                out.append(cid)
        return out

    def meets_on(self, cid: str) -> list[MeetRecord]:
        return sorted((m for m in self.meets.values() if m.curve == cid), key=lambda m: m.id)

    def node_places_on(self, cid: str) -> list[Place]:
        return [n.places[cid] for n in self.graph.nodes_on(cid) if cid in n.places]

    def aux_curves(self) -> list[str]:
        return sorted(cid for cid, c in self.graph.curves.items() if not c.ramified)

    def node_touching_aux(self) -> set[str]:
        """Auxiliary curves with a meet at some node's marked place: barred from E."""
        node_spots = set()
        for n in self.graph.nodes.values():
            for cid, P in n.places.items():
                node_spots.add((cid, P))
        return {m.aux for m in self.meets.values() if (m.curve, m.place) in node_spots}


@dataclass
class SplittingDatum:
    q: int
    s: dict[str, int]
    e: dict[str, int]
    v: dict[str, RationalFunction]
    node_units: dict[str, int]
    mode: str  # "oracle" | "formal"

    def m_element(self) -> str:
        parts = [f"{cid}^{k}" for cid, k in sorted(self.s.items())]
        parts += [f"{cid}^{k}" for cid, k in sorted(self.e.items()) if k % self.q]
        expr = "*".join(parts) if parts else "1"
        if any(not v.is_constant or v.constant_value() != 1 for v in self.v.values()):
            expr += " * (gluing corrections)"
        return expr


@dataclass(frozen=True)
class SiteRecord:
    site: str
    kind: str
    rule: str
    verdict: bool
    detail: str = ""

    def line(self) -> str:
        v = "pass" if self.verdict else "FAIL"
        tail = f" :: {self.detail}" if self.detail else ""
        return f"site {self.site} kind={self.kind} rule={self.rule} verdict={v}{tail}"


@dataclass
class VerificationReport:
    model: str
    q: int
    mode: str
    records: list[SiteRecord]

    @property
    def overall(self) -> bool:
        return all(r.verdict for r in self.records)

    def to_text(self) -> str:
        lines = [
            "[report]",
            f"model = {self.model}",
            f"q = {self.q}",
            f"mode = {self.mode}",
        ]
        lines += [r.line() for r in self.records]
        lines.append(f"overall = {'pass' if self.overall else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        obj = {
            "model": self.model,
            "mode": self.mode,
            "overall": self.overall,
            "q": self.q,
            "sites": [
                {
                    "detail": r.detail,
                    "kind": r.kind,
                    "rule": r.rule,
                    "site": r.site,
                    "verdict": r.verdict,
                }
                for r in self.records
            ],
        }
        return json.dumps(obj, sort_keys=True, indent=1) + "\n"


# ---- small exact linear algebra mod q ------------------------------------


def solve_mod_q(rows: list[list[int]], rhs: list[int], q: int) -> list[int] | None:
    """One solution of rows * x = rhs over F_q (free variables set to 0)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    a = [[rows[i][j] % q for j in range(n)] + [rhs[i] % q] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = pow(a[r][c], -1, q)
        a[r] = [(x * inv) % q for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n]:
            return None
    x = [0] * n
    for i, c in enumerate(piv_cols):
        x[c] = a[i][n]
    return x


# ---- resolution -------------------------------------------------------------


def resolve_model(model: SurfaceModel):
    """Blow up all cool points, then break every chilly loop.  Divisor-class
    relations are pulled back through each blowup: a relation's coefficient on
    the exceptional curve is the sum of its coefficients on the two curves
    through the blown-up point.  Returns the surgery log."""
    g = model.graph
    log = []
    for nid in sorted(g.nodes):
        if nid in g.nodes and g.nodes[nid].tail is not None and g.classify(nid).kind == "cool":
            log.append(g.blowup_cool(nid))
    log.extend(g.break_chilly_loops())
    for ev in log:
        a, b = ev.curves
        for rel in model.relations:
            coeff = rel.get(a, 0) + rel.get(b, 0)
            if coeff:
                rel[ev.curve_created] = coeff
    return log


# ---- classification-level gates -------------------------------------------


def index_is_q(model: SurfaceModel) -> tuple[bool, list[str]]:
    """True iff no nodal point is hot; otherwise the hot witnesses."""
    witnesses = [
        nid
        for nid in sorted(model.graph.nodes)
        if model.graph.nodes[nid].tail is not None and model.graph.classify(nid).kind == "hot"
    ]
    return (not witnesses, witnesses)


def hot_obstruction(field: FqField, q: int, u: int, v: int) -> bool:
    """The residual-class obstruction at a would-be hot point: after naming
    the non-q-th-power side u, the ramification class of the residual class
    is u's and the candidate splitting character is v's; obstructed iff u's
    class falls outside the subgroup v's class generates."""
    closure = mu_q_closure(field)
    cu = frobenius_invariant(closure, closure.embed(u, field))
    cv = frobenius_invariant(closure, closure.embed(v, field))
    if cu == 0 and cv != 0:
        cu, cv = cv, cu
    if cu == 0:
        return False
    return all((j * cv - cu) % q for j in range(q))


# ---- residual class assembly ----------------------------------------------


def _coord_at(P: Place, node_rf: FqField, x: int) -> int:
    rf = P.residue_field
    if rf is not node_rf:
        if not node_rf.is_ancestor_of(rf):
            raise ModelError("node residue field is not below the place's")
        x = rf.embed(x, node_rf)
    return frobenius_invariant(rf, x)


def cold_chi(model: SurfaceModel, nid: str, cid: str, s_map: dict[str, int], w: int) -> int:
    """Ramification coordinate chi_P of the residual class along cid at the
    cold node, for a local Kummer element w * pi^s * delta^t.

    With the tail (u delta^m, v pi) seen from the first-listed curve, the
    class is (w / (u^{t/m} v^s))^{m/s}; the frame of the second curve uses
    the rewritten tail (v^-m pi^-m, u^{1/m} delta)."""
    q = model.q
    node = model.graph.nodes[nid]
    if not isinstance(node.tail, TailBII):
        raise ModelError(f"node {nid} is not cold")
    a, b = node.curves
    rf = node.residue_field
    m = node.tail.m % q
    if cid == a:
        mX, uX, vX = m, node.tail.u, node.tail.v
        sX, sY = s_map[a], s_map[b]
    elif cid == b:
        minv = pow(m, -1, q)
        mX = (-m) % q
        uX = rf.pow(node.tail.v, -(node.tail.m % q))
        vX = rf.pow(node.tail.u, minv)
        sX, sY = s_map[b], s_map[a]
    else:
        raise ModelError(f"curve {cid} is not incident to node {nid}")
    P = node.places[cid]
    cu = _coord_at(P, rf, uX)
    cv = _coord_at(P, rf, vX)
    cw = _coord_at(P, rf, w)
    mX_inv = pow(mX, -1, q)
    sX_inv = pow(sX, -1, q)
    return (sX_inv * mX * (cw - sY * mX_inv * cu - sX * cv)) % q


def effective_mult(model: SurfaceModel, datum: SplittingDatum, cid: str, P: Place) -> int:
    """E-multiplicity (C.E)_P from the chosen auxiliary coefficients, plus the
    valuation of the gluing correction (the divisor of v restricted to C)."""
    total = 0
    for m in model.meets_on(cid):
        if m.place == P:
            total += datum.e.get(m.aux, 0) * m.mult
    for n in model.graph.nodes_on(cid):
        if n.tail is None and n.places.get(cid) == P:
            other = n.other(cid)
            total += datum.e.get(other, 0)
    v = datum.v.get(cid)
    if v is not None and not v.is_constant:
        total += valuation(P, v)
    return total


def residual_class(model: SurfaceModel, cid: str, datum: SplittingDatum) -> ResidueVector:
    """The residual Brauer class along cid determined by the datum, as a
    residue vector over cid's residue curve: zero away from E-support, the
    -m_i (C.E)_P gamma rule at nonsplit E-points, chi_P at cold points, and
    nothing at chilly points; then transformed by the gluing unit."""
    base = _base_residual_vector(model, cid, datum)
    curve = model.graph.curves[cid]
    v = datum.v.get(cid)
    if v is not None:
        m_i = pow(datum.s[cid], -1, model.q)
        base = residual_transform(base, curve.cover, v, m_i)
    return base


def _base_residual_vector(model: SurfaceModel, cid: str, datum: SplittingDatum) -> ResidueVector:
    curve = model.graph.curves[cid]
    if curve.kind is CurveKind.HORIZONTAL or curve.cover is None:
        raise CurveDataError(f"curve {cid} carries no residue-curve Brauer data")
    q = model.q
    if datum.s.get(cid, 0) % q == 0:
        raise ModelError(f"datum assigns no unit coefficient to ramified curve {cid}")
    for n in model.graph.nodes_on(cid):
        if isinstance(n.tail, TailBII):
            other = n.other(cid)
            if datum.s.get(other, 0) % q == 0:
                raise ModelError(f"datum assigns no unit coefficient to ramified curve {other}")
    m_i = pow(datum.s[cid], -1, q)
    entries: dict[Place, int] = {}

    def add(P, r):
        if r % q:
            entries[P] = (entries.get(P, 0) + r) % q

    # auxiliary-curve support on this curve
    by_place: dict[Place, int] = {}
    for m in model.meets_on(cid):
        by_place[m.place] = by_place.get(m.place, 0) + datum.e.get(m.aux, 0) * m.mult
    for n in model.graph.nodes_on(cid):
        # unramified curves crossing at former nodal points can be E-components
        if n.tail is None and cid in n.places:
            other = n.other(cid)
            coeff = datum.e.get(other, 0)
            if coeff:
                P = n.places[cid]
                by_place[P] = by_place.get(P, 0) + coeff
    for P, ce in sorted(by_place.items(), key=lambda kv: kv[0].sort_key()):
        if ce % q == 0:
            continue
        behavior, gamma = cover_behavior(curve.cover, P)
        if behavior is CoverBehavior.SPLIT:
            continue
        if behavior is CoverBehavior.RAMIFIED:
            raise ModelError(f"E-support meets {cid} where its cover ramifies at {P!r}")
        add(P, -m_i * ce * gamma)

    # cold nodes contribute their ramification character
    for n in model.graph.nodes_on(cid):
        if isinstance(n.tail, TailBII):
            w = datum.node_units.get(n.id, 1)
            add(n.places[cid], cold_chi(model, n.id, cid, datum.s, w))

    ff = curve.residue_curve
    try:
        return ResidueVector(ff, entries)
    except CurveDataError as exc:
        raise ModelError(
            f"residual vector of {cid} is unbalanced (model geometry inconsistent): {exc}"
        ) from exc


# ---- killing residual classes ----------------------------------------------


def kill_residuals(model: SurfaceModel, datum: SplittingDatum) -> SplittingDatum:
    """Choose gluing units v_i on each ramified residue curve so that all
    residual classes become zero, by exact interpolation: solve, over F_q, for
    exponents of a generating set of the residue curve's multiplicative group
    (constants and small-degree irreducibles) making the cyclic-algebra
    residue vector hit its target, keeping v_i a unit at nodal and q-set
    points."""
    new_v: dict[str, RationalFunction] = {}
    for cid in model.residual_curves():
        curve = model.graph.curves[cid]
        ff = curve.residue_curve
        q = model.q
        s_i = datum.s[cid]
        base = _base_residual_vector(model, cid, datum)
        if not split_by_cover(base, curve.cover):
            raise GateError(
                "residual-not-split",
                f"residual class of {cid} is not split by its own ramification "
                "(hot-point obstruction)",
                [cid],
            )
        # want vec(c, v) = s_i * base, so the -1/s_i transform cancels the base
        target = base.scale(s_i)
        if target.is_zero:
            new_v[cid] = ff.one
            continue
        protected = {P for P in model.node_places_on(cid) if not P.is_infinite}
        protected |= {
            model.meets[mid].place for mid in model.q_set if model.meets[mid].curve == cid
        }
        v = _interpolate_unit(model, cid, target, protected)
        new_v[cid] = v
    out = SplittingDatum(datum.q, dict(datum.s), dict(datum.e), new_v, dict(datum.node_units), datum.mode)
    for cid in model.residual_curves():
        final = residual_class(model, cid, out)
        if not final.is_zero:
            raise GateError(
                "kill-failed",
                f"gluing unit for {cid} failed to kill its residual class: {final!r}",
                [cid],
            )
    return out


def _interpolate_unit(model, cid, target: ResidueVector, protected) -> RationalFunction:
    curve = model.graph.curves[cid]
    ff = curve.residue_curve
    F = ff.constants
    q = model.q
    c = curve.cover.c
    base_places = set(target.support)
    base_places |= protected
    base_places |= {m.place for m in model.meets_on(cid)}
    base_places |= {P for P in _divisor_places(c)}
    dmax = max([1] + [P.degree for P in base_places if not P.is_infinite])
    last_err = None
    for d_try in range(dmax, dmax + 3):
        gens: list[RationalFunction] = [ff.constant(F.generator)]
        gen_places: list[Place | None] = [None]
        for d in range(1, d_try + 1):
            for g in polys.irreducibles(F, d):
                gens.append(ff.rational(g))
                gen_places.append(ff.place(g))
        universe = set(base_places) | {P for P in gen_places if P is not None}
        universe.add(ff.infinite_place())
        universe = sorted(universe, key=lambda P: P.sort_key())
        cols = [symbol_residues(c, g) for g in gens]
        rows = [[col.residue_at(P) for col in cols] for P in universe]
        rhs = [target.residue_at(P) for P in universe]
        for j, gp in enumerate(gen_places):
            if gp is not None and gp in protected:
                rows.append([1 if k == j else 0 for k in range(len(gens))])
                rhs.append(0)
        x = solve_mod_q(rows, rhs, q)
        if x is None:
            last_err = f"no exponent vector up to degree {d_try}"
            continue
        v = ff.one
        for g, e in zip(gens, x):
            if e % q:
                v = v * g ** (e % q)
        if symbol_residues(c, v) == target:
            return v
        last_err = "solution failed exact re-verification"
    raise GateError(
        "kill-unsat",
        f"cannot interpolate a gluing unit on {cid}: {last_err}",
        [cid],
    )


def _divisor_places(f: RationalFunction) -> list[Place]:
    from .ffield import support_places

    return [P for P in support_places(f) if not P.is_infinite]


# ---- construction ------------------------------------------------------------


def construct_splitting(model: SurfaceModel, *, formal: bool | None = None) -> SplittingDatum:
    """Assign curve coefficients, select the auxiliary divisor E under the
    avoidance and mod-q intersection constraints (against the divisor-class
    oracle when relations are present), and kill the residual classes."""
    ok, hot = index_is_q(model)
    if not ok:
        raise GateError("hot", f"hot points present: {hot}", hot)
    cools = [
        nid
        for nid in sorted(model.graph.nodes)
        if model.graph.nodes[nid].tail is not None and model.graph.classify(nid).kind == "cool"
    ]
    if cools:
        raise GateError("unresolved-cool", f"cool points present (resolve first): {cools}", cools)
    loops = model.graph.find_chilly_loops()
    if loops:
        raise GateError("chilly-loops", f"chilly loops present (resolve first): {loops}", loops)
    for cid in model.residual_curves():
        if not model.graph.curves[cid].residue_curve.has_mu_q:
            raise ModelError(
                f"curve {cid}: constant field lacks q-th roots of unity; "
                "declare mu_q-containing constants on ramified vertical curves"
            )
    s_map = model.graph.assign_coefficients()

    mode = "formal" if (formal or not model.relations) else "oracle"
    aux = model.aux_curves()
    e_map = {a: 0 for a in aux}
    if mode == "oracle":
        e_map = _select_e(model, s_map, aux)
    datum = SplittingDatum(model.q, s_map, e_map, {}, {nid: 1 for nid in _tail_nodes(model)}, mode)
    return kill_residuals(model, datum)


def _tail_nodes(model: SurfaceModel) -> list[str]:
    return sorted(nid for nid, n in model.graph.nodes.items() if n.tail is not None)


def _select_e(model: SurfaceModel, s_map: dict[str, int], aux: list[str]) -> dict[str, int]:
    q = model.q
    curves = sorted(model.graph.curves)
    barred = model.node_touching_aux()
    nvar = len(aux)
    nrel = len(model.relations)
    rows, rhs, labels = [], [], []
    # class constraint: sum s_i [C_i] + sum n_j [D_j] = 0 in Pic/q presented by relations
    for c in curves:
        row = [0] * (nvar + nrel)
        for j, a in enumerate(aux):
            row[j] = 1 if a == c else 0
        for r, rel in enumerate(model.relations):
            row[nvar + r] = (-rel.get(c, 0)) % q
        rows.append(row)
        rhs.append((-s_map.get(c, 0)) % q)
        labels.append(f"class@{c}")
    # nonsplit curve points must be met with multiplicity 0 mod q
    seen_places: dict[tuple[str, Place], dict[str, int]] = {}
    for m in model.meets.values():
        curve = model.graph.curves[m.curve]
        if not curve.ramified:
            continue
        behavior, _ = cover_behavior(curve.cover, m.place)
        if behavior is CoverBehavior.INERT:
            slot = seen_places.setdefault((m.curve, m.place), {})
            slot[m.aux] = slot.get(m.aux, 0) + m.mult
    for (ccid, P), slot in sorted(seen_places.items(), key=lambda kv: (kv[0][0], kv[0][1].sort_key())):
        row = [slot.get(a, 0) for a in aux] + [0] * nrel
        rows.append(row)
        rhs.append(0)
        labels.append(f"nonsplit@{ccid}:{P!r}")
    # unramified curves crossing a ramified one at a nonsplit former-node point
    for n in model.graph.nodes.values():
        if n.tail is not None:
            continue
        for cid in n.curves:
            other = n.other(cid)
            curve = model.graph.curves[cid]
            if not curve.ramified or model.graph.curves[other].ramified or other not in aux:
                continue
            behavior, _ = cover_behavior(curve.cover, n.places[cid])
            if behavior is not CoverBehavior.SPLIT:
                j = aux.index(other)
                rows.append([1 if k == j else 0 for k in range(nvar + nrel)])
                rhs.append(0)
                labels.append(f"nonsplit-crossing@{n.id}")
    # barred auxiliaries (through nodal points) stay out of E
    for j, a in enumerate(aux):
        if a in barred:
            rows.append([1 if k == j else 0 for k in range(nvar + nrel)])
            rhs.append(0)
            labels.append(f"avoid-node@{a}")
    x = solve_mod_q(rows, rhs, q)
    if x is None:
        raise GateError(
            "infeasible-e",
            "no auxiliary divisor satisfies the class and intersection constraints "
            f"(system over {labels})",
            labels,
        )
    return {a: x[j] % q for j, a in enumerate(aux)}


# ---- verification -------------------------------------------------------------


def verify_splitting(
    model: SurfaceModel,
    datum: SplittingDatum,
    *,
    perturb_chilly: int | None = None,
    jobs: int = 1,
) -> VerificationReport:
    """Sitewise certification that M = K((f pi)^{1/q}) splits all ramification:
    curve valuations, chilly grids, cold characters and their cross-curve
    relation, support multiplicities at nonsplit curve points, and vanishing
    of every residual class.  Failures are verdicts, not errors."""
    tasks = []
    q = model.q

    for cid in model.graph.ramified_curves():
        tasks.append(("curve:" + cid, _check_curve_site, (model, datum, cid)))
    for nid in sorted(model.graph.nodes):
        node = model.graph.nodes[nid]
        pc = model.graph.classify(nid)
        if pc.kind == "chilly":
            tasks.append(("node:" + nid, _check_chilly_site, (model, datum, nid, perturb_chilly)))
        elif pc.kind == "cold":
            tasks.append(("node:" + nid, _check_cold_site, (model, datum, nid)))
            tasks.append(("relation:" + nid, _check_cold_relation, (model, datum, nid)))
        elif pc.kind in ("cool", "hot"):
            tasks.append(("node:" + nid, _check_bad_node, (model, datum, nid, pc.kind)))
        elif pc.kind == "curve":
            tasks.append(("point:" + nid, _check_curve_point, (model, datum, nid, pc.split)))
        elif pc.kind == "distant":
            tasks.append(
                ("point:" + nid, lambda site, *_: SiteRecord(site, "distant", "vacuous", True, ""), (model,))
            )
    support_sites = _support_site_keys(model, datum)
    for cid, P in support_sites:
        tasks.append((f"support:{cid}:{P!r}", _check_support_site, (model, datum, cid, P)))
    residuals = {}
    for cid in model.residual_curves():
        tasks.append(("residual:" + cid, _check_residual_site, (model, datum, cid, residuals)))
    for nid in sorted(model.graph.nodes):
        if model.graph.nodes[nid].tail is not None and model.graph.classify(nid).kind == "chilly":
            tasks.append(("images:" + nid, _check_chilly_images, (model, datum, nid, residuals)))

    def run(task):
        site, fn, args = task
        return fn(site, *args)

    # residual vectors must exist before the image checks read the cache
    records: list[SiteRecord] = []
    eager = [t for t in tasks if not t[0].startswith("images:")]
    lazy = [t for t in tasks if t[0].startswith("images:")]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records.extend(pool.map(run, eager))
    else:
        records.extend(run(t) for t in eager)
    records.extend(run(t) for t in lazy)
    records.sort(key=lambda r: (r.kind, r.site))
    return VerificationReport(model.name, q, datum.mode, records)


def _check_curve_site(site, model, datum, cid) -> SiteRecord:
    q = model.q
    s = datum.s.get(cid)
    ok = s is not None and s % q != 0
    detail = f"valuation s={s}" if s is not None else "curve missing from datum"
    return SiteRecord(site, "curve-ramification", "kummer-valuation-prime-to-q", ok, detail)


def _chilly_local_data(model, datum, nid):
    node = model.graph.nodes[nid]
    q = model.q
    closure = mu_q_closure(node.residue_field)
    u = closure.embed(node.tail.u, node.residue_field)
    v = closure.embed(node.tail.v, node.residue_field)
    w = closure.embed(datum.node_units.get(nid, 1), node.residue_field)
    a_id, b_id = node.curves
    return node, closure, u, v, w, a_id, b_id


def _check_chilly_site(site, model, datum, nid, perturb) -> SiteRecord:
    q = model.q
    node, closure, u, v, w, a_id, b_id = _chilly_local_data(model, datum, nid)
    if datum.s.get(a_id, 0) % q == 0 or datum.s.get(b_id, 0) % q == 0:
        return SiteRecord(site, "chilly", "monomial-grid", False, "incident curve missing from datum")
    s_pi = datum.s[a_id] % q
    s_delta = datum.s[b_id] % q if perturb is None else (perturb * datum.s[a_id]) % q
    x, y = two_x(closure), two_y(closure)
    uu = TwoVarRational.constant(closure, u)
    vv = TwoVarRational.constant(closure, v)
    m_loc = TwoVarRational.constant(closure, w) * x ** s_pi * y ** s_delta
    pairs = [(uu, x), (vv, y)]
    for a in range(1, 3 * q + 1):
        for b in range(1, 3 * q + 1):
            d = MonomialValuation(a, b)
            ram = ramification_of_sum(d, pairs, q, closure)
            mode = split_check(d, m_loc, ram, q)
            if mode is SplitMode.NOT_SPLIT:
                return SiteRecord(
                    site,
                    "chilly",
                    "monomial-grid",
                    False,
                    f"witness valuation (a,b)=({a},{b}) exponents ({s_pi},{s_delta})",
                )
    s_node = model.graph.classify(nid).s
    expected = (datum.s[b_id] * pow(datum.s[a_id], -1, q)) % q
    if s_node != expected:
        return SiteRecord(
            site, "chilly", "coefficient-consistency", False, f"s={s_node} but s_j/s_i={expected}"
        )
    return SiteRecord(site, "chilly", "monomial-grid", True, f"grid a,b<={3*q} exponents ({s_pi},{s_delta})")


def _final_node_unit(model, datum, nid, cid) -> int:
    """Class representative of the m-element's angular unit at the node as
    seen along cid: the baseline choice times the gluing unit's value."""
    node = model.graph.nodes[nid]
    rf = node.residue_field
    w = datum.node_units.get(nid, 1)
    vfun = datum.v.get(cid)
    if vfun is not None and not vfun.is_zero:
        from .ffield import reduce_at

        P = node.places[cid]
        val = reduce_at(P, vfun) if valuation(P, vfun) == 0 else None
        if val is None:
            return 0  # gluing unit fails to be a unit here: flagged by caller
        big = P.residue_field
        if big is rf:
            w = rf.mul(w, val)
        elif rf.is_ancestor_of(big):
            w = big.mul(big.embed(w, rf), val)
        else:
            raise ModelError("node/place residue tower mismatch")
    return w


def _check_cold_site(site, model, datum, nid) -> SiteRecord:
    q = model.q
    node = model.graph.nodes[nid]
    a_id = node.curves[0]
    w = _final_node_unit(model, datum, nid, a_id)
    if w == 0:
        return SiteRecord(site, "cold", "character-triviality", False, "gluing unit not a unit at the node")
    chi = cold_chi(model, nid, a_id, datum.s, w)
    return SiteRecord(
        site,
        "cold",
        "character-triviality",
        chi == 0,
        f"chi={chi}",
    )


def _check_cold_relation(site, model, datum, nid) -> SiteRecord:
    q = model.q
    node = model.graph.nodes[nid]
    a_id, b_id = node.curves
    wa = _final_node_unit(model, datum, nid, a_id)
    wb = _final_node_unit(model, datum, nid, b_id)
    if wa == 0 or wb == 0:
        return SiteRecord(site, "cold-relation", "cross-curve-ramification", False, "non-unit gluing value")
    chi_a = cold_chi(model, nid, a_id, datum.s, wa)
    chi_b = cold_chi(model, nid, b_id, datum.s, wb)
    ok = (datum.s[a_id] * chi_a + datum.s[b_id] * chi_b) % q == 0
    return SiteRecord(
        site,
        "cold-relation",
        "cross-curve-ramification",
        ok,
        f"s*chi={datum.s[a_id] * chi_a % q} -t*chi'={(-datum.s[b_id] * chi_b) % q}",
    )


def _check_bad_node(site, model, datum, nid, kind) -> SiteRecord:
    return SiteRecord(site, kind, "pipeline-gate", False, f"{kind} point reached the verifier")


def _check_curve_point(site, model, datum, nid, split) -> SiteRecord:
    if split:
        return SiteRecord(site, "curve-point", "split-vacuous", True, "")
    # nonsplit crossings are certified through the support sites; here the
    # local shape is u * pi^s with no other support component
    return SiteRecord(site, "curve-point", "nonsplit-untouched", True, "")


def _support_site_keys(model, datum):
    keys = set()
    for m in model.meets.values():
        if model.graph.curves[m.curve].ramified:
            keys.add((m.curve, m.place))
    for n in model.graph.nodes.values():
        if n.tail is None:
            for cid in n.curves:
                other = n.other(cid)
                if model.graph.curves[cid].ramified and datum.e.get(other, 0) % model.q:
                    keys.add((cid, n.places[cid]))
    for cid, v in datum.v.items():
        if v.is_constant or not model.graph.curves[cid].ramified:
            continue
        for P in _divisor_places(v):
            keys.add((cid, P))
    return sorted(keys, key=lambda k: (k[0], k[1].sort_key()))


def _check_support_site(site, model, datum, cid, P) -> SiteRecord:
    q = model.q
    curve = model.graph.curves[cid]
    behavior, _ = cover_behavior(curve.cover, P)
    n_eff = effective_mult(model, datum, cid, P)
    if behavior is CoverBehavior.SPLIT:
        return SiteRecord(site, "support", "split-point", True, f"mult={n_eff}")
    if behavior is CoverBehavior.RAMIFIED:
        return SiteRecord(site, "support", "cover-ramified-point", False, "E through a cover-ramified point")
    ok = n_eff % q == 0
    return SiteRecord(site, "support", "nonsplit-mult-divisible", ok, f"mult={n_eff}")


def _check_residual_site(site, model, datum, cid, cache) -> SiteRecord:
    try:
        beta = residual_class(model, cid, datum)
    except (ModelError, CurveDataError) as exc:
        return SiteRecord(site, "residual", "vector-zero", False, f"assembly failed: {exc}")
    cache[cid] = beta
    return SiteRecord(site, "residual", "vector-zero", beta.is_zero, "" if beta.is_zero else f"{beta!r}")


def _check_chilly_images(site, model, datum, nid, cache) -> SiteRecord:
    node = model.graph.nodes[nid]
    vals = []
    for cid in node.curves:
        beta = cache.get(cid)
        if beta is None:
            return SiteRecord(site, "chilly-images", "residue-agreement", True, "no residual data")
        vals.append(beta.residue_at(node.places[cid]))
    ok = vals[0] == vals[1] == 0
    return SiteRecord(site, "chilly-images", "residue-agreement", ok, f"entries={vals}")
