"""Combinatorial surface model: curves decorated with Kummer covers of their
residue curves, intersection points decorated with tails, the four-way point
classifier, and blowup surgery (cool elimination, chilly coefficient
rewriting, chilly-loop breaking, coefficient assignment).

Tails are stored from the viewpoint of the first-listed curve of a point:
type I is (u, pi) + (v, delta) with both covers unramified at the point,
type II is (u delta^m, v pi) with both covers ramified there.  Classification
base-changes the point's residue field to its mu_q closure first, which is
the operational form of removing the roots-of-unity hypothesis: degree
prime-to-q constant extensions change no point type and no coefficient.

The model demands normal crossings as an input contract: every point joins
exactly two distinct curves, and curves do not self-intersect.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .curvebr import CoverBehavior, CyclicCoverData, cover_behavior
from .ffield import FunctionField, Place, function_field, normalized_residue, valuation
from .gfq import FqField, frobenius_invariant, mu_q_closure


class ModelError(ValueError):
    """Invalid or incoherent model data."""


class CurveKind(Enum):
    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"
    EXCEPTIONAL = "exceptional"


@dataclass(frozen=True)
class TailBI:
    u: int
    v: int


@dataclass(frozen=True)
class TailBII:
    m: int
    u: int
    v: int


@dataclass
class CurveNode:
    id: str
    kind: CurveKind
    constants: Optional[FqField] = None  # vertical/exceptional: residue curve F(t)
    cover: Optional[CyclicCoverData] = None
    parent_blowup: Optional[str] = None

    @property
    def ramified(self) -> bool:
        return self.cover is not None

    @property
    def residue_curve(self) -> Optional[FunctionField]:
        if self.constants is None:
            return None
        return function_field(self.constants)


@dataclass
class NodePoint:
    """Intersection record of two curves; tail present iff both are ramified."""

    id: str
    curves: tuple[str, str]
    residue_field: FqField
    tail: TailBI | TailBII | None
    places: dict  # curve id -> Place on that curve's residue curve

    def other(self, cid: str) -> str:
        a, b = self.curves
        return b if cid == a else a


@dataclass(frozen=True)
class PointClass:
    kind: str  # distant | curve | cold | cool | chilly | hot
    split: Optional[bool] = None  # for curve points
    s: Optional[int] = None  # for chilly points, wrt the first-listed curve

    def describe(self) -> str:
        if self.kind == "chilly":
            return f"Chilly s={self.s}"
        if self.kind == "curve":
            return f"CurvePoint split={'yes' if self.split else 'no'}"
        return self.kind.capitalize()


@dataclass(frozen=True)
class SurgeryEvent:
    kind: str  # cool-blowup | chilly-blowup | chilly-edge-removed
    node: str
    curves: tuple[str, str]  # the two curves through the blown-up point
    curve_created: str
    nodes_created: tuple[str, ...]
    detail: str = ""

    def describe(self) -> str:
        created = ",".join(self.nodes_created)
        extra = f" {self.detail}" if self.detail else ""
        return f"{self.kind} at {self.node}: curve {self.curve_created} nodes [{created}]{extra}"


class RamGraph:
    def __init__(self, q: int):
        self.q = q
        self.curves: dict[str, CurveNode] = {}
        self.nodes: dict[str, NodePoint] = {}
        self.surgeries: list[SurgeryEvent] = []
        self._fresh = itertools.count(1)

    # ---- construction ----------------------------------------------------

    def add_curve(self, curve: CurveNode):
        if curve.id in self.curves:
            raise ModelError(f"duplicate curve id {curve.id}")
        self.curves[curve.id] = curve

    def add_node(self, node: NodePoint):
        if node.id in self.nodes:
            raise ModelError(f"duplicate node id {node.id}")
        self.nodes[node.id] = node

    def fresh_curve_id(self) -> str:
        while True:
            cid = f"X{next(self._fresh)}"
            if cid not in self.curves:
                return cid

    # ---- views -----------------------------------------------------------

    def ramified_curves(self) -> list[str]:
        return sorted(cid for cid, c in self.curves.items() if c.ramified)

    def nodes_on(self, cid: str) -> list[NodePoint]:
        return sorted((n for n in self.nodes.values() if cid in n.curves), key=lambda n: n.id)

    def marked_places(self, cid: str) -> list[Place]:
        return [n.places[cid] for n in self.nodes_on(cid) if cid in n.places]

    def chilly_edges(self) -> list[tuple[str, str, str, int]]:
        """(node id, curve1, curve2, coefficient wrt curve1), sorted by node id."""
        out = []
        for nid in sorted(self.nodes):
            pc = self.classify(nid)
            if pc.kind == "chilly":
                n = self.nodes[nid]
                out.append((nid, n.curves[0], n.curves[1], pc.s))
        return out

    # ---- validation --------------------------------------------------------

    def validate(self):
        for nid, n in sorted(self.nodes.items()):
            a, b = n.curves
            if a == b:
                raise ModelError(f"node {nid}: curve {a} self-intersects (normal crossings violated)")
            for cid in n.curves:
                if cid not in self.curves:
                    raise ModelError(f"node {nid}: unknown curve {cid}")
            for cid, P in n.places.items():
                if P.is_infinite:
                    raise ModelError(f"node {nid}: marked places must be finite")
            both_ramified = all(self.curves[c].ramified for c in n.curves)
            if both_ramified and n.tail is None:
                raise ModelError(f"node {nid}: both curves ramified but no tail given")
            if not both_ramified and n.tail is not None:
                raise ModelError(f"node {nid}: tail given but curves are not both ramified")
            if isinstance(n.tail, TailBII) and n.tail.m % self.q == 0:
                raise ModelError(f"node {nid}: type II tail exponent m must be prime to q")
            for u in self._tail_units(n):
                if u == 0 or u >= n.residue_field.size:
                    raise ModelError(f"node {nid}: tail unit {u} is not a unit of the residue field")
            self._check_tail_cover_coherence(nid)
        for cid, c in sorted(self.curves.items()):
            if c.ramified and c.cover.is_trivial:
                raise ModelError(f"curve {cid}: cover element is a global q-th power (split cover)")
            if c.ramified and c.kind is CurveKind.HORIZONTAL:
                raise ModelError(f"curve {cid}: horizontal curves carry no residue-curve cover here")
            if c.ramified:
                self._check_cover_ramification_sites(cid)

    def _check_cover_ramification_sites(self, cid: str):
        """A cover may ramify only at the curve's cold-node places: everywhere
        else the tail shape forces it to be unramified (infinity included)."""
        from .ffield import support_places

        curve = self.curves[cid]
        cold_places = {
            n.places[cid]
            for n in self.nodes_on(cid)
            if isinstance(n.tail, TailBII) and cid in n.places
        }
        for P in support_places(curve.cover.c):
            v = valuation(P, curve.cover.c)
            if v % self.q and P not in cold_places:
                raise ModelError(
                    f"curve {cid}: cover ramifies at {P!r} (valuation {v}) "
                    "which is not a cold nodal point of the curve"
                )

    def _tail_units(self, n: NodePoint):
        if isinstance(n.tail, TailBI):
            return (n.tail.u, n.tail.v)
        if isinstance(n.tail, TailBII):
            return (n.tail.u, n.tail.v)
        return ()

    def _coherence_data(self, n: NodePoint, cid: str):
        """(expected valuation mod q, expected unit class) of the curve's
        cover at the node, from the tail as seen from curve cid."""
        first = cid == n.curves[0]
        t = n.tail
        if isinstance(t, TailBI):
            return 0, (t.u if first else t.v), 1
        # type II: cover of the first curve is (u delta^m)^(1/q) with delta the
        # local parameter at the point, of the second (v^-m pi^-m)^(1/q)
        if first:
            return t.m % self.q, t.u, 1
        return (-t.m) % self.q, t.v, (-t.m) % self.q

    def _check_tail_cover_coherence(self, nid: str):
        n = self.nodes[nid]
        if n.tail is None:
            return
        for cid in n.curves:
            curve = self.curves[cid]
            if curve.kind is CurveKind.HORIZONTAL or cid not in n.places:
                continue
            P = n.places[cid]
            want_val, unit, unit_exp = self._coherence_data(n, cid)
            v = valuation(P, curve.cover.c)
            if v % self.q != want_val:
                raise ModelError(
                    f"node {nid}/curve {cid}: cover valuation {v} mod {self.q} != tail's {want_val}"
                )
            got = normalized_residue(P, curve.cover.c)
            rf = P.residue_field
            big = n.residue_field
            if rf is not big:
                if rf.is_ancestor_of(big):
                    got = big.embed(got, rf)
                else:
                    raise ModelError(
                        f"node {nid}/curve {cid}: place residue field is not in the node's tower"
                    )
            want = big.pow(unit, unit_exp)
            closure = mu_q_closure(big)
            cg = frobenius_invariant(closure, closure.embed(got, big))
            cw = frobenius_invariant(closure, closure.embed(want, big))
            if cg != cw:
                raise ModelError(
                    f"node {nid}/curve {cid}: cover residue class {cg} != tail class {cw}"
                )

    # ---- classification ----------------------------------------------------

    def classify(self, nid: str) -> PointClass:
        n = self.nodes[nid]
        c1, c2 = (self.curves[c] for c in n.curves)
        if not c1.ramified and not c2.ramified:
            return PointClass("distant")
        if c1.ramified != c2.ramified:
            ram_curve, ram_id = (c1, n.curves[0]) if c1.ramified else (c2, n.curves[1])
            P = n.places[ram_id]
            behavior, _ = cover_behavior(ram_curve.cover, P)
            return PointClass("curve", split=behavior is CoverBehavior.SPLIT)
        if isinstance(n.tail, TailBII):
            return PointClass("cold")
        t = n.tail
        closure = mu_q_closure(n.residue_field)
        cu = frobenius_invariant(closure, closure.embed(t.u, n.residue_field))
        cv = frobenius_invariant(closure, closure.embed(t.v, n.residue_field))
        if cu == 0 and cv == 0:
            return PointClass("cool")
        if cu == 0 or cv == 0:
            return PointClass("hot")
        s = (cv * pow(cu, -1, self.q)) % self.q
        return PointClass("chilly", s=s)

    def coefficient_wrt(self, nid: str, cid: str) -> int:
        """Chilly coefficient with respect to the named incident curve."""
        pc = self.classify(nid)
        if pc.kind != "chilly":
            raise ModelError(f"node {nid} is not chilly")
        if cid == self.nodes[nid].curves[0]:
            return pc.s
        return pow(pc.s, -1, self.q) % self.q

    # ---- blowup surgery ------------------------------------------------------

    def _exceptional_constants(self, n: NodePoint) -> FqField:
        return mu_q_closure(n.residue_field)

    def _new_places(self, constants: FqField) -> tuple[Place, Place]:
        ff = function_field(constants)
        return ff.place([0, 1]), ff.place([constants.neg(1), 1])

    def blowup_cool(self, nid: str) -> SurgeryEvent:
        """Replace a cool point by an unramified exceptional curve; the two
        incident curves now meet it at split curve points."""
        pc = self.classify(nid)
        if pc.kind != "cool":
            raise ModelError(f"blowup_cool: node {nid} is {pc.kind}, not cool")
        n = self.nodes.pop(nid)
        const = self._exceptional_constants(n)
        eid = self.fresh_curve_id()
        self.add_curve(CurveNode(eid, CurveKind.EXCEPTIONAL, constants=const, cover=None, parent_blowup=nid))
        p1, p2 = self._new_places(const)
        ids = (f"{nid}.a", f"{nid}.b")
        for new_id, cid, pe in zip(ids, n.curves, (p1, p2)):
            self.add_node(
                NodePoint(new_id, (cid, eid), n.residue_field, None, {cid: n.places[cid], eid: pe})
            )
        ev = SurgeryEvent("cool-blowup", nid, n.curves, eid, ids)
        self.surgeries.append(ev)
        return ev

    def blowup_chilly(self, nid: str) -> SurgeryEvent:
        """Blow up a chilly point with coefficient s.  For s = q-1 the
        exceptional curve is unramified and the chilly edge disappears;
        otherwise it carries the cover class u*v and the point is replaced by
        two chilly points with coefficients s+1 (wrt the strict transform of
        the first curve) and s'+1 (wrt the second, with s s' = 1 mod q)."""
        pc = self.classify(nid)
        if pc.kind != "chilly":
            raise ModelError(f"blowup_chilly: node {nid} is {pc.kind}, not chilly")
        n = self.nodes.pop(nid)
        t = n.tail
        const = self._exceptional_constants(n)
        eid = self.fresh_curve_id()
        p1, p2 = self._new_places(const)
        ids = (f"{nid}.a", f"{nid}.b")
        if (pc.s + 1) % self.q == 0:
            # ramification classes u and v are inverse: the exceptional curve
            # is unramified and the edge between the two curves is removed
            self.add_curve(CurveNode(eid, CurveKind.EXCEPTIONAL, constants=const, cover=None, parent_blowup=nid))
            for new_id, cid, pe in zip(ids, n.curves, (p1, p2)):
                self.add_node(
                    NodePoint(new_id, (cid, eid), n.residue_field, None, {cid: n.places[cid], eid: pe})
                )
            ev = SurgeryEvent("chilly-edge-removed", nid, n.curves, eid, ids, detail=f"s={pc.s}")
            self.surgeries.append(ev)
            return ev
        rf = n.residue_field
        uv = rf.mul(t.u, t.v)
        cover = CyclicCoverData(function_field(const), function_field(const).constant(const.embed(uv, rf)))
        self.add_curve(CurveNode(eid, CurveKind.EXCEPTIONAL, constants=const, cover=cover, parent_blowup=nid))
        ea, eb = ids
        self.add_node(NodePoint(ea, (n.curves[0], eid), rf, TailBI(t.u, uv), {n.curves[0]: n.places[n.curves[0]], eid: p1}))
        self.add_node(NodePoint(eb, (eid, n.curves[1]), rf, TailBI(uv, t.v), {eid: p2, n.curves[1]: n.places[n.curves[1]]}))
        s2 = (pc.s + 1) % self.q
        s2p = (pow(pc.s, -1, self.q) + 1) % self.q
        ev = SurgeryEvent("chilly-blowup", nid, n.curves, eid, ids, detail=f"s={pc.s} coeffs={s2},{s2p}")
        self.surgeries.append(ev)
        return ev

    # ---- chilly loops -----------------------------------------------------------

    def find_chilly_loops(self) -> list[list[str]]:
        """Fundamental cycles (as lists of chilly node ids) of the multigraph
        whose vertices are ramified curves and edges the chilly points."""
        from collections import deque

        edges = self.chilly_edges()
        tree_adj: dict[str, list[tuple[str, str]]] = {}
        parent = {cid: cid for cid in self.ramified_curves()}

        def root(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def tree_path(x, y):
            prev = {x: (None, None)}
            dq = deque([x])
            while dq:
                v = dq.popleft()
                if v == y:
                    break
                for w, e in tree_adj.get(v, ()):
                    if w not in prev:
                        prev[w] = (v, e)
                        dq.append(w)
            path = []
            v = y
            while prev[v][0] is not None:
                path.append(prev[v][1])
                v = prev[v][0]
            return list(reversed(path))

        cycles = []
        for nid, a, b, _s in edges:
            ra, rb = root(a), root(b)
            if ra != rb:
                parent[ra] = rb
                tree_adj.setdefault(a, []).append((b, nid))
                tree_adj.setdefault(b, []).append((a, nid))
            else:
                cycles.append(tree_path(a, b) + [nid])
        return cycles

    def break_chilly_loops(self) -> list[SurgeryEvent]:
        """Blow up along some edge of each loop until its coefficient reaches
        q-1, then once more to delete it.  Returns the surgery log slice."""
        start = len(self.surgeries)
        guard = (self.q + 1) * max(1, len(self.chilly_edges())) + 1
        steps = 0
        while True:
            cycles = self.find_chilly_loops()
            if not cycles:
                break
            target = cycles[0][0]
            # drive this edge's coefficient up to q-1, then delete
            while steps <= guard:
                steps += 1
                pc = self.classify(target)
                ev = self.blowup_chilly(target)
                if ev.kind == "chilly-edge-removed":
                    break
                # continue on the first-created edge (first curve's side)
                target = ev.nodes_created[0]
            else:
                raise ModelError("chilly loop breaking exceeded its surgery budget")
        return self.surgeries[start:]

    # ---- coefficients ---------------------------------------------------------

    def assign_coefficients(self) -> dict[str, int]:
        """s_i in (Z/q)* per ramified curve with s = s_j / s_i at every chilly
        point (coefficient wrt C_i); requires a chilly forest."""
        edges = self.chilly_edges()
        adj: dict[str, list[tuple[str, int, str]]] = {}
        for nid, a, b, s in edges:
            adj.setdefault(a, []).append((b, s, nid))
            adj.setdefault(b, []).append((a, pow(s, -1, self.q), nid))
        out: dict[str, int] = {}
        for root in self.ramified_curves():
            if root in out:
                continue
            out[root] = 1
            stack = [root]
            while stack:
                v = stack.pop()
                for w, s, nid in sorted(adj.get(v, ()), key=lambda e: e[2]):
                    val = (out[v] * s) % self.q
                    if w in out:
                        if out[w] != val:
                            raise ModelError(
                                f"inconsistent chilly coefficients around node {nid} "
                                f"(cycle through {v},{w})"
                            )
                    else:
                        out[w] = val
                        stack.append(w)
        return out
