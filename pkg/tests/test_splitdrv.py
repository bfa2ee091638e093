import random

import pytest

from conftest import load_model

from ramsplit.curvebr import CyclicCoverData, symbol_residues
from ramsplit.ffield import function_field, valuation
from ramsplit.gfq import GF, frobenius_invariant
from ramsplit.ramgraph import CurveKind, CurveNode, NodePoint, RamGraph, TailBI, TailBII
from ramsplit.splitdrv import (
    GateError,
    MeetRecord,
    SplittingDatum,
    SurfaceModel,
    cold_chi,
    construct_splitting,
    index_is_q,
    kill_residuals,
    residual_class,
    resolve_model,
    solve_mod_q,
    verify_splitting,
)

F7 = GF(3, 7)
K = function_field(F7)


def test_solve_mod_q():
    assert solve_mod_q([[1, 1], [0, 1]], [2, 1], 3) == [1, 1]
    assert solve_mod_q([[1, 1], [2, 2]], [1, 1], 3) is None
    assert solve_mod_q([[0, 0]], [0], 3) == [0, 0]
    x = solve_mod_q([[1, 2, 0], [0, 1, 1]], [1, 2], 5)
    assert x is not None
    assert (x[0] + 2 * x[1]) % 5 == 1 and (x[1] + x[2]) % 5 == 2


def test_index_is_q_on_models():
    for name, expect in [
        ("chilly_path", True),
        ("cold_pair", True),
        ("mixed", True),
        ("hot_node", False),
        ("cool_node", True),
        ("triangle_loop", True),
    ]:
        ok, hot = index_is_q(load_model(name))
        assert ok == expect, name
        if not expect:
            assert hot == ["n1"]


def test_empty_model_index_trivially_q():
    model = SurfaceModel("empty", 3, RamGraph(3))
    ok, hot = index_is_q(model)
    assert ok and not hot


def one_curve_model(cover_rat, meets=(), relations=()):
    g = RamGraph(3)
    g.add_curve(
        CurveNode("C1", CurveKind.VERTICAL, constants=F7, cover=CyclicCoverData(K, cover_rat))
    )
    g.add_curve(CurveNode("D1", CurveKind.HORIZONTAL))
    model = SurfaceModel("one", 3, g)
    for i, (place, mult) in enumerate(meets):
        mid = f"m{i}"
        model.meets[mid] = MeetRecord(mid, "D1", "C1", K.place(place), mult)
    model.relations = [dict(r) for r in relations]
    return model


def test_residual_class_away_from_support_is_zero():
    model = one_curve_model(K.constant(3))
    model.validate()
    datum = SplittingDatum(3, {"C1": 1}, {"D1": 0}, {}, {}, "formal")
    assert residual_class(model, "C1", datum).is_zero


def test_residual_class_nonsplit_meet_entries():
    # cover = 3: inert at every degree-1 place with gamma = 1
    model = one_curve_model(
        K.constant(3), meets=[(((0, 1)), 1), (((6, 1)), 2)]
    )
    model.validate()
    datum = SplittingDatum(3, {"C1": 2}, {"D1": 1}, {}, {}, "formal")
    beta = residual_class(model, "C1", datum)
    # m_i = inv(2) = 2; entries -2 * (C.E)_P * 1
    assert beta.support == {K.place([0, 1]): 1, K.place([6, 1]): 2}
    # multiplicity q contributes nothing
    model2 = one_curve_model(K.constant(3), meets=[(((0, 1)), 3)])
    beta2 = residual_class(model2, "C1", SplittingDatum(3, {"C1": 1}, {"D1": 1}, {}, {}, "formal"))
    assert beta2.is_zero


def test_residual_class_unbalanced_model_raises():
    from ramsplit.ramgraph import ModelError

    model = one_curve_model(K.constant(3), meets=[(((0, 1)), 1)])
    datum = SplittingDatum(3, {"C1": 1}, {"D1": 1}, {}, {}, "formal")
    with pytest.raises(ModelError):
        residual_class(model, "C1", datum)


def test_kill_residuals_one_curve_direct():
    # beta_C = residues of (c, u): the gluing unit u^{-s adjustment} kills it
    model = one_curve_model(
        K.constant(3), meets=[(((0, 1)), 1), (((6, 1)), 2)]
    )
    model.validate()
    datum = SplittingDatum(3, {"C1": 2}, {"D1": 1}, {}, {}, "formal")
    out = kill_residuals(model, datum)
    v = out.v["C1"]
    assert not v.is_zero
    assert residual_class(model, "C1", out).is_zero
    # the solver respected the vector equation exactly
    target = residual_class(model, "C1", datum).scale(2)
    assert symbol_residues(K.constant(3), v) == target


def test_cold_chi_against_monomial_grid():
    """chi_P triviality must agree with the honest two-variable certificate:
    at valuations where the Kummer element is unramified, splitting holds iff
    the residue classes match (the b*chi rule)."""
    from ramsplit.twovar import (
        MonomialValuation,
        SplitMode,
        TwoVarRational,
        ramification_of_sum,
        split_check,
        two_x,
        two_y,
    )

    rng = random.Random(31)
    for q, field in ((3, F7), (5, GF(5, 11))):
        runs = 20 if q == 3 else 6
        for _ in range(runs):
            m = rng.randrange(1, q)
            u = rng.randrange(1, field.size)
            v = rng.randrange(1, field.size)
            w = rng.randrange(1, field.size)
            s = rng.randrange(1, q)
            t = rng.randrange(1, q)
            minv = pow(m, -1, q)
            x, y = two_x(field), two_y(field)
            pairs = [(TwoVarRational.constant(field, u) * y ** m,
                      TwoVarRational.constant(field, v) * x)]
            m_loc = TwoVarRational.constant(field, w) * x ** s * y ** t
            # direct chi computation from the same local data
            cu, cv, cw = (frobenius_invariant(field, z) for z in (u, v, w))
            chi = (pow(s, -1, q) * m * (cw - t * minv * cu - s * cv)) % q
            for a in range(1, 3 * q + 1):
                for b in range(1, 3 * q + 1):
                    d = MonomialValuation(a, b)
                    if (s * a + t * b) % q:
                        continue  # M ramified at d: always splits there
                    ram = ramification_of_sum(d, pairs, q, field)
                    mode = split_check(d, m_loc, ram, q)
                    expect_split = (b * chi) % q == 0
                    assert (mode is not SplitMode.NOT_SPLIT) == expect_split, (
                        m, u, v, w, s, t, a, b, chi, mode,
                    )


def test_cold_chi_formula_matches_model_path():
    model = load_model("cold_pair")
    s_map = {"C1": 1, "C2": 1}
    # chi at node n1 with baseline unit: -(cls u + cls v) = -(1+1) = 1
    assert cold_chi(model, "n1", "C1", s_map, 1) == 1
    assert cold_chi(model, "n2", "C1", s_map, 1) == 2
    assert cold_chi(model, "n3", "C1", s_map, 1) == 0
    # cross-curve law: s*chi + t*chi' = 0 at every node, chi' from the other frame
    for nid in ("n1", "n2", "n3"):
        chi = cold_chi(model, nid, "C1", s_map, 1)
        chi2 = cold_chi(model, nid, "C2", s_map, 1)
        assert (s_map["C1"] * chi + s_map["C2"] * chi2) % 3 == 0


def test_construct_requires_resolution():
    model = load_model("cool_node")
    with pytest.raises(GateError) as ei:
        construct_splitting(model)
    assert ei.value.kind == "unresolved-cool"
    model2 = load_model("triangle_loop")
    with pytest.raises(GateError) as ei:
        construct_splitting(model2)
    assert ei.value.kind == "chilly-loops"


def test_construct_refuses_hot():
    with pytest.raises(GateError) as ei:
        construct_splitting(load_model("hot_node"))
    assert ei.value.kind == "hot" and ei.value.witnesses == ["n1"]


def test_formal_mode():
    model = load_model("chilly_path")
    datum = construct_splitting(model, formal=True)
    assert datum.mode == "formal"
    assert all(v == 0 for v in datum.e.values())
    report = verify_splitting(model, datum)
    assert report.overall


def test_infeasible_relations():
    model = load_model("chilly_path")
    model.relations = [{"C1": 1, "C2": 1}]  # s = (1, 2) cannot cancel
    with pytest.raises(GateError) as ei:
        construct_splitting(model)
    assert ei.value.kind == "infeasible-e"


def test_end_to_end_all_models():
    for name in ("chilly_path", "cold_pair", "mixed", "cool_node", "triangle_loop"):
        model = load_model(name)
        resolve_model(model)
        model.validate()
        datum = construct_splitting(model)
        report = verify_splitting(model, datum)
        assert report.overall, (name, [r.line() for r in report.records if not r.verdict])
        for cid in model.residual_curves():
            assert residual_class(model, cid, datum).is_zero


def test_verify_jobs_deterministic():
    model = load_model("mixed")
    datum = construct_splitting(model)
    r1 = verify_splitting(model, datum, jobs=1)
    r4 = verify_splitting(model, datum, jobs=4)
    assert r1.to_text() == r4.to_text()


def test_chilly_perturbation_finds_witness_for_all_t():
    model = load_model("chilly_path")
    datum = construct_splitting(model)
    q = 3
    s_true = 2
    for t in range(1, q):
        rep = verify_splitting(model, datum, perturb_chilly=t)
        if t == s_true:
            assert rep.overall
        else:
            bad = [r for r in rep.records if not r.verdict]
            assert bad and all("witness valuation" in r.detail for r in bad)
            # the witness stays within the a, b <= q box
            import re

            m = re.search(r"\((\d+),(\d+)\)", bad[0].detail)
            a, b = int(m.group(1)), int(m.group(2))
            assert 1 <= a <= q and 1 <= b <= q


def test_cold_perturbation_flips_verdict():
    model = load_model("cold_pair")
    datum = construct_splitting(model)
    assert verify_splitting(model, datum).overall
    datum.node_units["n3"] = 3  # perturb the local unit class at a cold site
    rep = verify_splitting(model, datum)
    assert not rep.overall
    assert any(r.kind == "cold" and not r.verdict and "n3" in r.site for r in rep.records)
    # the cross-curve relation is intrinsic to the data and keeps holding
    assert all(r.verdict for r in rep.records if r.kind == "cold-relation")


def test_pipeline_generic_q5():
    # a chilly model over F_11 with q = 5 runs the whole pipeline
    q = 5
    F11 = GF(q, 11)
    K11 = function_field(F11)
    g = RamGraph(q)
    for cid, c in (("C1", 2), ("C2", 4)):
        g.add_curve(
            CurveNode(cid, CurveKind.VERTICAL, constants=F11,
                      cover=CyclicCoverData(K11, K11.constant(c)))
        )
    g.add_curve(CurveNode("D1", CurveKind.HORIZONTAL))
    P = K11.place([0, 1])
    g.add_node(NodePoint("n1", ("C1", "C2"), F11, TailBI(2, 4), {"C1": P, "C2": P}))
    model = SurfaceModel("five", q, g, {}, [{"C1": 1, "D1": -1}, {"C2": 1, "D1": -2}], [])
    model.validate()
    assert model.graph.classify("n1").s == 2
    datum = construct_splitting(model)
    assert datum.s == {"C1": 1, "C2": 2}
    report = verify_splitting(model, datum)
    assert report.overall, [r.line() for r in report.records if not r.verdict]
    rep_bad = verify_splitting(model, datum, perturb_chilly=4)
    assert not rep_bad.overall


def _random_cold_model(rng):
    """Two ramified curves crossing at k cold points, generated coherently:
    cover exponents balance mod q at infinity, and the second cover's unit is
    chosen to zero the residual-character sum along each curve."""
    q = 3
    k = rng.choice([2, 4])
    roots = rng.sample(range(7), k)
    ms = [rng.choice([1, 2]) for _ in range(k - 1)]
    last = (-sum(ms)) % q
    if last == 0:
        ms[-1] = 3 - ms[-1]
        last = (-sum(ms)) % q
    ms.append(last)

    def cover(unit, exps):
        c = K.constant(unit)
        for r, e in zip(roots, exps):
            c = c * (K.t() - r) ** e
        return c

    def classes_of(c, exps):
        from ramsplit.ffield import normalized_residue

        out = []
        for r in roots:
            P = K.place([(-r) % 7, 1])
            out.append(frobenius_invariant(F7, normalized_residue(P, c)))
        return out

    w1 = rng.randrange(1, 7)
    c1 = cover(w1, ms)
    cu = classes_of(c1, ms)
    ms2 = [(-m) % q for m in ms]
    # the character sum along the curve is A + k*cls(w2); zero it by choice of w2
    base = classes_of(cover(1, ms2), ms2)
    A = sum(-cu_i + b_i for cu_i, b_i in zip(cu, base)) % q
    need = (-A * pow(k % q, -1, q)) % q
    w2 = next(w for w in range(1, 7) if frobenius_invariant(F7, w) == need)
    c2 = cover(w2, ms2)
    c2cls = classes_of(c2, ms2)

    def rep_with_class(cls_val):
        choices = [w for w in range(1, 7) if frobenius_invariant(F7, w) == cls_val % q]
        return rng.choice(choices)

    g = RamGraph(q)
    g.add_curve(CurveNode("C1", CurveKind.VERTICAL, constants=F7, cover=CyclicCoverData(K, c1)))
    g.add_curve(CurveNode("C2", CurveKind.VERTICAL, constants=F7, cover=CyclicCoverData(K, c2)))
    g.add_curve(CurveNode("D1", CurveKind.HORIZONTAL))
    for i, (r, m) in enumerate(zip(roots, ms)):
        P = K.place([(-r) % 7, 1])
        u = rep_with_class(cu[i])
        v = rep_with_class(-pow(m, -1, q) * c2cls[i])
        g.add_node(NodePoint(f"n{i}", ("C1", "C2"), F7, TailBII(m, u, v), {"C1": P, "C2": P}))
    model = SurfaceModel("randcold", q, g, {}, [{"C1": 1, "C2": 1, "D1": -2}], [])
    return model


def test_random_cold_models_end_to_end():
    rng = random.Random(777)
    for _ in range(15):
        model = _random_cold_model(rng)
        model.validate()
        ok, hot = index_is_q(model)
        assert ok
        datum = construct_splitting(model)
        report = verify_splitting(model, datum)
        assert report.overall, [r.line() for r in report.records if not r.verdict]
        for cid in ("C1", "C2"):
            assert residual_class(model, cid, datum).is_zero


def _random_mixed_model(rng):
    """A chilly point plus k cold points between two curves, generated
    coherently; the chilly edge usually forces a nontrivial coefficient
    weight on the second curve, exercising the weighted character paths."""
    q = 3
    for _attempt in range(60):
        k = rng.choice([2, 4])
        spots = rng.sample(range(7), k + 1)
        roots, r0 = spots[:k], spots[k]
        ms = [rng.choice([1, 2]) for _ in range(k - 1)]
        last = (-sum(ms)) % q
        if last == 0:
            ms[-1] = 3 - ms[-1]
            last = (-sum(ms)) % q
        ms.append(last)
        ms2 = [(-m) % q for m in ms]

        def cover(unit, exps):
            c = K.constant(unit)
            for r, e in zip(roots, exps):
                c = c * (K.t() - r) ** e
            return c

        def cls_at(c, r):
            from ramsplit.ffield import normalized_residue

            return frobenius_invariant(F7, normalized_residue(K.place([(-r) % 7, 1]), c))

        w1 = rng.randrange(1, 7)
        c1 = cover(w1, ms)
        cu = [cls_at(c1, r) for r in roots]
        a0 = cls_at(c1, r0)
        if a0 == 0:
            continue  # the chilly place must be nonsplit on C1
        c2_base = cover(1, ms2)
        base = [cls_at(c2_base, r) for r in roots]
        b0_base = cls_at(c2_base, r0)
        # pick the second cover's unit so the chilly place stays nonsplit and
        # the weighted character sum along C1 vanishes
        for w2 in range(1, 7):
            cw2 = frobenius_invariant(F7, w2)
            b0 = (b0_base + cw2) % q
            if b0 == 0:
                continue
            s_edge = (b0 * pow(a0, -1, q)) % q
            total = sum((-s_edge * cu_i + base_i + cw2) % q for cu_i, base_i in zip(cu, base))
            if total % q == 0:
                break
        else:
            continue
        c2 = cover(w2, ms2)

        def rep(cls_val):
            return rng.choice([w for w in range(1, 7) if frobenius_invariant(F7, w) == cls_val % q])

        g = RamGraph(q)
        g.add_curve(CurveNode("C1", CurveKind.VERTICAL, constants=F7, cover=CyclicCoverData(K, c1)))
        g.add_curve(CurveNode("C2", CurveKind.VERTICAL, constants=F7, cover=CyclicCoverData(K, c2)))
        g.add_curve(CurveNode("D1", CurveKind.HORIZONTAL))
        P0 = K.place([(-r0) % 7, 1])
        g.add_node(NodePoint("e0", ("C1", "C2"), F7, TailBI(rep(a0), rep(b0)), {"C1": P0, "C2": P0}))
        for i, (r, m) in enumerate(zip(roots, ms)):
            P = K.place([(-r) % 7, 1])
            v_cls = (-pow(m, -1, q) * ((base[i] + frobenius_invariant(F7, w2)) % q)) % q
            g.add_node(
                NodePoint(f"n{i}", ("C1", "C2"), F7, TailBII(m, rep(cu[i]), rep(v_cls)), {"C1": P, "C2": P})
            )
        rel = (
            [{"C1": 1, "C2": 1, "D1": -2}]
            if s_edge == 1
            else [{"C1": 1, "D1": -1}, {"C2": 1, "D1": -s_edge}]
        )
        return SurfaceModel("randmixed", q, g, {}, rel, [])
    raise AssertionError("could not balance a random mixed configuration")


def test_random_mixed_models_end_to_end():
    rng = random.Random(31337)
    weighted = 0
    for _ in range(12):
        model = _random_mixed_model(rng)
        model.validate()
        ok, _hot = index_is_q(model)
        assert ok
        datum = construct_splitting(model)
        if datum.s["C2"] != 1:
            weighted += 1
        report = verify_splitting(model, datum)
        assert report.overall, [r.line() for r in report.records if not r.verdict]
        for cid in ("C1", "C2"):
            assert residual_class(model, cid, datum).is_zero
    assert weighted >= 3  # the nontrivial-weight paths really ran


def test_hot_obstruction_is_gate_soundness():
    # every hot model fails the residual-splitting check: the class with
    # ramification u at the node is not split by the character v generates
    from ramsplit.splitdrv import hot_obstruction

    model = load_model("hot_node")
    node = model.graph.nodes["n1"]
    assert hot_obstruction(node.residue_field, 3, node.tail.u, node.tail.v)
