import random

import pytest

from ramsplit.gfq import GF
from ramsplit.twovar import (
    LocalClass,
    MonomialValuation,
    SplitMode,
    TwoVarPoly,
    TwoVarRational,
    is_qth_power_2var,
    ramification_of_sum,
    split_check,
    tame_residue_monomial,
    two_x,
    two_y,
)

F7 = GF(3, 7)
X = two_x(F7)
Y = two_y(F7)


def const(c):
    return TwoVarRational.constant(F7, c)


def test_monomial_valuation_examples():
    d = MonomialValuation(1, 1)
    f = X / Y
    assert d.value(f) == 0
    r = d.residue(f)
    assert r.num.terms == {(1, 0): 1} and r.den.terms == {(0, 1): 1}
    assert MonomialValuation(2, 2).value(X * Y ** 2) == 6
    assert MonomialValuation(1, 3).value(X ** 3 / Y) == 0


def test_monomial_valuation_rejects_degenerate():
    with pytest.raises(ValueError):
        MonomialValuation(0, 0)
    with pytest.raises(ValueError):
        MonomialValuation(-1, 2)


def test_value_of_sum_no_cancellation():
    # distinct exponent pairs cannot cancel; min always realized
    p = TwoVarPoly(F7, {(2, 0): 3, (0, 1): 4, (1, 1): 1})
    d = MonomialValuation(1, 2)
    assert d.poly_value(p) == 2
    resid = d.poly_residue(p)
    assert resid.terms == {(2, 0): 3, (0, 1): 4}


def test_is_qth_power_examples():
    assert is_qth_power_2var(X ** 3, 3)
    assert is_qth_power_2var(const(6) * X ** 3, 3)
    assert not is_qth_power_2var(const(3) * X ** 3, 3)
    assert not is_qth_power_2var(X * Y, 3)
    s = TwoVarRational(TwoVarPoly(F7, {(1, 0): 1, (0, 1): 1}), TwoVarPoly.constant(F7, 1))
    assert is_qth_power_2var(s ** 3, 3)
    assert is_qth_power_2var(s ** 3 / X ** 3, 3)
    assert not is_qth_power_2var(s ** 3 * X, 3)
    assert not is_qth_power_2var(s ** 2, 3)


def test_is_qth_power_random_cubes_and_order_independence():
    rng = random.Random(11)
    for _ in range(40):
        terms = {
            (rng.randrange(3), rng.randrange(3)): rng.randrange(1, 7)
            for _ in range(rng.randint(1, 4))
        }
        p = TwoVarPoly(F7, terms)
        if p.is_zero:
            continue
        f = TwoVarRational(p, TwoVarPoly.constant(F7, 1))
        g = f ** 3
        swapped = TwoVarRational(
            TwoVarPoly(F7, {(j, i): c for (i, j), c in g.num.terms.items()}),
            TwoVarPoly(F7, {(j, i): c for (i, j), c in g.den.terms.items()}),
        )
        assert is_qth_power_2var(g, 3)
        assert is_qth_power_2var(swapped, 3)
        h = g * X
        h_swapped = TwoVarRational(
            TwoVarPoly(F7, {(j, i): c for (i, j), c in h.num.terms.items()}),
            TwoVarPoly(F7, {(j, i): c for (i, j), c in h.den.terms.items()}),
        )
        assert is_qth_power_2var(h, 3) == is_qth_power_2var(h_swapped, 3) == False


def test_residue_consistency_with_qth_powers():
    # for a d-unit f, f a cube implies its residue is a cube
    rng = random.Random(12)
    for _ in range(40):
        i, j = rng.randrange(-2, 3), rng.randrange(-2, 3)
        c = rng.randrange(1, 7)
        f = TwoVarRational.monomial(F7, c, i, j) ** 3
        d = MonomialValuation(rng.randrange(0, 3), rng.randrange(0, 3) or 1)
        resid = d.residue(f)
        assert is_qth_power_2var(resid, 3)


def test_ramification_of_sum_examples():
    # [(u, x), (v, y)] at (a, b): class of u^a v^b
    u, v = const(3), const(2)
    for a in range(1, 5):
        for b in range(1, 5):
            r = ramification_of_sum(MonomialValuation(a, b), [(u, X), (v, Y)], 3, F7)
            cc = r.constant_class()
            assert cc is not None
            assert cc.exponent == (a * 1 + b * 2) % 3
    r = ramification_of_sum(MonomialValuation(3, 1), [(const(3), X)], 3, F7)
    assert r.is_trivial()
    empty = ramification_of_sum(MonomialValuation(1, 1), [], 3, F7)
    assert empty.is_trivial()


def test_tame_monomial_antisymmetry():
    d = MonomialValuation(2, 1)
    a = const(3) * X
    b = const(2) * Y
    r1 = tame_residue_monomial(d, a, b, 3)
    r2 = tame_residue_monomial(d, b, a, 3)
    assert (r1 * r2).is_trivial()


def test_split_check_modes():
    q = 3
    u, v = const(3), const(2)  # chilly with s = 2
    pairs = [(u, X), (v, Y)]
    m = X * Y ** 2
    d = MonomialValuation(1, 1)  # val(m) = 3 = 0 mod 3, ram = cls(3*2)=0
    ram = ramification_of_sum(d, pairs, q, F7)
    assert split_check(d, m, ram, q) is SplitMode.UNRAMIFIED
    d2 = MonomialValuation(1, 2)  # val(m) = 5, prime to 3
    ram2 = ramification_of_sum(d2, pairs, q, F7)
    assert split_check(d2, m, ram2, q) is SplitMode.BY_RAMIFICATION
    # wrong-coefficient element fails at a witness valuation
    m_bad = X * Y
    d3 = MonomialValuation(1, 2)  # val(m_bad) = 3 but ram = cls(3*4) = cls(5) != 0
    ram3 = ramification_of_sum(d3, pairs, q, F7)
    assert split_check(d3, m_bad, ram3, q) is SplitMode.NOT_SPLIT
    # by-residues: constant extension element against a matching constant class
    m_const = const(3) / X ** 3
    d4 = MonomialValuation(1, 1)
    ram4 = LocalClass(3, const(3))
    assert split_check(d4, m_const, ram4, 3) is SplitMode.BY_RESIDUES


def test_split_check_place_dispatch():
    from ramsplit.ffield import function_field
    from ramsplit.gfq import unit_class

    K = function_field(F7)
    t = K.t()
    P = K.place([0, 1])
    ram = unit_class(F7, 3)
    assert split_check(P, t, ram, 3) is SplitMode.BY_RAMIFICATION
    assert split_check(P, K.constant(2), ram, 3) is SplitMode.BY_RESIDUES
    assert split_check(P, t, unit_class(F7, 1), 3) is SplitMode.UNRAMIFIED
