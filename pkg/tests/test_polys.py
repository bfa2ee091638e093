import random

from hypothesis import given, strategies as st

from ramsplit import polys
from ramsplit.gfq import GF

F7 = GF(3, 7)
F4 = GF(5, 2, 2)  # char-2 branch of the factorization cascade


def rand_poly(F, rng, dmax):
    return polys.normalize(F, [rng.randrange(F.size) for _ in range(rng.randint(0, dmax + 1))])


def test_divmod_roundtrip():
    rng = random.Random(7)
    for _ in range(200):
        a = rand_poly(F7, rng, 8)
        b = rand_poly(F7, rng, 4)
        if not b:
            continue
        q, r = polys.divmod_(F7, a, b)
        assert polys.add(F7, polys.mul(F7, q, b), r) == a
        assert polys.deg(r) < polys.deg(b)


def test_gcd_divides_both():
    rng = random.Random(8)
    for _ in range(100):
        a, b = rand_poly(F7, rng, 6), rand_poly(F7, rng, 6)
        if not a or not b:
            continue
        g = polys.gcd(F7, a, b)
        if g:
            assert not polys.divmod_(F7, a, g)[1]
            assert not polys.divmod_(F7, b, g)[1]
        gg, s, t = polys.extgcd(F7, a, b)
        assert gg == g
        lhs = polys.add(F7, polys.mul(F7, s, a), polys.mul(F7, t, b))
        assert lhs == g


def _check_factor(F, f):
    unit, fac = polys.factor(F, f)
    rebuilt = [unit]
    for g, m in fac:
        assert polys.is_irreducible(F, g)
        assert g[-1] == 1
        for _ in range(m):
            rebuilt = polys.mul(F, rebuilt, g)
    assert rebuilt == f


def test_factor_reconstructs_odd_char():
    rng = random.Random(9)
    for _ in range(60):
        f = rand_poly(F7, rng, 9)
        if polys.deg(f) < 1:
            continue
        _check_factor(F7, f)


def test_factor_reconstructs_char2():
    rng = random.Random(10)
    for _ in range(40):
        f = rand_poly(F4, rng, 6)
        if polys.deg(f) < 1:
            continue
        _check_factor(F4, f)


def test_factor_with_pth_powers():
    # squarefree decomposition must cross the derivative-zero wall
    t = [0, 1]
    f = polys.pow_(F7, polys.add(F7, t, [1]), 7)
    f = polys.mul(F7, f, polys.add(F7, t, [3]))
    _check_factor(F7, f)
    unit, fac = polys.factor(F7, f)
    assert ([1, 1], 7) in fac and ([3, 1], 1) in fac


def test_first_irreducible_deterministic():
    assert polys.first_irreducible(F7, 2) == [1, 0, 1]
    assert polys.first_irreducible(F7, 1) == [0, 1]
    got = polys.first_irreducible(F7, 3)
    assert polys.is_irreducible(F7, got)
    # cubic irreducibles over F_7 have no roots
    assert all(polys.evaluate(F7, got, x) != 0 for x in range(7))


def test_irreducible_count_degree2():
    # (49 - 7)/2 = 21 monic irreducible quadratics over F_7
    assert sum(1 for _ in polys.irreducibles(F7, 2)) == 21


@given(st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=6),
       st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=6))
def test_mul_commutes(a, b):
    a = polys.normalize(F7, a)
    b = polys.normalize(F7, b)
    assert polys.mul(F7, a, b) == polys.mul(F7, b, a)
