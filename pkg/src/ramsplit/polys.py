"""Dense univariate polynomial arithmetic over a pluggable coefficient field.

A polynomial is a plain list of coefficients, low degree first, with no
trailing zeros ([] is the zero polynomial).  All functions take the
coefficient field as an explicit first argument; the field must provide
`zero`, `one`, `add`, `sub`, `mul`, `neg`, `inv`, `is_zero` and element
equality.  Finite fields additionally provide `size` and `char`, which the
factorization routines require.

Factorization is the classical squarefree / distinct-degree / equal-degree
cascade.  Everything here is desk scale: degrees stay small (tens, not
thousands), so no asymptotically fancy algorithms are used.
"""

from __future__ import annotations

import random


def normalize(F, cs):
    cs = list(cs)
    while cs and F.is_zero(cs[-1]):
        cs.pop()
    return cs


def deg(cs):
    """Degree, with deg(0) = -1."""
    return len(cs) - 1


def constant(F, c):
    return [] if F.is_zero(c) else [c]


def add(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero
        y = b[i] if i < len(b) else F.zero
        out.append(F.add(x, y))
    return normalize(F, out)


def sub(F, a, b):
    return add(F, a, [F.neg(c) for c in b])


def scale(F, a, c):
    if F.is_zero(c):
        return []
    return normalize(F, [F.mul(x, c) for x in a])


def mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return normalize(F, out)


def divmod_(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [F.zero] * max(0, len(a) - len(b) + 1)
    binv = F.inv(b[-1])
    while len(a) >= len(b) and a:
        c = F.mul(a[-1], binv)
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = F.sub(a[k + i], F.mul(c, y))
        a = normalize(F, a)
    return normalize(F, q), a


def mod(F, a, b):
    return divmod_(F, a, b)[1]


def divexact(F, a, b):
    q, r = divmod_(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def monic(F, a):
    if not a:
        return a
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a, b):
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def extgcd(F, a, b):
    """Return (g, s, t) with g = gcd monic and s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], s0, t0
    c = F.inv(r0[-1])
    return scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)


def pow_mod(F, a, e, m):
    result = [F.one]
    a = mod(F, a, m)
    while e > 0:
        if e & 1:
            result = mod(F, mul(F, result, a), m)
        a = mod(F, mul(F, a, a), m)
        e >>= 1
    return result


def pow_(F, a, e):
    result = [F.one]
    while e > 0:
        if e & 1:
            result = mul(F, result, a)
        a = mul(F, a, a)
        e >>= 1
    return result


def evaluate(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F, a):
    out = []
    for i in range(1, len(a)):
        c = a[i]
        s = F.zero
        for _ in range(i % F.char if hasattr(F, "char") else i):
            s = F.add(s, c)
        out.append(s)
    return normalize(F, out)


def _pth_root_coeff(F, c):
    # Frobenius is x -> x^char; its inverse on F of size char^d is x -> x^(size/char).
    return F.pow(c, F.size // F.char)


def pth_root(F, a):
    p = F.char
    out = []
    for i, c in enumerate(a):
        if i % p == 0:
            out.append(_pth_root_coeff(F, c))
        elif not F.is_zero(c):
            raise ArithmeticError("polynomial is not a p-th power")
    return normalize(F, out)


def squarefree_decomposition(F, f):
    """Monic f -> list of (monic squarefree factor, multiplicity), ascending."""
    f = monic(F, f)
    if deg(f) <= 0:
        return []
    out = []
    df = derivative(F, f)
    if not df:
        g = pth_root(F, f)
        return [(h, F.char * m) for h, m in squarefree_decomposition(F, g)]
    c = gcd(F, f, df)
    w = divexact(F, f, c)
    i = 1
    while deg(w) > 0:
        y = gcd(F, w, c)
        fac = divexact(F, w, y)
        if deg(fac) > 0:
            out.append((fac, i))
        w = y
        c = divexact(F, c, y)
        i += 1
    if deg(c) > 0:
        g = pth_root(F, c)
        out.extend((h, F.char * m) for h, m in squarefree_decomposition(F, g))
    out.sort(key=lambda t: (t[1], deg(t[0]), t[0]))
    return out


def _x(F):
    return [F.zero, F.one]


def distinct_degree(F, f):
    """Squarefree monic f -> list of (product of degree-k irreducibles, k)."""
    out = []
    h = _x(F)
    k = 0
    f = monic(F, f)
    while deg(f) >= 1:
        k += 1
        if 2 * k > deg(f):
            out.append((f, deg(f)))
            break
        h = pow_mod(F, h, F.size, f)
        g = gcd(F, sub(F, h, _x(F)), f)
        if deg(g) > 0:
            out.append((g, k))
            f = divexact(F, f, g)
            h = mod(F, h, f)
    return out


def _random_poly(F, n, rng):
    return normalize(F, [F.element(rng.randrange(F.size)) for _ in range(n)])


def equal_degree(F, f, k, rng):
    """Split squarefree monic f, all of whose irreducible factors have degree k."""
    n = deg(f)
    if n == k:
        return [monic(F, f)]
    while True:
        r = _random_poly(F, n, rng)
        if deg(r) < 1:
            continue
        if F.char == 2:
            # trace map over F_2 down from the degree-k factor fields
            m = F.size.bit_length() - 1
            acc = mod(F, r, f)
            t = acc
            for _ in range(k * m - 1):
                t = mod(F, mul(F, t, t), f)
                acc = add(F, acc, t)
            g = gcd(F, acc, f)
        else:
            e = (F.size ** k - 1) // 2
            s = pow_mod(F, r, e, f)
            g = gcd(F, sub(F, s, [F.one]), f)
        if 0 < deg(g) < n:
            left = equal_degree(F, g, k, rng)
            right = equal_degree(F, divexact(F, f, g), k, rng)
            return left + right


def sort_key(F, f):
    return (deg(f), tuple(F.index(c) for c in f))


def factor(F, f):
    """Factor nonzero f over the finite field F.

    Returns (unit, factors) with unit in F* and factors a sorted list of
    (monic irreducible, multiplicity) pairs.
    """
    if not f:
        raise ZeroDivisionError("cannot factor the zero polynomial")
    unit = f[-1]
    f = monic(F, f)
    rng = random.Random(0x5EED ^ (deg(f) * 1315423911) ^ F.size)
    out = []
    for sqf, m in squarefree_decomposition(F, f):
        for prod, k in distinct_degree(F, sqf):
            for g in equal_degree(F, prod, k, rng):
                out.append((g, m))
    out.sort(key=lambda t: sort_key(F, t[0]))
    return unit, out


def is_irreducible(F, f):
    n = deg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    x = _x(F)
    if pow_mod(F, x, F.size ** n, f) != mod(F, x, f):
        return False
    seen = set()
    m = n
    d = 2
    primes = []
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    for r in primes:
        if r in seen:
            continue
        seen.add(r)
        h = pow_mod(F, x, F.size ** (n // r), f)
        if deg(gcd(F, sub(F, h, x), f)) > 0:
            return False
    return True


def monic_polys(F, d):
    """Iterate all monic polynomials of degree d in canonical order."""
    for code in range(F.size ** d):
        cs = []
        c = code
        for _ in range(d):
            cs.append(F.element(c % F.size))
            c //= F.size
        cs.append(F.one)
        yield cs


def irreducibles(F, d):
    """Iterate monic irreducibles of degree d in canonical order."""
    for f in monic_polys(F, d):
        if is_irreducible(F, f):
            yield f


def first_irreducible(F, d):
    for f in irreducibles(F, d):
        return f
    raise ArithmeticError(f"no irreducible of degree {d}")
