"""Two-variable rational functions over a finite field, monomial valuations,
and the local splitting checks used at nodal points.

A monomial valuation assigns d(x) = a, d(y) = b (a, b >= 0, not both zero);
its residue field is k(x', y') for fresh transcendentals, realized here as
another copy of k(x, y).  Minimal-value monomials of a polynomial never
cancel -- distinct exponent pairs stay distinct monomials in x', y' -- so the
valuation of a sum is the minimum over the support and the residue is the
sum of the minimal terms.

q-th power testing works through the k(x)[y] view: an element is a q-th
power iff its leading y-coefficient is one in k(x) (a univariate question
over k) and the monic part has an exact monic q-th root, found by solving
for the root's coefficients top down (q is invertible since q != char).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import polys
from .ffield import Place, function_field, is_qth_power as is_qth_power_1var, valuation as place_valuation, normalized_residue
from .gfq import FqField, UnitClass, frobenius_invariant, unit_class


class TwoVarPoly:
    """Polynomial in k[x, y]: dict (i, j) -> nonzero coefficient code."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FqField, terms: dict):
        self.field = field
        self.terms = {e: c for e, c in terms.items() if not field.is_zero(c)}

    @classmethod
    def constant(cls, field, c):
        return cls(field, {(0, 0): c})

    @classmethod
    def monomial(cls, field, c, i, j):
        return cls(field, {(i, j): c})

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_constant(self):
        return all(e == (0, 0) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0, 0), 0)

    def __add__(self, other):
        out = dict(self.terms)
        F = self.field
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return TwoVarPoly(F, out)

    def __neg__(self):
        F = self.field
        return TwoVarPoly(F, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                e = (i1 + i2, j1 + j2)
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return TwoVarPoly(F, out)

    def __pow__(self, e: int):
        assert e >= 0
        result = TwoVarPoly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def deg_y(self):
        return max((j for (_, j) in self.terms), default=-1)

    def y_coefficients(self):
        """List (index j) of univariate x-polynomials (coefficient lists)."""
        d = self.deg_y()
        out = [[] for _ in range(d + 1)]
        for (i, j), c in self.terms.items():
            cs = out[j]
            while len(cs) <= i:
                cs.append(0)
            cs[i] = c
        return [polys.normalize(self.field, cs) for cs in out]

    def __eq__(self, other):
        return isinstance(other, TwoVarPoly) and self.field is other.field and self.terms == other.terms

    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for (i, j), c in sorted(self.terms.items()):
            s = str(c)
            if i:
                s += f"*x^{i}" if i > 1 else "*x"
            if j:
                s += f"*y^{j}" if j > 1 else "*y"
            bits.append(s)
        return " + ".join(bits)


class TwoVarRational:
    """Unreduced num/den pair in k(x, y); equality questions go through
    q-th-power tests of ratios, never syntactic comparison."""

    __slots__ = ("field", "num", "den")

    def __init__(self, num: TwoVarPoly, den: TwoVarPoly):
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        self.field = num.field
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, field, c):
        return cls(TwoVarPoly.constant(field, c), TwoVarPoly.constant(field, 1))

    @classmethod
    def monomial(cls, field, c, i, j):
        num = TwoVarPoly.monomial(field, c, max(i, 0), max(j, 0))
        den = TwoVarPoly.monomial(field, 1, max(-i, 0), max(-j, 0))
        return cls(num, den)

    @property
    def is_zero(self):
        return self.num.is_zero

    def __mul__(self, other):
        return TwoVarRational(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero:
            raise ZeroDivisionError
        return TwoVarRational(self.num * other.den, self.den * other.num)

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError
        return TwoVarRational(self.den, self.num)

    def __neg__(self):
        return TwoVarRational(-self.num, self.den)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return TwoVarRational(self.num ** e, self.den ** e)

    def __repr__(self):
        if self.den.is_constant and self.den.constant_value() == 1:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def two_x(field):
    return TwoVarRational.monomial(field, 1, 1, 0)


def two_y(field):
    return TwoVarRational.monomial(field, 1, 0, 1)


@dataclass(frozen=True)
class MonomialValuation:
    """d(x) = a, d(y) = b with a, b >= 0 not both zero; d of a fresh
    uniformizing parameter is 1."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or (self.a == 0 and self.b == 0):
            raise ValueError("monomial valuation needs a, b >= 0, not both zero")

    def poly_value(self, p: TwoVarPoly) -> int:
        if p.is_zero:
            raise ZeroDivisionError("valuation of zero")
        return min(self.a * i + self.b * j for (i, j) in p.terms)

    def value(self, f: TwoVarRational) -> int:
        return self.poly_value(f.num) - self.poly_value(f.den)

    def poly_residue(self, p: TwoVarPoly) -> TwoVarPoly:
        v = self.poly_value(p)
        keep = {e: c for e, c in p.terms.items() if self.a * e[0] + self.b * e[1] == v}
        return TwoVarPoly(p.field, keep)

    def residue(self, f: TwoVarRational) -> TwoVarRational:
        """Angular component: image of f / T^d(f) in k(x', y')."""
        return TwoVarRational(self.poly_residue(f.num), self.poly_residue(f.den))


def _monic_qth_root_exists(K, M, q):
    """M a monic polynomial (coeff list) over field-ops object K: is M = N^q
    for a monic N?  Solve for N's coefficients from the top, then verify."""
    n = polys.deg(M)
    if n % q:
        return False
    m = n // q
    if m == 0:
        return True
    qinv = K.inv(_int_in(K, q))
    N = [K.zero] * m + [K.one]
    for k in range(1, m + 1):
        cur = polys.pow_(K, N, q)
        want = M[n - k] if n - k < len(M) else K.zero
        have = cur[n - k] if n - k < len(cur) else K.zero
        N[m - k] = K.mul(K.sub(want, have), qinv)
    return polys.pow_(K, N, q) == polys.normalize(K, list(M))


def _int_in(K, n):
    acc = K.zero
    one = K.one
    for _ in range(n % K.char):
        acc = K.add(acc, one)
    return acc


def _is_qth_power_xpoly(field: FqField, cs, q) -> bool:
    """q-th power test for an element of k(x) given as a polynomial in x."""
    ff = function_field(field)
    return is_qth_power_1var(ff.rational(cs))


def is_qth_power_2var(f: TwoVarRational, q: int) -> bool:
    """True iff f is a q-th power in k(x, y)."""
    if f.is_zero:
        raise ZeroDivisionError("zero is not tested for q-th powers")
    field = f.field
    H = f.num * f.den ** (q - 1)
    ycs = H.y_coefficients()
    if len(ycs) == 1:
        return _is_qth_power_xpoly(field, ycs[0], q)
    # k(x)[y] view: split off the leading coefficient, test the monic part
    kx = function_field(field)
    lead = ycs[-1]
    M = [kx.rational(cs) / kx.rational(lead) for cs in ycs]
    if not _monic_qth_root_exists(kx, M, q):
        return False
    return _is_qth_power_xpoly(field, lead, q)


class LocalClass:
    """An element of k(x', y')* modulo q-th powers (a ramification class at a
    monomial valuation)."""

    __slots__ = ("q", "rep")

    def __init__(self, q: int, rep: TwoVarRational):
        if rep.is_zero:
            raise ZeroDivisionError("class of zero")
        self.q = q
        self.rep = rep

    @property
    def field(self):
        return self.rep.field

    def is_trivial(self) -> bool:
        return is_qth_power_2var(self.rep, self.q)

    def __eq__(self, other):
        if not isinstance(other, LocalClass):
            return NotImplemented
        return is_qth_power_2var(self.rep / other.rep, self.q)

    def __mul__(self, other):
        return LocalClass(self.q, self.rep * other.rep)

    def constant_class(self) -> UnitClass | None:
        """UnitClass of the representative when it is (visibly) constant."""
        num, den = self.rep.num, self.rep.den
        if len(num.terms) == 1 and len(den.terms) == 1:
            (e1, c1), = num.terms.items()
            (e2, c2), = den.terms.items()
            if e1 == e2:
                return unit_class(self.field, self.field.div(c1, c2))
        if num.is_constant and den.is_constant:
            return unit_class(self.field, self.field.div(num.constant_value(), den.constant_value()))
        return None

    def __repr__(self):
        return f"LocalClass({self.rep!r} mod {self.q}-th powers)"


def tame_residue_monomial(d: MonomialValuation, a: TwoVarRational, b: TwoVarRational, q: int) -> LocalClass:
    """Ramification class of the symbol (a, b) at the monomial valuation d."""
    if a.is_zero or b.is_zero:
        raise ZeroDivisionError("tame symbol needs nonzero entries")
    da = d.value(a)
    db = d.value(b)
    u = (a ** db) / (b ** da)
    if (da * db) % 2:
        u = -u
    assert d.value(u) == 0
    return LocalClass(q, d.residue(u))


def ramification_of_sum(d: MonomialValuation, pairs, q: int, field: FqField) -> LocalClass:
    """Ramification at d of a sum of symbols (a_k, b_k): the product of the
    termwise tame residues, computed in the residue field k(x', y')."""
    total = TwoVarRational.constant(field, 1)
    for a, b in pairs:
        if a.is_zero or b.is_zero:
            raise ZeroDivisionError("tame symbol needs nonzero entries")
        da = d.value(a)
        db = d.value(b)
        u = (a ** db) / (b ** da)
        if (da * db) % 2:
            u = -u
        total = total * u
    assert d.value(total) == 0
    return LocalClass(q, d.residue(total))


class SplitMode(Enum):
    UNRAMIFIED = "unramified"
    BY_RAMIFICATION = "by-ramification"
    BY_RESIDUES = "by-residues"
    NOT_SPLIT = "not-split"


def split_check(valn, m, ram, q: int) -> SplitMode:
    """The degree-q splitting dichotomy at a single valuation: given the
    extension element m (so M = K(m^{1/q})) and the ramification class of
    the Brauer class at the valuation, decide how (or whether) M kills it.

    Accepts a MonomialValuation with TwoVarRational m and LocalClass ram, or
    a Place with RationalFunction m and UnitClass ram.
    """
    if isinstance(valn, MonomialValuation):
        if ram.is_trivial():
            return SplitMode.UNRAMIFIED
        if valn.value(m) % q:
            return SplitMode.BY_RAMIFICATION
        x_bar = LocalClass(q, valn.residue(m))
        for j in range(1, q):
            if LocalClass(q, x_bar.rep ** j) == ram:
                return SplitMode.BY_RESIDUES
        return SplitMode.NOT_SPLIT
    if isinstance(valn, Place):
        rf = valn.residue_field
        if ram.exponent == 0:
            return SplitMode.UNRAMIFIED
        if place_valuation(valn, m) % q:
            return SplitMode.BY_RAMIFICATION
        x_bar = frobenius_invariant(rf, normalized_residue(valn, m))
        for j in range(1, q):
            if (j * x_bar - ram.exponent) % q == 0:
                return SplitMode.BY_RESIDUES
        return SplitMode.NOT_SPLIT
    raise TypeError(f"unsupported valuation {valn!r}")
