"""Rational function fields F(t) over a finite constant field: places,
valuations, residues and the tame symbol.

A Place is a monic irreducible polynomial over the constants, or the
distinguished infinite place (handled through the substitution t -> 1/s, no
projective coordinates).  The residue field at a finite place is the tower
extension of the constants by the place polynomial, so residues of constants
are the constants themselves and unit-class bookkeeping stays coherent.

Residue coordinates destined for residue vectors are always computed against
the constant field's rho embedded upward; this is what makes Weil
reciprocity come out as a literal zero sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import polys
from .gfq import FqField, UnitClass, frobenius_invariant, unit_class


@lru_cache(maxsize=None)
def function_field(constants: FqField, var: str = "t") -> "FunctionField":
    return FunctionField(constants, var)


class FunctionField:
    """F(t) for a finite constant field F; elements are RationalFunction."""

    def __init__(self, constants: FqField, var: str = "t"):
        self.constants = constants
        self.var = var
        self.q = constants.q

    # field-ops protocol over RationalFunction elements (for generic polys code)
    @property
    def zero(self):
        return self.rational([], [1])

    @property
    def one(self):
        return self.rational([1], [1])

    @property
    def char(self):
        return self.constants.char

    def is_zero(self, a):
        return a.is_zero

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a / b

    def rational(self, num, den=(1,)) -> "RationalFunction":
        return RationalFunction.make(self, num, den)

    def constant(self, c: int) -> "RationalFunction":
        return self.rational([c])

    def t(self) -> "RationalFunction":
        return self.rational([0, 1])

    def place(self, poly) -> "Place":
        return Place.finite(self, tuple(poly))

    def infinite_place(self) -> "Place":
        return Place.infinite(self)

    @property
    def has_mu_q(self) -> bool:
        return self.constants.has_mu_q

    def __repr__(self):
        return f"{self.constants!r}({self.var})"

    def __eq__(self, other):
        return isinstance(other, FunctionField) and self.constants is other.constants and self.var == other.var

    def __hash__(self):
        return hash((id(self.constants), self.var))


class RationalFunction:
    """Reduced num/den pair over the constant field; den is monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        self.field = field
        self.num = tuple(num)
        self.den = tuple(den)

    @classmethod
    def make(cls, field, num, den=(1,)):
        F = field.constants
        num = polys.normalize(F, list(num))
        den = polys.normalize(F, list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls(field, (), (1,))
        g = polys.gcd(F, num, den)
        if polys.deg(g) > 0:
            num = polys.divexact(F, num, g)
            den = polys.divexact(F, den, g)
        c = F.inv(den[-1])
        num = polys.scale(F, num, c)
        den = polys.scale(F, den, c)
        return cls(field, num, den)

    @property
    def is_zero(self):
        return not self.num

    @property
    def is_constant(self):
        return len(self.num) <= 1 and self.den == (1,)

    def constant_value(self) -> int:
        if not self.is_constant:
            raise ValueError("not a constant")
        return self.num[0] if self.num else 0

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field.constants
        return RationalFunction.make(
            self.field,
            polys.mul(F, list(self.num), list(other.num)),
            polys.mul(F, list(self.den), list(other.den)),
        )

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        F = self.field.constants
        return RationalFunction.make(
            self.field,
            polys.mul(F, list(self.num), list(other.den)),
            polys.mul(F, list(self.den), list(other.num)),
        )

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field.constants
        num = polys.add(
            F,
            polys.mul(F, list(self.num), list(other.den)),
            polys.mul(F, list(other.num), list(self.den)),
        )
        return RationalFunction.make(self.field, num, polys.mul(F, list(self.den), list(other.den)))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __rmul__(self, other):
        return self * other

    def __neg__(self):
        F = self.field.constants
        return RationalFunction(self.field, tuple(F.neg(c) for c in self.num), self.den)

    def inverse(self):
        return RationalFunction.make(self.field, list(self.den), list(self.num))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        F = self.field.constants
        num = polys.pow_(F, list(self.num), e)
        den = polys.pow_(F, list(self.den), e)
        return RationalFunction.make(self.field, num, den)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise ValueError("mixed function fields")
            return other
        if isinstance(other, int):
            return self.field.constant(other)
        raise TypeError(f"cannot coerce {other!r}")

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.constant(other)
        return (
            isinstance(other, RationalFunction)
            and self.field == other.field
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.field, self.num, self.den))

    def __repr__(self):
        def fmt(cs):
            if not cs:
                return "0"
            terms = []
            for i, c in enumerate(cs):
                if c == 0:
                    continue
                if i == 0:
                    terms.append(str(c))
                elif i == 1:
                    terms.append(f"{'' if c == 1 else c}{self.field.var}")
                else:
                    terms.append(f"{'' if c == 1 else c}{self.field.var}^{i}")
            return " + ".join(terms) or "0"

        if self.den == (1,):
            return fmt(self.num)
        return f"({fmt(self.num)})/({fmt(self.den)})"


@dataclass(frozen=True)
class Place:
    """A discrete valuation of F(t): monic irreducible poly, or infinity."""

    field: FunctionField
    poly: tuple[int, ...] | None  # None = infinite place

    @classmethod
    def finite(cls, field, poly):
        F = field.constants
        poly = tuple(polys.normalize(F, list(poly)))
        if polys.deg(list(poly)) < 1:
            raise ValueError("finite place needs degree >= 1")
        if F.index(poly[-1]) != 1:
            raise ValueError("place polynomial must be monic")
        if not polys.is_irreducible(F, list(poly)):
            raise ValueError("place polynomial must be irreducible")
        return cls(field, poly)

    @classmethod
    def infinite(cls, field):
        return cls(field, None)

    @property
    def is_infinite(self):
        return self.poly is None

    @property
    def degree(self):
        return 1 if self.is_infinite else len(self.poly) - 1

    @property
    def residue_field(self) -> FqField:
        if self.is_infinite or self.degree == 1:
            return self.field.constants
        return self.field.constants.extension(self.degree, self.poly)

    def sort_key(self):
        # finite places lexicographically by (degree, coefficients); infinity last
        if self.is_infinite:
            return (1, 0, ())
        return (0, self.degree, self.poly)

    def __repr__(self):
        if self.is_infinite:
            return "inf"
        return "(" + repr(self.field.rational(self.poly)) + ")"


def valuation(P: Place, f: RationalFunction) -> int:
    """Order of vanishing of nonzero f at P."""
    if f.is_zero:
        raise ZeroDivisionError("valuation of zero")
    if P.is_infinite:
        return polys.deg(list(f.den)) - polys.deg(list(f.num))
    F = P.field.constants
    g = list(P.poly)

    def multiplicity(h):
        h = list(h)
        v = 0
        while True:
            q, r = polys.divmod_(F, h, g)
            if r:
                return v, h
            v += 1
            h = q

    vn, _ = multiplicity(f.num)
    vd, _ = multiplicity(f.den)
    return vn - vd


def reduce_at(P: Place, f: RationalFunction) -> int:
    """Image in the residue field of an f with valuation 0 at P."""
    if f.is_zero:
        raise ZeroDivisionError("cannot reduce zero")
    if P.is_infinite:
        if valuation(P, f) != 0:
            raise ValueError("valuation at infinity is nonzero")
        F = P.field.constants
        return F.div(f.num[-1], f.den[-1])
    F = P.field.constants
    g = list(P.poly)
    rf = P.residue_field

    def red(h):
        r = polys.mod(F, list(h), g)
        if P.degree == 1:
            return r[0] if r else 0
        ds = r + [0] * (P.degree - len(r))
        return rf.undigits(ds)

    num = red(f.num)
    den = red(f.den)
    if num == 0 or den == 0:
        raise ValueError("valuation at place is nonzero")
    return rf.div(num, den)


def uniformizer(P: Place) -> RationalFunction:
    if P.is_infinite:
        return P.field.rational([1], [0, 1])
    return P.field.rational(P.poly)


def normalized_residue(P: Place, f: RationalFunction) -> int:
    """Residue of f / uniformizer^v(f): the angular component at P."""
    v = valuation(P, f)
    return reduce_at(P, f * uniformizer(P) ** (-v) if v else f)


def tame_residue_element(P: Place, a: RationalFunction, b: RationalFunction) -> int:
    """The residue of (-1)^(v(a)v(b)) a^v(b) / b^v(a) at P, in F(P)*."""
    if a.is_zero or b.is_zero:
        raise ZeroDivisionError("tame symbol needs nonzero entries")
    da = valuation(P, a)
    db = valuation(P, b)
    u = (a ** db) / (b ** da)
    if (da * db) % 2:
        u = -u
    return reduce_at(P, u)


def tame_residue(P: Place, a: RationalFunction, b: RationalFunction) -> UnitClass:
    """Ramification class of the symbol (a, b) at P, in F(P)*/(F(P)*)^q."""
    return unit_class(P.residue_field, tame_residue_element(P, a, b))


def residue_coordinate(P: Place, u_bar: int) -> int:
    """Z/q coordinate of an F(P)-unit; rho is tower-coherent, so coordinates
    at all places of the curve refer to the constants' rho."""
    return frobenius_invariant(P.residue_field, u_bar)


def support_places(*fs: RationalFunction) -> list[Place]:
    """All places where any of the given elements has nonzero valuation,
    plus infinity, sorted canonically."""
    if not fs:
        return []
    field = fs[0].field
    F = field.constants
    seen = {}
    for f in fs:
        if f.is_zero:
            raise ZeroDivisionError("support of zero")
        for part in (f.num, f.den):
            if polys.deg(list(part)) < 1:
                continue
            _, fac = polys.factor(F, list(part))
            for g, _m in fac:
                seen[tuple(g)] = None
    places = [Place.finite(field, p) for p in seen]
    places.append(Place.infinite(field))
    places.sort(key=lambda P: P.sort_key())
    return places


def is_qth_power(f: RationalFunction) -> bool:
    """True iff f = g^q in F(t): factor exponents all divisible by q and the
    leading unit a q-th power in the constants."""
    if f.is_zero:
        raise ZeroDivisionError("zero is not tested for q-th powers")
    field = f.field
    F = field.constants
    q = field.q
    exps: dict[tuple, int] = {}
    unit = F.one
    for part, sign in ((f.num, 1), (f.den, -1)):
        u, fac = polys.factor(F, list(part))
        unit = F.mul(unit, F.inv(u) if sign < 0 else u)
        for g, m in fac:
            exps[tuple(g)] = exps.get(tuple(g), 0) + sign * m
    if any(e % q for e in exps.values()):
        return False
    return frobenius_invariant(F, unit) == 0
