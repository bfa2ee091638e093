"""Exact arithmetic in finite fields, q-th power classes and Frobenius characters.

Fields are presented as towers: a prime field F_ell, or an extension of an
already-constructed field by a monic irreducible modulus.  Elements are
encoded as integers in range(size); for an extension of degree d over its
base, the base-|base| digits of the code are the coefficients of the residue
polynomial, low degree first.  Constants of the base field therefore embed
as themselves, which keeps unit-class computations along a tower coherent.

Every field carries the (fixed, prime) symbol order q of the whole
computation.  Construction rejects q == ell, since tame machinery breaks
down at the residue characteristic.  The multiplicative generator is chosen
deterministically (smallest encoded element of full order), and the q-th
root of unity rho is pinned to generator**((size-1)/q) whenever q divides
size - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import polys


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FqField:
    """A finite field in a fixed tower presentation.

    Do not call directly; use GF() for prime fields and .extension() to move
    up a tower, so that equal towers are the identical object.
    """

    def __init__(self, q: int, ell: int, base: "FqField | None", modulus: tuple[int, ...] | None):
        if not _is_prime(q):
            raise ValueError(f"q = {q} is not prime")
        if not _is_prime(ell):
            raise ValueError(f"ell = {ell} is not prime")
        if q == ell:
            raise ValueError("residue characteristic equal to q is not supported")
        self.q = q
        self.ell = ell
        self.char = ell
        self.base = base
        if base is None:
            self.modulus = None
            self.dim = 1
            self.size = ell
        else:
            assert modulus is not None and len(modulus) >= 2
            self.modulus = tuple(modulus)
            self.dim = len(modulus) - 1
            self.size = base.size ** self.dim
        self.degree = 1 if base is None else base.degree * self.dim
        self.zero = 0
        self.one = 1
        self._extensions: dict[tuple[int, ...], FqField] = {}
        self._generator: int | None = None

    # ---- element codec -------------------------------------------------

    def element(self, idx: int) -> int:
        return idx

    def index(self, c: int) -> int:
        return c

    def digits(self, a: int) -> list[int]:
        assert self.base is not None
        out = []
        for _ in range(self.dim):
            out.append(a % self.base.size)
            a //= self.base.size
        return out

    def undigits(self, ds) -> int:
        assert self.base is not None
        a = 0
        for c in reversed(list(ds)):
            a = a * self.base.size + c
        return a

    def elements(self):
        return range(self.size)

    def units(self):
        return range(1, self.size)

    # ---- arithmetic ----------------------------------------------------

    def is_zero(self, a: int) -> bool:
        return a == 0

    def add(self, a: int, b: int) -> int:
        if self.base is None:
            return (a + b) % self.ell
        B = self.base
        return self.undigits(B.add(x, y) for x, y in zip(self.digits(a), self.digits(b)))

    def sub(self, a: int, b: int) -> int:
        if self.base is None:
            return (a - b) % self.ell
        B = self.base
        return self.undigits(B.sub(x, y) for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.base is None:
            return (-a) % self.ell
        B = self.base
        return self.undigits(B.neg(x) for x in self.digits(a))

    def mul(self, a: int, b: int) -> int:
        if self.base is None:
            return (a * b) % self.ell
        B = self.base
        prod = polys.mul(B, polys.normalize(B, self.digits(a)), polys.normalize(B, self.digits(b)))
        rem = polys.mod(B, prod, list(self.modulus))
        rem = rem + [0] * (self.dim - len(rem))
        return self.undigits(rem)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        while e > 0:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, self.size - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # ---- structure -----------------------------------------------------

    @property
    def generator(self) -> int:
        if self._generator is None:
            n = self.size - 1
            fac = _prime_factors(n)
            for g in range(2, self.size):
                if all(self.pow(g, n // r) != 1 for r in fac):
                    self._generator = g
                    break
            else:  # size == 2
                self._generator = 1
        return self._generator

    @property
    def has_mu_q(self) -> bool:
        return (self.size - 1) % self.q == 0

    @property
    def rho(self) -> int:
        """The pinned primitive q-th root of unity; 1 when mu_q is absent.

        Coherent along towers: once an ancestor contains mu_q, its rho (which
        embeds as the same integer code) is reused, so Frobenius coordinates
        taken at different residue fields over one constant field agree.  At
        the bottom of a tower rho is generator**((size-1)/q).
        """
        if not self.has_mu_q:
            return 1
        field = self
        while field.base is not None and field.base.has_mu_q:
            field = field.base
        return field.pow(field.generator, (field.size - 1) // field.q)

    def extension(self, e: int, modulus: tuple[int, ...] | None = None) -> "FqField":
        """Degree-e extension of this field (self for e = 1 without modulus)."""
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            if e == 1:
                return self
            modulus = tuple(polys.first_irreducible(self, e))
        else:
            modulus = tuple(modulus)
            if len(modulus) - 1 != e:
                raise ValueError("modulus degree mismatch")
            if self.index(modulus[-1]) != 1:
                raise ValueError("modulus must be monic")
            if not polys.is_irreducible(self, list(modulus)):
                raise ValueError("modulus is not irreducible")
        if e == 1:
            # a degree-1 "extension" is this field; reduction is evaluation
            return self
        key = modulus
        if key not in self._extensions:
            self._extensions[key] = FqField(self.q, self.ell, self, modulus)
        return self._extensions[key]

    def is_ancestor_of(self, other: "FqField") -> bool:
        f = other
        while f is not None:
            if f is self:
                return True
            f = f.base
        return False

    def embed(self, a: int, subfield: "FqField") -> int:
        """Embed an element of an ancestor field into this field."""
        if subfield is self:
            return a
        if self.base is None or not subfield.is_ancestor_of(self):
            raise ValueError("not an ancestor field in this tower")
        return self.undigits([self.base.embed(a, subfield)] + [0] * (self.dim - 1))

    def norm_to(self, a: int, subfield: "FqField") -> int:
        """Multiplicative norm down to an ancestor field."""
        if not subfield.is_ancestor_of(self):
            raise ValueError("not an ancestor field in this tower")
        if a == 0:
            return 0
        e = (self.size - 1) // (subfield.size - 1)
        n = self.pow(a, e)
        # the result is a constant of the subfield tower level
        f = self
        while f is not subfield:
            ds = f.digits(n)
            assert all(d == 0 for d in ds[1:]), "norm did not land in the subfield"
            n = ds[0]
            f = f.base
        return n

    def __repr__(self):
        return f"GF({self.ell}^{self.degree}; q={self.q})"


@lru_cache(maxsize=None)
def GF(q: int, ell: int, d: int = 1) -> FqField:
    """The finite field of size ell^d with the default tower presentation."""
    F = FqField(q, ell, None, None)
    return F.extension(d) if d > 1 else F


@dataclass(frozen=True)
class UnitClass:
    """An element of F*/(F*)^q, as an exponent mod q relative to the field's
    fixed generator (always 0 when the field has no q-th roots of unity)."""

    field: FqField
    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.field.q)

    def __add__(self, other: "UnitClass") -> "UnitClass":
        if other.field is not self.field:
            raise ValueError("unit classes live over different fields")
        return UnitClass(self.field, self.exponent + other.exponent)

    def __neg__(self) -> "UnitClass":
        return UnitClass(self.field, -self.exponent)

    def __sub__(self, other: "UnitClass") -> "UnitClass":
        return self + (-other)

    def scale(self, k: int) -> "UnitClass":
        return UnitClass(self.field, self.exponent * k)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0


def frobenius_invariant(F: FqField, u: int, rho: int | None = None) -> int:
    """Exponent i with rho^i = u^((|F|-1)/q), i.e. the Z/q Frobenius coordinate.

    rho defaults to the field's own pinned root; pass an embedded rho to keep
    coordinates coherent across the residue fields of a curve.
    """
    if u == 0:
        raise ZeroDivisionError("frobenius invariant of zero")
    if not F.has_mu_q:
        return 0
    t = F.pow(u, (F.size - 1) // F.q)
    r = F.rho if rho is None else rho
    acc = 1
    for i in range(F.q):
        if acc == t:
            return i
        acc = F.mul(acc, r)
    raise ArithmeticError("rho is not a primitive q-th root of unity here")


def unit_class(F: FqField, u: int) -> UnitClass:
    """Class of a nonzero u in F*/(F*)^q (discrete log mod q wrt the generator)."""
    return UnitClass(F, frobenius_invariant(F, u))


def is_qth_power_unit(F: FqField, u: int) -> bool:
    return frobenius_invariant(F, u) == 0


def extend_field(F: FqField, e: int) -> FqField:
    """Degree-e extension; use F.embed / F.norm_to for the maps."""
    return F.extension(e)


def mu_q_closure(F: FqField) -> FqField:
    """Smallest tower extension containing the q-th roots of unity."""
    if F.has_mu_q:
        return F
    o = 1
    acc = F.size % F.q
    while acc != 1:
        acc = (acc * (F.size % F.q)) % F.q
        o += 1
    return F.extension(o)
