"""q-torsion Brauer classes of a rational residue curve as residue vectors,
cyclic-algebra residues, and splitting behavior under degree-q Kummer covers.

A class of F(t) is stored as its finitely supported map Place -> Z/q of
Frobenius-coordinate residues; exactness of the residue sequence makes the
zero-sum a hard invariant and support emptiness the zero test.  Coordinates
are taken against the constant field's rho embedded into each residue field,
which is exactly what makes the sum over all places vanish (Weil
reciprocity pushed through the norm maps).

The constant field must contain the q-th roots of unity; everything the
splitting driver does on residue curves happens after that reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .ffield import (
    FunctionField,
    Place,
    RationalFunction,
    normalized_residue,
    residue_coordinate,
    support_places,
    tame_residue_element,
    valuation,
)
from . import ffield as _ff


class CurveDataError(ValueError):
    pass


def _require_mu_q(field: FunctionField):
    if not field.has_mu_q:
        raise CurveDataError(
            f"constant field {field.constants!r} lacks q-th roots of unity; "
            "residue-vector arithmetic needs q | ell^d - 1"
        )


class ResidueVector:
    """Finitely supported Place -> Z/q map with zero sum."""

    __slots__ = ("field", "q", "_support")

    def __init__(self, field: FunctionField, support: dict[Place, int], *, check: bool = True):
        self.field = field
        self.q = field.q
        pruned = {P: r % self.q for P, r in support.items() if r % self.q}
        if check:
            total = sum(pruned.values()) % self.q
            if total:
                raise CurveDataError(f"residues sum to {total} mod {self.q}, not zero: {pruned}")
        self._support = dict(sorted(pruned.items(), key=lambda kv: kv[0].sort_key()))

    @classmethod
    def zero(cls, field: FunctionField):
        return cls(field, {})

    @property
    def support(self) -> dict[Place, int]:
        return dict(self._support)

    @property
    def is_zero(self) -> bool:
        return not self._support

    def residue_at(self, P: Place) -> int:
        return self._support.get(P, 0)

    def __add__(self, other: "ResidueVector") -> "ResidueVector":
        if other.field != self.field:
            raise CurveDataError("mixed residue curves")
        out = dict(self._support)
        for P, r in other._support.items():
            out[P] = out.get(P, 0) + r
        return ResidueVector(self.field, out)

    def __neg__(self) -> "ResidueVector":
        return ResidueVector(self.field, {P: -r for P, r in self._support.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "ResidueVector":
        return ResidueVector(self.field, {P: k * r for P, r in self._support.items()})

    def __eq__(self, other):
        return (
            isinstance(other, ResidueVector)
            and self.field == other.field
            and self._support == other._support
        )

    def __repr__(self):
        if self.is_zero:
            return "ResidueVector(0)"
        inner = ", ".join(f"{P!r}: {r}" for P, r in self._support.items())
        return "ResidueVector({" + inner + "})"


def is_zero(beta: ResidueVector) -> bool:
    return beta.is_zero


@dataclass(frozen=True)
class CyclicCoverData:
    """Degree-q Kummer cover L = F(t)(c^{1/q}) of the residue curve, with the
    generator convention sigma(c^{1/q}) / c^{1/q} = rho."""

    field: FunctionField
    c: RationalFunction

    def __post_init__(self):
        if self.c.is_zero:
            raise CurveDataError("cover element must be nonzero")

    @property
    def is_trivial(self) -> bool:
        """True when c is a global q-th power: the cover splits everywhere."""
        return _ff.is_qth_power(self.c)


class CoverBehavior(Enum):
    RAMIFIED = "ramified"
    INERT = "inert"
    SPLIT = "split"


def cover_behavior(cover: CyclicCoverData, P: Place) -> tuple[CoverBehavior, int]:
    """Local behavior of the cover at P, with the Z/q Frobenius coordinate of
    the residue character (0 unless inert)."""
    v = valuation(P, cover.c)
    if v % cover.field.q:
        return CoverBehavior.RAMIFIED, 0
    gamma = residue_coordinate(P, normalized_residue(P, cover.c))
    if gamma == 0:
        return CoverBehavior.SPLIT, 0
    return CoverBehavior.INERT, gamma


def symbol_residues(a: RationalFunction, b: RationalFunction) -> ResidueVector:
    """Residue vector of the degree-q symbol class (a, b) over F(t)."""
    field = a.field
    _require_mu_q(field)
    entries = {}
    for P in support_places(a, b):
        coord = residue_coordinate(P, tame_residue_element(P, a, b))
        if coord:
            entries[P] = coord
    return ResidueVector(field, entries)


def cyclic_residues(cover: CyclicCoverData, b: RationalFunction) -> ResidueVector:
    """Residues of the cyclic algebra built from the cover and slot b; with
    mu_q in the constants this is the symbol (c, b)."""
    return symbol_residues(cover.c, b)


def split_by_cover(beta: ResidueVector, cover: CyclicCoverData) -> bool:
    """True iff the pullback of beta to the cover field has all residues zero.

    Placewise over a finite residue field: a ramified or inert place kills
    the local residue (multiplication by e = q, respectively restriction of
    an order-q character to the index-q subgroup); a split place preserves it
    at each of the q places above.
    """
    if beta.field != cover.field:
        raise CurveDataError("cover and class live over different curves")
    for P in beta.support:
        behavior, _ = cover_behavior(cover, P)
        if behavior is CoverBehavior.SPLIT:
            return False
    return True


def residual_transform(
    beta: ResidueVector, cover: CyclicCoverData, u: RationalFunction, t_exp: int
) -> ResidueVector:
    """Residual-class change under replacing the Kummer element m by u*m when
    the base valuation of m is s with s*t_exp = 1 mod q:
    beta' = beta + residues of the cyclic algebra with slot u^(-t_exp)."""
    if u.is_zero:
        raise CurveDataError("transform unit must be nonzero")
    return beta + cyclic_residues(cover, u ** (-t_exp))
