"""Exact arithmetic in QG / ZG over an explicit multiplication table.

Partial augmentations, the rational-conjugacy criterion on concrete units,
and a few helpers used by the property suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cyclotomic import Cyclotomic, conjugate, divisors
from .group_data import (
    CharacterTable,
    Perm,
    classes_from_permutations,
    enumerate_group,
    match_classes,
    perm_inv,
    perm_mul,
    perm_order,
    permutation_character,
)

__all__ = [
    "GroupTable",
    "GroupRingElement",
    "TableMismatch",
    "NotNormalized",
    "NotIdempotent",
    "TrivialIdempotent",
    "MRSWResult",
    "multiply",
    "augmentation",
    "partial_augmentations",
    "congruent_mod_commutators",
    "element_order",
    "double_action_character",
    "mrsw_check",
    "power_partial_augmentations",
    "idempotent_identity_coefficient",
    "subgroup_idempotent",
    "bicyclic_unit",
]


class TableMismatch(ValueError):
    pass


class NotNormalized(ValueError):
    pass


class NotIdempotent(ValueError):
    pass


class TrivialIdempotent(NotIdempotent):
    pass


@dataclass(frozen=True, eq=False)
class GroupTable:
    """Finite group as a Cayley table on indices; identity at index 0."""

    elements: tuple[Perm, ...]
    mult: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    class_of: tuple[int, ...]
    element_order: tuple[int, ...]
    centralizer_orders: tuple[int, ...]
    name: str = "G"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def num_classes(self) -> int:
        return len(self.centralizer_orders)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.element_order)

    def index(self, perm: Perm) -> int:
        return self.elements.index(perm)

    def class_members(self, c: int) -> list[int]:
        return [g for g, k in enumerate(self.class_of) if k == c]

    @classmethod
    def from_generators(cls, generators, name: str = "G") -> GroupTable:
        """Build the table; classes numbered as classes_from_permutations orders them."""
        computed = classes_from_permutations(generators)
        return cls._build(generators, computed, list(range(len(computed))), name)

    @classmethod
    def from_character_table(cls, table: CharacterTable) -> GroupTable:
        """Build from the table's permutation generators, numbering classes as the table does.

        Where class data only matches up to relabeling, the first relabeling
        whose permutation character decomposes into the table's irreducibles
        with non-negative integer multiplicities is used.
        """
        if not table.permutation_generators:
            raise ValueError(f"{table.group_name}: no permutation generators")
        computed = classes_from_permutations(table.permutation_generators)
        mappings = match_classes(computed, table)
        pichar = permutation_character(computed)
        for mp in mappings:
            if _decomposes(table, {mp[i]: pichar[i] for i in mp}):
                relabel = [mp[i] for i in range(len(computed))]
                return cls._build(table.permutation_generators, computed, relabel, table.group_name)
        raise ValueError(f"{table.group_name}: class data does not match the permutation group")

    @classmethod
    def _build(cls, generators, computed, relabel, name) -> GroupTable:
        elements = enumerate_group(generators)
        pos = {x: i for i, x in enumerate(elements)}
        mult = tuple(tuple(pos[perm_mul(x, y)] for y in elements) for x in elements)
        inverse = tuple(pos[perm_inv(x)] for x in elements)
        class_of = [0] * len(elements)
        cent = [0] * len(computed)
        for i, c in enumerate(computed):
            cent[relabel[i]] = c.centralizer_order
            for y in c.members:
                class_of[pos[y]] = relabel[i]
        orders = tuple(perm_order(x) for x in elements)
        return cls(tuple(elements), mult, inverse, tuple(class_of), orders, tuple(cent), name)


def _decomposes(table: CharacterTable, pichar: Mapping[int, int]) -> bool:
    G = table.group_order
    for ch in table.characters:
        s = Cyclotomic.zero()
        for j, c in enumerate(table.classes):
            s = s + conjugate(ch.values[j]) * (Fraction(G, c.centralizer_order) * pichar[j])
        s = s / G
        if not s.is_integral_rational() or s.to_rational() < 0:
            return False
    return True


@dataclass(frozen=True, eq=False)
class GroupRingElement:
    table: GroupTable
    coeffs: tuple[Fraction, ...]

    @classmethod
    def from_dict(cls, table: GroupTable, terms: Mapping[int, int | Fraction]) -> GroupRingElement:
        c = [Fraction(0)] * table.order
        for g, v in terms.items():
            c[g] += Fraction(v)
        return cls(table, tuple(c))

    @classmethod
    def basis(cls, table: GroupTable, g: int) -> GroupRingElement:
        return cls.from_dict(table, {g: 1})

    @classmethod
    def one(cls, table: GroupTable) -> GroupRingElement:
        return cls.basis(table, 0)

    @classmethod
    def zero(cls, table: GroupTable) -> GroupRingElement:
        return cls.from_dict(table, {})

    @property
    def support(self) -> list[int]:
        return [g for g, c in enumerate(self.coeffs) if c]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def identity_coefficient(self) -> Fraction:
        return self.coeffs[0]

    def _check(self, other: GroupRingElement) -> None:
        if self.table is not other.table:
            raise TableMismatch("elements live in different group rings")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.table is other.table and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        self._check(other)
        return GroupRingElement(self.table, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        self._check(other)
        return GroupRingElement(self.table, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement(self.table, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GroupRingElement(self.table, tuple(a * other for a in self.coeffs))
        if isinstance(other, GroupRingElement):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int) -> GroupRingElement:
        out = GroupRingElement.one(self.table)
        base = self
        while k:
            if k & 1:
                out = multiply(out, base)
            base = multiply(base, base)
            k >>= 1
        return out

    def __repr__(self) -> str:
        terms = [f"{c}*g{g}" for g, c in enumerate(self.coeffs) if c]
        return "GroupRingElement(" + (" + ".join(terms) or "0") + ")"


def multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    a._check(b)
    mult = a.table.mult
    out = [Fraction(0)] * a.table.order
    bs = [(h, y) for h, y in enumerate(b.coeffs) if y]
    for g, x in enumerate(a.coeffs):
        if x:
            row = mult[g]
            for h, y in bs:
                out[row[h]] += x * y
    return GroupRingElement(a.table, tuple(out))


def augmentation(a: GroupRingElement) -> Fraction:
    return sum(a.coeffs, Fraction(0))


def partial_augmentations(a: GroupRingElement) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * a.table.num_classes
    for g, c in enumerate(a.coeffs):
        if c:
            out[a.table.class_of[g]] += c
    return tuple(out)


def congruent_mod_commutators(a: GroupRingElement, b: GroupRingElement) -> bool:
    """a = b modulo the additive span of ring commutators [RG, RG]."""
    a._check(b)
    return not any(partial_augmentations(a - b))


def element_order(u: GroupRingElement, cap: int | None = None) -> int | None:
    """Least m <= cap with u^m = 1, or None when u is not torsion within the cap.

    The default cap is the exponent of G, which bounds the order of any
    torsion normalized unit of ZG.
    """
    if cap is None:
        cap = u.table.exponent
    one = GroupRingElement.one(u.table)
    cur = u
    for m in range(1, cap + 1):
        if cur == one:
            return m
        cur = multiply(cur, u)
    return None


def double_action_character(u: GroupRingElement, j: int, c: int) -> Fraction:
    """Character of the (<u> x G)-module ZG at (u^j, g), g in class c."""
    return u.table.centralizer_orders[c] * partial_augmentations(u**j)[c]


def power_partial_augmentations(u: GroupRingElement, n: int) -> dict[int, tuple[Fraction, ...]]:
    """Partial augmentations of u^d for every divisor d of n."""
    return {d: partial_augmentations(u**d) for d in divisors(n)}


@dataclass(frozen=True)
class MRSWResult:
    conjugate: bool
    order: int
    targets: dict[int, int]  # divisor d -> class carrying u^d
    witness: tuple[int, int, Fraction] | None = None  # (d, class, value)


def mrsw_check(u: GroupRingElement, order: int | None = None) -> MRSWResult:
    """Decide rational conjugacy of a torsion normalized unit to a group element.

    u is rationally conjugate to an element of G exactly when every partial
    augmentation of every u^d (d dividing the order) is non-negative.
    """
    if augmentation(u) != 1:
        raise NotNormalized(f"augmentation {augmentation(u)} != 1")
    if order is None:
        order = element_order(u)
        if order is None:
            raise ValueError("u is not torsion within the exponent cap")
    targets = {}
    for d, pa in power_partial_augmentations(u, order).items():
        for c, v in enumerate(pa):
            if v < 0:
                return MRSWResult(False, order, targets, (d, c, v))
        nonzero = [c for c, v in enumerate(pa) if v]
        if len(nonzero) != 1:
            # non-negative integers summing to 1 have a single support class
            raise ValueError(f"u^{d} has non-integral partial augmentations {pa}")
        targets[d] = nonzero[0]
    return MRSWResult(True, order, targets)


def idempotent_identity_coefficient(e: GroupRingElement) -> Fraction:
    """Coefficient of 1 in a non-trivial idempotent e; it lies in (0, 1)."""
    if multiply(e, e) != e:
        raise NotIdempotent("e*e != e")
    if e == GroupRingElement.zero(e.table) or e == GroupRingElement.one(e.table):
        raise TrivialIdempotent("e is 0 or 1")
    return e.coeffs[0]


def subgroup_idempotent(table: GroupTable, members: Sequence[int]) -> GroupRingElement:
    n = len(members)
    return GroupRingElement.from_dict(table, {h: Fraction(1, n) for h in members})


def cyclic_sum(table: GroupTable, h: int) -> GroupRingElement:
    terms: dict[int, int] = {}
    x = 0
    for _ in range(table.element_order[h]):
        terms[x] = terms.get(x, 0) + 1
        x = table.mult[x][h]
    return GroupRingElement.from_dict(table, terms)


def bicyclic_unit(table: GroupTable, g: int, h: int) -> tuple[GroupRingElement, GroupRingElement]:
    """The bicyclic unit 1 + (1 - h) g h_hat and its inverse."""
    one = GroupRingElement.one(table)
    nil = multiply(multiply(one - GroupRingElement.basis(table, h), GroupRingElement.basis(table, g)), cyclic_sum(table, h))
    return one + nil, one - nil
