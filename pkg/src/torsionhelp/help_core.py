"""HeLP constraint systems for torsion units of V(ZG).

For each candidate order n (a divisor of the exponent) the unknowns are the
partial augmentations eps_C(u^d) for d | n. Proper powers u^d, d > 1, are
taken from the already-solved orders n/d; only the vector of u itself is
enumerated here. For an ordinary character chi the multiplicity of
zeta_n^i as an eigenvalue of u is

    mu_i = 1/n * sum_{d | n} sum_C eps_C(u^d) * Tr_{Q(z_{n/d})/Q}(chi(C) z_{n/d}^-i)

and must be a non-negative integer. Traces of algebraic integers are
rational integers, so n * mu_i is an integer affine form in the unknowns.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _linalg
from .cyclotomic import as_conductor, divisors, root_power, trace_to_rationals, NotInSubfield
from .group_data import (
    CharacterTable,
    exponent,
    orders_prime_graph,
    power_class,
    prime_factors,
    prime_graph,
    spectrum,
)

__all__ = [
    "PAVector",
    "PABranch",
    "MultiplicityForm",
    "SolutionSet",
    "Status",
    "Verdicts",
    "UnboundedSystem",
    "SubfieldError",
    "admissible_classes",
    "build_multiplicity_forms",
    "cohn_livingstone_filter",
    "solve_order",
    "solve_all",
    "verdicts",
    "trivial_branch",
    "power_vector",
    "check_branch",
]


class UnboundedSystem(RuntimeError):
    pass


class SubfieldError(ValueError):
    pass


class Status(str, enum.Enum):
    NO_UNITS = "NoUnits"
    ALL_TRIVIAL = "AllRationallyTrivial"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class PAVector:
    """Partial augmentations of a unit of the given order, on its admissible classes."""

    effective_order: int
    entries: tuple[tuple[int, int], ...]  # (class index, value), sorted by class

    @classmethod
    def from_dict(cls, m: int, entries: Mapping[int, int]) -> PAVector:
        return cls(m, tuple(sorted((int(c), int(v)) for c, v in entries.items())))

    @classmethod
    def identity(cls) -> PAVector:
        return cls(1, ((0, 1),))

    def get(self, c: int) -> int:
        for k, v in self.entries:
            if k == c:
                return v
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.entries)

    def is_trivial(self) -> bool:
        return all(v >= 0 for _, v in self.entries)


@dataclass(frozen=True)
class PABranch:
    """Partial augmentations of every u^d, d | order."""

    order: int
    assignments: tuple[tuple[int, PAVector], ...]  # sorted by divisor

    @classmethod
    def from_dict(cls, n: int, vectors: Mapping[int, PAVector]) -> PABranch:
        return cls(n, tuple(sorted(vectors.items())))

    def at(self, d: int) -> PAVector:
        for k, v in self.assignments:
            if k == d:
                return v
        raise KeyError(d)

    def as_dict(self) -> dict[int, PAVector]:
        return dict(self.assignments)

    @property
    def top(self) -> PAVector:
        return self.at(1)

    def is_trivial(self) -> bool:
        return all(v.is_trivial() for _, v in self.assignments)

    def sort_key(self) -> tuple:
        return tuple(v.values for _, v in self.assignments)


@dataclass(frozen=True)
class MultiplicityForm:
    """mu(zeta_n^i, u, chi) as an affine function of the eps_C(u)."""

    character: int
    i: int
    coefficients: dict[int, Fraction] = field(hash=False)
    constant: Fraction

    def evaluate(self, eps: Mapping[int, int]) -> Fraction:
        return self.constant + sum((c * eps.get(k, 0) for k, c in self.coefficients.items()), Fraction(0))


@dataclass
class SolutionSet:
    order: int
    solutions: list[PABranch]
    status: Status
    shortcut: bool = False  # decided without enumeration (single admissible class)
    nodes: int = 0
    constraints: int = 0


@dataclass
class Verdicts:
    zp1: str
    spp: str
    pgq: str
    surviving_orders: list[int]
    critical_orders: list[int]


def admissible_classes(table: CharacterTable, m: int) -> list[int]:
    """Classes that can carry a non-zero partial augmentation of a unit of order m."""
    if m == 1:
        return [0]
    return [i for i, c in enumerate(table.classes) if i != 0 and m % c.element_order == 0]


# --- traces ---------------------------------------------------------------


class _TraceCache:
    """Tr_{Q(z_m)/Q}(chi(C) * z_m^-i) for i = 0..m-1, as integers."""

    def __init__(self, table: CharacterTable):
        self.table = table
        self._cache: dict[tuple[int, int, int], tuple[int, ...]] = {}

    def get(self, chi: int, m: int, c: int) -> tuple[int, ...]:
        key = (chi, m, c)
        if key not in self._cache:
            val = self.table.characters[chi].values[c]
            try:
                val = as_conductor(val, m)
            except NotInSubfield as exc:
                raise SubfieldError(
                    f"{self.table.characters[chi].name}({self.table.classes[c].name}) not in Q(zeta_{m})"
                ) from exc
            out = []
            for i in range(m):
                t = trace_to_rationals(val * root_power(m, -i))
                if t.denominator != 1:
                    raise SubfieldError(f"non-integral trace {t}; character values must be algebraic integers")
                out.append(int(t))
            self._cache[key] = tuple(out)
        return self._cache[key]


_caches: dict[int, _TraceCache] = {}


def _traces(table: CharacterTable) -> _TraceCache:
    tc = _caches.get(id(table))
    if tc is None or tc.table is not table:
        tc = _TraceCache(table)
        _caches[id(table)] = tc
    return tc


def _powers_of(powers) -> dict[int, PAVector]:
    if isinstance(powers, PABranch):
        return {d: v for d, v in powers.assignments if d != 1}
    return {d: v for d, v in dict(powers).items() if d != 1}


def _integer_rows(table: CharacterTable, n: int, powers: Mapping[int, PAVector], characters: Sequence[int]):
    """Rows (chi, i, coeffs over admissible classes, constant), all scaled by n."""
    tc = _traces(table)
    adm = admissible_classes(table, n)
    rows = []
    for chi in characters:
        top = [tc.get(chi, n, c) for c in adm]
        for i in range(n):
            const = 0
            for d in divisors(n)[1:]:
                m = n // d
                vec = powers[d] if d != n else PAVector.identity()
                for c, e in vec.entries:
                    if e:
                        const += e * tc.get(chi, m, c)[i % m]
            rows.append((chi, i, tuple(t[i] for t in top), const))
    return adm, rows


def build_multiplicity_forms(
    table: CharacterTable, chi: int, n: int, powers: PABranch | Mapping[int, PAVector]
) -> list[MultiplicityForm]:
    """The n forms mu(zeta_n^i, u, chi), i = 0..n-1, with proper powers fixed."""
    adm, rows = _integer_rows(table, n, _powers_of(powers), [chi])
    return [
        MultiplicityForm(chi, i, {c: Fraction(a, n) for c, a in zip(adm, coeffs)}, Fraction(const, n))
        for _, i, coeffs, const in rows
    ]


# --- Cohn-Livingstone -----------------------------------------------------


def _prime_power(n: int) -> tuple[int, int] | None:
    ps = prime_factors(n)
    if len(ps) != 1:
        return None
    p = ps[0]
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    return p, a


def cohn_livingstone_filter(table: CharacterTable, n: int, v: PAVector | Mapping[int, int]) -> bool:
    """Congruences on sums of partial augmentations over G[p^b], the elements of order p^b."""
    if n == 1:
        return True
    eps = v.as_dict() if isinstance(v, PAVector) else dict(v)
    orders = table.orders

    def level_sum(q: int) -> int:
        return sum(e for c, e in eps.items() if orders[c] == q)

    pp = _prime_power(n)
    if pp is not None:
        p, a = pp
        return all(level_sum(p**b) % p == (1 if b == a else 0) for b in range(a + 1))
    for p in prime_factors(exponent(table)):
        q = 1
        while q <= max(orders):
            if level_sum(q) % p:
                return False
            q *= p
    return True


# --- enumeration ----------------------------------------------------------


def _floordiv(a: int, b: int) -> int:
    return a // b


def _ceildiv(a: int, b: int) -> int:
    return -((-a) // b)


def _box_from_basis(rows: list[tuple[tuple[int, ...], int, int]], k: int):
    """Finite bounds for every variable from k independent two-sided rows, or None."""
    order = sorted(range(len(rows)), key=lambda r: (rows[r][2] - rows[r][1]) / max(1, sum(abs(x) for x in rows[r][0])))
    chosen: list[int] = []
    basis_rows: list[tuple[int, ...]] = []
    for r in order:
        cand = basis_rows + [rows[r][0]]
        if _linalg.rank(cand) == len(cand):
            basis_rows = cand
            chosen.append(r)
            if len(chosen) == k:
                break
    if len(chosen) < k:
        return None
    inv = _linalg.inverse(basis_rows)
    box = []
    for j in range(k):
        lo = hi = Fraction(0)
        for t, r in enumerate(chosen):
            w = inv[j][t]
            a, b = w * rows[r][1], w * rows[r][2]
            lo += min(a, b)
            hi += max(a, b)
        box.append([math.ceil(lo), math.floor(hi)])
    return box


def _propagate(rows, box) -> bool:
    """Tighten box in place; False if some interval empties."""
    changed = True
    while changed:
        changed = False
        for coeffs, lo, hi in rows:
            mins = []
            maxs = []
            for a, (l, u) in zip(coeffs, box):
                if a >= 0:
                    mins.append(a * l)
                    maxs.append(a * u)
                else:
                    mins.append(a * u)
                    maxs.append(a * l)
            smin, smax = sum(mins), sum(maxs)
            if smin > hi or smax < lo:
                return False
            if smin >= lo and smax <= hi:
                continue
            for j, a in enumerate(coeffs):
                if a == 0:
                    continue
                rmin, rmax = smin - mins[j], smax - maxs[j]
                top, bot = hi - rmin, lo - rmax  # bot <= a * x_j <= top
                if a > 0:
                    nl, nu = _ceildiv(bot, a), _floordiv(top, a)
                else:
                    nl, nu = _ceildiv(top, a), _floordiv(bot, a)
                l, u = box[j]
                if nl > l or nu < u:
                    l, u = max(l, nl), min(u, nu)
                    if l > u:
                        return False
                    box[j] = [l, u]
                    changed = True
                    smin, smax = None, None
                    break
            if smin is None:
                break
    return True


def _enumerate_top(table, n, adm, rows, counter) -> list[dict[int, int]]:
    """All integer eps on adm summing to 1 with every row in range and divisible by n."""
    k = len(adm)
    full_rows = []
    for chi, _, coeffs, const in rows:
        deg = int(table.characters[chi].degree)
        full_rows.append((coeffs, const, deg))

    def full_ok(x: Sequence[int]) -> bool:
        for coeffs, const, deg in full_rows:
            val = sum(a * e for a, e in zip(coeffs, x)) + const
            if val < 0 or val > n * deg or val % n:
                return False
        return cohn_livingstone_filter(table, n, dict(zip(adm, x)))

    if k == 1:
        return [{adm[0]: 1}] if full_ok((1,)) else []

    # eliminate the last variable with the augmentation equation
    red = []
    seen = set()
    for coeffs, const, deg in full_rows:
        a_last = coeffs[-1]
        rc = tuple(a - a_last for a in coeffs[:-1])
        lo, hi = -const - a_last, n * deg - const - a_last
        key = (rc, lo, hi)
        if key in seen:
            continue
        seen.add(key)
        if not any(rc):
            if lo > 0 or hi < 0:
                return []
            continue
        red.append((rc, lo, hi))
    box = _box_from_basis(red, k - 1)
    if box is None:
        raise UnboundedSystem(f"order {n}: partial augmentations are not bounded by the chosen characters")
    # the eliminated variable is 1 - sum(others); bound it through the same rows
    all_rows = red
    if not _propagate(all_rows, box):
        return []

    found: list[dict[int, int]] = []

    def dfs(box) -> None:
        counter[0] += 1
        free = [j for j, (l, u) in enumerate(box) if l < u]
        if not free:
            x = [l for l, _ in box]
            x.append(1 - sum(x))
            if full_ok(x):
                found.append(dict(zip(adm, x)))
            return
        j = min(free, key=lambda t: box[t][1] - box[t][0])
        l, u = box[j]
        for val in range(l, u + 1):
            nb = [list(b) for b in box]
            nb[j] = [val, val]
            if _propagate(all_rows, nb):
                dfs(nb)

    dfs(box)
    return found


def _compatible_powers(n: int, proper: Mapping[int, SolutionSet]) -> Iterable[dict[int, PAVector]]:
    primes = prime_factors(n)
    choices = [proper[n // p].solutions for p in primes]
    for combo in itertools.product(*choices):
        merged: dict[int, PAVector] = {}
        ok = True
        for p, br in zip(primes, combo):
            for e, vec in br.assignments:
                d = p * e
                if merged.get(d, vec) != vec:
                    ok = False
                    break
                merged[d] = vec
            if not ok:
                break
        if ok:
            yield merged


def _status(solutions: list[PABranch]) -> Status:
    if not solutions:
        return Status.NO_UNITS
    if all(b.is_trivial() for b in solutions):
        return Status.ALL_TRIVIAL
    return Status.CRITICAL


def solve_order(
    table: CharacterTable,
    n: int,
    proper_solutions: Mapping[int, SolutionSet],
    characters: Sequence[int] | None = None,
) -> SolutionSet:
    """Enumerate every HeLP-admissible partial augmentation branch for order n."""
    if n == 1:
        br = PABranch.from_dict(1, {1: PAVector.identity()})
        return SolutionSet(1, [br], Status.ALL_TRIVIAL, shortcut=True)
    if characters is None:
        characters = list(range(len(table.characters)))
    for p in prime_factors(n):
        if proper_solutions[n // p].status == Status.NO_UNITS:
            return SolutionSet(n, [], Status.NO_UNITS)
    adm = admissible_classes(table, n)
    if not adm:
        return SolutionSet(n, [], Status.NO_UNITS, shortcut=True)
    counter = [0]
    branches: dict[tuple, PABranch] = {}
    nrows = 0
    for powers in _compatible_powers(n, proper_solutions):
        adm, rows = _integer_rows(table, n, powers, characters)
        nrows = max(nrows, len(set((r[2], r[3]) for r in rows)))
        for eps in _enumerate_top(table, n, adm, rows, counter):
            vectors = dict(powers)
            vectors[1] = PAVector.from_dict(n, eps)
            br = PABranch.from_dict(n, vectors)
            branches[br.sort_key()] = br
    sols = [branches[k] for k in sorted(branches)]
    return SolutionSet(
        n, sols, _status(sols), shortcut=(len(adm) == 1), nodes=counter[0], constraints=nrows
    )


def solve_all(table: CharacterTable, characters: Sequence[int] | None = None) -> dict[int, SolutionSet]:
    results: dict[int, SolutionSet] = {}
    for n in divisors(exponent(table)):
        results[n] = solve_order(table, n, results, characters)
    return results


def verdicts(results: Mapping[int, SolutionSet], table: CharacterTable) -> Verdicts:
    surviving = sorted(n for n, s in results.items() if s.solutions)
    critical = sorted(n for n, s in results.items() if s.status == Status.CRITICAL)
    zp1 = "Positive" if not critical else "Inconclusive"
    spp = "Positive" if set(surviving) == spectrum(table) else "Inconclusive"
    pgq = "Positive" if orders_prime_graph(surviving) == prime_graph(table) else "Inconclusive"
    return Verdicts(zp1, spp, pgq, surviving, critical)


# --- helpers on concrete branches ---------------------------------------


def power_vector(table: CharacterTable, v: PAVector, k: int) -> PAVector:
    """Partial augmentations of u^k from those of u, for k coprime to |u|.

    eps_C(u^k) = sum of eps_D(u) over classes D with D^k = C.
    """
    m = v.effective_order
    if math.gcd(k, m) != 1:
        raise ValueError(f"{k} is not coprime to {m}")
    out: dict[int, int] = {}
    for c, e in v.entries:
        t = power_class(table, c, k)
        out[t] = out.get(t, 0) + e
    return PAVector.from_dict(m, out)


def trivial_branch(table: CharacterTable, c: int) -> PABranch:
    """Branch of the group element class c: a single 1 at the class of g^d."""
    n = table.classes[c].element_order
    return PABranch.from_dict(
        n,
        {
            d: PAVector.from_dict(n // d, {k: int(k == power_class(table, c, d)) for k in admissible_classes(table, n // d)})
            for d in divisors(n)
        },
    )


def branch_from_partial_augmentations(table: CharacterTable, n: int, pas: Mapping[int, Sequence]) -> PABranch:
    """Turn measured partial augmentations (d -> vector over all classes) into a PABranch."""
    vectors = {}
    for d in divisors(n):
        m = n // d
        adm = admissible_classes(table, m)
        vec = pas[d]
        for c, e in enumerate(vec):
            if e and c not in adm:
                raise ValueError(f"u^{d} has eps={e} on inadmissible class {table.classes[c].name}")
        vectors[d] = PAVector.from_dict(m, {c: int(vec[c]) for c in adm})
    return PABranch.from_dict(n, vectors)


def check_branch(table: CharacterTable, branch: PABranch, characters: Sequence[int] | None = None) -> list[str]:
    """Every constraint the solver imposes on this branch; returns the failures."""
    n = branch.order
    if characters is None:
        characters = list(range(len(table.characters)))
    out = []
    for d, vec in branch.assignments:
        m = n // d
        if vec.effective_order != m:
            out.append(f"d={d}: effective order {vec.effective_order} != {m}")
        if sum(vec.values) != 1:
            out.append(f"d={d}: partial augmentations sum to {sum(vec.values)}")
        adm = admissible_classes(table, m)
        if any(c not in adm for c, e in vec.entries if e):
            out.append(f"d={d}: support outside admissible classes")
        if not cohn_livingstone_filter(table, m, vec):
            out.append(f"d={d}: Cohn-Livingstone congruence fails")
    if out:
        return out
    for d, vec in branch.assignments:
        m = n // d
        if m == 1:
            continue
        sub = PABranch.from_dict(m, {e: branch.at(d * e) for e in divisors(m)})
        for chi in characters:
            for f in build_multiplicity_forms(table, chi, m, sub):
                mu = f.evaluate(vec.as_dict())
                if mu.denominator != 1 or mu < 0:
                    out.append(
                        f"order {m} (u^{d}), {table.characters[chi].name}, i={f.i}: multiplicity {mu}"
                    )
    return out
