"""Conjugacy-class data and ordinary character tables.

Tables are input data (JSON, one group per file). Class data can be
recomputed independently from permutation generators and matched against
a loaded table.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .cyclotomic import (
    Cyclotomic,
    NotInSubfield,
    as_conductor,
    conjugate,
    galois,
    parse_cyclotomic,
    to_literal,
)

SHIPPED_GROUPS = ("S3", "S4", "S5", "A5", "C6")


class ParseError(ValueError):
    pass


class SchemaError(ValueError):
    pass


class MissingPowerMap(KeyError):
    pass


class GroupTooLarge(ValueError):
    pass


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def factorize(n: int) -> list[int]:
    """Prime factors with multiplicity, ascending."""
    out = []
    for p in prime_factors(n):
        while n % p == 0:
            out.append(p)
            n //= p
    return out


@dataclass(frozen=True)
class ConjClass:
    name: str
    element_order: int
    centralizer_order: int
    power_maps: dict[int, int] = field(default_factory=dict, hash=False, compare=True)


@dataclass(frozen=True)
class Character:
    name: str
    values: tuple[Cyclotomic, ...]

    @property
    def degree(self) -> Fraction:
        return self.values[0].to_rational()


@dataclass(frozen=True)
class CharacterTable:
    group_name: str
    group_order: int
    classes: tuple[ConjClass, ...]
    characters: tuple[Character, ...]
    permutation_generators: tuple | None = None

    def class_size(self, c: int) -> Fraction:
        return Fraction(self.group_order, self.classes[c].centralizer_order)

    def class_index(self, name: str) -> int:
        for i, c in enumerate(self.classes):
            if c.name == name:
                return i
        raise KeyError(name)

    def character_index(self, name: str) -> int:
        for i, ch in enumerate(self.characters):
            if ch.name == name:
                return i
        raise KeyError(name)

    @property
    def orders(self) -> list[int]:
        return [c.element_order for c in self.classes]


# --- loading ------------------------------------------------------------


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    return obj[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SchemaError(f"{where}: expected a positive integer, got {value!r}")
    return value


def table_from_dict(doc: dict) -> CharacterTable:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    name = str(_require(doc, "name", "group"))
    order = _as_int(_require(doc, "order", name), f"{name}.order")
    raw_classes = _require(doc, "classes", name)
    if not isinstance(raw_classes, list) or not raw_classes:
        raise SchemaError(f"{name}: classes must be a non-empty list")
    names = []
    for i, rc in enumerate(raw_classes):
        names.append(str(_require(rc, "name", f"{name}.classes[{i}]")))
    if len(set(names)) != len(names):
        raise SchemaError(f"{name}: duplicate class names")
    index = {n: i for i, n in enumerate(names)}

    classes = []
    for i, rc in enumerate(raw_classes):
        where = f"{name}.classes[{names[i]}]"
        eo = _as_int(_require(rc, "element_order", where), where + ".element_order")
        co = _as_int(_require(rc, "centralizer_order", where), where + ".centralizer_order")
        pm_raw = rc.get("power_maps", {})
        if not isinstance(pm_raw, dict):
            raise SchemaError(f"{where}: power_maps must be an object")
        pm = {}
        for p, target in pm_raw.items():
            try:
                p_int = int(p)
            except ValueError as exc:
                raise SchemaError(f"{where}: bad prime {p!r}") from exc
            if target not in index:
                raise SchemaError(f"{where}: power map {p} -> unknown class {target!r}")
            pm[p_int] = index[target]
        classes.append(ConjClass(names[i], eo, co, pm))

    raw_chars = _require(doc, "characters", name)
    if not isinstance(raw_chars, list):
        raise SchemaError(f"{name}: characters must be a list")
    characters = []
    for j, rch in enumerate(raw_chars):
        cname = str(_require(rch, "name", f"{name}.characters[{j}]"))
        vals = _require(rch, "values", f"{name}.characters[{cname}]")
        if not isinstance(vals, list) or len(vals) != len(classes):
            raise SchemaError(f"{name}.characters[{cname}]: need {len(classes)} values")
        try:
            parsed = tuple(parse_cyclotomic(v) for v in vals)
        except ValueError as exc:
            raise ParseError(f"{name}.characters[{cname}]: {exc}") from exc
        characters.append(Character(cname, parsed))

    gens = doc.get("permutation_generators")
    if gens is not None:
        gens = tuple(tuple(tuple(int(x) for x in cyc) for cyc in g) for g in gens)
    return CharacterTable(name, order, tuple(classes), tuple(characters), gens)


def load_table(source: str) -> CharacterTable:
    """Parse a group data document (JSON text). Does not validate the maths."""
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    return table_from_dict(doc)


def load_table_file(path: str | Path) -> CharacterTable:
    return load_table(Path(path).read_text())


def load_shipped(name: str) -> CharacterTable:
    text = resources.files("torsionhelp.data").joinpath(f"{name}.json").read_text()
    return load_table(text)


def table_to_dict(table: CharacterTable) -> dict:
    doc = {
        "name": table.group_name,
        "order": table.group_order,
        "classes": [
            {
                "name": c.name,
                "element_order": c.element_order,
                "centralizer_order": c.centralizer_order,
                "power_maps": {str(p): table.classes[t].name for p, t in sorted(c.power_maps.items())},
            }
            for c in table.classes
        ],
        "characters": [
            {"name": ch.name, "values": [to_literal(v) for v in ch.values]}
            for ch in table.characters
        ],
    }
    if table.permutation_generators is not None:
        doc["permutation_generators"] = [[list(c) for c in g] for g in table.permutation_generators]
    return doc


# --- validation ---------------------------------------------------------


def validate(table: CharacterTable) -> list[str]:
    """Check the table's internal consistency exactly; returns violations."""
    out: list[str] = []
    classes = table.classes
    k = len(classes)
    G = table.group_order

    if classes[0].element_order != 1:
        out.append("identity: first class must have element order 1")
    n_id = sum(1 for c in classes if c.element_order == 1)
    if n_id != 1:
        out.append(f"identity: {n_id} classes of element order 1")

    total = Fraction(0)
    for c in classes:
        if G % c.centralizer_order:
            out.append(f"class {c.name}: centralizer order {c.centralizer_order} does not divide |G|={G}")
        if c.centralizer_order % c.element_order:
            out.append(f"class {c.name}: element order does not divide centralizer order")
        total += Fraction(G, c.centralizer_order)
    if total != G:
        out.append(f"class sizes: sum {total} != |G| = {G}")

    # power maps
    exp = exponent(table)
    for i, c in enumerate(classes):
        for p in prime_factors(exp):
            if p not in c.power_maps:
                out.append(f"class {c.name}: missing {p}-power map")
                continue
            t = classes[c.power_maps[p]]
            want = c.element_order // p if c.element_order % p == 0 else c.element_order
            if t.element_order != want:
                out.append(
                    f"class {c.name}: {p}-power map lands in {t.name} of order "
                    f"{t.element_order}, expected {want}"
                )

    if len(table.characters) != k:
        out.append(f"characters: {len(table.characters)} characters for {k} classes")

    vals: list[list[Cyclotomic]] = []
    rows_ok = True
    for ch in table.characters:
        row = []
        deg = ch.values[0]
        if not deg.is_integral_rational() or deg.to_rational() <= 0:
            out.append(f"character {ch.name}: degree {deg} is not a positive integer")
            rows_ok = False
        for c, v in zip(classes, ch.values):
            try:
                row.append(as_conductor(v, c.element_order))
            except NotInSubfield:
                out.append(f"character {ch.name}: value at {c.name} not in Q(zeta_{c.element_order})")
                row.append(v)
        vals.append(row)

    if rows_ok:
        sq = sum(ch.degree**2 for ch in table.characters)
        if sq != G:
            out.append(f"degrees: sum of squares {sq} != |G| = {G}")

    # power maps against values: chi(g^p) = sigma_p(chi(g)) when p does not divide |g|
    for i, c in enumerate(classes):
        for p, t in c.power_maps.items():
            if c.element_order % p == 0 or not 0 <= t < k:
                continue
            if any(math.gcd(p, row[i].conductor) != 1 for row in vals):
                continue  # element order already inconsistent with the values
            for ch, row in zip(table.characters, vals):
                if galois(row[i], p) != row[t]:
                    out.append(
                        f"class {c.name}: {p}-power map to {classes[t].name} disagrees "
                        f"with the values of {ch.name}"
                    )
                    break

    # second orthogonality (columns)
    for j, c in enumerate(classes):
        s = sum((row[j] * conjugate(row[j]) for row in vals), Cyclotomic.zero())
        if s != c.centralizer_order:
            out.append(f"column {c.name}: sum |chi|^2 = {s} != {c.centralizer_order}")

    # first orthogonality (rows)
    for a, ra in enumerate(vals):
        for b in range(a, len(vals)):
            rb = vals[b]
            s = Cyclotomic.zero()
            for j, c in enumerate(classes):
                s = s + ra[j] * conjugate(rb[j]) * Fraction(1, c.centralizer_order)
            want = 1 if a == b else 0
            if s != want:
                out.append(
                    f"rows {table.characters[a].name},{table.characters[b].name}: "
                    f"inner product {s} != {want}"
                )
    if not out:
        out += _symmetrization_violations(table, vals)
    return out


def _inner(table: CharacterTable, f: Sequence[Cyclotomic], g: Sequence[Cyclotomic]) -> Cyclotomic:
    s = Cyclotomic.zero()
    for j, c in enumerate(table.classes):
        s = s + f[j] * conjugate(g[j]) * Fraction(1, c.centralizer_order)
    return s


def _symmetrization_violations(table: CharacterTable, vals) -> list[str]:
    """Power maps against the character ring.

    g -> chi(g^p) is a virtual character (Adams operation), and for p = 2 the
    symmetric and antisymmetric squares (chi(g)^2 +- chi(g^2)) / 2 are
    characters. Multiplicities must be integers (non-negative for the squares).
    """
    out = []
    exp = exponent(table)
    for p in prime_factors(exp):
        targets = [c.power_maps[p] for c in table.classes]
        for ch, row in zip(table.characters, vals):
            adams = [row[t] for t in targets]
            funcs = [("Adams", adams, False)]
            if p == 2:
                sq = [v * v for v in row]
                funcs.append(("symmetric square", [(a + b) * Fraction(1, 2) for a, b in zip(sq, adams)], True))
                funcs.append(("antisymmetric square", [(a - b) * Fraction(1, 2) for a, b in zip(sq, adams)], True))
            for label, f, nonneg in funcs:
                for other, orow in zip(table.characters, vals):
                    m = _inner(table, f, orow)
                    if not m.is_integral_rational() or (nonneg and m.to_rational() < 0):
                        out.append(
                            f"{p}-power maps: {label} of {ch.name} has multiplicity {m} at {other.name}"
                        )
                        break
                else:
                    continue
                break
    return out


# --- derived class data -------------------------------------------------


def exponent(table: CharacterTable) -> int:
    return math.lcm(*table.orders)


def classes_dividing(table: CharacterTable, m: int) -> list[int]:
    return [i for i, c in enumerate(table.classes) if m % c.element_order == 0]


def power_class(table: CharacterTable, c: int, k: int) -> int:
    """Class of g^k for g in class c, composed from the prime power maps."""
    m = table.classes[c].element_order
    k %= m
    if k == 0:
        return 0
    cur = c
    for p in factorize(k):
        try:
            cur = table.classes[cur].power_maps[p]
        except KeyError:
            if math.gcd(p, table.classes[cur].element_order) != 1:
                raise MissingPowerMap(f"class {table.classes[cur].name} has no {p}-power map") from None
            cur = _galois_class(table, cur, p)
    return cur


def _galois_class(table: CharacterTable, c: int, k: int) -> int:
    """Class of g^k for k prime to |g|: the column equal to sigma_k of column c.

    Needed for primes not dividing the exponent, which carry no stored power map.
    """
    m = table.classes[c].element_order
    want = [galois(as_conductor(ch.values[c], m), k % m if m > 1 else 1) for ch in table.characters]
    for j, cl in enumerate(table.classes):
        if cl.element_order == m and all(ch.values[j] == w for ch, w in zip(table.characters, want)):
            return j
    raise MissingPowerMap(f"no class matches the {k}-th Galois conjugate of {table.classes[c].name}")


def spectrum(table: CharacterTable) -> set[int]:
    return set(table.orders)


def orders_prime_graph(orders: Iterable[int]) -> tuple[set[int], set[frozenset[int]]]:
    orders = list(orders)
    vertices = {o for o in orders if len(factorize(o)) == 1}
    edges = set()
    for o in orders:
        ps = prime_factors(o)
        for i, p in enumerate(ps):
            for q in ps[i + 1 :]:
                edges.add(frozenset((p, q)))
    return vertices, edges


def prime_graph(table: CharacterTable) -> tuple[set[int], set[frozenset[int]]]:
    return orders_prime_graph(table.orders)


# --- permutation groups -------------------------------------------------

Perm = tuple[int, ...]  # images of 0..N-1


def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> Perm:
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a - 1] = b - 1
    return tuple(img)


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Product pq acting on the right: x^(pq) = (x^p)^q."""
    return tuple(q[i] for i in p)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_order(p: Perm) -> int:
    seen = [False] * len(p)
    o = 1
    for i in range(len(p)):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            o = math.lcm(o, length)
    return o


def perm_power(p: Perm, k: int) -> Perm:
    out = tuple(range(len(p)))
    for _ in range(k % perm_order(p)):
        out = perm_mul(out, p)
    return out


def enumerate_group(
    generators: Sequence[Sequence[Sequence[int]]], *, max_degree: int = 64, max_order: int = 10000
) -> list[Perm]:
    """All elements of the group generated by cycle-notation generators.

    The identity comes first; the rest follow breadth-first order.
    """
    degree = max([x for g in generators for cyc in g for x in cyc], default=1)
    if degree > max_degree:
        raise GroupTooLarge(f"degree {degree} exceeds cap {max_degree}")
    gens = [perm_from_cycles(g, degree) for g in generators]
    ident = tuple(range(degree))
    seen = {ident: None}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = perm_mul(x, g)
            if y not in seen:
                seen[y] = None
                if len(seen) > max_order:
                    raise GroupTooLarge(f"group order exceeds cap {max_order}")
                queue.append(y)
    return list(seen)


@dataclass(frozen=True)
class ComputedClass:
    representative: Perm
    element_order: int
    size: int
    centralizer_order: int
    power_maps: dict[int, int]
    members: frozenset


def classes_from_permutations(
    generators: Sequence[Sequence[Sequence[int]]], *, max_degree: int = 64, max_order: int = 10000
) -> list[ComputedClass]:
    """Recompute class data by brute force. Classes sorted by (order, size)."""
    elements = enumerate_group(generators, max_degree=max_degree, max_order=max_order)
    order = len(elements)
    unassigned = set(elements)
    raw = []
    for x in elements:
        if x not in unassigned:
            continue
        orbit = {perm_mul(perm_mul(perm_inv(h), x), h) for h in elements}
        unassigned -= orbit
        cent = sum(1 for h in elements if perm_mul(x, h) == perm_mul(h, x))
        raw.append((x, orbit, cent))
    raw.sort(key=lambda t: (perm_order(t[0]), len(t[1])))
    lookup = {}
    for i, (_, orbit, _) in enumerate(raw):
        for y in orbit:
            lookup[y] = i
    exp = math.lcm(*(perm_order(x) for x, _, _ in raw))
    out = []
    for x, orbit, cent in raw:
        pm = {p: lookup[perm_power(x, p)] for p in prime_factors(exp)}
        out.append(ComputedClass(x, perm_order(x), len(orbit), cent, pm, frozenset(orbit)))
    assert sum(c.size for c in out) == order
    return out


def match_classes(computed: Sequence[ComputedClass], table: CharacterTable) -> list[dict[int, int]]:
    """All bijections computed-class -> table-class respecting the signature.

    A bijection must preserve (element order, class size, centralizer order)
    and commute with every prime power map. An empty list means the class
    blocks disagree. More than one bijection means the match is only up to
    signature (e.g. A5's 5a/5b).
    """
    tc = table.classes
    if len(computed) != len(tc):
        return []

    def sig_ok(i: int, j: int) -> bool:
        c, t = computed[i], tc[j]
        return (
            c.element_order == t.element_order
            and c.centralizer_order == t.centralizer_order
            and Fraction(table.group_order, t.centralizer_order) == c.size
        )

    candidates = [[j for j in range(len(tc)) if sig_ok(i, j)] for i in range(len(computed))]
    results: list[dict[int, int]] = []

    def extend(i: int, mapping: dict[int, int], used: set[int]) -> None:
        if i == len(computed):
            for a, b in mapping.items():
                for p, pa in computed[a].power_maps.items():
                    if tc[b].power_maps.get(p) != mapping[pa]:
                        return
            results.append(dict(mapping))
            return
        for j in candidates[i]:
            if j not in used:
                mapping[i] = j
                used.add(j)
                extend(i + 1, mapping, used)
                used.discard(j)
                del mapping[i]

    extend(0, {}, set())
    return results


def permutation_character(computed: Sequence[ComputedClass]) -> list[int]:
    return [sum(1 for i, x in enumerate(c.representative) if i == x) for c in computed]


__all__ = [
    "ConjClass",
    "Character",
    "CharacterTable",
    "ParseError",
    "SchemaError",
    "MissingPowerMap",
    "GroupTooLarge",
    "load_table",
    "load_table_file",
    "load_shipped",
    "table_from_dict",
    "table_to_dict",
    "validate",
    "exponent",
    "classes_dividing",
    "power_class",
    "spectrum",
    "prime_graph",
    "orders_prime_graph",
    "classes_from_permutations",
    "enumerate_group",
    "match_classes",
]
