"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored on the power basis 1, z, ..., z^(phi(n)-1) of
Q[x]/Phi_n(x), with Fraction coefficients. Values are never silently moved
to a smaller conductor; use :func:`restrict_conductor` for that.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from . import _linalg

__all__ = [
    "Cyclotomic",
    "NotCoprime",
    "NotInSubfield",
    "cyclotomic_polynomial",
    "euler_phi",
    "root_power",
    "arith",
    "galois",
    "conjugate",
    "trace_to_rationals",
    "restrict_conductor",
    "lift_conductor",
    "as_conductor",
    "parse_cyclotomic",
]

RationalLike = Union[int, Fraction]


class NotCoprime(ValueError):
    pass


class NotInSubfield(ValueError):
    pass


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # ascending coefficients; den is monic
    num = list(num)
    dq = len(den) - 1
    out = [0] * (len(num) - dq)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dq]
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num[:dq]):
        raise ArithmeticError("non-exact polynomial division")
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def _cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    num = [-1] + [0] * (n - 1) + [1]
    den = [1]
    for d in divisors(n)[:-1]:
        den = _poly_mul(den, list(_cyclotomic_polynomial(d)))
    return tuple(_poly_divexact(num, den))


def cyclotomic_polynomial(n: int) -> list[int]:
    """Phi_n as an ascending coefficient list, e.g. Phi_6 -> [1, -1, 1]."""
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    return list(_cyclotomic_polynomial(n))


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Power-basis coordinates of z^k for k = 0..n-1 (integral)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur: list[int] = []
    for k in range(n):
        if k < deg:
            cur = [int(j == k) for j in range(deg)]
        else:
            # multiply previous by x and reduce x^deg = -sum phi_j x^j
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [c - top * phi[j] for j, c in enumerate(cur)]
        rows.append(tuple(cur))
    return tuple(rows)


def _reduce(n: int, expvec: list) -> tuple[Fraction, ...]:
    """Map a vector indexed by exponents mod n to power-basis coordinates."""
    table = _power_table(n)
    deg = len(table[0]) if table else 0
    out = [Fraction(0)] * deg
    for k, c in enumerate(expvec):
        if c:
            for j, t in enumerate(table[k]):
                if t:
                    out[j] += c * t
    return tuple(out)


@dataclass(frozen=True)
class Cyclotomic:
    conductor: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.conductor < 1:
            raise ValueError("conductor must be positive")
        if len(self.coeffs) != len(_cyclotomic_polynomial(self.conductor)) - 1:
            raise ValueError(
                f"expected {euler_phi(self.conductor)} coefficients at conductor "
                f"{self.conductor}, got {len(self.coeffs)}"
            )

    # constructors -----------------------------------------------------

    @classmethod
    def rational(cls, r: RationalLike, n: int = 1) -> Cyclotomic:
        deg = len(_cyclotomic_polynomial(n)) - 1
        return cls(n, (Fraction(r),) + (Fraction(0),) * (deg - 1))

    @classmethod
    def zero(cls, n: int = 1) -> Cyclotomic:
        return cls.rational(0, n)

    @classmethod
    def from_exponents(cls, n: int, expvec) -> Cyclotomic:
        """Build sum_k expvec[k] * z_n^k (k taken mod n)."""
        folded = [Fraction(0)] * n
        if isinstance(expvec, dict):
            items = expvec.items()
        else:
            items = enumerate(expvec)
        for k, c in items:
            folded[int(k) % n] += Fraction(c)
        return cls(n, _reduce(n, folded))

    # predicates -------------------------------------------------------

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise NotInSubfield(f"{self} is not rational")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral_rational(self) -> bool:
        return self.is_rational() and self.coeffs[0].denominator == 1

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> tuple[Cyclotomic, Cyclotomic] | None:
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(other, self.conductor)
        if isinstance(other, Cyclotomic):
            if other.conductor == self.conductor:
                return self, other
            m = math.lcm(self.conductor, other.conductor)
            return lift_conductor(self, m), lift_conductor(other, m)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self.conductor, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.conductor, tuple(x * other for x in self.coeffs))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = a.conductor
        acc = [Fraction(0)] * n
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        acc[(i + j) % n] += x * y
        return Cyclotomic(n, _reduce(n, acc))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def inverse(self) -> Cyclotomic:
        """1/x as (product of the other Galois conjugates) / norm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.conductor
        others = Cyclotomic.rational(1, n)
        for i in range(2, n):
            if math.gcd(i, n) == 1:
                others = others * galois(self, i)
        norm = (others * self).to_rational()
        return others * (1 / norm)

    def __pow__(self, k: int) -> Cyclotomic:
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = Cyclotomic.rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0].coeffs == pair[1].coeffs

    def __hash__(self) -> int:
        # normalized trace does not depend on the conductor used
        return hash(trace_to_rationals(self) / euler_phi(self.conductor))

    def __str__(self) -> str:
        n = self.conductor
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                term = str(c)
            else:
                root = f"E({n})" if k == 1 else f"E({n})^{k}"
                if c == 1:
                    term = root
                elif c == -1:
                    term = "-" + root
                else:
                    term = f"{c}*{root}"
            parts.append(term)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"Cyclotomic({self.conductor}, {str(self)!r})"


def root_power(n: int, k: int) -> Cyclotomic:
    """zeta_n^(k mod n) at conductor n."""
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    return Cyclotomic(n, tuple(Fraction(t) for t in _power_table(n)[k % n]))


def arith(a: Cyclotomic, b: Cyclotomic, op: str) -> Cyclotomic:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def galois(x: Cyclotomic, i: int) -> Cyclotomic:
    """Image of x under zeta_n -> zeta_n^i."""
    n = x.conductor
    if math.gcd(i, n) != 1:
        raise NotCoprime(f"gcd({i}, {n}) != 1")
    acc = [Fraction(0)] * n
    for k, c in enumerate(x.coeffs):
        if c:
            acc[(k * i) % n] += c
    return Cyclotomic(n, _reduce(n, acc))


def conjugate(x: Cyclotomic) -> Cyclotomic:
    if x.conductor <= 2:
        return x
    return galois(x, -1)


def trace_to_rationals(x: Cyclotomic) -> Fraction:
    """Tr_{Q(zeta_n)/Q}(x), n the conductor x is expressed at."""
    n = x.conductor
    # sum of sigma_i(z^k) over units i is the Ramanujan sum c_n(k), so the
    # trace is linear in the coordinates
    total = Fraction(0)
    for k, c in enumerate(x.coeffs):
        if c:
            total += c * _ramanujan_sum(n, k)
    return total


@lru_cache(maxsize=None)
def _ramanujan_sum(n: int, k: int) -> int:
    s = sum(root_power(n, i * k) for i in range(1, n + 1) if math.gcd(i, n) == 1)
    if isinstance(s, int):
        return s
    return int(s.to_rational())


def lift_conductor(x: Cyclotomic, m: int) -> Cyclotomic:
    n = x.conductor
    if m % n:
        raise ValueError(f"conductor {n} does not divide {m}")
    if m == n:
        return x
    step = m // n
    acc = [Fraction(0)] * m
    for k, c in enumerate(x.coeffs):
        if c:
            acc[k * step] += c
    return Cyclotomic(m, _reduce(m, acc))


def restrict_conductor(x: Cyclotomic, m: int) -> Cyclotomic:
    """Re-express x at conductor m, which must divide x.conductor."""
    n = x.conductor
    if m < 1 or n % m:
        raise ValueError(f"{m} does not divide conductor {n}")
    if m == n:
        return x
    step = n // m
    deg = euler_phi(m)
    cols = [root_power(n, j * step).coeffs for j in range(deg)]
    sol = _linalg.solve(cols, x.coeffs)
    if sol is None:
        raise NotInSubfield(f"{x} does not lie in Q(zeta_{m})")
    return Cyclotomic(m, tuple(sol))


def as_conductor(x: Cyclotomic, m: int) -> Cyclotomic:
    """Express x at conductor m, lifting to a common multiple first if needed."""
    if x.conductor == m:
        return x
    return restrict_conductor(lift_conductor(x, math.lcm(x.conductor, m)), m)


# literal parsing ------------------------------------------------------

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+(?:/\d+)?)?\s*
        (?:(?P<star>\*)\s*)?
        (?:E\(\s*(?P<n>\d+)\s*\)(?:\s*\^\s*(?P<k>\d+))?)?\s*""",
    re.VERBOSE,
)


def _parse_expression(text: str) -> Cyclotomic:
    pos = 0
    terms: list[tuple[Fraction, int, int]] = []
    text = text.strip()
    if not text:
        raise ValueError("empty cyclotomic literal")
    while pos < len(text):
        mt = _TERM.match(text, pos)
        if mt is None or mt.end() == pos or (mt.group("coef") is None and mt.group("n") is None):
            raise ValueError(f"cannot parse cyclotomic literal {text!r}")
        if mt.group("star") and mt.group("n") is None:
            raise ValueError(f"cannot parse cyclotomic literal {text!r}")
        if terms and mt.group("sign") is None:
            raise ValueError(f"missing operator in {text!r}")
        coef = Fraction(mt.group("coef")) if mt.group("coef") else Fraction(1)
        if mt.group("sign") == "-":
            coef = -coef
        if mt.group("n") is None:
            terms.append((coef, 1, 0))
        else:
            terms.append((coef, int(mt.group("n")), int(mt.group("k") or 1)))
        pos = mt.end()
    n = math.lcm(*(t[1] for t in terms))
    if n < 1:
        raise ValueError(f"E(0) in {text!r}")
    exps: dict[int, Fraction] = {}
    for c, m, k in terms:
        e = (k * (n // m)) % n
        exps[e] = exps.get(e, Fraction(0)) + c
    return Cyclotomic.from_exponents(n, exps)


def parse_cyclotomic(obj) -> Cyclotomic:
    """Parse a cyclotomic literal from a data file.

    Accepted forms: an int, a rational string like "-1/2", a GAP-style sum
    such as "-E(5)-E(5)^4", or {"conductor": n, "coeffs": {"k": "p/q"}}
    giving the coefficient of zeta_n^k.
    """
    if isinstance(obj, bool):
        raise ValueError("booleans are not cyclotomic literals")
    if isinstance(obj, int):
        return Cyclotomic.rational(obj)
    if isinstance(obj, str):
        return _parse_expression(obj)
    if isinstance(obj, dict):
        try:
            n = int(obj["conductor"])
            raw = obj["coeffs"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad cyclotomic object {obj!r}") from exc
        if n < 1:
            raise ValueError(f"bad conductor {n}")
        exps = {}
        for k, c in raw.items():
            k = int(k)
            if not 0 <= k < n:
                raise ValueError(f"exponent {k} out of range for conductor {n}")
            exps[k] = Fraction(c)
        return Cyclotomic.from_exponents(n, exps)
    raise ValueError(f"unsupported cyclotomic literal {obj!r}")


def to_literal(x: Cyclotomic):
    """Inverse of :func:`parse_cyclotomic` (object form, power basis)."""
    if x.is_rational():
        return str(x.coeffs[0])
    return {
        "conductor": x.conductor,
        "coeffs": {str(k): str(c) for k, c in enumerate(x.coeffs) if c},
    }
