"""Exact scalar arithmetic over GF(p), small extensions GF(p^k) and the rationals.

Field elements are stored as *raw values* so that the matrix kernels can
work on plain Python objects:

* GF(p): integers in ``range(p)``;
* GF(p^k): integers ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` encoding the
  coefficient vector of ``c_0 + c_1 t + ... + c_{k-1} t^{k-1}`` modulo the
  field's modulus polynomial;
* rationals: :class:`fractions.Fraction`.

Raw values are always canonical, so ``==`` on them is field equality.
:class:`Scalar` wraps a raw value together with its field for callers that
want operator syntax and mismatch checking.
"""

from __future__ import annotations

import functools
import operator
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Any, Iterator, Sequence

from .errors import DivisionByZero, FieldMismatch, NoAutomorphism, UnsupportedField

MAX_PRIME = 13
MAX_EXT_DEGREE = 3
MAX_ORDER = 256

DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),  # t^2 + t + 1
    (2, 3): (1, 1, 0, 1),  # t^3 + t + 1
    (3, 2): (1, 0, 1),  # t^2 + 1
}


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, isqrt(p) + 1))


class FieldSpec:
    """Common interface of the supported fields.

    Arithmetic methods take and return raw values (see module docstring).
    """

    char: int
    order: int | None
    degree: int
    unitary: bool
    zero: Any
    one: Any

    # identity used for equality and hashing
    def _key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, k: int):
        raise NotImplementedError

    def coerce(self, x):
        """Convert a user value (int, Fraction, str, coefficient list) to a raw value."""
        raise NotImplementedError

    def elements(self) -> list:
        raise TypeError(f"{self} is infinite")

    def random(self, rng: random.Random):
        raise NotImplementedError

    def sqrt(self, a):
        raise NotImplementedError

    def conj(self, a):
        """The designated order-2 automorphism (unitary conjugation)."""
        raise NoAutomorphism(f"{self} carries no order-2 automorphism")

    def pow(self, a, e: int):
        r = self.one
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def dot(self, xs: Sequence, ys: Sequence):
        add, mul = self.add, self.mul
        acc = self.zero
        for x, y in zip(xs, ys):
            if x and y:
                acc = add(acc, mul(x, y))
        return acc

    def matmul(self, A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
        cols = tuple(zip(*B))
        dot = self.dot
        return tuple(tuple(dot(row, col) for col in cols) for row in A)

    # coordinates over the subfield used for semilinear solving
    def fixed_field(self) -> FieldSpec:
        raise NoAutomorphism(f"{self} carries no order-2 automorphism")

    def coords(self, a) -> tuple:
        return (a,)

    def from_coords(self, cs: Sequence):
        return cs[0]

    def to_json(self, a) -> Any:
        raise NotImplementedError

    def from_json(self, x: Any):
        return self.coerce(x)

    def descriptor(self) -> dict:
        raise NotImplementedError

    def fmt(self, a) -> str:
        return str(self.to_json(a))


class PrimeField(FieldSpec):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise UnsupportedField(f"{p} is not prime")
        if p > MAX_PRIME:
            raise UnsupportedField(f"GF({p}) is larger than GF({MAX_PRIME})")
        self.p = self.char = self.order = p
        self.degree = 1
        self.unitary = False
        self.zero, self.one = 0, 1
        self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        self._sqrt: dict[int, int] = {}
        for a in reversed(range(p)):
            self._sqrt[a * a % p] = a
        self._sqrt[0] = 0

    def _key(self):
        return ("Fp", self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        return self._inv[a]

    def from_int(self, k):
        return k % self.p

    def coerce(self, x):
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def elements(self):
        return list(range(self.p))

    def random(self, rng):
        return rng.randrange(self.p)

    def sqrt(self, a):
        return self._sqrt.get(a)

    def dot(self, xs, ys):
        return sum(map(operator.mul, xs, ys)) % self.p

    def matmul(self, A, B):
        p, mul = self.p, operator.mul
        cols = tuple(zip(*B))
        return tuple(tuple(sum(map(mul, row, col)) % p for col in cols) for row in A)

    def to_json(self, a):
        return str(a)

    def descriptor(self):
        return {"kind": "Fp", "p": self.p}


def _poly_divmod_is_zero(f: Sequence[int], g: Sequence[int], p: int) -> bool:
    """True when the monic polynomial ``g`` divides ``f`` over GF(p) (lists low to high)."""
    r = list(f)
    dg = len(g) - 1
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] % p
        if c:
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - c * g[j]) % p
    return not any(x % p for x in r[:dg])


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if _poly_divmod_is_zero(modulus, list(low) + [1], p):
                return False
    return True


class ExtensionField(FieldSpec):
    """GF(p^k) given by a monic irreducible modulus (coefficients low to high)."""

    def __init__(self, p: int, k: int, modulus: Sequence[int] | None = None, unitary: bool = False):
        if not _is_prime(p):
            raise UnsupportedField(f"{p} is not prime")
        if not 2 <= k <= MAX_EXT_DEGREE or p**k > MAX_ORDER:
            raise UnsupportedField(f"GF({p}^{k}) not supported")
        if modulus is None:
            if (p, k) not in DEFAULT_MODULI:
                raise UnsupportedField(f"no default modulus for GF({p}^{k})")
            modulus = DEFAULT_MODULI[p, k]
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] == 0:
            raise UnsupportedField(f"modulus {modulus} does not have degree {k}")
        lead_inv = pow(modulus[-1], p - 2, p)
        modulus = tuple(c * lead_inv % p for c in modulus)
        if not is_irreducible(modulus, p):
            raise UnsupportedField(f"modulus {modulus} is reducible over GF({p})")
        if unitary and k % 2:
            raise UnsupportedField("unitary conjugation needs an even-degree extension")
        self.p = self.char = p
        self.degree = k
        self.order = q = p**k
        self.modulus = modulus
        self.unitary = unitary
        self.zero, self.one = 0, 1

        vecs = [self._digits(a) for a in range(q)]
        self._add = [[self._undigits([(x + y) % p for x, y in zip(vecs[a], vecs[b])]) for b in range(q)] for a in range(q)]
        self._neg = [self._undigits([-x % p for x in vecs[a]]) for a in range(q)]
        self._mul = [[self._polymul(vecs[a], vecs[b]) for b in range(q)] for a in range(q)]
        self._sub = [[self._add[a][self._neg[b]] for b in range(q)] for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break
        self._sqrt: dict[int, int] = {}
        for a in reversed(range(q)):
            self._sqrt[self._mul[a][a]] = a
        self._sqrt[0] = 0
        if unitary:
            e = p ** (k // 2)
            self._conj = [self.pow(a, e) for a in range(q)]

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _undigits(self, cs: Sequence[int]) -> int:
        a = 0
        for c in reversed(cs):
            a = a * self.p + c
        return a

    def _polymul(self, x: Sequence[int], y: Sequence[int]) -> int:
        p, k, m = self.p, self.degree, self.modulus
        prod_ = [0] * (2 * k - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod_[i + j] += xi * yj
        for i in range(2 * k - 2, k - 1, -1):
            c = prod_[i] % p
            if c:
                for j in range(k + 1):
                    prod_[i - k + j] -= c * m[j]
        return self._undigits([c % p for c in prod_[:k]])

    def _key(self):
        return ("Fq", self.p, self.degree, self.modulus, self.unitary)

    def __repr__(self):
        u = ", unitary" if self.unitary else ""
        return f"GF({self.p}^{self.degree}{u})"

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._sub[a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        return self._inv[a]

    def from_int(self, k):
        return k % self.p

    def coerce(self, x):
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x)) if x.strip().lstrip("-").isdigit() or "/" in x else self._parse_poly(x)
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        if isinstance(x, (list, tuple)):
            if len(x) > self.degree:
                raise ValueError(f"too many coefficients for {self}")
            cs = [int(c) % self.p for c in x] + [0] * (self.degree - len(x))
            return self._undigits(cs)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def _parse_poly(self, s: str) -> int:
        # accepts forms like "t", "t+1", "2t+1"
        acc = 0
        for term in s.replace("-", "+-").split("+"):
            term = term.strip()
            if not term:
                continue
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:]
            if "t" in term:
                coef, _, exp = term.partition("t")
                exp = int(exp.lstrip("^") or 1)
                coef = int(coef.rstrip("*") or 1)
            else:
                coef, exp = int(term), 0
            mono = [0] * self.degree
            mono[exp] = 1
            acc = self.add(acc, self.mul(self.from_int(sign * coef), self._undigits(mono)))
        return acc

    def gen(self) -> int:
        """The class of ``t``."""
        return self.p

    def elements(self):
        return list(range(self.order))

    def random(self, rng):
        return rng.randrange(self.order)

    def sqrt(self, a):
        return self._sqrt.get(a)

    def conj(self, a):
        if not self.unitary:
            raise NoAutomorphism(f"{self} carries no order-2 automorphism")
        return self._conj[a]

    def dot(self, xs, ys):
        add, mul = self._add, self._mul
        acc = 0
        for x, y in zip(xs, ys):
            if x and y:
                acc = add[acc][mul[x][y]]
        return acc

    def fixed_field(self):
        if not self.unitary:
            raise NoAutomorphism(f"{self} carries no order-2 automorphism")
        return GF(self.p)

    def coords(self, a):
        return tuple(self._digits(a))

    def from_coords(self, cs):
        return self._undigits([int(c) % self.p for c in cs])

    def to_json(self, a):
        return self._digits(a)

    def descriptor(self):
        d = {"kind": "Fq", "p": self.p, "deg": self.degree, "modulus": list(self.modulus)}
        if self.unitary:
            d["unitary"] = True
        return d

    def fmt(self, a):
        terms = []
        for i, c in enumerate(self._digits(a)):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(f"{c}{mono}" if c != 1 or not mono else mono)
        return "+".join(reversed(terms)) or "0"


class RationalField(FieldSpec):
    char = 0
    order = None
    degree = 1
    unitary = False
    zero = Fraction(0)
    one = Fraction(1)

    def _key(self):
        return ("Q",)

    def __repr__(self):
        return "QQ"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in QQ")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0 in QQ")
        return a / b

    def from_int(self, k):
        return Fraction(k)

    def coerce(self, x):
        if isinstance(x, (int, Fraction, str)) and not isinstance(x, bool):
            return Fraction(x)
        if isinstance(x, bool):
            return Fraction(int(x))
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def random(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 5))

    def sqrt(self, a):
        if a < 0:
            return None
        n, d = a.numerator, a.denominator
        rn, rd = isqrt(n), isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return None

    def dot(self, xs, ys):
        return sum((x * y for x, y in zip(xs, ys)), Fraction(0))

    def to_json(self, a):
        return f"{a.numerator}/{a.denominator}" if a.denominator != 1 else str(a.numerator)

    def descriptor(self):
        return {"kind": "Q"}


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def _gf(p: int, k: int, modulus: tuple | None, unitary: bool) -> FieldSpec:
    if k == 1:
        if unitary:
            raise UnsupportedField("unitary conjugation needs an even-degree extension")
        return PrimeField(p)
    return ExtensionField(p, k, modulus, unitary)


def GF(p: int, k: int = 1, modulus: Sequence[int] | None = None, unitary: bool = False) -> FieldSpec:
    """Return the (cached) field GF(p^k)."""
    return _gf(p, k, tuple(modulus) if modulus is not None else None, unitary)


def field_from_json(d: dict) -> FieldSpec:
    kind = d.get("kind")
    unitary = bool(d.get("unitary", False))
    if kind == "Fp":
        return GF(int(d["p"]), unitary=unitary)
    if kind == "Fq":
        return GF(int(d["p"]), int(d["deg"]), d.get("modulus"), unitary)
    if kind == "Q":
        if unitary:
            raise UnsupportedField("unitary involutions over QQ are out of scope")
        return QQ
    raise UnsupportedField(f"unknown field kind {kind!r}")


def parse_field_name(name: str) -> FieldSpec:
    """Parse short names such as ``GF(2)``, ``GF4``, ``GF(9)u`` (unitary) or ``Q``."""
    s = name.strip().replace(" ", "")
    if s in ("Q", "QQ"):
        return QQ
    unitary = s.endswith("u")
    s = s.rstrip("u").removeprefix("GF").strip("()")
    q = int(s)
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            r = q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return GF(p, k, unitary=unitary)
    raise UnsupportedField(f"cannot parse field name {name!r}")


@dataclass(frozen=True)
class Scalar:
    """A field element bound to its field, with operator syntax."""

    field: FieldSpec
    value: Any

    @classmethod
    def of(cls, field: FieldSpec, x) -> Scalar:
        return cls(field, field.coerce(x))

    def _other(self, other) -> Any:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inv(self) -> Scalar:
        return Scalar(self.field, self.field.inv(self.value))

    def conj(self) -> Scalar:
        return Scalar(self.field, self.field.conj(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != self.field.zero

    def __repr__(self):
        return f"{self.field.fmt(self.value)} in {self.field!r}"


def field_arithmetic(a: Scalar, b: Scalar | None, op: str):
    """Dispatch one field operation by name (``add sub mul div neg inv eq``)."""
    if b is not None and a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if op == "eq":
        return a == b
    raise ValueError(f"unknown op {op!r}")


def sqrt_in_field(mu: Scalar) -> Scalar | None:
    """Return some lambda with lambda^2 == mu, or None when mu is not a square."""
    r = mu.field.sqrt(mu.value)
    return None if r is None else Scalar(mu.field, r)


def unitary_conjugate(a: Scalar) -> Scalar:
    return a.conj()


def iter_elements(field: FieldSpec) -> Iterator[Scalar]:
    for a in field.elements():
        yield Scalar(field, a)
