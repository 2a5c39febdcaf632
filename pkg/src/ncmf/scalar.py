"""Exact coefficient fields: the rationals and prime fields.

Every other module works with *raw* scalars for speed (``Fraction`` for the
rationals, ``int`` residues for F_p) and calls the arithmetic methods of the
field object.  :class:`FieldElem` wraps a raw value together with its field
for callers who prefer operator syntax.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

from .errors import DivisionByZero, MixedFields

__all__ = [
    "Field",
    "Rationals",
    "PrimeField",
    "FieldElem",
    "QQ",
    "GF",
    "INFINITE",
    "is_prime",
    "nth_root",
    "multiplicative_order",
    "field_from_json",
]

#: returned by :func:`multiplicative_order` when no finite order exists
INFINITE = math.inf


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    q = 3
    while q * q <= p:
        if p % q == 0:
            return False
        q += 2
    return True


class Field:
    """Common interface of the two supported coefficient fields."""

    zero: Any
    one: Any

    def __call__(self, value) -> "FieldElem":
        return FieldElem(self, self.convert(value))

    # arithmetic on raw values
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

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        r = self.one
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def convert(self, value):
        raise NotImplementedError

    def fmt(self, a) -> str:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def random_element(self, rng, nonzero: bool = False):
        raise NotImplementedError


class Rationals(Field):
    zero = Fraction(0)
    one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

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
            raise DivisionByZero("inverse of zero")
        return 1 / a

    def convert(self, value):
        if isinstance(value, FieldElem):
            if value.field != self:
                raise MixedFields(f"{value.field!r} element used in {self!r}")
            return value.value
        if isinstance(value, bool):
            raise TypeError("bool is not a field literal")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            text = value.strip()
            try:
                num, _, den = text.partition("/")
                if den and int(den) == 0:
                    raise DivisionByZero(f"zero denominator in {value!r}")
                return Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                if isinstance(exc, DivisionByZero):
                    raise
                raise ValueError(f"not a rational literal: {value!r}") from None
        raise TypeError(f"cannot convert {value!r} to a rational")

    def fmt(self, a) -> str:
        return str(a)

    def to_json(self) -> dict:
        return {"type": "Q"}

    def random_element(self, rng, nonzero: bool = False):
        while True:
            v = Fraction(rng.randint(-9, 9))
            if v or not nonzero:
                return v


class PrimeField(Field):
    zero = 0
    one = 1

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"{p!r} is not prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, -1, self.p)

    def convert(self, value):
        if isinstance(value, FieldElem):
            if value.field != self:
                raise MixedFields(f"{value.field!r} element used in {self!r}")
            return value.value
        if isinstance(value, bool):
            raise TypeError("bool is not a field literal")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.p, value.denominator % self.p)
        if isinstance(value, str):
            text = value.strip()
            num, slash, den = text.partition("/")
            try:
                n = int(num)
                d = int(den) if slash else 1
            except ValueError:
                raise ValueError(f"not an F_{self.p} literal: {value!r}") from None
            return self.div(n % self.p, d % self.p)
        raise TypeError(f"cannot convert {value!r} to GF({self.p})")

    def fmt(self, a) -> str:
        return str(a)

    def to_json(self) -> dict:
        return {"type": "Fp", "p": self.p}

    def random_element(self, rng, nonzero: bool = False):
        return rng.randint(1 if nonzero else 0, self.p - 1)


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_json(obj) -> Field:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError(f"bad field description: {obj!r}")
    if obj["type"] == "Q":
        return QQ
    if obj["type"] == "Fp":
        return PrimeField(obj.get("p"))
    raise ValueError(f"unknown field type {obj['type']!r}")


class FieldElem:
    """A field element with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise MixedFields(f"{self.field!r} and {other.field!r}")
            return other.value
        return self.field.convert(other)

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElem(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElem(self.field, self.field.pow(self.value, k))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise MixedFields(f"{self.field!r} and {other.field!r}")
            return self.value == other.value
        try:
            return self.value == self.field.convert(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field!r}({self.field.fmt(self.value)})"

    def __str__(self):
        return self.field.fmt(self.value)


def _integer_root(m: int, n: int):
    """Exact n-th root of a nonnegative integer, or None."""
    if m < 2:
        return m
    r = round(m ** (1.0 / n))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**n == m:
            return c
    # float estimate can be off for huge values; fall back to bisection
    lo, hi = 0, 1 << (m.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**n < m:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**n == m else None


def raw_nth_root(field: Field, x, n: int):
    """An n-th root of the raw value ``x`` in ``field``, or None."""
    if n < 1:
        raise ValueError("n must be positive")
    if x == 0:
        raise DivisionByZero("nth_root of zero")
    if isinstance(field, Rationals):
        sign = 1
        num, den = x.numerator, x.denominator
        if num < 0:
            if n % 2 == 0:
                return None
            sign, num = -1, -num
        a, b = _integer_root(num, n), _integer_root(den, n)
        if a is None or b is None:
            return None
        return Fraction(sign * a, b)
    p = field.p
    if math.gcd(n, p - 1) == 1:
        # x -> x^n is a bijection; its inverse is a power map
        return pow(x, pow(n, -1, p - 1), p)
    for y in range(1, p):
        if pow(y, n, p) == x:
            return y
    return None


def nth_root(x: FieldElem, n: int):
    """Return y with y**n == x, or None when the field has no such y.

    Over F_p the smallest residue is returned when several roots exist.
    """
    y = raw_nth_root(x.field, x.value, n)
    return None if y is None else FieldElem(x.field, y)


def raw_multiplicative_order(field: Field, x):
    if x == 0:
        raise DivisionByZero("order of zero")
    if isinstance(field, Rationals):
        if x == 1:
            return 1
        if x == -1:
            return 2
        return INFINITE
    q = field.p - 1
    divisors = sorted({d for i in range(1, math.isqrt(q) + 1) if q % i == 0 for d in (i, q // i)})
    for d in divisors:
        if pow(x, d, field.p) == 1:
            return d
    raise AssertionError("unreachable: Fermat")


def multiplicative_order(x: FieldElem):
    """Least m > 0 with x**m == 1, or ``INFINITE``."""
    return raw_multiplicative_order(x.field, x.value)
