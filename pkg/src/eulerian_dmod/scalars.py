"""Exact coefficient arithmetic over Q and F_p, and generalized binomials.

Coefficients are stored *raw* inside the engine: Python ``int`` or
``fractions.Fraction`` in characteristic 0 (an integral Fraction is always
normalized back to ``int``), and an ``int`` in ``range(p)`` in characteristic
p.  :class:`FieldScalar` is the user-facing wrapper around a raw value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational

import numpy as np


class InputError(ValueError):
    """Raised for malformed or mismatched inputs (CLI exit code 2)."""


def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class CharSpec:
    """Characteristic of the coefficient field: 0 for Q, or a prime p."""

    p: int = 0

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 0:
            raise InputError(f"characteristic must be 0 or a prime, got {self.p!r}")
        if self.p != 0 and not _is_prime(self.p):
            raise InputError(f"characteristic {self.p} is not prime")

    def __str__(self):
        return "0" if self.p == 0 else str(self.p)

    # raw arithmetic -------------------------------------------------------

    def reduce(self, x):
        """Coerce ``x`` (int, Fraction, FieldScalar) into a canonical raw value."""
        if isinstance(x, FieldScalar):
            if x.char != self:
                raise InputError(f"scalar of characteristic {x.char} used in characteristic {self}")
            return x.value
        if isinstance(x, bool):
            x = int(x)
        if self.p == 0:
            if isinstance(x, int):
                return x
            if isinstance(x, Rational):
                x = Fraction(x)
                return x.numerator if x.denominator == 1 else x
            raise InputError(f"not an exact scalar: {x!r}")
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Rational):
            x = Fraction(x)
            den = x.denominator % self.p
            if den == 0:
                raise InputError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        raise InputError(f"not an exact scalar: {x!r}")

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        q = Fraction(1) / a
        return q.numerator if q.denominator == 1 else q

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def scalar(self, x) -> "FieldScalar":
        return FieldScalar(self.reduce(x), self)

    def format(self, raw) -> str:
        """Exact text form: ``"p/q"`` for rationals, the residue in char p."""
        if isinstance(raw, Fraction):
            return f"{raw.numerator}/{raw.denominator}"
        return str(raw)


QQ = CharSpec(0)


class FieldScalar:
    """Immutable exact field element."""

    __slots__ = ("value", "char")

    def __init__(self, value, char: CharSpec = QQ):
        object.__setattr__(self, "char", char)
        object.__setattr__(self, "value", char.reduce(value))

    def __setattr__(self, key, value):
        raise AttributeError("FieldScalar is immutable")

    def _other(self, other):
        if isinstance(other, FieldScalar):
            if other.char != self.char:
                raise InputError("characteristic mismatch")
            return other.value
        return self.char.reduce(other)

    def __add__(self, other):
        return FieldScalar(self.char.add(self.value, self._other(other)), self.char)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.char.sub(self.value, self._other(other)), self.char)

    def __rsub__(self, other):
        return FieldScalar(self.char.sub(self._other(other), self.value), self.char)

    def __mul__(self, other):
        return FieldScalar(self.char.mul(self.value, self._other(other)), self.char)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldScalar(self.char.div(self.value, self._other(other)), self.char)

    def __rtruediv__(self, other):
        return FieldScalar(self.char.div(self._other(other), self.value), self.char)

    def __neg__(self):
        return FieldScalar(self.char.neg(self.value), self.char)

    def inverse(self) -> "FieldScalar":
        return FieldScalar(self.char.inv(self.value), self.char)

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.char == other.char and self.value == other.value
        try:
            return self.value == self.char.reduce(other)
        except InputError:
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.char.p))

    def __repr__(self):
        return f"FieldScalar({self.char.format(self.value)}, char={self.char})"

    def __str__(self):
        return self.char.format(self.value)


# binomials ---------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def binom_int(a: int, b: int) -> int:
    """a(a-1)...(a-b+1)/b! for any integer a and b >= 0."""
    if b < 0:
        raise InputError(f"binomial lower argument must be >= 0, got {b}")
    if a >= 0:
        return comb(a, b)
    # a < 0: (-1)^b * C(b - a - 1, b)
    v = comb(b - a - 1, b)
    return -v if b & 1 else v


def _binom_lucas(a: int, b: int, p: int) -> int:
    # only for a, b >= 0
    out = 1
    while b:
        ad, bd = a % p, b % p
        if bd > ad:
            return 0
        out = out * comb(ad, bd) % p
        a //= p
        b //= p
    return out


def binom_mod(a: int, b: int, p: int) -> int:
    """Raw residue of binom_int(a, b) mod p; Lucas digits when a >= 0."""
    if b < 0:
        raise InputError(f"binomial lower argument must be >= 0, got {b}")
    if a >= 0:
        return _binom_lucas(a, b, p)
    return binom_int(a, b) % p


def binom_raw(a: int, b: int, char: CharSpec):
    if char.p:
        return binom_mod(a, b, char.p)
    return binom_int(a, b)


def binom_field(a: int, b: int, char: CharSpec = QQ) -> FieldScalar:
    """binom_int(a, b) as an element of the field of characteristic ``char``."""
    return FieldScalar(binom_raw(a, b, char), char)


def binom_table(lo: int, hi: int, r_max: int, char: CharSpec) -> np.ndarray:
    """Table ``T[a - lo, r] = binom(a, r)`` for lo <= a <= hi, 0 <= r <= r_max.

    Entries come from the exact integer path.  In characteristic p the
    dtype is int64 (residues); in characteristic 0 it is int64 when every
    entry fits in 62 bits and ``object`` (Python ints) otherwise.
    """
    vals = [[binom_int(a, r) for r in range(r_max + 1)] for a in range(lo, hi + 1)]
    if char.p:
        return np.array([[v % char.p for v in row] for row in vals], dtype=np.int64)
    big = max((abs(v) for row in vals for v in row), default=0)
    if big < 2**62:
        return np.array(vals, dtype=np.int64)
    return np.array(vals, dtype=object)


def multinomial_bound(n: int, r: int) -> int:
    """Number of compositions of r into n nonnegative parts."""
    return comb(n + r - 1, r) if n > 0 else int(r == 0)


__all__ = [
    "InputError",
    "CharSpec",
    "QQ",
    "FieldScalar",
    "binom_int",
    "binom_mod",
    "binom_raw",
    "binom_field",
    "binom_table",
    "multinomial_bound",
]
