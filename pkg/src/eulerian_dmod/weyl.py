"""Normal-form arithmetic in the divided-power ring of differential operators.

An operator is a finite combination of terms ``x^alpha d^[beta]`` with all
x's to the left.  Products are brought back to normal form one variable at
a time with the two rewrite rules

    d^[s] d^[t] = binom(s+t, s) d^[s+t]
    d^[s] x^t   = sum_j binom(t, j) x^(t-j) d^[s-j]

and operators in distinct variables commute.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable, Iterable, Mapping

from .scalars import QQ, CharSpec, FieldScalar, InputError, binom_raw

Key = tuple  # (alpha, beta), both tuples of length n


def _zero(n: int):
    return (0,) * n


def default_order(key: Key):
    """Total degree |alpha| + |beta|, then lexicographic on (alpha, beta)."""
    alpha, beta = key
    return (sum(alpha) + sum(beta), alpha + beta)


class DOp:
    """Immutable operator in normal form."""

    __slots__ = ("n", "char", "_terms", "_hash")

    def __init__(self, n: int, char: CharSpec = QQ, terms: Mapping | Iterable = ()):
        if n < 1:
            raise InputError("need at least one variable")
        self.n = n
        self.char = char
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (alpha, beta), c in items:
            alpha, beta = tuple(alpha), tuple(beta)
            if len(alpha) != n or len(beta) != n:
                raise InputError(f"term ({alpha}, {beta}) does not have {n} variables")
            if min(alpha, default=0) < 0 or min(beta, default=0) < 0:
                raise InputError("operator exponents must be nonnegative")
            c = char.reduce(c)
            key = (alpha, beta)
            acc[key] = char.add(acc[key], c) if key in acc else c
        self._terms = {k: v for k, v in acc.items() if v != 0}
        self._hash = None

    @classmethod
    def _raw(cls, n, char, terms):
        # terms already reduced and nonzero
        op = cls.__new__(cls)
        op.n, op.char, op._terms, op._hash = n, char, terms, None
        return op

    # constructors ---------------------------------------------------------

    @classmethod
    def const(cls, n: int, c=1, char: CharSpec = QQ) -> "DOp":
        return cls(n, char, {(_zero(n), _zero(n)): c})

    @classmethod
    def identity(cls, n: int, char: CharSpec = QQ) -> "DOp":
        return cls.const(n, 1, char)

    @classmethod
    def monomial(cls, alpha, beta, c=1, char: CharSpec = QQ) -> "DOp":
        return cls(len(alpha), char, {(tuple(alpha), tuple(beta)): c})

    @classmethod
    def x(cls, n: int, i: int, power: int = 1, char: CharSpec = QQ) -> "DOp":
        """x_i^power, variables numbered from 1."""
        _check_var(n, i)
        alpha = tuple(power if k == i - 1 else 0 for k in range(n))
        return cls(n, char, {(alpha, _zero(n)): 1})

    @classmethod
    def d(cls, n: int, i: int, j: int = 1, char: CharSpec = QQ) -> "DOp":
        """The divided power d_i^[j]."""
        _check_var(n, i)
        beta = tuple(j if k == i - 1 else 0 for k in range(n))
        return cls(n, char, {(_zero(n), beta): 1})

    # access ---------------------------------------------------------------

    def terms(self) -> dict:
        """Copy of the term map (alpha, beta) -> raw coefficient."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, alpha, beta) -> FieldScalar:
        return FieldScalar(self._terms.get((tuple(alpha), tuple(beta)), 0), self.char)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def order(self) -> int:
        """Largest total divided-power order |beta| among the terms."""
        return max((sum(b) for _, b in self._terms), default=0)

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "DOp"):
        if not isinstance(other, DOp):
            raise InputError(f"expected an operator, got {type(other).__name__}")
        if other.n != self.n or other.char != self.char:
            raise InputError(
                f"operator mismatch: n={self.n}, char {self.char} vs n={other.n}, char {other.char}"
            )

    def _lift(self, other):
        if isinstance(other, DOp):
            self._check(other)
            return other
        return DOp.const(self.n, other, self.char)

    def __add__(self, other):
        other = self._lift(other)
        ch = self.char
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = ch.add(out[k], v) if k in out else v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return DOp._raw(self.n, ch, out)

    __radd__ = __add__

    def __neg__(self):
        ch = self.char
        return DOp._raw(self.n, ch, {k: ch.neg(v) for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "DOp":
        ch = self.char
        c = ch.reduce(c)
        if c == 0:
            return DOp._raw(self.n, ch, {})
        return DOp._raw(self.n, ch, {k: ch.mul(v, c) for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, DOp):
            return dop_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative power of an operator")
        out = DOp.identity(self.n, self.char)
        for _ in range(k):
            out = dop_mul(out, self)
        return out

    def __eq__(self, other):
        if isinstance(other, DOp):
            return self.n == other.n and self.char == other.char and self._terms == other._terms
        if isinstance(other, (int, Fraction, FieldScalar)):
            return self == DOp.const(self.n, other, self.char)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.char.p, frozenset(self._terms.items())))
        return self._hash

    def leading(self, order: Callable = default_order):
        """(key, raw coefficient) of the largest term under ``order``."""
        if not self._terms:
            raise InputError("zero operator has no leading term")
        k = max(self._terms, key=order)
        return k, self._terms[k]

    def __repr__(self):
        return f"DOp(n={self.n}, char={self.char}, {self})"

    def __str__(self):
        return format_dop(self)


def _check_var(n: int, i: int):
    if not 1 <= i <= n:
        raise InputError(f"variable index {i} out of range 1..{n}")


def format_dop(A: DOp) -> str:
    """Text in the operator grammar; reparses to an equal operator."""
    if A.is_zero():
        return "0"
    parts = []
    for key in sorted(A._terms, key=default_order, reverse=True):
        alpha, beta = key
        c = A._terms[key]
        factors = []
        for i, a in enumerate(alpha, 1):
            if a:
                factors.append(f"x{i}" if a == 1 else f"x{i}^{a}")
        for i, b in enumerate(beta, 1):
            if b:
                factors.append(f"d{i}" if b == 1 else f"d{i}^[{b}]")
        neg = (not A.char.p) and c < 0
        mag = -c if neg else c
        cs = A.char.format(mag)
        if not factors:
            body = cs
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = cs + "*" + "*".join(factors)
        parts.append(("-" if neg else "+", body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# multiplication -------------------------------------------------------------


def _axis_product(b: int, c: int, d: int):
    """d^[b] * x^c * d^[d] on one axis -> list of (x exp, d exp, int coeff)."""
    # d^[b] x^c = sum_j binom(c, j) x^(c-j) d^[b-j]; then d^[b-j] d^[d]
    out = []
    for j in range(min(b, c) + 1):
        s = b - j
        out.append((c - j, s + d, comb(c, j) * comb(s + d, d)))
    return out


def dop_mul(A: DOp, B: DOp) -> DOp:
    """The product A*B in normal form."""
    A._check(B)
    n, ch = A.n, A.char
    p = ch.p
    out: dict = {}
    axis_cache: dict = {}
    for (a, b), ca in A._terms.items():
        for (c, d), cb in B._terms.items():
            per_axis = []
            for i in range(n):
                key = (b[i], c[i], d[i])
                lst = axis_cache.get(key)
                if lst is None:
                    lst = axis_cache[key] = _axis_product(*key)
                per_axis.append(lst)
            base = ca * cb
            for combo in product(*per_axis):
                coef = base
                for _, _, k in combo:
                    coef *= k
                if p:
                    coef %= p
                if coef == 0:
                    continue
                alpha = tuple(a[i] + combo[i][0] for i in range(n))
                beta = tuple(combo[i][1] for i in range(n))
                key = (alpha, beta)
                out[key] = out[key] + coef if key in out else coef
    if p:
        out = {k: v % p for k, v in out.items()}
    else:
        out = {k: (v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v)
               for k, v in out.items()}
    return DOp._raw(n, ch, {k: v for k, v in out.items() if v != 0})


# Euler operators -------------------------------------------------------------


def compositions(r: int, n: int):
    """All (i_1..i_n) >= 0 with sum r, lexicographically decreasing."""
    if n == 1:
        yield (r,)
        return
    for first in range(r, -1, -1):
        for rest in compositions(r - first, n - 1):
            yield (first,) + rest


def euler_op(n: int, r: int, char: CharSpec = QQ) -> DOp:
    """E_r = sum over |i| = r of x^i d^[i]."""
    if n < 1:
        raise InputError("need at least one variable")
    if r < 1:
        raise InputError(f"Euler operator index must be >= 1, got {r}")
    return DOp._raw(n, char, {(i, i): 1 for i in compositions(r, n)})


def euler_recurrence_step(E_r: DOp, r: int) -> DOp:
    """E_{r+1} = (E_1 E_r - r E_r) / (r+1).

    Unavailable when r+1 is zero in the field (r = -1 mod p).
    """
    ch = E_r.char
    if ch.p and (r + 1) % ch.p == 0:
        raise InputError(f"recurrence divides by r+1 = {r + 1}, which is 0 in characteristic {ch.p}")
    E1 = euler_op(E_r.n, 1, ch)
    return (dop_mul(E1, E_r) - E_r.scale(r)).scale(ch.inv(ch.reduce(r + 1)))


# action on Laurent polynomials ----------------------------------------------


def dop_apply(A: DOp, f: Mapping) -> dict:
    """Apply A to a Laurent polynomial {exponent tuple: scalar}.

    d_i^[j] x^a = binom(a_i, j) x^(a - j e_i), for any integer exponents.
    Returns {exponent: raw coefficient} with zero entries dropped.
    """
    ch, n = A.char, A.n
    out: dict = {}
    for mu, v in f.items():
        mu = tuple(mu)
        if len(mu) != n:
            raise InputError(f"monomial {mu} does not have {n} variables")
        v = ch.reduce(v)
        if v == 0:
            continue
        for (alpha, beta), c in A._terms.items():
            coef = ch.mul(c, v)
            for i in range(n):
                if beta[i]:
                    coef = ch.mul(coef, binom_raw(mu[i], beta[i], ch))
                    if coef == 0:
                        break
            if coef == 0:
                continue
            tgt = tuple(mu[i] - beta[i] + alpha[i] for i in range(n))
            s = ch.add(out[tgt], coef) if tgt in out else coef
            out[tgt] = s
    return {k: v for k, v in out.items() if v != 0}


# degree ------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeVerdict:
    kind: str  # "homogeneous" | "inhomogeneous" | "zero"
    degree: int | None = None

    def __str__(self):
        if self.kind == "homogeneous":
            return f"homogeneous({self.degree})"
        return self.kind


def dop_degree(A: DOp) -> DegreeVerdict:
    """Z-degree |alpha| - |beta| shared by all terms, if any."""
    if A.is_zero():
        return DegreeVerdict("zero")
    degs = {sum(a) - sum(b) for a, b in A._terms}
    if len(degs) == 1:
        return DegreeVerdict("homogeneous", degs.pop())
    return DegreeVerdict("inhomogeneous")


# reduction -------------------------------------------------------------------


def reduce_by(gens: list, target: DOp, order: Callable = default_order) -> DOp:
    """Remainder of ``target`` after cancelling leading terms by left multiples.

    A zero remainder certifies membership in the left ideal D*gens.  A
    nonzero remainder proves nothing: the generators are not completed to a
    Groebner basis.
    """
    if not gens:
        raise InputError("need at least one generator")
    for g in gens:
        target._check(g)
        if g.is_zero():
            raise InputError("zero generator")
    ch, n = target.char, target.n
    leads = [(g, g.leading(order)) for g in gens]
    rem: dict = {}
    work = target
    while not work.is_zero():
        (alpha_t, beta_t), c_t = work.leading(order)
        done = False
        for g, ((alpha_g, beta_g), _) in leads:
            if all(alpha_t[i] >= alpha_g[i] and beta_t[i] >= beta_g[i] for i in range(n)):
                mult = DOp._raw(
                    n, ch,
                    {(tuple(alpha_t[i] - alpha_g[i] for i in range(n)),
                      tuple(beta_t[i] - beta_g[i] for i in range(n))): 1},
                )
                prod = dop_mul(mult, g)
                if prod.is_zero():
                    continue
                key, c_p = prod.leading(order)
                if key != (alpha_t, beta_t):
                    # leading coefficient vanished in characteristic p
                    continue
                work = work - prod.scale(ch.div(c_t, c_p))
                done = True
                break
        if not done:
            rem[(alpha_t, beta_t)] = c_t
            work = work - DOp._raw(n, ch, {(alpha_t, beta_t): c_t})
    return DOp._raw(n, ch, rem)


def is_member(gens: list, target: DOp, order: Callable = default_order) -> str:
    """"MEMBER" when the reduction reaches zero, else "INCONCLUSIVE"."""
    return "MEMBER" if reduce_by(gens, target, order).is_zero() else "INCONCLUSIVE"
