"""Z^n-graded D-modules with a monomial basis described by per-axis rules.

A region module is spanned by Laurent monomials x^a whose exponents obey one
rule per axis (``NonNeg``: a_i >= 0, ``NegOnly``: a_i <= -1, ``AllInt``),
with total degree ``|a| - shift``.  This covers R, its monomial
localizations, the graded injective hull *E and the monomial models of
H_P^h(R) localized off P.

NegOnly axes model top Cech quotients: a multiplication that pushes such an
exponent up to 0 lands in the part that was divided out, so the result is 0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .scalars import QQ, CharSpec, FieldScalar, InputError, binom_raw, binom_table
from .weyl import DOp, dop_mul, euler_op


class AxisRule(Enum):
    NONNEG = "NonNeg"
    NEGONLY = "NegOnly"
    ALLINT = "AllInt"

    def allows(self, a: int) -> bool:
        if self is AxisRule.NONNEG:
            return a >= 0
        if self is AxisRule.NEGONLY:
            return a <= -1
        return True

    @property
    def code(self) -> int:
        return {AxisRule.NONNEG: _kernels.RULE_NONNEG,
                AxisRule.NEGONLY: _kernels.RULE_NEGONLY,
                AxisRule.ALLINT: _kernels.RULE_ALLINT}[self]


@dataclass(frozen=True)
class RegionModule:
    """Monomial-basis model of a graded D-module.

    ``shift`` is the user-facing shift l of M(l); ``base_shift`` is the
    built-in offset of the kind (``-n`` for *E so that 1/(x_1...x_n) has
    degree 0, ``-h`` for the model of *E(R/P)).  Total degree of x^a is
    ``|a| - (base_shift + shift)``.
    """

    n: int
    char: CharSpec
    rules: tuple
    shift: int = 0
    base_shift: int = 0
    kind: str = "custom"
    vars: tuple = ()

    def __post_init__(self):
        if len(self.rules) != self.n:
            raise InputError(f"need {self.n} axis rules, got {len(self.rules)}")

    @property
    def total_shift(self) -> int:
        return self.base_shift + self.shift

    def contains(self, a: Sequence[int]) -> bool:
        return all(rule.allows(x) for rule, x in zip(self.rules, a))

    def degree(self, a: Sequence[int]) -> int:
        return sum(a) - self.total_shift

    def with_shift(self, shift: int) -> "RegionModule":
        return replace(self, shift=shift)

    def shifted(self, k: int) -> "RegionModule":
        """M(k) of this module: shifts compose additively."""
        return replace(self, shift=self.shift + k)

    def basis_in_box(self, box) -> list:
        """Basis exponents inside ``box`` (list of (lo, hi) per axis), lex order."""
        ranges = []
        for rule, (lo, hi) in zip(self.rules, box):
            if rule is AxisRule.NONNEG:
                lo = max(lo, 0)
            elif rule is AxisRule.NEGONLY:
                hi = min(hi, -1)
            ranges.append(range(lo, hi + 1))
        return [tuple(a) for a in itertools.product(*ranges)]

    def element(self, support: Mapping) -> "ModElem":
        return ModElem(self, support)

    def monomial(self, a, c=1) -> "ModElem":
        return ModElem(self, {tuple(a): c})

    def __str__(self):
        return format_module(self)


def make_module(kind: str, n: int, char: CharSpec = QQ, shift: int = 0,
                vars: Iterable[int] = ()) -> RegionModule:
    """Build R, localized(S), starE or starE_model(P); ``vars`` are 1-based."""
    vs = tuple(sorted(set(vars)))
    if any(not 1 <= v <= n for v in vs):
        raise InputError(f"variable subset {vs} not within 1..{n}")
    if kind == "R":
        rules = (AxisRule.NONNEG,) * n
        return RegionModule(n, char, rules, shift, 0, "R", ())
    if kind == "localized":
        rules = tuple(AxisRule.ALLINT if i + 1 in vs else AxisRule.NONNEG for i in range(n))
        return RegionModule(n, char, rules, shift, 0, "localized", vs)
    if kind == "starE":
        rules = (AxisRule.NEGONLY,) * n
        return RegionModule(n, char, rules, shift, -n, "starE", ())
    if kind == "starE_model":
        if not vs:
            raise InputError("starE_model needs a nonempty variable subset")
        rules = tuple(AxisRule.NEGONLY if i + 1 in vs else AxisRule.ALLINT for i in range(n))
        # canonical grading: H_P^h(R) localized, shifted by -a(R/P) - n = -h
        return RegionModule(n, char, rules, shift, -len(vs), "starE_model", vs)
    raise InputError(f"unknown module kind {kind!r}")


def format_module(M: RegionModule) -> str:
    names = {"R": "R", "starE": "starE"}
    if M.kind in names:
        base = names[M.kind]
    elif M.kind == "localized":
        base = "R_loc{" + ",".join(f"x{v}" for v in M.vars) + "}"
    elif M.kind == "starE_model":
        base = "starE_model{" + ",".join(f"x{v}" for v in M.vars) + "}"
    else:
        base = "custom[" + ",".join(r.value for r in M.rules) + "]"
    return base if M.shift == 0 else f"{base}(shift={M.shift})"


@dataclass(frozen=True)
class ModElem:
    """Finite combination of basis monomials of ``parent``."""

    parent: RegionModule
    support: dict = field(default_factory=dict)

    def __post_init__(self):
        ch = self.parent.char
        clean = {}
        for a, c in self.support.items():
            a = tuple(a)
            if len(a) != self.parent.n:
                raise InputError(f"monomial {a} does not have {self.parent.n} variables")
            if not self.parent.contains(a):
                raise InputError(f"monomial {a} is outside the region {self.parent}")
            c = ch.reduce(c)
            if c != 0:
                clean[a] = c
        object.__setattr__(self, "support", clean)

    def items(self):
        for a, c in sorted(self.support.items()):
            yield a, FieldScalar(c, self.parent.char)

    def coeff(self, a) -> FieldScalar:
        return FieldScalar(self.support.get(tuple(a), 0), self.parent.char)

    def is_zero(self) -> bool:
        return not self.support

    def is_homogeneous(self) -> bool:
        return len({sum(a) for a in self.support}) <= 1

    def degree(self) -> int | None:
        """Total degree if homogeneous and nonzero."""
        degs = {self.parent.degree(a) for a in self.support}
        return degs.pop() if len(degs) == 1 else None

    def _same(self, other: "ModElem"):
        if other.parent != self.parent:
            raise InputError("elements of different modules")

    def __add__(self, other: "ModElem") -> "ModElem":
        self._same(other)
        ch = self.parent.char
        out = dict(self.support)
        for a, c in other.support.items():
            out[a] = ch.add(out.get(a, 0), c)
        return ModElem(self.parent, out)

    def __neg__(self):
        ch = self.parent.char
        return ModElem(self.parent, {a: ch.neg(c) for a, c in self.support.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ModElem":
        ch = self.parent.char
        c = ch.reduce(c)
        return ModElem(self.parent, {a: ch.mul(v, c) for a, v in self.support.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, ModElem):
            return NotImplemented
        return self.parent == other.parent and self.support == other.support

    def __hash__(self):
        return hash((self.parent, frozenset(self.support.items())))

    def __repr__(self):
        ch = self.parent.char
        body = " + ".join(f"{ch.format(c)}*x^{a}" for a, c in sorted(self.support.items()))
        return f"ModElem({body or '0'} in {self.parent})"


def act(A: DOp, z: ModElem) -> ModElem:
    """Apply A to z; monomials leaving a NegOnly axis are annihilated."""
    M = z.parent
    if A.n != M.n or A.char != M.char:
        raise InputError("operator and module disagree on n or characteristic")
    ch, n = M.char, M.n
    out: dict = {}
    for a, v in z.support.items():
        for (alpha, beta), c in A.items():
            coef = ch.mul(c, v)
            for i in range(n):
                if beta[i]:
                    coef = ch.mul(coef, binom_raw(a[i], beta[i], ch))
                    if coef == 0:
                        break
            if coef == 0:
                continue
            tgt = tuple(a[i] - beta[i] + alpha[i] for i in range(n))
            if not M.contains(tgt):
                continue
            out[tgt] = ch.add(out.get(tgt, 0), coef)
    return ModElem(M, out)


# Eulerian check ----------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    alpha: tuple
    r: int
    lhs: FieldScalar
    rhs: FieldScalar

    def as_dict(self):
        return {"alpha": list(self.alpha), "r": self.r, "lhs": str(self.lhs), "rhs": str(self.rhs)}


@dataclass(frozen=True)
class EulerianVerdict:
    """Outcome scoped to the tested box and r range, never unbounded."""

    eulerian: bool
    box: tuple
    r_max: int
    witness: Witness | None = None
    method: str = "kernel"
    checked: int = 0  # basis monomials examined

    def __bool__(self):
        return self.eulerian

    def __str__(self):
        if self.eulerian:
            return f"Eulerian(box={list(self.box)}, r<={self.r_max})"
        w = self.witness
        return f"Witness(alpha={w.alpha}, r={w.r}, lhs={w.lhs}, rhs={w.rhs})"


def default_r_max(char: CharSpec) -> int:
    return 6 if char.p == 0 else max(6, char.p ** 2)


def _normalize_box(box, n):
    box = tuple((int(lo), int(hi)) for lo, hi in box)
    if len(box) != n:
        raise InputError(f"box has {len(box)} axes, module has {n}")
    if any(lo > hi for lo, hi in box):
        raise InputError(f"empty box {box}")
    return box


def euler_coefficient_table(exps: np.ndarray, r_max: int, char: CharSpec) -> np.ndarray:
    """E_r coefficient on each monomial row of ``exps`` (r = 0..r_max), raw ints.

    Evaluates sum over |i| = r of prod_k binom(a_k, i_k) through the kernel
    layer; falls back to exact Python integers when int64 could overflow.
    """
    if exps.size == 0:
        return np.zeros((0, r_max + 1), dtype=np.int64)
    lo, hi = int(exps.min()), int(exps.max())
    tab = binom_table(lo, hi, r_max, char)
    n = exps.shape[1]
    if char.p == 0 and tab.dtype == np.int64:
        if not _kernels.fits_int64(int(np.abs(tab).max()), n, r_max):
            tab = tab.astype(object)
    return _kernels.euler_coeffs(exps, tab, -lo, r_max, char.p)


def is_eulerian_witness(M: RegionModule, box, r_max: int | None = None,
                        method: str | None = None) -> EulerianVerdict:
    """Check E_r x^a = binom(deg x^a, r) x^a on every basis monomial in ``box``.

    ``method``:
      * ``"kernel"`` -- generic path, all r <= r_max via the kernel layer;
      * ``"act"``    -- generic path through :func:`euler_op` and :func:`act`;
      * ``"fast"``   -- characteristic 0 only: check r = 1 and conclude the
        rest from the recurrence E_{r+1} = (E_1 E_r - r E_r)/(r+1).
    Default is ``"fast"`` in characteristic 0 and ``"kernel"`` otherwise.
    """
    box = _normalize_box(box, M.n)
    ch = M.char
    if r_max is None:
        r_max = default_r_max(ch)
    if r_max < 1:
        raise InputError("r_max must be >= 1")
    if method is None:
        method = "fast" if ch.p == 0 else "kernel"
    if method == "fast" and ch.p:
        raise InputError("the r = 1 fast path is only valid in characteristic 0")
    basis = M.basis_in_box(box)
    checked = len(basis)
    if not basis:
        return EulerianVerdict(True, box, r_max, None, method, 0)

    if method == "act":
        ops = [euler_op(M.n, r, ch) for r in range(1, r_max + 1)]
        for a in basis:
            z = M.monomial(a)
            deg = M.degree(a)
            for r, E in enumerate(ops, 1):
                img = act(E, z)
                rhs = FieldScalar(binom_raw(deg, r, ch), ch)
                if img != z.scale(rhs):
                    w = Witness(a, r, img.coeff(a), rhs)
                    return EulerianVerdict(False, box, r_max, w, method, checked)
        return EulerianVerdict(True, box, r_max, None, method, checked)

    r_top = 1 if method == "fast" else r_max
    exps = np.array(basis, dtype=np.int64)
    lhs = euler_coefficient_table(exps, r_top, ch)
    degs = exps.sum(axis=1) - M.total_shift
    dlo, dhi = int(degs.min()), int(degs.max())
    dtab = binom_table(dlo, dhi, r_top, ch)
    rhs = dtab[degs - dlo]
    if lhs.dtype == object or rhs.dtype == object:
        bad = np.array([[lhs[t, r] != rhs[t, r] for r in range(r_top + 1)] for t in range(len(basis))])
    else:
        bad = lhs != rhs
    bad[:, 0] = False
    hits = np.argwhere(bad)
    if hits.size:
        t, r = (int(v) for v in hits[0])  # argwhere is row-major: lex (alpha, r)
        w = Witness(basis[t], r, FieldScalar(int(lhs[t, r]), ch), FieldScalar(int(rhs[t, r]), ch))
        return EulerianVerdict(False, box, r_max, w, method, checked)
    return EulerianVerdict(True, box, r_max, None, method, checked)


# D/Dm and *E ----------------------------------------------------------------------


def dmod_m_to_starE(beta: Sequence[int], char: CharSpec = QQ) -> ModElem:
    """Image of the class of d^[beta] in *E: (-1)^|beta| x^(-beta-1)."""
    beta = tuple(int(b) for b in beta)
    if any(b < 0 for b in beta):
        raise InputError("beta must be in N^n")
    E = make_module("starE", len(beta), char)
    sign = -1 if sum(beta) % 2 else 1
    return E.monomial(tuple(-b - 1 for b in beta), sign)


def dmod_m_class(A: DOp) -> dict:
    """Class of A in D/Dm in the basis {d^[beta]}: {beta: raw coefficient}.

    Uses x_i d_i^[b] = d_i^[b] x_i - d_i^[b-1], so modulo Dm
    x^a d^[b] = (-1)^|a| d^[b-a] (zero unless a <= b).
    """
    ch, n = A.char, A.n
    out: dict = {}
    for (alpha, beta), c in A.items():
        if any(alpha[i] > beta[i] for i in range(n)):
            continue
        key = tuple(beta[i] - alpha[i] for i in range(n))
        v = ch.neg(c) if sum(alpha) % 2 else c
        out[key] = ch.add(out.get(key, 0), v)
    return {k: v for k, v in out.items() if v != 0}


def dmod_m_act(A: DOp, beta: Sequence[int]) -> dict:
    """A acting on the class of d^[beta] in D/Dm, via the product A * d^[beta]."""
    n, ch = A.n, A.char
    gen = DOp(n, ch, {((0,) * n, tuple(beta)): 1})
    return dmod_m_class(dop_mul(A, gen))


def dmod_m_map(cls: Mapping, n: int, char: CharSpec = QQ) -> ModElem:
    """Extend beta -> (-1)^|beta| x^(-beta-1) linearly."""
    E = make_module("starE", n, char)
    out = ModElem(E, {})
    for beta, c in cls.items():
        out = out + dmod_m_to_starE(beta, char).scale(c)
    return out
