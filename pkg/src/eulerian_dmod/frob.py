"""Characteristic p: Frobenius structure on monomial modules and the D-action it induces.

For R and its monomial localizations the natural isomorphism
theta_e : M -> F^e(M) identifies x^a with x^y (x) x^w where a = y + p^e w and
0 <= y_i < p^e.  An operator of order < p^e is R^{p^e}-linear, so it acts on
M through the y-part only; this module computes that induced action and
compares it with the direct region action.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .region import AxisRule, ModElem, RegionModule, act, default_r_max, euler_coefficient_table, make_module
from .scalars import CharSpec, FieldScalar, InputError, binom_raw, binom_table
from .weyl import DOp, euler_op


def _require_char_p(M: RegionModule) -> int:
    if M.char.p == 0:
        raise InputError("Frobenius structures need characteristic p > 0")
    return M.char.p


def split_exponent(a, q: int):
    """a = y + q*w with 0 <= y_i < q (w may be negative)."""
    y = tuple(ai % q for ai in a)
    w = tuple((ai - yi) // q for ai, yi in zip(a, y))
    return y, w


@dataclass(frozen=True)
class FModuleStruct:
    """Natural theta on a monomial module: x^a <-> x^y (x) x^w, a = y + p^e w."""

    M: RegionModule
    e: int = 1

    def __post_init__(self):
        _require_char_p(self.M)
        if self.e < 1:
            raise InputError("Frobenius exponent e must be >= 1")
        if any(r is AxisRule.NEGONLY for r in self.M.rules):
            raise InputError("the natural theta is only built for R and monomial localizations")

    @property
    def q(self) -> int:
        return self.M.char.p ** self.e

    def theta(self, a):
        y, w = split_exponent(a, self.q)
        return y, w

    def theta_inv(self, y, w):
        return tuple(yi + self.q * wi for yi, wi in zip(y, w))

    def degree_preserving(self, box) -> bool:
        """deg x^a == |y| + p^e deg(x^w) for every basis monomial in ``box``."""
        for a in self.M.basis_in_box(box):
            y, w = self.theta(a)
            if not self.M.contains(w):
                return False
            if self.M.degree(a) != sum(y) + self.q * self.M.degree(w):
                return False
        return True


def frobenius_decompose(z: ModElem, e: int) -> list:
    """alpha_e(z) as a list of (y, w, coefficient) with z = sum c x^y (x^w)^{p^e}."""
    p = _require_char_p(z.parent)
    if e < 1:
        raise InputError("Frobenius exponent e must be >= 1")
    q = p ** e
    out = []
    for a, c in z.items():
        y, w = split_exponent(a, q)
        if not z.parent.contains(w):
            raise InputError(f"split of {a} leaves the region")
        out.append((y, w, c))
    return out


def induced_action(A: DOp, z: ModElem, e: int) -> ModElem:
    """Apply A (order < p^e) to the y-parts of alpha_e(z) and map back."""
    M = z.parent
    p = _require_char_p(M)
    if A.n != M.n or A.char != M.char:
        raise InputError("operator and module disagree on n or characteristic")
    q = p ** e
    if A.order() >= q:
        raise InputError(f"operator order {A.order()} is not below p^e = {q}")
    ch, n = M.char, M.n
    out: dict = {}
    for y, w, c in frobenius_decompose(z, e):
        for (alpha, beta), ca in A.items():
            coef = ch.mul(ca, c.value)
            for i in range(n):
                if beta[i]:
                    coef = ch.mul(coef, binom_raw(y[i], beta[i], ch))
                    if coef == 0:
                        break
            if coef == 0:
                continue
            y2 = tuple(y[i] - beta[i] + alpha[i] for i in range(n))
            tgt = tuple(y2[i] + q * w[i] for i in range(n))
            if not M.contains(tgt):
                continue
            out[tgt] = ch.add(out.get(tgt, 0), coef)
    return ModElem(M, out)


def min_frobenius_exponent(r: int, p: int) -> int:
    """Smallest e with p^e >= r + 1."""
    e, q = 1, p
    while q < r + 1:
        e, q = e + 1, q * p
    return e


@dataclass(frozen=True)
class FrobVerdict:
    eulerian: bool
    box: tuple
    r_max: int
    witness: tuple | None = None  # (alpha, r, lhs, rhs)
    theta_degree_preserving: bool = True

    def __bool__(self):
        return self.eulerian


def check_fmodule_eulerian(M: RegionModule, box, r_max: int | None = None,
                           method: str = "kernel") -> FrobVerdict:
    """E_r z computed through the Frobenius split versus binom(deg z, r) z.

    For each r the exponent e is the least one with p^e >= r + 1; E_r then
    acts on the y-part alone, where it is the scalar binom(|y|, r).
    ``method="act"`` goes through :func:`induced_action` and :func:`euler_op`.
    """
    p = _require_char_p(M)
    ch = M.char
    box = tuple((int(lo), int(hi)) for lo, hi in box)
    if r_max is None:
        r_max = default_r_max(ch)
    basis = M.basis_in_box(box)
    preserving = all(FModuleStruct(M, e).degree_preserving(box)
                     for e in range(1, min_frobenius_exponent(r_max, p) + 1))
    if not basis:
        return FrobVerdict(True, box, r_max, None, preserving)
    by_e: dict = {}
    for r in range(1, r_max + 1):
        by_e.setdefault(min_frobenius_exponent(r, p), []).append(r)

    if method == "act":
        for a in basis:
            z = M.monomial(a)
            for r in range(1, r_max + 1):
                e = min_frobenius_exponent(r, p)
                img = induced_action(euler_op(M.n, r, ch), z, e)
                rhs = FieldScalar(binom_raw(M.degree(a), r, ch), ch)
                if img != z.scale(rhs):
                    return FrobVerdict(False, box, r_max, (a, r, img.coeff(a), rhs), preserving)
        return FrobVerdict(True, box, r_max, None, preserving)

    exps = np.array(basis, dtype=np.int64)
    degs = exps.sum(axis=1) - M.total_shift
    dlo = int(degs.min())
    dtab = binom_table(dlo, int(degs.max()), r_max, ch)
    rhs = dtab[degs - dlo]
    lhs = np.zeros_like(rhs)
    for e, rs in by_e.items():
        ys = np.mod(exps, p ** e)
        coeffs = euler_coefficient_table(ys, max(rs), ch)
        for r in rs:
            lhs[:, r] = coeffs[:, r]
    bad = lhs != rhs
    bad[:, 0] = False
    hits = np.argwhere(bad)
    if hits.size:
        t, r = (int(v) for v in hits[0])
        w = (basis[t], r, FieldScalar(int(lhs[t, r]), ch), FieldScalar(int(rhs[t, r]), ch))
        return FrobVerdict(False, box, r_max, w, preserving)
    return FrobVerdict(True, box, r_max, None, preserving)


# consistency battery -------------------------------------------------------------------


def operators_below(n: int, q: int):
    """All beta in N^n with |beta| < q."""
    return [b for b in itertools.product(range(q), repeat=n) if sum(b) < q]


def localization_family(n: int, char: CharSpec) -> list:
    """R and localized(S) for every nonempty S."""
    mods = [make_module("R", n, char)]
    for k in range(1, n + 1):
        for S in itertools.combinations(range(1, n + 1), k):
            mods.append(make_module("localized", n, char, 0, S))
    return mods


@dataclass(frozen=True)
class BatteryResult:
    p: int
    e: int
    module: str
    triples: int
    mismatches: int
    first: tuple | None  # (monomial, alpha, beta)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def consistency_battery(M: RegionModule, e: int, box, alpha_box=None) -> BatteryResult:
    """Compare induced and direct actions of every x^alpha d^[beta] with |beta| < p^e
    on every basis monomial of ``M`` in ``box`` (kernel layer)."""
    p = _require_char_p(M)
    q = p ** e
    n = M.n
    if alpha_box is None:
        alpha_box = [(0, 1)] * n
    basis = M.basis_in_box(box)
    exps = np.array(basis, dtype=np.int64).reshape(len(basis), n)
    alphas = np.array(list(itertools.product(*(range(lo, hi + 1) for lo, hi in alpha_box))), dtype=np.int64)
    betas = np.array(operators_below(n, q), dtype=np.int64)
    lo = min(int(exps.min()) if len(basis) else 0, 0)
    hi = max(int(exps.max()) if len(basis) else 0, q - 1)
    tab = binom_table(lo, hi, q - 1, M.char)
    rules = np.array([r.code for r in M.rules], dtype=np.int64)
    cnt, (t, ia, b) = _kernels.frob_battery(exps, rules, alphas, betas, tab, -lo, p, q)
    first = None
    if cnt:
        first = (basis[t], tuple(int(v) for v in alphas[ia]), tuple(int(v) for v in betas[b]))
    total = len(basis) * len(alphas) * len(betas)
    return BatteryResult(p, e, str(M), total, cnt, first)


def consistency_objects(M: RegionModule, e: int, box, alphas=None) -> BatteryResult:
    """Same comparison through :func:`induced_action` and :func:`act`.

    A single term maps distinct monomials to distinct monomials, so applying
    it to the sum of all box monomials compares every monomial at once.
    """
    p = _require_char_p(M)
    q = p ** e
    n = M.n
    if alphas is None:
        alphas = list(itertools.product(range(2), repeat=n))
    basis = M.basis_in_box(box)
    z = ModElem(M, {a: 1 for a in basis})
    bad, first, total = 0, None, 0
    for alpha in alphas:
        for beta in operators_below(n, q):
            A = DOp(n, M.char, {(tuple(alpha), beta): 1})
            total += len(basis)
            lhs, rhs = induced_action(A, z, e), act(A, z)
            if lhs != rhs:
                diff = lhs - rhs
                bad += len(diff.support)
                if first is None:
                    first = (min(diff.support), tuple(alpha), beta)
    return BatteryResult(p, e, str(M), total, bad, first)
