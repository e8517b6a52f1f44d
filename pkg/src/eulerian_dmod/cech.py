"""Degreewise Cech computation of iterated local cohomology at monomial ideals.

Every term of a Cech complex of a monomial localization R_L at a monomial
ideal is again a monomial localization, so the strand of the complex at a
multidegree mu is a finite complex of spaces of dimension 0 or 1.  For an
iterated module H^{i_1}_{J_1}(... H^{i_s}_{J_s}(R)) the outer complexes
have terms H^{i_s}_{J_s}(R)_{g_U} = H^{i_s}_{J_s}(R_{L u supp g_U}) since
localization is exact; the engine therefore recomputes inner stages over
localized ambients and connects them by the maps induced on cocycles.

A strand only depends on which coordinates of mu are negative (a term
R_L is nonzero at mu iff every negative coordinate is inverted in L), so
spaces and maps are memoized on that sign pattern.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .region import AxisRule, RegionModule, act, make_module
from .scalars import QQ, CharSpec, FieldScalar, InputError, binom_raw
from .weyl import DOp


@dataclass(frozen=True)
class MonomialIdeal:
    n: int
    generators: tuple

    def __post_init__(self):
        gens = []
        for g in self.generators:
            g = tuple(int(v) for v in g)
            if len(g) != self.n:
                raise InputError(f"generator {g} does not have {self.n} variables")
            if any(v < 0 for v in g):
                raise InputError(f"generator {g} has a negative exponent")
            if not any(g):
                raise InputError("the unit monomial is not allowed as a generator")
            if g not in gens:
                gens.append(g)
        if not gens:
            raise InputError("a monomial ideal needs at least one generator")
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def maximal(cls, n: int) -> "MonomialIdeal":
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def supports(self) -> list:
        return [frozenset(i for i, v in enumerate(g) if v) for g in self.generators]

    def is_maximal(self) -> bool:
        return self == MonomialIdeal.maximal(self.n)

    def __str__(self):
        from .parse import format_ideal

        return format_ideal(self)


@dataclass(frozen=True)
class CechSpec:
    """Stages (ideal, index), innermost first: [(J_s, i_s), ..., (J_1, i_1)]."""

    stages: tuple

    def __post_init__(self):
        st = tuple((I, int(i)) for I, i in self.stages)
        if not st:
            raise InputError("a Cech spec needs at least one stage")
        n = st[0][0].n
        for I, i in st:
            if I.n != n:
                raise InputError("all stages must share the number of variables")
            if i < 0:
                raise InputError("cohomological index must be >= 0")
        object.__setattr__(self, "stages", st)

    @property
    def n(self) -> int:
        return self.stages[0][0].n

    def __str__(self):
        from .parse import format_spec

        return format_spec(self)


def _sign(U_big: tuple, j: int) -> int:
    """Sign of the inclusion U_big - {j} -> U_big: (-1)^(position of j)."""
    return -1 if U_big.index(j) % 2 else 1


def _neg(mu) -> frozenset:
    return frozenset(i for i, v in enumerate(mu) if v < 0)


def _localization_axes(ambient: RegionModule) -> frozenset:
    if any(r is AxisRule.NEGONLY for r in ambient.rules):
        raise InputError("Cech ambient must be a localization of R (no NegOnly axes)")
    return frozenset(i for i, r in enumerate(ambient.rules) if r is AxisRule.ALLINT)


# single Cech complex ---------------------------------------------------------------


@dataclass
class CechComplex:
    """0 -> M -> (+) M_{f_j} -> (+) M_{f_j f_k} -> ... with signed inclusions."""

    ideal: MonomialIdeal
    ambient: RegionModule
    terms: dict = field(default_factory=dict)  # position -> [(T, RegionModule)]

    @property
    def length(self) -> int:
        return len(self.ideal.generators)

    def sign(self, T: tuple, T_big: tuple) -> int:
        """Coefficient of the map M_T -> M_{T_big}: 0 unless T is T_big minus one index."""
        if len(T_big) != len(T) + 1 or not set(T) <= set(T_big):
            return 0
        (j,) = set(T_big) - set(T)
        return _sign(T_big, j)

    def strand(self, mu: Sequence[int]):
        """Bases (nonzero terms at mu) per position and the differential matrices."""
        mu = tuple(mu)
        bases = {q: [T for T, M in self.terms[q] if M.contains(mu)] for q in self.terms}
        mats = {}
        for q in range(-1, self.length + 1):
            src = bases.get(q, [])
            dst = bases.get(q + 1, [])
            mats[q] = [[self.sign(T, Tb) for T in src] for Tb in dst]
        return bases, mats


def cech_complex(I: MonomialIdeal, ambient: RegionModule) -> CechComplex:
    L0 = _localization_axes(ambient)
    if I.n != ambient.n:
        raise InputError("ideal and ambient disagree on n")
    sup = I.supports()
    cx = CechComplex(I, ambient)
    for q in range(len(sup) + 1):
        lst = []
        for T in itertools.combinations(range(len(sup)), q):
            L = L0.union(*(sup[j] for j in T))
            M = make_module("localized", I.n, ambient.char, ambient.shift, [v + 1 for v in sorted(L)])
            M = RegionModule(M.n, M.char, M.rules, ambient.shift, ambient.base_shift, M.kind, M.vars)
            lst.append((T, M))
        cx.terms[q] = lst
    return cx


@dataclass(frozen=True)
class StrandResult:
    dim: int
    representatives: list  # list of {T: FieldScalar}
    kernel_dim: int
    image_dim: int


def strand_cohomology(cx: CechComplex, i: int, mu: Sequence[int]) -> StrandResult:
    """H^i of the strand of ``cx`` at ``mu`` with explicit cocycles."""
    ch = cx.ambient.char
    bases, mats = cx.strand(mu)
    basis = bases.get(i, [])
    d_in = mats.get(i - 1, [])
    d_out = mats.get(i, [])
    dim = len(basis)
    Z = linalg.nullspace(d_out, ch, dim) if d_out else linalg.nullspace([], ch, dim)
    B = linalg.column_basis(d_in, ch, dim) if d_in and d_in[0] else []
    _, reps = linalg.quotient_basis(Z, B, dim, ch)
    out = [{T: FieldScalar(v, ch) for T, v in zip(basis, vec) if v} for vec in reps]
    return StrandResult(len(reps), out, len(Z), len(B))


# iterated engine ------------------------------------------------------------------------


@dataclass
class _Space:
    dim: int
    layout: list  # [(U, L_U, size, offset)]; None at stage 0
    wdim: int
    reps: list
    nbound: int
    solver: linalg.ColumnSolver | None

    def coords(self, z):
        if self.solver is None:  # stage 0
            return list(z)
        return self.solver.solve(z)[self.nbound:]


class CechEngine:
    """Iterated Cech cohomology strands with memoized spaces and maps."""

    def __init__(self, spec: CechSpec, char: CharSpec = QQ, base_axes: frozenset = frozenset()):
        self.spec = spec
        self.n = spec.n
        self.char = char
        self.base_axes = frozenset(base_axes)
        self._stages = [(I.supports(), i) for I, i in spec.stages]
        self._spaces: dict = {}
        self._loc: dict = {}
        self._restrict: dict = {}
        self._regions: dict = {}

    @property
    def depth(self) -> int:
        return len(self._stages)

    # spaces --------------------------------------------------------------

    def _layout(self, k: int, L: frozenset, N: frozenset, q: int):
        sup, _ = self._stages[k - 1]
        out, off = [], 0
        if q < 0 or q > len(sup):
            return out, 0
        for U in itertools.combinations(range(len(sup)), q):
            LU = L.union(*(sup[j] for j in U))
            size = self.space(k - 1, LU, N).dim
            out.append((U, LU, size, off))
            off += size
        return out, off

    def _differential(self, k, L, N, q):
        ch = self.char
        src, sdim = self._layout(k, L, N, q)
        dst, ddim = self._layout(k, L, N, q + 1)
        mat = linalg.zeros(ddim, sdim)
        where = {U: (LU, size, off) for U, LU, size, off in src}
        for Ub, LUb, bsize, boff in dst:
            if not bsize:
                continue
            for j in Ub:
                U = tuple(v for v in Ub if v != j)
                LU, size, off = where[U]
                if not size:
                    continue
                blk = self.loc(k - 1, LU, LUb, N)
                s = _sign(Ub, j)
                for r in range(bsize):
                    for c in range(size):
                        v = blk[r][c]
                        if v:
                            mat[boff + r][off + c] = ch.reduce(s * v)
        return mat, sdim, ddim

    def space(self, k: int, L: frozenset, N: frozenset) -> _Space:
        key = (k, L, N)
        sp = self._spaces.get(key)
        if sp is not None:
            return sp
        if k == 0:
            dim = 1 if N <= L else 0
            sp = _Space(dim, None, 1, [[1]] if dim else [], 0, None)
        else:
            ch = self.char
            _, i = self._stages[k - 1]
            layout, wdim = self._layout(k, L, N, i)
            d_out, _, ddim = self._differential(k, L, N, i)
            d_in, sdim, _ = self._differential(k, L, N, i - 1)
            Z = linalg.nullspace(d_out if ddim else [], ch, wdim)
            B = linalg.column_basis(d_in, ch, wdim) if sdim and wdim else []
            bbasis, reps = linalg.quotient_basis(Z, B, wdim, ch)
            solver = linalg.ColumnSolver(bbasis + reps, wdim, ch)
            sp = _Space(len(reps), layout, wdim, reps, len(bbasis), solver)
        self._spaces[key] = sp
        return sp

    # maps ----------------------------------------------------------------

    def _blockwise(self, k, src: _Space, dst: _Space, block_map):
        """Matrix of the map induced on cohomology by per-block maps."""
        ch = self.char
        cols = []
        dst_off = {U: (size, off) for U, _, size, off in dst.layout}
        for rep in src.reps:
            z = [0] * dst.wdim
            for U, LU, size, off in src.layout:
                if not size:
                    continue
                part = rep[off:off + size]
                if not any(part):
                    continue
                blk = block_map(U, LU)
                dsize, doff = dst_off[U]
                img = linalg.matvec(blk, part, ch)
                for r in range(dsize):
                    if img[r]:
                        z[doff + r] = ch.add(z[doff + r], img[r])
            cols.append(dst.coords(z))
        return [[cols[c][r] for c in range(len(cols))] for r in range(dst.dim)]

    def loc(self, k: int, L: frozenset, L2: frozenset, N: frozenset):
        """Localization V_k(L) -> V_k(L2) at sign pattern N (L a subset of L2)."""
        key = (k, L, L2, N)
        m = self._loc.get(key)
        if m is not None:
            return m
        src, dst = self.space(k, L, N), self.space(k, L2, N)
        if k == 0:
            m = [[1] * src.dim for _ in range(dst.dim)]
        elif L == L2:
            m = linalg.identity(src.dim)
        else:
            extra = L2 - L
            m = self._blockwise(k, src, dst, lambda U, LU: self.loc(k - 1, LU, LU | extra, N))
        self._loc[key] = m
        return m

    def restrict(self, k: int, L: frozenset, N: frozenset, N2: frozenset):
        """Map V_k(L) at pattern N -> pattern N2 (N2 subset of N) induced by
        the identity on monomials: multiplication by x_i when mu_i = -1."""
        key = (k, L, N, N2)
        m = self._restrict.get(key)
        if m is not None:
            return m
        src, dst = self.space(k, L, N), self.space(k, L, N2)
        if N == N2:
            m = linalg.identity(src.dim)
        elif k == 0:
            m = [[1] * src.dim for _ in range(dst.dim)]
        else:
            m = self._blockwise(k, src, dst, lambda U, LU: self.restrict(k - 1, LU, N, N2))
        self._restrict[key] = m
        return m

    def _region(self, L: frozenset) -> RegionModule:
        M = self._regions.get(L)
        if M is None:
            M = self._regions[L] = make_module("localized", self.n, self.char, 0, [v + 1 for v in sorted(L)])
        return M

    def operator(self, k: int, L: frozenset, mu: tuple, A: DOp):
        """Matrix of A: V_k(L)_mu -> V_k(L)_{mu + delta}, A of multidegree delta.

        Stage 0 applies :func:`region.act` on the localized ambient; higher
        stages act blockwise on cocycle representatives.
        """
        delta = _multidegree(A)
        mu2 = tuple(m + d for m, d in zip(mu, delta))
        N, N2 = _neg(mu), _neg(mu2)
        src, dst = self.space(k, L, N), self.space(k, L, N2)
        if k == 0:
            if not src.dim or not dst.dim:
                return [[0] * src.dim for _ in range(dst.dim)]
            img = act(A, self._region(L).monomial(mu))
            return [[img.support.get(mu2, 0)]]
        return self._blockwise(k, src, dst, lambda U, LU: self.operator(k - 1, LU, mu, A))

    def flatten(self, k: int, L: frozenset, N: frozenset, vec) -> dict:
        """Cocycle as {(U_k, ..., U_1): raw} over innermost monomial terms."""
        ch = self.char
        if k == 0:
            return {(): vec[0]} if vec and vec[0] else {}
        sp = self.space(k, L, N)
        out: dict = {}
        for U, LU, size, off in sp.layout:
            inner = self.space(k - 1, LU, N)
            for j in range(size):
                c = vec[off + j]
                if not c:
                    continue
                for chain, v in self.flatten(k - 1, LU, N, inner.reps[j]).items():
                    key = (U,) + chain
                    out[key] = ch.add(out.get(key, 0), ch.mul(c, v))
        return {k_: v for k_, v in out.items() if v}


def _multidegree(A: DOp) -> tuple:
    degs = {tuple(a - b for a, b in zip(alpha, beta)) for alpha, beta in A.terms()}
    if len(degs) != 1:
        raise InputError("operator must be Z^n-homogeneous to act on a strand")
    return degs.pop()


# computed modules -----------------------------------------------------------------------


def box_points(box) -> list:
    return [tuple(p) for p in itertools.product(*(range(lo, hi + 1) for lo, hi in box))]


@dataclass
class LCModule:
    """Iterated local cohomology restricted to a finite multidegree box."""

    spec: CechSpec
    char: CharSpec
    box: tuple
    shift: int
    dims: dict
    x_action: dict  # (mu, i) -> matrix dims[mu + e_i] x dims[mu]
    engine: CechEngine = field(repr=False)
    base_axes: frozenset = frozenset()

    @property
    def n(self) -> int:
        return self.spec.n

    def in_box(self, mu) -> bool:
        return all(lo <= m <= hi for m, (lo, hi) in zip(mu, self.box))

    def total_degree(self, mu) -> int:
        return sum(mu) - self.shift

    def pieces(self) -> list:
        """Nonzero (mu, dim) in lexicographic order."""
        return [(mu, d) for mu, d in sorted(self.dims.items()) if d]

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def representatives(self, mu) -> list:
        """Basis of the piece at mu as flattened cocycles {chain: FieldScalar}."""
        mu = tuple(mu)
        k = self.engine.depth
        N = _neg(mu)
        sp = self.engine.space(k, self.base_axes, N)
        return [{c: FieldScalar(v, self.char) for c, v in self.engine.flatten(k, self.base_axes, N, rep).items()}
                for rep in sp.reps]

    def operator_matrix(self, A: DOp, mu) -> list:
        return self.engine.operator(self.engine.depth, self.base_axes, tuple(mu), A)


def iterated_local_cohomology(spec: CechSpec, box, ambient: RegionModule | None = None,
                              char: CharSpec | None = None) -> LCModule:
    """H^{i_1}_{J_1}(... H^{i_s}_{J_s}(ambient)) on every multidegree in ``box``."""
    n = spec.n
    if ambient is None:
        ambient = make_module("R", n, char or QQ)
    if ambient.n != n:
        raise InputError("spec and ambient disagree on n")
    if char is not None and char != ambient.char:
        raise InputError("characteristic mismatch between ambient and request")
    box = tuple((int(lo), int(hi)) for lo, hi in box)
    if len(box) != n:
        raise InputError(f"box has {len(box)} axes, expected {n}")
    if any(lo > hi for lo, hi in box):
        raise InputError(f"empty box {box}")
    L0 = _localization_axes(ambient)
    eng = CechEngine(spec, ambient.char, L0)
    k = eng.depth
    dims, xs = {}, {}
    for mu in box_points(box):
        dims[mu] = eng.space(k, L0, _neg(mu)).dim
    for mu in dims:
        for i in range(n):
            nu = mu[:i] + (mu[i] + 1,) + mu[i + 1:]
            if nu in dims:
                xs[(mu, i)] = eng.restrict(k, L0, _neg(mu), _neg(nu))
    return LCModule(spec, ambient.char, box, ambient.total_shift, dims, xs, eng, L0)


def local_cohomology(I: MonomialIdeal, i: int, ambient: RegionModule, box) -> LCModule:
    return iterated_local_cohomology(CechSpec(((I, i),)), box, ambient)


# socle, decomposition, Hilbert table ---------------------------------------------------


@dataclass(frozen=True)
class SoclePiece:
    mu: tuple
    dim: int
    total_degree: int


def socle(L: LCModule) -> list:
    """Joint kernel of the x_i-actions at every interior multidegree."""
    out = []
    for mu, d in L.pieces():
        if not all((mu, i) in L.x_action for i in range(L.n)):
            continue
        stacked = [row for i in range(L.n) for row in L.x_action[(mu, i)]]
        k = d - linalg.rank(stacked, L.char) if stacked else d
        if k:
            out.append(SoclePiece(mu, k, L.total_degree(mu)))
    return out


def socle_excluded(L: LCModule) -> list:
    """Nonzero pieces on the upper box boundary, where the socle is not decided."""
    return [mu for mu, _ in L.pieces() if not all((mu, i) in L.x_action for i in range(L.n))]


@dataclass(frozen=True)
class Decomposition:
    verdict: str  # "copies" | "NotSupportedAtM" | "Mismatch"
    copies: int | None = None
    mu: tuple | None = None

    def __str__(self):
        if self.verdict == "copies":
            return f"copies({self.copies})"
        if self.verdict == "Mismatch":
            return f"Mismatch({self.mu})"
        return "NotSupportedAtM"


def decompose_as_E(L: LCModule) -> Decomposition:
    """Compare with the Hilbert pattern of *E(n)^c: dimension c exactly at mu <= -1."""
    n = L.n
    corner = (-1,) * n
    for mu, _ in L.pieces():
        if any(m >= 0 for m in mu):
            return Decomposition("NotSupportedAtM", None, mu)
    soc = socle(L)
    for piece in soc:
        if piece.mu != corner:
            return Decomposition("Mismatch", None, piece.mu)
    c = sum(p.dim for p in soc)
    if L.in_box(corner) and L.dims.get(corner, 0) and not all((corner, i) in L.x_action for i in range(n)):
        return Decomposition("Mismatch", None, corner)
    for mu, d in L.dims.items():
        want = c if all(m <= -1 for m in mu) else 0
        if d != want:
            return Decomposition("Mismatch", None, mu)
    return Decomposition("copies", c)


@dataclass(frozen=True)
class HilbertTable:
    rows: list  # [(mu, dim)] nonzero, lexicographic
    totals: dict  # total degree -> summed dimension

    def __len__(self):
        return len(self.rows)


def hilbert_box(L: LCModule) -> HilbertTable:
    rows = L.pieces()
    totals: dict = {}
    for mu, d in rows:
        t = L.total_degree(mu)
        totals[t] = totals.get(t, 0) + d
    return HilbertTable(rows, dict(sorted(totals.items(), reverse=True)))


# Eulerian transport on computed modules ------------------------------------------------


def lc_eulerian_witness(L: LCModule, r_max: int = 3, points=None):
    """First (mu, r) where E_r on the piece at mu is not binom(deg, r) * identity.

    E_r is applied to cocycle representatives through the ambient region
    action, then re-expressed in the piece basis.  Returns None if none.
    """
    from .weyl import euler_op

    ops = [euler_op(L.n, r, L.char) for r in range(1, r_max + 1)]
    ch = L.char
    for mu, d in (points if points is not None else L.pieces()):
        deg = L.total_degree(mu)
        for r, E in enumerate(ops, 1):
            mat = L.operator_matrix(E, mu)
            b = binom_raw(deg, r, ch)
            want = [[b if i == j else 0 for j in range(d)] for i in range(d)]
            if [[ch.reduce(v) for v in row] for row in mat] != want:
                return mu, r
    return None
