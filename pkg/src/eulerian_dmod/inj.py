"""Graded injective hulls of monomial primes: a-invariants and Eulerian shifts.

For P = (x_i : i in P) with h = |P| the hull *E(R/P) is realized by the
region module ``starE_model{P}``.  The degree bookkeeping rests on two
numbers computed from local cohomology: the a-invariant of R/P (top
cohomology of the complementary polynomial ring) and the lowest degree of
an element of H^h_P(R) killed by P.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cech import MonomialIdeal, local_cohomology
from .region import RegionModule, is_eulerian_witness, make_module
from .scalars import QQ, CharSpec, InputError


@dataclass(frozen=True)
class MonomialPrime:
    """The prime generated by x_i for i in ``vars`` (1-based)."""

    n: int
    vars: tuple

    def __post_init__(self):
        vs = tuple(sorted(set(int(v) for v in self.vars)))
        if any(v < 1 or v > self.n for v in vs):
            raise InputError(f"prime variables {vs} out of range 1..{self.n}")
        object.__setattr__(self, "vars", vs)

    @property
    def h(self) -> int:
        return len(self.vars)

    @property
    def axes(self) -> tuple:
        return tuple(v - 1 for v in self.vars)

    def ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.n, tuple(tuple(int(j == i) for j in range(self.n)) for i in self.axes))

    def hull(self, char: CharSpec = QQ, shift: int = 0) -> RegionModule:
        return make_module("starE_model", self.n, char, shift, self.vars)

    def __str__(self):
        return "(" + ", ".join(f"x{v}" for v in self.vars) + ")" if self.vars else "(0)"


def _default_box(n: int, dims: int) -> list:
    return [(-(n + 3), 1)] * dims


def a_invariant(P: MonomialPrime, char: CharSpec = QQ, box=None) -> int:
    """Top nonzero degree of H^d_m(R/P), d = n - h, read off a box computation.

    R/P is a polynomial ring in the d variables outside P, so the module is
    computed there.  Returns 0 when P is maximal (R/P is the field).
    """
    d = P.n - P.h
    if d == 0:
        return 0
    ring = make_module("R", d, char)
    lc = local_cohomology(MonomialIdeal.maximal(d), d, ring, box or _default_box(P.n, d))
    degs = [lc.total_degree(mu) for mu, _ in lc.pieces()]
    if not degs:
        raise InputError("top local cohomology vanished on the box; enlarge it")
    return max(degs)


def ann_min_degree(P: MonomialPrime, char: CharSpec = QQ, box=None) -> int:
    """Least degree of a nonzero element of H^h_P(R) annihilated by P."""
    if P.h == 0:
        raise InputError("the zero prime has no local cohomology of this kind")
    n = P.n
    lc = local_cohomology(P.ideal(), P.h, make_module("R", n, char), box or _default_box(n, n))
    from .linalg import rank

    best = None
    for mu, d in lc.pieces():
        keys = [(mu, i) for i in P.axes]
        if not all(k in lc.x_action for k in keys):
            continue
        stacked = [row for k in keys for row in lc.x_action[k]]
        if d - rank(stacked, lc.char) > 0:
            t = lc.total_degree(mu)
            best = t if best is None else min(best, t)
    if best is None:
        raise InputError("no P-torsion element found on the box; enlarge it")
    return best


@dataclass(frozen=True)
class ShiftVerdict:
    kind: str  # "Unique" | "None" | "MultipleWithinRange"
    shift: int | None
    passing: tuple

    def __str__(self):
        if self.kind == "Unique":
            return f"Unique({self.shift})"
        if self.kind == "None":
            return "None"
        return "MultipleWithinRange(" + ", ".join(map(str, self.passing)) + ")"


def eulerian_shift(M: RegionModule, candidates: Sequence[int], box=None,
                   r_max: int | None = None) -> ShiftVerdict:
    """Which shifts k make ``M`` (with its shift replaced by k) Eulerian on the box."""
    if box is None:
        box = [(-3, 3)] * M.n
    passing = tuple(k for k in candidates
                    if is_eulerian_witness(M.with_shift(int(k)), box, r_max).eulerian)
    if not passing:
        return ShiftVerdict("None", None, ())
    if len(passing) == 1:
        return ShiftVerdict("Unique", passing[0], passing)
    return ShiftVerdict("MultipleWithinRange", None, passing)


@dataclass(frozen=True)
class Bijectivity:
    injective: bool
    surjective: bool
    counterexample: tuple | None = None

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def x_action_bijectivity(M: RegionModule, i: int, box) -> Bijectivity:
    """Injectivity and surjectivity of multiplication by x_i (1-based) on box-interior monomials.

    Monomials map to monomials, so x_i is injective where no basis monomial
    is pushed out of the region, and surjective where every basis monomial
    has a region preimage.
    """
    if not 1 <= i <= M.n:
        raise InputError(f"axis {i} out of range 1..{M.n}")
    ax = i - 1
    box = [tuple(b) for b in box]
    lo, hi = box[ax]
    inj, sur, cex = True, True, None
    for a in M.basis_in_box(box):
        if a[ax] < hi:
            up = a[:ax] + (a[ax] + 1,) + a[ax + 1:]
            if not M.contains(up):
                inj = False
                cex = cex or ("kernel", a)
        if a[ax] > lo:
            down = a[:ax] + (a[ax] - 1,) + a[ax + 1:]
            if not M.contains(down):
                sur = False
                cex = cex or ("cokernel", a)
    return Bijectivity(inj, sur, cex)
