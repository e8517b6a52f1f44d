"""Hot loops over monomial boxes.

Two interchangeable backends:

* ``numba``  -- ``@njit`` kernels (parallel over monomials);
* ``numpy``  -- vectorized pure-numpy versions, also used for ``object``
  (big integer) tables that cannot be fed to numba.

Select with the environment variable ``EULERIAN_DMOD_BACKEND`` (``numba`` or
``numpy``) or at runtime with :func:`set_backend`.  Both backends return
identical integers; the benchmark in ``benchmarks/bench_kernels.py``
compares them.

All tables are produced by the exact integer path in :mod:`scalars`; the
kernels only add and multiply, reducing mod p when ``modulus > 0``.  In
characteristic 0 the caller must check :func:`fits_int64` first.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    # the TBB layer is often present but version-mismatched; workqueue always works
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER = "workqueue"
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_BACKEND = os.environ.get("EULERIAN_DMOD_BACKEND", "numba" if HAVE_NUMBA else "numpy").lower()
if _BACKEND not in ("numba", "numpy"):
    raise ValueError(f"EULERIAN_DMOD_BACKEND must be 'numba' or 'numpy', got {_BACKEND!r}")
if _BACKEND == "numba" and not HAVE_NUMBA:  # pragma: no cover
    _BACKEND = "numpy"

RULE_NONNEG, RULE_NEGONLY, RULE_ALLINT = 0, 1, 2


def get_backend() -> str:
    return _BACKEND


def set_backend(name: str) -> str:
    """Switch backend; returns the previous one."""
    global _BACKEND
    name = name.lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    prev, _BACKEND = _BACKEND, name
    return prev


def set_threads(k: int) -> None:
    if HAVE_NUMBA and k and k > 0:
        numba.set_num_threads(min(k, numba.config.NUMBA_NUM_THREADS))


def fits_int64(max_entry: int, n: int, r_max: int) -> bool:
    """True when an n-fold composition sum of table entries stays below 2**62."""
    from math import comb

    count = comb(n + r_max - 1, r_max) if n else 1
    return count * (r_max + 1) * max(1, max_entry) ** n < 2**62


# ---------------------------------------------------------------------------
# Euler coefficients: out[m, r] = sum_{|i|=r} prod_k tab[exps[m,k] + off, i_k]
# ---------------------------------------------------------------------------


def _euler_coeffs_numpy(exps, tab, offset, r_max, modulus):
    m, n = exps.shape
    dtype = tab.dtype
    acc = np.zeros((m, r_max + 1), dtype=dtype)
    acc[:, 0] = 1
    for k in range(n):
        row = tab[exps[:, k] + offset]  # (m, R+1)
        new = np.zeros_like(acc)
        for r in range(r_max + 1):
            s = acc[:, r : r + 1] * row[:, : r_max + 1 - r]
            new[:, r:] += s
            if modulus:
                new[:, r:] %= modulus
        acc = new
    return acc


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _euler_coeffs_numba(exps, tab, offset, r_max, modulus):
        m, n = exps.shape
        out = np.zeros((m, r_max + 1), dtype=np.int64)
        for t in prange(m):
            acc = np.zeros(r_max + 1, dtype=np.int64)
            new = np.zeros(r_max + 1, dtype=np.int64)
            acc[0] = 1
            for k in range(n):
                a = exps[t, k] + offset
                for r in range(r_max + 1):
                    s = 0
                    for j in range(r + 1):
                        s += acc[r - j] * tab[a, j]
                        if modulus:
                            s %= modulus
                    new[r] = s
                for r in range(r_max + 1):
                    acc[r] = new[r]
            for r in range(r_max + 1):
                out[t, r] = acc[r]
        return out


def euler_coeffs(exps: np.ndarray, tab: np.ndarray, offset: int, r_max: int, modulus: int) -> np.ndarray:
    """E_r eigen-coefficient of every monomial row of ``exps`` for r = 0..r_max."""
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    if exps.shape[0] == 0:
        return np.zeros((0, r_max + 1), dtype=tab.dtype)
    if _BACKEND == "numba" and tab.dtype == np.int64:
        return _euler_coeffs_numba(exps, tab, int(offset), int(r_max), int(modulus))
    return _euler_coeffs_numpy(exps, tab, offset, r_max, modulus)


# ---------------------------------------------------------------------------
# Frobenius battery: induced (digit-split) action vs direct action
# ---------------------------------------------------------------------------


def _in_region_np(tgt, rules):
    ok = np.ones(tgt.shape[:-1], dtype=bool)
    for i, rule in enumerate(rules):
        if rule == RULE_NONNEG:
            ok &= tgt[..., i] >= 0
        elif rule == RULE_NEGONLY:
            ok &= tgt[..., i] <= -1
    return ok


def _frob_battery_numpy(exps, rules, alphas, betas, tab, offset, p, pe):
    m, n = exps.shape
    kb = betas.shape[0]
    bad_total = 0
    first = (-1, -1, -1)
    ys = np.mod(exps, pe)
    ws = (exps - ys) // pe
    cd = np.ones((m, kb), dtype=np.int64)
    ci = np.ones((m, kb), dtype=np.int64)
    for i in range(n):
        cd = cd * tab[exps[:, None, i] + offset, betas[None, :, i]] % p
        ci = ci * tab[ys[:, None, i] + offset, betas[None, :, i]] % p
    for ia in range(alphas.shape[0]):
        alpha = alphas[ia]
        tgt_d = exps[:, None, :] - betas[None, :, :] + alpha[None, None, :]
        tgt_i = (ys[:, None, :] - betas[None, :, :] + alpha[None, None, :]) + pe * ws[:, None, :]
        vd = np.where(_in_region_np(tgt_d, rules), cd, 0)
        vi = np.where(_in_region_np(tgt_i, rules), ci, 0)
        bad = (vd != vi) | ((vd != 0) & np.any(tgt_d != tgt_i, axis=-1))
        cnt = int(bad.sum())
        if cnt:
            t, b = np.argwhere(bad)[0]
            cand = (int(t), ia, int(b))
            if first[0] < 0 or cand < first:
                first = cand
        bad_total += cnt
    return bad_total, first


if HAVE_NUMBA:

    @njit(cache=True)
    def _in_region_nb(tgt, rules):
        for i in range(tgt.shape[0]):
            if rules[i] == 0 and tgt[i] < 0:
                return False
            if rules[i] == 1 and tgt[i] > -1:
                return False
        return True

    @njit(cache=True, parallel=True)
    def _frob_battery_numba(exps, rules, alphas, betas, tab, offset, p, pe):
        m, n = exps.shape
        ka = alphas.shape[0]
        kb = betas.shape[0]
        counts = np.zeros(m, dtype=np.int64)
        firsts = np.full((m, 2), -1, dtype=np.int64)
        for t in prange(m):
            y = np.empty(n, dtype=np.int64)
            w = np.empty(n, dtype=np.int64)
            td = np.empty(n, dtype=np.int64)
            ti = np.empty(n, dtype=np.int64)
            for i in range(n):
                a = exps[t, i]
                yi = a % pe
                if yi < 0:
                    yi += pe
                y[i] = yi
                w[i] = (a - yi) // pe
            for ia in range(ka):
                for b in range(kb):
                    cd = 1
                    ci = 1
                    for i in range(n):
                        cd = cd * tab[exps[t, i] + offset, betas[b, i]] % p
                        ci = ci * tab[y[i] + offset, betas[b, i]] % p
                        td[i] = exps[t, i] - betas[b, i] + alphas[ia, i]
                        ti[i] = (y[i] - betas[b, i] + alphas[ia, i]) + pe * w[i]
                    if not _in_region_nb(td, rules):
                        cd = 0
                    if not _in_region_nb(ti, rules):
                        ci = 0
                    bad = cd != ci
                    if not bad and cd != 0:
                        for i in range(n):
                            if td[i] != ti[i]:
                                bad = True
                    if bad:
                        if counts[t] == 0:
                            firsts[t, 0] = ia
                            firsts[t, 1] = b
                        counts[t] += 1
        return counts, firsts


def frob_battery(exps, rules, alphas, betas, tab, offset, p, pe):
    """Count (monomial, alpha, beta) triples where the two actions disagree.

    Returns (mismatch_count, first) with ``first`` the lexicographically
    first offending index triple (monomial, alpha, beta) or (-1, -1, -1).
    """
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    rules = np.ascontiguousarray(rules, dtype=np.int64)
    alphas = np.ascontiguousarray(alphas, dtype=np.int64)
    betas = np.ascontiguousarray(betas, dtype=np.int64)
    if exps.shape[0] == 0 or betas.shape[0] == 0 or alphas.shape[0] == 0:
        return 0, (-1, -1, -1)
    if _BACKEND == "numba":
        counts, firsts = _frob_battery_numba(exps, rules, alphas, betas, tab, int(offset), int(p), int(pe))
        total = int(counts.sum())
        if not total:
            return 0, (-1, -1, -1)
        t = int(np.flatnonzero(counts)[0])
        return total, (t, int(firsts[t, 0]), int(firsts[t, 1]))
    return _frob_battery_numpy(exps, rules, alphas, betas, tab, offset, p, pe)
