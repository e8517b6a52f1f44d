import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from eulerian_dmod import _kernels
from eulerian_dmod.region import euler_coefficient_table
from eulerian_dmod.scalars import QQ, CharSpec, binom_int, binom_table


def brute_coeffs(exps, r_max, p):
    out = []
    for row in exps:
        vals = []
        for r in range(r_max + 1):
            s = 0
            for comp in itertools.product(range(r + 1), repeat=len(row)):
                if sum(comp) == r:
                    prod = 1
                    for a, i in zip(row, comp):
                        prod *= binom_int(int(a), i)
                    s += prod
            vals.append(s % p if p else s)
        out.append(vals)
    return out


@pytest.mark.parametrize("ch", [QQ, CharSpec(2), CharSpec(3), CharSpec(5)], ids=str)
def test_euler_coeffs_brute(ch, backend):
    exps = np.array(list(itertools.product(range(-3, 4), repeat=2)), dtype=np.int64)
    got = euler_coefficient_table(exps, 5, ch)
    assert got.tolist() == brute_coeffs(exps, 5, ch.p)


def test_backends_agree_on_large_box():
    exps = np.array(list(itertools.product(range(-6, 7), repeat=3)), dtype=np.int64)
    res = {}
    for b in ("numpy", "numba"):
        prev = _kernels.set_backend(b)
        try:
            res[b] = euler_coefficient_table(exps, 8, CharSpec(3))
        finally:
            _kernels.set_backend(prev)
    assert np.array_equal(res["numpy"], res["numba"])


def test_overflow_guard_uses_big_ints(backend):
    exps = np.array([[60, 60, 60]], dtype=np.int64)
    got = euler_coefficient_table(exps, 40, QQ)
    assert got.dtype == object
    assert got[0, 40] == binom_int(180, 40)
    assert not _kernels.fits_int64(binom_int(60, 20), 3, 40)


def _battery_inputs(p, e, n=2, order=None):
    q = p**e
    exps = np.array(list(itertools.product(range(-4, 5), repeat=n)), dtype=np.int64)
    order = q if order is None else order
    betas = np.array([b for b in itertools.product(range(order + 1), repeat=n) if sum(b) < order], dtype=np.int64)
    alphas = np.array(list(itertools.product(range(2), repeat=n)), dtype=np.int64)
    tab = binom_table(-4, max(4, q), order, CharSpec(p))
    rules = np.array([_kernels.RULE_ALLINT, _kernels.RULE_NONNEG], dtype=np.int64)
    return exps, rules, alphas, betas, tab, 4, p, q


@pytest.mark.parametrize("p,e", [(2, 1), (2, 2), (3, 1)])
def test_battery_clean_below_p_e(p, e, backend):
    cnt, first = _kernels.frob_battery(*_battery_inputs(p, e))
    assert cnt == 0 and first == (-1, -1, -1)


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1)])
def test_battery_detects_order_p_e(p, e, backend):
    # an operator of order p^e is not linear over the p^e-th powers
    cnt, first = _kernels.frob_battery(*_battery_inputs(p, e, order=p**e + 1))
    assert cnt > 0 and first[0] >= 0


def test_battery_backends_agree():
    args = _battery_inputs(2, 1, order=3)
    out = []
    for b in ("numpy", "numba"):
        prev = _kernels.set_backend(b)
        try:
            out.append(_kernels.frob_battery(*args))
        finally:
            _kernels.set_backend(prev)
    assert out[0] == out[1]


def test_set_backend_validation():
    with pytest.raises(ValueError):
        _kernels.set_backend("cuda")


def test_env_selects_backend():
    env = dict(os.environ, EULERIAN_DMOD_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", "import eulerian_dmod as e; print(e.get_backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
