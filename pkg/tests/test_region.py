import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerian_dmod.region import (
    AxisRule,
    ModElem,
    act,
    dmod_m_act,
    dmod_m_map,
    dmod_m_to_starE,
    format_module,
    is_eulerian_witness,
    make_module,
)
from eulerian_dmod.scalars import QQ, CharSpec, InputError, binom_int
from eulerian_dmod.weyl import DOp, dop_apply, dop_mul, euler_op
from oracles import localization_contains
from strategies import CHARS, dops

KINDS = [("R", ()), ("localized", (1,)), ("localized", (1, 2)), ("starE", ()), ("starE_model", (1,)),
         ("starE_model", (2,))]


def all_modules(n, ch):
    out = [make_module("R", n, ch), make_module("starE", n, ch)]
    for k in range(1, n + 1):
        for S in itertools.combinations(range(1, n + 1), k):
            out.append(make_module("localized", n, ch, 0, S))
            out.append(make_module("starE_model", n, ch, 0, S))
    return out


def test_degree_conventions():
    E = make_module("starE", 2)
    assert E.degree((-1, -1)) == 0
    assert make_module("starE", 3, QQ, 3).degree((-1, -1, -1)) == -3
    assert make_module("R", 2).degree((1, 1)) == 2


def test_act_examples():
    R = make_module("R", 2)
    z = R.monomial((2, 1))
    assert act(euler_op(2, 2), z) == z.scale(3)
    E = make_module("starE", 2)
    assert act(DOp.x(2, 1), E.monomial((-1, -1))).is_zero()
    L = make_module("localized", 1, QQ, 0, [1])
    assert act(DOp.d(1, 1), L.monomial((-1,))) == L.monomial((-2,), -1)


def test_out_of_region_rejected():
    with pytest.raises(InputError):
        make_module("R", 2).monomial((-1, 0))
    with pytest.raises(InputError):
        make_module("starE", 1).monomial((0,))


def test_shift_composes():
    M = make_module("R", 2, QQ, 1)
    assert M.shifted(2).shifted(-5).shift == -2
    assert M.shifted(3).degree((1, 1)) == 2 - 4


@pytest.mark.parametrize("kind,vars_", KINDS)
def test_region_rules(kind, vars_):
    M = make_module(kind, 2, QQ, 0, vars_)
    for a in itertools.product(range(-3, 4), repeat=2):
        if kind in ("R", "localized"):
            assert M.contains(a) == localization_contains(a, {v - 1 for v in vars_})


def test_format_module():
    assert format_module(make_module("localized", 3, QQ, 0, [1, 3])) == "R_loc{x1,x3}"
    assert format_module(make_module("starE_model", 3, QQ, 2, [2])) == "starE_model{x2}(shift=2)"


# Eulerian checks --------------------------------------------------------------------------


def test_R_eulerian_char0():
    v = is_eulerian_witness(make_module("R", 2), [(-4, 4)] * 2, 5)
    assert v.eulerian and v.checked == 25


def test_R_shift_one_witness():
    v = is_eulerian_witness(make_module("R", 2, QQ, 1), [(-6, 2)] * 2)
    assert not v.eulerian
    w = v.witness
    assert (w.alpha, w.r, w.lhs, w.rhs) == ((0, 0), 1, 0, -1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_R_shift_p_witness_at_r_p(p):
    ch = CharSpec(p)
    M = make_module("R", 2, ch, p)
    v = is_eulerian_witness(M, [(0, 4)] * 2, p)
    assert not v.eulerian and v.witness.r == p
    assert is_eulerian_witness(M, [(0, 4)] * 2, p - 1).eulerian


@pytest.mark.parametrize("n", [1, 2, 3])
def test_starE_eulerian_at_shift_n(n):
    assert is_eulerian_witness(make_module("starE", n, QQ, n), [(-5, 1)] * n).eulerian
    assert not is_eulerian_witness(make_module("starE", n, QQ, 0), [(-5, 1)] * n).eulerian


@pytest.mark.parametrize("ch", CHARS, ids=str)
def test_methods_agree(ch, backend):
    for M in all_modules(2, ch):
        for shift in (-1, 0, 2):
            Ms = M.with_shift(shift)
            box = [(-3, 3)] * 2
            methods = ["kernel", "act"] + (["fast"] if not ch.p else [])
            verdicts = [is_eulerian_witness(Ms, box, 4, m) for m in methods]
            ws = {(v.eulerian, None if v.witness is None else (v.witness.alpha, v.witness.r)) for v in verdicts}
            assert len(ws) == 1, (Ms, verdicts)


def test_fast_path_rejected_in_char_p():
    with pytest.raises(InputError):
        is_eulerian_witness(make_module("R", 1, CharSpec(2)), [(0, 2)], 2, "fast")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CHARS), st.integers(-3, 3), st.integers(-4, 0), st.integers(0, 4))
def test_box_stability(ch, shift, lo, hi):
    # a sub-box never sees a witness the big box missed, and witnesses inside it persist
    M = make_module("localized", 2, ch, shift, [1])
    big = is_eulerian_witness(M, [(-4, 4)] * 2, 4)
    small = is_eulerian_witness(M, [(lo, hi)] * 2, 4)
    if big.eulerian:
        assert small.eulerian
    if not small.eulerian:
        assert not big.eulerian


# module axioms -----------------------------------------------------------------------------


@pytest.mark.parametrize("ch", CHARS, ids=str)
@pytest.mark.parametrize("n", [1, 2])
def test_commutation_on_every_region(ch, n):
    for M in all_modules(n, ch):
        for i in range(1, n + 1):
            xi = DOp.x(n, i, 1, ch)
            for s in range(1, 5):
                ds, ds1 = DOp.d(n, i, s, ch), DOp.d(n, i, s - 1, ch)
                for a in M.basis_in_box([(-3, 3)] * n):
                    z = M.monomial(a)
                    assert act(ds, act(xi, z)) == act(xi, act(ds, z)) + act(ds1, z)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CHARS), st.sampled_from(KINDS), st.data())
def test_action_is_associative(ch, kind, data):
    n = 2
    M = make_module(kind[0], n, ch, 0, kind[1])
    A = data.draw(dops(n, ch, max_terms=2, hi=2))
    B = data.draw(dops(n, ch, max_terms=2, hi=2))
    basis = M.basis_in_box([(-3, 3)] * n)
    a = data.draw(st.sampled_from(basis))
    z = M.monomial(a)
    assert act(dop_mul(A, B), z) == act(A, act(B, z))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CHARS), st.sampled_from(KINDS), st.data())
def test_act_matches_laurent_truncation(ch, kind, data):
    # localizations: plain Laurent action; NegOnly axes: quotient by the terms that leave them
    n = 2
    M = make_module(kind[0], n, ch, 0, kind[1])
    A = data.draw(dops(n, ch))
    a = data.draw(st.sampled_from(M.basis_in_box([(-3, 3)] * n)))
    full = dop_apply(A, {a: 1})
    want = {b: c for b, c in full.items() if M.contains(b)}
    assert act(A, M.monomial(a)).support == want


# D/Dm and *E ---------------------------------------------------------------------------------


def test_dmod_m_examples():
    z0 = dmod_m_to_starE((0, 0))
    assert z0.support == {(-1, -1): 1} and z0.degree() == 0
    z1 = dmod_m_to_starE((1, 0))
    assert z1.support == {(-2, -1): -1} and z1.degree() == -1
    assert act(DOp.x(2, 1), z1) == z0.scale(-1)


@pytest.mark.parametrize("ch", CHARS, ids=str)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_dmod_m_intertwines(ch, n):
    betas = [b for b in itertools.product(range(6), repeat=n) if sum(b) <= 5]
    gens = [DOp.x(n, i, 1, ch) for i in range(1, n + 1)]
    gens += [DOp.d(n, i, j, ch) for i in range(1, n + 1) for j in (1, 2, 3)]
    for beta in betas:
        img = dmod_m_to_starE(beta, ch)
        assert img.degree() == -sum(beta)
        for A in gens:
            assert dmod_m_map(dmod_m_act(A, beta), n, ch) == act(A, img)
