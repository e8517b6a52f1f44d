import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerian_dmod.cech import (
    CechSpec,
    MonomialIdeal,
    cech_complex,
    decompose_as_E,
    hilbert_box,
    iterated_local_cohomology,
    lc_eulerian_witness,
    local_cohomology,
    socle,
    strand_cohomology,
)
from eulerian_dmod.parse import parse_ideal, parse_spec
from eulerian_dmod.region import make_module
from eulerian_dmod.scalars import QQ, CharSpec, InputError
import oracles


def squarefree_ideals(n, max_gens=3):
    monos = [m for m in itertools.product((0, 1), repeat=n) if any(m)]
    out = []
    for k in range(1, max_gens + 1):
        for gens in itertools.combinations(monos, k):
            out.append(MonomialIdeal(n, gens))
    return out


def supports(I):
    return [set(s) for s in I.supports()]


def test_complex_shapes():
    cx = cech_complex(MonomialIdeal(1, ((1,),)), make_module("R", 1))
    assert [len(cx.terms[q]) for q in (0, 1)] == [1, 1]
    cx2 = cech_complex(MonomialIdeal.maximal(2), make_module("R", 2))
    assert [len(cx2.terms[q]) for q in (0, 1, 2)] == [1, 2, 1]
    assert [str(M) for _, M in cx2.terms[1]] == ["R_loc{x1}", "R_loc{x2}"]


def test_strand_examples():
    cx = cech_complex(MonomialIdeal(1, ((1,),)), make_module("R", 1))
    assert strand_cohomology(cx, 1, (-1,)).dim == 1
    assert strand_cohomology(cx, 1, (0,)).dim == 0
    cx2 = cech_complex(MonomialIdeal.maximal(2), make_module("R", 2))
    assert strand_cohomology(cx2, 2, (-1, -1)).dim == 1


def test_localization_collapse():
    # (R_x1 / R) localized at x1 vanishes: H^1_m H^1_(x1) has nothing at mu_1 >= 0
    L = iterated_local_cohomology(parse_spec("H0_(x1) H1_(x1)(R)", 1), [(-4, 3)])
    assert L.pieces() == [((m,), 1) for m in range(-4, 0)]
    L1 = iterated_local_cohomology(parse_spec("H1_(x1) H1_(x1)(R)", 1), [(-4, 3)])
    assert L1.is_zero()


def test_local_cohomology_examples():
    L = local_cohomology(MonomialIdeal(1, ((1,),)), 1, make_module("R", 1), [(-5, 5)])
    assert L.pieces() == [((m,), 1) for m in range(-5, 0)]
    H2 = local_cohomology(MonomialIdeal.maximal(2), 2, make_module("R", 2), [(-4, 2)] * 2)
    assert {mu for mu, _ in H2.pieces()} == {mu for mu in itertools.product(range(-4, 3), repeat=2)
                                             if max(mu) <= -1}
    assert local_cohomology(MonomialIdeal.maximal(2), 1, make_module("R", 2), [(-4, 2)] * 2).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_top_cohomology_pattern(n):
    L = iterated_local_cohomology(CechSpec(((MonomialIdeal.maximal(n), n),)), [(-3, 1)] * n)
    assert all(d == 1 for _, d in L.pieces())
    assert {mu for mu, _ in L.pieces()} == {mu for mu in L.dims if max(mu) <= -1}
    assert str(decompose_as_E(L)) == "copies(1)"
    soc = socle(L)
    assert [(p.mu, p.dim, p.total_degree) for p in soc] == [((-1,) * n, 1, -n)]


def test_two_stage_example():
    L = iterated_local_cohomology(parse_spec("H1_m H1_(x1)(R)", 2), [(-6, 2)] * 2)
    assert {mu for mu, _ in L.pieces()} == {mu for mu in L.dims if max(mu) <= -1}
    assert str(decompose_as_E(L)) == "copies(1)"


def test_not_supported_at_m():
    L = local_cohomology(MonomialIdeal(2, ((1, 0),)), 1, make_module("R", 2), [(-4, 2)] * 2)
    assert decompose_as_E(L).verdict == "NotSupportedAtM"
    assert socle(L) == []


def test_hilbert_examples():
    H = hilbert_box(local_cohomology(MonomialIdeal.maximal(2), 2, make_module("R", 2), [(-3, 0)] * 2))
    assert len(H) == 9
    assert [H.totals[d] for d in (-2, -3, -4)] == [1, 2, 3]
    empty = hilbert_box(local_cohomology(MonomialIdeal.maximal(2), 1, make_module("R", 2), [(-3, 0)] * 2))
    assert len(empty) == 0 and empty.totals == {}


def test_x_action_shapes():
    L = iterated_local_cohomology(parse_spec("H1_m H1_(x1*x2)(R)", 2), [(-3, 1)] * 2)
    for (mu, i), mat in L.x_action.items():
        nu = tuple(m + (k == i) for k, m in enumerate(mu))
        assert len(mat) == L.dims[nu]
        assert all(len(row) == L.dims[mu] for row in mat)


# oracles ----------------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_stage_matches_sympy_oracle(n):
    R = make_module("R", n)
    pats = list(itertools.product((-1, 0), repeat=n))
    for I in squarefree_ideals(n):
        sup = supports(I)
        cx = cech_complex(I, R)
        for i in range(len(sup) + 1):
            L = local_cohomology(I, i, R, [(-1, 0)] * n)
            for mu in pats:
                want = oracles.strand_dim(sup, i, mu)
                assert strand_cohomology(cx, i, mu).dim == want
                assert L.dims[mu] == want


def test_strand_depends_only_on_sign_pattern():
    I = MonomialIdeal(3, ((1, 1, 0), (0, 1, 1)))
    cx = cech_complex(I, make_module("R", 3))
    for i in range(3):
        seen = {}
        for mu in itertools.product(range(-3, 3), repeat=3):
            key = tuple(m < 0 for m in mu)
            d = strand_cohomology(cx, i, mu).dim
            assert seen.setdefault(key, d) == d


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.data())
def test_two_stage_matches_sympy_oracle(n, data):
    ideals = squarefree_ideals(n, 2)
    I = data.draw(st.sampled_from(ideals))
    J = data.draw(st.sampled_from([MonomialIdeal.maximal(n)] + ideals))
    i1 = data.draw(st.integers(0, len(I.generators)))
    i0 = data.draw(st.integers(0, len(J.generators)))
    L = iterated_local_cohomology(CechSpec(((I, i1), (J, i0))), [(-1, 0)] * n)
    for mu in itertools.product((-1, 0), repeat=n):
        assert L.dims[mu] == oracles.two_stage_dim(supports(J), i0, supports(I), i1, mu)


@pytest.mark.parametrize("i0", [0, 1, 2])
def test_socle_degrees_of_x1x2_stack(i0):
    L = iterated_local_cohomology(parse_spec(f"H{i0}_m H1_(x1*x2)(R)", 2), [(-4, 2)] * 2)
    for mu in L.dims:
        want = oracles.two_stage_dim([{0}, {1}], i0, [{0, 1}], 1, mu)
        assert L.dims[mu] == want
    assert all(p.total_degree == -2 for p in socle(L))


def test_localized_ambient():
    amb = make_module("localized", 2, QQ, 0, [1])
    # x1 is a unit in R_x1, so m-torsion vanishes entirely
    for i in range(3):
        assert local_cohomology(MonomialIdeal.maximal(2), i, amb, [(-3, 2)] * 2).is_zero()
    L = local_cohomology(MonomialIdeal(2, ((0, 1),)), 1, amb, [(-3, 2)] * 2)
    assert {mu for mu, _ in L.pieces()} == {mu for mu in L.dims if mu[1] <= -1}
    with pytest.raises(InputError):
        local_cohomology(MonomialIdeal.maximal(2), 1, make_module("starE", 2), [(-1, 0)] * 2)


@pytest.mark.parametrize("p", [2, 3])
def test_char_p_matches_char_0_dimensions(p):
    spec = parse_spec("H1_m H1_(x1*x2, x2*x3)(R)", 3)
    box = [(-2, 1)] * 3
    L0 = iterated_local_cohomology(spec, box)
    Lp = iterated_local_cohomology(spec, box, make_module("R", 3, CharSpec(p)))
    assert L0.dims == Lp.dims


def test_eulerian_transport():
    L = iterated_local_cohomology(parse_spec("H1_m H1_(x1)(R)", 2), [(-3, 1)] * 2)
    assert lc_eulerian_witness(L, 3) is None
    L2 = local_cohomology(MonomialIdeal.maximal(2), 2, make_module("R", 2), [(-3, 0)] * 2)
    assert lc_eulerian_witness(L2, 3) is None


def test_spec_validation():
    with pytest.raises(InputError):
        CechSpec(())
    with pytest.raises(InputError):
        CechSpec(((MonomialIdeal.maximal(2), 1), (MonomialIdeal.maximal(3), 1)))
    with pytest.raises(InputError):
        MonomialIdeal(2, ((0, 0),))
