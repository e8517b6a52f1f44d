import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerian_dmod.cech import CechSpec, MonomialIdeal
from eulerian_dmod.parse import (
    ParseError,
    format_ideal,
    format_laurent,
    format_spec,
    parse_expression,
    parse_ideal,
    parse_laurent,
    parse_module,
    parse_operator,
    parse_spec,
)
from eulerian_dmod.region import RegionModule, format_module, make_module
from eulerian_dmod.scalars import QQ, CharSpec
from eulerian_dmod.weyl import DOp, euler_op
from strategies import CHARS, laurents


def test_examples():
    assert parse_expression("x1*d1 + x2*d2", 2) == euler_op(2, 1)
    A = parse_expression("x1^2*d1^[2]", 2)
    assert A.terms() == {((2, 0), (2, 0)): 1}
    I = parse_expression("x1*x2, x2^2", 3)
    assert isinstance(I, MonomialIdeal) and I.generators == ((1, 1, 0), (0, 2, 0))


def test_dispatch():
    assert isinstance(parse_expression("m", 2), MonomialIdeal)
    assert isinstance(parse_expression("R_loc{x1}(shift=2)", 2), RegionModule)
    assert isinstance(parse_expression("H2_m(R)", 2), CechSpec)
    assert isinstance(parse_expression("x1^-1*x2", 2, kind="laurent"), dict)


def test_whitespace_and_parens():
    assert parse_operator(" ( x1 + 1 ) * d1 ", 1) == parse_operator("x1*d1+d1", 1)
    assert parse_operator("d1^2", 1) == DOp.d(1, 1, 2).scale(2)
    assert parse_operator("-d1 + 1/2*x1", 1, CharSpec(3)) == parse_operator("2*d1 + 2*x1", 1, CharSpec(3))


@pytest.mark.parametrize("text,col", [("x1 + ", 6), ("x1 ? d1", 4), ("x3*d1", 1), ("x1*d1)", 6), ("d1^[2", 6)])
def test_errors_report_position(text, col):
    with pytest.raises(ParseError) as err:
        parse_operator(text, 2)
    assert err.value.line == 1 and err.value.column == col


def test_multiline_position():
    with pytest.raises(ParseError) as err:
        parse_operator("x1 +\n  d9", 2)
    assert (err.value.line, err.value.column) == (2, 3)


def test_division_by_p():
    with pytest.raises(ParseError):
        parse_operator("1/3*x1", 1, CharSpec(3))


def test_module_grammar():
    M = parse_module("starE_model{x1,x3}(shift=-2)", 3)
    assert M == make_module("starE_model", 3, QQ, -2, [1, 3])
    assert parse_module("R", 2) == make_module("R", 2)
    assert parse_module(" starE ", 2).kind == "starE"
    for bad in ("R_loc", "R{x1}", "starE_model{x4}", "S", "R(shift=x)"):
        with pytest.raises(ParseError):
            parse_module(bad, 3)


def test_ideal_grammar():
    assert parse_ideal("m", 3) == MonomialIdeal.maximal(3)
    assert parse_ideal("(x1*x2, x3)", 3) == parse_ideal("x1*x2,x3", 3)
    for bad in ("x1*", "x1,,x2", "x4", "y1"):
        with pytest.raises(ParseError):
            parse_ideal(bad, 3)


def test_spec_grammar():
    s = parse_spec("H0_m H1_(x1) H1_(x2*x3)(R)", 3)
    assert [i for _, i in s.stages] == [1, 1, 0]
    assert s.stages[0][0].generators == ((0, 1, 1),)
    assert parse_spec("H0_m(H1_(x1)(H1_(x2*x3)(R)))", 3) == s
    for bad in ("H2_m", "H_m(R)", "H1_q(R)", "H1_m(R) junk", "H1_m(H1_(x1)(R)"):
        with pytest.raises(ParseError):
            parse_spec(bad, 3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CHARS), st.integers(1, 3), st.data())
def test_laurent_roundtrip(ch, n, data):
    f = {k: ch.reduce(v) for k, v in data.draw(laurents(n)).items()}
    f = {k: v for k, v in f.items() if v != 0}
    assert parse_laurent(format_laurent(f, ch), n, ch) == f


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_ideal_and_spec_roundtrip(n, data):
    mono = st.tuples(*[st.integers(0, 2)] * n).filter(any)
    gens = data.draw(st.lists(mono, min_size=1, max_size=3))
    I = MonomialIdeal(n, tuple(gens))
    assert parse_ideal(format_ideal(I), n) == I
    stages = tuple((data.draw(st.sampled_from([I, MonomialIdeal.maximal(n)])), data.draw(st.integers(0, 3)))
                   for _ in range(data.draw(st.integers(1, 3))))
    spec = CechSpec(stages)
    assert parse_spec(format_spec(spec), n) == spec


@pytest.mark.parametrize("kind,vars_,shift", [("R", (), 0), ("localized", (2,), 1), ("starE", (), -3),
                                              ("starE_model", (1, 2), 4)])
def test_module_roundtrip(kind, vars_, shift):
    M = make_module(kind, 3, QQ, shift, vars_)
    assert parse_module(format_module(M), 3) == M
