import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from centralext.errors import (ArityMismatch, DuplicateSymbol, MissingBinding, ParseError,
                               UnknownSymbol)
from centralext.library import cyclic_group, groups_variety, symmetric_group
from centralext.termlang import (App, Var, eval_term, parse_identity, parse_signature, parse_term,
                                 rename, substitute, term_operation)

SIG = parse_signature("mul/2, inv/1, e/0")


def test_signature_transcription():
    assert SIG.as_dict() == {"mul": 2, "inv": 1, "e": 0}
    assert parse_signature("m/3").as_dict() == {"m": 3}


def test_duplicate_symbol():
    with pytest.raises(DuplicateSymbol):
        parse_signature("mul/2, mul/1")


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as ei:
        parse_signature("mul/2,\n inv 1")
    assert ei.value.line == 2


def test_parse_term_shapes():
    m = parse_signature("m/3")
    assert parse_term("m(x,x,y)", m) == App("m", (Var("x"), Var("x"), Var("y")))
    assert parse_term("e()", SIG) == App("e", ())
    assert parse_term("e", SIG) == App("e", ())


def test_term_errors():
    with pytest.raises(ArityMismatch):
        parse_term("mul(x)", SIG)
    with pytest.raises(UnknownSymbol):
        parse_term("foo(x)", SIG)
    with pytest.raises(ParseError):
        parse_term("mul(x,y", SIG)
    with pytest.raises(ParseError):
        parse_term("mul(x,y) z", SIG)
    with pytest.raises(ParseError):
        parse_term("mul(x,z)", SIG, variables=["x", "y"])


def test_identity_variables_collected():
    ax = parse_identity("mul(x,inv(x)) = e", SIG)
    assert ax.variables == ("x",)
    assert str(ax) == "mul(x,inv(x)) = e"


def test_eval_against_table():
    S3 = symmetric_group(3)
    t = parse_term("mul(x,inv(y))", SIG)
    mul, inv = S3.tables["mul"], S3.tables["inv"]
    for x in range(6):
        for y in range(6):
            assert eval_term(t, S3, {"x": x, "y": y}) == mul[x, inv[y]]
    with pytest.raises(MissingBinding):
        eval_term(t, S3, {"x": 0})


def test_term_operation_is_difference_term():
    # m(x,y,z) = x y^-1 z satisfies m(x,x,y) = y and m(x,y,y) = x
    Z4 = cyclic_group(4)
    V = groups_variety()
    m = term_operation(V.difference_term, Z4, ["x", "y", "z"])
    r = np.arange(4)
    assert (m[r[:, None], r[:, None], r[None, :]] == r[None, :]).all()
    assert (m[r[:, None], r[None, :], r[None, :]] == r[:, None]).all()


def test_substitute_and_rename():
    t = parse_term("mul(x,y)", SIG)
    assert str(rename(t, {"x": "z"})) == "mul(z,y)"
    assert str(substitute(t, {"y": parse_term("inv(x)", SIG)})) == "mul(x,inv(x))"


# random terms print and reparse to the same tree
def _terms():
    leaves = st.sampled_from([Var("x"), Var("y"), Var("z"), App("e", ())])
    return st.recursive(
        leaves,
        lambda ch: st.one_of(st.builds(lambda a: App("inv", (a,)), ch),
                             st.builds(lambda a, b: App("mul", (a, b)), ch, ch)),
        max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(_terms())
def test_print_parse_roundtrip(t):
    assert parse_term(str(t), SIG) == t
