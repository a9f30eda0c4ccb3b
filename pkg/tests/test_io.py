import numpy as np
import pytest

from centralext import io
from centralext import library as lib
from centralext.algebra import satisfies_all
from centralext.errors import ParseError
from centralext.extension import Cocycle, KernelAlgebra


@pytest.mark.parametrize("A", [lib.cyclic_group(3), lib.quaternion_group(), lib.zn_with_unary(4, 1),
                               lib.semilattice2()], ids=lambda A: A.name)
def test_algebra_round_trip(A):
    text = io.format_algebra(A)
    B = io.parse_algebra(text)
    assert B.size == A.size and B.signature == A.signature
    assert all(np.array_equal(np.asarray(A.tables[f]), np.asarray(B.tables[f])) for f in A.tables)
    assert io.format_algebra(B) == text


def test_algebra_labels_and_comments():
    text = """# a two element group
algebra Z2
signature: mul/2, inv/1, e/0
size 2
labels: a b
op mul:
0 1   # first row
1 0
op inv:
0 1
op e:
0
"""
    A = io.parse_algebra(text)
    assert A.label(1) == "b"
    assert satisfies_all(A, lib.groups_variety().axioms)


@pytest.mark.parametrize("text", [
    "algebra X\nsize 2\nop mul:\n0 1\n1 0\n",                                      # no signature
    "signature: mul/2\nsize 2\nop mul:\n0 1\n1\n",                                 # short table
    "signature: mul/2\nsize 2\nop mul:\n0 1\n1 2\n",                               # out of range
    "signature: mul/2\nsize 2\nop add:\n0 1\n1 0\n",                               # unknown op
    "signature: mul/2, e/0\nsize 2\nop mul:\n0 1\n1 0\n",                          # missing table
    "signature: mul/2\nsize 2\nop mul:\n0 x\n1 0\n",                               # bad entry
])
def test_algebra_parse_errors(text):
    with pytest.raises(ParseError):
        io.parse_algebra(text)


@pytest.mark.parametrize("V", [lib.groups_variety(), lib.s3_variety(), lib.abelian_groups_with_unary()],
                         ids=lambda V: V.name)
def test_variety_round_trip(V):
    text = io.format_variety(V)
    W = io.parse_variety(text)
    assert W.signature == V.signature
    assert [str(a) for a in W.axioms] == [str(a) for a in V.axioms]
    assert str(W.difference_term) == str(V.difference_term)
    assert io.format_variety(W) == text


def test_variety_difference_term_symbol():
    text = """signature: m/3
axioms:
  m(x,x,y) = y
  m(x,y,y) = x
difference_term_symbol: m
"""
    V = io.parse_variety(text, name="maltsev")
    assert V.name == "maltsev" and len(V.axioms) == 2
    with pytest.raises(ParseError):
        io.parse_variety("signature: m/2\ndifference_term_symbol: m\n")
    with pytest.raises(ParseError):
        io.parse_variety("signature: m/3\naxioms:\n  m(x,x,y) = y\n")


def test_cocycle_round_trip():
    V = lib.groups_variety()
    Q = lib.cyclic_group(2)
    B = KernelAlgebra.from_algebra(Q, V)
    T = Cocycle(Q, B, {"mul": np.array([[0, 0], [0, 1]])})
    back = Cocycle(Q, B, io.parse_cocycle(io.format_cocycle(T), Q, B))
    assert back == T


def test_congruence_arguments():
    A = lib.cyclic_group(4)
    assert io.congruence_arg(A, "full").is_one()
    assert io.congruence_arg(A, "zero").is_zero()
    assert io.congruence_arg(A, "cg:0-2").text() == io.congruence_arg(A, "0,2|1,3").text()
    with pytest.raises(Exception):
        io.congruence_arg(A, "0,1|2,3,4")


def test_report_rendering_and_parse(tmp_path):
    f = tmp_path / "x.txt"
    f.write_text("hello")
    r = io.Report("demo")
    r.add_input("file", f)
    r["flag"] = True
    r["nothing"] = None
    r["factors"] = [2, 4]
    r["count"] = np.int64(3)
    r.comment("a note")
    text = r.render()
    assert text.startswith("# centralext demo\n")
    assert "flag=true" in text and "nothing=null" in text and "factors=[2,4]" in text
    parsed = io.parse_report(text)
    assert parsed == {"flag": "true", "nothing": "null", "factors": "[2,4]", "count": "3"}
    r.lap("total")
    assert "# time total" in r.render(timings=True)
    assert "# time" not in r.render()
