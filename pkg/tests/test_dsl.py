from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dscosc import corpus
from dscosc.dsl import (
    DSLError, format_rational, parse, parse_func, parse_set, parse_space, print_document, print_func, print_set,
    print_space, tokenize,
)
from dscosc.func import FuncTree
from dscosc.space import LEAF, Space, ordinal_space
from strategies import funcs, spaces, subsets_on


def test_chi_root_from_text():
    doc = parse("space S = lim(; pt)\nfunc f on S = (1 ; ; 0)\n")
    assert doc.spaces["S"] == ordinal_space(1)
    assert doc.func("f") == corpus.chi_root()


def test_comments_and_whitespace_are_ignored():
    a = parse("space S=lim(;pt)func f on S=(1;;0)")
    b = parse("# header\nspace S = lim( ; pt )  # trailing\n\nfunc f on S =\n  (1 ; ; 0)\n")
    assert a == b


def test_zero_denominator_reports_position():
    with pytest.raises(DSLError) as err:
        parse("space S = lim(; pt)\nfunc f on S = (1/0 ; ; 0)\n")
    assert err.value.reason == "malformed rational: zero denominator"
    assert (err.value.line, err.value.col) == (2, 16)
    assert str(err.value) == "2:16: malformed rational: zero denominator"


@pytest.mark.parametrize("text, reason", [
    ("space S = pt\nspace S = pt\n", "duplicate name 'S'"),
    ("func f on T = 1\n", "unknown space 'T'"),
    ("space S = lim(; pt)\nfunc f on S = (1 ; 0 ; 0)\n", "shape mismatch"),
    ("space S = pt\nfunc f on S = 1 drift 2\n", "drift needs a tail"),
    ("space S = lim(; pt)\nfunc f on S = (1 ; ; 0)\nseries s on S = [] tail f ratio 1\n",
     "tail ratio must have absolute value below 1"),
    ("space S = lim(; pt)\nseries s on S = [g]\n", "unknown function 'g'"),
    ("space S = lim(; pt)\nfunc f on S = (1 ; ; 0 | 0.0: 2, 0.0: 3)\n", "overridden twice"),
    ("space S = lim(; pt)\nfunc f on S = (1 ; ; 0 | 0.1: 2)\n", "no tail copy"),
    ("space S = lim(; pt)\nset A on S = (2 ; ; 0)\n", "expected 0 or 1"),
    ("bogus x = 1\n", "unknown statement 'bogus'"),
    ("space S = lim(; pt) $\n", "unexpected character"),
    ("task osc(f, 2\n", "unclosed task argument list"),
])
def test_input_errors(text, reason):
    with pytest.raises(DSLError) as err:
        parse(text)
    assert reason in err.value.reason
    assert err.value.line >= 1 and err.value.col >= 1


def test_tokenizer_keeps_signed_integers():
    kinds = [(t.kind, t.text) for t in tokenize("-3/4")][:3]
    assert kinds == [("int", "-3"), ("sym", "/"), ("int", "4")]


@given(spaces())
def test_space_round_trip(sp):
    assert parse_space(print_space(sp)) == sp


@given(funcs(drift=True))
def test_function_round_trip(f):
    text = print_func(f, f.shape)
    assert parse_func(text, f.shape) == f
    assert print_func(parse_func(text, f.shape), f.shape) == text


@given(spaces(2).flatmap(lambda sp: st.tuples(st.just(sp), subsets_on(sp))))
def test_set_round_trip(data):
    sp, s = data
    assert parse_set(print_set(s, sp), sp) == s


def test_printer_forms():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(Fraction(4)) == "4"
    assert print_space(Space((), ())) == "pt"
    assert print_func(FuncTree(1, (), (FuncTree(0),)), ordinal_space(1)) == "(1 ; ; 0)"
    # a uniform tree with drift prints as a bare value at top level
    assert print_func(FuncTree(0, (), (FuncTree(0),), 1), ordinal_space(1)) == "0 drift 1"
    assert print_space(Space((LEAF,), ())) == "lim(pt ;)"


def test_shipped_corpus_round_trips():
    files = corpus.corpus_files()
    assert len(files) >= 20
    for name, text in files.items():
        doc = parse(text)
        out = print_document(doc)
        assert parse(out) == doc, name
        assert print_document(parse(out)) == out, name


def test_task_arguments_are_kept_verbatim():
    doc = parse("space S = lim(; pt)\nfunc f on S = (1 ; ; 0)\ntask eval(f, ε, T2)\ntask check()\n")
    assert [(t.verb, t.args) for t in doc.tasks] == [("eval", ("f", "ε", "T2")), ("check", ())]
