import pytest
from hypothesis import given, settings, strategies as st

from atlcheck.errors import DialectError, FormulaSyntaxError
from atlcheck.formula import (
    TRUE, And, AlmostAlways, Coalition, Finally, Globally, Implies, InfOften, Next, Not, Or,
    PAnd, PNot, POr, PState, Prop, Release, Until, WeakUntil, check_dialect, dag_size,
    modal_depth, parse, parse_lines, props, size, to_str,
)


def test_basic_parse():
    f = parse("<<A1>> X p")
    assert f == Coalition(("A1",), Next(Prop("p")))
    assert size(f) == 3
    assert parse("<<>> G !q") == Coalition((), Globally(Not(Prop("q"))))
    assert parse("<<A,B>> (p U q)") == Coalition(("A", "B"), Until(Prop("p"), Prop("q")))


def test_precedence():
    assert parse("p | q & r") == Or(Prop("p"), And(Prop("q"), Prop("r")))
    assert parse("p -> q -> r") == Implies(Prop("p"), Implies(Prop("q"), Prop("r")))
    assert parse("!p & q") == And(Not(Prop("p")), Prop("q"))
    assert parse("<<A>> !p U q") == Coalition(("A",), Until(Not(Prop("p")), Prop("q")))
    assert parse("<<A>> !(p U q)") == Coalition(("A",), PNot(Until(Prop("p"), Prop("q"))))
    assert parse("<<A>> !X p") == Coalition(("A",), PNot(Next(Prop("p"))))


def test_unicode_tokens():
    assert parse("¬⟨⟨A⟩⟩X p ∧ ⊤") == parse("!<<A>> X p & true")


def test_all_operators():
    f = parse("<<A>> Finf p & <<A>> Ginf q & <<A>> (p W q) & <<A>> (p R q) & <<A>> F p", "eatl")
    kinds = {type(g.path) for g in (f.left.left.left.left, f.left.left.left.right,
                                    f.left.left.right, f.left.right, f.right)}
    assert kinds == {InfOften, AlmostAlways, WeakUntil, Release, Finally}


def test_dialects():
    with pytest.raises(DialectError):
        parse("<<A>> (p R q)", "atlorig")
    with pytest.raises(DialectError):
        parse("<<A>> !X p", "atlorig")
    with pytest.raises(DialectError):
        parse("<<A>> Finf p", "atl")
    with pytest.raises(DialectError) as e:
        parse("<<A>> (F p & G q)", "atl")
    assert e.value.pos is not None
    f = parse("<<A>> (F p & G q)", "atlplus")
    assert f.path == PAnd(Finally(Prop("p")), Globally(Prop("q")))
    check_dialect(f, "atlplus")
    with pytest.raises(DialectError):
        check_dialect(f, "atl")


def test_atlplus_state_operands():
    f = parse("<<A>> (p | F q)", "atlplus")
    assert f.path == POr(PState(Prop("p")), Finally(Prop("q")))
    assert size(f) == 5


def test_syntax_errors():
    with pytest.raises(FormulaSyntaxError) as e:
        parse("<<A1>> X")
    assert e.value.pos == 8
    with pytest.raises(FormulaSyntaxError):
        parse("X p")
    with pytest.raises(FormulaSyntaxError):
        parse("p q")
    with pytest.raises(FormulaSyntaxError):
        parse("<<A p")
    with pytest.raises(FormulaSyntaxError):
        parse("(p")


def test_parse_lines():
    fs = parse_lines("# header\n<<A>> X p\n\ntrue  # comment\n")
    assert fs == [parse("<<A>> X p"), TRUE]
    with pytest.raises(FormulaSyntaxError) as e:
        parse_lines("p\n<<A>>\n")
    assert e.value.line == 2


def test_size_dag_depth_props():
    f = parse("<<A>> X p & <<A>> X p")
    assert size(f) == 7
    assert dag_size(f) == 4
    g = parse("<<A>> (p U <<B>> X !q)")
    assert modal_depth(g) == 2
    assert props(g) == {"p", "q"}


# formulas for the round-trip property
names = st.sampled_from(["p", "q", "r1"])
agents = st.lists(st.sampled_from(["A", "B", "C2"]), max_size=3, unique=True).map(
    lambda a: tuple(sorted(a)))


def _state(inner, path):
    return st.one_of(
        st.builds(Not, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Implies, inner, inner),
        st.builds(Coalition, agents, path),
    )


def _simple_path(sub, eatl=True):
    ops = [st.builds(Next, sub), st.builds(Finally, sub), st.builds(Globally, sub),
           st.builds(Until, sub, sub), st.builds(Release, sub, sub), st.builds(WeakUntil, sub, sub)]
    if eatl:
        ops += [st.builds(InfOften, sub), st.builds(AlmostAlways, sub)]
    return st.one_of(*ops)


eatl_formulas = st.recursive(
    st.one_of(names.map(Prop), st.just(TRUE)),
    lambda inner: _state(inner, _simple_path(inner) | _simple_path(inner).map(PNot)),
    max_leaves=12,
)


@settings(max_examples=300, deadline=None)
@given(eatl_formulas)
def test_round_trip(f):
    text = to_str(f)
    assert parse(text, "eatl") == f
    assert to_str(parse(text, "eatl")) == text


def _plus_path(sub):
    base = _simple_path(sub, eatl=False)
    return st.recursive(base, lambda p: st.one_of(
        st.builds(PAnd, p, p), st.builds(POr, p, p), st.builds(PNot, p)), max_leaves=3)


atlplus_formulas = st.recursive(
    st.one_of(names.map(Prop), st.just(TRUE)),
    lambda inner: _state(inner, _plus_path(inner)),
    max_leaves=6,
)


@settings(max_examples=200, deadline=None)
@given(atlplus_formulas)
def test_round_trip_atlplus(f):
    text = to_str(f)
    g = parse(text, "atlplus")
    assert to_str(g) == text
