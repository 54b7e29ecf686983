import pytest

from chaincalc.errors import FormulaSyntaxError
from chaincalc.formula import (
    And, Eq, ExistsFO, ExistsSO, ForallFO, Lt, Not, Or, Rel, Sing, alpha_equivalent, desugar,
    formula_depth, free_vars, freshen, is_core, parse_formula, pretty, substitute, NameSupply,
)

ROUND_TRIP = [
    "ex x. all y. (y < x | y = x)",
    "all x. ex y. (x < y & all z. ~(x < z & z < y))",
    "ex2 X. (X sub A0 & sing(X))",
    "all2 X. (X =set A0 -> ex x. x in X)",
    "(A0 sub A0 <-> true)",
    "code(x,y) & ~p(y,x)",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_pretty_round_trips(text):
    f = parse_formula(text)
    assert parse_formula(pretty(f)) == f


def test_parse_shapes():
    f = parse_formula("ex x. all y. (y<x | y=x)")
    assert f == ExistsFO("x", ForallFO("y", Or(Lt("y", "x"), Eq("y", "x"))))
    assert parse_formula("ex2 X. sing(X)") == ExistsSO("X", Sing("X"))
    assert parse_formula("code(a,b)") == Rel("code", ("a", "b"))


def test_precedence_and_binds_tighter_than_or():
    assert parse_formula("true | false & false") == parse_formula("true | (false & false)")


@pytest.mark.parametrize("text, depth", [
    ("true", 0),
    ("ex x. x in A0", 1),
    ("ex x. all y. (y<x | y=x)", 2),
    ("ex2 X. all x. ((ex y. (x<y & y in X)) & (ex z. (x<z & ~ z in X)))", 3),
    ("(ex x. x in A0) & ~(all2 X. ex y. y in X)", 2),
])
def test_depth(text, depth):
    assert formula_depth(parse_formula(text, 1)) == depth


def test_free_vars_exclude_bound_names():
    f = parse_formula("ex x. (x in X & x < y) & A0 sub X", 1)
    assert free_vars(f) == {"X", "y", "A0"}


@pytest.mark.parametrize("text", [
    "ex x. (x <",
    "ex x. x in A3",
    "ex2 A0. true",
    "x sub y",
    "X < Y",
    "ex x.",
])
def test_syntax_errors_have_positions(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text, 1)
    assert info.value.position is not None


def test_desugar_keeps_depth_and_yields_core():
    for text in ROUND_TRIP[:4]:
        f = parse_formula(text)
        g = desugar(f)
        assert is_core(g)
        assert formula_depth(g) == formula_depth(f)


def test_alpha_equivalence():
    a = parse_formula("ex x. all y. y < x")
    assert alpha_equivalent(a, parse_formula("ex u. all v. v < u"))
    assert not alpha_equivalent(a, parse_formula("ex u. all v. u < v"))


def test_substitute_respects_binders():
    f = And(Lt("x", "y"), ExistsFO("x", Lt("x", "y")))
    g = substitute(f, {"x": "z"})
    assert g == And(Lt("z", "y"), ExistsFO("x", Lt("x", "y")))


def test_parser_renames_shadowing_binders_apart():
    f = parse_formula("x < y & ex x. x < y")
    assert f.right.var != "x"
    assert alpha_equivalent(f.right, ExistsFO("x", Lt("x", "y")))


def test_freshen_renames_bound_variables_apart():
    f = ExistsFO("x", ExistsFO("x", Lt("x", "x")))
    g = freshen(f, NameSupply({"x"}))
    assert alpha_equivalent(f, g)
    assert g.var != "x"


def test_not_is_preserved():
    assert parse_formula("~ x in A0", 1) == Not(parse_formula("x in A0", 1))
