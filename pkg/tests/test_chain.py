import itertools

import pytest

from chaincalc.chain import (
    Concat, CutPartition, Finite, OmegaPower, Segment, Word, from_mask, oracle_eval,
    parse_chain_expr, point_atomic_type, shuffle_sets, to_mask,
)
from chaincalc.errors import ChainSyntaxError, EvaluationError, GuardError, ShapeError, guarded
from chaincalc.formula import desugar, parse_formula


def test_word_parse_and_str():
    w = Word.parse("100111", 2)
    assert w.letters == (1, 2, 3)
    assert str(w) == "100111"
    assert Word.parse("...", 0) == Word((0, 0, 0), 0)
    assert str(Word.parse("", 0)) == ""


@pytest.mark.parametrize("text, m", [("012", 1), ("101", 2), ("1", 0)])
def test_word_parse_rejects(text, m):
    with pytest.raises(ChainSyntaxError):
        Word.parse(text, m)


def test_predicate_masks_and_columns():
    w = Word.parse("0110", 1)
    assert w.predicate(0) == 0b0110
    with pytest.raises(EvaluationError):
        w.predicate(1)
    v = w.with_columns({0, 3})
    assert v.width == 2 and v.predicate(1) == 0b1001
    with pytest.raises(ShapeError):
        w.with_columns({7})


def test_mask_conversions():
    assert to_mask({0, 2}) == 5
    assert to_mask(6) == 6
    assert from_mask(5) == {0, 2}


def test_segments_and_cuts():
    assert Segment(1, 3).mask() == 0b110
    with pytest.raises(ShapeError):
        Segment(3, 1)
    cuts = CutPartition.from_interior(5, [2, 4])
    assert len(cuts) == 3
    assert [(s.lo, s.hi) for s in cuts.blocks()] == [(0, 2), (2, 4), (4, 5)]
    with pytest.raises(ShapeError):
        CutPartition((0, 2, 2))


def test_chain_expression_parse():
    e = parse_chain_expr("w:1 + (w:01)^w", 1)
    assert e == Concat(Finite(Word((1,), 1)), OmegaPower(Finite(Word((0, 1), 1))))
    assert parse_chain_expr("w:", 1) == Finite(Word((), 1))


@pytest.mark.parametrize("text", ["(w:)^w", "w:1 +", "(w:1", "w:2", "w:1 w:1"])
def test_chain_expression_errors(text):
    with pytest.raises(ChainSyntaxError):
        parse_chain_expr(text, 1)


ORACLE_CASES = [
    ("0110", "ex x. all y. (y<x | y=x)", True),
    ("", "ex x. true", False),
    ("0110", "ex x. ex y. (x<y & x in A0 & y in A0)", True),
    ("0100", "ex2 X. (X sub A0 & ~ X =set A0 & ex x. x in X)", False),
    ("0110", "ex2 X. (X sub A0 & ~ X =set A0 & ex x. x in X)", True),
    ("101", "all x. (x in A0 -> ex y. (x<y | y<x) & y in A0)", True),
]


@pytest.mark.parametrize("word, text, expected", ORACLE_CASES)
def test_oracle_examples(word, text, expected):
    assert oracle_eval(Word.parse(word, 1), parse_formula(text, 1)) is expected


@pytest.mark.parametrize("word, text, _", ORACLE_CASES)
def test_oracle_agrees_with_desugared_form(word, text, _):
    f = parse_formula(text, 1)
    w = Word.parse(word, 1)
    assert oracle_eval(w, f) == oracle_eval(w, desugar(f))


def test_oracle_assignment_accepts_sets_and_masks():
    f = parse_formula("X sub A0 & ex x. x in X")
    w = Word.parse("0110", 1)
    assert oracle_eval(w, f, {"X": {1}})
    assert not oracle_eval(w, f, {"X": 0b1000})
    with pytest.raises(EvaluationError):
        oracle_eval(w, f)


def test_oracle_length_guard():
    f = parse_formula("ex2 X. true")
    with guarded(max_oracle_len=3):
        with pytest.raises(GuardError):
            oracle_eval(Word.parse("....", 0), f)


def test_point_atomic_type():
    w = Word.parse("01", 1)
    assert point_atomic_type(w, [{0}], 0) == {("A0", False), ("X0", True)}
    with pytest.raises(ShapeError):
        point_atomic_type(w, [], 2)


def test_shuffle_takes_blocks():
    cuts = CutPartition.from_interior(6, [2, 4])
    out = shuffle_sets([{0, 1, 2, 3, 4, 5}], [set()], cuts, [1])
    assert out == (frozenset({2, 3}),)


def test_shuffle_degenerate_cases():
    cuts = CutPartition.from_interior(4, [1, 3])
    xs, ys = [{0, 2}, {1}], [{3}, {0, 1, 2}]
    assert shuffle_sets(xs, ys, cuts, range(3)) == tuple(map(frozenset, xs))
    assert shuffle_sets(xs, ys, cuts, []) == tuple(map(frozenset, ys))
    assert shuffle_sets(xs, xs, cuts, [0]) == tuple(map(frozenset, xs))
    for r in range(4):
        for a in itertools.combinations(range(3), r):
            rest = [j for j in range(3) if j not in a]
            assert shuffle_sets(xs, ys, cuts, a) == shuffle_sets(ys, xs, cuts, rest)


def test_shuffle_validates():
    cuts = CutPartition.from_interior(3, [1])
    with pytest.raises(ShapeError):
        shuffle_sets([{0}], [], cuts, [0])
    with pytest.raises(ShapeError):
        shuffle_sets([{0}], [{1}], cuts, [5])
    with pytest.raises(ShapeError):
        shuffle_sets([{4}], [{1}], cuts, [0])
