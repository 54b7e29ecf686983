from hypothesis import given, settings, strategies as st

from chaincalc import theory as th
from chaincalc.chain import CutPartition, Word, oracle_eval, shuffle_sets
from chaincalc.formula import (
    And, Eq, ExistsFO, ExistsSO, ForallFO, ForallSO, In, Lt, Not, Or, Sing, SubSet,
    alpha_equivalent, formula_depth, parse_formula, pretty,
)

settings.register_profile("chaincalc", deadline=None, max_examples=60)
settings.load_profile("chaincalc")

word_st = st.builds(lambda ls: Word(tuple(ls), 1), st.lists(st.integers(0, 1), max_size=5))


@st.composite
def formulas(draw, depth=2, points=(), sets=("A0",)):
    """Closed formulas of quantifier depth <= depth over one predicate."""
    choices = ["atom", "not", "and", "or"] + (["exfo", "allfo", "exso", "allso"] if depth else [])
    kind = draw(st.sampled_from(choices))
    if kind == "atom":
        options = [SubSet(a, b) for a in sets for b in sets] + [Sing(a) for a in sets]
        options += [In(x, a) for x in points for a in sets]
        options += [Lt(x, y) for x in points for y in points] + [Eq(x, y) for x in points for y in points]
        return draw(st.sampled_from(options))
    if kind == "not":
        return Not(draw(formulas(depth, points, sets)))
    if kind in ("and", "or"):
        cls = And if kind == "and" else Or
        return cls(draw(formulas(depth, points, sets)), draw(formulas(depth, points, sets)))
    if kind in ("exfo", "allfo"):
        x = f"x{len(points)}"
        body = draw(formulas(depth - 1, points + (x,), sets))
        return (ExistsFO if kind == "exfo" else ForallFO)(x, body)
    name = f"X{len(sets)}"
    body = draw(formulas(depth - 1, points, sets + (name,)))
    return (ExistsSO if kind == "exso" else ForallSO)(name, body)


@given(formulas(), word_st)
def test_decide_agrees_with_oracle(f, w):
    assert formula_depth(f) <= 2
    assert th.decide(f, th.theory_of_word(w, 2)) is oracle_eval(w, f)
    assert th.decide(f, th.profile_of_word(w, 2)) is oracle_eval(w, f)


@given(formulas(depth=3))
def test_pretty_parse_round_trip(f):
    g = parse_formula(pretty(f), 1)
    assert alpha_equivalent(f, g)


@given(word_st, word_st, st.integers(0, 1))
def test_composition(u, v, n):
    assert th.theory_of_word(u, n) + th.theory_of_word(v, n) is th.theory_of_word(u + v, n)


@given(word_st, word_st, word_st)
def test_profile_sum_is_associative(a, b, c):
    pa, pb, pc = (th.profile_of_word(w, 1) for w in (a, b, c))
    assert (pa + pb) + pc is pa + (pb + pc)


@st.composite
def shuffle_cases(draw):
    n = draw(st.integers(1, 8))
    interior = draw(st.sets(st.integers(1, n - 1), max_size=3)) if n > 1 else set()
    cuts = CutPartition.from_interior(n, interior)
    k = draw(st.integers(1, 2))
    sets = st.frozensets(st.integers(0, n - 1))
    xs = [draw(sets) for _ in range(k)]
    ys = [draw(sets) for _ in range(k)]
    index = draw(st.sets(st.integers(0, len(cuts) - 1)))
    return cuts, xs, ys, index


@given(shuffle_cases())
def test_shuffle_identities(case):
    cuts, xs, ys, index = case
    out = shuffle_sets(xs, ys, cuts, index)
    rest = set(range(len(cuts))) - index
    assert out == shuffle_sets(ys, xs, cuts, rest)
    assert shuffle_sets(xs, ys, cuts, range(len(cuts))) == tuple(xs)
    assert shuffle_sets(xs, ys, cuts, ()) == tuple(ys)
    assert shuffle_sets(out, out, cuts, index) == out
    for j, seg in enumerate(cuts.blocks()):
        src = xs if j in index else ys
        for got, want in zip(out, src):
            assert {p for p in got if seg.lo <= p < seg.hi} == {p for p in want if seg.lo <= p < seg.hi}


POINTS = [th.theory_of_word(Word.parse("." * k, 0), 0) for k in range(4)]


@given(st.lists(st.sampled_from(POINTS), max_size=4), st.lists(st.sampled_from(POINTS), min_size=1, max_size=4))
def test_sequence_normalization_keeps_entries(prefix, period):
    seq = th.UPSequence(tuple(prefix), tuple(period))
    for i in range(20):
        expected = prefix[i] if i < len(prefix) else period[(i - len(prefix)) % len(period)]
        assert seq[i] is expected
    assert th.UPSequence(seq.prefix, seq.period) == seq
