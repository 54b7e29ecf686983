import random

import pytest

from chaincalc import theory as th
from chaincalc.chain import Word
from chaincalc.errors import ShapeError


def pt(k, n=0):
    return th.theory_of_word(Word.parse("." * k, 0), n)


def brute_formal(seq, horizon):
    """First violating pair with j < horizon, scanning i then j."""
    for i in range(horizon):
        acc = seq[i]
        for j in range(i + 2, horizon + 1):
            acc = acc + seq[j - 1]
            if acc is not seq[i]:
                return (i, j)
    return None


def test_normalization():
    t, u = pt(1), pt(2)
    assert th.UPSequence((t,), (t,)) == th.const(t)
    assert th.UPSequence((), (t, u, t, u)) == th.UPSequence((), (t, u))
    assert th.UPSequence((u, t, u), (t, u)) == th.UPSequence((u,), (t, u))
    seq = th.UPSequence((u,), (t, pt(3)))
    assert [seq[i] for i in range(5)] == [u, t, pt(3), t, pt(3)]
    with pytest.raises(TypeError):
        len(seq)
    with pytest.raises(ShapeError):
        th.UPSequence((t,), (pt(1, 1),))


def test_index_sets():
    a = th.UPIndexSet((), (True, False))
    assert [i in a for i in range(4)] == [True, False, True, False]
    b = th.UPIndexSet.of([1, 3])
    assert [i in b for i in range(6)] == [False, True, False, True, False, False]


def test_formal_check_examples():
    assert th.check_formal_sequence(th.const(pt(3)))
    result = th.check_formal_sequence(th.const(pt(1)))
    assert not result and result.violation == (0, 2)
    assert th.check_formal_sequence(th.finite_sequence([pt(1)]))
    assert th.check_formal_sequence(th.finite_sequence([]))


def test_ramsey_examples():
    e = pt(3)
    assert th.ramsey_factorize(th.const(e)) == (pt(0), e)
    head, idem = th.ramsey_factorize(th.const(pt(1)))
    assert th.is_idempotent(idem) and idem is pt(3)
    assert head + th.omega_power(idem) is th.omega_power(pt(1))
    head, idem = th.ramsey_factorize(th.UPSequence((), (pt(1), pt(2))))
    assert idem + idem is idem
    with pytest.raises(ShapeError):
        th.ramsey_factorize(th.finite_sequence([pt(1)]))


def test_omega_sum():
    assert th.omega_sum(th.const(pt(1))) is th.omega_power(pt(1))
    assert th.omega_sum(th.finite_sequence([pt(1), pt(2)])) is pt(3)
    assert th.omega_sum(th.UPSequence((pt(0),), (pt(2),))) is th.omega_power(pt(1))
    p = th.profile_of_word(Word.parse(".", 0), 1)
    assert th.omega_sum(th.const(p)) is th.profile_omega(p)


def test_formal_shuffle_examples():
    t, u = pt(1), pt(2)
    s = th.UPSequence((u,), (t, pt(3)))
    evens = th.UPIndexSet((), (True, False))
    assert th.formal_shuffle(s, s, evens) == s
    assert th.formal_shuffle(s, th.const(u), th.UPIndexSet()) == th.const(u)
    out = th.formal_shuffle(th.const(t), th.const(u), evens)
    assert out == th.UPSequence((), (t, u))
    assert th.formal_shuffle(th.finite_sequence([t, u]), th.finite_sequence([u, t]), [1]) == \
        th.finite_sequence([u, u])
    with pytest.raises(ShapeError):
        th.formal_shuffle(th.const(t), th.finite_sequence([t]), [])
    with pytest.raises(ShapeError):
        th.formal_shuffle(th.finite_sequence([t]), th.finite_sequence([t, t]), [])


def test_formal_check_matches_a_long_window():
    census = list(th.reachable_theories(0, 1, 2, use_omega=True))
    rng = random.Random(7)
    for _ in range(300):
        prefix = tuple(rng.choice(census) for _ in range(rng.randrange(3)))
        period = tuple(rng.choice(census) for _ in range(rng.randrange(1, 3)))
        seq = th.UPSequence(prefix, period)
        got = th.check_formal_sequence(seq)
        expected = brute_formal(seq, len(seq.prefix) + 12 * len(seq.period))
        assert got.violation == expected


def test_finite_formal_check_matches_brute_force():
    rng = random.Random(3)
    census = list(th.reachable_theories(0, 0, 3, use_omega=True))
    for _ in range(200):
        items = [rng.choice(census) for _ in range(rng.randrange(1, 6))]
        seq = th.finite_sequence(items)
        assert th.check_formal_sequence(seq).violation == brute_formal(seq, len(items))
