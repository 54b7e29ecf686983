import pytest

import rank2_oracle as r2
from chaincalc import theory as th
from chaincalc.chain import Word
from chaincalc.errors import GuardError, guarded


def pt(k):
    return th.theory_of_word(Word.parse("." * k, 0), 0)


@pytest.mark.parametrize("max_len", [1, 2, 3, 4])
def test_unlabeled_census_sizes(max_len):
    assert th.reachable_theories(0, 0, max_len).count == 4
    assert th.reachable_theories(0, 0, max_len, use_omega=True).count == 5


def test_census_sizes_match_the_rank2_oracle():
    for use_omega in (False, True):
        assert th.reachable_theories(0, 0, 3, use_omega).count == len(r2.closure(3, use_omega))


def test_word_theories_partition_like_rank2_types():
    ws = [Word.parse("." * k, 0) for k in range(9)]
    for u in ws:
        for v in ws:
            same_theory = th.theory_of_word(u, 0) is th.theory_of_word(v, 0)
            assert same_theory == (r2.finite(len(u)) == r2.finite(len(v)))


def test_the_omega_element():
    census = th.reachable_theories(0, 0, 4, use_omega=True)
    new = [t for t in census if census.provenance[t][0] == "omega"]
    assert new == [th.omega_power(pt(1))]


def test_provenance_and_membership():
    census = th.reachable_theories(0, 0, 1)
    words = [t for t in census if census.provenance[t][0] == "word"]
    assert words == [pt(0), pt(1)]
    assert pt(3) in census and len(census) == 4
    kind, left, right = census.provenance[pt(2)]
    assert kind == "sum" and left + right is pt(2)
    assert census.describe(pt(0)) == "word (empty)"
    assert census.describe(pt(2)).startswith("sum ")


def test_census_is_closed():
    census = th.reachable_theories(0, 1, 2, use_omega=True)
    members = set(census)
    for a in census:
        assert th.omega_power(a) in members
        for b in census:
            assert a + b in members


def test_profile_census():
    counts = {(n, m): th.reachable_theories(n, m, 3, profiles=True).count
              for n, m in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]}
    assert counts == {(0, 0): 1, (0, 1): 3, (1, 0): 3, (1, 1): 13, (2, 0): 5}
    assert th.reachable_theories(2, 0, 3, use_omega=True, profiles=True).count == 6


def test_closure_guards():
    with guarded(max_closure=3):
        with pytest.raises(GuardError):
            th.reachable_theories(0, 0, 3)
    with pytest.raises(GuardError):
        th.reachable_theories(1, 1, 3, budget=10_000)


def test_hf_form_of_census_elements():
    for t in th.reachable_theories(1, 0, 2, use_omega=True):
        assert th.candidate_wellformed(th.to_hf(t), 1, 0)
