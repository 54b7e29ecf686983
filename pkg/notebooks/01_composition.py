# %% [markdown]
# # Theories of finite words and how they compose
#
# A level-n theory summarizes everything a formula of quantifier depth n can
# say about a labeled chain.  For finite words we can compute it by brute
# force and compare it with the value obtained by adding the theories of the
# pieces.

# %%
import itertools

from chaincalc import theory as th
from chaincalc.chain import Word, oracle_eval
from chaincalc.formula import parse_formula

# %% [markdown]
# Unlabeled chains at level 0.  The pretty form lists, for every point, the
# relations it has to the points of the chain.

# %%
for k in range(5):
    t = th.theory_of_word(Word.parse("." * k, 0), 0)
    print(k, th.pretty_theory(t), t.digest[:16])

# %% [markdown]
# From length 3 on nothing changes, so the level-0 census of unlabeled words
# has four elements.  Adding theories never leaves the census.

# %%
census = th.reachable_theories(0, 0, 3)
print(census.count)
for t in census:
    print(t.digest[:16], census.describe(t))

# %% [markdown]
# Composition over one predicate: the sum of the theories of u and v is the
# theory of uv.  Handles are interned, so `is` is the equality test.

# %%
ws = [Word(letters, 1) for k in range(4) for letters in itertools.product((0, 1), repeat=k)]
mismatches = sum(
    th.theory_of_word(u, 1) + th.theory_of_word(v, 1) is not th.theory_of_word(u + v, 1)
    for u in ws for v in ws)
print("pairs checked:", len(ws) ** 2, "mismatches:", mismatches)

# %% [markdown]
# Deciding from a theory agrees with evaluating the formula on the word.

# %%
f = parse_formula("ex x. (x in A0 & all y. (x<y -> ~ y in A0))", 1)
for text in ["0110", "0000", "1"]:
    w = Word.parse(text, 1)
    print(text, th.decide(f, th.theory_of_word(w, 2)), oracle_eval(w, f))
