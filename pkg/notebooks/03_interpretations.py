# %% [markdown]
# # Interpreting set structures in words
#
# Elements are position sets, equality is set equality, atoms are the
# singletons and a singleton codes every set containing it.  On a word of
# length k the image has k atoms and a code for each family of atoms.

# %%
from chaincalc.chain import Segment, Word, oracle_eval
from chaincalc.formula import parse_formula
from chaincalc.interp import (
    bouquet_size, image, model_check_fo, respects, shipped_interp, t_axioms, tk_axioms,
    translate, translated_assignment,
)

# %%
membership = shipped_interp("membership")
w = Word.parse("010", 1)
print(respects(w, membership))
model = image(w, membership)
print(len(model), "classes")
print([model_check_fo(model, a) for a in tk_axioms(3)])

# %% [markdown]
# Finite images cannot satisfy the pairing-closure axioms: the first one
# (every element has a singleton) fails.

# %%
print([model_check_fo(model.with_alias(p="code"), a) for a in t_axioms()])

# %% [markdown]
# A formula about the image and its translation into the chain language
# agree on every assignment.

# %%
f = parse_formula("all z. (atom(z) -> (code(z,x) <-> code(z,y)))")
g = translate(f, membership)
for i in range(len(model)):
    for j in range(len(model)):
        reps = {"x": model.representative(i), "y": model.representative(j)}
        assert model_check_fo(model, f, {"x": i, "y": j}) == oracle_eval(
            w, g, translated_assignment(reps, 1))
print("translation checked on", len(model) ** 2, "pairs")

# %% [markdown]
# Bouquet sizes: how many inequivalent elements agree outside a segment.

# %%
for lo, hi in [(0, 2), (0, 3), (1, 1)]:
    print((lo, hi), bouquet_size(w, membership, None, Segment(lo, hi)))
