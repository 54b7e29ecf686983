# %% [markdown]
# # Omega-sums, idempotents and formal sequences
#
# The theory of an omega-sum of copies of a chain depends only on the theory
# of the chain.  Full theories grow quickly with the level, so for deep
# sentences we fold the smaller atomic profiles instead: they keep exactly
# the facts formula evaluation reads.

# %%
from chaincalc import theory as th
from chaincalc.chain import Word, parse_chain_expr
from chaincalc.errors import GuardError, work_budget
from chaincalc.formula import formula_depth, parse_formula

# %%
point = th.theory_of_word(Word.parse(".", 0), 0)
omega = th.omega_power(point)
print(th.pretty_theory(omega))
print("omega absorbs a point on the left:", point + omega is omega)
print("idempotent power of a point:", th.idempotent_power(point))

# %% [markdown]
# Sentences about omega labeled by a constant predicate.

# %%
expr = parse_chain_expr("(w:1)^w", 1)
for text in [
    "ex x. all y. (y<x | y=x)",
    "ex x. all y. (x<y | x=y)",
    "all x. ex y. (x<y & all z. ~(x<z & z<y))",
    "ex2 X. all x. ((ex y. (x<y & y in X)) & (ex z. (x<z & ~ z in X)))",
]:
    f = parse_formula(text, 1)
    print(th.decide(f, th.profile_of_expr(expr, formula_depth(f))), text)

# %% [markdown]
# The same fold on full theories runs into the work budget already at level 2.

# %%
try:
    with work_budget(50_000):
        th.theory_of_expr(expr, 2)
except GuardError as exc:
    print("stopped:", exc)

# %% [markdown]
# Ultimately periodic sequences of theories.  A constant sequence satisfies
# the additivity condition exactly when its entry is idempotent.

# %%
three = th.theory_of_word(Word.parse("...", 0), 0)
print(bool(th.check_formal_sequence(th.const(three))))
print(th.check_formal_sequence(th.const(point)))
head, idem = th.ramsey_factorize(th.UPSequence((), (point, point + point)))
print(head is th.empty_theory(0, 0), th.is_idempotent(idem))
print(th.omega_sum(th.UPSequence((), (point, point + point))) is omega)
