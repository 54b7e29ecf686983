"""Deciding formulas from theories and profiles.

The evaluator peels one level per set quantifier: an existential holds when
some element of the current level satisfies the body, a universal when all
do.  Atoms are read from the level-0 facts, which both :class:`Theory` and
:class:`Profile` handles expose through :func:`profile_facts`.
"""
from __future__ import annotations

from typing import Mapping

from ..errors import EvaluationError, GuardError
from ..formula import (
    And, Const, ExistsSO, ForallSO, Formula, Iff, Implies, Not, Or, PointLt, Sing,
    SubSet, desugar, formula_depth, free_vars, is_point_var, predicate_index,
)
from .profile import SINGLE, profile_facts

__all__ = ["decide"]


def _atomic(g, t, env: Mapping[str, int]) -> bool:
    if isinstance(g, Const):
        return g.value
    status, sub, lt = profile_facts(t)
    width = len(status)
    if isinstance(g, Sing):
        return status[env[g.var]] == SINGLE
    a, b = env[g.left], env[g.right]
    if isinstance(g, SubSet):
        return bool(sub >> (a * width + b) & 1)
    if isinstance(g, PointLt):
        return bool(lt >> (a * width + b) & 1)
    raise EvaluationError(f"unexpected atom {g!r} in a desugared formula")


def decide(f: Formula, t, columns: Mapping[str, int] | None = None) -> bool:
    """Decide ``M |= f`` from ``t``, the theory or profile of ``(M, A)``.

    ``A<i>`` refers to column ``i``; other free set variables must be mapped to
    columns through ``columns``.  Needs ``formula_depth(f) <= t.level``.
    """
    depth = formula_depth(f)
    if depth > t.level:
        raise GuardError(f"formula depth {depth} exceeds the theory level {t.level}")
    env: dict[str, int] = {}
    for name in free_vars(f):
        if columns and name in columns:
            env[name] = columns[name]
        elif is_point_var(name):
            raise EvaluationError(f"free point variable {name} cannot be decided from a theory")
        else:
            idx = predicate_index(name)
            if idx is None:
                raise EvaluationError(f"free variable {name} is not mapped to a column")
            env[name] = idx
    for name, c in env.items():
        if not 0 <= c < t.width:
            raise EvaluationError(f"{name} refers to column {c}, theory has {t.width}")

    def ev(g, t, env) -> bool:
        if isinstance(g, Not):
            return not ev(g.body, t, env)
        if isinstance(g, And):
            return ev(g.left, t, env) and ev(g.right, t, env)
        if isinstance(g, Or):
            return ev(g.left, t, env) or ev(g.right, t, env)
        if isinstance(g, Implies):
            return (not ev(g.left, t, env)) or ev(g.right, t, env)
        if isinstance(g, Iff):
            return ev(g.left, t, env) == ev(g.right, t, env)
        if isinstance(g, ExistsSO):
            inner = {**env, g.var: t.width}
            return any(ev(g.body, c, inner) for c in t.content)
        if isinstance(g, ForallSO):
            inner = {**env, g.var: t.width}
            return all(ev(g.body, c, inner) for c in t.content)
        return _atomic(g, t, env)

    return ev(desugar(f), t, env)
