"""Semantic interpretations of first-order structures in labeled chains.

An interpretation of dimension ``d`` represents an element of the
interpreted structure by a ``d``-tuple of position sets.  It consists of a
universe formula ``U(X1..Xd)``, an equality formula ``E(X1..Xd, Y1..Yd)``
and one formula per predicate of the interpreted signature, all written in
the chain language with set-constant parameters ``W1..Wk``.

Two signatures are supported: a single binary ``p`` (formula name ``P``)
and the three-sorted coding signature ``atom``/``set``/``code`` (formula
names ``Atom``, ``Set``, ``Code``).  Inside a formula ``p(x, y)`` or
``code(x, y)`` the first argument is bound to ``X1..Xd`` and the second to
``Y1..Yd``; unary predicates use ``X1..Xd``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

from .chain import Segment, Word, from_mask, oracle_eval, to_mask
from .errors import GuardError, InterpretationError, current_guards
from .formula import (
    ATOM_TYPES, BINARY_TYPES, And, Const, Eq, ExistsFO, ExistsSO, ForallFO, ForallSO,
    Formula, Iff, Implies, Not, Or, Rel, NameSupply, conj, free_vars, freshen,
    parse_formula, substitute, all_names,
)

__all__ = [
    "Interpretation", "parse_interp", "load_interp", "shipped_interp", "translate", "RespectReport", "respects",
    "QuotientModel", "image", "model_check_fo", "t_axioms", "tk_axioms", "bouquet_size",
    "SIGNATURES",
]

# formula name -> (relation name in target formulas, arity)
SIGNATURES = {
    "P": {"P": ("p", 2)},
    "Atom/Set/Code": {"Atom": ("atom", 1), "Set": ("set", 1), "Code": ("code", 2)},
}


def _tuple_names(prefix: str, d: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, d + 1))


@dataclass(frozen=True)
class Interpretation:
    dim: int
    params: int
    formulas: tuple[tuple[str, Formula], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InterpretationError("dimension must be positive")
        if self.params < 0:
            raise InterpretationError("parameter count must be non-negative")
        names = {name for name, _ in self.formulas}
        for required in ("U", "E"):
            if required not in names:
                raise InterpretationError(f"missing section {required}")
        preds = names - {"U", "E"}
        if preds == {"P"}:
            sig = "P"
        elif preds == {"Atom", "Set", "Code"}:
            sig = "Atom/Set/Code"
        else:
            raise InterpretationError(
                f"predicate sections must be P or Atom, Set, Code; got {sorted(preds)}")
        object.__setattr__(self, "signature", sig)
        xs, ys = _tuple_names("X", self.dim), _tuple_names("Y", self.dim)
        ws = set(_tuple_names("W", self.params))
        for name, f in self.formulas:
            arity = 1 if name == "U" else 2 if name == "E" else SIGNATURES[sig][name][1]
            allowed = set(xs) | (set(ys) if arity == 2 else set()) | ws
            for v in free_vars(f):
                if v.startswith("A") and v[1:].isdigit():
                    continue
                if v.startswith("W") and v[1:].isdigit() and v not in ws:
                    raise InterpretationError(f"{name} uses undeclared parameter {v}")
                if v not in allowed:
                    raise InterpretationError(
                        f"{name} uses {v}; allowed free names are {sorted(allowed)}")

    def formula(self, name: str) -> Formula:
        for n, f in self.formulas:
            if n == name:
                return f
        raise KeyError(name)

    @property
    def predicates(self) -> dict[str, tuple[str, int]]:
        """Formula name -> (relation name, arity) of the interpreted signature."""
        return SIGNATURES[self.signature]

    @property
    def xs(self) -> tuple[str, ...]:
        return _tuple_names("X", self.dim)

    @property
    def ys(self) -> tuple[str, ...]:
        return _tuple_names("Y", self.dim)


def parse_interp(text: str) -> Interpretation:
    """Read the line format ``dim <d>``, ``params <k>``, ``Name := formula``;
    ``#`` starts a comment."""
    dim = params = None
    formulas: dict[str, Formula] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":=" in line:
            name, body = (s.strip() for s in line.split(":=", 1))
            if name not in {"U", "E", "P", "Atom", "Set", "Code"}:
                raise InterpretationError(f"line {lineno}: unknown section {name!r}")
            if name in formulas:
                raise InterpretationError(f"line {lineno}: section {name} given twice")
            try:
                formulas[name] = parse_formula(body)
            except Exception as exc:
                raise InterpretationError(f"line {lineno}: {exc}") from exc
            continue
        key, _, value = line.partition(" ")
        if key in ("dim", "params"):
            try:
                number = int(value.strip())
            except ValueError:
                raise InterpretationError(f"line {lineno}: {key} needs an integer") from None
            if key == "dim":
                dim = number
            else:
                params = number
            continue
        raise InterpretationError(f"line {lineno}: cannot read {line!r}")
    if dim is None:
        raise InterpretationError("missing section dim")
    return Interpretation(dim, params or 0, tuple(formulas.items()))


def load_interp(path) -> Interpretation:
    with open(path, encoding="utf-8") as fh:
        return parse_interp(fh.read())


def shipped_interp(name: str) -> Interpretation:
    """One of the interpretation files installed with the package, by stem
    (``membership``, ``membership_p``, ``membership_w``)."""
    ref = resources.files("chaincalc.data").joinpath(f"{name}.interp")
    if not ref.is_file():
        raise InterpretationError(f"no shipped interpretation named {name!r}")
    return parse_interp(ref.read_text(encoding="utf-8"))


# -- translation -----------------------------------------------------------------------------------

def _instantiate(f: Formula, mapping: Mapping[str, str], supply: NameSupply) -> Formula:
    g = freshen(f, supply)
    return substitute(g, dict(mapping))


def translate(f: Formula, interp: Interpretation) -> Formula:
    """The chain formula saying that the interpreted structure satisfies ``f``.

    A target variable ``x`` becomes the tuple ``Vx_1 .. Vx_d`` of set
    variables.  Quantifiers are relativized to ``U``, equality becomes ``E``
    and each predicate its formula.
    """
    d = interp.dim
    rels = {rel: (name, arity) for name, (rel, arity) in interp.predicates.items()}
    names = all_names(f)
    supply = NameSupply(names | {n for _, g in interp.formulas for n in all_names(g)})

    def tup(x: str) -> tuple[str, ...]:
        return tuple(f"V{x}_{i}" for i in range(1, d + 1))

    for x in names:
        supply.taken.update(tup(x))

    def bind(name: str, args: list[str]) -> Formula:
        mapping = {}
        for var, tuple_names in zip(args, (interp.xs, interp.ys)):
            mapping.update(zip(tuple_names, tup(var)))
        return _instantiate(interp.formula(name), mapping, supply)

    def go(g: Formula) -> Formula:
        if isinstance(g, Const):
            return g
        if isinstance(g, Eq):
            return bind("E", [g.left, g.right])
        if isinstance(g, Rel):
            if g.name not in rels:
                raise InterpretationError(f"predicate {g.name} is not in the {interp.signature} signature")
            name, arity = rels[g.name]
            if len(g.args) != arity:
                raise InterpretationError(f"{g.name} takes {arity} arguments, got {len(g.args)}")
            return bind(name, list(g.args))
        if isinstance(g, ATOM_TYPES):
            raise InterpretationError(f"{type(g).__name__} atoms are not in the interpreted signature")
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, BINARY_TYPES):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (ExistsSO, ForallSO)):
            raise InterpretationError("only first-order formulas can be translated")
        universe = bind("U", [g.var])
        body = go(g.body)
        inner = And(universe, body) if isinstance(g, ExistsFO) else Implies(universe, body)
        quant = ExistsSO if isinstance(g, ExistsFO) else ForallSO
        for v in reversed(tup(g.var)):
            inner = quant(v, inner)
        return inner

    return go(f)


def translated_assignment(assignment: Mapping[str, tuple], dim: int) -> dict[str, int]:
    """Oracle assignment for :func:`translate` output from element tuples."""
    out = {}
    for x, sets in assignment.items():
        for i, s in enumerate(sets, 1):
            out[f"V{x}_{i}"] = to_mask(s)
    return out


# -- respect, images ---------------------------------------------------------------------------

Tuple = tuple  # a d-tuple of position bitmasks


def _env(names: tuple[str, ...], values: Tuple) -> dict[str, int]:
    return dict(zip(names, values))


class _Evaluator:
    def __init__(self, w: Word, interp: Interpretation, params: Mapping[str, object] | None):
        d = interp.dim
        limit = current_guards().max_oracle_len
        if d * len(w) > limit:
            raise GuardError(f"{d}-tuples over a word of length {len(w)} exceed the guard {limit}")
        self.w, self.interp = w, interp
        self.params = {k: to_mask(v) if not isinstance(v, int) else v for k, v in (params or {}).items()}
        needed = set(_tuple_names("W", interp.params))
        missing = needed - set(self.params)
        if missing:
            raise InterpretationError(f"parameters {sorted(missing)} have no value")
        self.candidates = list(itertools.product(range(1 << len(w)), repeat=d))
        self._cache: dict = {}

    def holds(self, name: str, *args: Tuple) -> bool:
        key = (name, args)
        hit = self._cache.get(key)
        if hit is None:
            env = dict(self.params)
            for tuple_names, values in zip((self.interp.xs, self.interp.ys), args):
                env.update(_env(tuple_names, values))
            hit = oracle_eval(self.w, self.interp.formula(name), env)
            self._cache[key] = hit
        return hit


@dataclass(frozen=True)
class RespectReport:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def _classes(ev: _Evaluator, universe: list[Tuple]) -> list[list[Tuple]]:
    classes: list[list[Tuple]] = []
    for x in universe:
        for cls in classes:
            if ev.holds("E", cls[0], x):
                cls.append(x)
                break
        else:
            classes.append([x])
    return classes


def _check(ev: _Evaluator) -> tuple[RespectReport, list[Tuple], list[list[Tuple]]]:
    universe = [x for x in ev.candidates if ev.holds("U", x)]
    if not universe:
        return RespectReport(False, "U* is empty"), universe, []
    for x in universe:
        if not ev.holds("E", x, x):
            return RespectReport(False, "E* is not reflexive", (x,)), universe, []
    for x, y in itertools.product(universe, repeat=2):
        if ev.holds("E", x, y) and not ev.holds("E", y, x):
            return RespectReport(False, "E* is not symmetric", (x, y)), universe, []
    for x, y, z in itertools.product(universe, repeat=3):
        if ev.holds("E", x, y) and ev.holds("E", y, z) and not ev.holds("E", x, z):
            return RespectReport(False, "E* is not transitive", (x, y, z)), universe, []
    classes = _classes(ev, universe)
    rep = {x: cls[0] for cls in classes for x in cls}
    for name, (_, arity) in ev.interp.predicates.items():
        for args in itertools.product(universe, repeat=arity):
            canon = tuple(rep[a] for a in args)
            if ev.holds(name, *args) != ev.holds(name, *canon):
                return RespectReport(False, f"E* does not respect {name}", (name, args, canon)), universe, []
    return RespectReport(True), universe, classes


def respects(w: Word, interp: Interpretation, params: Mapping[str, object] | None = None) -> RespectReport:
    """Is ``U*`` nonempty, ``E*`` an equivalence on it, and every interpreted
    predicate invariant under ``E*``?  Witness tuples are position bitmasks."""
    report, _, _ = _check(_Evaluator(w, interp, params))
    return report


@dataclass(frozen=True)
class QuotientModel:
    """Classes ``x/E*`` (members as tuples of position sets, least first) and
    the induced relations over class indices."""
    classes: tuple[tuple[tuple[frozenset, ...], ...], ...]
    relations: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.classes)

    def representative(self, i: int) -> tuple[frozenset, ...]:
        return self.classes[i][0]

    def with_alias(self, **aliases: str) -> "QuotientModel":
        """Same model with extra relation names, e.g. ``with_alias(p="code")``."""
        rels = dict(self.relations)
        for new, old in aliases.items():
            rels[new] = self.relations[old]
        return QuotientModel(self.classes, rels)

    def index_of(self, element) -> int:
        key = tuple(frozenset(s) for s in element)
        for i, cls in enumerate(self.classes):
            if key in cls:
                return i
        raise KeyError(element)


def image(w: Word, interp: Interpretation, params: Mapping[str, object] | None = None) -> QuotientModel:
    """The interpreted structure ``U*/E*``; refuses when respect fails."""
    ev = _Evaluator(w, interp, params)
    report, _, classes = _check(ev)
    if not report:
        raise InterpretationError(f"interpretation is not respected: {report.reason}")
    classes = [sorted(cls) for cls in classes]
    classes.sort(key=lambda cls: cls[0])
    relations = {}
    for name, (rel, arity) in interp.predicates.items():
        relations[rel] = frozenset(
            idx for idx in itertools.product(range(len(classes)), repeat=arity)
            if ev.holds(name, *(classes[i][0] for i in idx)))
    as_sets = tuple(tuple(tuple(from_mask(m) for m in x) for x in cls) for cls in classes)
    return QuotientModel(as_sets, relations)


def model_check_fo(model: QuotientModel, f: Formula, assignment: Mapping[str, int] | None = None) -> bool:
    """Evaluate a first-order formula; variables range over class indices."""
    env = dict(assignment or {})
    for v in free_vars(f):
        if v not in env:
            raise InterpretationError(f"free variable {v} is unassigned")
    size = len(model.classes)

    def ev(g, env) -> bool:
        if isinstance(g, Const):
            return g.value
        if isinstance(g, Eq):
            return env[g.left] == env[g.right]
        if isinstance(g, Rel):
            if g.name not in model.relations:
                raise InterpretationError(f"the model has no relation {g.name}")
            return tuple(env[a] for a in g.args) in model.relations[g.name]
        if isinstance(g, Not):
            return not ev(g.body, env)
        if isinstance(g, And):
            return ev(g.left, env) and ev(g.right, env)
        if isinstance(g, Or):
            return ev(g.left, env) or ev(g.right, env)
        if isinstance(g, Implies):
            return (not ev(g.left, env)) or ev(g.right, env)
        if isinstance(g, Iff):
            return ev(g.left, env) == ev(g.right, env)
        if isinstance(g, ExistsFO):
            return any(ev(g.body, {**env, g.var: i}) for i in range(size))
        if isinstance(g, ForallFO):
            return all(ev(g.body, {**env, g.var: i}) for i in range(size))
        raise InterpretationError(f"{type(g).__name__} is not first-order over the signature")

    return ev(f, env)


# -- the theories T and T_k ----------------------------------------------------------------------

def t_axioms() -> list[Formula]:
    """Singletons exist, binary unions exist, an element with no members exists."""
    return [
        parse_formula("all x. ex y. all z. (p(z,y) <-> z = x)"),
        parse_formula("all x. all y. ex u. all z. (p(z,u) <-> (p(z,x) | p(z,y)))"),
        parse_formula("ex x. all y. ~p(y,x)"),
    ]


def tk_axioms(k: int) -> list[Formula]:
    """Axioms for ``k`` atoms together with a coding set for every subfamily.

    1. there are ``k`` pairwise distinct atoms;
    2. any ``k`` distinct atoms have a set coding each subfamily exactly;
    3. sets coding the same atoms are equal;
    4. coding relates atoms to sets.
    """
    limit = current_guards().max_oracle_len
    if not 1 <= k <= limit:
        raise GuardError(f"k must lie in 1..{limit}, got {k}")
    atoms = [f"a{i}" for i in range(1, k + 1)]
    is_atom = [Rel("atom", (a,)) for a in atoms]
    distinct = [Not(Eq(a, b)) for a, b in itertools.combinations(atoms, 2)]

    def exists_all(names, body):
        for v in reversed(names):
            body = ExistsFO(v, body)
        return body

    def forall_all(names, body):
        for v in reversed(names):
            body = ForallFO(v, body)
        return body

    codes = []
    for bits in itertools.product((False, True), repeat=k):
        lits = [Rel("code", (a, "y")) if b else Not(Rel("code", (a, "y"))) for a, b in zip(atoms, bits)]
        codes.append(ExistsFO("y", conj(Rel("set", ("y",)), *lits)))
    return [
        exists_all(atoms, conj(*is_atom, *distinct)),
        forall_all(atoms, Implies(conj(*is_atom, *distinct), conj(*codes))),
        parse_formula("all y1. all y2. ((set(y1) & set(y2) & "
                      "all x. (atom(x) -> (code(x,y1) <-> code(x,y2)))) -> y1 = y2)"),
        parse_formula("all x. all y. (code(x,y) -> (atom(x) & set(y)))"),
    ]


# -- bouquet size ---------------------------------------------------------------------------------

def bouquet_size(w: Word, interp: Interpretation, params: Mapping[str, object] | None,
                 segment: Segment) -> int:
    """Largest number of pairwise ``E*``-inequivalent elements of ``U*`` that
    coincide outside ``segment``."""
    if segment.hi > len(w):
        raise InterpretationError(f"segment [{segment.lo}, {segment.hi}) exceeds the word")
    ev = _Evaluator(w, interp, params)
    report, universe, _ = _check(ev)
    if not report:
        raise InterpretationError(f"interpretation is not respected: {report.reason}")
    outside = ((1 << len(w)) - 1) & ~segment.mask()
    groups: dict = {}
    for x in universe:
        groups.setdefault(tuple(m & outside for m in x), []).append(x)
    return max(len(_classes(ev, members)) for members in groups.values())
