"""Two-sorted monadic second-order formulas over labeled chains.

Point variables are lowercase identifiers, set variables uppercase ones.
``A<i>`` names the i-th predicate of the chain and ``W<j>`` an interpretation
parameter; both are free set constants and can never be bound.

Besides the MSO atoms the AST carries ``Rel`` atoms (``p(x,y)``,
``Code(x,y)``...) for first-order formulas over an interpreted signature, and
the core atoms ``Sing``/``PointLt`` produced by :func:`desugar`.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import FormulaSyntaxError

__all__ = [
    "Formula", "Lt", "Eq", "In", "SubSet", "EqSet", "Sing", "PointLt", "Rel",
    "Const", "Not", "And", "Or", "Implies", "Iff",
    "ExistsFO", "ForallFO", "ExistsSO", "ForallSO",
    "TRUE", "FALSE", "parse_formula", "formula_depth", "desugar",
    "pretty", "free_vars", "bound_vars", "all_names", "is_point_var",
    "is_set_name", "is_constant", "predicate_index", "conj", "disj",
    "substitute", "freshen", "alpha_equivalent", "is_core",
]


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Lt:
    left: str
    right: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class In:
    point: str
    set: str


@dataclass(frozen=True)
class SubSet:
    left: str
    right: str


@dataclass(frozen=True)
class EqSet:
    left: str
    right: str


@dataclass(frozen=True)
class Sing:
    var: str


@dataclass(frozen=True)
class PointLt:
    """Both arguments are singletons ``{x}``, ``{y}`` with ``x < y``."""
    left: str
    right: str


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ExistsFO:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallFO:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsSO:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallSO:
    var: str
    body: "Formula"


Atom = Union[Lt, Eq, In, SubSet, EqSet, Sing, PointLt, Rel, Const]
Binary = Union[And, Or, Implies, Iff]
Quantifier = Union[ExistsFO, ForallFO, ExistsSO, ForallSO]
Formula = Union[Atom, Not, Binary, Quantifier]

TRUE = Const(True)
FALSE = Const(False)

ATOM_TYPES = (Lt, Eq, In, SubSet, EqSet, Sing, PointLt, Rel, Const)
BINARY_TYPES = (And, Or, Implies, Iff)
QUANT_TYPES = (ExistsFO, ForallFO, ExistsSO, ForallSO)
FO_QUANTS = (ExistsFO, ForallFO)
SO_QUANTS = (ExistsSO, ForallSO)

_CONST_RE = re.compile(r"[AW]\d+")


def is_point_var(name: str) -> bool:
    return name[:1].islower()


def is_set_name(name: str) -> bool:
    return name[:1].isupper()


def is_constant(name: str) -> bool:
    """``A<i>`` predicates and ``W<j>`` parameters."""
    return _CONST_RE.fullmatch(name) is not None


def predicate_index(name: str) -> int | None:
    if name.startswith("A") and _CONST_RE.fullmatch(name):
        return int(name[1:])
    return None


def conj(*parts: Formula) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# -- traversal ---------------------------------------------------------------

def _atom_names(f: Atom) -> tuple[str, ...]:
    if isinstance(f, (Lt, Eq, SubSet, EqSet, PointLt)):
        return (f.left, f.right)
    if isinstance(f, In):
        return (f.point, f.set)
    if isinstance(f, Sing):
        return (f.var,)
    if isinstance(f, Rel):
        return f.args
    return ()


def free_vars(f: Formula) -> frozenset[str]:
    """Free names of ``f``, including the constants ``A<i>``/``W<j>``."""
    if isinstance(f, ATOM_TYPES):
        return frozenset(_atom_names(f))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY_TYPES):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def bound_vars(f: Formula) -> list[str]:
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, QUANT_TYPES):
            out.append(g.var)
            stack.append(g.body)
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, BINARY_TYPES):
            stack.extend((g.right, g.left))
    return out


def all_names(f: Formula) -> set[str]:
    return set(free_vars(f)) | set(bound_vars(f))


def formula_depth(f: Formula) -> int:
    """Quantifier depth; quantifiers of both sorts count one level each."""
    if isinstance(f, ATOM_TYPES):
        return 0
    if isinstance(f, Not):
        return formula_depth(f.body)
    if isinstance(f, BINARY_TYPES):
        return max(formula_depth(f.left), formula_depth(f.right))
    return formula_depth(f.body) + 1


def substitute(f: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free occurrences according to ``mapping``.

    Bound variables are left alone; callers must make sure no target name is
    captured (use :func:`freshen` first).
    """
    def go(g, shadow):
        if isinstance(g, ATOM_TYPES):
            m = {k: v for k, v in mapping.items() if k not in shadow}
            if not m:
                return g
            if isinstance(g, In):
                return In(m.get(g.point, g.point), m.get(g.set, g.set))
            if isinstance(g, Sing):
                return Sing(m.get(g.var, g.var))
            if isinstance(g, Rel):
                return Rel(g.name, tuple(m.get(a, a) for a in g.args))
            if isinstance(g, Const):
                return g
            return type(g)(m.get(g.left, g.left), m.get(g.right, g.right))
        if isinstance(g, Not):
            return Not(go(g.body, shadow))
        if isinstance(g, BINARY_TYPES):
            return type(g)(go(g.left, shadow), go(g.right, shadow))
        return type(g)(g.var, go(g.body, shadow | {g.var}))
    return go(f, frozenset())


class NameSupply:
    """Hands out identifiers of a requested sort that avoid a taken set."""

    def __init__(self, taken=()):
        self.taken = set(taken)

    def fresh(self, base: str) -> str:
        if base not in self.taken and not is_constant(base):
            self.taken.add(base)
            return base
        for k in itertools.count(1):
            cand = f"{base}_{k}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand
        raise AssertionError  # pragma: no cover


def freshen(f: Formula, supply: NameSupply) -> Formula:
    """Rename every binder of ``f`` so that all bound names are distinct and
    avoid ``supply.taken``; free names are reserved first."""
    supply.taken |= free_vars(f)

    def go(g, env):
        if isinstance(g, ATOM_TYPES):
            return substitute(g, env) if env else g
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, BINARY_TYPES):
            return type(g)(go(g.left, env), go(g.right, env))
        new = supply.fresh(g.var)
        return type(g)(new, go(g.body, {**env, g.var: new}))
    return go(f, {})


def alpha_equivalent(f: Formula, g: Formula) -> bool:
    def go(a, b, env_a, env_b, depth):
        if type(a) is not type(b):
            return False
        if isinstance(a, ATOM_TYPES):
            if isinstance(a, Const):
                return a == b
            if isinstance(a, Rel) and a.name != b.name:
                return False
            na, nb = _atom_names(a), _atom_names(b)
            if len(na) != len(nb):
                return False
            return all(env_a.get(x, x) == env_b.get(y, y) for x, y in zip(na, nb))
        if isinstance(a, Not):
            return go(a.body, b.body, env_a, env_b, depth)
        if isinstance(a, BINARY_TYPES):
            return (go(a.left, b.left, env_a, env_b, depth)
                    and go(a.right, b.right, env_a, env_b, depth))
        tag = f"#{depth}"
        return go(a.body, b.body, {**env_a, a.var: tag}, {**env_b, b.var: tag}, depth + 1)
    return go(f, g, {}, {}, 0)


# -- pretty printing -----------------------------------------------------------

_QUANT_KW = {ExistsFO: "ex", ForallFO: "all", ExistsSO: "ex2", ForallSO: "all2"}
_BIN_OP = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def pretty(f: Formula) -> str:
    if isinstance(f, Lt):
        return f"{f.left} < {f.right}"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, In):
        return f"{f.point} in {f.set}"
    if isinstance(f, SubSet):
        return f"{f.left} sub {f.right}"
    if isinstance(f, EqSet):
        return f"{f.left} =set {f.right}"
    if isinstance(f, Sing):
        return f"sing({f.var})"
    if isinstance(f, PointLt):
        return f"ptlt({f.left},{f.right})"
    if isinstance(f, Rel):
        return f"{f.name}({','.join(f.args)})"
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        inner = pretty(f.body)
        if isinstance(f.body, ATOM_TYPES) and not isinstance(f.body, (Rel, Sing, PointLt, Const)):
            inner = f"({inner})"
        elif isinstance(f.body, QUANT_TYPES):
            inner = f"({inner})"
        return f"~{inner}"
    if isinstance(f, BINARY_TYPES):
        return f"({_operand(f.left)} {_BIN_OP[type(f)]} {_operand(f.right)})"
    return f"{_QUANT_KW[type(f)]} {f.var}. {pretty(f.body)}"


def _operand(f: Formula) -> str:
    s = pretty(f)
    return f"({s})" if isinstance(f, QUANT_TYPES) else s


# -- parsing -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sym><->|->|=set(?![A-Za-z0-9_])|[()~&|<=.,])
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
""", re.VERBOSE)

_KEYWORDS = {"ex", "all", "ex2", "all2", "in", "sub", "true", "false", "sing", "ptlt"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, num_predicates: int | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.num_predicates = num_predicates
        self.scope: list[str] = []

    # token helpers
    def peek(self, k: int = 0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok[0] != "end":
            self.i += 1
        return tok

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        where = "end of input" if tok[0] == "end" else repr(tok[1])
        raise FormulaSyntaxError(f"{msg} (found {where})", tok[2])

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value or tok[0] == "end":
            self.i -= tok[0] != "end"
            self.error(f"expected {value!r}", tok)
        return tok

    # grammar
    def parse(self) -> Formula:
        f = self.formula()
        if self.peek()[0] != "end":
            self.error("unexpected trailing input")
        return f

    def formula(self) -> Formula:
        tok = self.peek()
        if tok[0] == "ident" and tok[1] in ("ex", "all", "ex2", "all2"):
            return self.quant()
        return self.iff()

    def quant(self) -> Formula:
        kw = self.next()[1]
        tok = self.next()
        if tok[0] != "ident" or tok[1] in _KEYWORDS:
            self.error("expected a variable after quantifier", tok)
        name = tok[1]
        second_order = kw in ("ex2", "all2")
        if second_order:
            if not is_set_name(name):
                self.error(f"'{kw}' binds set variables (uppercase), got {name!r}", tok)
            if is_constant(name):
                self.error(f"{name!r} is a constant and cannot be bound", tok)
        elif not is_point_var(name):
            self.error(f"'{kw}' binds point variables (lowercase), got {name!r}", tok)
        if name in self.scope:
            self.error(f"variable {name!r} is already bound on this path", tok)
        self.expect(".")
        self.scope.append(name)
        body = self.formula()
        self.scope.pop()
        cls = {"ex": ExistsFO, "all": ForallFO, "ex2": ExistsSO, "all2": ForallSO}[kw]
        return cls(name, body)

    def _binary_level(self, op: str, cls, sub, right_assoc=False):
        left = sub()
        if right_assoc:
            if self.peek()[1] == op and self.peek()[0] == "sym":
                self.next()
                return cls(left, self._binary_level(op, cls, sub, True))
            return left
        while self.peek()[1] == op and self.peek()[0] == "sym":
            self.next()
            left = cls(left, sub())
        return left

    def iff(self):
        return self._binary_level("<->", Iff, self.implies)

    def implies(self):
        return self._binary_level("->", Implies, self.disjunction, right_assoc=True)

    def disjunction(self):
        return self._binary_level("|", Or, self.conjunction)

    def conjunction(self):
        return self._binary_level("&", And, self.unary)

    def unary(self) -> Formula:
        tok = self.peek()
        if tok[1] == "~" and tok[0] == "sym":
            self.next()
            return Not(self.unary())
        if tok[1] == "(" and tok[0] == "sym":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if tok[0] == "ident" and tok[1] in ("ex", "all", "ex2", "all2"):
            return self.quant()
        return self.atom()

    def setterm(self) -> str:
        tok = self.next()
        if tok[0] != "ident" or tok[1] in _KEYWORDS or not is_set_name(tok[1]):
            self.error("expected a set term", tok)
        name = tok[1]
        idx = predicate_index(name)
        if idx is not None and self.num_predicates is not None and idx >= self.num_predicates:
            raise FormulaSyntaxError(
                f"unknown predicate {name!r} (only A0..A{self.num_predicates - 1} exist)"
                if self.num_predicates else f"unknown predicate {name!r} (no predicates declared)",
                tok[2])
        return name

    def fovar(self, tok) -> str:
        if tok[0] != "ident" or tok[1] in _KEYWORDS:
            self.error("expected a point variable", tok)
        if not is_point_var(tok[1]):
            self.error(f"sort mismatch: {tok[1]!r} is a set term where a point variable is required", tok)
        return tok[1]

    def atom(self) -> Formula:
        tok = self.next()
        kind, val, pos = tok
        if kind == "end":
            self.error("unexpected end of formula", tok)
        if kind == "sym":
            self.error("expected an atomic formula", tok)
        if val == "true":
            return TRUE
        if val == "false":
            return FALSE
        if val == "sing":
            self.expect("(")
            x = self.setterm()
            self.expect(")")
            return Sing(x)
        if val == "ptlt":
            self.expect("(")
            x = self.setterm()
            self.expect(",")
            y = self.setterm()
            self.expect(")")
            return PointLt(x, y)
        if val in _KEYWORDS:
            self.error("expected an atomic formula", tok)
        nxt = self.peek()
        if nxt[0] == "sym" and nxt[1] == "(":
            # relation symbol of an interpreted signature
            self.next()
            args = [self.fovar(self.next())]
            while self.peek()[1] == ",":
                self.next()
                args.append(self.fovar(self.next()))
            self.expect(")")
            return Rel(val, tuple(args))
        if is_point_var(val):
            op = self.next()
            if op[1] == "<" and op[0] == "sym":
                return Lt(val, self.fovar(self.next()))
            if op[1] == "=" and op[0] == "sym":
                return Eq(val, self.fovar(self.next()))
            if op[1] == "in" and op[0] == "ident":
                return In(val, self.setterm())
            if op[1] == "=set":
                self.error(f"sort mismatch: {val!r} is a point variable, '=set' compares sets", op)
            if op[1] == "sub":
                self.error(f"sort mismatch: {val!r} is a point variable, 'sub' compares sets", op)
            self.error("expected '<', '=' or 'in'", op)
        # set term on the left
        self.i -= 1
        left = self.setterm()
        op = self.next()
        if op[1] == "sub" and op[0] == "ident":
            return SubSet(left, self.setterm())
        if op[1] == "=set":
            return EqSet(left, self.setterm())
        if op[1] in ("<", "=") and op[0] == "sym":
            self.error(f"sort mismatch: {left!r} is a set term, {op[1]!r} compares points", op)
        self.error("expected 'sub' or '=set'", op)


def _rename_apart(f: Formula) -> Formula:
    written = set(free_vars(f)) | set(bound_vars(f))
    taken = set(free_vars(f))

    def rename(base: str) -> str:
        if base not in taken:
            taken.add(base)
            return base
        for k in itertools.count(1):
            cand = f"{base}_{k}"
            if cand not in taken and cand not in written:
                taken.add(cand)
                return cand
        raise AssertionError  # pragma: no cover

    def go(g, env):
        if isinstance(g, ATOM_TYPES):
            return substitute(g, env) if env else g
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, BINARY_TYPES):
            return type(g)(go(g.left, env), go(g.right, env))
        new = rename(g.var)
        return type(g)(new, go(g.body, {**env, g.var: new}))
    return go(f, {})


def parse_formula(text: str, num_predicates: int | None = None) -> Formula:
    """Parse ``text``; bound variables are renamed apart.

    ``num_predicates`` bounds the admissible ``A<i>`` constants; ``None``
    admits any.
    """
    f = _Parser(text, num_predicates).parse()
    return _rename_apart(f)


# -- desugaring ----------------------------------------------------------------

def desugar(f: Formula) -> Formula:
    """Replace point variables by singleton-guarded set variables.

    ``ex x. phi`` becomes ``ex2 Sx. (sing(Sx) & phi')`` and ``all x. phi``
    becomes ``all2 Sx. (sing(Sx) -> phi')``.  Free point variables map to
    free set variables named the same way.
    """
    supply = NameSupply(all_names(f))
    mapping: dict[str, str] = {}

    def lift(x: str) -> str:
        if x not in mapping:
            mapping[x] = supply.fresh("S" + x)
        return mapping[x]

    for name in sorted(free_vars(f)):
        if is_point_var(name):
            lift(name)

    def go(g):
        if isinstance(g, Lt):
            return PointLt(lift(g.left), lift(g.right))
        if isinstance(g, Eq):
            a, b = lift(g.left), lift(g.right)
            return And(SubSet(a, b), SubSet(b, a))
        if isinstance(g, In):
            return SubSet(lift(g.point), g.set)
        if isinstance(g, EqSet):
            return And(SubSet(g.left, g.right), SubSet(g.right, g.left))
        if isinstance(g, Rel):
            raise ValueError(f"relation atom {pretty(g)} is not part of the MSO language")
        if isinstance(g, ATOM_TYPES):
            return g
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, BINARY_TYPES):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, ExistsFO):
            s = supply.fresh("S" + g.var)
            mapping[g.var] = s
            return ExistsSO(s, And(Sing(s), go(g.body)))
        if isinstance(g, ForallFO):
            s = supply.fresh("S" + g.var)
            mapping[g.var] = s
            return ForallSO(s, Implies(Sing(s), go(g.body)))
        return type(g)(g.var, go(g.body))
    return go(f)


def is_core(f: Formula) -> bool:
    """True if ``f`` has no point variables and only core atoms."""
    def atoms(g) -> Iterator:
        if isinstance(g, ATOM_TYPES):
            yield g
        elif isinstance(g, Not):
            yield from atoms(g.body)
        elif isinstance(g, BINARY_TYPES):
            yield from atoms(g.left)
            yield from atoms(g.right)
        else:
            if isinstance(g, FO_QUANTS):
                yield g
            yield from atoms(g.body)
    return all(isinstance(a, (Sing, SubSet, PointLt, Const)) for a in atoms(f))
