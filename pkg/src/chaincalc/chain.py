"""Finite labeled chains, chain expressions and the brute-force oracle.

A word of width ``m`` is a tuple of letters; letter bit ``i`` says whether
the position belongs to predicate ``A<i>``.  Position sets are handled
internally as int bitmasks (bit ``k`` = position ``k``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import ChainSyntaxError, EvaluationError, ShapeError, current_guards, GuardError
from .formula import (
    And, Const, Eq, EqSet, ExistsFO, ExistsSO, ForallFO, ForallSO, Formula, Iff,
    Implies, In, Lt, Not, Or, PointLt, Rel, Sing, SubSet, free_vars, is_point_var,
    predicate_index, pretty,
)

__all__ = [
    "Word", "Finite", "Concat", "OmegaPower", "ChainExpr", "Segment",
    "CutPartition", "parse_chain_expr", "oracle_eval", "point_atomic_type",
    "shuffle_sets", "to_mask", "from_mask", "is_empty_expr",
]


def to_mask(positions: Iterable[int] | int) -> int:
    if isinstance(positions, int):
        return positions
    mask = 0
    for p in positions:
        if p < 0:
            raise ShapeError(f"negative position {p}")
        mask |= 1 << p
    return mask


def from_mask(mask: int) -> frozenset[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return frozenset(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ShapeError("letter width must be non-negative")
        limit = 1 << self.width
        for a in self.letters:
            if not 0 <= a < limit:
                raise ShapeError(f"letter {a} does not fit width {self.width}")

    @classmethod
    def parse(cls, text: str, m: int) -> "Word":
        """Parse a bit string of ``m``-character letters.

        Character ``i`` of a letter is the membership bit for ``A<i>``.  For
        ``m = 0`` each ``.`` denotes one (unlabeled) position.
        """
        if m == 0:
            if set(text) - {"."}:
                raise ChainSyntaxError(f"invalid letter in {text!r}: width-0 words are written with '.'")
            return cls((0,) * len(text), 0)
        if set(text) - {"0", "1"}:
            raise ChainSyntaxError(f"invalid letter in {text!r}: letters are bit strings")
        if len(text) % m:
            raise ChainSyntaxError(f"bit string {text!r} is not a sequence of width-{m} letters")
        letters = []
        for k in range(0, len(text), m):
            chunk = text[k:k + m]
            letters.append(sum(1 << i for i, ch in enumerate(chunk) if ch == "1"))
        return cls(tuple(letters), m)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if self.width == 0:
            return "." * len(self.letters)
        return "".join(
            "".join("1" if a >> i & 1 else "0" for i in range(self.width)) for a in self.letters
        )

    def __add__(self, other: "Word") -> "Word":
        if other.width != self.width:
            raise ShapeError("cannot concatenate words of different widths")
        return Word(self.letters + other.letters, self.width)

    def predicate(self, i: int) -> int:
        """Bitmask of the positions in ``A<i>``."""
        if not 0 <= i < self.width:
            raise EvaluationError(f"predicate A{i} does not exist (width {self.width})")
        return sum(1 << k for k, a in enumerate(self.letters) if a >> i & 1)

    def with_columns(self, *sets) -> "Word":
        """Append extra predicate columns, one per position set."""
        masks = [to_mask(s) for s in sets]
        full = (1 << len(self)) - 1
        for s in masks:
            if s & ~full:
                raise ShapeError(f"position set {sorted(from_mask(s))} exceeds word length {len(self)}")
        letters = tuple(
            a | sum(((s >> k) & 1) << (self.width + j) for j, s in enumerate(masks))
            for k, a in enumerate(self.letters)
        )
        return Word(letters, self.width + len(masks))

    def slice(self, lo: int, hi: int) -> "Word":
        return Word(self.letters[lo:hi], self.width)


@dataclass(frozen=True)
class Segment:
    """Half-open interval ``[lo, hi)`` of positions."""
    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ShapeError(f"invalid segment [{self.lo}, {self.hi})")

    def mask(self) -> int:
        return ((1 << self.hi) - 1) ^ ((1 << self.lo) - 1)

    def is_initial(self) -> bool:
        return self.lo == 0

    def is_final(self, length: int) -> bool:
        return self.hi == length


@dataclass(frozen=True)
class CutPartition:
    """Cuts ``0 = c_0 < c_1 < ... < c_k = len`` splitting a word into blocks."""
    cuts: tuple[int, ...]

    def __post_init__(self):
        c = self.cuts
        if len(c) < 2 or c[0] != 0 or any(a >= b for a, b in zip(c, c[1:])):
            raise ShapeError(f"cuts must be strictly increasing from 0, got {c}")

    @classmethod
    def from_interior(cls, length: int, interior: Iterable[int]) -> "CutPartition":
        return cls((0, *sorted(interior), length))

    @property
    def length(self) -> int:
        return self.cuts[-1]

    def __len__(self) -> int:
        return len(self.cuts) - 1

    def blocks(self) -> list[Segment]:
        return [Segment(a, b) for a, b in zip(self.cuts, self.cuts[1:])]


# -- chain expressions -------------------------------------------------------------

@dataclass(frozen=True)
class Finite:
    word: Word


@dataclass(frozen=True)
class Concat:
    left: "ChainExpr"
    right: "ChainExpr"


@dataclass(frozen=True)
class OmegaPower:
    body: "ChainExpr"


ChainExpr = Union[Finite, Concat, OmegaPower]


def is_empty_expr(e: ChainExpr) -> bool:
    if isinstance(e, Finite):
        return len(e.word) == 0
    if isinstance(e, Concat):
        return is_empty_expr(e.left) and is_empty_expr(e.right)
    return is_empty_expr(e.body)


_CHAIN_TOKEN = re.compile(r"\s*(?:(?P<word>w:[01.]*)|(?P<omega>\^w)|(?P<sym>[()+]))")


def parse_chain_expr(text: str, m: int) -> ChainExpr:
    """Parse ``expr := term ("+" term)*``, ``term := atom | atom "^w"``,
    ``atom := "w:" bits | "(" expr ")"``."""
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mt = _CHAIN_TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            raise ChainSyntaxError(f"unexpected input at position {pos}: {text[pos:]!r}")
        tokens.append((mt.lastgroup, mt.group(mt.lastgroup), mt.start(mt.lastgroup)))
        pos = mt.end()
    tokens.append(("end", "", len(text)))
    i = 0

    def peek():
        return tokens[i]

    def advance():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        node = term()
        while peek()[1] == "+":
            advance()
            node = Concat(node, term())
        return node

    def term():
        node = atom()
        if peek()[0] == "omega":
            tok = advance()
            if is_empty_expr(node):
                raise ChainSyntaxError(f"omega-power of an empty chain at position {tok[2]}")
            node = OmegaPower(node)
        return node

    def atom():
        kind, val, at = advance()
        if kind == "word":
            try:
                return Finite(Word.parse(val[2:], m))
            except ChainSyntaxError as exc:
                raise ChainSyntaxError(f"{exc} at position {at}") from None
        if val == "(":
            node = expr()
            if peek()[1] != ")":
                raise ChainSyntaxError(f"expected ')' at position {peek()[2]}")
            advance()
            return node
        where = "end of input" if kind == "end" else f"position {at}"
        raise ChainSyntaxError(f"expected 'w:<bits>' or '(' at {where}")

    node = expr()
    if peek()[0] != "end":
        raise ChainSyntaxError(f"unexpected trailing input at position {peek()[2]}")
    return node


# -- brute-force oracle ----------------------------------------------------------------

def _resolve_assignment(assignment: Mapping[str, object] | None) -> dict[str, int]:
    env: dict[str, int] = {}
    for name, value in (assignment or {}).items():
        if is_point_var(name):
            if not isinstance(value, int):
                raise EvaluationError(f"point variable {name} must be assigned a position")
            env[name] = value
        else:
            env[name] = to_mask(value) if not isinstance(value, int) else value
    return env


def oracle_eval(w: Word, f: Formula, assignment: Mapping[str, object] | None = None,
                *, max_len: int | None = None) -> bool:
    """Decide ``w |= f`` by exhaustive quantification.

    Point variables are assigned positions, set variables position sets (any
    iterable of positions, or an int bitmask).  Set quantifiers range over all
    ``2**len(w)`` subsets, so ``len(w)`` is bounded by the oracle guard.
    """
    limit = current_guards().max_oracle_len if max_len is None else max_len
    n = len(w)
    if n > limit:
        raise GuardError(f"word length {n} exceeds the oracle guard {limit}")
    env = _resolve_assignment(assignment)
    for name in free_vars(f):
        if name not in env and predicate_index(name) is None:
            raise EvaluationError(f"free variable {name} is unassigned")
    preds = [w.predicate(i) for i in range(w.width)]
    full = (1 << n) - 1

    def setval(name: str, env) -> int:
        if name in env:
            return env[name]
        idx = predicate_index(name)
        if idx is None:
            raise EvaluationError(f"free variable {name} is unassigned")
        if idx >= len(preds):
            raise EvaluationError(f"predicate {name} does not exist (width {w.width})")
        return preds[idx]

    def ev(g, env) -> bool:
        if isinstance(g, Lt):
            return env[g.left] < env[g.right]
        if isinstance(g, Eq):
            return env[g.left] == env[g.right]
        if isinstance(g, In):
            return bool(setval(g.set, env) >> env[g.point] & 1)
        if isinstance(g, SubSet):
            return setval(g.left, env) & ~setval(g.right, env) == 0
        if isinstance(g, EqSet):
            return setval(g.left, env) == setval(g.right, env)
        if isinstance(g, Sing):
            x = setval(g.var, env)
            return x != 0 and x & (x - 1) == 0
        if isinstance(g, PointLt):
            x, y = setval(g.left, env), setval(g.right, env)
            singles = x and not x & (x - 1) and y and not y & (y - 1)
            return bool(singles) and x < y
        if isinstance(g, Const):
            return g.value
        if isinstance(g, Rel):
            raise EvaluationError(f"relation atom {pretty(g)} cannot be evaluated on a chain")
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
            return any(ev(g.body, {**env, g.var: k}) for k in range(n))
        if isinstance(g, ForallFO):
            return all(ev(g.body, {**env, g.var: k}) for k in range(n))
        if isinstance(g, ExistsSO):
            return any(ev(g.body, {**env, g.var: s}) for s in range(full + 1))
        if isinstance(g, ForallSO):
            return all(ev(g.body, {**env, g.var: s}) for s in range(full + 1))
        raise TypeError(f"not a formula: {g!r}")

    return ev(f, env)


def point_atomic_type(w: Word, extra_sets: Iterable, a: int) -> frozenset[tuple[str, bool]]:
    """Membership literals of position ``a``: ``("A0", True)`` reads
    ``x in A0``, ``("X1", False)`` reads ``x notin X1``.

    Extra sets are named ``X0``, ``X1``... in the order given.
    """
    if not 0 <= a < len(w):
        raise ShapeError(f"position {a} out of range for a word of length {len(w)}")
    lits = [(f"A{i}", bool(w.letters[a] >> i & 1)) for i in range(w.width)]
    for j, s in enumerate(extra_sets):
        lits.append((f"X{j}", bool(to_mask(s) >> a & 1)))
    return frozenset(lits)


def shuffle_sets(xs, ys, cuts: CutPartition, index: Iterable[int]) -> tuple[frozenset[int], ...]:
    """Blockwise shuffle: take ``xs`` on blocks in ``index`` and ``ys`` elsewhere."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise ShapeError(f"set tuples differ in length ({len(xs)} vs {len(ys)})")
    chosen = set(index)
    nblocks = len(cuts)
    if any(not 0 <= j < nblocks for j in chosen):
        raise ShapeError(f"index set {sorted(chosen)} outside the {nblocks} blocks")
    full = (1 << cuts.length) - 1
    take_x = 0
    for j, seg in enumerate(cuts.blocks()):
        if j in chosen:
            take_x |= seg.mask()
    out = []
    for x, y in zip(xs, ys):
        mx, my = to_mask(x), to_mask(y)
        if (mx | my) & ~full:
            raise ShapeError(f"position set exceeds the partitioned length {cuts.length}")
        out.append(from_mask((mx & take_x) | (my & ~take_x & full)))
    return tuple(out)
