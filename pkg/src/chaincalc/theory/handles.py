"""Canonical n-theories ``Th^n(M, A)`` and their composition.

A level-0 handle holds ``th^2(M, A)``, stored as its set of point types
``(membership, memberships to the left, memberships to the right)``; the
equivalent tower is available through :func:`theory_tower`.  A level ``k+1``
handle is the frozenset of level-``k`` handles of all one-set extensions
``(M, A, B)``.  Handles are interned, so ``is``/``==`` coincide with equality
of theories.
"""
from __future__ import annotations

from typing import Iterable

from ..chain import Concat, ChainExpr, Finite, OmegaPower, Word
from ..errors import ShapeError, charge, check_closure, check_length, check_level
from .store import STORE, content_hash, node_encoding
from .tower import (
    EQ, GT, LT, ThTower, mask_values, point_types, tower_from_point_types,
)


def _membership_mask(t: "Theory") -> int:
    mask = 0
    for a, _, _ in t.content:
        mask |= 1 << a
    return mask


_colmask_memo: dict = {}


def _column_mask(c: int, width: int) -> int:
    """Bitmask over letter values of the letters having bit ``c``."""
    key = (c, width)
    hit = _colmask_memo.get(key)
    if hit is None:
        hit = sum(1 << v for v in range(1 << width) if v >> c & 1)
        _colmask_memo[key] = hit
    return hit

__all__ = [
    "Theory", "make_theory", "empty_theory", "theory_of_word", "theory_sum",
    "omega_power", "theory_of_expr", "lower", "level_down",
    "drop_column", "generated_semigroup", "is_idempotent", "idempotent_power",
    "pretty_theory", "theory_tower", "point_type_tokens",
]


class Theory:
    """Interned handle for ``Th^level`` over ``width`` columns."""

    __slots__ = ("level", "width", "content", "_encoding", "_digest", "__weakref__")

    def __init__(self, level: int, width: int, content):
        self.level = level
        self.width = width
        self.content = content
        self._encoding = None
        self._digest = None

    def encoding(self) -> bytes:
        if self._encoding is None:
            kids = (theory_tower(self),) if self.level == 0 else self.content
            self._encoding = node_encoding(b"H", (self.level, self.width), b"", kids)
        return self._encoding

    def digest_bytes(self) -> bytes:
        if self._digest is None:
            self._digest = content_hash(self.encoding())
        return self._digest

    @property
    def digest(self) -> str:
        """Lowercase hex content address of the canonical serialization."""
        return self.digest_bytes().hex()

    def __add__(self, other: "Theory") -> "Theory":
        return theory_sum(self, other)

    def __len__(self) -> int:
        return len(self.content)

    def __repr__(self) -> str:
        return f"Theory(level={self.level}, width={self.width}, size={len(self)}, digest={self.digest[:12]})"


def make_theory(level: int, width: int, content, *, check: bool = False) -> Theory:
    content = frozenset(content)
    if check:
        if level == 0:
            letters, masks = 1 << width, 1 << (1 << width)
            for entry in content:
                a, lefts, rights = entry
                if not (0 <= a < letters and 0 <= lefts < masks and 0 <= rights < masks):
                    raise ShapeError(f"level-0 point type {entry!r} does not fit {width} columns")
        else:
            for c in content:
                if not isinstance(c, Theory) or c.level != level - 1 or c.width != width + 1:
                    raise ShapeError(
                        f"level-{level} content must hold level-{level - 1} handles over {width + 1} columns")
    key = ("H", level, width, content)
    return STORE.intern(key, lambda: Theory(level, width, content))


# -- theories of finite words ------------------------------------------------------------

_word_memo: dict = {}


def _word_theory(letters: tuple, width: int, n: int) -> Theory:
    key = (letters, width, n)
    hit = _word_memo.get(key)
    if hit is not None:
        return hit
    if n == 0:
        out = make_theory(0, width, point_types(letters))
    else:
        bit = 1 << width
        length = len(letters)
        kids = set()
        for subset in range(1 << length):
            ext = tuple(a | bit if subset >> k & 1 else a for k, a in enumerate(letters))
            kids.add(_word_theory(ext, width + 1, n - 1))
        out = make_theory(n, width, kids)
    _word_memo[key] = out
    return out


def theory_of_word(w: Word, n: int, sets: Iterable = ()) -> Theory:
    """``Th^n`` of ``w`` by direct enumeration of all subsets at every level.

    Extra ``sets`` become columns after the word's predicates.
    """
    check_level(n)
    check_length(len(w))
    labeled = w.with_columns(*sets) if sets else w
    return _word_theory(labeled.letters, labeled.width, n)


def empty_theory(n: int, width: int) -> Theory:
    """Theory of the empty chain: the identity for :func:`theory_sum`."""
    return _word_theory((), width, n)


# -- composition -----------------------------------------------------------------------------

_sum_memo: dict = {}


def theory_sum(t1: Theory, t2: Theory) -> Theory:
    """``Th^n(C + D)`` from ``Th^n(C)`` and ``Th^n(D)``; columns are unioned."""
    key = (t1, t2)
    hit = _sum_memo.get(key)
    if hit is not None:
        return hit
    if t1.level != t2.level or t1.width != t2.width:
        raise ShapeError(
            f"cannot add Th^{t1.level} over {t1.width} columns and Th^{t2.level} over {t2.width} columns")
    if t1.level == 0:
        charge()
        # points of C additionally see every membership of D to their right,
        # points of D every membership of C to their left
        left_mems = _membership_mask(t1)
        right_mems = _membership_mask(t2)
        out = make_theory(0, t1.width,
                          {(a, lo, hi | right_mems) for a, lo, hi in t1.content}
                          | {(a, lo | left_mems, hi) for a, lo, hi in t2.content})
    else:
        # a subset of C + D splits into independent parts on C and on D
        out = make_theory(t1.level, t1.width, {theory_sum(s, u) for s in t1.content for u in t2.content})
    _sum_memo[key] = out
    return out


def generated_semigroup(gens: Iterable[Theory]) -> frozenset[Theory]:
    """Closure of ``gens`` under :func:`theory_sum` (no identity added)."""
    gens = list(dict.fromkeys(gens))
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = theory_sum(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        check_closure(len(seen))
        frontier = nxt
    return frozenset(seen)


def is_idempotent(t: Theory) -> bool:
    return theory_sum(t, t) is t


def idempotent_power(t: Theory) -> tuple[int, Theory]:
    """Least ``k >= 1`` with ``t^k`` idempotent, and that power."""
    powers = [t]
    index = {t: 1}
    while True:
        nxt = theory_sum(powers[-1], t)
        if nxt in index:
            start = index[nxt]
            period = len(powers) + 1 - start
            # the idempotent is the unique t^k in the cycle with period | k
            k = start + (-start) % period
            return k, powers[k - 1]
        powers.append(nxt)
        index[nxt] = len(powers)


_omega_memo: dict = {}


def omega_power(t: Theory) -> Theory:
    """``Th^n`` of ``C_0 + C_1 + ...`` (omega summands) with ``Th^n(C_i) = t``.

    At level ``k+1`` each extension set splits into independent choices of a
    level-``k`` theory in every summand.  By Ramsey's theorem the sum of any
    omega-sequence over a finite semigroup is ``x + omega(e)`` with ``x`` in
    the generated semigroup and ``e`` idempotent, and every such pair is
    realized, so only those values need to be formed.
    """
    check_level(t.level)
    hit = _omega_memo.get(t)
    if hit is not None:
        return hit
    if t.level == 0:
        # first summand: everything of the tail to the right; later summands:
        # every membership on both sides
        mems = _membership_mask(t)
        out = make_theory(0, t.width, {(a, lo, mems) for a, lo, _ in t.content}
                          | {(a, mems, mems) for a, _, _ in t.content})
    else:
        semigroup = generated_semigroup(t.content)
        idempotents = [e for e in semigroup if is_idempotent(e)]
        out = make_theory(t.level, t.width, {
            theory_sum(x, omega_power(e)) for e in idempotents for x in semigroup
        })
    _omega_memo[t] = out
    return out


def theory_of_expr(e: ChainExpr, n: int) -> Theory:
    if isinstance(e, Finite):
        return theory_of_word(e.word, n)
    if isinstance(e, Concat):
        return theory_sum(theory_of_expr(e.left, n), theory_of_expr(e.right, n))
    if isinstance(e, OmegaPower):
        return omega_power(theory_of_expr(e.body, n))
    raise TypeError(f"not a chain expression: {e!r}")


# -- projections ---------------------------------------------------------------------------------

_drop_memo: dict = {}


def drop_column(t: Theory, col: int) -> Theory:
    """Theory of the same model with column ``col`` deleted."""
    if not 0 <= col < t.width:
        raise ShapeError(f"column {col} out of range for width {t.width}")
    key = (t, col)
    hit = _drop_memo.get(key)
    if hit is None:
        if t.level == 0:
            low = (1 << col) - 1

            def cut(m: int) -> int:
                return (m & low) | ((m >> (col + 1)) << col)

            def cut_mask(mask: int) -> int:
                out = 0
                for v in mask_values(mask):
                    out |= 1 << cut(v)
                return out
            hit = make_theory(0, t.width - 1, {
                (cut(a), cut_mask(lo), cut_mask(hi)) for a, lo, hi in t.content
            })
        else:
            hit = make_theory(t.level, t.width - 1, {drop_column(c, col) for c in t.content})
        _drop_memo[key] = hit
    return hit


_lower_memo: dict = {}


def lower(t: Theory) -> Theory:
    """``Th^(k-1)`` of the same model from ``Th^k``."""
    if t.level == 0:
        raise ShapeError("cannot lower a level-0 theory")
    hit = _lower_memo.get(t)
    if hit is None:
        if t.level == 1:
            # every child is Th^0(M, A, B); deleting B gives Th^0(M, A)
            # whichever child is picked
            hit = drop_column(next(iter(t.content)), t.width)
        else:
            hit = make_theory(t.level - 1, t.width, {lower(c) for c in t.content})
        _lower_memo[t] = hit
    return hit


def level_down(t: Theory, level: int) -> Theory:
    if level > t.level or level < 0:
        raise ShapeError(f"cannot bring a level-{t.level} theory to level {level}")
    while t.level > level:
        t = lower(t)
    return t


# -- display -------------------------------------------------------------------------------------------

_REL_ORDER = {EQ: 0, LT: 1, GT: 2}


def _bits(m: int, width: int) -> str:
    return "".join("1" if m >> i & 1 else "0" for i in range(width))


def theory_tower(t: Theory) -> ThTower:
    """The point-free depth-2 tower ``th^2`` of a level-0 handle."""
    if t.level != 0:
        raise ShapeError("only level-0 handles carry a th^2 tower")
    return tower_from_point_types(t.content, t.width)


def point_type_tokens(entry, width: int) -> list[str]:
    a, lefts, rights = entry
    if width == 0:
        return [EQ] + ([LT] if rights else []) + ([GT] if lefts else [])
    return ([f"{EQ}:{_bits(a, width)}"]
            + [f"{LT}:{_bits(a, width)}/{_bits(v, width)}" for v in mask_values(rights)]
            + [f"{GT}:{_bits(a, width)}/{_bits(v, width)}" for v in mask_values(lefts)])


def pretty_theory(t: Theory) -> str:
    """Nested-set rendering.  Level 0 lists the point types; over zero columns
    a point type is a set of ``eq``/``lt``/``gt`` tokens."""
    if t.level == 0:
        types = [point_type_tokens(e, t.width) for e in t.content]
        types.sort(key=lambda toks: [(_REL_ORDER[x.split(':')[0]], x) for x in toks])
        return "{" + ",".join("{" + ",".join(toks) + "}" for toks in types) + "}"
    parts = sorted(pretty_theory(c) for c in t.content)
    return "{" + ",".join(parts) + "}"


def clear_theory_caches() -> None:
    for memo in (_word_memo, _sum_memo, _omega_memo, _drop_memo, _lower_memo):
        memo.clear()
