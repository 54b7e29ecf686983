"""Atomic profiles: the quotient of ``Th^n`` that formula evaluation reads.

A level-0 profile of ``(M, A_0, ..., A_{l-1})`` records, per column, whether
it is empty, a singleton or larger; which columns are included in which; and
the order of the points of singleton columns.  A level ``k+1`` profile is the
set of level-``k`` profiles of all one-set extensions, exactly as for
theories.  The level-0 facts compose under sums and omega-sums, so the whole
hierarchy composes by the same recursion as :mod:`.handles`, while staying
small enough to reach depth 3 over omega.

:func:`project` maps a theory to its profile; it commutes with
:func:`~.handles.theory_sum` and :func:`~.handles.omega_power`.
"""
from __future__ import annotations

from typing import Iterable

from ..chain import Concat, ChainExpr, Finite, OmegaPower, Word
from ..errors import ShapeError, charge, check_closure, check_length, check_level
from .handles import Theory, _column_mask, level_down
from .store import STORE, content_hash, node_encoding

__all__ = [
    "Profile", "EMPTY", "SINGLE", "MANY", "make_profile", "base_facts", "project",
    "profile_of_word", "profile_sum", "profile_omega", "profile_of_expr",
    "profile_drop_column", "profile_lower", "profile_facts",
]

EMPTY, SINGLE, MANY = 0, 1, 2


class Profile:
    """Interned atomic profile of level ``level`` over ``width`` columns.

    Level 0 content is a triple ``(status, sub, lt)``: ``status[c]`` is one of
    EMPTY/SINGLE/MANY, and ``sub``/``lt`` are bitmasks over column pairs, bit
    ``i * width + j`` meaning ``A_i`` is included in ``A_j`` / ``A_i`` and
    ``A_j`` are singletons with the point of ``A_i`` first.
    """

    __slots__ = ("level", "width", "content", "_digest", "__weakref__")

    def __init__(self, level: int, width: int, content):
        self.level = level
        self.width = width
        self.content = content
        self._digest = None

    def digest_bytes(self) -> bytes:
        if self._digest is None:
            if self.level == 0:
                status, sub, lt = self.content
                nbytes = max(1, (self.width * self.width + 7) // 8)
                payload = (bytes(status) + sub.to_bytes(nbytes, "big")
                           + lt.to_bytes(nbytes, "big"))
                enc = node_encoding(b"P", (0, self.width), payload, ())
            else:
                enc = node_encoding(b"P", (self.level, self.width), b"", self.content)
            self._digest = content_hash(enc)
        return self._digest

    @property
    def digest(self) -> str:
        return self.digest_bytes().hex()

    def __add__(self, other: "Profile") -> "Profile":
        return profile_sum(self, other)

    def __len__(self) -> int:
        return 1 if self.level == 0 else len(self.content)

    def __repr__(self) -> str:
        return f"Profile(level={self.level}, width={self.width}, size={len(self)}, digest={self.digest[:12]})"


def make_profile(level: int, width: int, content) -> Profile:
    if level:
        content = frozenset(content)
    key = ("P", level, width, content)
    return STORE.intern(key, lambda: Profile(level, width, content))


def _bit(i: int, j: int, width: int) -> int:
    return 1 << (i * width + j)


def base_facts(letters: tuple, width: int) -> tuple:
    """Level-0 profile content of a finite word given by its letter masks."""
    counts = [0] * width
    first = [None] * width
    for k, a in enumerate(letters):
        for c in range(width):
            if a >> c & 1:
                counts[c] += 1
                if first[c] is None:
                    first[c] = k
    status = tuple(min(n, MANY) for n in counts)
    sub = lt = 0
    for i in range(width):
        for j in range(width):
            if all(not (a >> i & 1) or a >> j & 1 for a in letters):
                sub |= _bit(i, j, width)
            if status[i] == SINGLE and status[j] == SINGLE and first[i] < first[j]:
                lt |= _bit(i, j, width)
    return status, sub, lt


_word_memo: dict = {}


def _word_profile(letters: tuple, width: int, n: int) -> Profile:
    key = (letters, width, n)
    hit = _word_memo.get(key)
    if hit is None:
        if n == 0:
            hit = make_profile(0, width, base_facts(letters, width))
        else:
            bit = 1 << width
            kids = set()
            for subset in range(1 << len(letters)):
                ext = tuple(a | bit if subset >> k & 1 else a for k, a in enumerate(letters))
                kids.add(_word_profile(ext, width + 1, n - 1))
            hit = make_profile(n, width, kids)
        _word_memo[key] = hit
    return hit


def profile_of_word(w: Word, n: int, sets: Iterable = ()) -> Profile:
    """Profile of ``w`` by direct enumeration of all subsets at every level."""
    check_level(n)
    check_length(len(w))
    labeled = w.with_columns(*sets) if sets else w
    return _word_profile(labeled.letters, labeled.width, n)


_sum_memo: dict = {}


def profile_sum(p1: Profile, p2: Profile) -> Profile:
    key = (p1, p2)
    hit = _sum_memo.get(key)
    if hit is not None:
        return hit
    if p1.level != p2.level or p1.width != p2.width:
        raise ShapeError(
            f"cannot add profiles of level {p1.level}/{p2.level} over {p1.width}/{p2.width} columns")
    width = p1.width
    if p1.level == 0:
        charge()
        s1, sub1, lt1 = p1.content
        s2, sub2, lt2 = p2.content
        status = tuple(min(a + b, MANY) for a, b in zip(s1, s2))
        lt = 0
        for i in range(width):
            if status[i] != SINGLE:
                continue
            for j in range(width):
                if status[j] != SINGLE:
                    continue
                b = _bit(i, j, width)
                i_left, j_left = s1[i] == SINGLE, s1[j] == SINGLE
                if i_left and j_left:
                    lt |= lt1 & b
                elif not i_left and not j_left:
                    lt |= lt2 & b
                elif i_left:
                    lt |= b
        hit = make_profile(0, width, (status, sub1 & sub2, lt))
    else:
        hit = make_profile(p1.level, width, {profile_sum(a, b) for a in p1.content for b in p2.content})
    _sum_memo[key] = hit
    return hit


def _semigroup(gens) -> list[Profile]:
    gens = list(dict.fromkeys(gens))
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = profile_sum(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        check_closure(len(seen))
        frontier = nxt
    return list(seen)


_omega_memo: dict = {}


def profile_omega(p: Profile) -> Profile:
    """Profile of an omega-sum of copies of a chain with profile ``p``."""
    check_level(p.level)
    hit = _omega_memo.get(p)
    if hit is not None:
        return hit
    if p.level == 0:
        status, sub, _ = p.content
        # every nonempty column meets infinitely many summands
        hit = make_profile(0, p.width, (tuple(MANY if s else EMPTY for s in status), sub, 0))
    else:
        semigroup = _semigroup(p.content)
        idempotents = [e for e in semigroup if profile_sum(e, e) is e]
        hit = make_profile(p.level, p.width, {
            profile_sum(x, profile_omega(e)) for e in idempotents for x in semigroup
        })
    _omega_memo[p] = hit
    return hit


def profile_of_expr(e: ChainExpr, n: int) -> Profile:
    """Profile of a chain expression by the composition fold."""
    if isinstance(e, Finite):
        return profile_of_word(e.word, n)
    if isinstance(e, Concat):
        return profile_sum(profile_of_expr(e.left, n), profile_of_expr(e.right, n))
    if isinstance(e, OmegaPower):
        return profile_omega(profile_of_expr(e.body, n))
    raise TypeError(f"not a chain expression: {e!r}")


_proj_memo: dict = {}


def _facts_of_point_types(types, width: int) -> tuple:
    status = []
    for c in range(width):
        colmask = _column_mask(c, width)
        members = [(lo, hi) for a, lo, hi in types if a >> c & 1]
        if not members:
            status.append(EMPTY)
        elif any(not (lo | hi) & colmask for lo, hi in members):
            status.append(SINGLE)
        else:
            status.append(MANY)
    sub = lt = 0
    for i in range(width):
        for j in range(width):
            if all(not (a >> i & 1) or a >> j & 1 for a, _, _ in types):
                sub |= _bit(i, j, width)
            if status[i] == SINGLE and status[j] == SINGLE and any(
                    a >> i & 1 and hi & _column_mask(j, width) for a, _, hi in types):
                lt |= _bit(i, j, width)
    return tuple(status), sub, lt


def project(t: Theory) -> Profile:
    """The profile determined by a theory."""
    hit = _proj_memo.get(t)
    if hit is None:
        if t.level == 0:
            hit = make_profile(0, t.width, _facts_of_point_types(t.content, t.width))
        else:
            hit = make_profile(t.level, t.width, {project(c) for c in t.content})
        _proj_memo[t] = hit
    return hit


_drop_memo: dict = {}


def profile_drop_column(p: Profile, col: int) -> Profile:
    if not 0 <= col < p.width:
        raise ShapeError(f"column {col} out of range for width {p.width}")
    key = (p, col)
    hit = _drop_memo.get(key)
    if hit is None:
        w = p.width
        if p.level == 0:
            status, sub, lt = p.content
            keep = [c for c in range(w) if c != col]
            nsub = nlt = 0
            for a, i in enumerate(keep):
                for b, j in enumerate(keep):
                    if sub & _bit(i, j, w):
                        nsub |= _bit(a, b, w - 1)
                    if lt & _bit(i, j, w):
                        nlt |= _bit(a, b, w - 1)
            hit = make_profile(0, w - 1, (tuple(status[c] for c in keep), nsub, nlt))
        else:
            hit = make_profile(p.level, w - 1, {profile_drop_column(c, col) for c in p.content})
        _drop_memo[key] = hit
    return hit


_lower_memo: dict = {}


def profile_lower(p: Profile) -> Profile:
    if p.level == 0:
        raise ShapeError("cannot lower a level-0 profile")
    hit = _lower_memo.get(p)
    if hit is None:
        if p.level == 1:
            hit = profile_drop_column(next(iter(p.content)), p.width)
        else:
            hit = make_profile(p.level - 1, p.width, {profile_lower(c) for c in p.content})
        _lower_memo[p] = hit
    return hit


def profile_facts(p) -> tuple:
    """Level-0 facts ``(status, sub, lt)`` of a profile or a theory of any level."""
    if isinstance(p, Theory):
        return project(level_down(p, 0)).content
    while p.level:
        p = profile_lower(p)
    return p.content


def clear_profile_caches() -> None:
    for memo in (_word_memo, _sum_memo, _omega_memo, _proj_memo, _drop_memo, _lower_memo):
        memo.clear()
