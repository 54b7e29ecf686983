"""Point-type towers ``th^n(M, A, a)``.

A tower of depth ``n`` over ``p`` points and ``l`` columns stores its base
pattern (the atomic facts about the point tuple) and, for ``n > 0``, the set
of depth ``n-1`` towers obtained by appending one more point.  Keeping the
base pattern at every level lets :func:`th_sum` recurse without consulting
the original models.

Base patterns: ``ranks`` is a dense ranking of the points (equal ranks mean
equal points), ``mems`` the membership bitmask of each point.
"""
from __future__ import annotations

from ..chain import Word
from ..errors import ShapeError, check_length, check_level
from .store import STORE, content_hash, node_encoding

__all__ = [
    "ThTower", "LEFT", "RIGHT", "make_tower", "th_tower", "truncate", "th_sum",
    "th_omega", "drop_tower_column", "dense_ranks", "point_types",
    "tower_from_point_types", "point_types_from_tower", "mask_values",
]

LEFT, RIGHT = 0, 1


class ThTower:
    __slots__ = ("points", "width", "depth", "ranks", "mems", "children",
                 "_encoding", "_digest",
                 "__weakref__")

    def __init__(self, points, width, depth, ranks, mems, children):
        self.points = points
        self.width = width
        self.depth = depth
        self.ranks = ranks
        self.mems = mems
        self.children = children
        self._encoding = None
        self._digest = None

    def encoding(self) -> bytes:
        if self._encoding is None:
            p, l = self.points, self.width
            order = bytes(
                0 if self.ranks[i] == self.ranks[j] else (1 if self.ranks[i] < self.ranks[j] else 2)
                for i in range(p) for j in range(p)
            )
            member = bytes((self.mems[i] >> c) & 1 for i in range(p) for c in range(l))
            self._encoding = node_encoding(b"T", (p, l, self.depth), order + member, self.children)
        return self._encoding

    def digest_bytes(self) -> bytes:
        if self._digest is None:
            self._digest = content_hash(self.encoding())
        return self._digest

    @property
    def digest(self) -> str:
        return self.digest_bytes().hex()

    def __repr__(self) -> str:
        return (f"ThTower(points={self.points}, width={self.width}, depth={self.depth}, "
                f"ranks={self.ranks}, mems={self.mems}, children={len(self.children)})")


def dense_ranks(positions) -> tuple[int, ...]:
    order = {v: i for i, v in enumerate(sorted(set(positions)))}
    return tuple(order[v] for v in positions)


def make_tower(points: int, width: int, depth: int, ranks: tuple, mems: tuple,
               children: frozenset = frozenset()) -> ThTower:
    key = ("T", points, width, depth, ranks, mems, children)
    return STORE.intern(key, lambda: ThTower(points, width, depth, ranks, mems, children))


_word_memo: dict = {}


def _tower_of(letters: tuple, width: int, points: tuple, depth: int) -> ThTower:
    key = (letters, width, points, depth)
    hit = _word_memo.get(key)
    if hit is not None:
        return hit
    ranks = dense_ranks(points)
    mems = tuple(letters[a] for a in points)
    if depth == 0:
        children = frozenset()
    else:
        children = frozenset(
            _tower_of(letters, width, points + (b,), depth - 1) for b in range(len(letters))
        )
    t = make_tower(len(points), width, depth, ranks, mems, children)
    _word_memo[key] = t
    return t


def point_types(letters: tuple) -> frozenset:
    """Depth-1 point types of a word as ``(membership, left, right)`` triples.

    ``left``/``right`` are bitmasks over letter values: bit ``v`` is set when
    a position with membership ``v`` lies strictly before/after.  This is a
    lossless encoding of ``th^2`` with no points.
    """
    n = len(letters)
    rights = [0] * n
    acc = 0
    for k in range(n - 1, -1, -1):
        rights[k] = acc
        acc |= 1 << letters[k]
    out = set()
    left = 0
    for k, a in enumerate(letters):
        out.add((a, left, rights[k]))
        left |= 1 << a
    return frozenset(out)


def mask_values(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def tower_from_point_types(types: frozenset, width: int) -> ThTower:
    kids = []
    for a, lefts, rights in types:
        grand = [make_tower(2, width, 0, (0, 0), (a, a))]
        grand += [make_tower(2, width, 0, (0, 1), (a, v)) for v in mask_values(rights)]
        grand += [make_tower(2, width, 0, (1, 0), (a, v)) for v in mask_values(lefts)]
        kids.append(make_tower(1, width, 1, (0,), (a,), frozenset(grand)))
    return make_tower(0, width, 2, (), (), frozenset(kids))


def point_types_from_tower(t: ThTower) -> frozenset:
    if t.points or t.depth != 2:
        raise ShapeError("point types are read from point-free depth-2 towers")
    out = set()
    for c in t.children:
        lefts = rights = 0
        for g in c.children:
            r0, r1 = g.ranks
            if r0 < r1:
                rights |= 1 << g.mems[1]
            elif r0 > r1:
                lefts |= 1 << g.mems[1]
        out.add((c.mems[0], lefts, rights))
    return frozenset(out)


def th_tower(w: Word, sets=(), points=(), n: int = 0) -> ThTower:
    """``th^n`` of ``w`` with the extra ``sets`` as columns after the
    predicates and the given point tuple."""
    check_level(n)
    check_length(len(w))
    points = tuple(points)
    for a in points:
        if not 0 <= a < len(w):
            raise ShapeError(f"point {a} out of range for a word of length {len(w)}")
    labeled = w.with_columns(*sets) if sets else w
    return _tower_of(labeled.letters, labeled.width, points, n)


_trunc_memo: dict = {}


def truncate(t: ThTower, depth: int) -> ThTower:
    if depth == t.depth:
        return t
    if depth > t.depth or depth < 0:
        raise ShapeError(f"cannot truncate a depth-{t.depth} tower to depth {depth}")
    key = (t, depth)
    hit = _trunc_memo.get(key)
    if hit is None:
        kids = frozenset(truncate(c, depth - 1) for c in t.children) if depth else frozenset()
        hit = make_tower(t.points, t.width, depth, t.ranks, t.mems, kids)
        _trunc_memo[key] = hit
    return hit


_sum_memo: dict = {}


def th_sum(left: ThTower, right: ThTower, split: tuple = ()) -> ThTower:
    """Tower of ``C + D`` from the towers of ``C`` and ``D``.

    ``split[i]`` says whether point ``i`` of the result lies in the left
    (``LEFT``) or right (``RIGHT``) summand; left points keep their relative
    order and all precede the right points.  Column ``c`` of the result is the
    union of the two summands' column ``c``.
    """
    split = tuple(split)
    key = (left, right, split)
    hit = _sum_memo.get(key)
    if hit is not None:
        return hit
    if left.width != right.width:
        raise ShapeError(f"column counts differ ({left.width} vs {right.width})")
    if left.depth != right.depth:
        raise ShapeError(f"tower depths differ ({left.depth} vs {right.depth})")
    n_left = sum(1 for s in split if s == LEFT)
    if n_left != left.points or len(split) - n_left != right.points:
        raise ShapeError(f"split {split} does not match {left.points}+{right.points} points")
    offset = max(left.ranks) + 1 if left.ranks else 0
    ranks, mems = [], []
    li = ri = 0
    for side in split:
        if side == LEFT:
            ranks.append(left.ranks[li])
            mems.append(left.mems[li])
            li += 1
        else:
            ranks.append(offset + right.ranks[ri])
            mems.append(right.mems[ri])
            ri += 1
    children = frozenset()
    if left.depth:
        lower_left = truncate(left, left.depth - 1)
        lower_right = truncate(right, right.depth - 1)
        children = frozenset(
            [th_sum(c, lower_right, split + (LEFT,)) for c in left.children]
            + [th_sum(lower_left, c, split + (RIGHT,)) for c in right.children]
        )
    out = make_tower(len(split), left.width, left.depth, dense_ranks(ranks), tuple(mems), children)
    _sum_memo[key] = out
    return out


_omega_memo: dict = {}


def th_omega(t: ThTower) -> ThTower:
    """Tower of ``C + C + ...`` (omega copies) for a point-free tower of depth <= 2.

    A point in the first copy sees the rest of the sum to its right; a point in
    a later copy also sees a nonempty prefix on its left.  For depth <= 2 both
    flanks have the depth-1 tower of a single copy.
    """
    if t.points:
        raise ShapeError("omega-sums are defined for point-free towers")
    if t.depth > 2:
        raise ShapeError("omega-sums of towers are only implemented up to depth 2")
    hit = _omega_memo.get(t)
    if hit is not None:
        return hit
    if t.depth == 0 or not t.children:
        out = t
    else:
        flank = truncate(t, t.depth - 1)
        first = [th_sum(c, flank, (LEFT,)) for c in t.children]
        later = [th_sum(flank, f, (RIGHT,)) for f in first]
        out = make_tower(0, t.width, t.depth, (), (), frozenset(first + later))
    _omega_memo[t] = out
    return out


_drop_memo: dict = {}


def drop_tower_column(t: ThTower, col: int) -> ThTower:
    if not 0 <= col < t.width:
        raise ShapeError(f"column {col} out of range for width {t.width}")
    key = (t, col)
    hit = _drop_memo.get(key)
    if hit is None:
        low = (1 << col) - 1
        mems = tuple((m & low) | ((m >> (col + 1)) << col) for m in t.mems)
        kids = frozenset(drop_tower_column(c, col) for c in t.children)
        hit = make_tower(t.points, t.width - 1, t.depth, t.ranks, mems, kids)
        _drop_memo[key] = hit
    return hit


EQ, LT, GT = "eq", "lt", "gt"


def clear_tower_caches() -> None:
    for memo in (_word_memo, _trunc_memo, _sum_memo, _omega_memo, _drop_memo):
        memo.clear()

