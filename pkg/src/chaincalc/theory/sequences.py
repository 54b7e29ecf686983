"""Sequences of theories indexed by a finite ordinal or by omega.

An omega-indexed sequence is ultimately periodic: a finite prefix followed
by a period repeated forever.  Values are normalized (shortest period,
shortest prefix), so equal sequences compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence

from ..chain import Word
from ..errors import ShapeError
from .handles import Theory, empty_theory, idempotent_power, omega_power
from .profile import Profile, profile_of_word, profile_omega

__all__ = [
    "UPSequence", "UPIndexSet", "const", "finite_sequence", "sequence_sum",
    "ramsey_factorize", "omega_sum", "FormalCheck", "check_formal_sequence",
    "formal_shuffle",
]


def _normalize(prefix: tuple, period: tuple) -> tuple[tuple, tuple]:
    if period:
        n = len(period)
        for d in range(1, n + 1):
            if n % d == 0 and period == period[:d] * (n // d):
                period = period[:d]
                break
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = (period[-1],) + period[:-1]
    return prefix, period


@dataclass(frozen=True)
class UPSequence:
    """``prefix`` then ``period`` repeated omega times; an empty period makes
    the sequence finite (just ``prefix``)."""
    prefix: tuple
    period: tuple = ()

    def __post_init__(self):
        prefix, period = _normalize(tuple(self.prefix), tuple(self.period))
        items = prefix + period
        if items:
            shape = (items[0].level, items[0].width)
            for t in items:
                if (t.level, t.width) != shape:
                    raise ShapeError("all entries of a sequence must share level and width")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @property
    def is_finite(self) -> bool:
        return not self.period

    def __len__(self) -> int:
        if not self.is_finite:
            raise TypeError("an omega-sequence has no finite length")
        return len(self.prefix)

    def __getitem__(self, i: int):
        if i < 0:
            raise IndexError(i)
        if i < len(self.prefix):
            return self.prefix[i]
        if self.is_finite:
            raise IndexError(i)
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def entries(self) -> tuple:
        return self.prefix + self.period


@dataclass(frozen=True)
class UPIndexSet:
    """Ultimately periodic set of indices, given by membership flags."""
    prefix: tuple[bool, ...] = ()
    period: tuple[bool, ...] = (False,)

    def __post_init__(self):
        prefix, period = _normalize(tuple(map(bool, self.prefix)), tuple(map(bool, self.period)))
        if not period:
            period = (False,)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def of(cls, indices: Iterable[int]) -> "UPIndexSet":
        chosen = set(indices)
        top = max(chosen, default=-1) + 1
        return cls(tuple(i in chosen for i in range(top)), (False,))

    def __contains__(self, i: int) -> bool:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]


def const(t) -> UPSequence:
    """The omega-sequence with every entry ``t``."""
    return UPSequence((), (t,))


def finite_sequence(items: Sequence) -> UPSequence:
    return UPSequence(tuple(items), ())


def _identity(t):
    if isinstance(t, Profile):
        return profile_of_word(Word((), t.width), t.level)
    return empty_theory(t.level, t.width)


def _add(a, b):
    return a + b


def sequence_sum(items: Sequence, unit=None):
    """Left-to-right sum of a nonempty finite list (``unit`` for an empty one)."""
    items = list(items)
    if not items:
        if unit is None:
            raise ShapeError("the empty sum needs an explicit unit")
        return unit
    acc = items[0]
    for t in items[1:]:
        acc = _add(acc, t)
    return acc


def _idempotent_power(t):
    if isinstance(t, Theory):
        return idempotent_power(t)
    powers, index = [t], {t: 1}
    while True:
        nxt = _add(powers[-1], t)
        if nxt in index:
            start = index[nxt]
            period = len(powers) + 1 - start
            k = start + (-start) % period
            return k, powers[k - 1]
        powers.append(nxt)
        index[nxt] = len(powers)


def ramsey_factorize(seq: UPSequence):
    """``(prefix, idem)`` with ``idem`` idempotent and the omega-sum of ``seq``
    equal to ``prefix + omega(idem)``.

    The period is repeated until its sum becomes idempotent; the prefix is the
    sum of the original prefix (the empty theory when there is none).
    """
    if seq.is_finite:
        raise ShapeError("ramsey_factorize needs an omega-sequence")
    unit = _identity(seq.period[0])
    head = sequence_sum(seq.prefix, unit)
    _, idem = _idempotent_power(sequence_sum(seq.period))
    return head, idem


def omega_sum(seq: UPSequence):
    """Theory of the sum of a sequence (finite or of order type omega)."""
    if seq.is_finite:
        if not seq.prefix:
            raise ShapeError("the empty finite sequence has no determined shape")
        return sequence_sum(seq.prefix)
    head, idem = ramsey_factorize(seq)
    omega = profile_omega(idem) if isinstance(idem, Profile) else omega_power(idem)
    return _add(head, omega)


@dataclass(frozen=True)
class FormalCheck:
    """Outcome of :func:`check_formal_sequence`; truthy when the condition holds."""
    ok: bool
    violation: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_formal_sequence(seq: UPSequence) -> FormalCheck:
    """Check ``s_i = s_i + ... + s_{j-1}`` for all ``i < j``.

    Pairs are scanned by ``i`` then ``j``; the first failure is reported.
    For an omega-sequence every ``i`` beyond the prefix repeats one of the
    first ``len(prefix) + len(period)`` starts, and for a fixed ``i`` the scan
    over ``j`` stops as soon as the pair (phase of ``j``, partial sum) recurs,
    after which nothing new can appear.  The check is therefore exact.
    """
    p0 = len(seq.prefix)
    if seq.is_finite:
        items = seq.prefix
        for i in range(len(items)):
            acc = items[i]
            for j in range(i + 2, len(items) + 1):
                acc = _add(acc, items[j - 1])
                if acc is not items[i]:
                    return FormalCheck(False, (i, j))
        return FormalCheck(True)
    period = len(seq.period)
    for i in range(p0 + period):
        acc = seq[i]
        seen = set()
        j = i + 1
        while True:
            state = ((j - p0) % period if j >= p0 else -j - 1, acc)
            if state in seen:
                break
            seen.add(state)
            acc = _add(acc, seq[j])
            j += 1
            if acc is not seq[i]:
                return FormalCheck(False, (i, j))
    return FormalCheck(True)


def formal_shuffle(s: UPSequence, t: UPSequence, a) -> UPSequence:
    """Entry ``i`` is ``s_i`` when ``i`` is in ``a`` and ``t_i`` otherwise.

    ``a`` is a :class:`UPIndexSet` or any container of indices.
    """
    if s.is_finite != t.is_finite:
        raise ShapeError("cannot shuffle a finite sequence with an omega-sequence")
    if not isinstance(a, UPIndexSet):
        a = UPIndexSet.of(a)
    if s.is_finite:
        if len(s) != len(t):
            raise ShapeError(f"finite sequences differ in length ({len(s)} vs {len(t)})")
        return UPSequence(tuple(s[i] if i in a else t[i] for i in range(len(s))), ())
    start = max(len(s.prefix), len(t.prefix), len(a.prefix))
    period = lcm(len(s.period), len(t.period), len(a.period))
    pick = lambda i: s[i] if i in a else t[i]  # noqa: E731
    return UPSequence(tuple(pick(i) for i in range(start)),
                      tuple(pick(i) for i in range(start, start + period)))
