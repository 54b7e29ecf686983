"""Stand-alone enumerator of quantifier-rank-2 order types of unlabeled chains.

Used as an oracle for the census of width-0, level-0 theories.  A chain's
rank-2 type is the set of pairs (something lies left, something lies right)
realized by its points; sums and omega-sums of chains act on these sets
directly, so nothing here touches the theory engine.
"""
from __future__ import annotations

Type = frozenset  # of (bool, bool)


def finite(n: int) -> Type:
    return frozenset((k > 0, k < n - 1) for k in range(n))


def add(s: Type, t: Type) -> Type:
    return frozenset({(l, r or bool(t)) for l, r in s} | {(l or bool(s), r) for l, r in t})


def omega(s: Type) -> Type:
    if not s:
        return s
    return frozenset({(l, True) for l, _ in s} | {(True, True)})


def closure(max_len: int, use_omega: bool) -> set[Type]:
    found = {finite(n) for n in range(max_len + 1)}
    while True:
        new = {add(a, b) for a in found for b in found}
        if use_omega:
            new |= {omega(a) for a in found}
        if new <= found:
            return found
        found |= new
