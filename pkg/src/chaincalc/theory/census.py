"""Reachable theories and the structural shape check for candidate values."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..chain import Word
from ..errors import check_closure, check_level, work_budget
from .handles import Theory, omega_power, theory_of_word, theory_tower
from .profile import profile_of_word, profile_omega
from .tower import ThTower

__all__ = ["TheoryCensus", "reachable_theories", "to_hf", "candidate_wellformed"]


@dataclass
class TheoryCensus:
    """Closure of the word theories under the requested operations.

    ``elements`` is in discovery order; ``provenance`` maps each element to
    ``("word", text)``, ``("sum", left, right)`` or ``("omega", base)``.
    """
    n: int
    m: int
    max_word_len: int
    use_omega: bool
    elements: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, t) -> bool:
        return t in self.provenance

    def describe(self, t) -> str:
        kind, *args = self.provenance[t]
        if kind == "word":
            return f"word {args[0] or '(empty)'}"
        if kind == "sum":
            return f"sum {args[0].digest[:12]} {args[1].digest[:12]}"
        return f"omega {args[0].digest[:12]}"


def reachable_theories(n: int, m: int, max_word_len: int, use_omega: bool = False, *,
                       profiles: bool = False, budget: int | None = None) -> TheoryCensus:
    """Least set holding ``Th^n`` of every word of length ``<= max_word_len``
    over ``m`` predicates, closed under sum (and omega-power when asked).

    Every element is a finite sum of atoms, the atoms being the word theories
    and the omega-powers found so far, so closing under adding an atom on the
    right reaches every sum.  ``profiles`` runs the same closure on atomic
    profiles.  The run is metered by :func:`~chaincalc.errors.work_budget`
    and by the closure-size guard.
    """
    check_level(n)
    make = profile_of_word if profiles else theory_of_word
    omega = profile_omega if profiles else omega_power
    census = TheoryCensus(n, m, max_word_len, use_omega)

    def add(t, origin) -> bool:
        if t in census.provenance:
            return False
        census.provenance[t] = origin
        census.elements.append(t)
        check_closure(len(census.elements))
        return True

    with work_budget(budget):
        atoms: list = []
        for k in range(max_word_len + 1):
            for letters in itertools.product(range(1 << m), repeat=k):
                w = Word(tuple(letters), m)
                t = make(w, n)
                if add(t, ("word", str(w))):
                    atoms.append(t)
        met: dict = {}  # element -> number of atoms already added on its right
        omega_done = 0
        while True:
            k = 0
            while k < len(census.elements):
                x = census.elements[k]
                while met.get(x, 0) < len(atoms):
                    a = atoms[met.get(x, 0)]
                    met[x] = met.get(x, 0) + 1
                    add(x + a, ("sum", x, a))
                k += 1
            if not use_omega or omega_done == len(census.elements):
                break
            while omega_done < len(census.elements):
                x = census.elements[omega_done]
                omega_done += 1
                w = omega(x)
                if add(w, ("omega", x)):
                    atoms.append(w)
    return census


# -- hereditarily finite values ------------------------------------------------------------------

def _tower_hf(t: ThTower):
    order = tuple(
        tuple("eq" if t.ranks[i] == t.ranks[j] else ("lt" if t.ranks[i] < t.ranks[j] else "gt")
              for j in range(t.points))
        for i in range(t.points))
    member = tuple(tuple(bool(t.mems[i] >> c & 1) for c in range(t.width)) for i in range(t.points))
    return ("th", t.points, t.width, t.depth, order, member,
            frozenset(_tower_hf(c) for c in t.children))


def to_hf(t: Theory):
    """Plain nested-frozenset form of a theory; level 0 is its ``th^2`` tower
    ``("th", points, width, depth, order, membership, children)``."""
    if t.level == 0:
        return _tower_hf(theory_tower(t))
    return frozenset(to_hf(c) for c in t.content)


def _preorder_ok(order, p: int) -> bool:
    if len(order) != p or any(not isinstance(r, tuple) or len(r) != p for r in order):
        return False
    flip = {"eq": "eq", "lt": "gt", "gt": "lt"}
    for i in range(p):
        if order[i][i] != "eq":
            return False
        for j in range(p):
            if order[i][j] not in flip or order[j][i] != flip[order[i][j]]:
                return False
            for k in range(p):
                a, b, c = order[i][j], order[j][k], order[i][k]
                if a == "eq" and b == "eq" and c != "eq":
                    return False
                if "gt" not in (a, b) and "lt" in (a, b) and c != "lt":
                    return False
                if "lt" not in (a, b) and "gt" in (a, b) and c != "gt":
                    return False
    return True


def _tower_ok(v, points: int, width: int, depth: int, parent=None) -> bool:
    if not (isinstance(v, tuple) and len(v) == 7 and v[0] == "th"):
        return False
    _, p, l, d, order, member, kids = v
    if (p, l, d) != (points, width, depth) or not isinstance(kids, frozenset):
        return False
    if not _preorder_ok(order, p):
        return False
    if len(member) != p or any(len(r) != l or not all(isinstance(b, bool) for b in r) for r in member):
        return False
    if parent is not None:
        _, _, _, _, porder, pmember, _ = parent
        if tuple(r[:p - 1] for r in order[:p - 1]) != porder or member[:p - 1] != pmember:
            return False
    if depth == 0:
        return not kids
    return all(_tower_ok(c, p + 1, l, depth - 1, v) for c in kids)


def candidate_wellformed(v, n: int, l: int) -> bool:
    """Does ``v`` have the nesting shape of a level-``n`` theory over ``l``
    columns, with total preorders and consistent base patterns throughout?"""
    if n == 0:
        return _tower_ok(v, 0, l, 2)
    if not isinstance(v, frozenset):
        return False
    return all(candidate_wellformed(c, n - 1, l + 1) for c in v)
