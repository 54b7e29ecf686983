"""Exception types and resource guards shared across the package."""
from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass, replace


class ChainCalcError(Exception):
    """Base class for all errors raised by chaincalc."""


class FormulaSyntaxError(ChainCalcError):
    def __init__(self, message: str, position: int | None = None):
        self.message = message
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where}")


class ChainSyntaxError(ChainCalcError):
    pass


class InterpretationError(ChainCalcError):
    pass


class EvaluationError(ChainCalcError):
    """Unassigned variable, wrong sort, or a formula outside the evaluable fragment."""


class ShapeError(ChainCalcError):
    """Mismatched levels, column counts, tuple lengths or index ranges."""


class GuardError(ChainCalcError):
    """An explicit resource bound would be exceeded."""


@dataclass(frozen=True)
class Guards:
    max_level: int = 3
    max_oracle_len: int = 12
    max_closure: int = 4096
    max_work: int = 2_000_000


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise GuardError(f"{name} must be an integer, got {raw!r}") from None


def guards_from_env() -> Guards:
    return Guards(
        max_level=_env_int("CHAINCALC_MAX_LEVEL", 3),
        max_oracle_len=_env_int("CHAINCALC_MAX_ORACLE_LEN", 12),
        max_closure=_env_int("CHAINCALC_MAX_CLOSURE", 4096),
        max_work=_env_int("CHAINCALC_MAX_WORK", 2_000_000),
    )


_local = threading.local()


def current_guards() -> Guards:
    g = getattr(_local, "guards", None)
    if g is None:
        g = guards_from_env()
        _local.guards = g
    return g


@contextmanager
def guarded(**overrides):
    """Temporarily override guard values, e.g. ``with guarded(max_level=4): ...``."""
    old = current_guards()
    _local.guards = replace(old, **overrides)
    try:
        yield _local.guards
    finally:
        _local.guards = old


def check_level(n: int) -> None:
    limit = current_guards().max_level
    if n < 0:
        raise ShapeError(f"level must be non-negative, got {n}")
    if n > limit:
        raise GuardError(f"level {n} exceeds the level guard {limit}")


def check_length(length: int) -> None:
    limit = current_guards().max_oracle_len
    if length > limit:
        raise GuardError(
            f"word length {length} exceeds the subset-enumeration guard {limit} "
            f"(2^{length} subsets per quantifier)"
        )


def check_closure(size: int) -> None:
    limit = current_guards().max_closure
    if size > limit:
        raise GuardError(f"closure grew past {limit} elements")


@contextmanager
def work_budget(limit: int | None = None):
    """Meter level-0 compositions inside the block.

    Without a budget composition is unmetered; inside, exceeding ``limit``
    (default: the ``max_work`` guard) raises :class:`GuardError`.  Nested
    budgets share the outermost counter.
    """
    if getattr(_local, "budget", None) is not None:
        yield
        return
    _local.budget = [0, current_guards().max_work if limit is None else limit]
    try:
        yield
    finally:
        _local.budget = None


def charge(units: int = 1) -> None:
    budget = getattr(_local, "budget", None)
    if budget is not None:
        budget[0] += units
        if budget[0] > budget[1]:
            raise GuardError(f"composition work exceeded the budget of {budget[1]} steps")
