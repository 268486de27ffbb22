"""Object-level simple types: individuals, modal propositions, and function types.

The world type of the semantics never appears here; surface types are built
from ``i`` and ``prop`` with a right-associative arrow.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TypeCheckError

MAX_TYPE_DEPTH = 32


class LogicType:
    """Base class; instances are Ind, Prop, or Fun(a, b)."""

    __slots__ = ()

    def __str__(self):
        return format_type(self)


@dataclass(frozen=True)
class _Ind(LogicType):
    __slots__ = ()

    def __repr__(self):
        return "Ind"


@dataclass(frozen=True)
class _Prop(LogicType):
    __slots__ = ()

    def __repr__(self):
        return "Prop"


Ind = _Ind()
Prop = _Prop()


@dataclass(frozen=True)
class Fun(LogicType):
    domain: LogicType
    codomain: LogicType

    def __repr__(self):
        return f"Fun({self.domain!r}, {self.codomain!r})"


def type_depth(t: LogicType) -> int:
    if isinstance(t, Fun):
        return 1 + max(type_depth(t.domain), type_depth(t.codomain))
    return 0


def check_type_depth(t: LogicType, limit: int = MAX_TYPE_DEPTH) -> None:
    if type_depth(t) > limit:
        raise TypeCheckError(f"type nesting exceeds depth limit {limit}: {t}")


def type_order(t: LogicType) -> int:
    """Order of a type: base types are first order, Fun(a, b) bumps a's order."""
    if isinstance(t, Fun):
        return max(type_order(t.domain) + 1, type_order(t.codomain))
    return 1


def arg_types(t: LogicType) -> tuple[list[LogicType], LogicType]:
    """Flatten a1 > a2 > ... > r into ([a1, a2, ...], r)."""
    args = []
    while isinstance(t, Fun):
        args.append(t.domain)
        t = t.codomain
    return args, t


def format_type(t: LogicType) -> str:
    """Render in surface syntax: ``i``, ``prop``, ``a > b`` (right-associative)."""
    if t is Ind or isinstance(t, _Ind):
        return "i"
    if t is Prop or isinstance(t, _Prop):
        return "prop"
    assert isinstance(t, Fun)
    dom = format_type(t.domain)
    if isinstance(t.domain, Fun):
        dom = f"({dom})"
    return f"{dom} > {format_type(t.codomain)}"
