"""Core typed lambda terms with modal connectives and both quantifier families.

Binders use de Bruijn indices internally; structural equality is therefore
alpha-equivalence (binder name hints are kept only for printing and are
excluded from comparisons).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import TypeCheckError
from .logictypes import Fun, Ind, LogicType, Prop

# Distinguished constant interpreted by the model's existence table; it is
# always in scope and underwrites the actualist quantifiers.
EXISTS_AT = "existsAt"
EXISTS_AT_TYPE = Fun(Ind, Prop)


class Term:
    __slots__ = ()

    @property
    def ty(self) -> LogicType:
        raise NotImplementedError

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Var(Term):
    index: int
    var_type: LogicType
    hint: str = field(default="x", compare=False)

    @property
    def ty(self):
        return self.var_type


@dataclass(frozen=True)
class Const(Term):
    name: str
    const_type: LogicType

    @property
    def ty(self):
        return self.const_type


@dataclass(frozen=True)
class Lam(Term):
    var_type: LogicType
    body: Term
    hint: str = field(default="x", compare=False)

    @property
    def ty(self):
        return Fun(self.var_type, self.body.ty)


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term

    @property
    def ty(self):
        return self.fn.ty.codomain


class _Unary(Term):
    __slots__ = ()

    @property
    def ty(self):
        return Prop


@dataclass(frozen=True)
class Not(_Unary):
    arg: Term


@dataclass(frozen=True)
class Box(_Unary):
    arg: Term


@dataclass(frozen=True)
class Diamond(_Unary):
    arg: Term


class _Binary(Term):
    __slots__ = ()

    @property
    def ty(self):
        return Prop


@dataclass(frozen=True)
class And(_Binary):
    left: Term
    right: Term


@dataclass(frozen=True)
class Or(_Binary):
    left: Term
    right: Term


@dataclass(frozen=True)
class Implies(_Binary):
    left: Term
    right: Term


@dataclass(frozen=True)
class Iff(_Binary):
    left: Term
    right: Term


class _Quant(Term):
    __slots__ = ()

    @property
    def ty(self):
        return Prop


@dataclass(frozen=True)
class ForallP(_Quant):
    var_type: LogicType
    body: Term
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class ExistsP(_Quant):
    var_type: LogicType
    body: Term
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class ForallA(_Quant):
    var_type: LogicType
    body: Term
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class ExistsA(_Quant):
    var_type: LogicType
    body: Term
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class LeibnizEq(Term):
    left: Term
    right: Term

    @property
    def ty(self):
        return Prop


BINARY_CONNECTIVES = (And, Or, Implies, Iff)
QUANTIFIERS = (ForallP, ExistsP, ForallA, ExistsA)


def check_term(term: Term, ctx: Optional[list[LogicType]] = None) -> LogicType:
    """Validate the typing invariants of an already-built term; returns its type.

    ctx[0] is the innermost binder's type.
    """
    ctx = ctx if ctx is not None else []
    if isinstance(term, Var):
        if term.index < 0 or term.index >= len(ctx):
            raise TypeCheckError(f"unbound de Bruijn index {term.index}")
        if ctx[term.index] != term.var_type:
            raise TypeCheckError(
                f"variable type mismatch: expected {ctx[term.index]}, got {term.var_type}"
            )
        return term.var_type
    if isinstance(term, Const):
        return term.const_type
    if isinstance(term, Lam):
        body_ty = check_term(term.body, [term.var_type] + ctx)
        return Fun(term.var_type, body_ty)
    if isinstance(term, App):
        fn_ty = check_term(term.fn, ctx)
        arg_ty = check_term(term.arg, ctx)
        if not isinstance(fn_ty, Fun):
            raise TypeCheckError(f"application of non-function of type {fn_ty}")
        if fn_ty.domain != arg_ty:
            raise TypeCheckError(
                f"argument type mismatch: expected {fn_ty.domain}, got {arg_ty}"
            )
        return fn_ty.codomain
    if isinstance(term, (Not, Box, Diamond)):
        if check_term(term.arg, ctx) != Prop:
            raise TypeCheckError(f"{type(term).__name__} applied to non-proposition")
        return Prop
    if isinstance(term, BINARY_CONNECTIVES):
        for side in (term.left, term.right):
            if check_term(side, ctx) != Prop:
                raise TypeCheckError(f"{type(term).__name__} applied to non-proposition")
        return Prop
    if isinstance(term, QUANTIFIERS):
        if isinstance(term, (ForallA, ExistsA)) and term.var_type != Ind:
            raise TypeCheckError("actualist quantifier restricted to individuals")
        if check_term(term.body, [term.var_type] + ctx) != Prop:
            raise TypeCheckError("quantifier body must be a proposition")
        return Prop
    if isinstance(term, LeibnizEq):
        lt = check_term(term.left, ctx)
        rt = check_term(term.right, ctx)
        if lt != rt:
            raise TypeCheckError(f"equality between distinct types {lt} and {rt}")
        return Prop
    raise TypeCheckError(f"unknown term node {term!r}")


def shift(term: Term, by: int, cutoff: int = 0) -> Term:
    """Shift free de Bruijn indices >= cutoff by ``by``."""
    if isinstance(term, Var):
        if term.index >= cutoff:
            return Var(term.index + by, term.var_type, term.hint)
        return term
    if isinstance(term, Const):
        return term
    if isinstance(term, (Lam,) + QUANTIFIERS):
        return type(term)(term.var_type, shift(term.body, by, cutoff + 1), term.hint)
    if isinstance(term, App):
        return App(shift(term.fn, by, cutoff), shift(term.arg, by, cutoff))
    if isinstance(term, (Not, Box, Diamond)):
        return type(term)(shift(term.arg, by, cutoff))
    if isinstance(term, BINARY_CONNECTIVES + (LeibnizEq,)):
        return type(term)(shift(term.left, by, cutoff), shift(term.right, by, cutoff))
    raise AssertionError(f"unhandled node {term!r}")


def subst_top(body: Term, value: Term) -> Term:
    """Substitute ``value`` for index 0 in ``body`` (beta-reduction helper)."""

    def go(t: Term, depth: int) -> Term:
        if isinstance(t, Var):
            if t.index == depth:
                return shift(value, depth)
            if t.index > depth:
                return Var(t.index - 1, t.var_type, t.hint)
            return t
        if isinstance(t, Const):
            return t
        if isinstance(t, (Lam,) + QUANTIFIERS):
            return type(t)(t.var_type, go(t.body, depth + 1), t.hint)
        if isinstance(t, App):
            return App(go(t.fn, depth), go(t.arg, depth))
        if isinstance(t, (Not, Box, Diamond)):
            return type(t)(go(t.arg, depth))
        if isinstance(t, BINARY_CONNECTIVES + (LeibnizEq,)):
            return type(t)(go(t.left, depth), go(t.right, depth))
        raise AssertionError(f"unhandled node {t!r}")

    return go(body, 0)


def beta_normalize(term: Term) -> Term:
    """Reduce all beta redexes; terminates because terms are simply typed."""
    if isinstance(term, App):
        fn = beta_normalize(term.fn)
        arg = beta_normalize(term.arg)
        if isinstance(fn, Lam):
            return beta_normalize(subst_top(fn.body, arg))
        return App(fn, arg)
    if isinstance(term, (Lam,) + QUANTIFIERS):
        return type(term)(term.var_type, beta_normalize(term.body), term.hint)
    if isinstance(term, (Not, Box, Diamond)):
        return type(term)(beta_normalize(term.arg))
    if isinstance(term, BINARY_CONNECTIVES + (LeibnizEq,)):
        return type(term)(beta_normalize(term.left), beta_normalize(term.right))
    return term


def replace_const(term: Term, name: str, value: Term) -> Term:
    """Replace every occurrence of constant ``name`` by the closed term ``value``."""
    if isinstance(term, Const):
        return value if term.name == name else term
    if isinstance(term, Var):
        return term
    if isinstance(term, (Lam,) + QUANTIFIERS):
        return type(term)(term.var_type, replace_const(term.body, name, value), term.hint)
    if isinstance(term, App):
        return App(replace_const(term.fn, name, value), replace_const(term.arg, name, value))
    if isinstance(term, (Not, Box, Diamond)):
        return type(term)(replace_const(term.arg, name, value))
    if isinstance(term, BINARY_CONNECTIVES + (LeibnizEq,)):
        return type(term)(
            replace_const(term.left, name, value),
            replace_const(term.right, name, value),
        )
    raise AssertionError(f"unhandled node {term!r}")


def free_var_indices(term: Term, depth: int = 0) -> set[int]:
    """Free de Bruijn indices, expressed relative to the outermost level."""
    if isinstance(term, Var):
        return {term.index - depth} if term.index >= depth else set()
    if isinstance(term, Const):
        return set()
    if isinstance(term, (Lam,) + QUANTIFIERS):
        return free_var_indices(term.body, depth + 1)
    if isinstance(term, App):
        return free_var_indices(term.fn, depth) | free_var_indices(term.arg, depth)
    if isinstance(term, (Not, Box, Diamond)):
        return free_var_indices(term.arg, depth)
    if isinstance(term, BINARY_CONNECTIVES + (LeibnizEq,)):
        return free_var_indices(term.left, depth) | free_var_indices(term.right, depth)
    raise AssertionError(f"unhandled node {term!r}")


def is_closed(term: Term) -> bool:
    return not free_var_indices(term)


def constants_of(term: Term) -> set[str]:
    if isinstance(term, Const):
        return {term.name}
    if isinstance(term, Var):
        return set()
    if isinstance(term, (Lam,) + QUANTIFIERS):
        return constants_of(term.body)
    if isinstance(term, App):
        return constants_of(term.fn) | constants_of(term.arg)
    if isinstance(term, (Not, Box, Diamond)):
        return constants_of(term.arg)
    if isinstance(term, BINARY_CONNECTIVES + (LeibnizEq,)):
        return constants_of(term.left) | constants_of(term.right)
    raise AssertionError(f"unhandled node {term!r}")


# ---------------------------------------------------------------------------
# Printing (surface syntax; parse(format_term(t)) is alpha-equivalent to t)

_QUANT_KEYWORD = {ForallP: "forallP", ExistsP: "existsP", ForallA: "forallA", ExistsA: "existsA"}
_BINOP_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def _fresh(hint: str, used: list[str]) -> str:
    name = hint or "x"
    while name in used:
        name += "'"
    return name


def format_term(term: Term, names: Optional[list[str]] = None) -> str:
    """Render a term in the theory DSL's concrete syntax, fully parenthesized."""
    names = names if names is not None else []
    if isinstance(term, Var):
        if 0 <= term.index < len(names):
            return names[term.index]
        return f"#{term.index}"
    if isinstance(term, Const):
        return term.name
    if isinstance(term, Lam):
        name = _fresh(term.hint, names)
        body = format_term(term.body, [name] + names)
        return f"(\\{name}:{term.var_type}. {body})"
    if isinstance(term, QUANTIFIERS):
        name = _fresh(term.hint, names)
        body = format_term(term.body, [name] + names)
        return f"({_QUANT_KEYWORD[type(term)]} {name}:{term.var_type}. {body})"
    if isinstance(term, App):
        return f"({format_term(term.fn, names)} {format_term(term.arg, names)})"
    if isinstance(term, Not):
        return f"(not {format_term(term.arg, names)})"
    if isinstance(term, Box):
        return f"(box {format_term(term.arg, names)})"
    if isinstance(term, Diamond):
        return f"(dia {format_term(term.arg, names)})"
    if isinstance(term, BINARY_CONNECTIVES):
        sym = _BINOP_SYMBOL[type(term)]
        return f"({format_term(term.left, names)} {sym} {format_term(term.right, names)})"
    if isinstance(term, LeibnizEq):
        return f"({format_term(term.left, names)} == {format_term(term.right, names)})"
    raise AssertionError(f"unhandled node {term!r}")
