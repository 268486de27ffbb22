"""Surface language for theory files: lexing, parsing, type checking, elaboration.

The concrete syntax is line-oriented: one declaration per line, ``#`` comments,
ASCII keywords with optional Unicode aliases. Types are written ``i``, ``prop``
and ``a > b`` (right-associative). Errors are reported as ``file:line:col: message``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import LexError, ParseError, TypeCheckError
from .logictypes import Fun, Ind, LogicType, Prop, check_type_depth
from .terms import (
    EXISTS_AT,
    EXISTS_AT_TYPE,
    And,
    App,
    Box,
    Const,
    Diamond,
    ExistsA,
    ExistsP,
    ForallA,
    ForallP,
    Iff,
    Implies,
    Lam,
    LeibnizEq,
    Not,
    Or,
    Term,
    Var,
    beta_normalize,
    replace_const,
    shift,
)
from .theory import FRAME_FLAGS, Theory

KEYWORDS = {
    "theory", "frame", "const", "def", "axiom", "goal",
    "forallP", "existsP", "forallA", "existsA",
    "box", "dia", "not", "top", "bot",
}

_UNICODE_ALIASES = {
    "□": "box", "◇": "dia", "∀": "forallP", "∃": "existsP",
    "¬": "not", "⊤": "top", "⊥": "bot", "λ": "\\",
    "∧": "&", "∨": "|", "→": "->", "↔": "<->", "≡": "==",
}

_PUNCT = ("<->", ":=", "->", "==", "(", ")", ":", ".", "\\", "&", "|", ">")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'kw', or the punctuation itself
    text: str
    line: int
    col: int


def _lex_line(line: str, lineno: int, filename: str) -> list[Token]:
    tokens = []
    i = 0
    n = len(line)
    while i < n:
        c = line[i]
        if c == "#":
            break
        if c.isspace():
            i += 1
            continue
        if c in _UNICODE_ALIASES:
            alias = _UNICODE_ALIASES[c]
            kind = alias if alias in ("\\", "&", "|", "->", "<->", "==") else (
                "kw" if alias in KEYWORDS else alias
            )
            tokens.append(Token(kind, alias, lineno, i + 1))
            i += 1
            continue
        matched = False
        for p in _PUNCT:
            if line.startswith(p, i):
                tokens.append(Token(p, p, lineno, i + 1))
                i += len(p)
                matched = True
                break
        if matched:
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (line[j].isalnum() or line[j] in "_'"):
                j += 1
            word = line[i:j]
            tokens.append(Token("kw" if word in KEYWORDS else "ident", word, lineno, i + 1))
            i = j
            continue
        raise LexError(f"unexpected character {c!r}", lineno, i + 1, filename)
    return tokens


# ---------------------------------------------------------------------------
# Surface (raw) AST produced by the parser, before name resolution.

@dataclass(frozen=True)
class SName:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class SLam:
    name: str
    var_type: LogicType
    body: object
    line: int
    col: int


@dataclass(frozen=True)
class SQuant:
    kind: str  # forallP | existsP | forallA | existsA
    name: str
    var_type: Optional[LogicType]
    body: object
    line: int
    col: int


@dataclass(frozen=True)
class SApp:
    fn: object
    arg: object
    line: int
    col: int


@dataclass(frozen=True)
class SUnary:
    kind: str  # not | box | dia
    arg: object
    line: int
    col: int


@dataclass(frozen=True)
class SBinary:
    kind: str  # & | "|" | -> | <-> | ==
    left: object
    right: object
    line: int
    col: int


@dataclass(frozen=True)
class SConst:
    kind: str  # top | bot
    line: int
    col: int


_BINDER_KWS = ("forallP", "existsP", "forallA", "existsA")
# (precedence, right-associative?) for the infix operators, loosest first.
_INFIX = {"<->": (1, False), "->": (2, True), "|": (3, False), "&": (4, False), "==": (5, False)}


class _TermParser:
    def __init__(self, tokens: list[Token], filename: str, lineno: int):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.lineno = lineno

    def error(self, message, token=None):
        tok = token or self.peek()
        col = tok.col if tok else (self.tokens[-1].col + len(self.tokens[-1].text) if self.tokens else 1)
        raise ParseError(message, self.lineno, col, self.filename)

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of line")
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            self.error(f"expected {kind!r}" + (f", got {tok.text!r}" if tok else ""))
        return self.next()

    # Types: atype ('>' type)?, atype: i | prop | (type)
    def parse_type(self) -> LogicType:
        left = self.parse_atype()
        if self.peek() and self.peek().kind == ">":
            self.next()
            return Fun(left, self.parse_type())
        return left

    def parse_atype(self) -> LogicType:
        tok = self.next()
        if tok.kind == "ident" and tok.text == "i":
            return Ind
        if tok.kind == "ident" and tok.text == "prop":
            return Prop
        if tok.kind == "(":
            inner = self.parse_type()
            self.expect(")")
            return inner
        self.error(f"expected a type, got {tok.text!r}", tok)

    # Terms, by precedence climbing. Binders swallow everything to the right.
    def parse_term(self, min_prec: int = 0):
        left = self.parse_operand(min_prec)
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in _INFIX:
                return left
            prec, right_assoc = _INFIX[tok.kind]
            if prec < min_prec:
                return left
            self.next()
            right = self.parse_term(prec if right_assoc else prec + 1)
            left = SBinary(tok.kind, left, right, tok.line, tok.col)

    def parse_operand(self, min_prec: int):
        tok = self.peek()
        if tok is None:
            self.error("expected a term")
        if tok.kind == "kw" and tok.text in _BINDER_KWS or tok.kind == "\\":
            return self.parse_binder()
        if tok.kind == "kw" and tok.text in ("not", "box", "dia"):
            self.next()
            return SUnary(tok.text, self.parse_operand(min_prec), tok.line, tok.col)
        return self.parse_app()

    def parse_binder(self):
        tok = self.next()
        kind = "lam" if tok.kind == "\\" else tok.text
        name_tok = self.peek()
        if name_tok is None or name_tok.kind != "ident":
            self.error("expected a bound variable name")
        self.next()
        var_type = None
        if self.peek() and self.peek().kind == ":":
            self.next()
            var_type = self.parse_type()
        elif kind in ("lam", "forallP", "existsP"):
            self.error(f"binder {kind!r} requires a type annotation", name_tok)
        self.expect(".")
        body = self.parse_term(0)
        if kind == "lam":
            return SLam(name_tok.text, var_type, body, tok.line, tok.col)
        return SQuant(kind, name_tok.text, var_type, body, tok.line, tok.col)

    def parse_app(self):
        term = self.parse_atom()
        while True:
            tok = self.peek()
            if tok is None:
                return term
            if tok.kind == "ident" or tok.kind == "(" or (tok.kind == "kw" and tok.text in ("top", "bot")):
                arg = self.parse_atom()
                term = SApp(term, arg, tok.line, tok.col)
            else:
                return term

    def parse_atom(self):
        tok = self.next()
        if tok.kind == "ident":
            return SName(tok.text, tok.line, tok.col)
        if tok.kind == "kw" and tok.text in ("top", "bot"):
            return SConst(tok.text, tok.line, tok.col)
        if tok.kind == "(":
            inner = self.parse_term(0)
            self.expect(")")
            return inner
        self.error(f"expected a term, got {tok.text!r}", tok)


def parse_term_text(text: str, filename: str = "<input>", lineno: int = 1):
    """Parse a single term; helper for tests and the parser itself."""
    parser = _TermParser(_lex_line(text, lineno, filename), filename, lineno)
    term = parser.parse_term(0)
    if parser.peek() is not None:
        parser.error(f"unexpected trailing {parser.peek().text!r}")
    return term


def parse_type_text(text: str, filename: str = "<input>", lineno: int = 1) -> LogicType:
    parser = _TermParser(_lex_line(text, lineno, filename), filename, lineno)
    ty = parser.parse_type()
    if parser.peek() is not None:
        parser.error(f"unexpected trailing {parser.peek().text!r}")
    return ty


def parse(text: str, filename: str = "<input>") -> Theory:
    """Parse theory source into a Theory with raw (unchecked) term ASTs."""
    name = "theory"
    signature = []
    definitions = []
    axioms = []
    goals = []
    frame_flags = set()
    seen = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        tokens = _lex_line(raw_line, lineno, filename)
        if not tokens:
            continue
        head = tokens[0]
        rest = tokens[1:]
        parser = _TermParser(rest, filename, lineno)
        if head.kind != "kw":
            raise ParseError(f"expected a declaration keyword, got {head.text!r}",
                             lineno, head.col, filename)
        if head.text == "theory":
            tok = parser.expect("ident")
            name = tok.text
        elif head.text == "frame":
            while parser.peek() is not None:
                tok = parser.next()
                if tok.kind != "ident" or tok.text not in FRAME_FLAGS:
                    raise ParseError(f"unknown frame flag {tok.text!r}", lineno, tok.col, filename)
                frame_flags.add(tok.text)
        elif head.text == "const":
            tok = parser.expect("ident")
            if tok.text in seen:
                raise ParseError(f"duplicate declaration of {tok.text!r}", lineno, tok.col, filename)
            if tok.text == EXISTS_AT:
                raise ParseError(f"{EXISTS_AT!r} is reserved", lineno, tok.col, filename)
            parser.expect(":")
            ty = parser.parse_type()
            seen.add(tok.text)
            signature.append((tok.text, ty))
        elif head.text == "def":
            tok = parser.expect("ident")
            if tok.text in seen:
                raise ParseError(f"duplicate declaration of {tok.text!r}", lineno, tok.col, filename)
            if tok.text == EXISTS_AT:
                raise ParseError(f"{EXISTS_AT!r} is reserved", lineno, tok.col, filename)
            parser.expect(":=")
            body = parser.parse_term(0)
            seen.add(tok.text)
            definitions.append((tok.text, body))
        elif head.text in ("axiom", "goal"):
            term = parser.parse_term(0)
            (axioms if head.text == "axiom" else goals).append(term)
        else:
            raise ParseError(f"unexpected keyword {head.text!r} at start of declaration",
                             lineno, head.col, filename)
        if parser.peek() is not None and head.text not in ("axiom", "goal"):
            tok = parser.peek()
            raise ParseError(f"unexpected trailing {tok.text!r}", lineno, tok.col, filename)
    return Theory(
        name=name,
        signature=tuple(signature),
        definitions=tuple(definitions),
        axioms=tuple(axioms),
        goals=tuple(goals),
        frame_flags=frozenset(frame_flags),
    )


# ---------------------------------------------------------------------------
# Type checking: resolve names against binders, signature, and definitions,
# producing core de Bruijn terms annotated with their types.

class _Checker:
    def __init__(self, signature, def_types, filename):
        self.signature = dict(signature)
        self.def_types = def_types
        self.filename = filename

    def err(self, message, node):
        raise TypeCheckError(message, node.line, node.col, self.filename)

    def check(self, node, env) -> Term:
        """env is a list of (name, type), innermost binder first."""
        if isinstance(node, SName):
            for idx, (bname, bty) in enumerate(env):
                if bname == node.name:
                    return Var(idx, bty, bname)
            if node.name == EXISTS_AT:
                return Const(EXISTS_AT, EXISTS_AT_TYPE)
            if node.name in self.signature:
                return Const(node.name, self.signature[node.name])
            if node.name in self.def_types:
                return Const(node.name, self.def_types[node.name])
            self.err(f"unbound identifier {node.name!r}", node)
        if isinstance(node, SConst):
            # top := forallP p:prop. p -> p,  bot := forallP p:prop. p
            v = Var(0, Prop, "p")
            body = Implies(v, v) if node.kind == "top" else v
            return ForallP(Prop, body, "p")
        if isinstance(node, SLam):
            check_type_depth(node.var_type)
            body = self.check(node.body, [(node.name, node.var_type)] + env)
            return Lam(node.var_type, body, node.name)
        if isinstance(node, SQuant):
            var_type = node.var_type if node.var_type is not None else Ind
            check_type_depth(var_type)
            if node.kind in ("forallA", "existsA") and var_type != Ind:
                self.err("actualist quantifier restricted to individuals", node)
            body = self.check(node.body, [(node.name, var_type)] + env)
            if body.ty != Prop:
                self.err(f"quantifier body must have type prop, got {body.ty}", node)
            cls = {"forallP": ForallP, "existsP": ExistsP, "forallA": ForallA, "existsA": ExistsA}[node.kind]
            return cls(var_type, body, node.name)
        if isinstance(node, SApp):
            fn = self.check(node.fn, env)
            arg = self.check(node.arg, env)
            if not isinstance(fn.ty, Fun):
                self.err(f"cannot apply a term of type {fn.ty}", node)
            if fn.ty.domain != arg.ty:
                self.err(f"type mismatch: expected {fn.ty.domain}, actual {arg.ty}", node)
            return App(fn, arg)
        if isinstance(node, SUnary):
            arg = self.check(node.arg, env)
            if arg.ty != Prop:
                self.err(f"type mismatch: expected prop, actual {arg.ty}", node)
            return {"not": Not, "box": Box, "dia": Diamond}[node.kind](arg)
        if isinstance(node, SBinary):
            left = self.check(node.left, env)
            right = self.check(node.right, env)
            if node.kind == "==":
                if left.ty != right.ty:
                    self.err(f"equality between distinct types {left.ty} and {right.ty}", node)
                return LeibnizEq(left, right)
            for side in (left, right):
                if side.ty != Prop:
                    self.err(f"type mismatch: expected prop, actual {side.ty}", node)
            return {"&": And, "|": Or, "->": Implies, "<->": Iff}[node.kind](left, right)
        raise AssertionError(f"unhandled surface node {node!r}")


def typecheck(theory: Theory, filename: str = "<input>") -> Theory:
    """Resolve and type-annotate a parsed theory.

    Definition bodies may reference only signature constants and earlier
    definitions, so acyclicity holds by construction. Axioms and goals must be
    closed terms of type prop.
    """
    def_types: dict[str, LogicType] = {}
    checker = _Checker(theory.signature, def_types, filename)
    for name, ty in theory.signature:
        check_type_depth(ty)
    checked_defs = []
    for name, body in theory.definitions:
        if isinstance(body, Term):
            core = body
        else:
            core = checker.check(body, [])
        def_types[name] = core.ty
        checked_defs.append((name, core))
    def check_formula(node, kind):
        core = node if isinstance(node, Term) else checker.check(node, [])
        if core.ty != Prop:
            line = getattr(node, "line", 0)
            col = getattr(node, "col", 0)
            raise TypeCheckError(f"{kind} must have type prop, got {core.ty}",
                                 line, col, filename)
        return core

    checked_axioms = [check_formula(ax, "axiom") for ax in theory.axioms]
    checked_goals = [check_formula(goal, "goal") for goal in theory.goals]
    return Theory(
        name=theory.name,
        signature=theory.signature,
        definitions=tuple(checked_defs),
        axioms=tuple(checked_axioms),
        goals=tuple(checked_goals),
        frame_flags=theory.frame_flags,
    )


def _expand_sugar(term: Term) -> Term:
    """Bottom-up expansion of Leibniz equality and actualist quantifiers."""
    if isinstance(term, (Var, Const)):
        return term
    if isinstance(term, Lam):
        return Lam(term.var_type, _expand_sugar(term.body), term.hint)
    if isinstance(term, App):
        return App(_expand_sugar(term.fn), _expand_sugar(term.arg))
    if isinstance(term, (Not, Box, Diamond)):
        return type(term)(_expand_sugar(term.arg))
    if isinstance(term, (And, Or, Implies, Iff)):
        return type(term)(_expand_sugar(term.left), _expand_sugar(term.right))
    if isinstance(term, (ForallP, ExistsP)):
        return type(term)(term.var_type, _expand_sugar(term.body), term.hint)
    if isinstance(term, ForallA):
        body = _expand_sugar(term.body)
        guard = App(Const(EXISTS_AT, EXISTS_AT_TYPE), Var(0, Ind, term.hint))
        return ForallP(Ind, Implies(guard, body), term.hint)
    if isinstance(term, ExistsA):
        body = _expand_sugar(term.body)
        guard = App(Const(EXISTS_AT, EXISTS_AT_TYPE), Var(0, Ind, term.hint))
        return ExistsP(Ind, And(guard, body), term.hint)
    if isinstance(term, LeibnizEq):
        left = shift(_expand_sugar(term.left), 1)
        right = shift(_expand_sugar(term.right), 1)
        qty = Fun(term.left.ty, Prop)
        q = Var(0, qty, "q")
        return ForallP(qty, Implies(App(q, left), App(q, right)), "q")
    raise AssertionError(f"unhandled node {term!r}")


def elaborate(theory: Theory) -> Theory:
    """Inline definitions, expand sugar, and beta-normalize a checked theory.

    The result contains no defined constants, no LeibnizEq nodes, and no
    actualist quantifiers; types are preserved.
    """
    inlined: dict[str, Term] = {}
    for name, body in theory.definitions:
        for dname, dbody in inlined.items():
            body = replace_const(body, dname, dbody)
        inlined[name] = body

    def elab(term: Term) -> Term:
        for dname, dbody in inlined.items():
            term = replace_const(term, dname, dbody)
        return beta_normalize(_expand_sugar(term))

    return Theory(
        name=theory.name,
        signature=theory.signature,
        definitions=(),
        axioms=tuple(elab(ax) for ax in theory.axioms),
        goals=tuple(elab(goal) for goal in theory.goals),
        frame_flags=theory.frame_flags,
    )


def load_theory(text: str, filename: str = "<input>") -> Theory:
    """parse + typecheck + elaborate in one step."""
    return elaborate(typecheck(parse(text, filename), filename))
