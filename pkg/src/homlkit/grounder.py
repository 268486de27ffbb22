"""Bounded model finding: compile a theory at a scope into CNF and solve.

Unknowns are the accessibility relation, the existence table, and one Boolean
per constant "cell": prop-valued cells get one variable per world, individual-
valued cells get selector bits with an exactly-one constraint. Formulas are
grounded by full expansion of quantifiers over enumerated denotations, then
converted to clauses by a Tseitin transform over hash-consed formula nodes, so
identical inputs always produce identical problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import BudgetExceededError, GroundingError, HomlError
from .logictypes import Fun, Ind, LogicType, Prop, type_order
from .semantics import (
    Countermodel,
    Indeterminate,
    KripkeModel,
    SBool,
    Scope,
    SEntity,
    STable,
    SemValue,
    ValidUpToScope,
    _eval,
    denotation_size,
    holds_at,
    leibniz_shape,
)
from .solver import SAT, UNKNOWN, UNSAT, solve_cnf
from .terms import (
    EXISTS_AT,
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
)
from .theory import Theory

DEFAULT_BUDGET = 10_000_000
MAX_CONSTANT_ORDER = 3

_TRUE = 0
_FALSE = 1


class _Formulas:
    """Hash-consed and/or/not/var nodes over CNF decision variables."""

    def __init__(self):
        self.nodes = [("true",), ("false",)]
        self.intern = {("true",): _TRUE, ("false",): _FALSE}

    def _mk(self, node):
        nid = self.intern.get(node)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(node)
            self.intern[node] = nid
        return nid

    def var(self, v: int) -> int:
        return self._mk(("var", v))

    def neg(self, a: int) -> int:
        if a == _TRUE:
            return _FALSE
        if a == _FALSE:
            return _TRUE
        node = self.nodes[a]
        if node[0] == "not":
            return node[1]
        return self._mk(("not", a))

    def conj(self, args) -> int:
        out = []
        for a in args:
            if a == _FALSE:
                return _FALSE
            if a != _TRUE:
                out.append(a)
        out = sorted(set(out))
        if not out:
            return _TRUE
        if len(out) == 1:
            return out[0]
        return self._mk(("and", tuple(out)))

    def disj(self, args) -> int:
        out = []
        for a in args:
            if a == _TRUE:
                return _TRUE
            if a != _FALSE:
                out.append(a)
        out = sorted(set(out))
        if not out:
            return _FALSE
        if len(out) == 1:
            return out[0]
        return self._mk(("or", tuple(out)))

    def implies(self, a: int, b: int) -> int:
        return self.disj([self.neg(a), b])

    def iff(self, a: int, b: int) -> int:
        if a == b:
            return _TRUE
        return self.conj([self.disj([self.neg(a), b]), self.disj([self.neg(b), a])])


def _const_bool(nid: int) -> Optional[bool]:
    if nid == _TRUE:
        return True
    if nid == _FALSE:
        return False
    return None


@dataclass
class GroundProblem:
    """A CNF with decode information back to Kripke model components."""

    scope: Scope
    num_vars: int
    clauses: list[list[int]]
    meanings: dict[int, str]
    decision_vars: list[int]
    r_vars: list[list[int]]
    ex_vars: list[list[int]]
    const_cells: dict[str, object]
    signature: tuple
    unsat_hint: bool = field(default=False)

    def decode(self, assignment: dict[int, bool]) -> KripkeModel:
        n, m = self.scope.num_worlds, self.scope.num_entities
        acc = tuple(
            tuple(assignment[self.r_vars[w][w2]] for w2 in range(n)) for w in range(n)
        )
        exists = tuple(
            tuple(assignment[self.ex_vars[e][w]] for w in range(n)) for e in range(m)
        )
        constants = {}
        types = {}
        for name, ty in self.signature:
            types[name] = ty
            constants[name] = _decode_cells(self.const_cells[name], ty, assignment)
        return KripkeModel(self.scope, acc, exists, constants, types)


def _decode_cells(cells, ty: LogicType, assignment) -> SemValue:
    if ty == Prop:
        return STable(tuple(SBool(assignment[v]) for v in cells))
    if ty == Ind:
        chosen = [e for e, v in enumerate(cells) if assignment[v]]
        if len(chosen) != 1:
            raise HomlError("selector bits violate the exactly-one constraint")
        return SEntity(chosen[0])
    assert isinstance(ty, Fun)
    return STable(tuple(_decode_cells(sub, ty.codomain, assignment) for sub in cells))


class _Grounding:
    def __init__(self, theory: Theory, scope: Scope):
        if theory.definitions:
            raise GroundingError("theory must be elaborated before grounding")
        self.theory = theory
        self.scope = scope
        self.n = scope.num_worlds
        self.m = scope.num_entities
        self.f = _Formulas()
        self.num_vars = 0
        self.meanings: dict[int, str] = {}
        self.clauses: list[list[int]] = []
        self.sizes: dict[LogicType, int] = {}

        self.r_vars = [
            [self._new_var(f"r(w{w},w{w2})") for w2 in range(self.n)] for w in range(self.n)
        ]
        self.ex_vars = [
            [self._new_var(f"{EXISTS_AT}(e{e},w{w})") for w in range(self.n)]
            for e in range(self.m)
        ]
        self.const_cells: dict[str, object] = {}
        self.const_sym: dict[str, object] = {}
        for name, ty in theory.signature:
            if type_order(ty) > MAX_CONSTANT_ORDER:
                raise GroundingError(
                    f"constant {name!r} has unsupported type {ty} beyond order {MAX_CONSTANT_ORDER}"
                )
            cells = self._alloc_cells(name, ty, ())
            self.const_cells[name] = cells
            self.const_sym[name] = self._cells_to_sym(cells, ty)
        self.decision_vars = list(range(1, self.num_vars + 1))
        # existsAt viewed as an unknown Fun(Ind, Prop) table.
        self.exists_sym = tuple(
            tuple(self.f.var(self.ex_vars[e][w]) for w in range(self.n))
            for e in range(self.m)
        )
        self._frame_clauses()
        # Model-independent subterms evaluate directly; cache keyed by object
        # identity (terms are immutable).
        self._pure: dict[int, tuple] = {}
        self._leib: dict[int, tuple] = {}
        dummy = KripkeModel(
            scope,
            tuple(tuple(False for _ in range(self.n)) for _ in range(self.n)),
            tuple(tuple(False for _ in range(self.n)) for _ in range(self.m)),
        )
        self._pure_ctx = dummy._ctx()

    def size(self, ty: LogicType) -> int:
        s = self.sizes.get(ty)
        if s is None:
            s = denotation_size(ty, self.scope)
            self.sizes[ty] = s
        return s

    def _new_var(self, meaning: Optional[str] = None) -> int:
        self.num_vars += 1
        if meaning is not None:
            self.meanings[self.num_vars] = meaning
        return self.num_vars

    def _alloc_cells(self, name: str, ty: LogicType, args: tuple):
        arg_str = ",".join(str(a) for a in args)
        label = f"{name}({arg_str})" if args else name
        if ty == Prop:
            return tuple(self._new_var(f"{label}@w{w}") for w in range(self.n))
        if ty == Ind:
            sel = tuple(self._new_var(f"{label}=e{e}") for e in range(self.m))
            self.clauses.append(list(sel))
            for i in range(self.m):
                for j in range(i + 1, self.m):
                    self.clauses.append([-sel[i], -sel[j]])
            return sel
        assert isinstance(ty, Fun)
        dom = self.size(ty.domain)
        return tuple(self._alloc_cells(name, ty.codomain, args + (j,)) for j in range(dom))

    def _cells_to_sym(self, cells, ty: LogicType):
        if ty == Prop or ty == Ind:
            return tuple(self.f.var(v) for v in cells)
        assert isinstance(ty, Fun)
        return tuple(self._cells_to_sym(sub, ty.codomain) for sub in cells)

    def _frame_clauses(self):
        flags = self.theory.frame_flags
        n, r = self.n, self.r_vars
        if "refl" in flags:
            for w in range(n):
                self.clauses.append([r[w][w]])
        if "symm" in flags:
            for w in range(n):
                for v in range(n):
                    if w != v:
                        self.clauses.append([-r[w][v], r[v][w]])
        if "trans" in flags:
            for u in range(n):
                for v in range(n):
                    for w in range(n):
                        if u == v or v == w:
                            continue
                        self.clauses.append([-r[u][v], -r[v][w], r[u][w]])

    # -- symbolic values ---------------------------------------------------
    # Prop: tuple of n formula ids. Ind: tuple of m one-hot formula ids.
    # Fun(a, b): tuple of size(a) symbolic b-values in enumeration order.

    def lift(self, i: int, ty: LogicType):
        if ty == Prop:
            return tuple(
                _TRUE if (i >> (self.n - 1 - w)) & 1 else _FALSE for w in range(self.n)
            )
        if ty == Ind:
            return tuple(_TRUE if e == i else _FALSE for e in range(self.m))
        assert isinstance(ty, Fun)
        dom = self.size(ty.domain)
        cod = self.size(ty.codomain)
        return tuple(
            self.lift((i // cod ** (dom - 1 - j)) % cod, ty.codomain) for j in range(dom)
        )

    def concrete_index(self, sv, ty: LogicType) -> Optional[int]:
        if ty == Prop:
            acc = 0
            for cell in sv:
                b = _const_bool(cell)
                if b is None:
                    return None
                acc = (acc << 1) | int(b)
            return acc
        if ty == Ind:
            chosen = None
            for e, cell in enumerate(sv):
                b = _const_bool(cell)
                if b is None:
                    return None
                if b:
                    if chosen is not None:
                        return None
                    chosen = e
            return chosen
        assert isinstance(ty, Fun)
        cod = self.size(ty.codomain)
        acc = 0
        for sub in sv:
            d = self.concrete_index(sub, ty.codomain)
            if d is None:
                return None
            acc = acc * cod + d
        return acc

    def sym_eq(self, sv, ty: LogicType, i: int) -> int:
        """Formula: the symbolic value equals the i-th enumerated value of ty."""
        if ty == Prop:
            parts = []
            for w, cell in enumerate(sv):
                bit = (i >> (self.n - 1 - w)) & 1
                parts.append(cell if bit else self.f.neg(cell))
            return self.f.conj(parts)
        if ty == Ind:
            return sv[i]
        assert isinstance(ty, Fun)
        dom = self.size(ty.domain)
        cod = self.size(ty.codomain)
        parts = []
        for j in range(dom):
            digit = (i // cod ** (dom - 1 - j)) % cod
            parts.append(self.sym_eq(sv[j], ty.codomain, digit))
        return self.f.conj(parts)

    def sym_values_eq(self, a, b, ty: LogicType) -> int:
        if ty == Prop or ty == Ind:
            return self.f.conj([self.f.iff(x, y) for x, y in zip(a, b)])
        assert isinstance(ty, Fun)
        return self.f.conj(
            [self.sym_values_eq(x, y, ty.codomain) for x, y in zip(a, b)]
        )

    def mux(self, branches, ty: LogicType):
        """Symbolic value: the b-value of the branch whose condition holds."""
        if ty == Prop or ty == Ind:
            width = len(branches[0][1])
            return tuple(
                self.f.disj([self.f.conj([cond, sv[k]]) for cond, sv in branches])
                for k in range(width)
            )
        assert isinstance(ty, Fun)
        dom = self.size(ty.domain)
        return tuple(
            self.mux([(cond, sv[j]) for cond, sv in branches], ty.codomain)
            for j in range(dom)
        )

    def apply_sym(self, fn_sv, arg_sv, fn_ty: Fun):
        idx = self.concrete_index(arg_sv, fn_ty.domain)
        if idx is not None:
            return fn_sv[idx]
        dom = self.size(fn_ty.domain)
        branches = [
            (self.sym_eq(arg_sv, fn_ty.domain, j), fn_sv[j]) for j in range(dom)
        ]
        return self.mux(branches, fn_ty.codomain)

    # -- grounding of terms --------------------------------------------------

    def _is_pure(self, term: Term) -> bool:
        """True when the term's value cannot depend on any unknown: it
        mentions no constant, no existence, and no modal operator.

        The cache keeps a reference to each term so ids stay unique.
        """
        cached = self._pure.get(id(term))
        if cached is not None and cached[0] is term:
            return cached[1]
        if isinstance(term, (Const, Box, Diamond, ForallA, ExistsA)):
            out = False
        else:
            out = True
            for attr in ("body", "arg", "fn", "left", "right"):
                sub = getattr(term, attr, None)
                if sub is not None and not self._is_pure(sub):
                    out = False
                    break
        self._pure[id(term)] = (term, out)
        return out

    def _leibniz_pair(self, term: Term):
        cached = self._leib.get(id(term))
        if cached is not None and cached[0] is term:
            return cached[1]
        pair = leibniz_shape(term)
        self._leib[id(term)] = (term, pair)
        return pair

    def geval(self, term: Term, env: list[int]):
        if self._is_pure(term):
            return self.lift(_eval(term, env, self._pure_ctx), term.ty)
        if isinstance(term, Var):
            return self.lift(env[len(env) - 1 - term.index], term.var_type)
        if isinstance(term, Const):
            if term.name == EXISTS_AT:
                return self.exists_sym
            sym = self.const_sym.get(term.name)
            if sym is None:
                raise GroundingError(f"constant {term.name!r} is not in the signature")
            return sym
        if isinstance(term, App):
            fn = self.geval(term.fn, env)
            arg = self.geval(term.arg, env)
            return self.apply_sym(fn, arg, term.fn.ty)
        if isinstance(term, Lam):
            dom = self.size(term.var_type)
            out = []
            for j in range(dom):
                env.append(j)
                out.append(self.geval(term.body, env))
                env.pop()
            return tuple(out)
        if isinstance(term, Not):
            arg = self.geval(term.arg, env)
            return tuple(self.f.neg(c) for c in arg)
        if isinstance(term, And):
            left = self.geval(term.left, env)
            right = self.geval(term.right, env)
            return tuple(self.f.conj([a, b]) for a, b in zip(left, right))
        if isinstance(term, Or):
            left = self.geval(term.left, env)
            right = self.geval(term.right, env)
            return tuple(self.f.disj([a, b]) for a, b in zip(left, right))
        if isinstance(term, Implies):
            left = self.geval(term.left, env)
            right = self.geval(term.right, env)
            return tuple(self.f.implies(a, b) for a, b in zip(left, right))
        if isinstance(term, Iff):
            left = self.geval(term.left, env)
            right = self.geval(term.right, env)
            return tuple(self.f.iff(a, b) for a, b in zip(left, right))
        if isinstance(term, Box):
            arg = self.geval(term.arg, env)
            return tuple(
                self.f.conj(
                    [
                        self.f.implies(self.f.var(self.r_vars[w][w2]), arg[w2])
                        for w2 in range(self.n)
                    ]
                )
                for w in range(self.n)
            )
        if isinstance(term, Diamond):
            arg = self.geval(term.arg, env)
            return tuple(
                self.f.disj(
                    [
                        self.f.conj([self.f.var(self.r_vars[w][w2]), arg[w2]])
                        for w2 in range(self.n)
                    ]
                )
                for w in range(self.n)
            )
        if isinstance(term, ForallP):
            pair = self._leibniz_pair(term)
            if pair is not None:
                left = self.geval(pair[0], env)
                right = self.geval(pair[1], env)
                eq = self.sym_values_eq(left, right, pair[0].ty)
                return tuple(eq for _ in range(self.n))
            size = self.size(term.var_type)
            rows = []
            for j in range(size):
                env.append(j)
                rows.append(self.geval(term.body, env))
                env.pop()
            return tuple(self.f.conj([row[w] for row in rows]) for w in range(self.n))
        if isinstance(term, ExistsP):
            size = self.size(term.var_type)
            rows = []
            for j in range(size):
                env.append(j)
                rows.append(self.geval(term.body, env))
                env.pop()
            return tuple(self.f.disj([row[w] for row in rows]) for w in range(self.n))
        if isinstance(term, LeibnizEq):
            left = self.geval(term.left, env)
            right = self.geval(term.right, env)
            eq = self.sym_values_eq(left, right, term.left.ty)
            return tuple(eq for _ in range(self.n))
        raise GroundingError(f"cannot ground term node {term!r}")

    # -- Tseitin -------------------------------------------------------------

    def assert_roots(self, roots: list[int]) -> None:
        """Add clauses forcing every root formula to be true."""
        needed = set()
        stack = [r for r in roots]
        while stack:
            nid = stack.pop()
            if nid in needed or nid in (_TRUE, _FALSE):
                continue
            needed.add(nid)
            node = self.f.nodes[nid]
            if node[0] == "not":
                stack.append(node[1])
            elif node[0] in ("and", "or"):
                stack.extend(node[1])

        lit_of: dict[int, int] = {}

        def lit(nid: int) -> int:
            node = self.f.nodes[nid]
            if node[0] == "var":
                return node[1]
            if node[0] == "not":
                return -lit(node[1])
            return lit_of[nid]

        for nid in sorted(needed):
            node = self.f.nodes[nid]
            if node[0] in ("and", "or"):
                lit_of[nid] = self._new_var()
        for nid in sorted(needed):
            node = self.f.nodes[nid]
            if node[0] == "and":
                t = lit_of[nid]
                child_lits = [lit(c) for c in node[1]]
                for cl in child_lits:
                    self.clauses.append([-t, cl])
                self.clauses.append([t] + [-cl for cl in child_lits])
            elif node[0] == "or":
                t = lit_of[nid]
                child_lits = [lit(c) for c in node[1]]
                for cl in child_lits:
                    self.clauses.append([t, -cl])
                self.clauses.append([-t] + child_lits)
        for r in roots:
            if r == _TRUE:
                continue
            if r == _FALSE:
                self.clauses.append([])
                continue
            self.clauses.append([lit(r)])

    def to_problem(self) -> GroundProblem:
        return GroundProblem(
            scope=self.scope,
            num_vars=self.num_vars,
            clauses=self.clauses,
            meanings=self.meanings,
            decision_vars=self.decision_vars,
            r_vars=self.r_vars,
            ex_vars=self.ex_vars,
            const_cells=self.const_cells,
            signature=self.theory.signature,
        )


def ground(theory: Theory, scope: Scope, negated_goal: Optional[Term] = None) -> GroundProblem:
    """Compile frame flags + globally-valid axioms (+ optionally the negation
    of a goal at some world) into a GroundProblem."""
    g = _Grounding(theory, scope)
    roots = []
    for ax in theory.axioms:
        if ax.ty != Prop:
            raise GroundingError("axioms must be prop-typed")
        roots.extend(g.geval(ax, []))
    if negated_goal is not None:
        if negated_goal.ty != Prop:
            raise GroundingError("goal must be prop-typed")
        bits = g.geval(negated_goal, [])
        roots.append(g.f.disj([g.f.neg(b) for b in bits]))
    g.assert_roots(roots)
    return g.to_problem()


@dataclass(frozen=True)
class SolveResult:
    status: int  # SAT, UNSAT, or UNKNOWN
    assignment: Optional[dict[int, bool]]
    conflicts: int


def solve(problem: GroundProblem, budget: int = DEFAULT_BUDGET) -> SolveResult:
    status, model, conflicts = solve_cnf(problem.num_vars, problem.clauses, budget)
    assignment = None
    if status == SAT:
        assignment = {v: bool(model[v - 1]) for v in range(1, problem.num_vars + 1)}
    return SolveResult(status, assignment, conflicts)


def find_model(theory: Theory, scope: Scope, budget: int = DEFAULT_BUDGET) -> Optional[KripkeModel]:
    """A model of frame flags plus all axioms, or None (exhaustive at scope)."""
    problem = ground(theory, scope)
    result = solve(problem, budget)
    if result.status == UNKNOWN:
        raise BudgetExceededError(budget, result.conflicts)
    if result.status == UNSAT:
        return None
    return problem.decode(result.assignment)


def check_validity_bounded(theory: Theory, goal: Term, scope: Scope,
                           budget: int = DEFAULT_BUDGET):
    """ValidUpToScope if no axiom-model falsifies the goal anywhere in scope,
    else a Countermodel with the witnessing world."""
    problem = ground(theory, scope, negated_goal=goal)
    result = solve(problem, budget)
    if result.status == UNKNOWN:
        return Indeterminate(f"conflict budget {budget} exhausted")
    if result.status == UNSAT:
        return ValidUpToScope(scope)
    model = problem.decode(result.assignment)
    for w in range(scope.num_worlds):
        if not holds_at(model, goal, w):
            return Countermodel(model, w)
    raise HomlError("decoded countermodel does not falsify the goal")


def iterate_models(problem: GroundProblem, budget: int = DEFAULT_BUDGET,
                   limit: Optional[int] = None) -> Iterator[KripkeModel]:
    """Decode successive solutions of a ground problem, blocking each found
    assignment on the decision variables; deterministic order."""
    produced = 0
    while limit is None or produced < limit:
        result = solve(problem, budget)
        if result.status == UNKNOWN:
            raise BudgetExceededError(budget, result.conflicts)
        if result.status == UNSAT:
            return
        yield problem.decode(result.assignment)
        produced += 1
        blocking = [
            (-v if result.assignment[v] else v) for v in problem.decision_vars
        ]
        problem.clauses.append(blocking)


def enumerate_models(theory: Theory, scope: Scope, limit: Optional[int] = None,
                     budget: int = DEFAULT_BUDGET,
                     negated_goal: Optional[Term] = None) -> Iterator[KripkeModel]:
    """All models at scope (up to limit), via blocking clauses over the
    decision variables; deterministic order."""
    problem = ground(theory, scope, negated_goal=negated_goal)
    yield from iterate_models(problem, budget=budget, limit=limit)


def export_dimacs(problem: GroundProblem) -> bytes:
    """Standard DIMACS CNF with variable meanings as leading comment lines."""
    lines = []
    for v in sorted(problem.meanings):
        lines.append(f"c {v} {problem.meanings[v]}")
    lines.append(f"p cnf {problem.num_vars} {len(problem.clauses)}")
    for clause in problem.clauses:
        lines.append(" ".join(str(lit) for lit in clause + [0]))
    return ("\n".join(lines) + "\n").encode("utf-8")
