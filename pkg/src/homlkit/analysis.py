"""Semantic experiments over models: modal filters and ultrafilters, positive
property counting, equipollence and cardinal successor checks, and the
finite diagonal/surjection experiments."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceededError, HomlError
from .grounder import DEFAULT_BUDGET, GroundProblem, ground, iterate_models
from .logictypes import Fun, Ind, Prop
from .semantics import (
    KripkeModel,
    SBool,
    Scope,
    STable,
    SemValue,
    denotation_size,
    index_value,
    value_index,
)
from .theory import Theory

PROPERTY_TYPE = Fun(Ind, Prop)
FAMILY_TYPE = Fun(PROPERTY_TYPE, Prop)


@dataclass(frozen=True)
class ModalSet:
    """A world-relativised predicate over individuals: table[e][w]."""

    table: tuple[tuple[bool, ...], ...]

    @property
    def num_entities(self):
        return len(self.table)

    @property
    def num_worlds(self):
        return len(self.table[0])

    @classmethod
    def from_semvalue(cls, value: SemValue) -> "ModalSet":
        assert isinstance(value, STable)
        return cls(tuple(tuple(b.value for b in row.entries) for row in value.entries))

    @classmethod
    def from_index(cls, i: int, scope: Scope) -> "ModalSet":
        return cls.from_semvalue(index_value(i, PROPERTY_TYPE, scope))

    @classmethod
    def rigid(cls, entities, m: int, n: int) -> "ModalSet":
        chosen = set(entities)
        return cls(tuple(tuple(e in chosen for _ in range(n)) for e in range(m)))

    def to_semvalue(self) -> SemValue:
        return STable(
            tuple(STable(tuple(SBool(v) for v in row)) for row in self.table)
        )

    def index(self, scope: Scope) -> int:
        return value_index(self.to_semvalue(), PROPERTY_TYPE, scope)

    def extension(self, world: int) -> frozenset[int]:
        return frozenset(e for e in range(self.num_entities) if self.table[e][world])

    def complement(self) -> "ModalSet":
        return ModalSet(tuple(tuple(not v for v in row) for row in self.table))

    def intersect(self, other: "ModalSet") -> "ModalSet":
        return ModalSet(
            tuple(
                tuple(a and b for a, b in zip(ra, rb))
                for ra, rb in zip(self.table, other.table)
            )
        )

    def rigid_subset_of(self, other: "ModalSet") -> bool:
        """Inclusion at every world."""
        return all(
            (not a) or b
            for ra, rb in zip(self.table, other.table)
            for a, b in zip(ra, rb)
        )


def all_modal_sets(scope: Scope) -> list[ModalSet]:
    size = denotation_size(PROPERTY_TYPE, scope)
    return [ModalSet.from_index(i, scope) for i in range(size)]


@dataclass(frozen=True)
class PropertyFamily:
    """A modal set of modal sets: membership[property index][world]."""

    scope: Scope
    membership: tuple[tuple[bool, ...], ...]

    @classmethod
    def from_semvalue(cls, value: SemValue, scope: Scope) -> "PropertyFamily":
        size = denotation_size(PROPERTY_TYPE, scope)
        assert isinstance(value, STable)
        if len(value.entries) != size:
            raise HomlError(
                f"family has {len(value.entries)} entries, scope {scope} needs {size}"
            )
        return cls(scope, tuple(tuple(b.value for b in row.entries) for row in value.entries))

    @classmethod
    def from_model(cls, model: KripkeModel, constant: str) -> "PropertyFamily":
        value = model.constants.get(constant)
        if value is None:
            raise HomlError(f"model does not interpret constant {constant!r}")
        if model.constant_types[constant] != FAMILY_TYPE:
            raise HomlError(f"constant {constant!r} is not a property family")
        return cls.from_semvalue(value, model.scope)

    def member(self, mset: ModalSet, world: int) -> bool:
        return self.membership[mset.index(self.scope)][world]


@dataclass(frozen=True)
class FilterReport:
    per_world: tuple[bool, ...]
    failures: tuple[str, ...]

    @property
    def globally(self) -> bool:
        return all(self.per_world)


def _check_scope(model: KripkeModel, family: PropertyFamily):
    if family.scope.num_worlds != model.scope.num_worlds or \
            family.scope.num_entities != model.scope.num_entities:
        raise HomlError(f"family scope {family.scope} does not match model scope {model.scope}")


def is_modal_filter(model: KripkeModel, family: PropertyFamily) -> FilterReport:
    """The four filter conditions, per world: contains the full set, excludes
    the empty set, upward closed under every-world inclusion, closed under
    world-wise intersection."""
    _check_scope(model, family)
    scope = model.scope
    n = scope.num_worlds
    sets = all_modal_sets(scope)
    members = {w: [s for s in sets if family.member(s, w)] for w in range(n)}
    full = ModalSet.rigid(range(scope.num_entities), scope.num_entities, n)
    empty = ModalSet.rigid((), scope.num_entities, n)
    per_world = []
    failures = []
    for w in range(n):
        ok = True
        if not family.member(full, w):
            ok = False
            failures.append(f"w{w}: full set not a member")
        if family.member(empty, w):
            ok = False
            failures.append(f"w{w}: empty set is a member")
        for a in members[w]:
            for b in sets:
                if a.rigid_subset_of(b) and not family.member(b, w):
                    ok = False
                    failures.append(f"w{w}: not upward closed at {a.table}<={b.table}")
        for a in members[w]:
            for b in members[w]:
                if not family.member(a.intersect(b), w):
                    ok = False
                    failures.append(f"w{w}: not intersection closed at {a.table},{b.table}")
        per_world.append(ok)
    return FilterReport(tuple(per_world), tuple(failures))


def _extension_family_report(model: KripkeModel, family: PropertyFamily) -> FilterReport:
    """Classical ultrafilter conditions on the world-projected extensions."""
    scope = model.scope
    n, m = scope.num_worlds, scope.num_entities
    sets = all_modal_sets(scope)
    universe = [frozenset(s) for r in range(m + 1) for s in itertools.combinations(range(m), r)]
    per_world = []
    failures = []
    for w in range(n):
        exts = {s.extension(w) for s in sets if family.member(s, w)}
        ok = True
        if frozenset(range(m)) not in exts:
            ok = False
            failures.append(f"w{w}: full extension missing")
        if frozenset() in exts:
            ok = False
            failures.append(f"w{w}: empty extension present")
        for a in exts:
            for b in universe:
                if a <= b and b not in exts:
                    ok = False
                    failures.append(f"w{w}: extensions not upward closed")
        for a in exts:
            for b in exts:
                if (a & b) not in exts:
                    ok = False
                    failures.append(f"w{w}: extensions not intersection closed")
        for a in universe:
            comp = frozenset(range(m)) - a
            if a not in exts and comp not in exts:
                ok = False
                failures.append(f"w{w}: extensions not maximal")
        per_world.append(ok)
    return FilterReport(tuple(per_world), tuple(failures))


def is_modal_ultrafilter(model: KripkeModel, family: PropertyFamily,
                         mode: str = "intension") -> FilterReport:
    """Filter conditions plus maximality: each modal set or its world-wise
    complement is a member. In extension mode the conditions are evaluated on
    world-projected extensions instead."""
    _check_scope(model, family)
    if mode == "extension":
        return _extension_family_report(model, family)
    if mode != "intension":
        raise HomlError(f"unknown ultrafilter mode {mode!r}")
    base = is_modal_filter(model, family)
    scope = model.scope
    sets = all_modal_sets(scope)
    per_world = list(base.per_world)
    failures = list(base.failures)
    for w in range(scope.num_worlds):
        for s in sets:
            if not family.member(s, w) and not family.member(s.complement(), w):
                per_world[w] = False
                failures.append(f"w{w}: neither {s.table} nor its complement is a member")
    return FilterReport(tuple(per_world), tuple(failures))


# ---------------------------------------------------------------------------
# Positive property counting

def positive_sets(model: KripkeModel, constant: str = "P", world: int = 0,
                  strict: bool = False) -> list[ModalSet]:
    """Modal sets the family holds positive: at the designated world by
    default, at every world in strict mode."""
    family = PropertyFamily.from_model(model, constant)
    out = []
    for j, row in enumerate(family.membership):
        hit = all(row) if strict else row[world]
        if hit:
            out.append(ModalSet.from_index(j, model.scope))
    return out


def distinct_positive_count(model: KripkeModel, constant: str = "P", world: int = 0,
                            strict: bool = False) -> int:
    """Number of pairwise structurally-distinct positive modal sets."""
    return len(positive_sets(model, constant, world, strict))


@dataclass(frozen=True)
class CountResult:
    minimum: int
    maximum: int
    model_count: int
    complete: bool
    empty_model_class: bool


def _exactly_k_clauses(problem: GroundProblem, k: int, world: int) -> list[list[int]]:
    """Exactly k entities satisfy existsAt at the given world."""
    vars_at_w = [problem.ex_vars[e][world] for e in range(len(problem.ex_vars))]
    m = len(vars_at_w)
    if k > m:
        raise HomlError(f"cannot require {k} existing entities with only {m} in scope")
    clauses = []
    for combo in itertools.combinations(vars_at_w, k + 1):
        clauses.append([-v for v in combo])
    for combo in itertools.combinations(vars_at_w, m - k + 1):
        clauses.append(list(combo))
    return clauses


def min_positive_count(theory: Theory, scope: Scope, constant: str = "P",
                       world: int = 0, strict: bool = False,
                       entity_mode: str = "possibilist",
                       entities: Optional[int] = None,
                       budget: int = DEFAULT_BUDGET,
                       model_limit: Optional[int] = None) -> CountResult:
    """Minimum of distinct_positive_count over every model at the scope.

    "Exactly k entities" defaults to the possibilist reading (the scope's
    entity count is k); the actualist reading instead constrains how many
    entities satisfy existsAt at the designated world.
    """
    problem = ground(theory, scope)
    if entity_mode == "actualist":
        if entities is None:
            raise HomlError("actualist entity mode requires an entity count")
        problem.clauses.extend(_exactly_k_clauses(problem, entities, world))
    elif entity_mode != "possibilist":
        raise HomlError(f"unknown entity mode {entity_mode!r}")
    minimum = None
    maximum = None
    seen = 0
    complete = True
    try:
        for model in iterate_models(problem, budget=budget, limit=model_limit):
            count = distinct_positive_count(model, constant, world, strict)
            minimum = count if minimum is None else min(minimum, count)
            maximum = count if maximum is None else max(maximum, count)
            seen += 1
        if model_limit is not None and seen >= model_limit:
            complete = False
    except BudgetExceededError:
        complete = False
    if minimum is None:
        return CountResult(0, 0, seen, complete, True)
    return CountResult(minimum, maximum, seen, complete, False)


# ---------------------------------------------------------------------------
# Equipollence, cardinal successor, diagonal experiments

def equipollent(model: KripkeModel, p: ModalSet, q: ModalSet) -> bool:
    """True iff some single enumerated map is, at every world, a bijection
    between p's and q's extensions."""
    scope = model.scope
    m = scope.num_entities
    denotation_size(Fun(Ind, Ind), scope)  # enforce the enumeration cap
    worlds = range(scope.num_worlds)
    p_ext = [p.extension(w) for w in worlds]
    q_ext = [q.extension(w) for w in worlds]
    if any(len(a) != len(b) for a, b in zip(p_ext, q_ext)):
        return False
    for fn in itertools.product(range(m), repeat=m):
        if all(
            frozenset(fn[e] for e in p_ext[w]) == q_ext[w]
            and len({fn[e] for e in p_ext[w]}) == len(p_ext[w])
            for w in worlds
        ):
            return True
    return False


def equipollence_class(model: KripkeModel, p: ModalSet) -> frozenset[ModalSet]:
    return frozenset(q for q in all_modal_sets(model.scope) if equipollent(model, q, p))


def successor_cardinal_check(model: KripkeModel, k: int) -> bool:
    """The successor construction applied to the class of a rigid k-element
    set yields exactly the class of rigid (k+1)-element sets."""
    scope = model.scope
    m, n = scope.num_entities, scope.num_worlds
    if k < 0 or k + 1 > m:
        raise HomlError(f"successor of a {k}-element set needs {k + 1} <= m = {m}")
    base = ModalSet.rigid(range(k), m, n)
    target = ModalSet.rigid(range(k + 1), m, n)
    base_class = equipollence_class(model, base)
    target_class = equipollence_class(model, target)
    successor_class = set()
    sets = all_modal_sets(scope)
    for p in base_class:
        for z in range(m):
            if any(p.table[z][w] for w in range(n)):
                continue  # z must be fresh for p at every world
            extended = ModalSet(
                tuple(
                    tuple(p.table[e][w] or e == z for w in range(n))
                    for e in range(m)
                )
            )
            for q in sets:
                if equipollent(model, q, extended):
                    successor_class.add(q)
    return successor_class == set(target_class)


def surjection_exists(model: KripkeModel, constant: str = "P", world: int = 0,
                      strict: bool = False) -> bool:
    """Whether any total map from entities onto the positive modal sets exists
    (exhaustive over enumerated maps)."""
    positives = positive_sets(model, constant, world, strict)
    m = model.scope.num_entities
    if not positives:
        return False
    if len(positives) > m:
        return False
    for image in itertools.product(range(len(positives)), repeat=m):
        if len(set(image)) == len(positives):
            return True
    return False


def diagonal_witness(model: KripkeModel, mapping: Sequence[ModalSet]) -> tuple[ModalSet, bool]:
    """Per-world diagonal of a map entity -> modal set: D(x)(w) = not F(x)(x)(w).

    Returns the diagonal set and whether it lies outside the range of the map.
    """
    scope = model.scope
    m, n = scope.num_entities, scope.num_worlds
    if len(mapping) != m:
        raise HomlError(f"mapping must assign a modal set to each of the {m} entities")
    diag = ModalSet(
        tuple(tuple(not mapping[e].table[e][w] for w in range(n)) for e in range(m))
    )
    outside = all(diag != mapping[e] for e in range(m))
    return diag, outside
