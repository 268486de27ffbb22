"""Denotation enumeration and the finite-scope evaluator."""

import pytest

from homlkit.errors import ScopeCapError
from homlkit.logictypes import Fun, Ind, Prop
from homlkit.semantics import (
    KripkeModel,
    SBool,
    Scope,
    SEntity,
    STable,
    denotation_size,
    enumerate_denotation,
    enumerate_full_models,
    eval_mask,
    eval_term,
    holds_at,
    index_value,
    model_from_json,
    model_to_json_str,
    mvalid,
    value_index,
)
from homlkit.surface import load_theory, parse, typecheck
from homlkit.terms import (
    App,
    Box,
    Const,
    Diamond,
    ExistsA,
    ForallP,
    Iff,
    Implies,
    LeibnizEq,
    Var,
)

TAU = Fun(Ind, Prop)


def full_model(scope, accessibility, exists_at, constants=None, types=None):
    return KripkeModel(scope, accessibility, exists_at, constants or {}, types or {})


def total_relation(n):
    return tuple(tuple(True for _ in range(n)) for _ in range(n))


def prop_value(bits):
    return STable(tuple(SBool(b) for b in bits))


def test_denotation_sizes():
    assert denotation_size(Ind, Scope(1, 3)) == 3
    assert denotation_size(Fun(Ind, Prop), Scope(2, 2)) == 16
    assert denotation_size(Fun(Fun(Ind, Prop), Prop), Scope(1, 2)) == 16


def test_denotation_cap_exceeded_names_type():
    with pytest.raises(ScopeCapError) as err:
        denotation_size(Fun(Fun(Ind, Prop), Prop), Scope(2, 2))
    assert "(i > prop) > prop" in str(err.value)


def test_enumerate_prop_single_world():
    values = list(enumerate_denotation(Prop, Scope(1, 1)))
    assert values == [prop_value([False]), prop_value([True])]


def test_enumerate_property_space_smallest_scope():
    values = list(enumerate_denotation(Fun(Ind, Prop), Scope(1, 1)))
    assert len(values) == 2


def test_enumerate_lengths_and_uniqueness():
    scope = Scope(2, 2)
    for ty in (Ind, Prop, Fun(Ind, Prop), Fun(Ind, Ind), Fun(Prop, Prop)):
        values = list(enumerate_denotation(ty, scope))
        assert len(values) == denotation_size(ty, scope)
        assert len(set(values)) == len(values)
        for i, v in enumerate(values):
            assert value_index(v, ty, scope) == i


def test_single_reflexive_world_box_is_identity():
    scope = Scope(1, 1)
    model = full_model(scope, ((True,),), ((True,),),
                       {"c": prop_value([True])}, {"c": Prop})
    c = Const("c", Prop)
    assert holds_at(model, Box(c), 0) == holds_at(model, c, 0)
    model2 = full_model(scope, ((True,),), ((True,),),
                        {"c": prop_value([False])}, {"c": Prop})
    assert holds_at(model2, Box(c), 0) == holds_at(model2, c, 0)


def test_two_world_footnote_model():
    # phi false at both worlds, psi false at i1 and true at i2, total r:
    # the lifted equivalence holds at i1 although the tables differ.
    scope = Scope(2, 1)
    model = full_model(
        scope, total_relation(2), ((True, True),),
        {"phi": prop_value([False, False]), "psi": prop_value([False, True])},
        {"phi": Prop, "psi": Prop},
    )
    phi, psi = Const("phi", Prop), Const("psi", Prop)
    assert holds_at(model, Iff(phi, psi), 0) is True
    assert eval_term(model, [], phi) != eval_term(model, [], psi)
    # ... and Leibniz equality accordingly fails at i1.
    assert holds_at(model, LeibnizEq(phi, psi), 0) is False


def test_top_bot():
    theory = load_theory("const c : prop\naxiom top\ngoal bot\n")
    scope = Scope(2, 2)
    model = full_model(scope, total_relation(2), ((True, True), (True, True)),
                       {"c": prop_value([True, False])}, {"c": Prop})
    top, bot = theory.axioms[0], theory.goals[0]
    for w in range(2):
        assert holds_at(model, top, w) is True
        assert holds_at(model, bot, w) is False


def _barcan_terms():
    src = (
        "const P : i > prop\n"
        "goal (forallP x:i. box (P x)) -> (box (forallP x:i. P x))\n"
        "goal (forallA x. box (P x)) -> (box (forallA x. P x))\n"
    )
    theory = load_theory(src)
    return theory.goals


def test_barcan_possibilist_valid_actualist_not_at_2_2():
    # Oracle: brute force over every model at scope (2,2).
    possibilist, actualist = _barcan_terms()
    scope = Scope(2, 2)
    signature = (("P", TAU),)
    possibilist_valid = True
    actualist_countermodels = 0
    for model in enumerate_full_models(signature, scope):
        if not mvalid(model, possibilist):
            possibilist_valid = False
        if not mvalid(model, actualist):
            actualist_countermodels += 1
    assert possibilist_valid
    assert actualist_countermodels > 0


def test_k_schema_valid_over_enumerated_props():
    src = "const p : prop\nconst q : prop\ngoal (box (p -> q)) -> ((box p) -> (box q))\n"
    goal = load_theory(src).goals[0]
    for n, m in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        signature = (("p", Prop), ("q", Prop))
        for model in enumerate_full_models(signature, Scope(n, m)):
            assert mvalid(model, goal)


def test_necessitation_per_model():
    src = "const p : prop\ngoal p\n"
    goal = load_theory(src).goals[0]
    for model in enumerate_full_models((("p", Prop),), Scope(2, 1)):
        if mvalid(model, goal):
            assert mvalid(model, Box(goal))


def test_refl_gives_t_and_equivalence_gives_s5_pattern():
    src = "const p : prop\ngoal (box p) -> p\ngoal (dia p) -> (box (dia p))\n"
    t_schema, five_schema = load_theory(src).goals
    for n, m in [(2, 1), (3, 2)]:
        for model in enumerate_full_models((("p", Prop),), Scope(n, m)):
            if model.satisfies_frame({"refl"}):
                assert mvalid(model, t_schema)
            if model.satisfies_frame({"refl", "symm", "trans"}):
                assert mvalid(model, five_schema)


def test_leibniz_on_individuals_is_index_identity():
    theory = load_theory("const a : i\nconst b : i\ngoal a == b\n")
    goal = theory.goals[0]  # elaborated Leibniz equality
    native = LeibnizEq(Const("a", Ind), Const("b", Ind))
    signature = (("a", Ind), ("b", Ind))
    for model in enumerate_full_models(signature, Scope(2, 2)):
        same = model.constants["a"] == model.constants["b"]
        assert mvalid(model, goal) == same
        assert mvalid(model, native) == same


def test_eval_deterministic():
    theory = load_theory("const P : i > prop\ngoal forallP x:i. (P x) | (not (P x))\n")
    goal = theory.goals[0]
    scope = Scope(2, 2)
    model = full_model(
        scope, total_relation(2), ((True, False), (False, True)),
        {"P": index_value(7, TAU, scope)}, {"P": TAU},
    )
    first = eval_term(model, [], goal)
    again = eval_term(model, [], goal)
    assert first == again


def test_eval_term_with_environment():
    scope = Scope(2, 2)
    model = full_model(scope, total_relation(2), ((True, True), (True, True)))
    applied = App(Var(0, TAU, "f"), Var(1, Ind, "x"))
    env = [index_value(5, TAU, scope), SEntity(1)]
    expected = index_value(5, TAU, scope).entries[1]
    assert eval_term(model, env, applied) == expected


def test_exists_actualist_empty_domain_vacuous():
    # existsAt all-false: actualist exists is false, actualist forall vacuous.
    scope = Scope(1, 2)
    model = full_model(scope, ((True,),), ((False,), (False,)),
                       {"A": index_value(3, TAU, scope)}, {"A": TAU})
    assert holds_at(model, ExistsA(Ind, App(Const("A", TAU), Var(0, Ind))), 0) is False
    assert eval_mask(model, ForallP(Ind, Implies(App(Const("existsAt", TAU), Var(0, Ind)),
                                                 App(Const("A", TAU), Var(0, Ind))))) == 1


def test_model_json_round_trip():
    scope = Scope(2, 2)
    model = full_model(
        scope, ((True, False), (True, True)), ((True, False), (False, True)),
        {"P": index_value(9, TAU, scope), "c": SEntity(1)},
        {"P": TAU, "c": Ind},
    )
    text = model_to_json_str(model)
    import json
    back = model_from_json(json.loads(text))
    assert back == model
    assert model_to_json_str(back) == text


def test_eval_error_cases():
    import pytest
    from homlkit.errors import HomlError

    with pytest.raises(HomlError):
        Scope(0, 1)
    scope = Scope(1, 1)
    model = full_model(scope, ((True,),), ((True,),))
    with pytest.raises(HomlError):
        eval_term(model, [], Const("missing", Prop))
    with pytest.raises(HomlError):
        eval_term(model, [], Var(0, Prop, "free"))


def test_diamond_dual_of_box():
    scope = Scope(2, 1)
    for model in enumerate_full_models((("p", Prop),), scope):
        p = Const("p", Prop)
        from homlkit.terms import Not
        assert eval_mask(model, Diamond(p)) == eval_mask(model, Not(Box(Not(p))))
