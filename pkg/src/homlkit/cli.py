"""Command-line entry point: parse -> elaborate -> ground/evaluate -> analyse.

Output is a JSON report (canonical, byte-stable across runs); the text format
is rendered from it. Exit codes: 0 expected verdicts, 1 counter-result,
2 usage or parse error, 3 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .analysis import (
    PropertyFamily,
    is_modal_ultrafilter,
    min_positive_count,
    positive_sets,
)
from .errors import BudgetExceededError, HomlError, SourceError
from .grounder import (
    DEFAULT_BUDGET,
    check_validity_bounded,
    enumerate_models,
    export_dimacs,
    find_model,
    ground,
)
from .semantics import (
    Countermodel,
    Indeterminate,
    KripkeModel,
    Satisfiable,
    Scope,
    Unsatisfiable,
    ValidUpToScope,
    model_to_json,
    mvalid,
)
from .surface import elaborate, parse, typecheck
from .theories import check_church_postulates, load_bundle
from .theory import Theory

EXIT_OK = 0
EXIT_COUNTER = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _parse_scope(text: str) -> Scope:
    try:
        n, m = (int(part) for part in text.split(","))
        return Scope(n, m)
    except (ValueError, HomlError) as exc:
        raise HomlError(f"bad scope {text!r} (expected N,M with N,M >= 1): {exc}") from exc


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("HOMLKIT_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


def _load_theory_arg(args) -> tuple[Theory, dict]:
    """Resolve --bundle/--file plus variant flags into an elaborated theory."""
    meta = {}
    if args.bundle:
        params = {}
        for key in ("quantifier", "formulation", "extension"):
            value = getattr(args, key, None)
            if value is not None:
                params[key] = value
        bundle = load_bundle(args.bundle, **params)
        theory = bundle.theory
        meta["bundle"] = args.bundle
        meta["variant"] = bundle.variant
        meta["goal_labels"] = list(bundle.goal_labels)
        meta["manifest"] = bundle.manifest
    else:
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
        theory = elaborate(typecheck(parse(text, args.file), args.file))
        meta["file"] = args.file
        meta["goal_labels"] = [f"goal{i}" for i in range(len(theory.goals))]
    if args.frame is not None:
        flags = frozenset(f for f in args.frame.split(",") if f)
        bad = flags - {"refl", "symm", "trans"}
        if bad:
            raise HomlError(f"unknown frame flags {sorted(bad)}")
        theory = Theory(theory.name, theory.signature, theory.definitions,
                        theory.axioms, theory.goals, flags)
    return theory, meta


def _verdict_json(verdict) -> dict:
    if isinstance(verdict, ValidUpToScope):
        return {"verdict": "valid_up_to_scope",
                "scope": [verdict.scope.num_worlds, verdict.scope.num_entities]}
    if isinstance(verdict, Countermodel):
        return {"verdict": "countermodel", "world": verdict.world,
                "model": model_to_json(verdict.model)}
    if isinstance(verdict, Satisfiable):
        return {"verdict": "satisfiable", "model": model_to_json(verdict.model)}
    if isinstance(verdict, Unsatisfiable):
        return {"verdict": "unsatisfiable",
                "scope": [verdict.scope.num_worlds, verdict.scope.num_entities]}
    if isinstance(verdict, Indeterminate):
        return {"verdict": "indeterminate", "reason": verdict.reason}
    raise HomlError(f"unknown verdict {verdict!r}")


def _scope_list(scope: Scope) -> list[int]:
    return [scope.num_worlds, scope.num_entities]


# ---------------------------------------------------------------------------
# Commands

def cmd_check(args) -> tuple[int, dict]:
    theory, meta = _load_theory_arg(args)
    scope = _parse_scope(args.scope)
    budget = _budget(args)
    labels = meta["goal_labels"]
    if args.goal is not None:
        wanted = [args.goal]
    else:
        wanted = labels
    results = []
    exit_code = EXIT_OK
    for label in wanted:
        if label not in labels:
            raise HomlError(f"no goal labelled {label!r} (have {labels})")
        goal = theory.goals[labels.index(label)]
        verdict = check_validity_bounded(theory, goal, scope, budget)
        entry = {"goal": label, "scope": _scope_list(scope)}
        entry.update(_verdict_json(verdict))
        results.append(entry)
        if isinstance(verdict, Countermodel):
            exit_code = max(exit_code, EXIT_COUNTER)
        elif isinstance(verdict, Indeterminate):
            exit_code = max(exit_code, EXIT_BUDGET)
    report = {"command": "check", "scope": _scope_list(scope), "results": results}
    if "bundle" in meta:
        report["bundle"] = meta["bundle"]
        report["variant"] = meta["variant"]
    return exit_code, report


def cmd_find_model(args) -> tuple[int, dict]:
    theory, meta = _load_theory_arg(args)
    scope = _parse_scope(args.scope)
    model = find_model(theory, scope, _budget(args))
    report = {"command": "find-model", "scope": _scope_list(scope)}
    if "bundle" in meta:
        report["bundle"] = meta["bundle"]
        report["variant"] = meta["variant"]
    if model is None:
        report["result"] = _verdict_json(Unsatisfiable(scope))
        return EXIT_COUNTER, report
    axioms_hold = all(mvalid(model, ax) for ax in theory.axioms)
    result = _verdict_json(Satisfiable(model))
    result["axioms_hold"] = axioms_hold
    report["result"] = result
    return EXIT_OK if axioms_hold else EXIT_COUNTER, report


def cmd_enumerate(args) -> tuple[int, dict]:
    theory, meta = _load_theory_arg(args)
    scope = _parse_scope(args.scope)
    models = list(enumerate_models(theory, scope, limit=args.limit, budget=_budget(args)))
    report = {
        "command": "enumerate",
        "scope": _scope_list(scope),
        "count": len(models),
        "limit": args.limit,
        "models": [model_to_json(m) for m in models],
    }
    if "bundle" in meta:
        report["bundle"] = meta["bundle"]
        report["variant"] = meta["variant"]
    return EXIT_OK, report


def cmd_church_suite(args) -> tuple[int, dict]:
    scope = _parse_scope(args.scope)
    budget = _budget(args)
    results = check_church_postulates(scope, budget)
    one_world = _parse_scope(args.one_world_scope)
    results_one = check_church_postulates(one_world, budget)
    entries = []
    ok = True
    for res in list(results) + list(results_one):
        entry = {
            "postulate": res.label,
            "scope": _scope_list(res.scope),
            "expected": res.expected,
            "as_expected": res.as_expected,
        }
        entry.update(_verdict_json(res.verdict))
        entries.append(entry)
        ok = ok and res.as_expected
    report = {"command": "church-suite", "scope": _scope_list(scope),
              "one_world_scope": _scope_list(one_world), "results": entries}
    return (EXIT_OK if ok else EXIT_COUNTER), report


def cmd_goedel_suite(args) -> tuple[int, dict]:
    budget = _budget(args)
    bundle = load_bundle("goedel")
    manifest = bundle.manifest
    mode = args.ultrafilter_mode or manifest["ultrafilter_mode"]
    world = manifest.get("counting_world", 0)
    report = {"command": "goedel-suite", "ultrafilter_mode": mode, "results": {}}
    ok = True
    collected: list[tuple[str, KripkeModel]] = []

    smallest = Scope(*manifest["smallest_model_scope"])
    model = find_model(bundle.theory, smallest, budget)
    consistent = model is not None and all(mvalid(model, ax) for ax in bundle.theory.axioms)
    ok = ok and consistent
    report["results"]["consistency"] = {
        "scope": _scope_list(smallest),
        "satisfiable": model is not None,
        "axioms_hold": consistent,
        "model": model_to_json(model) if model else None,
    }
    if model is not None:
        collected.append(("consistency", model))

    validity = []
    for quantifier in ("actualist", "possibilist"):
        variant_bundle = load_bundle("goedel", quantifier=quantifier)
        for n in (1, 2):
            for m in (1, 2):
                scope = Scope(n, m)
                verdict = check_validity_bounded(
                    variant_bundle.theory, variant_bundle.theory.goals[0], scope, budget)
                entry = {"quantifier": quantifier, "scope": [n, m]}
                entry.update(_verdict_json(verdict))
                entry["as_expected"] = isinstance(verdict, ValidUpToScope)
                ok = ok and entry["as_expected"]
                validity.append(entry)
    report["results"]["validity"] = validity

    counting = []
    for spec_entry in manifest["positive_counts"]:
        scope = Scope(spec_entry["worlds"], spec_entry["entities"])
        count = min_positive_count(bundle.theory, scope, constant=manifest["positive_constant"],
                                   world=world, budget=budget)
        matches = count.complete and count.minimum == spec_entry["min"]
        ok = ok and matches
        counting.append({
            "scope": _scope_list(scope),
            "expected_min": spec_entry["min"],
            "minimum": count.minimum,
            "maximum": count.maximum,
            "models": count.model_count,
            "complete": count.complete,
            "as_expected": matches,
        })
        for i, found in enumerate(
                enumerate_models(bundle.theory, scope, budget=budget)):
            collected.append((f"count{scope.num_worlds},{scope.num_entities}#{i}", found))
    # Reported (not asserted) at two worlds, within a bounded model budget.
    scope22 = Scope(2, 2)
    count22 = min_positive_count(bundle.theory, scope22, constant=manifest["positive_constant"],
                                 world=world, budget=budget, model_limit=args.report_limit)
    counting.append({
        "scope": _scope_list(scope22),
        "expected_min": None,
        "minimum": count22.minimum,
        "maximum": count22.maximum,
        "models": count22.model_count,
        "complete": count22.complete,
        "as_expected": True,
    })
    for i, found in enumerate(enumerate_models(bundle.theory, scope22, budget=budget,
                                               limit=args.report_limit)):
        collected.append((f"count2,2#{i}", found))
    report["results"]["positive_counts"] = counting

    ultra = []
    for tag, found in collected:
        family = PropertyFamily.from_model(found, manifest["positive_constant"])
        rep = is_modal_ultrafilter(found, family, mode)
        ok = ok and rep.globally
        witnesses = positive_sets(found, manifest["positive_constant"], world)
        ultra.append({
            "model": tag,
            "scope": _scope_list(found.scope),
            "per_world": list(rep.per_world),
            "ultrafilter": rep.globally,
            "positive_count": len(witnesses),
            "positive_sets": [
                [[bool(v) for v in row] for row in s.table] for s in witnesses
            ],
        })
    report["results"]["ultrafilter"] = ultra
    report["ok"] = ok
    return (EXIT_OK if ok else EXIT_COUNTER), report


def cmd_count_positive(args) -> tuple[int, dict]:
    theory, meta = _load_theory_arg(args)
    manifest = meta.get("manifest", {})
    constant = manifest.get("positive_constant", args.constant)
    world = args.counting_world
    strict = args.counting_mode == "strict"
    if args.entity_mode == "possibilist":
        scope = Scope(args.worlds, args.entities)
        entities = None
    else:
        scope = _parse_scope(args.scope)
        entities = args.entities
    result = min_positive_count(theory, scope, constant=constant, world=world,
                                strict=strict, entity_mode=args.entity_mode,
                                entities=entities, budget=_budget(args),
                                model_limit=args.limit)
    report = {
        "command": "count-positive",
        "scope": _scope_list(scope),
        "entities": args.entities,
        "entity_mode": args.entity_mode,
        "counting_mode": args.counting_mode,
        "counting_world": world,
        "minimum": result.minimum,
        "maximum": result.maximum,
        "models": result.model_count,
        "complete": result.complete,
        "empty_model_class": result.empty_model_class,
    }
    if "bundle" in meta:
        report["bundle"] = meta["bundle"]
        report["variant"] = meta["variant"]
    if not result.complete:
        return EXIT_BUDGET, report
    expected = None
    for entry in manifest.get("positive_counts", []):
        if entry["worlds"] == scope.num_worlds and entry["entities"] == scope.num_entities:
            expected = entry["min"]
    if expected is not None and args.entity_mode == "possibilist" and not strict:
        report["expected_min"] = expected
        if result.minimum != expected:
            return EXIT_COUNTER, report
    return EXIT_OK, report


def cmd_export_cnf(args) -> tuple[int, dict]:
    theory, meta = _load_theory_arg(args)
    scope = _parse_scope(args.scope)
    negated_goal = None
    if args.mode == "refute":
        labels = meta["goal_labels"]
        label = args.goal if args.goal is not None else (labels[0] if labels else None)
        if label is None or label not in labels:
            raise HomlError("refute mode requires a goal")
        negated_goal = theory.goals[labels.index(label)]
    problem = ground(theory, scope, negated_goal=negated_goal)
    data = export_dimacs(problem)
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK, {}


# ---------------------------------------------------------------------------

def _render_text(report: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for key in sorted(report):
            value = report[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(report, list):
        for item in report:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{report}")
    return "\n".join(lines)


def _add_theory_args(sub, bundle_only=False):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--bundle", help="bundled theory id")
    if not bundle_only:
        group.add_argument("--file", help="theory-DSL source file")
    sub.add_argument("--quantifier", choices=["actualist", "possibilist"])
    sub.add_argument("--formulation", choices=["scott", "goedel-1970"])
    sub.add_argument("--extension", choices=["core", "infinity"])
    sub.add_argument("--frame", help="override frame flags, e.g. refl,symm,trans")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homlkit",
        description="Higher-order modal logic toolkit: bounded model finding over finite Kripke models.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("--budget", type=int, help="solver conflict budget")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check", parents=[common], help="bounded validity check of theory goals")
    _add_theory_args(sub)
    sub.add_argument("--scope", default="2,2")
    sub.add_argument("--goal", help="goal label (default: all goals)")
    sub.set_defaults(handler=cmd_check)

    sub = subs.add_parser("find-model", parents=[common], help="find a model of the axioms at a scope")
    _add_theory_args(sub)
    sub.add_argument("--scope", default="2,2")
    sub.set_defaults(handler=cmd_find_model)

    sub = subs.add_parser("enumerate", parents=[common], help="enumerate models at a scope")
    _add_theory_args(sub)
    sub.add_argument("--scope", default="1,1")
    sub.add_argument("--limit", type=int, default=None)
    sub.set_defaults(handler=cmd_enumerate)

    sub = subs.add_parser("church-suite", parents=[common], help="check the lifted Church postulates")
    sub.add_argument("--scope", default="2,2")
    sub.add_argument("--one-world-scope", default="1,2")
    sub.set_defaults(handler=cmd_church_suite)

    sub = subs.add_parser("goedel-suite", parents=[common], help="consistency, validity, counting, ultrafilter checks")
    sub.add_argument("--ultrafilter-mode", choices=["intension", "extension"])
    sub.add_argument("--report-limit", type=int, default=64,
                     help="model cap for the two-world count report")
    sub.set_defaults(handler=cmd_goedel_suite)

    sub = subs.add_parser("count-positive", parents=[common], help="minimum distinct positive properties over models")
    _add_theory_args(sub)
    sub.add_argument("--entities", type=int, required=True)
    sub.add_argument("--worlds", type=int, default=1)
    sub.add_argument("--scope", default="2,2", help="full scope for actualist entity mode")
    sub.add_argument("--entity-mode", choices=["possibilist", "actualist"], default="possibilist")
    sub.add_argument("--counting-mode", choices=["designated", "strict"], default="designated")
    sub.add_argument("--counting-world", type=int, default=0)
    sub.add_argument("--constant", default="P")
    sub.add_argument("--limit", type=int, default=None)
    sub.set_defaults(handler=cmd_count_positive)

    sub = subs.add_parser("export-cnf", parents=[common], help="export the ground problem as DIMACS CNF")
    _add_theory_args(sub)
    sub.add_argument("--scope", default="2,2")
    sub.add_argument("--mode", choices=["satisfy", "refute"], default="satisfy")
    sub.add_argument("--goal", help="goal label for refute mode")
    sub.set_defaults(handler=cmd_export_cnf)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        exit_code, report = args.handler(args)
    except SourceError as exc:
        report = {"command": args.command, "error": str(exc)}
        exit_code = EXIT_USAGE
    except BudgetExceededError as exc:
        report = {"command": args.command, "error": str(exc)}
        exit_code = EXIT_BUDGET
    except (HomlError, OSError) as exc:
        report = {"command": args.command, "error": str(exc)}
        exit_code = EXIT_USAGE
    if report:
        if args.format == "json":
            text = json.dumps(report, sort_keys=True, indent=2) + "\n"
        else:
            text = _render_text(report) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
