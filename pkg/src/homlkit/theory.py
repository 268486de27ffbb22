"""Theories: named bundles of signature, definitions, axioms, goals, frame flags."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .logictypes import LogicType, format_type
from .terms import Term, format_term

FRAME_FLAGS = ("refl", "symm", "trans")


@dataclass(frozen=True)
class Theory:
    name: str
    signature: tuple[tuple[str, LogicType], ...] = ()
    definitions: tuple[tuple[str, Term], ...] = ()
    axioms: tuple[Term, ...] = ()
    goals: tuple[Term, ...] = ()
    frame_flags: frozenset[str] = frozenset()

    def constant_type(self, name: str) -> LogicType | None:
        for n, t in self.signature:
            if n == name:
                return t
        return None

    def with_goals(self, goals) -> "Theory":
        return replace(self, goals=tuple(goals))

    def with_axioms(self, axioms) -> "Theory":
        return replace(self, axioms=tuple(axioms))


def format_theory(theory: Theory) -> str:
    """Render a theory back into the line-oriented DSL."""
    lines = [f"theory {theory.name}"]
    if theory.frame_flags:
        flags = " ".join(f for f in FRAME_FLAGS if f in theory.frame_flags)
        lines.append(f"frame {flags}")
    for name, ty in theory.signature:
        lines.append(f"const {name} : {format_type(ty)}")
    for name, body in theory.definitions:
        lines.append(f"def {name} := {format_term(body)}")
    for ax in theory.axioms:
        lines.append(f"axiom {format_term(ax)}")
    for goal in theory.goals:
        lines.append(f"goal {format_term(goal)}")
    return "\n".join(lines) + "\n"
