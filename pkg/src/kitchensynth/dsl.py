"""The policy language: condition/action primitives, programs, parsing, and
the interpreter.

A program is an ordered list of if-then modules. Each module guards one
action primitive with a conjunction of (possibly negated) condition
primitives; the first module whose conjunction holds fires. If none fires,
the implicit trailing fallback picks a uniformly random environment action.

Concrete syntax (``*.ktp`` files)::

    if ExIdlePot and HoldOnion:
        GoIntIdlePot
    if ExServing and HoldSoup:
        GoIntServing
    RandomAct

``#`` starts a comment. Nesting is not allowed; the trailing ``RandomAct``
is mandatory and stands for the fallback.
"""
from __future__ import annotations

from dataclasses import dataclass

from .world import ACTIONS

CONDITION_NAMES = (
    "HoldEmpty", "HoldOnion", "HoldDish", "HoldSoup",
    "ExServing", "ExOnionDisp", "ExDishDisp",
    "ExOnionCounter", "ExDishCounter", "ExSoupCounter", "ExEmptyCounter",
    "ExIdlePot", "ExReadyPot",
)
ACTION_NAMES = (
    "GoIntServing", "GoIntOnionDisp", "GoIntDishDisp",
    "GoIntOnionCounter", "GoIntDishCounter", "GoIntSoupCounter",
    "GoIntEmptyCounter", "GoIntIdlePot", "GoIntReadyPot",
)
_CONDITION_ORDER = {name: i for i, name in enumerate(CONDITION_NAMES)}

# Condition groups that can never hold together when positive.
MUTEX_GROUPS = (frozenset({"HoldEmpty", "HoldOnion", "HoldDish", "HoldSoup"}),)


class ProgramError(ValueError):
    """Malformed program text or an invalid module structure."""


@dataclass(frozen=True)
class Condition:
    name: str
    negated: bool = False

    def __post_init__(self):
        if self.name not in CONDITION_NAMES:
            raise ProgramError(f"unknown condition primitive {self.name!r}")

    def __str__(self):
        return f"not {self.name}" if self.negated else self.name


@dataclass(frozen=True)
class ITModule:
    conditions: tuple[Condition, ...]
    action: str

    def __post_init__(self):
        if not self.conditions:
            raise ProgramError("empty conjunction")
        if self.action not in ACTION_NAMES:
            raise ProgramError(f"unknown action primitive {self.action!r}")
        seen = {}
        for c in self.conditions:
            if c.name in seen:
                if seen[c.name] != c.negated:
                    raise ProgramError(f"contradictory condition {c.name}")
                raise ProgramError(f"duplicate condition {c.name}")
            seen[c.name] = c.negated

    def __str__(self):
        return f"if {' and '.join(map(str, self.conditions))}:\n    {self.action}"


@dataclass(frozen=True)
class Program:
    modules: tuple[ITModule, ...] = ()

    @property
    def complexity(self) -> int:
        """Total number of condition primitive occurrences."""
        return sum(len(m.conditions) for m in self.modules)

    def __len__(self):
        return len(self.modules)

    def __str__(self):
        return render_program(self)


def eval_condition(condition: Condition, percept: dict) -> bool:
    value = percept[condition.name]
    return not value if condition.negated else bool(value)


def select_action(program: Program, percept: dict, rng) -> tuple[str, int | None]:
    """First-match interpretation.

    Returns ``(choice, index)`` where choice is the fired module's action
    primitive and index its position, or a uniformly random environment
    action with index ``None`` when no module fires (the trailing fallback).
    """
    for idx, module in enumerate(program.modules):
        if all(eval_condition(c, percept) for c in module.conditions):
            return module.action, idx
    return ACTIONS[rng.randrange(len(ACTIONS))], None


# --- concrete syntax ---------------------------------------------------------

def _parse_conjunction(text: str, lineno: int) -> tuple[Condition, ...]:
    parts = [p.strip() for p in text.split(" and ")]
    if not text.strip() or not all(parts):
        raise ProgramError(f"line {lineno}: empty conjunction")
    conditions = []
    for part in parts:
        negated = part.startswith("not ")
        name = part[4:].strip() if negated else part
        if name not in CONDITION_NAMES:
            raise ProgramError(f"line {lineno}: unknown condition primitive {name!r}")
        conditions.append(Condition(name, negated))
    return tuple(conditions)


def parse_program(text: str) -> Program:
    """Parse Listing-style program text; inverse of :func:`render_program`."""
    modules = []
    pending = None          # (conditions, lineno) awaiting an action line
    saw_fallback = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if saw_fallback:
            raise ProgramError(f"line {lineno}: content after RandomAct")
        stripped = line.strip()
        if pending is not None:
            if not line[0].isspace():
                raise ProgramError(f"line {lineno}: missing action (expected indented line)")
            if stripped.startswith("if ") or stripped == "RandomAct":
                raise ProgramError(f"line {lineno}: nested if is not allowed")
            if stripped not in ACTION_NAMES:
                raise ProgramError(f"line {lineno}: unknown action primitive {stripped!r}")
            modules.append(ITModule(pending[0], stripped))
            pending = None
        elif stripped.startswith("if ") and stripped.endswith(":"):
            pending = (_parse_conjunction(stripped[3:-1], lineno), lineno)
        elif stripped == "RandomAct":
            saw_fallback = True
        else:
            raise ProgramError(f"line {lineno}: unexpected line {stripped!r}")
    if pending is not None:
        raise ProgramError("missing action for final if")
    if not saw_fallback:
        raise ProgramError("missing trailing RandomAct")
    return Program(tuple(modules))


def render_program(program: Program) -> str:
    lines = []
    for module in program.modules:
        lines.append(f"if {' and '.join(map(str, module.conditions))}:")
        lines.append(f"    {module.action}")
    lines.append("RandomAct")
    return "\n".join(lines) + "\n"


def canonical_conditions(names, negated=()) -> tuple[Condition, ...]:
    """Conditions in the fixed primitive order (stable program rendering)."""
    conds = [Condition(n) for n in names] + [Condition(n, True) for n in negated]
    return tuple(sorted(conds, key=lambda c: (_CONDITION_ORDER[c.name], c.negated)))
