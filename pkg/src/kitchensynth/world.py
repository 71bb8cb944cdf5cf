"""Deterministic two-chef kitchen simulator.

State evolves in four phases per step: movement resolution, interaction
resolution (chef 0 first, a deterministic tie-break), spontaneous pot
cooking, then the clock. The shared reward is +20 per delivered soup and
nothing else.

``step`` is a pure function: it never mutates its input state and returns,
besides the successor state and reward, the list of element change events
that occurred. The events double as the cheap source for transition-record
mining (see :mod:`kitchensynth.extractor`); ``observe_elements`` provides
the equivalent, slower, observation-diff route.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .layouts import (COUNTER, DIRECTIONS, DISH_DISPENSER, GridLayout,
                      ONION_DISPENSER, POT, SERVING)

ACTIONS = ("up", "down", "left", "right", "noop", "interact")
MOVE_ACTIONS = ("up", "down", "left", "right")
HOLDS = ("empty", "onion", "dish", "soup")

COOK_TICKS = 20
DELIVERY_REWARD = 20
DEFAULT_HORIZON = 400

IDLE_POT = (0, 0)


class EpisodeOver(RuntimeError):
    """Raised when stepping a state whose clock already reached the horizon."""


@dataclass(frozen=True)
class ChefState:
    pos: tuple[int, int]
    orientation: str
    held: str = "empty"

    def facing(self):
        dx, dy = DIRECTIONS[self.orientation]
        return (self.pos[0] + dx, self.pos[1] + dy)


@dataclass(frozen=True)
class WorldState:
    layout: GridLayout
    chefs: tuple[ChefState, ChefState]
    pots: dict            # (x, y) -> (onions, cook_time)
    counters: dict        # (x, y) -> "empty" | "onion" | "dish" | "soup"
    t: int = 0
    horizon: int = DEFAULT_HORIZON

    def pot_ready(self, pos):
        onions, cook = self.pots[pos]
        return onions == 3 and cook == COOK_TICKS

    def to_dict(self):
        return {
            "layout": self.layout.name,
            "chefs": [
                {"x": c.pos[0], "y": c.pos[1], "orientation": c.orientation, "held": c.held}
                for c in self.chefs
            ],
            "pots": [
                {"x": p[0], "y": p[1], "onions": self.pots[p][0], "cook_time": self.pots[p][1]}
                for p in self.layout.pots
            ],
            "counters": [
                {"x": p[0], "y": p[1], "item": self.counters[p]}
                for p in self.layout.counters if self.counters[p] != "empty"
            ],
            "t": self.t,
            "horizon": self.horizon,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def reset(layout: GridLayout, horizon: int = DEFAULT_HORIZON) -> WorldState:
    """Fresh episode state: chefs on their spawn tiles, pots and counters empty.

    Deterministic given the layout; which chef an external agent controls is
    the caller's business (see the harness' role assignment).
    """
    chefs = tuple(
        ChefState(pos=pos, orientation=orient)
        for pos, orient in zip(layout.spawns, layout.spawn_orientations)
    )
    return WorldState(
        layout=layout,
        chefs=chefs,
        pots={p: IDLE_POT for p in layout.pots},
        counters={p: "empty" for p in layout.counters},
        t=0,
        horizon=horizon,
    )


def _resolve_moves(layout, chefs, actions):
    """Movement phase: turn, then advance unless walls or the teammate block.

    Both chefs moving onto one tile, or swapping tiles, cancels both moves;
    walking into a vacating teammate's tile is allowed.
    """
    oriented = []
    desired = []
    for chef, action in zip(chefs, actions):
        if action in MOVE_ACTIONS:
            chef = replace(chef, orientation=action)
            target = chef.facing()
            desired.append(target if layout.is_floor(target) else chef.pos)
        else:
            desired.append(chef.pos)
        oriented.append(chef)

    d0, d1 = desired
    p0, p1 = oriented[0].pos, oriented[1].pos
    if d0 == d1 or (d0 == p1 and d1 == p0):
        d0, d1 = p0, p1
    return (replace(oriented[0], pos=d0), replace(oriented[1], pos=d1))


def _interact(chef, pots, counters, layout):
    """Resolve one chef's interact against the tile it faces.

    Returns (new_held, reward_delta, event) where event is a pot/counter
    change tuple or None. No-op interactions return the unchanged hold.
    """
    target = chef.facing()
    kind = layout.tile(target)
    held = chef.held
    if kind == ONION_DISPENSER and held == "empty":
        return "onion", 0, None
    if kind == DISH_DISPENSER and held == "empty":
        return "dish", 0, None
    if kind == POT:
        pot = pots[target]
        if held == "onion" and pot[0] < 3:
            pots[target] = (pot[0] + 1, pot[1])
            return "empty", 0, ("pot", target, pot, pots[target])
        if held == "dish" and pot == (3, COOK_TICKS):
            pots[target] = IDLE_POT
            return "soup", 0, ("pot", target, pot, IDLE_POT)
        return held, 0, None
    if kind == SERVING and held == "soup":
        return "empty", DELIVERY_REWARD, None
    if kind == COUNTER:
        content = counters[target]
        if content == "empty" and held != "empty":
            counters[target] = held
            return "empty", 0, ("counter", target, "empty", held)
        if content != "empty" and held == "empty":
            counters[target] = "empty"
            return content, 0, ("counter", target, content, "empty")
    return held, 0, None


def step(state: WorldState, a0: str, a1: str):
    """Advance one timestep. Returns ``(next_state, reward, events)``.

    Events list the element changes of this step:
    ``("hold", chef_index, before, after)``,
    ``("pot", (x, y), (onions, cook), (onions', cook'))``,
    ``("counter", (x, y), before_item, after_item)``.
    """
    if state.t >= state.horizon:
        raise EpisodeOver(f"episode already ended at t={state.t}")
    for a in (a0, a1):
        if a not in ACTIONS:
            raise ValueError(f"unknown action {a!r}")

    layout = state.layout
    chefs = _resolve_moves(layout, state.chefs, (a0, a1))

    pots = dict(state.pots)
    counters = dict(state.counters)
    events = []
    reward = 0
    new_chefs = list(chefs)
    # Chef 0 interacts first; chef 1 sees the already-updated station state.
    for i, action in enumerate((a0, a1)):
        if action != "interact":
            continue
        chef = new_chefs[i]
        held, dr, event = _interact(chef, pots, counters, layout)
        reward += dr
        if event is not None:
            events.append(event)
        if held != chef.held:
            events.append(("hold", i, chef.held, held))
            new_chefs[i] = replace(chef, held=held)

    # Spontaneous cooking: every full, not-yet-ready pot advances one tick.
    for pos, (onions, cook) in pots.items():
        if onions == 3 and cook < COOK_TICKS:
            pots[pos] = (onions, cook + 1)
            _merge_pot_event(events, pos, (onions, cook), pots[pos])

    next_state = WorldState(
        layout=layout,
        chefs=tuple(new_chefs),
        pots=pots,
        counters=counters,
        t=state.t + 1,
        horizon=state.horizon,
    )
    return next_state, reward, events


def _merge_pot_event(events, pos, before, after):
    # A pot that was filled and started cooking in the same step is one
    # element change (old observation -> new observation), not two.
    for idx, ev in enumerate(events):
        if ev[0] == "pot" and ev[1] == pos:
            events[idx] = ("pot", pos, ev[2], after)
            return
    events.append(("pot", pos, before, after))


# --- symbolic observations -------------------------------------------------

@dataclass(frozen=True)
class ElementView:
    """One element's symbolic record from a given chef's point of view."""
    kind: str                      # "player" | "point"
    point_type: str | None         # onionDisp/dishDisp/serving/counter/pot
    state: object                  # hold name, counter item, pot tuple, or "unit"
    pos: str | None                # "on" | "face" | "away" (points only)
    key: object                    # "player" or the point's grid coordinate

    def info(self) -> str:
        return render_info(self)


POINT_TYPES = {
    ONION_DISPENSER: "onionDisp",
    DISH_DISPENSER: "dishDisp",
    SERVING: "serving",
    COUNTER: "counter",
    POT: "pot",
}
STATELESS_TYPES = ("onionDisp", "dishDisp", "serving")


def position_marker(chef: ChefState, point) -> str:
    if chef.pos == point:
        return "on"
    if chef.facing() == point:
        return "face"
    return "away"


def render_info(view: ElementView) -> str:
    return info_string(view.kind, view.point_type, view.state, view.pos)


def info_string(kind, point_type, state, pos) -> str:
    if kind == "player":
        return f"player.{state}"
    if point_type == "pot":
        return f"pot.{state[0]}.{state[1]}@{pos}"
    if point_type == "counter":
        return f"counter.{state}@{pos}"
    return f"{point_type}@{pos}"


def observe_elements(state: WorldState, chef_index: int) -> list[ElementView]:
    """Symbolic view of the world from one chef's perspective.

    One record for the observing chef itself, then one per interaction
    point in row-major order (a stable identity across successive frames).
    """
    chef = state.chefs[chef_index]
    views = [ElementView("player", None, chef.held, None, "player")]
    layout = state.layout
    for group, ptype in (
        (layout.onion_dispensers, "onionDisp"),
        (layout.dish_dispensers, "dishDisp"),
        (layout.servings, "serving"),
        (layout.counters, "counter"),
        (layout.pots, "pot"),
    ):
        for p in group:
            if ptype == "counter":
                s = state.counters[p]
            elif ptype == "pot":
                s = state.pots[p]
            else:
                s = "unit"
            views.append(ElementView("point", ptype, s, position_marker(chef, p), p))
    return views


# --- interaction-point classes ----------------------------------------------

CLASSES = ("serving", "onionDisp", "dishDisp", "onionCounter", "dishCounter",
           "soupCounter", "emptyCounter", "idlePot", "readyPot")

_COUNTER_CLASS = {"onion": "onionCounter", "dish": "dishCounter",
                  "soup": "soupCounter", "empty": "emptyCounter"}


def class_instances(state: WorldState) -> dict:
    """Current members of each interaction-point class, in row-major order.

    A pot accepting onions (fewer than three) is idle; a pot at full cook is
    ready; a cooking pot belongs to neither class.
    """
    layout = state.layout
    inst = {
        "serving": layout.servings,
        "onionDisp": layout.onion_dispensers,
        "dishDisp": layout.dish_dispensers,
        "onionCounter": [], "dishCounter": [], "soupCounter": [], "emptyCounter": [],
        "idlePot": [], "readyPot": [],
    }
    for p in layout.counters:
        inst[_COUNTER_CLASS[state.counters[p]]].append(p)
    for p in layout.pots:
        onions, cook = state.pots[p]
        if onions < 3:
            inst["idlePot"].append(p)
        elif cook == COOK_TICKS:
            inst["readyPot"].append(p)
    return inst
