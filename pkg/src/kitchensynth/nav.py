"""Low-level control: class reachability and one-env-action-at-a-time pathing.

Reachability and shortest paths are resolved against the layout's
precomputed floor components and distance tables, so every query here is a
handful of dict lookups. The teammate is transparent for planning but
blocking for execution: a move into the teammate's tile this tick degrades
to a random non-interact action.
"""
from __future__ import annotations

from .layouts import DIRECTION_ORDER, DIRECTIONS, GridLayout
from .world import CLASSES, WorldState, class_instances

# Go-to-and-interact primitive for every interaction-point class.
ACTION_CLASS = {
    "GoIntServing": "serving",
    "GoIntOnionDisp": "onionDisp",
    "GoIntDishDisp": "dishDisp",
    "GoIntOnionCounter": "onionCounter",
    "GoIntDishCounter": "dishCounter",
    "GoIntSoupCounter": "soupCounter",
    "GoIntEmptyCounter": "emptyCounter",
    "GoIntIdlePot": "idlePot",
    "GoIntReadyPot": "readyPot",
}
CONDITION_CLASS = {
    "ExServing": "serving",
    "ExOnionDisp": "onionDisp",
    "ExDishDisp": "dishDisp",
    "ExOnionCounter": "onionCounter",
    "ExDishCounter": "dishCounter",
    "ExSoupCounter": "soupCounter",
    "ExEmptyCounter": "emptyCounter",
    "ExIdlePot": "idlePot",
    "ExReadyPot": "readyPot",
}
HOLD_CONDITIONS = {"HoldEmpty": "empty", "HoldOnion": "onion",
                   "HoldDish": "dish", "HoldSoup": "soup"}


class NavigationError(RuntimeError):
    """The requested target class has no reachable instance."""


def _reachable_points(layout: GridLayout, chef_pos, points):
    comp = layout.components[chef_pos]
    return [p for p in points if comp in layout.point_components[p]]


def reachable(state: WorldState, chef_index: int, target_class: str,
              instances: dict | None = None) -> bool:
    """True iff some instance of the class has a facing tile the chef can reach."""
    if target_class not in CLASSES:
        raise ValueError(f"unknown interaction class {target_class!r}")
    if instances is None:
        instances = class_instances(state)
    chef = state.chefs[chef_index]
    return bool(_reachable_points(state.layout, chef.pos, instances[target_class]))


def percept(state: WorldState, chef_index: int, instances: dict | None = None) -> dict:
    """Truth value of all 13 condition primitives for one chef.

    Hold* mirror the chef's hold state; Ex* require an instance of the class
    to exist and be reachable by this chef.
    """
    if instances is None:
        instances = class_instances(state)
    chef = state.chefs[chef_index]
    comp = state.layout.components[chef.pos]
    point_comps = state.layout.point_components
    vec = {name: chef.held == hold for name, hold in HOLD_CONDITIONS.items()}
    for name, cls in CONDITION_CLASS.items():
        vec[name] = any(comp in point_comps[p] for p in instances[cls])
    return vec


def next_env_action(state: WorldState, chef_index: int, primitive: str, rng,
                    instances: dict | None = None) -> str:
    """One environment action moving toward / acting on the primitive's target.

    Facing an instance already means ``interact``. Otherwise take the first
    move of a shortest path to the nearest facing tile; nearest breaks ties
    by row-major point order then row-major facing-tile order, and the move
    itself by up < down < left < right. A move blocked by the teammate this
    tick becomes a uniformly random non-interact action.
    """
    cls = ACTION_CLASS.get(primitive)
    if cls is None:
        raise ValueError(f"unknown action primitive {primitive!r}")
    if instances is None:
        instances = class_instances(state)
    layout = state.layout
    chef = state.chefs[chef_index]
    points = instances[cls]
    faced = chef.facing()
    if any(faced == p for p in points):
        return "interact"

    dist_to_chef = layout.distance.get(chef.pos, {})
    best = None  # (distance, enumeration index, stand tile, face direction)
    idx = 0
    for p in points:
        for tile, face_dir in layout.facing_tiles[p]:
            d = dist_to_chef.get(tile)
            if d is not None and (best is None or d < best[0]):
                best = (d, idx, tile, face_dir)
            idx += 1
    if best is None:
        raise NavigationError(f"no reachable {cls} instance for chef {chef_index}")

    d, _, tile, face_dir = best
    if d == 0:
        move = face_dir  # on the stand tile already: turn toward the point
    else:
        target_dist = layout.distance[tile]
        move = None
        for direction in DIRECTION_ORDER:
            dx, dy = DIRECTIONS[direction]
            n = (chef.pos[0] + dx, chef.pos[1] + dy)
            if target_dist.get(n) == d - 1:
                move = direction
                break
        assert move is not None, "distance field inconsistent"
        dx, dy = DIRECTIONS[move]
        if (chef.pos[0] + dx, chef.pos[1] + dy) == state.chefs[1 - chef_index].pos:
            # local unblocking: the teammate sits on the chosen tile
            return ("up", "down", "left", "right", "noop")[rng.randrange(5)]
    return move
