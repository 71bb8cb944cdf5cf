"""Kitchen grid layouts: ASCII parsing, validation, and static geometry caches.

A layout file is a rectangular character grid, one char per tile:

    ``X`` counter, ``O`` onion dispenser, ``D`` dish dispenser, ``P`` pot,
    ``S`` serving station, space = floor, ``1``/``2`` = chef spawn tiles
    (spawns are floor tiles).

Bundled layouts live in ``layouts/*.layout`` next to this module.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

FLOOR = " "
COUNTER = "X"
ONION_DISPENSER = "O"
DISH_DISPENSER = "D"
POT = "P"
SERVING = "S"

STATION_CHARS = (COUNTER, ONION_DISPENSER, DISH_DISPENSER, POT, SERVING)
LEGAL_CHARS = set(STATION_CHARS) | {FLOOR, "1", "2"}

# (dx, dy); y grows downward.  The tuple order is also the tie-break order
# used whenever several movement directions are equally good.
DIRECTIONS = {"up": (0, -1), "down": (0, 1), "left": (-1, 0), "right": (1, 0)}
DIRECTION_ORDER = ("up", "down", "left", "right")

DEFAULT_SPAWN_ORIENTATION = "up"


class LayoutError(ValueError):
    """A layout file failed structural validation."""


@dataclass(eq=False)
class GridLayout:
    """A validated kitchen grid plus precomputed geometry tables.

    Instances are treated as immutable after construction; the derived
    tables (``floor``, ``components``, ``distance``, ...) are built once in
    ``__post_init__`` and shared by the simulator and the navigation layer.
    """

    name: str
    width: int
    height: int
    tiles: tuple[str, ...]          # one string per row, spawns replaced by floor
    spawns: tuple[tuple[int, int], tuple[int, int]]
    spawn_orientations: tuple[str, str] = (DEFAULT_SPAWN_ORIENTATION,) * 2

    # derived, filled in __post_init__
    floor: frozenset[tuple[int, int]] = field(init=False, repr=False)
    pots: tuple[tuple[int, int], ...] = field(init=False, repr=False)
    counters: tuple[tuple[int, int], ...] = field(init=False, repr=False)
    onion_dispensers: tuple[tuple[int, int], ...] = field(init=False, repr=False)
    dish_dispensers: tuple[tuple[int, int], ...] = field(init=False, repr=False)
    servings: tuple[tuple[int, int], ...] = field(init=False, repr=False)
    components: dict = field(init=False, repr=False)
    point_components: dict = field(init=False, repr=False)
    facing_tiles: dict = field(init=False, repr=False)
    distance: dict = field(init=False, repr=False)

    def __post_init__(self):
        by_char = {c: [] for c in STATION_CHARS}
        floor = []
        for y, row in enumerate(self.tiles):
            for x, ch in enumerate(row):
                if ch == FLOOR:
                    floor.append((x, y))
                else:
                    by_char[ch].append((x, y))
        self.floor = frozenset(floor)
        self.pots = tuple(sorted(by_char[POT], key=lambda p: (p[1], p[0])))
        self.counters = tuple(sorted(by_char[COUNTER], key=lambda p: (p[1], p[0])))
        self.onion_dispensers = tuple(sorted(by_char[ONION_DISPENSER], key=lambda p: (p[1], p[0])))
        self.dish_dispensers = tuple(sorted(by_char[DISH_DISPENSER], key=lambda p: (p[1], p[0])))
        self.servings = tuple(sorted(by_char[SERVING], key=lambda p: (p[1], p[0])))
        self._build_geometry()

    def tile(self, pos):
        x, y = pos
        if 0 <= x < self.width and 0 <= y < self.height:
            return self.tiles[y][x]
        return None

    def is_floor(self, pos):
        return pos in self.floor

    def _build_geometry(self):
        # Connected components of the floor graph (4-adjacency).
        comp = {}
        next_id = 0
        for start in sorted(self.floor, key=lambda p: (p[1], p[0])):
            if start in comp:
                continue
            queue = deque([start])
            comp[start] = next_id
            while queue:
                x, y = queue.popleft()
                for dx, dy in DIRECTIONS.values():
                    n = (x + dx, y + dy)
                    if n in self.floor and n not in comp:
                        comp[n] = next_id
                        queue.append(n)
            next_id += 1
        self.components = comp

        # For every station tile: the floor tiles a chef can stand on to face
        # it, with the orientation required to face it.  Row-major tile order
        # keeps downstream tie-breaking deterministic.
        facing = {}
        point_comps = {}
        stations = (self.pots + self.counters + self.onion_dispensers
                    + self.dish_dispensers + self.servings)
        for p in stations:
            spots = []
            for direction, (dx, dy) in DIRECTIONS.items():
                t = (p[0] + dx, p[1] + dy)
                if t in self.floor:
                    # chef at t faces the opposite way to look at p
                    face_dir = {"up": "down", "down": "up", "left": "right", "right": "left"}[direction]
                    spots.append((t, face_dir))
            spots.sort(key=lambda td: (td[0][1], td[0][0]))
            facing[p] = tuple(spots)
            point_comps[p] = frozenset(comp[t] for t, _ in spots)
        self.facing_tiles = facing
        self.point_components = point_comps

        # All-pairs shortest-path distances over floor tiles, one BFS per
        # tile.  Grids are tiny (tens of floor tiles) so this is cheap and
        # makes every runtime navigation query a dict lookup.
        dist = {}
        for start in self.floor:
            d = {start: 0}
            queue = deque([start])
            while queue:
                cur = queue.popleft()
                base = d[cur]
                for dx, dy in DIRECTIONS.values():
                    n = (cur[0] + dx, cur[1] + dy)
                    if n in self.floor and n not in d:
                        d[n] = base + 1
                        queue.append(n)
            dist[start] = d
        self.distance = dist


def load_layout(text: str, name: str = "unnamed") -> GridLayout:
    """Parse and validate an ASCII layout, returning a :class:`GridLayout`."""
    lines = text.rstrip("\n").split("\n")
    if not lines or not lines[0]:
        raise LayoutError(f"{name}: empty layout")
    width = len(lines[0])
    if any(len(row) != width for row in lines):
        raise LayoutError(f"{name}: non-rectangular grid")
    spawns = {}
    for y, row in enumerate(lines):
        for x, ch in enumerate(row):
            if ch not in LEGAL_CHARS:
                raise LayoutError(f"{name}: unknown character {ch!r} at {(x, y)}")
            if ch in ("1", "2"):
                if ch in spawns:
                    raise LayoutError(f"{name}: duplicate spawn index {ch}")
                spawns[ch] = (x, y)
    if set(spawns) != {"1", "2"}:
        raise LayoutError(f"{name}: spawn count must be exactly two (markers 1 and 2)")

    flat = "".join(lines)
    for ch, what in ((POT, "pot"), (ONION_DISPENSER, "onion dispenser"), (SERVING, "serving tile")):
        if ch not in flat:
            raise LayoutError(f"{name}: no {what}")

    tiles = tuple(row.replace("1", FLOOR).replace("2", FLOOR) for row in lines)
    layout = GridLayout(
        name=name,
        width=width,
        height=len(lines),
        tiles=tiles,
        spawns=(spawns["1"], spawns["2"]),
    )

    # Every floor tile must be reachable from at least one spawn; pockets of
    # floor no chef can ever enter are almost always transcription typos.
    spawn_comps = {layout.components[s] for s in layout.spawns}
    stray = [p for p, c in layout.components.items() if c not in spawn_comps]
    if stray:
        raise LayoutError(f"{name}: floor tiles unreachable from any spawn: {sorted(stray)}")
    return layout


def render_layout(layout: GridLayout) -> str:
    """Inverse of :func:`load_layout` (modulo the original spawn markers)."""
    rows = [list(row) for row in layout.tiles]
    for idx, (x, y) in enumerate(layout.spawns, start=1):
        rows[y][x] = str(idx)
    return "\n".join("".join(r) for r in rows) + "\n"


def _layout_dir():
    return resources.files(__package__) / "layouts"


def bundled_layout_names() -> list[str]:
    return sorted(p.name[: -len(".layout")] for p in _layout_dir().iterdir()
                  if p.name.endswith(".layout"))


def bundled_layout(name: str) -> GridLayout:
    path = _layout_dir() / f"{name}.layout"
    try:
        text = path.read_text()
    except (FileNotFoundError, OSError):
        raise LayoutError(f"no bundled layout named {name!r}; "
                          f"available: {', '.join(bundled_layout_names())}") from None
    return load_layout(text, name=name)


def resolve_layout(spec: str) -> GridLayout:
    """Accept either a bundled layout name or a path to a ``.layout`` file."""
    p = Path(spec)
    if p.suffix == ".layout" or p.exists():
        return load_layout(p.read_text(), name=p.stem)
    return bundled_layout(spec)
