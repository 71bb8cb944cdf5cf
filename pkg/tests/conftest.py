import sys
from pathlib import Path
from random import Random

import pytest

from kitchensynth.dsl import parse_program
from kitchensynth.layouts import bundled_layout, load_layout

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def cramped_room():
    return bundled_layout("cramped_room")


@pytest.fixture(scope="session")
def counter_circuit():
    return bundled_layout("counter_circuit")


@pytest.fixture(scope="session")
def forced_coordination():
    return bundled_layout("forced_coordination")


@pytest.fixture(scope="session")
def listing_program():
    return parse_program((FIXTURES / "listing1.ktp").read_text())


@pytest.fixture()
def rng():
    return Random(0)


# A single-room micro kitchen used all over the unit tests: one pot, one
# onion dispenser, one dish dispenser, one serving tile, free counters.
MICRO = "XXPXX\nO1 2X\nXDXSX\n"


@pytest.fixture(scope="session")
def micro_layout():
    return load_layout(MICRO, name="micro")


def random_micro_layout(rng: Random, width=None, height=None):
    """Random small kitchen for property tests.

    Stations on the border, a few counter obstacles inside; always contains
    at least one pot, onion dispenser, dish dispenser, and serving tile, and
    two spawns on distinct floor tiles. Regenerates until the floor is
    connected, so the result always validates.
    """
    from kitchensynth.layouts import LayoutError

    width = width or rng.randint(5, 9)
    height = height or rng.randint(4, 7)
    while True:
        interior = [(x, y) for x in range(1, width - 1) for y in range(1, height - 1)]
        border = [(x, y) for x in range(width) for y in range(height)
                  if x in (0, width - 1) or y in (0, height - 1)]
        usable = [p for p in border if any(abs(p[0] - q[0]) + abs(p[1] - q[1]) == 1
                                           for q in interior)]
        rng.shuffle(usable)
        stations = {}
        for char, pos in zip("PODS", usable):
            stations[pos] = char
        extra = usable[4:]
        for pos in extra[: rng.randint(0, len(extra))]:
            stations[pos] = rng.choice("PODSX")
        obstacles = set(rng.sample(interior, k=min(len(interior) - 2,
                                                   rng.randint(0, 3))))
        open_floor = [p for p in interior if p not in obstacles]
        if len(open_floor) < 2:
            continue
        spawn_a, spawn_b = rng.sample(open_floor, 2)
        rows = []
        for y in range(height):
            row = ""
            for x in range(width):
                if (x, y) == spawn_a:
                    row += "1"
                elif (x, y) == spawn_b:
                    row += "2"
                elif (x, y) in obstacles:
                    row += "X"
                elif (x, y) in interior:
                    row += " "
                else:
                    row += stations.get((x, y), "X")
            rows.append(row)
        try:
            return load_layout("\n".join(rows) + "\n", name="random_micro")
        except LayoutError:
            continue
