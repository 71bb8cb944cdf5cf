import pytest

from kitchensynth.layouts import (LayoutError, bundled_layout,
                                  bundled_layout_names, load_layout,
                                  render_layout)

ORIGINALS = ["asymmetric_advantages", "coordination_ring", "counter_circuit",
             "cramped_room", "forced_coordination"]


def test_bundled_names_cover_originals_and_variants():
    names = bundled_layout_names()
    assert len(names) == 10
    for name in ORIGINALS:
        assert name in names
        assert f"{name}_alt" in names


@pytest.mark.parametrize("name", ORIGINALS + [f"{n}_alt" for n in ORIGINALS])
def test_bundled_layouts_load_and_roundtrip(name):
    layout = bundled_layout(name)
    again = load_layout(render_layout(layout), name=name)
    assert again.tiles == layout.tiles
    assert again.spawns == layout.spawns


def test_cramped_room_structure(cramped_room):
    assert (cramped_room.width, cramped_room.height) == (5, 4)
    assert len(cramped_room.pots) == 1
    assert len(cramped_room.servings) == 1
    assert len(cramped_room.onion_dispensers) == 2


def test_asymmetric_advantages_has_two_pots():
    layout = bundled_layout("asymmetric_advantages")
    assert len(layout.pots) == 2


def test_forced_coordination_splits_floor(forced_coordination):
    comps = set(forced_coordination.components.values())
    assert len(comps) == 2
    c1, c2 = (forced_coordination.components[s] for s in forced_coordination.spawns)
    assert c1 != c2


def test_missing_pot_rejected():
    with pytest.raises(LayoutError, match="no pot"):
        load_layout("XXSXX\nO1 2X\nXXDXX\n")


def test_three_spawn_markers_rejected():
    with pytest.raises(LayoutError, match="duplicate spawn"):
        load_layout("XXPXX\nO112X\nXDXSX\n")


def test_missing_spawn_rejected():
    with pytest.raises(LayoutError, match="spawn count"):
        load_layout("XXPXX\nO1  X\nXDXSX\n")


def test_non_rectangular_rejected():
    with pytest.raises(LayoutError, match="non-rectangular"):
        load_layout("XXPXX\nO1 2\nXDXSX\n")


def test_unknown_character_rejected():
    with pytest.raises(LayoutError, match="unknown character"):
        load_layout("XXPXX\nO1?2X\nXDXSX\n")


def test_unreachable_floor_pocket_rejected():
    grid = "XXPXXXX\nO1 2X X\nXDXSXXX\n"
    with pytest.raises(LayoutError, match="unreachable"):
        load_layout(grid)


def test_facing_tiles_row_major(micro_layout):
    pot = micro_layout.pots[0]
    spots = micro_layout.facing_tiles[pot]
    assert spots == (((2, 1), "up"),)


def test_distance_tables_symmetric(cramped_room):
    floors = sorted(cramped_room.floor)
    for a in floors:
        for b in floors:
            assert cramped_room.distance[a][b] == cramped_room.distance[b][a]
    assert cramped_room.distance[(1, 1)][(3, 2)] == 3
