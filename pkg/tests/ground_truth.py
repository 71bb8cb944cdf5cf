"""Hand-built complete dynamics table for the single-pot kitchen.

Derived by enumerating the simulator's interaction cases by hand, not from
any mining run. Markers are start-of-step relative positions; an interact
happens facing the station, so player-caused rules sit at ``@face``. The
third onion starts the cook in the same step, so a filled pot is first
observed at ``(3, 1)`` and the spontaneous ticks run k = 1..19.
"""
from kitchensynth.extractor import Rule

ARROW = "->"


def _r(action, *changes):
    return Rule(tuple(changes), action)


PLAYER_RULES = (
    # dispensers
    _r("interact", "player.empty->player.onion", "onionDisp@face"),
    _r("interact", "player.empty->player.dish", "dishDisp@face"),
    # pot fills (third fill starts cooking within the step)
    _r("interact", "player.onion->player.empty", "pot.0.0@face->pot.1.0@face"),
    _r("interact", "player.onion->player.empty", "pot.1.0@face->pot.2.0@face"),
    _r("interact", "player.onion->player.empty", "pot.2.0@face->pot.3.1@face"),
    # serve from a ready pot, deliver at the serving station
    _r("interact", "player.dish->player.soup", "pot.3.20@face->pot.0.0@face"),
    _r("interact", "player.soup->player.empty", "serving@face"),
    # counters: place
    _r("interact", "player.onion->player.empty", "counter.empty@face->counter.onion@face"),
    _r("interact", "player.dish->player.empty", "counter.empty@face->counter.dish@face"),
    _r("interact", "player.soup->player.empty", "counter.empty@face->counter.soup@face"),
    # counters: pick
    _r("interact", "player.empty->player.onion", "counter.onion@face->counter.empty@face"),
    _r("interact", "player.empty->player.dish", "counter.dish@face->counter.empty@face"),
    _r("interact", "player.empty->player.soup", "counter.soup@face->counter.empty@face"),
)

# Spontaneous cook ticks, away-marker family (what a wandering chef sees).
SPONTANEOUS_AWAY = tuple(
    Rule((f"pot.3.{k}@away{ARROW}pot.3.{k + 1}@away",), None) for k in range(1, 20)
)


def is_pot_tick(rule):
    """Membership test for the pot-tick family, any position marker."""
    if rule.action is not None or len(rule.changes) != 1:
        return False
    import re
    m = re.fullmatch(r"pot\.3\.(\d+)@(away|face|on)->pot\.3\.(\d+)@\2",
                     rule.changes[0])
    return bool(m) and int(m.group(3)) == int(m.group(1)) + 1 and 1 <= int(m.group(1)) <= 19


def tick_value(rule):
    import re
    return int(re.search(r"pot\.3\.(\d+)@", rule.changes[0]).group(1))
