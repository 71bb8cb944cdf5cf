"""Mining transition rules from self-play trajectories.

Every step yields, per chef, a transition signature: the set of element
changes visible from that chef's perspective (its own hold-state change,
stateful interaction-point changes, plus faced stateless points recorded
whether or not anything happened to them). Signatures are grouped over a
buffer; a group whose empirical action distribution is concentrated (low
Shannon entropy) is attributed to the acting chef and becomes a
player-caused rule carrying its modal action. Subset pruning then removes
signatures that merely extend a shorter rule with co-occurring noise.
Whatever remains unexplained from both chefs' perspectives is aggregated
into the spontaneous rule set.

Change strings use the canonical element grammar, e.g.
``player.empty->player.onion``, ``pot.2.0@face->pot.3.1@face``,
``onionDisp@face`` (stateless, recorded as both precondition and result).
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass

from sklearn.base import BaseEstimator

from .world import (POINT_TYPES, STATELESS_TYPES, WorldState, info_string,
                    observe_elements, position_marker)

ARROW = "->"


def change_string(before_info: str, after_info: str) -> str:
    if before_info == after_info:
        return before_info
    return f"{before_info}{ARROW}{after_info}"


def change_before(change: str) -> str:
    return change.split(ARROW, 1)[0]


def change_after(change: str) -> str:
    return change.split(ARROW, 1)[-1]


@dataclass(frozen=True)
class Rule:
    """A mined transition: a canonical change-set and, for player-caused
    rules, the action that produces it (``None`` for spontaneous rules)."""
    changes: tuple[str, ...]
    action: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "changes", tuple(sorted(self.changes)))

    def change_set(self):
        return frozenset(self.changes)

    def __str__(self):
        head = self.action if self.action else "(spontaneous)"
        return f"{head} => {', '.join(self.changes)}"


@dataclass(frozen=True)
class RuleSets:
    player: tuple[Rule, ...]
    spontaneous: tuple[Rule, ...]

    def __bool__(self):
        return bool(self.player or self.spontaneous)


# --- per-step records --------------------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    """One simulator step, canonicalized for aggregation.

    ``holds`` carries each chef's own hold-state change string (or None);
    ``points`` the stateful interaction-point changes rendered from both
    chefs' perspectives; ``context`` the stateless points each chef faced or
    stood on at the start of the step. Identical steps hash equal, so a
    buffer can store counts instead of raw trajectories.
    """
    holds: tuple[str | None, str | None]
    points: tuple[tuple[str, str], ...]
    context: tuple[tuple[str, ...], tuple[str, ...]]
    actions: tuple[str, str]

    def signature(self, chef_index: int) -> tuple[str, ...]:
        parts = set(self.context[chef_index])
        if self.holds[chef_index]:
            parts.add(self.holds[chef_index])
        parts.update(pair[chef_index] for pair in self.points)
        return tuple(sorted(parts))

    def swapped(self) -> "StepRecord":
        return StepRecord(
            holds=self.holds[::-1],
            points=tuple(sorted((f1, f0) for f0, f1 in self.points)),
            context=self.context[::-1],
            actions=self.actions[::-1],
        )


def _point_info(kind, pos_marker, state):
    if kind == "pot":
        return f"pot.{state[0]}.{state[1]}@{pos_marker}"
    return f"counter.{state}@{pos_marker}"


def make_step_record(before: WorldState, after: WorldState, events, a0, a1) -> StepRecord | None:
    """Build the canonical record for one step, or None if nothing is worth
    recording (no element changed and neither chef faced a stateless point)."""
    holds = [None, None]
    pairs = set()
    for ev in events:
        if ev[0] == "hold":
            _, idx, b, a = ev
            holds[idx] = f"player.{b}{ARROW}player.{a}"
        else:
            kind, pos, b, a = ev
            rendered = []
            # Both sides carry the marker at the step's start: the marker is
            # decision-time context. Rendering the after side at t+1 would
            # leak the chef's own movement into the signature and make
            # turn-toward-a-ticking-pot look action-caused.
            for chef_b in before.chefs:
                marker = position_marker(chef_b, pos)
                rendered.append(change_string(
                    _point_info(kind, marker, b),
                    _point_info(kind, marker, a),
                ))
            pairs.add((rendered[0], rendered[1]))

    context = []
    for chef in before.chefs:
        ctx = []
        for tile, marker in ((chef.facing(), "face"), (chef.pos, "on")):
            kind = before.layout.tile(tile)
            if kind is not None:
                ptype = POINT_TYPES.get(kind)
                if ptype in STATELESS_TYPES:
                    ctx.append(f"{ptype}@{marker}")
        context.append(tuple(sorted(ctx)))

    if not any(holds) and not pairs and not any(context):
        return None
    return StepRecord(
        holds=tuple(holds),
        points=tuple(sorted(pairs)),
        context=tuple(context),
        actions=(a0, a1),
    )


class TransitionBuffer:
    """Grow-only store of step records, aggregated by identical content."""

    def __init__(self):
        self._counts = Counter()
        self.steps_seen = 0

    def __len__(self):
        return sum(self._counts.values())

    def add_step(self, before, after, events, a0, a1):
        self.steps_seen += 1
        record = make_step_record(before, after, events, a0, a1)
        if record is not None:
            self._counts[record] += 1

    def add_record(self, record: StepRecord, count: int = 1):
        self._counts[record] += count

    def step_items(self):
        return self._counts.items()

    def records(self):
        """Per-chef-perspective (signature, action, count) observations."""
        for record, count in self._counts.items():
            for i in (0, 1):
                sig = record.signature(i)
                if sig:
                    yield sig, record.actions[i], count

    def merge(self, other: "TransitionBuffer"):
        self._counts.update(other._counts)
        self.steps_seen += other.steps_seen

    def save(self, path):
        with open(path, "w") as fh:
            for sig, action, count in sorted(self.records()):
                fh.write(json.dumps({"signature": list(sig), "action": action,
                                     "count": count}) + "\n")


# --- the observation-diff route ----------------------------------------------

def diff_step(views_t, views_t1, action: str) -> tuple[tuple[str, ...], str]:
    """Transition signature between two successive observations of one chef.

    Stateful elements contribute a change record when their state differs;
    stateless points are recorded whenever the chef faces or stands on them
    at the start of the step. Both sides of a change use the start-of-step
    position marker. Element identities must line up frame to frame.
    """
    if [v.key for v in views_t] != [v.key for v in views_t1]:
        raise ValueError("element identity mismatch between frames")
    changes = set()
    for v0, v1 in zip(views_t, views_t1):
        if v0.point_type in STATELESS_TYPES:
            if v0.pos in ("face", "on"):
                changes.add(v0.info())
        elif v0.state != v1.state:
            after = info_string(v1.kind, v1.point_type, v1.state, v0.pos)
            changes.add(change_string(v0.info(), after))
    return tuple(sorted(changes)), action


def record_episode_views(states, actions, chef_index):
    """(signature, action) stream for one chef via the observation diff."""
    out = []
    for s, s1, (a0, a1) in zip(states, states[1:], actions):
        views = observe_elements(s, chef_index)
        views1 = observe_elements(s1, chef_index)
        sig, act = diff_step(views, views1, (a0, a1)[chef_index])
        if sig:
            out.append((sig, act))
    return out


# --- mining ------------------------------------------------------------------

def entropy(action_counts) -> float:
    """Shannon entropy (nats) of an empirical action histogram."""
    if hasattr(action_counts, "values"):
        counts = [c for c in action_counts.values() if c]
    else:
        counts = [c for c in action_counts if c]
    total = sum(counts)
    if total < 1:
        raise ValueError("empty histogram")
    return max(0.0, -sum((c / total) * math.log(c / total) for c in counts))


def group_signatures(records):
    """signature -> Counter of actions, from (sig, action[, count]) items."""
    groups = {}
    for item in records:
        if len(item) == 3:
            sig, action, count = item
        else:
            (sig, action), count = item, 1
        if not sig:
            continue
        groups.setdefault(tuple(sig), Counter())[action] += count
    return groups


def extract_player_caused(records, delta: float = 0.1, min_support: int = 5):
    """Signatures whose action distribution is concentrated enough to be
    attributed to the acting chef, each with its modal action."""
    rules = []
    for sig, counts in group_signatures(records).items():
        total = sum(counts.values())
        if total < min_support or entropy(counts) > delta:
            continue
        top = max(counts.values())
        action = min(a for a, c in counts.items() if c == top)
        rules.append(Rule(sig, action))
    return sorted(rules, key=lambda r: (r.action, r.changes))


def prune_redundant(rules):
    """Drop any rule whose change-set strictly contains another rule's.

    The shorter rule already explains the shared changes; the longer one is
    contaminated by whatever else happened to co-occur.
    """
    unique = sorted(set(rules), key=lambda r: (len(r.changes), r.action or "", r.changes))
    kept = []
    for rule in unique:
        cs = rule.change_set()
        if any(other.change_set() < cs for other in unique if other is not rule):
            continue
        kept.append(rule)
    return kept


@dataclass
class Attribution:
    player_caused: list
    teammate_caused: list
    spontaneous: tuple[str, ...]


def attribute_step(record: StepRecord, player_index: int, player_rules) -> Attribution:
    """Partition one step's changes into player / teammate / spontaneous.

    Rules are matched first against the player's perspective, then the
    leftover changes are re-expressed relative to the teammate and matched
    again (the chefs share one rule set since their capabilities are
    identical). Changes explained by neither side form the spontaneous
    residue, reported in the player's frame.
    """
    teammate = 1 - player_index
    # consumable change identities with per-frame renderings
    pending = {}
    for i in (0, 1):
        if record.holds[i]:
            strings = [None, None]
            strings[i] = record.holds[i]
            pending[("hold", i)] = strings
    for pair in record.points:
        pending[("point", pair)] = list(pair)

    matched = {player_index: [], teammate: []}
    ordered_rules = sorted(player_rules, key=lambda r: (len(r.changes), r.action or "", r.changes))
    for frame in (player_index, teammate):
        action = record.actions[frame]
        ctx = set(record.context[frame])
        for rule in ordered_rules:
            if rule.action is not None and rule.action != action:
                continue
            visible = {strings[frame]: key for key, strings in pending.items()
                       if strings[frame] is not None}
            needed_points = [c for c in rule.changes if c not in ctx]
            if not needed_points:
                continue  # a pure-context rule explains no change
            if all(c in visible for c in needed_points):
                matched[frame].append(rule)
                for c in needed_points:
                    pending.pop(visible[c], None)

    residue = tuple(sorted({strings[player_index] for strings in pending.values()
                            if strings[player_index] is not None}))
    return Attribution(matched[player_index], matched[teammate], residue)


def extract_spontaneous(buffer: TransitionBuffer, player_rules,
                        min_support: int = 5):
    """Aggregate the unexplained residues of every buffered step."""
    residues = Counter()
    for record, count in buffer.step_items():
        for player_index in (0, 1):
            residue = attribute_step(record, player_index, player_rules).spontaneous
            if residue:
                residues[residue] += count
    return sorted(
        (Rule(sig, None) for sig, c in residues.items() if c >= min_support),
        key=lambda r: r.changes,
    )


class RuleExtractor(BaseEstimator):
    """Estimator facade over the mining pipeline.

    Parameters mirror the experiment defaults: ``delta`` is the entropy
    threshold (nats) for player-caused attribution, ``min_support`` the
    minimum number of observations before a signature is trusted.
    """

    def __init__(self, delta: float = 0.1, min_support: int = 5):
        self.delta = delta
        self.min_support = min_support

    def fit(self, buffer: TransitionBuffer, y=None):
        candidates = extract_player_caused(
            buffer.records(), delta=self.delta, min_support=self.min_support)
        self.player_rules_ = tuple(prune_redundant(candidates))
        self.spontaneous_rules_ = tuple(extract_spontaneous(
            buffer, self.player_rules_, min_support=self.min_support))
        self.n_records_ = len(buffer)
        return self

    @property
    def rule_sets_(self) -> RuleSets:
        return RuleSets(self.player_rules_, self.spontaneous_rules_)


# --- rule files ---------------------------------------------------------------

def render_rules(rules) -> str:
    return "".join(f"{rule}\n" for rule in rules)


def parse_rules(text: str):
    rules = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        head, _, body = line.partition("=>")
        action = head.strip()
        changes = tuple(c.strip() for c in body.split(",") if c.strip())
        rules.append(Rule(changes, None if action == "(spontaneous)" else action))
    return rules
