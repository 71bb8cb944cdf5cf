"""Precondition inference over a transition graph of mined rules.

Each player-caused rule becomes a bipartite gadget: all its before-infos
point at a fresh action node, which points at all its after-infos.
Spontaneous rules connect before-infos to after-infos directly. Stateless
records (``onionDisp@face``) appear on both sides of their rule.

Single-step reasoning gives every interaction-point node the mapped
conditions of its co-prerequisites; multi-step reasoning additionally pulls
in the co-prerequisites of the node's results, one hop only, skipping
candidates that are mutually exclusive with the node's own conjunctive
conditions. ``player.empty`` result nodes are kept distinct per rule, which
severs chains of the form "after your hands are free you could do anything":
expansions never continue through them.

Entries for the same action primitive are unioned, position markers are
ignored by the mapping, and any mutex group that ends up contributing two
or more members to one entry is dropped from it entirely (a conjunction
cannot demand two exclusive hold states, so neither is a real precondition).
"""
from __future__ import annotations

from dataclasses import dataclass

from sklearn.base import BaseEstimator

from .dsl import MUTEX_GROUPS
from .extractor import RuleSets, change_after, change_before

NONJOINABLE = frozenset({"player.empty"})

_PLAYER_CONDITIONS = {"empty": "HoldEmpty", "onion": "HoldOnion",
                      "dish": "HoldDish", "soup": "HoldSoup"}
_POINT_CONDITIONS = {"serving": "ExServing", "onionDisp": "ExOnionDisp",
                     "dishDisp": "ExDishDisp"}
_COUNTER_CONDITIONS = {"empty": "ExEmptyCounter", "onion": "ExOnionCounter",
                       "dish": "ExDishCounter", "soup": "ExSoupCounter"}
_CONDITION_ACTION = {
    "ExServing": "GoIntServing", "ExOnionDisp": "GoIntOnionDisp",
    "ExDishDisp": "GoIntDishDisp", "ExOnionCounter": "GoIntOnionCounter",
    "ExDishCounter": "GoIntDishCounter", "ExSoupCounter": "GoIntSoupCounter",
    "ExEmptyCounter": "GoIntEmptyCounter", "ExIdlePot": "GoIntIdlePot",
    "ExReadyPot": "GoIntReadyPot",
}


def strip_position(info: str) -> str:
    return info.split("@", 1)[0]


def condition_for(info: str) -> str | None:
    """Map an element info to its condition primitive (position ignored).

    Cooking-but-not-ready pots have no condition in the language and map to
    nothing, as does any unrecognized info.
    """
    base = strip_position(info)
    if base.startswith("player."):
        return _PLAYER_CONDITIONS.get(base[len("player."):])
    if base.startswith("counter."):
        return _COUNTER_CONDITIONS.get(base[len("counter."):])
    if base.startswith("pot."):
        try:
            onions, cook = base.split(".")[1:]
            onions, cook = int(onions), int(cook)
        except ValueError:
            return None
        if onions < 3:
            return "ExIdlePot"
        if cook == 20:
            return "ExReadyPot"
        return None
    return _POINT_CONDITIONS.get(base)


def action_for(info: str) -> str | None:
    """Map an interaction-point info to its go-and-interact primitive."""
    if strip_position(info).startswith("player."):
        return None
    cond = condition_for(info)
    return _CONDITION_ACTION.get(cond) if cond else None


def is_point_info(info: str) -> bool:
    return not strip_position(info).startswith("player.")


@dataclass(frozen=True)
class GraphRule:
    before: tuple[str, ...]
    after: tuple[str, ...]
    action: str | None


class TransitionGraph:
    """Rule gadgets plus prerequisite/result queries keyed by info string."""

    def __init__(self, rules):
        self.rules = tuple(rules)
        nodes = set()
        for rule in self.rules:
            nodes.update(rule.before)
            nodes.update(rule.after)
        self.nodes = frozenset(nodes)

    def conjunctive_conditions(self, node: str) -> set[str]:
        """The other prerequisites of every rule this node is a prerequisite of."""
        if node not in self.nodes:
            raise KeyError(f"unknown node {node!r}")
        out = set()
        for rule in self.rules:
            if node in rule.before:
                out.update(b for b in rule.before if b != node)
        return out

    def results(self, node: str) -> set[str]:
        """All after-infos of every rule this node is a prerequisite of.

        Stateless records sit on both sides of their rule; the node itself
        is not reported as its own result.
        """
        if node not in self.nodes:
            raise KeyError(f"unknown node {node!r}")
        out = set()
        for rule in self.rules:
            if node in rule.before:
                out.update(a for a in rule.after if a != node)
        return out

    def point_nodes(self):
        return sorted(n for n in self.nodes if is_point_info(n))


def build_graph(rule_sets: RuleSets) -> TransitionGraph:
    """Instantiate the gadget graph from mined rule sets.

    Stateless changes (single info, no arrow) land on both sides of their
    rule; spontaneous rules carry no action node.
    """
    graph_rules = []
    for rule in list(rule_sets.player) + list(rule_sets.spontaneous):
        before = tuple(sorted({change_before(c) for c in rule.changes}))
        after = tuple(sorted({change_after(c) for c in rule.changes}))
        graph_rules.append(GraphRule(before, after, rule.action))
    return TransitionGraph(graph_rules)


def _mutex_blocked(candidate: str, own_conditions: set[str]) -> bool:
    for group in MUTEX_GROUPS:
        if candidate in group and any(o in group and o != candidate
                                      for o in own_conditions):
            return True
    return False


def _enforce_mutex(entry: set[str]) -> frozenset[str]:
    out = set(entry)
    for group in MUTEX_GROUPS:
        if len(out & group) >= 2:
            out -= group
    return frozenset(out)


def infer_preconditions(graph: TransitionGraph, multi_step: bool = True,
                        enforce_mutex: bool = True) -> dict:
    """Per-action-primitive precondition sets.

    Runs the single-step pass, optionally the one-hop multi-step pass, then
    aggregates node entries by mapped primitive name and enforces the mutex
    groups on the aggregate: a group contributing two or more members to one
    entry is dropped from it wholesale, since a conjunction cannot demand
    two exclusive hold states. ``enforce_mutex=False`` exposes the raw
    aggregate for diagnostics.
    """
    node_entries = {}
    for node in graph.point_nodes():
        if action_for(node) is None:
            continue
        own = {condition_for(k) for k in graph.conjunctive_conditions(node)}
        own.discard(None)
        entry = set(own)
        if multi_step:
            for result in sorted(graph.results(node)):
                if result in NONJOINABLE or result not in graph.nodes:
                    continue
                for k in sorted(graph.conjunctive_conditions(result)):
                    cond = condition_for(k)
                    if cond is not None and not _mutex_blocked(cond, own):
                        entry.add(cond)
        node_entries[node] = entry

    table = {}
    for node, entry in node_entries.items():
        name = action_for(node)
        table.setdefault(name, set()).update(entry)
    if not enforce_mutex:
        return {name: frozenset(entry) for name, entry in sorted(table.items())}
    return {name: _enforce_mutex(entry) for name, entry in sorted(table.items())}


class PreconditionReasoner(BaseEstimator):
    """Estimator facade: fit on mined rule sets, expose graph and table.

    ``multi_step=False`` keeps only single-step reasoning (the weaker
    ablation variant).
    """

    def __init__(self, multi_step: bool = True):
        self.multi_step = multi_step

    def fit(self, rule_sets: RuleSets, y=None):
        self.graph_ = build_graph(rule_sets)
        self.table_ = infer_preconditions(self.graph_, multi_step=self.multi_step)
        return self


# --- exports -------------------------------------------------------------------

def render_table(table: dict) -> str:
    lines = []
    for action in sorted(table):
        conds = ", ".join(sorted(table[action])) or "(none)"
        lines.append(f"{action}: {conds}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> dict:
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        action, _, body = line.partition(":")
        body = body.strip()
        conds = () if body == "(none)" else tuple(c.strip() for c in body.split(","))
        table[action.strip()] = frozenset(conds)
    return table


def export_gml(graph: TransitionGraph) -> str:
    """GML rendering of the gadget graph for external viewers.

    Action nodes are materialized per rule; ``player.empty`` occurrences are
    emitted as distinct nodes, matching the reasoning semantics.
    """
    lines = ["graph [", "  directed 1"]
    ids = {}
    edges = []

    def node_id(label, kind, force_new=False):
        key = (label, len(ids)) if force_new else (label, None)
        if force_new or key not in ids:
            ids[key] = len(ids)
            safe = label.replace('"', "'")
            lines.append(f'  node [ id {ids[key]} label "{safe}" kind "{kind}" ]')
        return ids[key]

    for idx, rule in enumerate(graph.rules):
        def info_node(label):
            kind = "player" if not is_point_info(label) else "point"
            return node_id(label, kind, force_new=label in NONJOINABLE)

        if rule.action is not None:
            mid = node_id(f"{rule.action}#{idx}", "action", force_new=True)
            for b in rule.before:
                edges.append((info_node(b), mid))
            for a in rule.after:
                edges.append((mid, info_node(a)))
        else:
            heads = [info_node(b) for b in rule.before]
            tails = [info_node(a) for a in rule.after]
            for h in heads:
                for t in tails:
                    edges.append((h, t))
    for src, dst in edges:
        lines.append(f"  edge [ source {src} target {dst} ]")
    lines.append("]")
    return "\n".join(lines) + "\n"
