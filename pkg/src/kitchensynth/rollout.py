"""Episode execution: policies, self-play rollouts, and firing statistics.

Policies are stateless; all randomness flows through the caller's ``rng``,
consumed in a fixed order (chef 0 then chef 1, exploration coin before the
policy), which makes whole rollouts reproducible from a single seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .dsl import Program, select_action
from .layouts import DIRECTIONS
from .nav import NavigationError, next_env_action, percept
from .world import (ACTIONS, DEFAULT_HORIZON, MOVE_ACTIONS,
                    class_instances, reset, step)

_NON_INTERACT = ("up", "down", "left", "right", "noop")


class RandomPolicy:
    """Uniformly random environment actions."""

    def act(self, state, chef_index, instances, rng):
        return ACTIONS[rng.randrange(len(ACTIONS))], None


class ProgramPolicy:
    """Runs a program through the interpreter and the BFS controller.

    A fired module whose target class turns out unreachable degrades to a
    uniformly random action, same as the trailing fallback.

    Moves whose destination touches the teammate's tile are jittered into a
    random action half the time: two greedy copies of one program otherwise
    aim at the same tile in mirrored states and the environment's
    neither-moves conflict rule freezes them there forever.
    """

    def __init__(self, program: Program):
        self.program = program

    def act(self, state, chef_index, instances, rng):
        choice, fired = select_action(self.program, percept(state, chef_index, instances), rng)
        if fired is None:
            return choice, None
        try:
            action = next_env_action(state, chef_index, choice, rng, instances)
        except NavigationError:
            return ACTIONS[rng.randrange(len(ACTIONS))], None
        if action in MOVE_ACTIONS:
            dx, dy = DIRECTIONS[action]
            chef = state.chefs[chef_index]
            dest = (chef.pos[0] + dx, chef.pos[1] + dy)
            other = state.chefs[1 - chef_index].pos
            if (abs(dest[0] - other[0]) + abs(dest[1] - other[1]) == 1
                    and rng.random() < 0.5):
                action = _NON_INTERACT[rng.randrange(5)]
        return action, fired


@dataclass
class FiringStats:
    """Per-chef counts of fired modules, fallbacks, and exploration steps."""
    fired: tuple[dict, dict] = field(default_factory=lambda: ({}, {}))
    fallback: list = field(default_factory=lambda: [0, 0])
    explored: list = field(default_factory=lambda: [0, 0])

    def record(self, chef_index, fired_index):
        if fired_index == "eps":
            self.explored[chef_index] += 1
        elif fired_index is None:
            self.fallback[chef_index] += 1
        else:
            counts = self.fired[chef_index]
            counts[fired_index] = counts.get(fired_index, 0) + 1


def run_episode(layout, policies, rng, epsilon=0.0, horizon=DEFAULT_HORIZON,
                buffer=None, stats: FiringStats | None = None) -> int:
    """Play one episode; returns the cumulative shared reward.

    With probability ``epsilon`` a chef takes a uniformly random action
    instead of consulting its policy. When ``buffer`` is given, every step's
    transition record (both chefs' perspectives) is appended to it.
    """
    state = reset(layout, horizon=horizon)
    total = 0
    for _ in range(horizon):
        instances = class_instances(state)
        actions = []
        for i, policy in enumerate(policies):
            if epsilon and rng.random() < epsilon:
                actions.append(ACTIONS[rng.randrange(len(ACTIONS))])
                if stats is not None:
                    stats.record(i, "eps")
            else:
                action, fired = policy.act(state, i, instances, rng)
                actions.append(action)
                if stats is not None:
                    stats.record(i, fired)
        nxt, reward, events = step(state, actions[0], actions[1])
        if buffer is not None:
            buffer.add_step(state, nxt, events, actions[0], actions[1])
        total += reward
        state = nxt
    return total


def run_paired_episodes(layout, program_a, program_b, episodes, rng,
                        horizon=DEFAULT_HORIZON) -> float:
    """Greedy cross-play of two programs, averaged over both role assignments.

    Episode parity alternates which program controls chef 0, so the mean is
    role-balanced for any even episode count.
    """
    pol_a, pol_b = ProgramPolicy(program_a), ProgramPolicy(program_b)
    total = 0
    for e in range(episodes):
        pair = (pol_a, pol_b) if e % 2 == 0 else (pol_b, pol_a)
        total += run_episode(layout, pair, rng, epsilon=0.0, horizon=horizon)
    return total / episodes
