"""Genetic program search constrained by inferred preconditions.

Generation zero is sampled action-first: pick an action primitive that has
a precondition entry, seed the conjunction with the full entry, then pad
with a few random extra conditions. Search proceeds by elitist selection
and single-point crossover at module boundaries only; module interiors are
never edited, so precondition compliance is closed under the whole search
(which is exactly why there is no mutation operator).

The final program is chosen by cross-play: every Pareto-front member (best
reward / lowest complexity trade-offs) is paired with every other, and the
candidate with the highest summed partner reward wins.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from random import Random

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .dsl import (ACTION_NAMES, CONDITION_NAMES, MUTEX_GROUPS, Condition,
                  ITModule, Program, canonical_conditions)
from .extractor import RuleExtractor, TransitionBuffer
from .reasoner import PreconditionReasoner
from .rollout import ProgramPolicy, RandomPolicy, run_episode, run_paired_episodes
from .world import DEFAULT_HORIZON

MODES = ("knowpc", "knowpc-m", "pc")


@dataclass
class Config:
    """Experiment knobs with the stock training defaults."""
    iterations: int = 50
    init_population: int = 200
    population: int = 10
    episodes_per_eval: int = 3
    final_episodes: int = 10
    epsilon: float = 0.3
    delta: float = 0.1
    min_support: int = 5
    max_modules: int = 8
    max_extra_conditions: int = 2
    horizon: int = DEFAULT_HORIZON
    bootstrap_episodes: int = 50
    refresh_every: int = 10
    exploration: int = 2
    unknown_action_rate: float = 0.1
    archive_parent_rate: float = 0.0
    max_front: int = 16
    seed: int = 0

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in fields(self)]


@dataclass
class Candidate:
    program: Program
    train_reward: float
    order: int
    eval_reward: float | None = None

    @property
    def complexity(self) -> int:
        return self.program.complexity

    def sort_key(self):
        # higher reward first, then simpler, then earlier discovery
        return (-self.train_reward, self.complexity, self.order)


def _pick(rng: Random, seq):
    return seq[rng.randrange(len(seq))]


def _extra_allowed(name: str, existing) -> bool:
    used = {c.name for c in existing}
    if name in used:
        return False
    positives = {c.name for c in existing if not c.negated}
    for group in MUTEX_GROUPS:
        if name in group and positives & (group - {name}):
            return False
    return True


def random_program(table: dict, cfg: Config, rng: Random) -> Program:
    """Sample a module list honoring the precondition table.

    Each module's conjunction starts as the chosen action's full entry and
    gains up to ``max_extra_conditions`` random, non-contradictory extras.
    Extras are sampled sparingly (each successive one with probability 0.4,
    negated a quarter of the time): a module whose extras contradict the
    kitchen's normal state never fires, and a population dominated by dead
    modules leaves crossover nothing to assemble. With no table at all
    (reasoner disabled) conjunctions are fully random.
    """
    actions = sorted(table) if table else list(ACTION_NAMES)
    modules = []
    for _ in range(rng.randint(1, cfg.max_modules)):
        if table and rng.random() < cfg.unknown_action_rate:
            # occasionally propose an action the table knows nothing about:
            # a primitive whose rule was never mined would otherwise be
            # unreachable forever, and the knowledge loop could never learn
            # it (no module fires it, so its transitions never hit the
            # buffer, so no refresh can discover its rule)
            action = _pick(rng, list(ACTION_NAMES))
        else:
            action = _pick(rng, actions)
        conditions = list(canonical_conditions(sorted(table.get(action, ()))))
        if conditions:
            n_extra = 0
            while n_extra < cfg.max_extra_conditions and rng.random() < 0.4:
                n_extra += 1
        else:
            n_extra = rng.randint(1, 4)
        for _ in range(n_extra):
            pool = [n for n in CONDITION_NAMES if _extra_allowed(n, conditions)]
            if not pool:
                break
            name = _pick(rng, pool)
            conditions.append(Condition(name, negated=rng.random() < 0.25))
        modules.append(ITModule(tuple(conditions), action))
    return Program(tuple(modules))


def crossover(parent_a: Program, parent_b: Program, rng: Random,
              max_modules: int = 8) -> Program:
    """Single-point crossover at module boundaries, clipped to the size cap."""
    i = rng.randint(0, len(parent_a.modules))
    j = rng.randint(0, len(parent_b.modules))
    child = (parent_a.modules[:i] + parent_b.modules[j:])[:max_modules]
    return Program(child)


def evaluate(program: Program, layout, cfg: Config, rng: Random,
             buffer: TransitionBuffer | None = None,
             episodes: int | None = None, epsilon: float | None = None) -> float:
    """Mean cumulative self-play reward; both chefs run the same program."""
    policy = ProgramPolicy(program)
    eps = cfg.epsilon if epsilon is None else epsilon
    n = cfg.episodes_per_eval if episodes is None else episodes
    total = 0
    for _ in range(n):
        total += run_episode(layout, (policy, policy), rng, epsilon=eps,
                             horizon=cfg.horizon, buffer=buffer)
    return total / n


def pareto_front(candidates) -> list[Candidate]:
    """Non-dominated set under (maximize train reward, minimize complexity)."""
    items = list(candidates)
    front = []
    for c in items:
        dominated = False
        for other in items:
            if other is c:
                continue
            if (other.train_reward >= c.train_reward
                    and other.complexity <= c.complexity
                    and (other.train_reward > c.train_reward
                         or other.complexity < c.complexity)):
                dominated = True
                break
        if not dominated:
            front.append(c)
    return sorted(front, key=Candidate.sort_key)


def cross_evaluate(candidates, front, layout, cfg: Config, seed: int) -> Candidate:
    """Greedy cross-play of candidates against every front member.

    Pairings are role-balanced and seeded per unordered pair, so the score
    of (a, b) and (b, a) comes from the same episodes. Sets ``eval_reward``
    on each candidate and returns the best (ties to lower complexity).
    """
    candidates = list(candidates)
    front = list(front)
    if not front:
        raise ValueError("empty Pareto front")
    master = Random(seed)
    pair_seeds = {}
    scores = {}

    def key(a, b):
        return (min(a.order, b.order), max(a.order, b.order))

    everyone = {c.order: c for c in candidates + front}
    for a, b in sorted({key(c, f) for c in candidates for f in front}):
        pair_seeds[(a, b)] = master.randrange(2 ** 32)
    for (a, b), s in pair_seeds.items():
        scores[(a, b)] = run_paired_episodes(
            layout, everyone[a].program, everyone[b].program,
            cfg.final_episodes, Random(s), horizon=cfg.horizon)

    for c in candidates:
        c.eval_reward = sum(scores[key(c, f)] for f in front)
    best = min(candidates, key=lambda c: (-c.eval_reward, c.complexity, c.order))
    return best


def program_space_size(n_conditions: int = 12, max_conditions: int = 4,
                       n_actions: int = 8, n_modules: int = 8) -> tuple[int, int]:
    """Exact search-space arithmetic: (conjunctions per module, programs)."""
    per_module_conditions = sum(
        math.comb(n_conditions, i) * 2 ** i for i in range(1, max_conditions + 1))
    programs = (n_actions * per_module_conditions) ** n_modules
    return per_module_conditions, programs


class ProgramSynthesizer(BaseEstimator):
    """End-to-end learner: bootstrap buffer, mine rules, reason, search.

    ``mode`` selects the full pipeline (``knowpc``), single-step-only
    reasoning (``knowpc-m``), or no reasoner at all (``pc``). ``fit`` takes
    a :class:`~kitchensynth.layouts.GridLayout` and exposes the archive,
    Pareto front, precondition table, and the cross-play winner.
    """

    def __init__(self, mode: str = "knowpc", iterations: int = 50,
                 init_population: int = 200, population: int = 10,
                 episodes_per_eval: int = 3, final_episodes: int = 10,
                 epsilon: float = 0.3, delta: float = 0.1, min_support: int = 5,
                 max_modules: int = 8, max_extra_conditions: int = 2,
                 horizon: int = DEFAULT_HORIZON, bootstrap_episodes: int = 50,
                 refresh_every: int = 10, exploration: int = 2,
                 unknown_action_rate: float = 0.1,
                 archive_parent_rate: float = 0.0,
                 max_front: int = 16, seed: int = 0):
        self.mode = mode
        self.iterations = iterations
        self.init_population = init_population
        self.population = population
        self.episodes_per_eval = episodes_per_eval
        self.final_episodes = final_episodes
        self.epsilon = epsilon
        self.delta = delta
        self.min_support = min_support
        self.max_modules = max_modules
        self.max_extra_conditions = max_extra_conditions
        self.horizon = horizon
        self.bootstrap_episodes = bootstrap_episodes
        self.refresh_every = refresh_every
        self.exploration = exploration
        self.unknown_action_rate = unknown_action_rate
        self.archive_parent_rate = archive_parent_rate
        self.max_front = max_front
        self.seed = seed

    def _config(self) -> Config:
        return Config(**{f.name: getattr(self, f.name) for f in fields(Config)})

    def _refresh_knowledge(self, buffer):
        if self.mode == "pc":
            self.rules_ = None
            return {}
        extractor = RuleExtractor(delta=self.delta, min_support=self.min_support)
        extractor.fit(buffer)
        reasoner = PreconditionReasoner(multi_step=(self.mode == "knowpc"))
        reasoner.fit(extractor.rule_sets_)
        self.rules_ = extractor.rule_sets_
        self.graph_ = reasoner.graph_
        return reasoner.table_

    def fit(self, layout, y=None):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        cfg = self._config()
        rng = Random(self.seed)
        buffer = TransitionBuffer()
        self.rules_ = None
        self.graph_ = None

        random_policy = RandomPolicy()
        for _ in range(cfg.bootstrap_episodes):
            run_episode(layout, (random_policy, random_policy), rng,
                        epsilon=1.0, horizon=cfg.horizon, buffer=buffer)
        table = self._refresh_knowledge(buffer)

        archive: dict[Program, Candidate] = {}
        history = []

        def admit(program):
            if program in archive or not program.modules:
                return
            reward = evaluate(program, layout, cfg, rng, buffer=buffer)
            archive[program] = Candidate(program, reward, order=len(archive))

        for _ in range(cfg.init_population):
            admit(random_program(table, cfg, rng))

        def draw_parent(selected, everyone):
            # mostly the elite pool, sometimes anyone ever evaluated: genes
            # outside the current top programs stay available to crossover
            if everyone and rng.random() < cfg.archive_parent_rate:
                return _pick(rng, everyone)
            return _pick(rng, selected)

        for iteration in range(1, cfg.iterations + 1):
            ranked = sorted(archive.values(), key=Candidate.sort_key)
            selected = ranked[:cfg.population]
            everyone = list(archive.values())
            children = []
            attempts = 0
            while len(children) < cfg.population and attempts < cfg.population * 20:
                attempts += 1
                child = crossover(draw_parent(selected, everyone).program,
                                  draw_parent(selected, everyone).program,
                                  rng, max_modules=cfg.max_modules)
                if child.modules and child not in archive and child not in children:
                    children.append(child)
            if cfg.refresh_every and iteration % cfg.refresh_every == 0:
                table = self._refresh_knowledge(buffer)
            # Knowledge feedback: a steady trickle of fresh table-seeded
            # programs, plus hybrids of an elite with a fresh program. The
            # hybrids matter: pure immigrants rarely out-score the elite
            # pool, so without them a module type the elites happen to lack
            # (say, the delivery module) could never enter the breeding pool
            # at all. With the reasoner removed there is no knowledge to
            # feed back, so that mode runs the plain crossover-only search.
            if self.mode != "pc":
                for _ in range(cfg.exploration):
                    children.append(random_program(table, cfg, rng))
                    children.append(crossover(_pick(rng, selected).program,
                                              random_program(table, cfg, rng),
                                              rng, max_modules=cfg.max_modules))
            for child in children:
                admit(child)
            best = min(archive.values(), key=Candidate.sort_key)
            history.append((iteration, best.train_reward, len(archive)))

        self.table_ = table
        self.buffer_ = buffer
        self.archive_ = sorted(archive.values(), key=lambda c: c.order)
        self.history_ = history

        front = pareto_front(self.archive_)
        if len(front) > cfg.max_front:
            front = sorted(front, key=Candidate.sort_key)[:cfg.max_front]
        self.pareto_front_ = front
        eval_seed = rng.randrange(2 ** 32)
        self.best_ = cross_evaluate(front, front, layout, cfg, seed=eval_seed)
        self.best_program_ = self.best_.program
        self.final_reward_ = evaluate(
            self.best_program_, layout, cfg, Random(rng.randrange(2 ** 32)),
            episodes=cfg.final_episodes, epsilon=0.0)
        return self

    def policy(self) -> ProgramPolicy:
        if not hasattr(self, "best_program_"):
            raise NotFittedError("ProgramSynthesizer is not fitted yet")
        return ProgramPolicy(self.best_program_)
