"""kitchensynth: interpretable rule-program policies for a cooperative
two-chef kitchen grid game, learned by mining transition rules, reasoning
out action preconditions, and running a crossover-only genetic search."""

from .dsl import Condition, ITModule, Program, parse_program, render_program
from .extractor import Rule, RuleExtractor, RuleSets, TransitionBuffer
from .layouts import GridLayout, LayoutError, bundled_layout, load_layout, resolve_layout
from .reasoner import PreconditionReasoner, TransitionGraph, build_graph, infer_preconditions
from .rollout import ProgramPolicy, RandomPolicy, run_episode
from .synthesizer import Config, ProgramSynthesizer, pareto_front, program_space_size
from .world import WorldState, observe_elements, reset, step

__version__ = "0.1.0"

__all__ = [
    "Condition", "ITModule", "Program", "parse_program", "render_program",
    "Rule", "RuleExtractor", "RuleSets", "TransitionBuffer",
    "GridLayout", "LayoutError", "bundled_layout", "load_layout", "resolve_layout",
    "PreconditionReasoner", "TransitionGraph", "build_graph", "infer_preconditions",
    "ProgramPolicy", "RandomPolicy", "run_episode",
    "Config", "ProgramSynthesizer", "pareto_front", "program_space_size",
    "WorldState", "observe_elements", "reset", "step",
    "__version__",
]
