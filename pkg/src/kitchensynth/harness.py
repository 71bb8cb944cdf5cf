"""Experiment orchestration: training runs, cross-play matrices, reports.

Every training run writes a self-contained artifact directory: the config
snapshot, mined rule files, the precondition table, a GML export of the
transition graph, the deduplicated candidate archive with scores, the
Pareto front, and the winning program as ``best.ktp``. The whole run is a
pure function of (layout, mode, config), so identical inputs reproduce
byte-identical artifacts.
"""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import fields
from pathlib import Path
from random import Random

from .dsl import parse_program, render_program
from .extractor import render_rules
from .layouts import GridLayout, render_layout, resolve_layout
from .reasoner import export_gml, render_table
from .rollout import FiringStats, ProgramPolicy, run_episode, run_paired_episodes
from .synthesizer import MODES, Config, ProgramSynthesizer


def parse_config(text: str) -> Config:
    """Key-value config format: one ``name = value`` per line, ``#`` comments."""
    known = {f.name: f.type for f in fields(Config)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or name not in known:
            raise ValueError(f"config line {lineno}: unknown entry {line!r}")
        values[name] = float(value) if "." in value or "e" in value.lower() else int(value)
    return Config(**values)


def render_config(cfg: Config) -> str:
    return "".join(f"{name} = {value}\n" for name, value in cfg.items())


def train_run(layout_spec: str, mode: str, cfg: Config, out_dir,
              save_buffer: bool = False) -> dict:
    """Full pipeline on one layout; writes artifacts, returns the summary."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    layout = resolve_layout(layout_spec) if isinstance(layout_spec, str) else layout_spec
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    started = time.monotonic()
    synth = ProgramSynthesizer(mode=mode, **{f.name: getattr(cfg, f.name)
                                             for f in fields(Config)})
    synth.fit(layout)
    elapsed = time.monotonic() - started

    (out / "config.txt").write_text(f"layout = {layout.name}\nmode = {mode}\n"
                                    + render_config(cfg))
    (out / "best.ktp").write_text(render_program(synth.best_program_))
    (out / "preconditions.txt").write_text(render_table(synth.table_))
    if synth.rules_ is not None:
        (out / "rules_player.txt").write_text(render_rules(synth.rules_.player))
        (out / "rules_spontaneous.txt").write_text(render_rules(synth.rules_.spontaneous))
        (out / "graph.gml").write_text(export_gml(synth.graph_))
    else:
        (out / "rules_player.txt").write_text("")
        (out / "rules_spontaneous.txt").write_text("")

    if save_buffer:
        synth.buffer_.save(out / "buffer.jsonl")

    with (out / "archive.txt").open("w") as fh:
        for cand in synth.archive_:
            fh.write(f"# candidate {cand.order}: train_reward={cand.train_reward:.3f} "
                     f"complexity={cand.complexity}\n")
            fh.write(render_program(cand.program))
            fh.write("\n")
    with (out / "pareto.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["order", "train_reward", "complexity", "eval_reward"])
        for cand in synth.pareto_front_:
            writer.writerow([cand.order, f"{cand.train_reward:.4f}",
                             cand.complexity, f"{cand.eval_reward:.4f}"])

    summary = {
        "layout": layout.name,
        "mode": mode,
        "seed": cfg.seed,
        "final_reward": synth.final_reward_,
        "best_train_reward": synth.best_.train_reward,
        "best_complexity": synth.best_.complexity,
        "archive_size": len(synth.archive_),
        "front_size": len(synth.pareto_front_),
        "wall_seconds": round(elapsed, 2),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def eval_matrix(programs, layout: GridLayout, episodes: int, seed: int,
                horizon: int) -> list[list[float]]:
    """Pairwise greedy cross-play matrix, role-averaged and seed-shared.

    Entry (i, j) is the mean reward of program i partnered with program j;
    each unordered pair is played once and mirrored, so the matrix is
    symmetric by construction.
    """
    n = len(programs)
    master = Random(seed)
    seeds = {}
    for i in range(n):
        for j in range(i, n):
            seeds[(i, j)] = master.randrange(2 ** 32)
    matrix = [[0.0] * n for _ in range(n)]
    for (i, j), s in seeds.items():
        score = run_paired_episodes(layout, programs[i], programs[j], episodes,
                                    Random(s), horizon=horizon)
        matrix[i][j] = matrix[j][i] = score
    return matrix


def normalize_matrix(matrix) -> list[list[float]]:
    """Per-matrix normalization by the best observed self-play score."""
    top = max((matrix[i][i] for i in range(len(matrix))), default=0.0)
    if top <= 0:
        return [row[:] for row in matrix]
    return [[value / top for value in row] for row in matrix]


def matrix_csv(matrix, labels) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["program"] + list(labels))
    for label, row in zip(labels, matrix):
        writer.writerow([label] + [f"{v:.4f}" for v in row])
    return buf.getvalue()


def run_eval(program_paths, layout_specs, episodes, seed, horizon, out_dir=None):
    """CLI eval command: matrices for every layout, CSV + normalized CSV."""
    programs = [parse_program(Path(p).read_text()) for p in program_paths]
    labels = [Path(p).stem for p in program_paths]
    results = {}
    for spec in layout_specs:
        layout = resolve_layout(spec)
        matrix = eval_matrix(programs, layout, episodes, seed, horizon)
        results[layout.name] = matrix
        if out_dir is not None:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"matrix_{layout.name}.csv").write_text(matrix_csv(matrix, labels))
            (out / f"matrix_{layout.name}_normalized.csv").write_text(
                matrix_csv(normalize_matrix(matrix), labels))
    return labels, results


def inspect_report(run_dir, probe_seed: int = 0) -> str:
    """Human-readable report over a training run's artifacts.

    Includes per-module firing counts from one greedy probe episode of the
    winning program.
    """
    run = Path(run_dir)
    required = ["config.txt", "best.ktp", "preconditions.txt"]
    missing = [name for name in required if not (run / name).exists()]
    if missing:
        raise FileNotFoundError(f"missing artifacts in {run}: {', '.join(missing)}")

    config_text = (run / "config.txt").read_text()
    layout_name = mode = None
    horizon = 400
    for line in config_text.splitlines():
        name, _, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if name == "layout":
            layout_name = value
        elif name == "mode":
            mode = value
        elif name == "horizon":
            horizon = int(value)
    program = parse_program((run / "best.ktp").read_text())
    layout = resolve_layout(layout_name)

    stats = FiringStats()
    policy = ProgramPolicy(program)
    reward = run_episode(layout, (policy, policy), Random(probe_seed),
                         epsilon=0.0, horizon=horizon, stats=stats)

    lines = [f"run: {run}", f"layout: {layout_name}  mode: {mode}", ""]
    lines.append("layout grid:")
    lines.extend("  " + row for row in render_layout(layout).splitlines())
    lines += ["", "precondition table:"]
    lines.extend("  " + row for row in (run / "preconditions.txt").read_text().splitlines())
    if (run / "rules_player.txt").exists():
        rules = (run / "rules_player.txt").read_text().splitlines()
        lines += ["", f"player-caused rules ({len(rules)}):"]
        lines.extend("  " + row for row in rules)
    if (run / "pareto.csv").exists():
        lines += ["", "pareto front:"]
        lines.extend("  " + row for row in (run / "pareto.csv").read_text().splitlines())
    lines += ["", f"best program (probe episode reward {reward}):"]
    for idx, module in enumerate(program.modules):
        fired = sum(stats.fired[c].get(idx, 0) for c in (0, 1))
        head, body = str(module).split("\n")
        lines.append(f"  {head}  # fired {fired}x")
        lines.append(f"  {body}")
    lines.append(f"  RandomAct  # fired {sum(stats.fallback)}x")
    return "\n".join(lines) + "\n"
