import json
from pathlib import Path

import pytest

from kitchensynth.cli import main
from kitchensynth.dsl import parse_program, render_program
from kitchensynth.harness import (eval_matrix, inspect_report, matrix_csv,
                                  normalize_matrix, parse_config,
                                  render_config, run_eval, train_run)
from kitchensynth.synthesizer import Config

from conftest import FIXTURES

TINY = Config(iterations=2, init_population=10, population=4,
              episodes_per_eval=1, final_episodes=2, bootstrap_episodes=4,
              refresh_every=2, horizon=120, seed=3)


def test_config_roundtrip():
    text = render_config(TINY)
    assert parse_config(text) == TINY


def test_config_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown entry"):
        parse_config("episodes = 3\n")


def test_config_parses_floats_and_comments():
    cfg = parse_config("epsilon = 0.5  # exploration\niterations = 2\n\n")
    assert cfg.epsilon == 0.5 and cfg.iterations == 2


@pytest.fixture(scope="module")
def tiny_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    summary = train_run("cramped_room", "knowpc", TINY, out)
    return out, summary


def test_train_writes_artifacts(tiny_run):
    out, summary = tiny_run
    for name in ("config.txt", "best.ktp", "preconditions.txt", "archive.txt",
                 "pareto.csv", "rules_player.txt", "rules_spontaneous.txt",
                 "graph.gml", "summary.json"):
        assert (out / name).exists(), name
    assert summary["mode"] == "knowpc"
    assert summary["final_reward"] >= 0
    parse_program((out / "best.ktp").read_text())  # valid program text


def test_train_summary_matches_file(tiny_run):
    out, summary = tiny_run
    assert json.loads((out / "summary.json").read_text()) == summary


def test_train_deterministic_artifacts(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    train_run("cramped_room", "knowpc", TINY, a)
    train_run("cramped_room", "knowpc", TINY, b)
    assert (a / "best.ktp").read_bytes() == (b / "best.ktp").read_bytes()
    assert (a / "archive.txt").read_bytes() == (b / "archive.txt").read_bytes()
    assert (a / "preconditions.txt").read_bytes() == (b / "preconditions.txt").read_bytes()


def test_train_pc_mode_writes_empty_rules(tmp_path):
    out = tmp_path / "pc"
    summary = train_run("cramped_room", "pc", TINY, out)
    assert (out / "rules_player.txt").read_text() == ""
    assert (out / "preconditions.txt").read_text().strip() == ""
    assert not (out / "graph.gml").exists()
    assert summary["mode"] == "pc"


def test_inspect_report(tiny_run):
    out, _ = tiny_run
    report = inspect_report(out)
    assert "precondition table:" in report
    assert "best program" in report
    assert "RandomAct" in report


def test_inspect_missing_artifacts(tmp_path):
    with pytest.raises(FileNotFoundError, match="missing artifacts"):
        inspect_report(tmp_path)


def test_inspect_firing_accounting(tiny_run, cramped_room):
    """Per chef: fired-module counts plus fallbacks equal the horizon."""
    from random import Random

    from kitchensynth.rollout import FiringStats, ProgramPolicy, run_episode
    out, _ = tiny_run
    program = parse_program((out / "best.ktp").read_text())
    stats = FiringStats()
    policy = ProgramPolicy(program)
    horizon = 120
    run_episode(cramped_room, (policy, policy), Random(0), epsilon=0.0,
                horizon=horizon, stats=stats)
    for chef in (0, 1):
        fired = sum(stats.fired[chef].values())
        assert fired == horizon - stats.fallback[chef]


def test_eval_matrix_symmetric_with_selfplay_diagonal(listing_program):
    from kitchensynth.dsl import Program
    programs = [listing_program, Program()]
    matrix = eval_matrix(programs, __import__("kitchensynth.layouts", fromlist=["bundled_layout"]).bundled_layout("cramped_room"),
                         episodes=2, seed=5, horizon=120)
    assert matrix[0][1] == matrix[1][0]
    assert matrix[0][0] >= 0 and matrix[1][1] >= 0


def test_eval_matrix_reproducible(cramped_room, listing_program):
    from kitchensynth.dsl import Program
    programs = [listing_program, Program()]
    m1 = eval_matrix(programs, cramped_room, episodes=2, seed=9, horizon=120)
    m2 = eval_matrix(programs, cramped_room, episodes=2, seed=9, horizon=120)
    assert m1 == m2


def test_normalize_matrix():
    m = [[100.0, 50.0], [50.0, 200.0]]
    n = normalize_matrix(m)
    assert n[1][1] == 1.0 and n[0][0] == 0.5
    assert normalize_matrix([[0.0]]) == [[0.0]]


def test_matrix_csv_shape():
    text = matrix_csv([[1.0, 2.0], [2.0, 1.0]], ["a", "b"])
    lines = text.strip().splitlines()
    assert lines[0] == "program,a,b"
    assert lines[1].startswith("a,1.0000,2.0000")


def test_train_save_buffer_flag(tmp_path):
    out = tmp_path / "buffered"
    train_run("cramped_room", "knowpc", TINY, out, save_buffer=True)
    lines = (out / "buffer.jsonl").read_text().splitlines()
    assert lines and all('"signature"' in l for l in lines[:5])


def test_listing_transfers_to_perturbed_counter_circuit(listing_program):
    """Zero-shot: a program trained on the original layout still delivers on
    the perturbed variant (existence-level conditions + BFS adapt)."""
    from random import Random

    from kitchensynth.layouts import bundled_layout
    from kitchensynth.rollout import ProgramPolicy, run_episode
    layout = bundled_layout("counter_circuit_alt")
    policy = ProgramPolicy(listing_program)
    rng = Random(3)
    rewards = [run_episode(layout, (policy, policy), rng, epsilon=0.0)
               for _ in range(5)]
    assert sum(rewards) / len(rewards) > 0


def test_run_eval_writes_csv(tmp_path, listing_program):
    out = tmp_path / "matrices"
    labels, results = run_eval([FIXTURES / "listing1.ktp"],
                               ["cramped_room", "cramped_room_alt"],
                               episodes=2, seed=1, horizon=120, out_dir=out)
    assert labels == ["listing1"]
    assert set(results) == {"cramped_room", "cramped_room_alt"}
    assert (out / "matrix_cramped_room.csv").exists()
    assert (out / "matrix_cramped_room_normalized.csv").exists()


# --- CLI ---------------------------------------------------------------------------

def test_cli_train_eval_inspect(tmp_path, capsys):
    out = tmp_path / "cli_run"
    cfg = tmp_path / "tiny.cfg"
    cfg.write_text(render_config(TINY))
    assert main(["train", "--layout", "cramped_room", "--mode", "knowpc",
                 "--seed", "3", "--out", str(out), "--config", str(cfg)]) == 0
    captured = capsys.readouterr().out
    assert "final self-play eval reward" in captured

    assert main(["eval", "--programs", str(out / "best.ktp"),
                 str(FIXTURES / "listing1.ktp"),
                 "--layouts", "cramped_room", "--episodes", "2",
                 "--seed", "1", "--horizon", "120"]) == 0
    captured = capsys.readouterr().out
    assert "cramped_room" in captured

    assert main(["inspect", str(out)]) == 0
    assert "precondition table" in capsys.readouterr().out


def test_cli_rejects_unknown_mode(tmp_path):
    with pytest.raises(SystemExit):
        main(["train", "--layout", "cramped_room", "--mode", "magic",
              "--out", str(tmp_path)])
