"""Command-line entry point: train / eval / inspect / serve."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import inspect_report, parse_config, run_eval, train_run
from .synthesizer import Config, MODES
from .world import DEFAULT_HORIZON


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kitchensynth",
        description="Synthesize and play interpretable two-chef kitchen policies.")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="run the full training pipeline on one layout")
    train.add_argument("--layout", required=True, help="bundled layout name or path to a .layout file")
    train.add_argument("--mode", choices=MODES, default="knowpc")
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--out", required=True, help="artifact directory")
    train.add_argument("--config", help="key-value config file overriding the defaults")
    train.add_argument("--save-buffer", action="store_true",
                       help="persist the transition buffer as newline-delimited records")

    ev = sub.add_parser("eval", help="pairwise cross-play matrix of saved programs")
    ev.add_argument("--programs", nargs="+", required=True, help="one or more .ktp files")
    ev.add_argument("--layouts", nargs="+", required=True, help="layout names or paths")
    ev.add_argument("--episodes", type=int, default=10)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    ev.add_argument("--out", help="optional directory for CSV matrices")

    insp = sub.add_parser("inspect", help="report over a training run's artifacts")
    insp.add_argument("run_dir")

    serve = sub.add_parser("serve", help="host a live human-vs-program session")
    serve.add_argument("--layout", required=True)
    serve.add_argument("--program", required=True, help=".ktp file for the agent chef")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--tick-ms", type=int, default=150)
    serve.add_argument("--human-index", type=int, choices=(0, 1), default=0)
    serve.add_argument("--seed", type=int, default=0)
    serve.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    return parser


def _cmd_train(args) -> int:
    cfg = parse_config(Path(args.config).read_text()) if args.config else Config()
    cfg.seed = args.seed
    summary = train_run(args.layout, args.mode, cfg, args.out,
                        save_buffer=args.save_buffer)
    print(f"layout={summary['layout']} mode={summary['mode']} seed={summary['seed']}")
    print(f"final self-play eval reward: {summary['final_reward']:.1f}")
    print(f"artifacts written to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    labels, results = run_eval(args.programs, args.layouts, args.episodes,
                               args.seed, args.horizon, out_dir=args.out)
    for layout_name, matrix in results.items():
        print(f"== {layout_name} ==")
        width = max(len(l) for l in labels) + 2
        print(" " * width + "  ".join(f"{l:>10}" for l in labels))
        for label, row in zip(labels, matrix):
            print(f"{label:<{width}}" + "  ".join(f"{v:>10.2f}" for v in row))
    if args.out:
        print(f"CSV matrices written to {args.out}")
    return 0


def _cmd_inspect(args) -> int:
    print(inspect_report(args.run_dir), end="")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .dsl import parse_program
    from .layouts import resolve_layout
    from .server import create_app

    app = create_app(
        layout=resolve_layout(args.layout),
        program=parse_program(Path(args.program).read_text()),
        tick_ms=args.tick_ms,
        human_index=args.human_index,
        seed=args.seed,
        horizon=args.horizon,
    )
    uvicorn.run(app, host="127.0.0.1", port=args.port)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"train": _cmd_train, "eval": _cmd_eval,
               "inspect": _cmd_inspect, "serve": _cmd_serve}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
