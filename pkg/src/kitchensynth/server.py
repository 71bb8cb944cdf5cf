"""Lockstep game server: one human chef, one program-controlled chef.

The session is a fixed-rate loop over a single WebSocket: every tick it
consumes the most recent buffered human action (default noop, last write
wins), asks the program policy for the agent's action, advances the
simulator, and broadcasts a full-state snapshot. The final ``end`` frame
carries the score and the complete per-tick action log, which re-simulates
to the same score on any replica of the simulator.

Protocol (one JSON object per message):
  client -> server  {"type": "action", "value": "up|down|left|right|noop|interact"}
  server -> client  {"type": "state", "t": ..., "chefs": [...], "pots": [...],
                     "counters": [...], "score": ...}
                    {"type": "end", "score": ..., "log": [[human, agent], ...]}
                    {"type": "error", "detail": "..."}

``GET /layout`` returns the ASCII grid and session metadata.
"""
from __future__ import annotations

import asyncio
from pathlib import Path
from random import Random

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .dsl import Program
from .layouts import GridLayout, render_layout
from .rollout import ProgramPolicy
from .world import ACTIONS, DEFAULT_HORIZON, class_instances, reset, step

FRONTEND_DIR = Path(__file__).resolve().parents[2] / "frontend"


def replay_score(layout: GridLayout, log, horizon: int, human_index: int = 0) -> int:
    """Re-simulate a session's action log; returns the final score."""
    state = reset(layout, horizon=horizon)
    total = 0
    for human_action, agent_action in log:
        actions = [None, None]
        actions[human_index] = human_action
        actions[1 - human_index] = agent_action
        state, reward, _ = step(state, actions[0], actions[1])
        total += reward
    return total


def create_app(layout: GridLayout, program: Program, tick_ms: int = 150,
               human_index: int = 0, seed: int = 0,
               horizon: int = DEFAULT_HORIZON) -> FastAPI:
    app = FastAPI(title="kitchensynth play server")
    session = {"active": False}

    @app.get("/layout")
    def get_layout():
        return {
            "name": layout.name,
            "ascii": render_layout(layout),
            "width": layout.width,
            "height": layout.height,
            "tick_ms": tick_ms,
            "human_index": human_index,
            "horizon": horizon,
        }

    @app.websocket("/play")
    async def play(ws: WebSocket):
        await ws.accept()
        if session["active"]:
            await ws.send_json({"type": "error", "detail": "session in use"})
            await ws.close()
            return
        session["active"] = True
        try:
            await _run_session(ws)
        except WebSocketDisconnect:
            pass
        finally:
            session["active"] = False

    async def _run_session(ws: WebSocket):
        state = reset(layout, horizon=horizon)
        rng = Random(seed)
        policy = ProgramPolicy(program)
        agent_index = 1 - human_index
        pending = {"action": None}
        closed = asyncio.Event()

        async def reader():
            while not closed.is_set():
                try:
                    message = await ws.receive_json()
                except WebSocketDisconnect:
                    closed.set()
                    return
                except Exception:
                    closed.set()
                    return
                if (isinstance(message, dict) and message.get("type") == "action"
                        and message.get("value") in ACTIONS):
                    pending["action"] = message["value"]
                else:
                    await ws.send_json({"type": "error",
                                        "detail": "malformed message (ignored)"})

        reader_task = asyncio.create_task(reader())
        score = 0
        log = []
        try:
            for _ in range(horizon):
                if tick_ms:
                    await asyncio.sleep(tick_ms / 1000)
                else:
                    await asyncio.sleep(0)
                if closed.is_set():
                    return
                human_action = pending["action"] or "noop"
                pending["action"] = None
                instances = class_instances(state)
                agent_action, _ = policy.act(state, agent_index, instances, rng)
                actions = [None, None]
                actions[human_index] = human_action
                actions[agent_index] = agent_action
                state, reward, _ = step(state, actions[0], actions[1])
                score += reward
                log.append([human_action, agent_action])
                snapshot = state.to_dict()
                snapshot.pop("layout", None)
                snapshot.pop("horizon", None)
                await ws.send_json({"type": "state", "score": score, **snapshot})
            await ws.send_json({"type": "end", "score": score, "log": log})
            await ws.close()
        finally:
            closed.set()
            reader_task.cancel()

    dist = FRONTEND_DIR / "dist"
    if dist.is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=FRONTEND_DIR, html=True), name="ui")
    return app
