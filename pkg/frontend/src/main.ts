/** Entry point: fetch the layout, open the play socket, draw, forward keys. */
import { InputLatch } from "./input.js";
import { connect } from "./net.js";
import { actionFrame, type LayoutInfo, type StateMessage } from "./protocol.js";
import {
  boardOps,
  disconnectOverlay,
  endOverlay,
  snapshotOps,
  TILE,
  type DrawOp,
} from "./render.js";

const COLORS: Record<string, string> = {
  floor: "#e8dcc0",
  counter: "#9b8465",
  onionDispenser: "#d9a441",
  dishDispenser: "#8fb8d9",
  pot: "#4a4a4a",
  serving: "#7fb069",
  onion: "#e3b505",
  dish: "#f0f0f0",
  soup: "#c45b26",
};
const CHEF_COLORS = ["#3b6fb5", "#b5443b"];

function execute(ctx: CanvasRenderingContext2D, ops: DrawOp[]): void {
  for (const op of ops) {
    switch (op.kind) {
      case "tile": {
        ctx.fillStyle = COLORS[op.tile] ?? COLORS.floor;
        ctx.fillRect(op.x * TILE, op.y * TILE, TILE, TILE);
        ctx.strokeStyle = "rgba(0,0,0,0.15)";
        ctx.strokeRect(op.x * TILE, op.y * TILE, TILE, TILE);
        break;
      }
      case "item": {
        ctx.fillStyle = COLORS[op.item];
        ctx.beginPath();
        ctx.arc(op.x * TILE + TILE / 2, op.y * TILE + TILE / 2, TILE / 5, 0, Math.PI * 2);
        ctx.fill();
        break;
      }
      case "potFill": {
        const px = op.x * TILE;
        const py = op.y * TILE;
        ctx.fillStyle = op.ready ? COLORS.soup : "#666";
        ctx.fillRect(px + 8, py + 8, TILE - 16, TILE - 16);
        ctx.fillStyle = "#fff";
        ctx.font = "12px sans-serif";
        ctx.fillText(`${op.onions}/3`, px + 10, py + 22);
        ctx.fillStyle = "#7fb069";
        ctx.fillRect(px + 8, py + TILE - 14, (TILE - 16) * op.progress, 6);
        break;
      }
      case "chef": {
        const cx = op.x * TILE + TILE / 2;
        const cy = op.y * TILE + TILE / 2;
        ctx.fillStyle = CHEF_COLORS[op.index] ?? "#333";
        ctx.beginPath();
        ctx.arc(cx, cy, TILE / 3, 0, Math.PI * 2);
        ctx.fill();
        const d: Record<string, [number, number]> = {
          up: [0, -1], down: [0, 1], left: [-1, 0], right: [1, 0],
        };
        const [dx, dy] = d[op.orientation] ?? [0, 0];
        ctx.fillStyle = "#fff";
        ctx.beginPath();
        ctx.arc(cx + dx * TILE / 4, cy + dy * TILE / 4, TILE / 10, 0, Math.PI * 2);
        ctx.fill();
        if (op.held !== "empty") {
          ctx.fillStyle = COLORS[op.held] ?? "#000";
          ctx.beginPath();
          ctx.arc(cx, cy - TILE / 3, TILE / 7, 0, Math.PI * 2);
          ctx.fill();
        }
        break;
      }
      case "hud": {
        const hud = document.getElementById("hud");
        if (hud) {
          hud.textContent = `score ${op.score} · ${op.remaining} ticks left`;
        }
        break;
      }
      case "overlay": {
        const banner = document.getElementById("banner");
        if (banner) {
          banner.textContent = op.text;
          banner.style.display = "block";
        }
        break;
      }
    }
  }
}

async function start(): Promise<void> {
  const layout = (await (await fetch("/layout")).json()) as LayoutInfo;
  const canvas = document.getElementById("board") as HTMLCanvasElement;
  canvas.width = layout.width * TILE;
  canvas.height = layout.height * TILE;
  const ctx = canvas.getContext("2d")!;
  const board = boardOps(layout);
  const latch = new InputLatch();
  let lastState: StateMessage | null = null;

  document.addEventListener("keydown", (event) => {
    if (latch.press(event.key)) {
      event.preventDefault();
    }
  });

  const url = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/play`;
  const conn = connect(url, {
    onMessage: (msg) => {
      if (msg.type === "state") {
        lastState = msg;
        // one action message per tick, last key wins
        const action = latch.drain();
        if (action !== null) {
          conn.send(actionFrame(action));
        }
        execute(ctx, board);
        execute(ctx, snapshotOps(layout, msg));
      } else if (msg.type === "end") {
        execute(ctx, [endOverlay(msg.score)]);
      } else {
        console.warn("server error frame:", msg.detail);
      }
    },
    onDisconnect: () => {
      if (lastState === null || lastState.t < layout.horizon) {
        execute(ctx, [disconnectOverlay()]);
        setTimeout(() => location.reload(), 2000);
      }
    },
  });

  execute(ctx, board);
}

start();
