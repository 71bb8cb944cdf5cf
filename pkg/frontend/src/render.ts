/** Pure render-model construction: snapshot in, draw ops out.
 *
 * Nothing here touches the DOM, so the whole view logic is unit-testable;
 * the canvas adapter in main.ts just executes the op list. Every rendered
 * fact comes from the latest snapshot — there is no client-side simulation.
 */
import type { LayoutInfo, StateMessage } from "./protocol.js";

export const TILE = 48;

export type DrawOp =
  | { kind: "tile"; x: number; y: number; tile: string }
  | { kind: "chef"; x: number; y: number; orientation: string; held: string; index: number }
  | { kind: "item"; x: number; y: number; item: string }
  | { kind: "potFill"; x: number; y: number; onions: number; progress: number; ready: boolean }
  | { kind: "hud"; score: number; remaining: number }
  | { kind: "overlay"; text: string };

export const TILE_LEGEND: Record<string, string> = {
  X: "counter",
  O: "onionDispenser",
  D: "dishDispenser",
  P: "pot",
  S: "serving",
  " ": "floor",
  "1": "floor",
  "2": "floor",
};

export function layoutRows(layout: LayoutInfo): string[] {
  return layout.ascii.replace(/\n+$/, "").split("\n");
}

/** Static board ops (tiles only), derived once from the layout grid. */
export function boardOps(layout: LayoutInfo): DrawOp[] {
  const ops: DrawOp[] = [];
  layoutRows(layout).forEach((row, y) => {
    [...row].forEach((ch, x) => {
      ops.push({ kind: "tile", x, y, tile: TILE_LEGEND[ch] ?? "floor" });
    });
  });
  return ops;
}

/** Dynamic ops for one snapshot: chefs, counter items, pot state, HUD. */
export function snapshotOps(layout: LayoutInfo, state: StateMessage): DrawOp[] {
  const ops: DrawOp[] = [];
  for (const counter of state.counters) {
    ops.push({ kind: "item", x: counter.x, y: counter.y, item: counter.item });
  }
  for (const pot of state.pots) {
    ops.push({
      kind: "potFill",
      x: pot.x,
      y: pot.y,
      onions: pot.onions,
      progress: pot.cook_time / 20,
      ready: pot.onions === 3 && pot.cook_time === 20,
    });
  }
  state.chefs.forEach((chef, index) => {
    ops.push({
      kind: "chef",
      x: chef.x,
      y: chef.y,
      orientation: chef.orientation,
      held: chef.held,
      index,
    });
  });
  ops.push({ kind: "hud", score: state.score, remaining: layout.horizon - state.t });
  return ops;
}

export function endOverlay(score: number): DrawOp {
  return { kind: "overlay", text: `Episode over — final score ${score}` };
}

export function disconnectOverlay(): DrawOp {
  return { kind: "overlay", text: "Connection lost — reconnecting…" };
}
