/** Wire types for the play-server protocol, plus runtime guards.
 *
 * One JSON object per message. The client only ever sends action frames;
 * the server streams state snapshots and a final end frame.
 */

export const ENV_ACTIONS = ["up", "down", "left", "right", "noop", "interact"] as const;
export type EnvAction = (typeof ENV_ACTIONS)[number];

export interface ChefSnapshot {
  x: number;
  y: number;
  orientation: "up" | "down" | "left" | "right";
  held: "empty" | "onion" | "dish" | "soup";
}

export interface PotSnapshot {
  x: number;
  y: number;
  onions: number;
  cook_time: number;
}

export interface CounterSnapshot {
  x: number;
  y: number;
  item: "onion" | "dish" | "soup";
}

export interface StateMessage {
  type: "state";
  t: number;
  score: number;
  chefs: ChefSnapshot[];
  pots: PotSnapshot[];
  counters: CounterSnapshot[];
}

export interface EndMessage {
  type: "end";
  score: number;
  log: [EnvAction, EnvAction][];
}

export interface ErrorMessage {
  type: "error";
  detail: string;
}

export type ServerMessage = StateMessage | EndMessage | ErrorMessage;

export interface LayoutInfo {
  name: string;
  ascii: string;
  width: number;
  height: number;
  tick_ms: number;
  human_index: number;
  horizon: number;
}

export function isEnvAction(value: unknown): value is EnvAction {
  return typeof value === "string" && (ENV_ACTIONS as readonly string[]).includes(value);
}

export function actionFrame(value: EnvAction): string {
  return JSON.stringify({ type: "action", value });
}

/** Parse a raw server frame; returns null for anything malformed. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null || !("type" in data)) {
    return null;
  }
  const msg = data as Record<string, unknown>;
  switch (msg.type) {
    case "state":
      if (
        typeof msg.t === "number" &&
        typeof msg.score === "number" &&
        Array.isArray(msg.chefs) &&
        Array.isArray(msg.pots) &&
        Array.isArray(msg.counters)
      ) {
        return msg as unknown as StateMessage;
      }
      return null;
    case "end":
      if (typeof msg.score === "number" && Array.isArray(msg.log)) {
        return msg as unknown as EndMessage;
      }
      return null;
    case "error":
      if (typeof msg.detail === "string") {
        return msg as unknown as ErrorMessage;
      }
      return null;
    default:
      return null;
  }
}
