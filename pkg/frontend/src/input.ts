/** Keyboard handling: arrows move, space interacts.
 *
 * The latch mirrors the server's last-write-wins buffering: key events
 * overwrite the pending action, and the game loop drains at most one
 * action message per tick.
 */
import type { EnvAction } from "./protocol.js";

export const KEY_BINDINGS: Record<string, EnvAction> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
  " ": "interact",
  Space: "interact",
};

export function actionForKey(key: string): EnvAction | null {
  return KEY_BINDINGS[key] ?? null;
}

export class InputLatch {
  private pending: EnvAction | null = null;

  /** Record a key event; unknown keys are ignored. Last key wins. */
  press(key: string): boolean {
    const action = actionForKey(key);
    if (action === null) {
      return false;
    }
    this.pending = action;
    return true;
  }

  /** Consume the buffered action for this tick, if any. */
  drain(): EnvAction | null {
    const action = this.pending;
    this.pending = null;
    return action;
  }
}
