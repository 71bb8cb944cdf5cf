import { describe, expect, it } from "vitest";
import { actionFrame, isEnvAction, parseServerMessage } from "../src/protocol.js";

describe("action frames", () => {
  it("serializes the six env actions", () => {
    expect(JSON.parse(actionFrame("up"))).toEqual({ type: "action", value: "up" });
    expect(JSON.parse(actionFrame("interact"))).toEqual({ type: "action", value: "interact" });
  });

  it("guards unknown action names", () => {
    expect(isEnvAction("up")).toBe(true);
    expect(isEnvAction("dance")).toBe(false);
    expect(isEnvAction(3)).toBe(false);
  });
});

describe("parseServerMessage", () => {
  const state = JSON.stringify({
    type: "state",
    t: 7,
    score: 20,
    chefs: [{ x: 1, y: 1, orientation: "up", held: "empty" }],
    pots: [{ x: 2, y: 0, onions: 3, cook_time: 12 }],
    counters: [],
  });

  it("accepts well-formed state frames", () => {
    const msg = parseServerMessage(state);
    expect(msg?.type).toBe("state");
    if (msg?.type === "state") {
      expect(msg.t).toBe(7);
      expect(msg.pots[0].cook_time).toBe(12);
    }
  });

  it("accepts end and error frames", () => {
    const end = parseServerMessage(JSON.stringify({ type: "end", score: 40, log: [] }));
    expect(end?.type).toBe("end");
    const err = parseServerMessage(JSON.stringify({ type: "error", detail: "nope" }));
    expect(err?.type).toBe("error");
  });

  it("rejects malformed frames", () => {
    expect(parseServerMessage("not json")).toBeNull();
    expect(parseServerMessage("42")).toBeNull();
    expect(parseServerMessage(JSON.stringify({ type: "state", t: "x" }))).toBeNull();
    expect(parseServerMessage(JSON.stringify({ type: "mystery" }))).toBeNull();
    expect(parseServerMessage(JSON.stringify({ type: "end", score: "high" }))).toBeNull();
  });
});
