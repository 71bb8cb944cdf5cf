import { describe, expect, it } from "vitest";
import { actionForKey, InputLatch } from "../src/input.js";

describe("key bindings", () => {
  it("maps arrows and space onto env actions", () => {
    expect(actionForKey("ArrowUp")).toBe("up");
    expect(actionForKey("ArrowLeft")).toBe("left");
    expect(actionForKey(" ")).toBe("interact");
  });

  it("ignores unbound keys", () => {
    expect(actionForKey("q")).toBeNull();
    expect(actionForKey("Enter")).toBeNull();
  });
});

describe("InputLatch", () => {
  it("delivers at most one action per drain", () => {
    const latch = new InputLatch();
    expect(latch.press("ArrowUp")).toBe(true);
    expect(latch.drain()).toBe("up");
    expect(latch.drain()).toBeNull();
  });

  it("last key within a tick wins", () => {
    const latch = new InputLatch();
    latch.press("ArrowUp");
    latch.press("ArrowDown");
    latch.press(" ");
    expect(latch.drain()).toBe("interact");
    expect(latch.drain()).toBeNull();
  });

  it("no key means no message", () => {
    const latch = new InputLatch();
    expect(latch.drain()).toBeNull();
  });

  it("unbound keys do not clobber the pending action", () => {
    const latch = new InputLatch();
    latch.press("ArrowRight");
    expect(latch.press("z")).toBe(false);
    expect(latch.drain()).toBe("right");
  });
});
