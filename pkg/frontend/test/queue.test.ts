import { describe, expect, it } from "vitest";

import { PostResult } from "../src/api.js";
import { OfflineQueue, StorageLike } from "../src/queue.js";
import { EmaEntry } from "../src/types.js";

function memoryStorage(): StorageLike {
  const map = new Map<string, string>();
  return {
    getItem: (k) => map.get(k) ?? null,
    setItem: (k, v) => void map.set(k, v),
    removeItem: (k) => void map.delete(k),
  };
}

function entry(answered: number): EmaEntry {
  return { scheduled_at: answered - 60, answered_at: answered, happiness: 2, activeness: 3 };
}

describe("OfflineQueue", () => {
  it("persists enqueued entries in order", () => {
    const queue = new OfflineQueue(memoryStorage());
    queue.enqueue(entry(1));
    queue.enqueue(entry(2));
    expect(queue.pending().map((e) => e.answered_at)).toEqual([1, 2]);
  });

  it("removes delivered entries and keeps the rest on transport failure", async () => {
    const queue = new OfflineQueue(memoryStorage());
    for (const t of [1, 2, 3]) queue.enqueue(entry(t));
    const results: PostResult[] = ["created", "offline"];
    const outcome = await queue.flush(async () => results.shift() ?? "offline");
    expect(outcome).toEqual({ delivered: 1, rejected: 0, remaining: 2 });
    expect(queue.pending().map((e) => e.answered_at)).toEqual([2, 3]);
  });

  it("treats duplicate rejection as delivered (at-least-once)", async () => {
    const queue = new OfflineQueue(memoryStorage());
    queue.enqueue(entry(1));
    const outcome = await queue.flush(async () => "duplicate");
    expect(outcome.delivered).toBe(1);
    expect(queue.pending()).toEqual([]);
  });

  it("redelivers on a later flush after an outage", async () => {
    const queue = new OfflineQueue(memoryStorage());
    queue.enqueue(entry(1));
    await queue.flush(async () => "offline");
    expect(queue.pending()).toHaveLength(1);
    const outcome = await queue.flush(async () => "created");
    expect(outcome.delivered).toBe(1);
    expect(queue.pending()).toEqual([]);
  });

  it("drops entries the server rejects outright", async () => {
    const queue = new OfflineQueue(memoryStorage());
    queue.enqueue(entry(1));
    const outcome = await queue.flush(async () => "rejected");
    expect(outcome.rejected).toBe(1);
    expect(queue.pending()).toEqual([]);
  });
});
