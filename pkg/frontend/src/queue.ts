/** Offline queue with at-least-once delivery.
 *
 * Entries stay queued until the server answers definitively; the service
 * rejects duplicates on answered_at, so re-posting after an uncertain
 * failure is safe (409 counts as delivered).
 */

import { PostResult } from "./api.js";
import { EmaEntry } from "./types.js";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface FlushOutcome {
  delivered: number;
  rejected: number;
  remaining: number;
}

export class OfflineQueue {
  constructor(
    private readonly storage: StorageLike,
    private readonly key = "moodwear-ema-queue",
  ) {}

  pending(): EmaEntry[] {
    const raw = this.storage.getItem(this.key);
    if (!raw) return [];
    return JSON.parse(raw) as EmaEntry[];
  }

  private save(entries: EmaEntry[]): void {
    if (entries.length === 0) this.storage.removeItem(this.key);
    else this.storage.setItem(this.key, JSON.stringify(entries));
  }

  enqueue(entry: EmaEntry): void {
    this.save([...this.pending(), entry]);
  }

  /** Post queued entries in order; stop at the first transport failure. */
  async flush(post: (entry: EmaEntry) => Promise<PostResult>): Promise<FlushOutcome> {
    const queue = this.pending();
    let delivered = 0;
    let rejected = 0;
    let index = 0;
    while (index < queue.length) {
      const result = await post(queue[index]);
      if (result === "offline") break;
      if (result === "rejected") rejected += 1;
      else delivered += 1;
      index += 1;
    }
    const remaining = queue.slice(index);
    this.save(remaining);
    return { delivered, rejected, remaining: remaining.length };
  }
}
